#include "cli.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <motifmine/motifmine.hpp>

namespace motifmine::cli {
namespace {

using nlohmann::json;

// Options that never change a result and so stay out of the echoed config.
const std::set<std::string> kNotEchoed{"jobs", "config", "out", "log", "assign-out", "csv", "help"};

std::string env_name(const std::string& option) {
  std::string s = "MOTIFMINE_";
  for (char c : option) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void bind_env(CLI::App& sub) {
  for (CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help") continue;
    opt->envname(env_name(names.front()));
  }
}

// Resolved option values of a subcommand, defaults included.
json echo(const CLI::App& sub) {
  json options = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || kNotEchoed.contains(names.front())) continue;
    const std::vector<std::string>& given = opt->results();
    if (opt->get_type_size_max() == 0) {
      options[names.front()] = opt->count() > 0;
    } else if (given.empty()) {
      options[names.front()] = opt->get_default_str();
    } else if (given.size() == 1 && opt->get_items_expected_max() <= 1) {
      options[names.front()] = given.front();
    } else {
      options[names.front()] = given;
    }
  }
  return {{"command", sub.get_name()}, {"options", options}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw RuntimeFailure("cannot open " + path + " for writing");
  f << text;
  if (!f) throw RuntimeFailure("failed writing " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump() + '\n'); }

json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

// CSV outputs carry the echoed config as leading '#' lines.
std::string csv_preamble(const json& cfg) {
  std::string s = "# command=" + cfg.at("command").get<std::string>() + '\n';
  for (const auto& [k, v] : cfg.at("options").items()) {
    s += "# " + k + '=' + (v.is_string() ? v.get<std::string>() : v.dump()) + '\n';
  }
  return s;
}

struct GenerateArgs {
  std::string topology = "clique";
  std::size_t size = 5;
  std::size_t k = 1;
  double concentration = 1.0;
  double epsilon = 0.0;
  std::size_t n = 1000;
  std::uint64_t seed = 7;
  std::string out;
};

struct TrainArgs {
  std::string data, out, log;
  MinerConfig config;
  std::string delta_sign = "prose";
  std::string delta_mode = "log_ratio";
};

struct DecodeArgs {
  std::string model, data, out;
  GridSpec grid;
};

struct EvalArgs {
  std::string assign, data, model, dummy_assign, out, csv, condition;
  std::uint64_t seed = 0;
};

struct BaselineArgs {
  std::string data, out, assign_out;
  ExactConfig config;
};

struct AblateArgs {
  std::string model, data, out;
  std::vector<std::string> ks{"1", "2", "5", "all"};
  std::uint64_t seed = 0;
  LogisticConfig logistic;
};

int do_generate(const GenerateArgs& a, const json& cfg, std::size_t jobs, std::ostream& out) {
  MotifSpec spec{parse_topology(a.topology), a.size, a.k, a.concentration, a.epsilon};
  const DatasetBundle data = build_dataset(spec, a.n, a.seed, jobs);
  json j = to_json(data);
  j["cli"] = cfg;
  write_json(a.out, j);
  out << "wrote " << data.size() << " graphs to " << a.out << '\n';
  return kExitOk;
}

int do_train(TrainArgs a, const json& cfg, std::size_t jobs, std::ostream& out, std::ostream& err) {
  a.config.delta_sign = parse_delta_sign(a.delta_sign);
  a.config.delta_mode = parse_delta_mode(a.delta_mode);
  a.config.validate();
  const DatasetBundle data = load_dataset(a.data);
  const TrainResult r = train(data, a.config, jobs);
  json j = to_json(r);
  j["cli"] = cfg;
  write_json(a.out, j);
  if (!a.log.empty()) write_text(a.log, trace_csv(r.trace));
  if (r.trace.diverged) {
    err << "training diverged after " << r.trace.rep_loss.size() << " epochs\n";
    return kExitRuntime;
  }
  out << "trained " << r.trace.rep_loss.size() << " epochs";
  if (!r.trace.rep_loss.empty()) {
    out << ", final L_rep=" << r.trace.rep_loss.back() << " L_conc=" << r.trace.conc_loss.back();
  }
  out << '\n';
  return kExitOk;
}

int do_decode(const DecodeArgs& a, const json& cfg, std::size_t jobs, std::ostream& out) {
  const TrainResult model = load_model(a.model);
  const DatasetBundle data = load_dataset(a.data);
  const GridResult g = decode_grid_search(model.model, data, a.grid, jobs);
  json entries = json::array();
  for (const GridEntry& e : g.entries) {
    entries.push_back({{"layer", e.config.layer},
                       {"bits", e.config.bits},
                       {"rank", e.config.rank},
                       {"mean", e.mean},
                       {"std", e.std}});
  }
  const json config = {{"cli", cfg},
                       {"model_config_hash", config_hash(model.model.config)},
                       {"dummy", model.model.config.dummy},
                       {"layer", g.best.layer},
                       {"bits", g.best.bits},
                       {"rank", g.best.rank},
                       {"min_support", g.best.min_support},
                       {"repetitions", a.grid.repetitions},
                       {"seed", a.grid.seed},
                       {"score", g.score},
                       {"score_std", g.score_std},
                       {"grid", entries}};
  write_json(a.out, assignments_to_json(g.assignments, config));
  out << "best layer=" << g.best.layer << " bits=" << g.best.bits << " rank=" << g.best.rank
      << " M-Jaccard=" << g.score << " +- " << g.score_std << '\n';
  return kExitOk;
}

EvalReport eval_file(const std::string& path, const DatasetBundle& data) {
  const json j = read_json(path);
  const std::vector<AssignmentMatrix> pred = assignments_from_json(j);
  EvalReport r = evaluate(pred, data.truth);
  if (j.contains("config")) r.config = j.at("config");
  return r;
}

int do_eval(const EvalArgs& a, const json& cfg, std::size_t jobs, std::ostream& out) {
  const DatasetBundle data = load_dataset(a.data);
  EvalReport r = eval_file(a.assign, data);
  json source = r.config;
  r.config = {{"cli", cfg}, {"assignment_config", source}};
  if (!a.model.empty()) {
    const TrainResult m = load_model(a.model);
    const DatasetLayers layers = forward_dataset(m.model, data.graphs, a.seed, jobs);
    r.auc = sigma_separation(layers, data.truth).auc;
  }
  write_json(a.out, to_json(r));
  std::optional<EvalReport> dummy;
  if (!a.dummy_assign.empty()) dummy = eval_file(a.dummy_assign, data);
  if (!a.csv.empty()) {
    const std::string condition = a.condition.empty() ? std::string(to_string(data.spec.topology)) : a.condition;
    write_text(a.csv, csv_preamble(cfg) + summary_csv_header() +
                          summary_csv_row(condition, data.spec.distortion, r, dummy));
  }
  out << "M-Jaccard=" << r.mean << " +- " << r.std;
  if (r.auc) out << " sigma AUC=" << *r.auc;
  if (dummy) out << " (dummy " << dummy->mean << " +- " << dummy->std << ")";
  out << '\n';
  return kExitOk;
}

int do_baseline(const BaselineArgs& a, const json& cfg, std::size_t jobs, std::ostream& out) {
  const DatasetBundle data = load_dataset(a.data);
  const ExactResult r = exact_mine(data, a.config, jobs);
  write_text(a.out, csv_preamble(cfg) + classes_csv(r.classes));
  const EvalReport rep = evaluate(r.assignments, data.truth);
  if (!a.assign_out.empty()) {
    write_json(a.assign_out, assignments_to_json(r.assignments, {{"cli", cfg}, {"method", "exact"}}));
  }
  out << r.classes.size() << " classes above c=" << a.config.c << ", M-Jaccard=" << rep.mean << " +- " << rep.std
      << '\n';
  return kExitOk;
}

int do_ablate(const AblateArgs& a, const json& cfg, std::size_t jobs, std::ostream& out) {
  std::vector<std::size_t> ks;
  for (const std::string& k : a.ks) {
    if (k == "all") {
      ks.push_back(0);
      continue;
    }
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(k, &used);
      if (used != k.size() || v == 0) throw std::invalid_argument(k);
      ks.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--ks entries must be positive integers or 'all', got '" + k + "'");
    }
  }
  const TrainResult m = load_model(a.model);
  const DatasetBundle data = load_dataset(a.data);
  const std::vector<AblationRow> rows = ablation_study(m.model, data, ks, a.seed, a.logistic, jobs);
  write_text(a.out, csv_preamble(cfg) + ablation_csv(rows));
  for (std::size_t k : ks) {
    out << "k=" << (k == 0 ? std::string("all") : std::to_string(k))
        << " top=" << mean_accuracy(rows, k, Selection::top)
        << " random=" << mean_accuracy(rows, k, Selection::random) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate network motif mining on synthetic graph datasets"};
  app.name("motifmine");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "TOML file with option values ([subcommand] sections)");
  std::size_t jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for per-graph work")
      ->check(CLI::PositiveNumber)
      ->envname("MOTIFMINE_JOBS");

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "Build a synthetic dataset with planted motifs");
  g->add_option("--topology", gen.topology, "barbell, clique, star, wheel or random");
  g->add_option("--size", gen.size, "Motif node count");
  g->add_option("--k", gen.k, "Number of distinct motifs");
  g->add_option("--concentration", gen.concentration, "Fraction of graphs holding each motif");
  g->add_option("--epsilon", gen.epsilon, "Per-edge distortion probability");
  g->add_option("--n", gen.n, "Number of graphs");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Dataset JSON")->required();

  TrainArgs tr;
  CLI::App* t = app.add_subcommand("train", "Train the contraction model");
  t->add_option("--data", tr.data, "Dataset JSON")->required();
  t->add_option("--layers", tr.config.layers, "Pooling layers");
  t->add_option("--dim", tr.config.dim, "Embedding size");
  t->add_option("--hidden", tr.config.hidden, "Hidden width of every MLP");
  t->add_option("--beta", tr.config.beta);
  t->add_option("--lambda", tr.config.lambda);
  t->add_option("--k-nn", tr.config.k_nn, "Neighbours for the density estimate");
  t->add_option("--gamma", tr.config.kernel.gamma, "Kernel similarity scale");
  t->add_option("--wl-iterations", tr.config.kernel.iterations);
  t->add_option("--delta-sign", tr.delta_sign, "prose or paper");
  t->add_option("--delta-mode", tr.delta_mode, "log_ratio or difference");
  t->add_option("--rep-pairs", tr.config.rep_pairs, "Sampled pairs per layer per batch");
  t->add_option("--batch-size", tr.config.batch_size);
  t->add_option("--epochs", tr.config.epochs);
  t->add_option("--lr", tr.config.learning_rate);
  t->add_option("--seed", tr.config.seed);
  t->add_flag("--dummy", tr.config.dummy, "Fix every score at 0.5 (control model)");
  t->add_option("--out", tr.out, "Model JSON")->required();
  t->add_option("--log", tr.log, "Per-epoch loss CSV");

  DecodeArgs de;
  CLI::App* d = app.add_subcommand("decode", "Grid-search LSH decoding against the dataset truth");
  d->add_option("--model", de.model)->required();
  d->add_option("--data", de.data)->required();
  d->add_option("--hash-sizes", de.grid.bits)->delimiter(',');
  d->add_option("--layers", de.grid.layers)->delimiter(',');
  d->add_option("--ranks", de.grid.ranks, "Columns kept; defaults to the truth column count")->delimiter(',');
  d->add_option("--repetitions", de.grid.repetitions);
  d->add_option("--min-support", de.grid.min_support, "Fraction of graphs a bucket must appear in");
  d->add_option("--seed", de.grid.seed);
  d->add_option("--out", de.out, "Assignment JSON")->required();

  EvalArgs ev;
  CLI::App* e = app.add_subcommand("eval", "Score assignments with M-Jaccard");
  e->add_option("--assign", ev.assign)->required();
  e->add_option("--data", ev.data)->required();
  e->add_option("--model", ev.model, "Also report the sigma AUC of this model");
  e->add_option("--dummy-assign", ev.dummy_assign, "Control assignments for the summary row");
  e->add_option("--condition", ev.condition, "Summary row label; defaults to the topology");
  e->add_option("--seed", ev.seed);
  e->add_option("--out", ev.out, "Report JSON")->required();
  e->add_option("--csv", ev.csv, "Summary CSV");

  BaselineArgs ba;
  CLI::App* b = app.add_subcommand("baseline", "Exact enumeration baseline");
  b->add_option("--data", ba.data)->required();
  b->add_option("--k", ba.config.k, "Subgraph size");
  b->add_option("--c", ba.config.c, "Concentration threshold");
  b->add_option("--columns", ba.config.columns, "Classes kept as columns; 0 uses the dataset's K");
  b->add_option("--max-subgraphs", ba.config.max_subgraphs);
  b->add_option("--out", ba.out, "Class CSV")->required();
  b->add_option("--assign-out", ba.assign_out, "Assignment JSON");

  AblateArgs ab;
  CLI::App* a = app.add_subcommand("ablate", "Top-k versus random-k spotlight classification");
  a->add_option("--model", ab.model)->required();
  a->add_option("--data", ab.data, "Dataset whose labels are motif presence")->required();
  a->add_option("--ks", ab.ks)->delimiter(',');
  a->add_option("--seed", ab.seed);
  a->add_option("--folds", ab.logistic.folds);
  a->add_option("--classifier-epochs", ab.logistic.epochs);
  a->add_option("--out", ab.out, "Ablation CSV")->required();

  for (CLI::App* sub : {g, t, d, e, b, a}) bind_env(*sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (g->parsed()) return do_generate(gen, echo(*g), jobs, out);
    if (t->parsed()) return do_train(tr, echo(*t), jobs, out, err);
    if (d->parsed()) return do_decode(de, echo(*d), jobs, out);
    if (e->parsed()) return do_eval(ev, echo(*e), jobs, out);
    if (b->parsed()) return do_baseline(ba, echo(*b), jobs, out);
    if (a->parsed()) return do_ablate(ab, echo(*a), jobs, out);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace motifmine::cli
