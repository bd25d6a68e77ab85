#include "motifmine/dataset.hpp"

#include <fstream>
#include <sstream>

#include "motifmine/errors.hpp"

namespace motifmine {

bool AssignmentMatrix::valid() const {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = values.data()[i];
    if (!(x >= 0.0 && x <= 1.0)) return false;
    if (hard && x != 0.0 && x != 1.0) return false;
  }
  return true;
}

AssignmentMatrix AssignmentMatrix::padded(std::size_t motifs) const {
  AssignmentMatrix out(nodes(), std::max(motifs, this->motifs()), hard);
  out.values.leftCols(values.cols()) = values;
  return out;
}

void MotifSpec::validate() const {
  if (size < 3) throw InvalidSize("motif size must be >= 3");
  if (count < 1) throw ConfigError("motif count must be >= 1");
  if (!(concentration >= 0.0 && concentration <= 1.0)) {
    throw ConfigError("concentration must lie in [0,1]");
  }
  if (!(distortion >= 0.0 && distortion <= 1.0)) {
    throw ConfigError("distortion must lie in [0,1]");
  }
  if (topology == Topology::barbell && (size < 4 || size % 2 != 0)) {
    throw InvalidSize("barbell needs an even size >= 4");
  }
  if (topology == Topology::wheel && size < 4) throw InvalidSize("wheel needs size >= 4");
}

bool DatasetBundle::has_motif(std::size_t i) const { return truth.at(i).values.sum() > 0.0; }

void DatasetBundle::validate() const {
  if (graphs.size() != truth.size() || graphs.size() != nulls.size()) {
    throw ConfigError("graphs, truth and nulls must have equal length");
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    if (truth[i].nodes() != g.num_nodes() || truth[i].motifs() != spec.count) {
      throw ConfigError("truth matrix " + std::to_string(i) + " has the wrong shape");
    }
    if (nulls[i].num_nodes() != g.num_nodes()) {
      throw ConfigError("null twin " + std::to_string(i) + " has a different node count");
    }
    if (!truth[i].valid() || !truth[i].hard) {
      throw ConfigError("truth matrix " + std::to_string(i) + " is not binary");
    }
  }
}

std::vector<Graph> motif_templates(const MotifSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<Graph> out;
  out.reserve(spec.count);
  for (std::size_t j = 0; j < spec.count; ++j) {
    Rng rng = Rng::derive(seed, {0x6d6f746966ULL, j});
    out.push_back(make_motif(spec.topology, spec.size, rng));
  }
  return out;
}

namespace {

struct GeneratedGraph {
  Graph graph;
  AssignmentMatrix truth;
  Graph null;
};

GeneratedGraph generate_one(const MotifSpec& spec, const std::vector<Graph>& templates,
                            std::uint64_t seed, std::size_t index) {
  Rng rng = Rng::derive(seed, {index});
  Graph g = erdos_renyi(2 * spec.size * spec.count, kHostEdgeProbability, rng);

  std::vector<NodeMask> masks(spec.count);
  NodeMask taken(g.num_nodes(), 0);
  for (std::size_t j = 0; j < spec.count; ++j) {
    if (!rng.bernoulli(spec.concentration)) continue;
    PlantResult planted = plant_motif(g, templates[j], kHostEdgeProbability, rng, taken);
    auto remap = [&](const NodeMask& old) {
      NodeMask fresh(planted.graph.num_nodes(), 0);
      for (NodeId u = 0; u < old.size(); ++u) {
        if (old[u] && planted.host_to_new[u] != PlantResult::kDeleted) {
          fresh[planted.host_to_new[u]] = 1;
        }
      }
      return fresh;
    };
    for (std::size_t prev = 0; prev < j; ++prev) {
      if (!masks[prev].empty()) masks[prev] = remap(masks[prev]);
    }
    taken = remap(taken);
    for (NodeId u = 0; u < planted.mask.size(); ++u) taken[u] |= planted.mask[u];
    masks[j] = std::move(planted.mask);
    g = std::move(planted.graph);
  }

  for (const NodeMask& mask : masks) {
    if (!mask.empty() && spec.distortion > 0.0) g = distort(g, mask, spec.distortion, rng);
  }

  GeneratedGraph out;
  out.truth = AssignmentMatrix(g.num_nodes(), spec.count);
  for (std::size_t j = 0; j < spec.count; ++j) {
    for (NodeId u = 0; u < masks[j].size(); ++u) {
      if (masks[j][u]) out.truth.values(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(j)) = 1.0;
    }
  }
  out.null = rewire_null(g, 10 * g.num_edges(), rng);
  out.graph = std::move(g);
  return out;
}

}  // namespace

DatasetBundle build_dataset(const MotifSpec& spec, std::size_t n_graphs, std::uint64_t seed,
                            std::size_t jobs) {
  const std::vector<Graph> templates = motif_templates(spec, seed);
  std::vector<GeneratedGraph> generated(n_graphs);
  parallel_for(n_graphs, jobs,
               [&](std::size_t i) { generated[i] = generate_one(spec, templates, seed, i); });

  DatasetBundle bundle;
  bundle.spec = spec;
  bundle.seed = seed;
  for (auto& item : generated) {
    bundle.graphs.push_back(std::move(item.graph));
    bundle.truth.push_back(std::move(item.truth));
    bundle.nulls.push_back(std::move(item.null));
  }
  return bundle;
}

nlohmann::json to_json(const MotifSpec& spec) {
  return {{"topology", std::string(to_string(spec.topology))},
          {"size", spec.size},
          {"count", spec.count},
          {"concentration", spec.concentration},
          {"distortion", spec.distortion}};
}

MotifSpec motif_spec_from_json(const nlohmann::json& j) {
  MotifSpec spec;
  spec.topology = parse_topology(j.at("topology").get<std::string>());
  spec.size = j.at("size").get<std::size_t>();
  spec.count = j.at("count").get<std::size_t>();
  spec.concentration = j.at("concentration").get<double>();
  spec.distortion = j.at("distortion").get<double>();
  spec.validate();
  return spec;
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.num_nodes()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& pair : j.at("edges")) {
    if (!pair.is_array() || pair.size() != 2) throw ConfigError("edge entries must be [u, v] pairs");
    const auto u = pair[0].get<std::size_t>();
    const auto v = pair[1].get<std::size_t>();
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return Graph::from_edges(n, edges);
}

nlohmann::json to_json(const DatasetBundle& bundle) {
  nlohmann::json graphs = nlohmann::json::array();
  nlohmann::json nulls = nlohmann::json::array();
  nlohmann::json truth = nlohmann::json::array();
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    graphs.push_back(graph_to_json(bundle.graphs[i]));
    nulls.push_back(graph_to_json(bundle.nulls[i]));
    nlohmann::json flat = nlohmann::json::array();
    const auto& y = bundle.truth[i].values;
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      for (Eigen::Index c = 0; c < y.cols(); ++c) flat.push_back(y(r, c) > 0.5 ? 1 : 0);
    }
    truth.push_back(std::move(flat));
  }
  return {{"spec", to_json(bundle.spec)},
          {"seed", bundle.seed},
          {"graphs", std::move(graphs)},
          {"truth", std::move(truth)},
          {"nulls", std::move(nulls)}};
}

DatasetBundle dataset_from_json(const nlohmann::json& j) {
  DatasetBundle bundle;
  try {
    bundle.spec = motif_spec_from_json(j.at("spec"));
    bundle.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& g : j.at("graphs")) bundle.graphs.push_back(graph_from_json(g));
    for (const auto& g : j.at("nulls")) bundle.nulls.push_back(graph_from_json(g));
    const auto& truth = j.at("truth");
    if (truth.size() != bundle.graphs.size()) throw ConfigError("truth length mismatch");
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const std::size_t n = bundle.graphs[i].num_nodes();
      const std::size_t k = bundle.spec.count;
      if (truth[i].size() != n * k) {
        throw ConfigError("truth entry " + std::to_string(i) + " has wrong length");
      }
      AssignmentMatrix y(n, k);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
          y.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              truth[i][r * k + c].get<double>();
        }
      }
      bundle.truth.push_back(std::move(y));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed dataset JSON: ") + e.what());
  }
  bundle.validate();
  return bundle;
}

void save_dataset(const DatasetBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open " + path + " for writing");
  out << to_json(bundle).dump() << '\n';
}

DatasetBundle load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return dataset_from_json(j);
}

}  // namespace motifmine
