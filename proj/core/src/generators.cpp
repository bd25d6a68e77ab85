#include "motifmine/generators.hpp"

#include <algorithm>
#include <string>

#include "motifmine/errors.hpp"

namespace motifmine {

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::barbell: return "barbell";
    case Topology::clique: return "clique";
    case Topology::star: return "star";
    case Topology::wheel: return "wheel";
    case Topology::random: return "random";
  }
  return "unknown";
}

Topology parse_topology(std::string_view name) {
  for (Topology t : {Topology::barbell, Topology::clique, Topology::star, Topology::wheel,
                     Topology::random}) {
    if (to_string(t) == name) return t;
  }
  throw ConfigError("unknown topology '" + std::string(name) + "'");
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

void add_clique(Graph& g, NodeId first, std::size_t count) {
  for (NodeId i = first; i < first + count; ++i) {
    for (NodeId j = i + 1; j < first + count; ++j) g.add_edge(i, j);
  }
}

}  // namespace

Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
  if (n < 1) throw ConfigError("erdos_renyi requires n >= 1");
  check_probability(p, "edge probability");
  Graph g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) g.add_edge(u, v);
    }
  }
  return g;
}

Graph make_motif(Topology topology, std::size_t size, Rng& rng) {
  if (size < 3) throw InvalidSize("motif size must be >= 3, got " + std::to_string(size));
  Graph g(size);
  switch (topology) {
    case Topology::clique:
      add_clique(g, 0, size);
      break;
    case Topology::star:
      for (NodeId leaf = 1; leaf < size; ++leaf) g.add_edge(0, leaf);
      break;
    case Topology::wheel:
      if (size < 4) throw InvalidSize("wheel needs size >= 4 (a cycle needs 3 rim nodes)");
      for (NodeId i = 1; i < size; ++i) {
        g.add_edge(0, i);
        g.add_edge(i, i + 1 < size ? i + 1 : 1);
      }
      break;
    case Topology::barbell: {
      if (size < 4 || size % 2 != 0) {
        throw InvalidSize("barbell needs an even size >= 4, got " + std::to_string(size));
      }
      const std::size_t half = size / 2;
      add_clique(g, 0, half);
      add_clique(g, half, half);
      g.add_edge(half - 1, half);
      break;
    }
    case Topology::random:
      do {
        g = erdos_renyi(size, 0.5, rng);
      } while (!g.is_connected());
      break;
  }
  return g;
}

PlantResult plant_motif(const Graph& host, const Graph& motif, double p_connect, Rng& rng,
                        const NodeMask& protect) {
  if (host.num_nodes() < 1) throw ConfigError("plant_motif requires a non-empty host");
  check_probability(p_connect, "p_connect");

  std::vector<NodeId> candidates;
  for (NodeId u = 0; u < host.num_nodes(); ++u) {
    if (protect.empty() || !protect[u]) candidates.push_back(u);
  }
  if (candidates.empty()) throw ConfigError("no unprotected host node left to replace");
  const NodeId deleted = candidates[rng.below(candidates.size())];

  PlantResult out;
  out.host_to_new.assign(host.num_nodes(), PlantResult::kDeleted);
  std::size_t next = 0;
  for (NodeId u = 0; u < host.num_nodes(); ++u) {
    if (u != deleted) out.host_to_new[u] = next++;
  }
  const std::size_t survivors = next;
  const std::size_t total = survivors + motif.num_nodes();

  out.graph = Graph(total);
  for (const Edge& e : host.edges()) {
    if (e.u == deleted || e.v == deleted) continue;
    out.graph.add_edge(out.host_to_new[e.u], out.host_to_new[e.v]);
  }
  for (const Edge& e : motif.edges()) out.graph.add_edge(survivors + e.u, survivors + e.v);
  for (NodeId m = 0; m < motif.num_nodes(); ++m) {
    for (NodeId h = 0; h < survivors; ++h) {
      if (rng.bernoulli(p_connect)) out.graph.add_edge(h, survivors + m);
    }
  }
  out.mask.assign(total, 0);
  for (NodeId m = 0; m < motif.num_nodes(); ++m) out.mask[survivors + m] = 1;
  return out;
}

Graph distort(const Graph& g, const NodeMask& mask, double epsilon, Rng& rng) {
  check_probability(epsilon, "distortion probability");
  if (mask.size() != g.num_nodes()) throw DimensionMismatch("mask size does not match graph");
  std::vector<NodeId> members;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (mask[u]) members.push_back(u);
  }
  if (members.empty()) throw ConfigError("distort requires a non-empty mask");

  Graph out = g;
  std::vector<Edge> internal;
  for (const Edge& e : g.edges()) {
    if (mask[e.u] && mask[e.v]) internal.push_back(e);
  }

  for (const Edge& e : internal) {
    if (!rng.bernoulli(epsilon)) continue;
    if (!out.has_edge(e.u, e.v)) continue;  // already moved by an earlier replacement
    out.remove_edge(e.u, e.v);

    std::vector<Edge> inside;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const Edge cand{members[i], members[j]};
        if (cand == e || out.has_edge(cand.u, cand.v)) continue;
        out.add_edge(cand.u, cand.v);
        if (induces_connected(out, members)) inside.push_back(cand);
        out.remove_edge(cand.u, cand.v);
      }
    }
    if (!inside.empty()) {
      const Edge pick = inside[rng.below(inside.size())];
      out.add_edge(pick.u, pick.v);
      continue;
    }

    std::vector<Edge> outward;
    if (induces_connected(out, members)) {
      for (NodeId end : {e.u, e.v}) {
        for (NodeId w = 0; w < out.num_nodes(); ++w) {
          if (!mask[w] && !out.has_edge(end, w)) outward.push_back({std::min(end, w), std::max(end, w)});
        }
      }
    }
    if (!outward.empty()) {
      const Edge pick = outward[rng.below(outward.size())];
      out.add_edge(pick.u, pick.v);
    } else {
      out.add_edge(e.u, e.v);
    }
  }
  return out;
}

Graph rewire_null(const Graph& g, std::size_t n_swaps, Rng& rng) {
  Graph out = g;
  std::vector<Edge> edges = g.edges();
  if (edges.size() < 2) return out;
  for (std::size_t attempt = 0; attempt < n_swaps; ++attempt) {
    const std::size_t i = rng.below(edges.size());
    const std::size_t j = rng.below(edges.size());
    if (i == j) continue;
    NodeId a = edges[i].u, b = edges[i].v;
    NodeId c = edges[j].u, d = edges[j].v;
    if (rng.bernoulli(0.5)) std::swap(c, d);
    if (a == d || c == b || a == c || b == d) continue;
    if (out.has_edge(a, d) || out.has_edge(c, b)) continue;
    out.remove_edge(a, b);
    out.remove_edge(c, d);
    out.add_edge(a, d);
    out.add_edge(c, b);
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
  }
  return out;
}

}  // namespace motifmine
