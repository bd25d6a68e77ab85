#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "motifmine/graph.hpp"
#include "motifmine/random.hpp"

namespace motifmine {

enum class Topology { barbell, clique, star, wheel, random };

std::string_view to_string(Topology t);
/// Throws ConfigError for unknown names.
Topology parse_topology(std::string_view name);

/// G(n, p): every pair is an edge independently with probability p.
Graph erdos_renyi(std::size_t n, double p, Rng& rng);

/// Motif template of the given topology.
///
///   clique   complete graph on `size` nodes
///   star     one hub + size-1 leaves
///   wheel    cycle on size-1 nodes + hub adjacent to all of them
///   barbell  two cliques of size/2 joined by one bridge edge (even size >= 4)
///   random   G(size, 0.5) redrawn until connected
///
/// Throws InvalidSize when the combination cannot be built.
Graph make_motif(Topology topology, std::size_t size, Rng& rng);

/// Node mask marking motif membership, one byte per node.
using NodeMask = std::vector<std::uint8_t>;

struct PlantResult {
  Graph graph;
  NodeMask mask;  // marks exactly the inserted motif nodes
  /// old host index -> new index; `kDeleted` for the removed host node.
  std::vector<std::size_t> host_to_new;

  static constexpr std::size_t kDeleted = static_cast<std::size_t>(-1);
};

/// Deletes one uniformly chosen host node and inserts `motif` intact in its
/// place. Each (motif node, surviving host node) pair becomes an edge with
/// probability p_connect. Host nodes flagged in `protect` are never chosen for
/// deletion; if every node is protected a ConfigError is thrown. Surviving host
/// nodes keep their relative order and the motif nodes are appended.
PlantResult plant_motif(const Graph& host, const Graph& motif, double p_connect, Rng& rng,
                        const NodeMask& protect = {});

/// Distorts the motif occupying `mask`. Each motif-internal edge is,
/// independently with probability epsilon, deleted and replaced:
///   1. by a uniformly drawn absent pair inside the mask (other than the
///      deleted pair) whose addition leaves the motif connected;
///   2. failing that (saturated motifs such as cliques), by an absent pair
///      joining one endpoint of the deleted edge to a node outside the mask,
///      provided the motif stays connected without the deleted edge;
///   3. failing both, the edge is left in place.
/// Edges not fully inside the mask are never removed.
Graph distort(const Graph& g, const NodeMask& mask, double epsilon, Rng& rng);

/// Degree-preserving randomization by double edge swaps:
/// (a,b),(c,d) -> (a,d),(c,b), rejecting swaps that would create self loops or
/// duplicate edges. `n_swaps` swaps are attempted.
Graph rewire_null(const Graph& g, std::size_t n_swaps, Rng& rng);

}  // namespace motifmine
