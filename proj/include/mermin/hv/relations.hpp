#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

namespace mermin::hv {

// A family of hidden variables attached to one quantum system. Partitioned
// sets carry exactly the blocks "+" and "-"; unpartitioned sets the single
// block "*". Relations are drawn between blocks, never inside a set.
struct HvSet {
    std::string name;
    std::vector<std::string> blocks;

    bool partitioned() const { return blocks.size() >= 2; }
};

struct Vertex {
    std::string set;
    std::string block;

    auto operator<=>(const Vertex&) const = default;
};

// Undirected; stored with endpoints in sorted order.
struct Edge {
    Vertex a;
    Vertex b;

    auto operator<=>(const Edge&) const = default;
};

Edge make_edge(Vertex u, Vertex v);

struct RelationGraph {
    std::vector<HvSet> sets;
    std::set<Edge> edges;

    const HvSet* find_set(const std::string& name) const;
    // Throws std::invalid_argument on duplicate names or empty block lists.
    void add_set(const std::string& name, std::vector<std::string> blocks);
    // Throws std::invalid_argument on unknown sets/blocks or same-set edges.
    void add_edge(const std::string& set_a, const std::string& block_a,
                  const std::string& set_b, const std::string& block_b);
    bool has_edge(const std::string& set_a, const std::string& block_a,
                  const std::string& set_b, const std::string& block_b) const;
    std::vector<Vertex> vertices() const;
};

enum class ArrangementKind { Arranged, Disarranged, Unrelated, Mixed };

std::string to_string(ArrangementKind kind);

struct ClosureResult {
    RelationGraph graph;
    std::vector<Edge> added;  // trace of new edges, in sorted order
};

// Smallest supergraph closed under symmetry (automatic for undirected
// edges) and transitivity, restricted to cross-set pairs: every two
// vertices of different sets in one connected component end up related.
ClosureResult symmetric_transitive_closure(const RelationGraph& graph);

// Closure along block-consistent paths only: a transitive chain may not
// pass through two different blocks of the same set. Computed as the union
// of component closures over every section that picks one block per set.
// This is the reading under which the matched-block assumption lists below
// derive matched-block conclusions.
ClosureResult consistent_closure(const RelationGraph& graph);

// Pattern of the edges between two partitioned sets: matched blocks only
// (and both present) -> Arranged; the full Cartesian product -> Disarranged;
// nothing -> Unrelated; anything else -> Mixed, reported verbatim. Throws
// std::invalid_argument when a set is missing or unpartitioned.
ArrangementKind classify_pair(const RelationGraph& graph, const std::string& a,
                              const std::string& b);

// Named assumption bundles (see expand_bundles for tokens); presets name the
// standard scenarios: "env-direct" (one environment set related to
// everything), "env-split" (three environment sets chained), "matched-pair"
// and "cartesian-pair" (the two replacement scenarios), "mediator".
std::vector<std::string> bundle_preset(const std::string& name);

// Builds the relation graph for a token list. Throws std::invalid_argument
// on unknown tokens or bundles that disagree about a set's partitioning.
RelationGraph expand_bundles(const std::vector<std::string>& tokens);

struct DerivationReport {
    std::vector<std::string> bundles;
    ClosureResult closure;
    ArrangementKind verdict;  // relation between sets "n" and "e"
};

// Expands the bundles, runs the block-consistent closure and reads off the
// derived relation between the entanglement HVs {n} and the setting HVs {e}.
// When either set is unpartitioned the verdict is Disarranged if any edge
// links them (the Cartesian-product reading) and Unrelated otherwise.
DerivationReport derive_environment_relation(const std::vector<std::string>& tokens);

// {sets:[{name, blocks}], edges:[[setA, blockA, setB, blockB]]}
std::string graph_to_json(const RelationGraph& graph);
RelationGraph graph_from_json(const std::string& text);
RelationGraph load_graph(const std::string& path);
void save_graph(const RelationGraph& graph, const std::string& path);

} // namespace mermin::hv
