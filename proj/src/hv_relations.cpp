#include "mermin/hv/relations.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mermin::hv {

using ordered_json = nlohmann::ordered_json;

Edge make_edge(Vertex u, Vertex v) {
    if (v < u) std::swap(u, v);
    return Edge{std::move(u), std::move(v)};
}

const HvSet* RelationGraph::find_set(const std::string& name) const {
    for (const auto& s : sets) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

void RelationGraph::add_set(const std::string& name, std::vector<std::string> blocks) {
    if (name.empty() || blocks.empty()) {
        throw std::invalid_argument("a set needs a name and at least one block");
    }
    if (find_set(name) != nullptr) {
        throw std::invalid_argument("duplicate set name '" + name + "'");
    }
    sets.push_back(HvSet{name, std::move(blocks)});
}

namespace {

void require_vertex(const RelationGraph& graph, const std::string& set,
                    const std::string& block) {
    const HvSet* s = graph.find_set(set);
    if (s == nullptr) {
        throw std::invalid_argument("unknown set '" + set + "'");
    }
    if (std::find(s->blocks.begin(), s->blocks.end(), block) == s->blocks.end()) {
        throw std::invalid_argument("set '" + set + "' has no block '" + block + "'");
    }
}

} // namespace

void RelationGraph::add_edge(const std::string& set_a, const std::string& block_a,
                             const std::string& set_b, const std::string& block_b) {
    require_vertex(*this, set_a, block_a);
    require_vertex(*this, set_b, block_b);
    if (set_a == set_b) {
        throw std::invalid_argument("relations connect different sets; got '" +
                                    set_a + "' twice");
    }
    edges.insert(make_edge(Vertex{set_a, block_a}, Vertex{set_b, block_b}));
}

bool RelationGraph::has_edge(const std::string& set_a, const std::string& block_a,
                             const std::string& set_b, const std::string& block_b) const {
    return edges.count(make_edge(Vertex{set_a, block_a}, Vertex{set_b, block_b})) > 0;
}

std::vector<Vertex> RelationGraph::vertices() const {
    std::vector<Vertex> out;
    for (const auto& s : sets) {
        for (const auto& b : s.blocks) {
            out.push_back(Vertex{s.name, b});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(ArrangementKind kind) {
    switch (kind) {
        case ArrangementKind::Arranged: return "Arranged";
        case ArrangementKind::Disarranged: return "Disarranged";
        case ArrangementKind::Unrelated: return "Unrelated";
        case ArrangementKind::Mixed: return "Mixed";
    }
    throw std::logic_error("unknown arrangement kind");
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

// Cross-set cliques over the connected components of `vertex_subset`, using
// only edges whose endpoints both lie in the subset.
std::set<Edge> component_closure(const RelationGraph& graph,
                                 const std::vector<Vertex>& vertex_subset) {
    std::map<Vertex, std::size_t> index;
    for (const auto& v : vertex_subset) {
        index.emplace(v, index.size());
    }
    UnionFind uf(index.size());
    for (const auto& e : graph.edges) {
        auto ia = index.find(e.a);
        auto ib = index.find(e.b);
        if (ia != index.end() && ib != index.end()) {
            uf.unite(ia->second, ib->second);
        }
    }
    std::set<Edge> closed;
    for (const auto& [u, iu] : index) {
        for (const auto& [v, iv] : index) {
            if (!(u < v) || u.set == v.set) continue;
            if (uf.find(iu) == uf.find(iv)) {
                closed.insert(make_edge(u, v));
            }
        }
    }
    return closed;
}

ClosureResult closure_from_edges(const RelationGraph& graph, std::set<Edge> closed) {
    ClosureResult result;
    result.graph.sets = graph.sets;
    result.graph.edges = graph.edges;
    for (const auto& e : closed) {
        if (graph.edges.count(e) == 0) {
            result.added.push_back(e);
            result.graph.edges.insert(e);
        }
    }
    return result;
}

} // namespace

ClosureResult symmetric_transitive_closure(const RelationGraph& graph) {
    return closure_from_edges(graph, component_closure(graph, graph.vertices()));
}

ClosureResult consistent_closure(const RelationGraph& graph) {
    // Enumerate sections: one block from every set. With b_i blocks in set i
    // there are prod(b_i) sections; the graphs here stay tiny.
    std::set<Edge> closed;
    std::vector<std::size_t> choice(graph.sets.size(), 0);
    while (true) {
        std::vector<Vertex> section;
        for (std::size_t i = 0; i < graph.sets.size(); ++i) {
            section.push_back(Vertex{graph.sets[i].name, graph.sets[i].blocks[choice[i]]});
        }
        std::sort(section.begin(), section.end());
        for (const auto& e : component_closure(graph, section)) {
            closed.insert(e);
        }
        std::size_t i = 0;
        for (; i < choice.size(); ++i) {
            if (++choice[i] < graph.sets[i].blocks.size()) break;
            choice[i] = 0;
        }
        if (i == choice.size()) break;
    }
    return closure_from_edges(graph, std::move(closed));
}

ArrangementKind classify_pair(const RelationGraph& graph, const std::string& a,
                              const std::string& b) {
    const HvSet* sa = graph.find_set(a);
    const HvSet* sb = graph.find_set(b);
    if (sa == nullptr || sb == nullptr) {
        throw std::invalid_argument("classify_pair: unknown set");
    }
    if (!sa->partitioned() || !sb->partitioned()) {
        throw std::invalid_argument("classify_pair: set '" +
                                    (sa->partitioned() ? b : a) +
                                    "' is not partitioned");
    }
    const bool pp = graph.has_edge(a, "+", b, "+");
    const bool mm = graph.has_edge(a, "-", b, "-");
    const bool pm = graph.has_edge(a, "+", b, "-");
    const bool mp = graph.has_edge(a, "-", b, "+");
    const int count = int(pp) + int(mm) + int(pm) + int(mp);
    if (count == 0) return ArrangementKind::Unrelated;
    if (count == 4) return ArrangementKind::Disarranged;
    if (pp && mm && !pm && !mp) return ArrangementKind::Arranged;
    return ArrangementKind::Mixed;
}

namespace {

struct BundleEdge {
    std::string set_a, block_a, set_b, block_b;
};

struct BundleDef {
    // set name -> partitioned?
    std::vector<std::pair<std::string, bool>> needs;
    std::vector<BundleEdge> edges;
};

// Set names: n = entanglement HVs, e = setting HVs, a = first-assistant HVs,
// ln/le/la = environment HVs coupled to n/e/a, l = a single environment set,
// m = a mediating system's HVs.
const std::map<std::string, BundleDef>& bundle_table() {
    static const std::map<std::string, BundleDef> table = {
        {"E1+", {{{"ln", true}, {"n", true}}, {{"ln", "+", "n", "+"}}}},
        {"E1-", {{{"ln", true}, {"n", true}}, {{"ln", "-", "n", "-"}}}},
        {"E2+", {{{"le", true}, {"e", true}}, {{"le", "+", "e", "+"}}}},
        {"E2-", {{{"le", true}, {"e", true}}, {{"le", "-", "e", "-"}}}},
        {"E3", {{{"la", false}, {"a", false}}, {{"la", "*", "a", "*"}}}},
        {"RM1",
         {{{"ln", true}, {"le", true}},
          {{"ln", "+", "le", "+"},
           {"ln", "+", "le", "-"},
           {"ln", "-", "le", "+"},
           {"ln", "-", "le", "-"}}}},
        {"RM2",
         {{{"ln", true}, {"la", false}},
          {{"ln", "+", "la", "*"}, {"ln", "-", "la", "*"}}}},
        {"RM1+", {{{"ln", true}, {"le", true}}, {{"ln", "+", "le", "+"}}}},
        {"RM1-", {{{"ln", true}, {"le", true}}, {{"ln", "-", "le", "-"}}}},
        {"RM2+", {{{"le", true}, {"la", false}}, {{"le", "+", "la", "*"}}}},
        {"RM2-", {{{"le", true}, {"la", false}}, {{"le", "-", "la", "*"}}}},
        {"e1", {{{"l", false}, {"n", false}}, {{"l", "*", "n", "*"}}}},
        {"e2", {{{"l", false}, {"e", false}}, {{"l", "*", "e", "*"}}}},
        {"e3", {{{"l", false}, {"a", false}}, {{"l", "*", "a", "*"}}}},
        {"e'1", {{{"ln", false}, {"n", false}}, {{"ln", "*", "n", "*"}}}},
        {"e'2", {{{"le", false}, {"e", false}}, {{"le", "*", "e", "*"}}}},
        {"e'3", {{{"la", false}, {"a", false}}, {{"la", "*", "a", "*"}}}},
        {"e'4", {{{"ln", false}, {"le", false}}, {{"ln", "*", "le", "*"}}}},
        {"e'5", {{{"ln", false}, {"la", false}}, {{"ln", "*", "la", "*"}}}},
        {"M1+", {{{"m", true}, {"n", true}}, {{"m", "+", "n", "+"}}}},
        {"M1-", {{{"m", true}, {"n", true}}, {{"m", "-", "n", "-"}}}},
        {"M2+", {{{"m", true}, {"e", true}}, {{"m", "+", "e", "+"}}}},
        {"M2-", {{{"m", true}, {"e", true}}, {{"m", "-", "e", "-"}}}},
    };
    return table;
}

} // namespace

std::vector<std::string> bundle_preset(const std::string& name) {
    // Presets name the scenario, not a source: "cartesian-pair" couples the
    // two environment systems in every block combination, "matched-pair"
    // only block-to-matching-block, "mediator" relates one system to both
    // registers, and the env presets are the unpartitioned chains.
    static const std::map<std::string, std::vector<std::string>> presets = {
        {"cartesian-pair", {"E1+", "E1-", "E2+", "E2-", "E3", "RM1", "RM2"}},
        {"matched-pair",
         {"E1+", "E1-", "E2+", "E2-", "E3", "RM1+", "RM1-", "RM2+", "RM2-"}},
        {"mediator", {"M1+", "M1-", "M2+", "M2-"}},
        {"env-direct", {"e1", "e2", "e3"}},
        {"env-split", {"e'1", "e'2", "e'3", "e'4", "e'5"}},
    };
    auto it = presets.find(name);
    if (it == presets.end()) {
        throw std::invalid_argument("unknown bundle preset '" + name + "'");
    }
    return it->second;
}

RelationGraph expand_bundles(const std::vector<std::string>& tokens) {
    RelationGraph graph;
    // First pass: declare sets, checking partitioning consistency.
    for (const auto& token : tokens) {
        auto it = bundle_table().find(token);
        if (it == bundle_table().end()) {
            throw std::invalid_argument("unknown assumption bundle '" + token + "'");
        }
        for (const auto& [set, partitioned] : it->second.needs) {
            const HvSet* existing = graph.find_set(set);
            if (existing == nullptr) {
                graph.add_set(set, partitioned
                                       ? std::vector<std::string>{"+", "-"}
                                       : std::vector<std::string>{"*"});
            } else if (existing->partitioned() != partitioned) {
                throw std::invalid_argument(
                    "bundles disagree on the partitioning of set '" + set + "'");
            }
        }
    }
    for (const auto& token : tokens) {
        for (const auto& e : bundle_table().at(token).edges) {
            graph.add_edge(e.set_a, e.block_a, e.set_b, e.block_b);
        }
    }
    return graph;
}

DerivationReport derive_environment_relation(const std::vector<std::string>& tokens) {
    DerivationReport report;
    report.bundles = tokens;
    RelationGraph graph = expand_bundles(tokens);
    if (graph.find_set("n") == nullptr || graph.find_set("e") == nullptr) {
        throw std::invalid_argument(
            "derivation needs bundles mentioning both 'n' and 'e'");
    }
    report.closure = consistent_closure(graph);
    const HvSet* n = report.closure.graph.find_set("n");
    const HvSet* e = report.closure.graph.find_set("e");
    if (n->partitioned() && e->partitioned()) {
        report.verdict = classify_pair(report.closure.graph, "n", "e");
    } else {
        // Unpartitioned sets relate as wholes: any edge means the full
        // Cartesian product of the (trivial) partitions.
        bool any = false;
        for (const auto& edge : report.closure.graph.edges) {
            if ((edge.a.set == "n" && edge.b.set == "e") ||
                (edge.a.set == "e" && edge.b.set == "n")) {
                any = true;
                break;
            }
        }
        report.verdict = any ? ArrangementKind::Disarranged : ArrangementKind::Unrelated;
    }
    return report;
}

std::string graph_to_json(const RelationGraph& graph) {
    ordered_json j;
    j["sets"] = ordered_json::array();
    for (const auto& s : graph.sets) {
        ordered_json js;
        js["name"] = s.name;
        js["blocks"] = s.blocks;
        j["sets"].push_back(js);
    }
    j["edges"] = ordered_json::array();
    for (const auto& e : graph.edges) {
        j["edges"].push_back(
            ordered_json::array({e.a.set, e.a.block, e.b.set, e.b.block}));
    }
    return j.dump(2) + "\n";
}

RelationGraph graph_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("graph JSON parse error: ") + e.what());
    }
    RelationGraph graph;
    try {
        for (const auto& js : j.at("sets")) {
            graph.add_set(js.at("name").get<std::string>(),
                          js.at("blocks").get<std::vector<std::string>>());
        }
        for (const auto& je : j.at("edges")) {
            if (je.size() != 4) {
                throw std::runtime_error("edge rows are [setA, blockA, setB, blockB]");
            }
            graph.add_edge(je.at(0).get<std::string>(), je.at(1).get<std::string>(),
                           je.at(2).get<std::string>(), je.at(3).get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("graph JSON schema error: ") + e.what());
    }
    return graph;
}

RelationGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open graph file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return graph_from_json(buffer.str());
}

void save_graph(const RelationGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write graph file " + path);
    }
    out << graph_to_json(graph);
}

} // namespace mermin::hv
