#include "wdpo/presets.hpp"

#include <cstdio>
#include <cstdlib>

#include "wdpo/error.hpp"

namespace wdpo {

namespace {

Algebra fib_rule_algebra() { return Algebra::terms(OpSignature::plus(), {"u", "v"}); }

AttrGraphPtr placeholders(const Algebra& algebra, std::initializer_list<std::string_view> x,
                          std::initializer_list<std::string_view> y) {
    return AttrGraphBuilder(SortSignature::plain(), algebra).node("x", x).node("y", y).edge("e", "x", "y").build();
}

AttrGraphPtr single(const Algebra& algebra, const std::string& id,
                    std::initializer_list<std::string_view> labels) {
    return AttrGraphBuilder(SortSignature::plain(), algebra).node(id, labels).build();
}

AttrMorphism node_to(const AttrGraphPtr& from, const AttrGraphPtr& to, const std::string& image) {
    return AttrMorphism::neutral(from, to,
                                 GraphMorphism(from->graph(), to->graph(),
                                               {{from->graph()->nodes().begin()->first, image}}, {}));
}

} // namespace

RulePtr fib_copy_rule() {
    const Algebra t = fib_rule_algebra();
    AttrGraphPtr L = placeholders(t, {"u"}, {"v"});
    AttrGraphPtr K = placeholders(t, {}, {"v"});
    AttrGraphPtr I = single(t, "x", {});
    AttrGraphPtr R = single(t, "x", {"v"});
    return make_rule("copy", AttrMorphism::inclusion(K, L), node_to(I, K, "x"), node_to(I, R, "x"));
}

RulePtr fib_sum_rule() {
    const Algebra t = fib_rule_algebra();
    AttrGraphPtr L = placeholders(t, {"u"}, {"v"});
    AttrGraphPtr K = placeholders(t, {"u"}, {});
    AttrGraphPtr I = single(t, "y", {});
    AttrGraphPtr R = single(t, "y", {"u+v"});
    return make_rule("sum", AttrMorphism::inclusion(K, L), node_to(I, K, "y"), node_to(I, R, "y"));
}

AttrGraphPtr fib_host(std::uint64_t x, std::uint64_t y) {
    Labeling labels{{"x", {Term::nat(x)}}, {"y", {Term::nat(y)}}};
    Graph g(SortSignature::plain());
    g.add_node("x", "node").add_node("y", "node").add_edge("e", "edge", "x", "y");
    return freeze(AttributedGraph(freeze(std::move(g)), Algebra::naturals(), std::move(labels)));
}

SystemSpec fibonacci_system(std::uint64_t x, std::uint64_t y) {
    return SystemSpec{SortSignature::plain(), Algebra::naturals(), {fib_copy_rule(), fib_sum_rule()},
                      fib_host(x, y)};
}

// ---------------------------------------------------------------------------
// Hexagonal grid

const std::array<Axial, 6>& hex_directions() {
    static const std::array<Axial, 6> dirs{
        Axial{1, 0}, Axial{1, -1}, Axial{0, -1}, Axial{-1, 0}, Axial{-1, 1}, Axial{0, 1}};
    return dirs;
}

Axial neighbor(Axial a, int direction) {
    const Axial& d = hex_directions()[((direction % 6) + 6) % 6];
    return Axial{a.q + d.q, a.r + d.r};
}

int hex_distance(Axial a, Axial b) {
    int dq = a.q - b.q, dr = a.r - b.r;
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

std::string cell_id(Axial a) { return "c" + std::to_string(a.q) + "_" + std::to_string(a.r); }

namespace {

std::string dir_sort(int k) { return "dir" + std::to_string(((k % 6) + 6) % 6); }

int direction_between(Axial from, Axial to) {
    for (int k = 0; k < 6; ++k)
        if (neighbor(from, k) == to) return k;
    return -1;
}

// Cells in `cells`, adjacency edges between every adjacent pair.
Graph hex_patch(const std::vector<std::pair<std::string, Axial>>& cells) {
    Graph g(hex_signature());
    for (const auto& [id, a] : cells) g.add_node(id, "cell");
    for (const auto& [ida, a] : cells)
        for (const auto& [idb, b] : cells) {
            int k = direction_between(a, b);
            if (k >= 0) g.add_edge(ida + "/" + dir_sort(k), dir_sort(k), ida, idb);
        }
    return g;
}

} // namespace

SignaturePtr hex_signature() {
    static const SignaturePtr sig = [] {
        auto s = std::make_shared<SortSignature>();
        s->add_node_sort("cell");
        for (int k = 0; k < 6; ++k) s->add_edge_sort(dir_sort(k), "cell", "cell");
        return SignaturePtr(s);
    }();
    return sig;
}

Algebra cell_algebra() { return Algebra::enumeration({"0", "1"}); }

AttrGraphPtr hex_grid(int radius, const std::set<Axial>& live) {
    if (radius < 0) throw StructureError("negative grid radius");
    std::vector<std::pair<std::string, Axial>> cells;
    for (int q = -radius; q <= radius; ++q)
        for (int r = -radius; r <= radius; ++r) {
            Axial a{q, r};
            if (hex_distance(a, Axial{}) <= radius) cells.emplace_back(cell_id(a), a);
        }
    for (const Axial& a : live)
        if (hex_distance(a, Axial{}) > radius)
            throw StructureError("live cell " + cell_id(a) + " outside the grid");
    Graph g = hex_patch(cells);
    Labeling labels;
    for (const auto& [id, a] : cells)
        labels[id] = {Term::symbol(live.contains(a) ? "1" : "0")};
    return freeze(AttributedGraph(freeze(std::move(g)), cell_algebra(), std::move(labels)));
}

RulePtr huw_rule(int direction) {
    direction = ((direction % 6) + 6) % 6;
    std::vector<std::pair<std::string, Axial>> cells{{"c", Axial{}}};
    for (int k = 0; k < 6; ++k) cells.emplace_back("n" + std::to_string(k), neighbor(Axial{}, k));
    GraphPtr patch = freeze(hex_patch(cells));

    const Term dead = Term::symbol("0"), alive = Term::symbol("1");
    Labeling l_labels;
    for (int k = 0; k < 6; ++k) l_labels["n" + std::to_string(k)] = {k == direction ? alive : dead};
    Labeling k_labels = l_labels;
    l_labels["c"] = {dead};

    const Algebra alg = cell_algebra();
    auto L = freeze(AttributedGraph(patch, alg, std::move(l_labels)));
    auto K = freeze(AttributedGraph(patch, alg, std::move(k_labels)));
    Graph one(hex_signature());
    one.add_node("c", "cell");
    GraphPtr cell = freeze(std::move(one));
    auto I = freeze(AttributedGraph(cell, alg));
    auto R = freeze(AttributedGraph(cell, alg, {{"c", {alive}}}));
    return make_rule("huw" + std::to_string(direction), AttrMorphism::inclusion(K, L),
                     AttrMorphism::inclusion(I, K), AttrMorphism::inclusion(I, R));
}

std::vector<RulePtr> huw_rules() {
    std::vector<RulePtr> out;
    for (int k = 0; k < 6; ++k) out.push_back(huw_rule(k));
    return out;
}

std::set<Axial> live_cells(const AttributedGraph& grid) {
    std::set<Axial> out;
    const Term alive = Term::symbol("1");
    for (const auto& [id, sort] : grid.graph()->nodes()) {
        if (!grid.label(id).contains(alive)) continue;
        int q = 0, r = 0;
        if (std::sscanf(id.c_str(), "c%d_%d", &q, &r) != 2)
            throw StructureError("cannot decode cell id '" + id + "'");
        out.insert(Axial{q, r});
    }
    return out;
}

} // namespace wdpo
