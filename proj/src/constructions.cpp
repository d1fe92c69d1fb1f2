#include "wdpo/constructions.hpp"

#include <numeric>
#include <set>
#include <unordered_map>

#include "wdpo/error.hpp"

namespace wdpo {

namespace {

// Union-find over the elements of two graphs: indices [0, n1) for the first,
// [n1, n1 + n2) for the second.
class Classes {
public:
    explicit Classes(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

struct Indexed {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> index;

    explicit Indexed(const Graph& g) : ids(g.elements()) {
        index.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    }
    std::size_t at(const std::string& id) const { return index.at(id); }
};

void insert_all(LabelSet& into, const LabelSet& from) { into.insert(from.begin(), from.end()); }

std::string unique_id(std::string id, const std::set<std::string>& taken) {
    while (taken.contains(id)) id += "'";
    return id;
}

void require_neutral(const AttrMorphism& m, const char* what) {
    if (!m.is_neutral()) throw ConstructionError(std::string(what) + " must be neutral");
}

} // namespace

// ---------------------------------------------------------------------------
// Pushout

PushoutResult pushout_along_neutral(const AttrMorphism& neutral, const AttrMorphism& other,
                                    const std::string& prefix) {
    require_neutral(neutral, "first leg of a pushout");
    if (!same_attr_graph(neutral.source(), other.source()))
        throw ConstructionError("pushout legs do not share a source");

    const AttributedGraph& G = *neutral.target();
    const AttributedGraph& H = *other.target();
    const Graph& gG = *G.graph();
    const Graph& gH = *H.graph();
    Indexed iG(gG), iH(gH);
    const std::size_t nG = iG.ids.size();
    Classes classes(nG + iH.ids.size());
    for (const std::string& x : neutral.source()->graph()->elements())
        classes.unite(iG.at(neutral(x)), nG + iH.at(other(x)));

    // Every class that touches H is named after its smallest H element; H
    // elements are visited in id order so the first one seen is the smallest.
    std::vector<std::string> name(nG + iH.ids.size());
    std::unordered_map<std::size_t, std::string> class_name;
    std::set<std::string> taken;
    for (std::size_t j = 0; j < iH.ids.size(); ++j) {
        std::size_t root = classes.find(nG + j);
        auto [it, fresh] = class_name.try_emplace(root, iH.ids[j]);
        if (fresh) taken.insert(iH.ids[j]);
    }
    for (std::size_t i = 0; i < nG; ++i) {
        std::size_t root = classes.find(i);
        if (class_name.contains(root)) continue;
        std::string id = prefix.empty() ? iG.ids[i] : prefix + ":" + iG.ids[i];
        id = unique_id(std::move(id), taken);
        taken.insert(id);
        class_name.emplace(root, std::move(id));
    }
    for (std::size_t x = 0; x < name.size(); ++x) name[x] = class_name.at(classes.find(x));

    Graph apex(gH.signature_ptr());
    Labeling labels;
    auto add_node = [&](const std::string& id, const std::string& sort) {
        if (!apex.has_node(id)) apex.add_node(id, sort);
    };
    for (const auto& [id, sort] : gH.nodes()) add_node(name[nG + iH.at(id)], sort);
    for (const auto& [id, sort] : gG.nodes()) add_node(name[iG.at(id)], sort);
    auto add_edge = [&](const std::string& id, const Edge& e, const std::string& s,
                        const std::string& t) {
        if (!apex.has_edge(id)) apex.add_edge(id, e.sort, s, t);
    };
    for (const auto& [id, e] : gH.edges())
        add_edge(name[nG + iH.at(id)], e, name[nG + iH.at(e.source)], name[nG + iH.at(e.target)]);
    for (const auto& [id, e] : gG.edges())
        add_edge(name[iG.at(id)], e, name[iG.at(e.source)], name[iG.at(e.target)]);

    for (std::size_t j = 0; j < iH.ids.size(); ++j)
        insert_all(labels[name[nG + j]], H.label(iH.ids[j]));
    for (std::size_t i = 0; i < nG; ++i)
        insert_all(labels[name[i]], apply_to_labelset(other.alpha(), G.label(iG.ids[i])));

    auto apex_ptr = freeze(AttributedGraph(freeze(std::move(apex)), H.algebra(), std::move(labels)));

    IdMap gn, ge, hn, he;
    for (const auto& [id, s] : gG.nodes()) gn.emplace(id, name[iG.at(id)]);
    for (const auto& [id, e] : gG.edges()) ge.emplace(id, name[iG.at(id)]);
    for (const auto& [id, s] : gH.nodes()) hn.emplace(id, name[nG + iH.at(id)]);
    for (const auto& [id, e] : gH.edges()) he.emplace(id, name[nG + iH.at(id)]);

    AttrMorphism from_g(neutral.target(), apex_ptr,
                        GraphMorphism(G.graph(), apex_ptr->graph(), std::move(gn), std::move(ge)),
                        other.alpha());
    AttrMorphism from_h = AttrMorphism::neutral(
        other.target(), apex_ptr,
        GraphMorphism(H.graph(), apex_ptr->graph(), std::move(hn), std::move(he)));
    return PushoutResult{apex_ptr, std::move(from_g), std::move(from_h)};
}

// ---------------------------------------------------------------------------
// Pullback

PullbackResult pullback_of_neutrals(const AttrMorphism& f1, const AttrMorphism& f2) {
    require_neutral(f1, "first leg of a pullback");
    require_neutral(f2, "second leg of a pullback");
    if (!same_attr_graph(f1.target(), f2.target()))
        throw ConstructionError("pullback legs do not share a target");
    if (!(f1.source()->algebra() == f2.source()->algebra()))
        throw ConstructionError("pullback legs over different algebras");

    const AttributedGraph& D1 = *f1.source();
    const AttributedGraph& D2 = *f2.source();
    const Graph& g1 = *D1.graph();
    const Graph& g2 = *D2.graph();

    std::unordered_map<std::string, std::vector<std::string>> pre2;
    for (const std::string& b : g2.elements()) pre2[f2(b)].push_back(b);

    struct Pair {
        std::string a, b;
    };
    std::vector<Pair> node_pairs, edge_pairs;
    for (const auto& [a, s] : g1.nodes()) {
        auto it = pre2.find(f1(a));
        if (it == pre2.end()) continue;
        for (const std::string& b : it->second) node_pairs.push_back({a, b});
    }
    for (const auto& [a, e] : g1.edges()) {
        auto it = pre2.find(f1(a));
        if (it == pre2.end()) continue;
        for (const std::string& b : it->second) edge_pairs.push_back({a, b});
    }

    auto full = [](const Pair& p) { return "<" + p.a + "," + p.b + ">"; };
    auto short_form = [&](const Pair& p) { return p.a == p.b ? p.a : full(p); };
    bool use_short = true;
    {
        std::set<std::string> seen;
        for (const auto* list : {&node_pairs, &edge_pairs})
            for (const Pair& p : *list)
                if (!seen.insert(short_form(p)).second) use_short = false;
    }
    std::map<std::pair<std::string, std::string>, std::string> ids;
    for (const auto* list : {&node_pairs, &edge_pairs})
        for (const Pair& p : *list) {
            auto [it, fresh] = ids.emplace(std::pair{p.a, p.b}, use_short ? short_form(p) : full(p));
            if (!fresh) throw ConstructionError("duplicate pullback pair");
        }
    {
        std::set<std::string> seen;
        for (const auto& [k, id] : ids)
            if (!seen.insert(id).second)
                throw ConstructionError("pullback id collision on '" + id + "'");
    }

    Graph apex(g1.signature_ptr());
    Labeling labels;
    IdMap n1, e1, n2, e2;
    for (const Pair& p : node_pairs) {
        const std::string& id = ids.at({p.a, p.b});
        apex.add_node(id, g1.node_sort(p.a));
        n1.emplace(id, p.a);
        n2.emplace(id, p.b);
    }
    for (const Pair& p : edge_pairs) {
        const Edge& ea = g1.edge(p.a);
        const Edge& eb = g2.edge(p.b);
        const std::string& id = ids.at({p.a, p.b});
        apex.add_edge(id, ea.sort, ids.at({ea.source, eb.source}), ids.at({ea.target, eb.target}));
        e1.emplace(id, p.a);
        e2.emplace(id, p.b);
    }
    for (const auto* list : {&node_pairs, &edge_pairs})
        for (const Pair& p : *list) {
            LabelSet both;
            const LabelSet& la = D1.label(p.a);
            const LabelSet& lb = D2.label(p.b);
            std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                                  std::inserter(both, both.end()));
            labels.emplace(ids.at({p.a, p.b}), std::move(both));
        }

    auto apex_ptr = freeze(AttributedGraph(freeze(std::move(apex)), D1.algebra(), std::move(labels)));
    AttrMorphism to1 = AttrMorphism::neutral(
        apex_ptr, f1.source(), GraphMorphism(apex_ptr->graph(), D1.graph(), std::move(n1), std::move(e1)));
    AttrMorphism to2 = AttrMorphism::neutral(
        apex_ptr, f2.source(), GraphMorphism(apex_ptr->graph(), D2.graph(), std::move(n2), std::move(e2)));
    return PullbackResult{apex_ptr, std::move(to1), std::move(to2)};
}

LimitResult limit_of_neutrals(const std::vector<AttrMorphism>& legs) {
    if (legs.empty()) throw ConstructionError("limit of an empty family");
    for (const AttrMorphism& f : legs) {
        require_neutral(f, "limit leg");
        if (!same_attr_graph(f.target(), legs.front().target()))
            throw ConstructionError("limit legs do not share a target");
    }
    AttrGraphPtr apex = legs.front().source();
    std::vector<AttrMorphism> out{AttrMorphism::identity(apex)};
    AttrMorphism to_target = legs.front();
    for (std::size_t k = 1; k < legs.size(); ++k) {
        PullbackResult pb = pullback_of_neutrals(to_target, legs[k]);
        for (AttrMorphism& leg : out) leg = compose(leg, pb.to_first);
        out.push_back(pb.to_second);
        to_target = compose(to_target, pb.to_first);
        apex = pb.apex;
    }
    return LimitResult{apex, std::move(out), std::move(to_target)};
}

ColimitResult colimit_of_neutrals(const std::vector<AttrMorphism>& legs, const std::string& prefix) {
    if (legs.empty()) throw ConstructionError("colimit of an empty family");
    for (const AttrMorphism& g : legs) {
        require_neutral(g, "colimit leg");
        if (!same_attr_graph(g.source(), legs.front().source()))
            throw ConstructionError("colimit legs do not share a source");
    }
    AttrGraphPtr apex = legs.front().target();
    std::vector<AttrMorphism> out{AttrMorphism::identity(apex)};
    AttrMorphism from_source = legs.front();
    for (std::size_t k = 1; k < legs.size(); ++k) {
        PushoutResult po = pushout_along_neutral(legs[k], from_source, prefix);
        for (AttrMorphism& leg : out) leg = compose(po.from_other_side, leg);
        out.push_back(po.from_neutral_side);
        from_source = compose(po.from_other_side, from_source);
        apex = po.apex;
    }
    return ColimitResult{apex, std::move(out), std::move(from_source)};
}

// ---------------------------------------------------------------------------
// Pushout complement

ComplementResult pushout_complement(const AttrMorphism& l, const AttrMorphism& m) {
    if (!l.is_neutral()) throw RuleError("left rule leg must be neutral");
    if (!l.is_mono()) throw RuleError("left rule leg must be injective");
    if (!same_attr_graph(l.target(), m.source()))
        throw ConstructionError("match does not start at the rule's left-hand side");

    const AttributedGraph& L = *m.source();
    const AttributedGraph& K = *l.source();
    const AttributedGraph& G = *m.target();
    const Graph& gL = *L.graph();
    const Graph& gG = *G.graph();

    std::set<std::string> kept_in_l;
    for (const std::string& u : K.graph()->elements()) kept_in_l.insert(l(u));

    std::map<std::string, std::vector<std::string>, std::less<>> m_pre;
    for (const std::string& v : gL.elements()) m_pre[m(v)].push_back(v);

    std::set<std::string, std::less<>> deleted;
    for (const auto& [w, vs] : m_pre) {
        bool any_deleted = false;
        for (const std::string& v : vs)
            if (!kept_in_l.contains(v)) any_deleted = true;
        if (any_deleted && vs.size() > 1)
            throw GluingError("match identifies a deleted element at '" + w + "'", w);
        if (any_deleted) deleted.insert(w);
    }

    for (const auto& [id, e] : gG.edges()) {
        if (deleted.contains(id)) continue;
        if (deleted.contains(e.source) || deleted.contains(e.target))
            throw GluingError("edge '" + id + "' would dangle", id);
    }

    // Union of the match's label images per host element.
    Labeling kset;
    for (const auto& [w, vs] : m_pre) {
        LabelSet& s = kset[w];
        for (const std::string& v : vs) insert_all(s, apply_to_labelset(m.alpha(), L.label(v)));
    }
    for (const std::string& w : deleted) {
        const LabelSet& have = G.label(w);
        const LabelSet& covered = kset.at(w);
        for (const Term& t : have)
            if (!covered.contains(t))
                throw GluingError("deleted element '" + w + "' carries label " + t.to_string() +
                                      " not matched by the rule",
                                  w);
    }

    GraphPtr gD;
    if (deleted.empty()) {
        gD = G.graph();
    } else {
        Graph d(gG.signature_ptr());
        for (const auto& [id, sort] : gG.nodes())
            if (!deleted.contains(id)) d.add_node(id, sort);
        for (const auto& [id, e] : gG.edges())
            if (!deleted.contains(id)) d.add_edge(id, e.sort, e.source, e.target);
        gD = freeze(std::move(d));
    }

    Labeling labels;
    Labeling deletion_sets;
    for (const std::string& w : gD->elements()) {
        LabelSet h = G.label(w);
        auto it = kset.find(w);
        if (it != kset.end()) {
            for (const Term& t : it->second) h.erase(t);
            deletion_sets.emplace(w, it->second);
        }
        labels.emplace(w, std::move(h));
    }
    // Labels the match requires on preserved elements stay.
    IdMap kn, ke;
    for (const auto& [u, s] : K.graph()->nodes()) kn.emplace(u, m(l(u)));
    for (const auto& [u, e] : K.graph()->edges()) ke.emplace(u, m(l(u)));
    for (const std::string& u : K.graph()->elements())
        insert_all(labels.at(m(l(u))), apply_to_labelset(m.alpha(), K.label(u)));

    auto D = freeze(AttributedGraph(gD, G.algebra(), std::move(labels)));
    AttrMorphism k(l.source(), D, GraphMorphism(K.graph(), gD, std::move(kn), std::move(ke)),
                   m.alpha());
    AttrMorphism f = AttrMorphism::inclusion(D, m.target());
    return ComplementResult{D, std::move(k), std::move(f), std::move(deletion_sets)};
}

// ---------------------------------------------------------------------------
// Universal-property oracle

namespace {

void check_size(const AttrGraphPtr& g) {
    if (g->graph()->element_count() > kUniversalSearchLimit)
        throw ConstructionError("graph too large for exhaustive universal-property search (" +
                                std::to_string(g->graph()->element_count()) + " elements)");
}

// Number of valid morphisms `from` -> `to` with the given algebra component
// whose graph part agrees with `required` where set; stops at 2.
int count_mediators(const AttrGraphPtr& from, const AttrGraphPtr& to, const AlgebraMorphism& alpha,
                    const IdMap& required) {
    check_size(from);
    check_size(to);
    SearchOptions options;
    options.accept = [&](const std::string& x, const std::string& y) {
        auto it = required.find(x);
        if (it != required.end() && it->second != y) return false;
        LabelSet image = apply_to_labelset(alpha, from->label(x));
        const LabelSet& have = to->label(y);
        return std::includes(have.begin(), have.end(), image.begin(), image.end());
    };
    int count = 0;
    search_morphisms(from->graph(), to->graph(), options, [&](const GraphMorphism&) {
        ++count;
        return count < 2;
    });
    return count;
}

// Records required[via(x)] = target(x) for every x, returning false on conflict.
bool require_through(IdMap& required, const AttrMorphism& via, const AttrMorphism& target) {
    for (const std::string& x : via.source()->graph()->elements()) {
        auto [it, fresh] = required.emplace(via(x), target(x));
        if (!fresh && it->second != target(x)) return false;
    }
    return true;
}

} // namespace

bool check_universal_property(UniversalKind kind, const Square& sq, const Wedge& c) {
    if (kind == UniversalKind::Pushout) {
        // first: F -> G (neutral), second: F -> H; apex_first: G -> E, apex_second: H -> E.
        // candidate: p: G -> X, q: H -> X.
        AttrMorphism lhs = compose(c.first, sq.first);
        AttrMorphism rhs = compose(c.second, sq.second);
        if (!(lhs == rhs)) throw ConstructionError("candidate cocone does not commute");
        // apex_second is neutral, so the mediator's algebra part is q's.
        const AlgebraMorphism& alpha = c.second.alpha();
        if (!(compose(alpha, sq.apex_first.alpha()) == c.first.alpha())) return false;
        IdMap required;
        if (!require_through(required, sq.apex_first, c.first)) return false;
        if (!require_through(required, sq.apex_second, c.second)) return false;
        const AttrGraphPtr& E = sq.apex_first.target();
        return count_mediators(E, c.first.target(), alpha, required) == 1;
    }
    // first: D1 -> G, second: D2 -> G; apex_first: P -> D1, apex_second: P -> D2.
    // candidate: c1: X -> D1, c2: X -> D2. Mediator u: X -> P with apex_* . u = c_*.
    AttrMorphism lhs = compose(sq.first, c.first);
    AttrMorphism rhs = compose(sq.second, c.second);
    if (!(lhs == rhs)) throw ConstructionError("candidate cone does not commute");
    const AttrGraphPtr& X = c.first.source();
    const AttrGraphPtr& P = sq.apex_first.source();
    check_size(X);
    check_size(P);
    const AlgebraMorphism& alpha = c.first.alpha();
    int count = 0;
    SearchOptions options;
    options.accept = [&](const std::string& x, const std::string& y) {
        if (sq.apex_first(y) != c.first(x) || sq.apex_second(y) != c.second(x)) return false;
        LabelSet image = apply_to_labelset(alpha, X->label(x));
        const LabelSet& have = P->label(y);
        return std::includes(have.begin(), have.end(), image.begin(), image.end());
    };
    search_morphisms(X->graph(), P->graph(), options, [&](const GraphMorphism&) {
        ++count;
        return count < 2;
    });
    return count == 1;
}

Square as_square(const AttrMorphism& neutral, const AttrMorphism& other, const PushoutResult& po) {
    return Square{neutral, other, po.from_neutral_side, po.from_other_side};
}

Square as_square(const AttrMorphism& f1, const AttrMorphism& f2, const PullbackResult& pb) {
    return Square{f1, f2, pb.to_first, pb.to_second};
}

} // namespace wdpo
