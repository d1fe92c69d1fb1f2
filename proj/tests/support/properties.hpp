#ifndef WDPO_TESTS_PROPERTIES_HPP
#define WDPO_TESTS_PROPERTIES_HPP

// Randomized property checks shared by the unit tests and the acceptance
// binary. Each check builds one instance from a seed and reports whether the
// property held; instances where the property has nothing to say (no match
// survives the gluing condition, no independent pair) are flagged vacuous.

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "random_objects.hpp"

namespace props {

using namespace wdpo;

struct Outcome {
    bool ok = true;
    bool vacuous = false;
    std::string detail;

    static Outcome pass() { return {}; }
    static Outcome skip(std::string why) { return {true, true, std::move(why)}; }
    static Outcome fail(std::string why) { return {false, false, std::move(why)}; }
};

inline bool iso(const AttrGraphPtr& a, const AttrGraphPtr& b) { return is_attr_isomorphic(a, b).has_value(); }

inline gen::Flavor flavor_for(std::uint32_t seed) {
    return seed % 2 == 0 ? gen::Flavor::Enumeration : gen::Flavor::Terms;
}

inline std::string show(const AttributedGraph& g) { return g.to_string(); }

// Weak-span rewriting agrees with the associated span under the plain DPO.
inline Outcome associated_span_equivalence(std::uint32_t seed) {
    gen::Rng rng(seed);
    const gen::Flavor f = flavor_for(seed);
    RulePtr rule = gen::random_rule(rng, f, "rho");
    AttrGraphPtr host = gen::random_host_for(rng, *rule, f);
    AssociatedSpan assoc = associated_span(*rule);
    std::size_t compared = 0;
    for (const Match& m : find_matches(rule, host)) {
        std::optional<AttrGraphPtr> weak, classic;
        try {
            weak = apply_direct(m).H;
        } catch (const GluingError&) {
        }
        try {
            classic = apply_span_dpo(assoc.span, m.m).H;
        } catch (const GluingError&) {
        }
        if (weak.has_value() != classic.has_value())
            return Outcome::fail("gluing disagrees for a match of " + show(*rule->L()));
        if (!weak) continue;
        ++compared;
        if (!iso(*weak, *classic))
            return Outcome::fail("weak " + show(**weak) + " vs span " + show(**classic));
    }
    return compared == 0 ? Outcome::skip("no applicable match") : Outcome::pass();
}

// pct of a single transformation is that transformation.
inline Outcome singleton_pct(std::uint32_t seed) {
    gen::Rng rng(seed);
    const gen::Flavor f = flavor_for(seed);
    RulePtr rule = gen::random_rule(rng, f, "rho");
    AttrGraphPtr host = gen::random_host_for(rng, *rule, f);
    std::size_t compared = 0;
    for (const Match& m : find_matches(rule, host)) {
        std::optional<DirectTransformation> t;
        try {
            t = apply_direct(m);
        } catch (const GluingError&) {
            continue;
        }
        ParallelStep step = pct({*t});
        ++compared;
        if (!iso(step.Hprime, t->H)) return Outcome::fail(show(*step.Hprime) + " vs " + show(*t->H));
    }
    return compared == 0 ? Outcome::skip("no applicable match") : Outcome::pass();
}

// A random object F with a neutral inclusion F -> G and a (possibly
// non-neutral) injective morphism F -> H.
struct PushoutInput {
    AttrMorphism neutral;
    AttrMorphism other;
};

inline PushoutInput random_pushout_input(gen::Rng& rng, gen::Flavor f) {
    const gen::RuleWorld w = gen::world(f);
    AttrGraphPtr F = gen::random_attr_graph(rng, gen::two_sorted(), w.rule_algebra, w.rule_values, 3);
    AttrGraphPtr G = gen::super_object(rng, F, 2, w.rule_values, "g", true);
    AlgebraMorphism alpha = gen::random_assignment(rng, w);
    AttrGraphPtr image = gen::image_copy(rng, F, "h", alpha, w.host_algebra, w.host_values, 0.3);
    AttrGraphPtr H = gen::super_object(rng, image, 2, w.host_values, "x", false);
    IdMap nodes, edges;
    for (const auto& [id, s] : F->graph()->nodes()) nodes[id] = "h" + id;
    for (const auto& [id, e] : F->graph()->edges()) edges[id] = "h" + id;
    AttrMorphism other(F, H, GraphMorphism(F->graph(), H->graph(), nodes, edges), alpha);
    return {AttrMorphism::inclusion(F, G), std::move(other)};
}

// The constructed pushout and pullback pass the exhaustive universal-property
// oracle against a commuting candidate that factors through a larger object.
inline Outcome universal_properties(std::uint32_t seed) {
    gen::Rng rng(seed);
    const gen::Flavor f = flavor_for(seed);
    const gen::RuleWorld w = gen::world(f);

    PushoutInput in = random_pushout_input(rng, f);
    PushoutResult po = pushout_along_neutral(in.neutral, in.other);
    AttrGraphPtr bigger = gen::super_object(rng, po.apex, 1, w.host_values, "z", false);
    AttrMorphism into = AttrMorphism::inclusion(po.apex, bigger);
    Wedge cocone{compose(into, po.from_neutral_side), compose(into, po.from_other_side)};
    if (!check_universal_property(UniversalKind::Pushout, as_square(in.neutral, in.other, po), cocone))
        return Outcome::fail("pushout apex " + show(*po.apex));

    AttrGraphPtr G = gen::random_attr_graph(rng, gen::two_sorted(), w.host_algebra, w.host_values, 5);
    AttrGraphPtr A = gen::sub_object(rng, G), B = gen::sub_object(rng, G);
    AttrMorphism f1 = AttrMorphism::inclusion(A, G), f2 = AttrMorphism::inclusion(B, G);
    PullbackResult pb = pullback_of_neutrals(f1, f2);
    AttrGraphPtr smaller = gen::sub_object(rng, pb.apex);
    AttrMorphism from = AttrMorphism::inclusion(smaller, pb.apex);
    Wedge cone{compose(pb.to_first, from), compose(pb.to_second, from)};
    if (!check_universal_property(UniversalKind::Pullback, as_square(f1, f2, pb), cone))
        return Outcome::fail("pullback apex " + show(*pb.apex));
    return Outcome::pass();
}

// Gluing the complement back along l reproduces the host.
inline Outcome complement_recomposition(std::uint32_t seed) {
    gen::Rng rng(seed);
    const gen::Flavor f = flavor_for(seed);
    RulePtr rule = gen::random_rule(rng, f, "rho");
    AttrGraphPtr host = gen::random_host_for(rng, *rule, f);
    std::size_t compared = 0;
    for (const Match& m : find_matches(rule, host)) {
        std::optional<ComplementResult> c;
        try {
            c = pushout_complement(rule->l, m.m);
        } catch (const GluingError&) {
            continue;
        }
        ++compared;
        PushoutResult back = pushout_along_neutral(rule->l, c->k_to_complement);
        if (!iso(back.apex, host)) return Outcome::fail(show(*back.apex) + " vs host " + show(*host));
    }
    return compared == 0 ? Outcome::skip("no applicable match") : Outcome::pass();
}

struct IndependentPair {
    DirectTransformation first;
    DirectTransformation second;
};

// First pair (in match order) of applicable, parallel independent matches of
// two random rules on a host holding both left-hand sides.
inline std::optional<IndependentPair> random_independent_pair(std::uint32_t seed) {
    gen::Rng rng(seed);
    const gen::Flavor f = flavor_for(seed);
    RulePtr r1 = gen::random_rule(rng, f, "one", 4);
    RulePtr r2 = gen::random_rule(rng, f, "two", 4);
    AttrGraphPtr host = gen::random_host_for_pair(rng, *r1, *r2, f);
    auto applicable = [](const RulePtr& r, const AttrGraphPtr& g) {
        std::vector<DirectTransformation> out;
        for (const Match& m : find_matches(r, g)) {
            try {
                out.push_back(apply_direct(m));
            } catch (const GluingError&) {
            }
        }
        return out;
    };
    for (const DirectTransformation& a : applicable(r1, host))
        for (const DirectTransformation& b : applicable(r2, host))
            if (check_parallel_independent(a, b)) return IndependentPair{a, b};
    return std::nullopt;
}

// Every result of applying `match`, one per admissible complement labeling.
// The complement graph is fixed by the match; each element's label ranges over
// the sets between the minimal complement label and the host label, and a
// choice is kept when the host label is exactly the union of the complement
// labels and the matched L labels above it.
inline std::vector<AttrGraphPtr> all_direct_results(const Match& match) {
    const WeakSpan& rule = *match.rule;
    ComplementResult c = pushout_complement(rule.l, match.m);
    const AttrGraphPtr& G = match.host();
    std::vector<std::string> ids = c.complement->graph()->elements();
    std::vector<std::vector<Term>> extras;
    std::size_t bits = 0;
    for (const std::string& w : ids) {
        std::vector<Term> extra;
        for (const Term& t : G->label(c.complement_to_host(w)))
            if (!c.complement->label(w).contains(t)) extra.push_back(t);
        bits += extra.size();
        extras.push_back(std::move(extra));
    }
    if (bits > 16) throw std::runtime_error("too many complement labelings to enumerate");

    std::map<std::string, LabelSet> from_match;  // host element -> matched L labels
    for (const std::string& y : rule.L()->graph()->elements()) {
        LabelSet img = apply_to_labelset(match.m.alpha(), rule.L()->label(y));
        from_match[match.m(y)].insert(img.begin(), img.end());
    }

    std::vector<AttrGraphPtr> out;
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << bits); ++choice) {
        Labeling labels;
        std::size_t bit = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            LabelSet l = c.complement->label(ids[k]);
            for (const Term& t : extras[k])
                if (choice >> bit++ & 1) l.insert(t);
            labels[ids[k]] = std::move(l);
        }
        AttrGraphPtr D = freeze(AttributedGraph(c.complement->graph(), c.complement->algebra(), labels));
        std::map<std::string, LabelSet> recomposed = from_match;
        for (const std::string& w : ids)
            recomposed[c.complement_to_host(w)].insert(labels[w].begin(), labels[w].end());
        bool pushout = true;
        for (const std::string& v : G->graph()->elements()) pushout = pushout && recomposed[v] == G->label(v);
        AttrMorphism k(rule.K(), D, c.k_to_complement.sigma(), c.k_to_complement.alpha());
        if (!pushout || !validate_attr_morphism(k).ok()) continue;
        out.push_back(pushout_along_neutral(rule.r, compose(k, rule.i), rule.name).apex);
    }
    return out;
}

// For an independent pair the parallel step agrees with the coproduct rule,
// and for both orders some direct transformation of the residual match on the
// first result reaches it. The residual match is g1 after the independence
// witness. A pass whose library sequential run (maximal deletion) disagrees
// carries the detail "non-maximal".
inline Outcome independence_theorem(std::uint32_t seed) {
    std::optional<IndependentPair> pair = random_independent_pair(seed);
    if (!pair) return Outcome::skip("no independent pair");
    const DirectTransformation& a = pair->first;
    const DirectTransformation& b = pair->second;
    ParallelStep step = pct({a, b});

    RuleCoproduct co = coproduct_rule(*a.rule(), *b.rule());
    AttrMorphism joint = copair_matches(co, a.match.m, b.match.m);
    SpanTransformation viaco = apply_span_dpo(associated_span(*co.rule).span, joint);
    if (!iso(step.Hprime, viaco.H))
        return Outcome::fail("coproduct " + show(*viaco.H) + " vs pct " + show(*step.Hprime));

    std::optional<WitnessPair> w = check_parallel_independent(a, b);
    const std::pair<const DirectTransformation*, const DirectTransformation*> orders[] = {{&a, &b}, {&b, &a}};
    bool maximal_agrees = true;
    for (const auto& [first, second] : orders) {
        const AttrMorphism& j = first == &a ? w->second_into_first : w->first_into_second;
        Match residual{second->rule(), compose(first->g, j)};
        std::vector<AttrGraphPtr> results = all_direct_results(residual);
        if (std::none_of(results.begin(), results.end(), [&](const AttrGraphPtr& h) { return iso(h, step.Hprime); }))
            return Outcome::fail("no second step reaches pct " + show(*step.Hprime));
        std::vector<Match> ms{first->match, second->match};
        SequentialRun seq = apply_sequentially(ms, {0, 1});
        maximal_agrees = maximal_agrees && seq.skipped.empty() && iso(step.Hprime, seq.result);
    }
    Outcome o = Outcome::pass();
    if (!maximal_agrees) o.detail = "non-maximal";
    return o;
}

// Coherence is reflexive, and independence implies coherence.
inline Outcome coherence_laws(std::uint32_t seed) {
    gen::Rng rng(seed);
    const gen::Flavor f = flavor_for(seed);
    RulePtr r1 = gen::random_rule(rng, f, "one", 4);
    RulePtr r2 = gen::random_rule(rng, f, "two", 4);
    AttrGraphPtr host = gen::random_host_for_pair(rng, *r1, *r2, f);
    std::vector<DirectTransformation> gammas;
    for (const RulePtr& r : {r1, r2})
        for (const Match& m : find_matches(r, host)) {
            try {
                gammas.push_back(apply_direct(m));
            } catch (const GluingError&) {
            }
        }
    if (gammas.empty()) return Outcome::skip("no applicable match");
    for (std::size_t x = 0; x < gammas.size(); ++x) {
        if (!check_parallel_coherent(gammas[x], gammas[x]))
            return Outcome::fail("not self-coherent: transformation " + std::to_string(x));
        for (std::size_t y = 0; y < gammas.size(); ++y)
            if (check_parallel_independent(gammas[x], gammas[y]) &&
                !check_parallel_coherent(gammas[x], gammas[y]))
                return Outcome::fail("independent but not coherent: " + std::to_string(x) + "," +
                                     std::to_string(y));
    }
    return Outcome::pass();
}

} // namespace props

#endif // WDPO_TESTS_PROPERTIES_HPP
