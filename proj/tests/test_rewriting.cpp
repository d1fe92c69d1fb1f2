#include <gtest/gtest.h>

#include <algorithm>

#include "properties.hpp"
#include "wdpo/error.hpp"
#include "wdpo/presets.hpp"

using namespace wdpo;

namespace {

const Algebra kT = Algebra::terms(OpSignature::plus(), {"u", "v"});
const Algebra kN = Algebra::naturals();
const Algebra kA = Algebra::enumeration({"a"});

AttrGraphPtr edge_xy(const Algebra& alg, std::vector<std::string> x, std::vector<std::string> y) {
    return AttrGraphBuilder(SortSignature::plain(), alg)
        .node("x", "node", x)
        .node("y", "node", y)
        .edge("e", "edge", "x", "y", {})
        .build();
}

bool iso(const AttrGraphPtr& a, const AttrGraphPtr& b) { return is_attr_isomorphic(a, b).has_value(); }

DirectTransformation only(const RulePtr& rule, const AttrGraphPtr& host) {
    std::vector<Match> ms = find_matches(rule, host);
    EXPECT_EQ(ms.size(), 1u);
    return apply_direct(ms.at(0));
}

RulePtr identity_rule(const AttrGraphPtr& L) {
    AttrMorphism id = AttrMorphism::identity(L);
    return make_rule("id", id, id, id);
}

// Deletes node s and keeps node t.
RulePtr drop_first() {
    AttrGraphPtr L = AttrGraphBuilder(SortSignature::plain(), kA).node("s", "node", {"a"}).node("t", "node", {"a"}).build();
    AttrGraphPtr K = AttrGraphBuilder(SortSignature::plain(), kA).node("t", "node", {"a"}).build();
    return make_rule("drop", AttrMorphism::inclusion(K, L), AttrMorphism::identity(K), AttrMorphism::identity(K));
}

// Exhaustive search for a witness I_1 -> D_2 (or L_1 -> D_2 when `whole_lhs`).
bool brute_force_witness(const DirectTransformation& a, const DirectTransformation& b, bool whole_lhs) {
    const AttrGraphPtr& from = whole_lhs ? a.rule()->L() : a.rule()->I();
    AttrMorphism to_host = whole_lhs ? a.match.m : compose(a.match.m, compose(a.rule()->l, a.rule()->i));
    for (const GraphMorphism& j : enumerate_morphisms(from->graph(), b.D->graph(), false)) {
        bool commutes = true;
        for (const std::string& x : from->graph()->elements()) commutes = commutes && b.f(j(x)) == to_host(x);
        if (!commutes) continue;
        if (validate_attr_morphism(AttrMorphism(from, b.D, j, a.match.m.alpha())).ok()) return true;
    }
    return false;
}

}  // namespace

TEST(Rule, Validation) {
    AttrGraphPtr L = AttrGraphBuilder(SortSignature::plain(), kT).node("x", "node", {"u"}).node("y", "node", {"v"}).build();
    AttrGraphPtr K = AttrGraphBuilder(SortSignature::plain(), kT).node("x", "node", {"u"}).build();
    AttrGraphPtr R = AttrGraphBuilder(SortSignature::plain(), kT).node("x", "node", {"u", "u+v"}).build();
    EXPECT_NO_THROW(make_rule("ok", AttrMorphism::inclusion(K, L), AttrMorphism::identity(K), AttrMorphism::inclusion(K, R)));

    // v only occurs inside a sum in L.
    AttrGraphPtr L2 = AttrGraphBuilder(SortSignature::plain(), kT).node("x", "node", {"u"}).node("y", "node", {"u+v"}).build();
    EXPECT_THROW(make_rule("hidden", AttrMorphism::inclusion(K, L2), AttrMorphism::identity(K), AttrMorphism::inclusion(K, R)),
                 RuleError);

    // A non-injective left leg.
    AttrGraphPtr two = AttrGraphBuilder(SortSignature::plain(), kA).node("p").node("q").build();
    AttrGraphPtr one = AttrGraphBuilder(SortSignature::plain(), kA).node("p").build();
    AttrMorphism squash = AttrMorphism::neutral(two, one, GraphMorphism(two->graph(), one->graph(), {{"p", "p"}, {"q", "p"}}, {}));
    EXPECT_THROW(make_rule("squash", squash, AttrMorphism::identity(two), AttrMorphism::identity(two)), RuleError);

    // A lax violation on a leg.
    AttrGraphPtr La = AttrGraphBuilder(SortSignature::plain(), kA).node("p").build();
    AttrGraphPtr Ka = AttrGraphBuilder(SortSignature::plain(), kA).node("p", "node", {"a"}).build();
    EXPECT_THROW(make_rule("lax", AttrMorphism::inclusion(Ka, La), AttrMorphism::identity(Ka), AttrMorphism::identity(Ka)),
                 RuleError);
}

TEST(Match, FibonacciSum) {
    std::vector<Match> ms = find_matches(fib_sum_rule(), fib_host(1, 2));
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0].m.alpha().values(), (std::map<std::string, Term>{{"u", Term::nat(1)}, {"v", Term::nat(2)}}));
    EXPECT_EQ(ms[0].m("x"), "x");
}

TEST(Match, NoEdgeNoMatch) {
    AttrGraphPtr host = AttrGraphBuilder(SortSignature::plain(), kN).node("x", "node", {"1"}).node("y", "node", {"2"}).build();
    EXPECT_TRUE(find_matches(fib_sum_rule(), host).empty());
}

TEST(Match, OneMatchPerAssignment) {
    AttrGraphPtr host = edge_xy(kN, {"1", "4"}, {"2"});
    std::vector<Match> ms = find_matches(fib_sum_rule(), host);
    ASSERT_EQ(ms.size(), 2u);
    EXPECT_EQ(ms[0].m.alpha().values().at("u"), Term::nat(1));
    EXPECT_EQ(ms[1].m.alpha().values().at("u"), Term::nat(4));
}

TEST(Match, OverflowIsAnError) {
    AttrGraphPtr host = edge_xy(kN, {std::to_string(std::numeric_limits<std::uint64_t>::max())}, {"1"});
    std::vector<Match> ms = find_matches(fib_sum_rule(), host);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_THROW(apply_direct(ms[0]), OverflowError);
}

TEST(Direct, FibonacciTransformations) {
    DirectTransformation g2 = only(fib_sum_rule(), fib_host(1, 2));
    EXPECT_TRUE(iso(g2.H, edge_xy(kN, {"1"}, {"3"})));
    EXPECT_TRUE(iso(g2.D, edge_xy(kN, {"1"}, {})));
    EXPECT_TRUE(g2.f.is_neutral() && g2.g.is_neutral());
    EXPECT_TRUE(validate_attr_morphism(g2.n).ok());
    EXPECT_TRUE(validate_attr_morphism(g2.k).ok());
    EXPECT_EQ(compose(g2.f, g2.k), compose(g2.match.m, g2.rule()->l));

    DirectTransformation g1 = only(fib_copy_rule(), fib_host(1, 2));
    EXPECT_TRUE(iso(g1.H, edge_xy(kN, {"2"}, {"2"})));
}

TEST(Direct, IdentityRuleLeavesHost) {
    AttrGraphPtr L = edge_xy(kA, {"a"}, {});
    AttrGraphPtr host = AttrGraphBuilder(SortSignature::plain(), kA)
                            .node("p", "node", {"a"}).node("q", "node", {}).node("r", "node", {"a"})
                            .edge("e1", "edge", "p", "q", {}).edge("e2", "edge", "q", "r", {}).build();
    for (const Match& m : find_matches(identity_rule(L), host)) EXPECT_TRUE(iso(apply_direct(m).H, host));
}

TEST(AssociatedSpan, Examples) {
    AssociatedSpan sum = associated_span(*fib_sum_rule());
    EXPECT_TRUE(iso(sum.span.r.target(), edge_xy(kT, {"u"}, {"u+v"})));
    AssociatedSpan copy = associated_span(*fib_copy_rule());
    EXPECT_TRUE(iso(copy.span.r.target(), edge_xy(kT, {"v"}, {"v"})));

    AttrGraphPtr L = edge_xy(kA, {"a"}, {"a"});
    AttrGraphPtr K = edge_xy(kA, {"a"}, {});
    RulePtr span_rule = make_span_rule("s", AttrMorphism::inclusion(K, L), AttrMorphism::identity(K));
    EXPECT_TRUE(iso(associated_span(*span_rule).span.r.target(), K));
}

TEST(AssociatedSpan, ClassicalDpoExamples) {
    AttrGraphPtr host = fib_host(1, 2);
    for (const RulePtr& rule : {fib_sum_rule(), fib_copy_rule()}) {
        Match m = find_matches(rule, host).at(0);
        EXPECT_TRUE(iso(apply_span_dpo(associated_span(*rule).span, m.m).H, apply_direct(m).H));
    }
    Match copy = find_matches(fib_copy_rule(), host).at(0);
    EXPECT_TRUE(iso(apply_span_dpo(associated_span(*fib_copy_rule()).span, copy.m).H, edge_xy(kN, {"2"}, {"2"})));

    AttrGraphPtr L = edge_xy(kA, {"a"}, {});
    AttrMorphism id = AttrMorphism::identity(L);
    Span ident{"id", id, id};
    GraphMorphism sigma(L->graph(), L->graph(), {{"x", "x"}, {"y", "y"}}, {{"e", "e"}});
    EXPECT_TRUE(iso(apply_span_dpo(ident, AttrMorphism::neutral(L, L, sigma)).H, L));
}

TEST(AssociatedSpan, EquivalentOnRandomRules) {
    std::size_t nonvacuous = 0;
    for (std::uint32_t seed = 0; seed < 150; ++seed) {
        props::Outcome o = props::associated_span_equivalence(seed);
        EXPECT_TRUE(o.ok) << "seed " << seed << ": " << o.detail;
        nonvacuous += o.vacuous ? 0 : 1;
    }
    EXPECT_GT(nonvacuous, 50u);
}

TEST(Coherence, Fibonacci) {
    AttrGraphPtr host = fib_host(1, 2);
    DirectTransformation g1 = only(fib_copy_rule(), host);
    DirectTransformation g2 = only(fib_sum_rule(), host);
    std::optional<WitnessPair> w = check_parallel_coherent(g1, g2);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->second_into_first("y"), "y");
    EXPECT_FALSE(check_parallel_independent(g1, g2));

    CoherenceCheck c = coherent_set_check({g1, g2});
    ASSERT_TRUE(c.ok);
    ASSERT_EQ(c.witnesses.size(), 2u);
    for (const auto& row : c.witnesses)
        for (const auto& j : row) EXPECT_TRUE(j.has_value());
}

TEST(Coherence, SelfPairUsesKi) {
    DirectTransformation g = only(fib_sum_rule(), fib_host(1, 2));
    std::optional<WitnessPair> w = check_parallel_coherent(g, g);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->first_into_second, g.ki());
    CoherenceCheck c = coherent_set_check({g});
    ASSERT_TRUE(c.ok);
    EXPECT_EQ(*c.witnesses[0][0], g.ki());
}

TEST(Coherence, MutualDeletionIsIncoherent) {
    AttrGraphPtr host = AttrGraphBuilder(SortSignature::plain(), kA).node("p", "node", {"a"}).node("q", "node", {"a"}).build();
    std::vector<Match> ms = find_matches(drop_first(), host);
    ASSERT_EQ(ms.size(), 2u);
    DirectTransformation a = apply_direct(ms[0]), b = apply_direct(ms[1]);
    EXPECT_FALSE(check_parallel_coherent(a, b));
    EXPECT_FALSE(brute_force_witness(a, b, false));
    EXPECT_FALSE(brute_force_witness(b, a, false));
    CoherenceCheck c = coherent_set_check({a, b});
    EXPECT_FALSE(c.ok);
    try {
        pct({a, b});
        FAIL() << "incoherent set accepted";
    } catch (const IncoherentError& e) {
        EXPECT_EQ(e.first(), 0u);
        EXPECT_EQ(e.second(), 1u);
    }
}

TEST(Coherence, WitnessSearchAgreesWithExhaustiveSearch) {
    std::size_t positive = 0, negative = 0;
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        gen::Rng rng(seed);
        const gen::Flavor f = props::flavor_for(seed);
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
        for (const DirectTransformation& a : gammas)
            for (const DirectTransformation& b : gammas) {
                bool coherent = check_parallel_coherent(a, b).has_value();
                EXPECT_EQ(coherent, brute_force_witness(a, b, false) && brute_force_witness(b, a, false)) << "seed " << seed;
                bool independent = check_parallel_independent(a, b).has_value();
                EXPECT_EQ(independent, brute_force_witness(a, b, true) && brute_force_witness(b, a, true)) << "seed " << seed;
                (coherent ? positive : negative)++;
            }
    }
    EXPECT_GT(positive, 50u);
    EXPECT_GT(negative, 5u);
}

TEST(Coherence, ReflexiveAndImpliedByIndependence) {
    for (std::uint32_t seed = 0; seed < 150; ++seed) {
        props::Outcome o = props::coherence_laws(seed);
        EXPECT_TRUE(o.ok) << "seed " << seed << ": " << o.detail;
    }
}

TEST(Pct, FibonacciStep) {
    AttrGraphPtr host = fib_host(1, 2);
    ParallelStep step = pct({only(fib_copy_rule(), host), only(fib_sum_rule(), host)});
    EXPECT_TRUE(iso(step.Dprime, edge_xy(kN, {}, {})));
    EXPECT_TRUE(iso(step.H_primes[0].apex, edge_xy(kN, {"2"}, {})));
    EXPECT_TRUE(iso(step.H_primes[1].apex, edge_xy(kN, {}, {"3"})));
    EXPECT_TRUE(iso(step.Hprime, edge_xy(kN, {"2"}, {"3"})));
    EXPECT_EQ(step.Hprime->graph()->elements(), (std::vector<std::string>{"x", "y", "e"}));
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(compose(step.e[a], step.d[c]), step.witnesses[a][c]);
    EXPECT_TRUE(step.Dprime_to_host.is_neutral());
    EXPECT_TRUE(step.Dprime_to_Hprime.is_neutral());
}

TEST(Pct, SingletonMatchesDirect) {
    std::size_t nonvacuous = 0;
    for (std::uint32_t seed = 0; seed < 150; ++seed) {
        props::Outcome o = props::singleton_pct(seed);
        EXPECT_TRUE(o.ok) << "seed " << seed << ": " << o.detail;
        nonvacuous += o.vacuous ? 0 : 1;
    }
    EXPECT_GT(nonvacuous, 50u);
}

TEST(Pct, OrderInvariant) {
    AttrGraphPtr host = fib_host(1, 2);
    DirectTransformation a = only(fib_copy_rule(), host), b = only(fib_sum_rule(), host);
    EXPECT_TRUE(iso(pct({a, b}).Hprime, pct({b, a}).Hprime));

    AttrGraphPtr grid = hex_grid(3, {Axial{}});
    std::vector<DirectTransformation> gammas;
    for (const RulePtr& r : huw_rules())
        for (const Match& m : find_matches(r, grid)) gammas.push_back(apply_direct(m));
    AttrGraphPtr reference = pct(gammas).Hprime;
    gen::Rng rng(31);
    for (int round = 0; round < 3; ++round) {
        std::shuffle(gammas.begin(), gammas.end(), rng.engine());
        EXPECT_TRUE(iso(pct(gammas).Hprime, reference));
    }
}

TEST(Pct, EmptySetRejected) { EXPECT_THROW(pct({}), StructureError); }

TEST(Coproduct, FibonacciRules) {
    RuleCoproduct co = coproduct_rule(*fib_copy_rule(), *fib_sum_rule());
    EXPECT_EQ(co.rule->L()->graph()->node_count(), 4u);
    EXPECT_EQ(co.rule->L()->graph()->edge_count(), 2u);
    EXPECT_EQ(co.renamed, (std::map<std::string, std::string>{{"u", "u'"}, {"v", "v'"}}));
    EXPECT_EQ(co.rule->L()->label("in2:x"), (LabelSet{Term::variable("u'")}));

    // Two disjoint Fibonacci pairs: the coproduct rewrites both at once.
    AttrGraphPtr host = AttrGraphBuilder(SortSignature::plain(), kN)
                            .node("a", "node", {"1"}).node("b", "node", {"2"}).edge("ab", "edge", "a", "b", {})
                            .node("c", "node", {"5"}).node("d", "node", {"8"}).edge("cd", "edge", "c", "d", {})
                            .build();
    Match m1 = find_matches(fib_copy_rule(), host).at(0);
    std::vector<Match> sums = find_matches(fib_sum_rule(), host);
    ASSERT_EQ(sums.size(), 2u);
    AttrMorphism joint = copair_matches(co, m1.m, sums[1].m);
    EXPECT_EQ(joint.alpha().values().at("v'"), Term::nat(8));
    AttrGraphPtr expected = AttrGraphBuilder(SortSignature::plain(), kN)
                                .node("a", "node", {"2"}).node("b", "node", {"2"}).edge("ab", "edge", "a", "b", {})
                                .node("c", "node", {"5"}).node("d", "node", {"13"}).edge("cd", "edge", "c", "d", {})
                                .build();
    EXPECT_TRUE(iso(apply_direct(Match{co.rule, joint}).H, expected));
}

TEST(Coproduct, EmptyRuleIsUnit) {
    AttrGraphPtr empty = AttrGraphBuilder(SortSignature::plain(), Algebra::terms(OpSignature::plus(), {})).build();
    AttrMorphism id = AttrMorphism::identity(empty);
    RulePtr nothing = make_rule("none", id, id, id);
    RuleCoproduct co = coproduct_rule(*fib_sum_rule(), *nothing);
    EXPECT_TRUE(iso(co.rule->L(), fib_sum_rule()->L()));
    EXPECT_TRUE(iso(co.rule->R(), fib_sum_rule()->R()));
}

TEST(Coproduct, WithItselfDoubles) {
    RuleCoproduct co = coproduct_rule(*fib_sum_rule(), *fib_sum_rule());
    EXPECT_EQ(co.rule->L()->graph()->element_count(), 2 * fib_sum_rule()->L()->graph()->element_count());
    EXPECT_EQ(co.rule->algebra().variables(), (std::set<std::string>{"u", "v", "u'", "v'"}));
}

TEST(Independence, TheoremOnRandomPairs) {
    std::size_t nonvacuous = 0;
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        props::Outcome o = props::independence_theorem(seed);
        EXPECT_TRUE(o.ok) << "seed " << seed << ": " << o.detail;
        nonvacuous += o.vacuous ? 0 : 1;
    }
    EXPECT_GT(nonvacuous, 50u);
}

TEST(Independence, ReaddedValueNeedsNonMaximalComplement) {
    // "drop" deletes a from x; "add" keeps b and adds a back.
    const Algebra ab = Algebra::enumeration({"a", "b"});
    auto one = [&](std::vector<std::string> labels) {
        return AttrGraphBuilder(SortSignature::plain(), ab).node("x", "node", labels).build();
    };
    AttrGraphPtr empty = one({}), with_b = one({"b"});
    RulePtr drop = make_rule("drop", AttrMorphism::inclusion(empty, one({"a"})), AttrMorphism::identity(empty),
                             AttrMorphism::identity(empty));
    RulePtr add = make_rule("add", AttrMorphism::identity(with_b), AttrMorphism::identity(with_b),
                            AttrMorphism::inclusion(with_b, one({"a", "b"})));
    AttrGraphPtr host = one({"a", "b"});
    DirectTransformation d = apply_direct(find_matches(drop, host).at(0));
    DirectTransformation a = apply_direct(find_matches(add, host).at(0));
    std::optional<WitnessPair> w = check_parallel_independent(d, a);
    ASSERT_TRUE(w.has_value());
    AttrGraphPtr parallel = pct({d, a}).Hprime;
    EXPECT_EQ(parallel->label("x"), (LabelSet{Term::symbol("a"), Term::symbol("b")}));

    std::vector<Match> ms{d.match, a.match};
    EXPECT_TRUE(iso(apply_sequentially(ms, {0, 1}).result, parallel));
    // add then drop: the maximal complement removes the re-added a.
    EXPECT_EQ(apply_sequentially(ms, {1, 0}).result->label("x"), (LabelSet{Term::symbol("b")}));
    std::vector<AttrGraphPtr> second = props::all_direct_results(Match{drop, compose(a.g, w->first_into_second)});
    EXPECT_EQ(second.size(), 2u);
    EXPECT_TRUE(std::any_of(second.begin(), second.end(), [&](const AttrGraphPtr& h) { return iso(h, parallel); }));
}

TEST(Independence, ComplementOracleContainsMaximalChoice) {
    std::size_t checked = 0;
    for (std::uint32_t seed = 0; seed < 100; ++seed) {
        gen::Rng rng(seed);
        const gen::Flavor f = props::flavor_for(seed);
        RulePtr rule = gen::random_rule(rng, f, "rho");
        AttrGraphPtr host = gen::random_host_for(rng, *rule, f);
        for (const Match& m : find_matches(rule, host)) {
            std::optional<DirectTransformation> t;
            try {
                t = apply_direct(m);
            } catch (const GluingError&) {
                continue;
            }
            std::vector<AttrGraphPtr> all = props::all_direct_results(m);
            EXPECT_TRUE(std::any_of(all.begin(), all.end(), [&](const AttrGraphPtr& h) { return *h == *t->H; }))
                << "seed " << seed;
            ++checked;
        }
    }
    EXPECT_GT(checked, 50u);
}

TEST(DerivedSpan, Fibonacci) {
    Span s = derive_span_from_pct({fib_copy_rule(), fib_sum_rule()});
    EXPECT_TRUE(iso(s.l.target(), edge_xy(kT, {"u"}, {"v"})));
    EXPECT_TRUE(iso(s.l.source(), edge_xy(kT, {}, {})));
    EXPECT_TRUE(iso(s.r.target(), edge_xy(kT, {"v"}, {"u+v"})));
    EXPECT_TRUE(s.l.is_neutral() && s.r.is_neutral());
}

TEST(DerivedSpan, SingleRuleIsAssociatedSpan) {
    for (const RulePtr& rule : {fib_sum_rule(), fib_copy_rule()}) {
        Span derived = derive_span_from_pct({rule});
        AssociatedSpan assoc = associated_span(*rule);
        EXPECT_TRUE(iso(derived.l.source(), assoc.span.l.source()));
        EXPECT_TRUE(iso(derived.r.target(), assoc.span.r.target()));
    }
}

TEST(DerivedSpan, IdentityRule) {
    AttrGraphPtr L = edge_xy(kA, {"a"}, {});
    Span s = derive_span_from_pct({identity_rule(L)});
    EXPECT_TRUE(iso(s.l.source(), L));
    EXPECT_TRUE(iso(s.r.target(), L));
}

TEST(DerivedSpan, DifferentLeftSidesRejected) {
    EXPECT_THROW(derive_span_from_pct({fib_sum_rule(), drop_first()}), RuleError);
}

TEST(Sequential, SkipsMatchesThatDoNotSurvive) {
    AttrGraphPtr host = fib_host(1, 2);
    std::vector<Match> ms{find_matches(fib_copy_rule(), host).at(0), find_matches(fib_sum_rule(), host).at(0)};
    SequentialRun run = apply_sequentially(ms, {0, 1});
    EXPECT_EQ(run.applied, (std::vector<std::size_t>{0}));
    EXPECT_EQ(run.skipped, (std::vector<std::size_t>{1}));
    EXPECT_TRUE(iso(run.result, edge_xy(kN, {"2"}, {"2"})));
}
