#ifndef WDPO_REWRITING_HPP
#define WDPO_REWRITING_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wdpo/constructions.hpp"

namespace wdpo {

// L <-l- K <-i- I -r-> R with l, i, r neutral and injective.
struct WeakSpan {
    std::string name;
    AttrMorphism l;
    AttrMorphism i;
    AttrMorphism r;

    const AttrGraphPtr& L() const { return l.target(); }
    const AttrGraphPtr& K() const { return l.source(); }
    const AttrGraphPtr& I() const { return i.source(); }
    const AttrGraphPtr& R() const { return r.target(); }
    const Algebra& algebra() const { return L()->algebra(); }
};

using RulePtr = std::shared_ptr<const WeakSpan>;

// Validates the rule: legs neutral, mono and composable, one algebra, and
// every variable of the rule algebra occurring as a bare label in L.
// Throws RuleError.
RulePtr make_rule(std::string name, AttrMorphism l, AttrMorphism i, AttrMorphism r);

// A span rule as a weak span with I = K and i the identity.
RulePtr make_span_rule(std::string name, AttrMorphism l, AttrMorphism r);

struct Match {
    RulePtr rule;
    AttrMorphism m;  // L -> host

    const AttrGraphPtr& host() const { return m.target(); }
};

// Injective graph matches, each paired with every variable assignment that
// satisfies the label condition. Ordered by graph morphism, then assignment.
std::vector<Match> find_matches(const RulePtr& rule, const AttrGraphPtr& host);

// The algebra morphism for a rule acting on `host` when the rule has no
// variables to assign; throws SignatureError if the algebras are unrelated.
std::optional<AlgebraMorphism> fixed_alpha(const Algebra& rule_algebra, const Algebra& host_algebra);

struct DirectTransformation {
    Match match;
    AttrGraphPtr D;
    AttrMorphism k;  // K -> D
    AttrMorphism f;  // D -> G, neutral
    AttrGraphPtr H;
    AttrMorphism g;  // D -> H, neutral
    AttrMorphism n;  // R -> H
    Labeling deletion_sets;

    const RulePtr& rule() const { return match.rule; }
    const AttrGraphPtr& host() const { return match.m.target(); }
    // k . i : I -> D
    AttrMorphism ki() const;
};

// Elements created by the rule are named "<rule name>:<R id>".
DirectTransformation apply_direct(const Match& match);

// L <-l- K -r-> R.
struct Span {
    std::string name;
    AttrMorphism l;
    AttrMorphism r;
};

struct AssociatedSpan {
    Span span;
    AttrMorphism i_prime;  // R -> R'
};

AssociatedSpan associated_span(const WeakSpan& rule);

struct SpanTransformation {
    AttrGraphPtr D;
    AttrMorphism k;
    AttrMorphism f;
    AttrGraphPtr H;
    AttrMorphism g;
    AttrMorphism n;
};

// Classical double pushout; m is a match of span.l's target.
SpanTransformation apply_span_dpo(const Span& span, const AttrMorphism& m);

// Morphism `into` -> D of `target` through the mono f leg, given the
// composite `to_host`: into -> G. Absent when an element has no preimage
// or the label condition fails; `failing` then names the host element.
std::optional<AttrMorphism> factor_through_context(const AttrMorphism& to_host,
                                                   const DirectTransformation& target,
                                                   std::string* failing = nullptr);

struct WitnessPair {
    AttrMorphism first_into_second;  // from gamma_1's I (or L) into D_2
    AttrMorphism second_into_first;  // from gamma_2's I (or L) into D_1
};

std::optional<WitnessPair> check_parallel_coherent(const DirectTransformation& g1,
                                                   const DirectTransformation& g2);

std::optional<WitnessPair> check_parallel_independent(const DirectTransformation& g1,
                                                      const DirectTransformation& g2);

struct CoherenceCheck {
    // witnesses[a][c] : I_c -> D_a; complete only when ok.
    std::vector<std::vector<std::optional<AttrMorphism>>> witnesses;
    bool ok = true;
    std::size_t first = 0;
    std::size_t second = 0;
    std::string element;
};

CoherenceCheck coherent_set_check(const std::vector<DirectTransformation>& gammas);

struct ParallelStep {
    std::vector<DirectTransformation> gammas;
    std::vector<std::vector<AttrMorphism>> witnesses;  // [a][c] : I_c -> D_a
    AttrGraphPtr Dprime;
    std::vector<AttrMorphism> e;         // D' -> D_a
    std::vector<AttrMorphism> d;         // I_c -> D'
    std::vector<PushoutResult> H_primes; // over <r_a, d_a>
    AttrGraphPtr Hprime;
    std::vector<AttrMorphism> h;         // H'_a -> H'
    AttrMorphism Dprime_to_host;
    AttrMorphism Dprime_to_Hprime;
};

// Throws IncoherentError naming the first incoherent pair.
ParallelStep pct(std::vector<DirectTransformation> gammas);

struct RuleCoproduct {
    RulePtr rule;
    // Renaming applied to the second rule's variables.
    std::map<std::string, std::string> renamed;
};

// Componentwise disjoint union; ids "in1:<id>" and "in2:<id>".
RuleCoproduct coproduct_rule(const WeakSpan& r1, const WeakSpan& r2);

// The match L1 + L2 -> G induced by two matches of the summands.
AttrMorphism copair_matches(const RuleCoproduct& coproduct, const AttrMorphism& m1,
                            const AttrMorphism& m2);

// Applies every rule to its common left-hand side by the identity match and
// returns L <- D' -> H'.
Span derive_span_from_pct(const std::vector<RulePtr>& rules, const std::string& name = "derived");

struct SequentialRun {
    AttrGraphPtr result;
    std::vector<std::size_t> applied;  // indices into the input matches
    std::vector<std::size_t> skipped;  // matches that did not survive
};

// Applies the matches one after the other in `order`, carrying the
// remaining matches along each step's D -> H track.
SequentialRun apply_sequentially(const std::vector<Match>& matches,
                                 const std::vector<std::size_t>& order);

} // namespace wdpo

#endif // WDPO_REWRITING_HPP
