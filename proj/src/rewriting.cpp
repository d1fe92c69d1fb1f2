#include "wdpo/rewriting.hpp"

#include <algorithm>
#include <unordered_map>

#include "wdpo/error.hpp"

namespace wdpo {

namespace {

void require_rule_leg(const AttrMorphism& leg, const std::string& rule, const char* which) {
    if (!leg.is_neutral())
        throw RuleError("rule '" + rule + "': leg " + which + " is not neutral");
    if (!leg.is_mono()) throw RuleError("rule '" + rule + "': leg " + which + " is not injective");
    ValidationReport report = validate_attr_morphism(leg);
    if (!report.ok())
        throw RuleError("rule '" + rule + "': leg " + which + " violates labels: " + report.summary());
}

bool includes(const LabelSet& big, const LabelSet& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Raw composite of graph parts with a given algebra component; the caller
// guarantees the label condition.
AttrMorphism unchecked(const AttrGraphPtr& source, const AttrGraphPtr& target, GraphMorphism sigma,
                       const AlgebraMorphism& alpha) {
    return AttrMorphism(source, target, std::move(sigma), alpha);
}

Term rename_variables(const Term& t, const std::map<std::string, std::string>& renamed) {
    switch (t.kind()) {
    case Term::Kind::Variable: {
        auto it = renamed.find(t.name());
        return it == renamed.end() ? t : Term::variable(it->second);
    }
    case Term::Kind::Apply: {
        std::vector<Term> args;
        for (const Term& a : t.args()) args.push_back(rename_variables(a, renamed));
        return Term::apply(t.name(), std::move(args));
    }
    default:
        return t;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Rules

RulePtr make_rule(std::string name, AttrMorphism l, AttrMorphism i, AttrMorphism r) {
    if (!same_attr_graph(i.target(), l.source()))
        throw RuleError("rule '" + name + "': i does not end in K");
    if (!same_attr_graph(i.source(), r.source()))
        throw RuleError("rule '" + name + "': i and r do not share I");
    require_rule_leg(l, name, "l");
    require_rule_leg(i, name, "i");
    require_rule_leg(r, name, "r");
    const Algebra& algebra = l.target()->algebra();
    if (!(r.target()->algebra() == algebra))
        throw RuleError("rule '" + name + "': L and R over different algebras");

    std::set<std::string> bare;
    for (const auto& [id, labels] : l.target()->labels())
        for (const Term& t : labels)
            if (t.kind() == Term::Kind::Variable) bare.insert(t.name());
    for (const std::string& v : algebra.variables())
        if (!bare.contains(v))
            throw RuleError("rule '" + name + "': variable '" + v +
                            "' is not the label of any element of L");

    return std::make_shared<const WeakSpan>(
        WeakSpan{std::move(name), std::move(l), std::move(i), std::move(r)});
}

RulePtr make_span_rule(std::string name, AttrMorphism l, AttrMorphism r) {
    AttrMorphism i = AttrMorphism::identity(l.source());
    return make_rule(std::move(name), std::move(l), std::move(i), std::move(r));
}

// ---------------------------------------------------------------------------
// Matching

std::optional<AlgebraMorphism> fixed_alpha(const Algebra& rule_algebra, const Algebra& host_algebra) {
    if (rule_algebra.kind() == Algebra::Kind::Terms) return std::nullopt;
    if (!(rule_algebra == host_algebra))
        throw SignatureError("rule algebra " + rule_algebra.describe() + " does not act on " +
                             host_algebra.describe());
    return AlgebraMorphism::identity(rule_algebra);
}

std::vector<Match> find_matches(const RulePtr& rule, const AttrGraphPtr& host) {
    const AttributedGraph& L = *rule->L();
    const Algebra& A = rule->algebra();
    const Algebra& B = host->algebra();
    const std::optional<AlgebraMorphism> fixed = fixed_alpha(A, B);

    SearchOptions options;
    options.injective = true;
    if (fixed) {
        options.accept = [&](const std::string& x, const std::string& y) {
            return includes(host->label(y), L.label(x));
        };
    } else {
        options.accept = [&](const std::string& x, const std::string& y) {
            return L.label(x).empty() || !host->label(y).empty();
        };
    }
    std::vector<GraphMorphism> sigmas;
    search_morphisms(L.graph(), host->graph(), options, [&](const GraphMorphism& s) {
        sigmas.push_back(s);
        return true;
    });
    std::sort(sigmas.begin(), sigmas.end(), [](const GraphMorphism& a, const GraphMorphism& b) {
        if (a.node_map() != b.node_map()) return a.node_map() < b.node_map();
        return a.edge_map() < b.edge_map();
    });

    std::vector<Match> out;
    if (fixed) {
        for (GraphMorphism& s : sigmas)
            out.push_back(Match{rule, AttrMorphism(rule->L(), host, std::move(s), *fixed)});
        return out;
    }

    const std::vector<std::string> vars(A.variables().begin(), A.variables().end());
    const std::vector<std::string> elements = L.graph()->elements();
    for (GraphMorphism& s : sigmas) {
        // Candidate values: host labels at every bare occurrence of the variable.
        std::vector<std::vector<Term>> candidates;
        bool feasible = true;
        for (const std::string& v : vars) {
            const Term var = Term::variable(v);
            std::optional<LabelSet> pool;
            for (const std::string& x : elements) {
                if (!L.label(x).contains(var)) continue;
                const LabelSet& have = host->label(s(x));
                if (!pool) {
                    pool = have;
                } else {
                    LabelSet both;
                    std::set_intersection(pool->begin(), pool->end(), have.begin(), have.end(),
                                          std::inserter(both, both.end()));
                    pool = std::move(both);
                }
            }
            if (!pool || pool->empty()) {
                feasible = false;
                break;
            }
            candidates.emplace_back(pool->begin(), pool->end());
        }
        if (!feasible) continue;

        std::vector<std::size_t> pick(vars.size(), 0);
        while (true) {
            std::map<std::string, Term> values;
            for (std::size_t k = 0; k < vars.size(); ++k) values.emplace(vars[k], candidates[k][pick[k]]);
            AlgebraMorphism alpha = AlgebraMorphism::assignment(A, B, std::move(values));
            bool ok = true;
            for (const std::string& x : elements) {
                try {
                    if (!includes(host->label(s(x)), apply_to_labelset(alpha, L.label(x)))) {
                        ok = false;
                        break;
                    }
                } catch (const OverflowError&) {
                    throw;
                } catch (const EvaluationError&) {
                    ok = false;
                    break;
                }
            }
            if (ok) out.push_back(Match{rule, AttrMorphism(rule->L(), host, s, alpha)});

            std::size_t k = vars.size();
            while (k > 0 && ++pick[k - 1] == candidates[k - 1].size()) pick[--k] = 0;
            if (k == 0) break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Direct transformations

AttrMorphism DirectTransformation::ki() const {
    const AttrMorphism& i = match.rule->i;
    return unchecked(i.source(), D, compose(k.sigma(), i.sigma()), k.alpha());
}

DirectTransformation apply_direct(const Match& match) {
    const WeakSpan& rule = *match.rule;
    ComplementResult c = pushout_complement(rule.l, match.m);
    AttrMorphism ki = unchecked(rule.I(), c.complement, compose(c.k_to_complement.sigma(), rule.i.sigma()),
                                c.k_to_complement.alpha());
    PushoutResult po = pushout_along_neutral(rule.r, ki, rule.name);
    return DirectTransformation{match,
                                c.complement,
                                std::move(c.k_to_complement),
                                std::move(c.complement_to_host),
                                po.apex,
                                std::move(po.from_other_side),
                                std::move(po.from_neutral_side),
                                std::move(c.deletion_sets)};
}

AssociatedSpan associated_span(const WeakSpan& rule) {
    PushoutResult po = pushout_along_neutral(rule.i, rule.r, "");
    return AssociatedSpan{Span{rule.name, rule.l, std::move(po.from_neutral_side)},
                          std::move(po.from_other_side)};
}

SpanTransformation apply_span_dpo(const Span& span, const AttrMorphism& m) {
    ComplementResult c = pushout_complement(span.l, m);
    PushoutResult po = pushout_along_neutral(span.r, c.k_to_complement, span.name);
    return SpanTransformation{c.complement,
                              std::move(c.k_to_complement),
                              std::move(c.complement_to_host),
                              po.apex,
                              std::move(po.from_other_side),
                              std::move(po.from_neutral_side)};
}

// ---------------------------------------------------------------------------
// Coherence and independence

std::optional<AttrMorphism> factor_through_context(const AttrMorphism& into_host,
                                                   const DirectTransformation& target,
                                                   std::string* failing) {
    if (!same_attr_graph(into_host.target(), target.host()))
        throw StructureError("witness search across different hosts");
    std::unordered_map<std::string, std::string> pre;
    const GraphMorphism& f = target.f.sigma();
    for (const auto& [x, y] : f.node_map()) pre.emplace(y, x);
    for (const auto& [x, y] : f.edge_map()) pre.emplace(y, x);

    const Graph& from = *into_host.source()->graph();
    IdMap nodes, edges;
    auto lookup = [&](const std::string& u, IdMap& into) {
        const std::string& w = into_host(u);
        auto it = pre.find(w);
        if (it == pre.end()) {
            if (failing) *failing = w;
            return false;
        }
        into.emplace(u, it->second);
        return true;
    };
    for (const auto& [u, s] : from.nodes())
        if (!lookup(u, nodes)) return std::nullopt;
    for (const auto& [u, e] : from.edges())
        if (!lookup(u, edges)) return std::nullopt;

    AttrMorphism j(into_host.source(), target.D,
                   GraphMorphism(into_host.source()->graph(), target.D->graph(), std::move(nodes),
                                 std::move(edges)),
                   into_host.alpha());
    ValidationReport report = validate_attr_morphism(j);
    if (!report.ok()) {
        if (failing)
            *failing = report.labels.empty() ? into_host(from.elements().front())
                                             : into_host(report.labels.front().element);
        return std::nullopt;
    }
    return j;
}

namespace {

AttrMorphism i_to_host(const DirectTransformation& g) {
    const WeakSpan& rule = *g.rule();
    return unchecked(rule.I(), g.host(),
                     compose(g.match.m.sigma(), compose(rule.l.sigma(), rule.i.sigma())),
                     g.match.m.alpha());
}

void require_common_host(const DirectTransformation& a, const DirectTransformation& b) {
    if (!same_attr_graph(a.host(), b.host()))
        throw StructureError("direct transformations of different hosts");
}

} // namespace

std::optional<WitnessPair> check_parallel_coherent(const DirectTransformation& g1,
                                                   const DirectTransformation& g2) {
    require_common_host(g1, g2);
    auto j1 = factor_through_context(i_to_host(g1), g2);
    if (!j1) return std::nullopt;
    auto j2 = factor_through_context(i_to_host(g2), g1);
    if (!j2) return std::nullopt;
    return WitnessPair{std::move(*j1), std::move(*j2)};
}

std::optional<WitnessPair> check_parallel_independent(const DirectTransformation& g1,
                                                      const DirectTransformation& g2) {
    require_common_host(g1, g2);
    auto j1 = factor_through_context(g1.match.m, g2);
    if (!j1) return std::nullopt;
    auto j2 = factor_through_context(g2.match.m, g1);
    if (!j2) return std::nullopt;
    return WitnessPair{std::move(*j1), std::move(*j2)};
}

CoherenceCheck coherent_set_check(const std::vector<DirectTransformation>& gammas) {
    if (gammas.empty()) throw StructureError("coherence check of an empty set");
    const std::size_t p = gammas.size();
    for (const DirectTransformation& g : gammas) require_common_host(gammas.front(), g);

    CoherenceCheck out;
    out.witnesses.assign(p, std::vector<std::optional<AttrMorphism>>(p));
    std::vector<AttrMorphism> into_host;
    for (const DirectTransformation& g : gammas) into_host.push_back(i_to_host(g));
    for (std::size_t c = 0; c < p; ++c) out.witnesses[c][c] = gammas[c].ki();
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b) {
            std::string failing;
            auto ab = factor_through_context(into_host[b], gammas[a], &failing);
            if (ab) {
                auto ba = factor_through_context(into_host[a], gammas[b], &failing);
                if (ba) {
                    out.witnesses[a][b] = std::move(ab);
                    out.witnesses[b][a] = std::move(ba);
                    continue;
                }
            }
            out.ok = false;
            out.first = a;
            out.second = b;
            out.element = failing;
            return out;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Parallel coherent transformation

ParallelStep pct(std::vector<DirectTransformation> gammas) {
    CoherenceCheck check = coherent_set_check(gammas);
    if (!check.ok)
        throw IncoherentError("transformations " + std::to_string(check.first) + " and " +
                                  std::to_string(check.second) + " are not parallel coherent at '" +
                                  check.element + "'",
                              check.first, check.second, check.element);
    const std::size_t p = gammas.size();
    for (const DirectTransformation& g : gammas)
        if (!g.f.is_neutral() || !g.g.is_neutral())
            throw ConstructionError("parallel step needs neutral direct transformations");

    std::vector<std::vector<AttrMorphism>> witnesses(p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t c = 0; c < p; ++c) witnesses[a].push_back(std::move(*check.witnesses[a][c]));

    std::vector<AttrMorphism> fs;
    for (const DirectTransformation& g : gammas) fs.push_back(g.f);
    LimitResult limit = limit_of_neutrals(fs);

    // D' elements are determined by their images under e_1..e_p.
    std::map<std::vector<std::string>, std::string> by_images;
    for (const std::string& x : limit.apex->graph()->elements()) {
        std::vector<std::string> key;
        key.reserve(p);
        for (const AttrMorphism& e : limit.legs) key.push_back(e(x));
        by_images.emplace(std::move(key), x);
    }

    std::vector<AttrMorphism> d;
    for (std::size_t c = 0; c < p; ++c) {
        const AttrGraphPtr& I = gammas[c].rule()->I();
        IdMap nodes, edges;
        for (const std::string& u : I->graph()->elements()) {
            std::vector<std::string> key;
            key.reserve(p);
            for (std::size_t a = 0; a < p; ++a) key.push_back(witnesses[a][c](u));
            auto it = by_images.find(key);
            if (it == by_images.end())
                throw ConstructionError("no mediating element in D' for '" + u + "' of rule '" +
                                        gammas[c].rule()->name + "'");
            (I->graph()->has_node(u) ? nodes : edges).emplace(u, it->second);
        }
        AttrMorphism dc(I, limit.apex,
                        GraphMorphism(I->graph(), limit.apex->graph(), std::move(nodes), std::move(edges)),
                        gammas[c].match.m.alpha());
        require_valid(dc);
        d.push_back(std::move(dc));
    }

    std::vector<PushoutResult> H_primes;
    std::vector<AttrMorphism> g_primes;
    for (std::size_t a = 0; a < p; ++a) {
        H_primes.push_back(pushout_along_neutral(gammas[a].rule()->r, d[a], gammas[a].rule()->name));
        g_primes.push_back(H_primes.back().from_other_side);
    }
    ColimitResult colimit = colimit_of_neutrals(g_primes, "");

    return ParallelStep{std::move(gammas),      std::move(witnesses), limit.apex,
                        std::move(limit.legs),  std::move(d),         std::move(H_primes),
                        colimit.apex,           std::move(colimit.legs),
                        std::move(limit.to_target), std::move(colimit.from_source)};
}

// ---------------------------------------------------------------------------
// Coproducts

namespace {

struct SummedObject {
    AttrGraphPtr graph;
    GraphMorphism in1;
    GraphMorphism in2;
};

SummedObject sum_objects(const AttrGraphPtr& a, const AttrGraphPtr& b, const Algebra& algebra,
                         const std::map<std::string, std::string>& renamed) {
    GraphCoproduct sum = disjoint_union(a->graph(), b->graph());
    Labeling labels;
    for (const std::string& x : a->graph()->elements()) labels[sum.in_first(x)] = a->label(x);
    for (const std::string& x : b->graph()->elements()) {
        LabelSet& s = labels[sum.in_second(x)];
        for (const Term& t : b->label(x)) s.insert(rename_variables(t, renamed));
    }
    return SummedObject{freeze(AttributedGraph(sum.graph, algebra, std::move(labels))),
                        std::move(sum.in_first), std::move(sum.in_second)};
}

AttrMorphism sum_morphisms(const SummedObject& from, const SummedObject& to, const AttrMorphism& f1,
                           const AttrMorphism& f2) {
    IdMap nodes, edges;
    auto add = [&](const GraphMorphism& in_from, const GraphMorphism& in_to, const AttrMorphism& f) {
        for (const auto& [x, s] : f.source()->graph()->nodes()) nodes.emplace(in_from(x), in_to(f(x)));
        for (const auto& [x, e] : f.source()->graph()->edges()) edges.emplace(in_from(x), in_to(f(x)));
    };
    add(from.in1, to.in1, f1);
    add(from.in2, to.in2, f2);
    return AttrMorphism::neutral(
        from.graph, to.graph,
        GraphMorphism(from.graph->graph(), to.graph->graph(), std::move(nodes), std::move(edges)));
}

Term value_of(const AlgebraMorphism& alpha, const std::string& v) {
    if (alpha.is_identity()) return Term::variable(v);
    return alpha.values().at(v);
}

} // namespace

RuleCoproduct coproduct_rule(const WeakSpan& r1, const WeakSpan& r2) {
    const Algebra& A1 = r1.algebra();
    const Algebra& A2 = r2.algebra();
    std::map<std::string, std::string> renamed;
    Algebra combined = A1;
    if (A1.kind() == Algebra::Kind::Terms && A2.kind() == Algebra::Kind::Terms) {
        if (!(A1.signature() == A2.signature()))
            throw RuleError("coproduct of rules over different term signatures");
        std::set<std::string> vars = A1.variables();
        for (const std::string& v : A2.variables()) {
            std::string fresh = v;
            while (A1.variables().contains(fresh) || (fresh != v && A2.variables().contains(fresh)) ||
                   (fresh != v && vars.contains(fresh)))
                fresh += "'";
            if (fresh != v) renamed.emplace(v, fresh);
            vars.insert(fresh);
        }
        combined = Algebra::terms(A1.signature(), std::move(vars));
    } else if (!(A1 == A2)) {
        throw RuleError("coproduct of rules over different algebras");
    }

    SummedObject L = sum_objects(r1.L(), r2.L(), combined, renamed);
    SummedObject K = sum_objects(r1.K(), r2.K(), combined, renamed);
    SummedObject I = sum_objects(r1.I(), r2.I(), combined, renamed);
    SummedObject R = sum_objects(r1.R(), r2.R(), combined, renamed);
    RulePtr rule = make_rule(r1.name + "+" + r2.name, sum_morphisms(K, L, r1.l, r2.l),
                             sum_morphisms(I, K, r1.i, r2.i), sum_morphisms(I, R, r1.r, r2.r));
    return RuleCoproduct{std::move(rule), std::move(renamed)};
}

AttrMorphism copair_matches(const RuleCoproduct& coproduct, const AttrMorphism& m1,
                            const AttrMorphism& m2) {
    if (!same_attr_graph(m1.target(), m2.target()))
        throw StructureError("copairing matches into different hosts");
    const AttrGraphPtr& L = coproduct.rule->L();
    const AttrGraphPtr& host = m1.target();
    GraphCoproduct sum = disjoint_union(m1.source()->graph(), m2.source()->graph());
    IdMap nodes, edges;
    for (const auto& [x, s] : m1.source()->graph()->nodes()) nodes.emplace(sum.in_first(x), m1(x));
    for (const auto& [x, e] : m1.source()->graph()->edges()) edges.emplace(sum.in_first(x), m1(x));
    for (const auto& [x, s] : m2.source()->graph()->nodes()) nodes.emplace(sum.in_second(x), m2(x));
    for (const auto& [x, e] : m2.source()->graph()->edges()) edges.emplace(sum.in_second(x), m2(x));
    GraphMorphism sigma(L->graph(), host->graph(), std::move(nodes), std::move(edges));

    const Algebra& A = L->algebra();
    if (A.kind() != Algebra::Kind::Terms)
        return require_valid(AttrMorphism(L, host, std::move(sigma), *fixed_alpha(A, host->algebra())));
    std::map<std::string, Term> values;
    for (const std::string& v : m1.source()->algebra().variables()) values.emplace(v, value_of(m1.alpha(), v));
    for (const std::string& v : m2.source()->algebra().variables()) {
        auto it = coproduct.renamed.find(v);
        values.emplace(it == coproduct.renamed.end() ? v : it->second, value_of(m2.alpha(), v));
    }
    AttrMorphism m(L, host, std::move(sigma),
                   AlgebraMorphism::assignment(A, host->algebra(), std::move(values)));
    return require_valid(m);
}

// ---------------------------------------------------------------------------
// Derived span

Span derive_span_from_pct(const std::vector<RulePtr>& rules, const std::string& name) {
    if (rules.empty()) throw RuleError("no rules to combine");
    const AttrGraphPtr& host = rules.front()->L();
    std::vector<DirectTransformation> gammas;
    for (const RulePtr& rule : rules) {
        if (!same_attr_graph(rule->L(), host))
            throw RuleError("rule '" + rule->name + "' has a different left-hand side");
        gammas.push_back(apply_direct(Match{rule, AttrMorphism::inclusion(rule->L(), host)}));
    }
    ParallelStep step = pct(std::move(gammas));
    return Span{name, std::move(step.Dprime_to_host), std::move(step.Dprime_to_Hprime)};
}

// ---------------------------------------------------------------------------
// Sequential application

SequentialRun apply_sequentially(const std::vector<Match>& matches,
                                 const std::vector<std::size_t>& order) {
    if (matches.empty()) throw StructureError("no matches to apply");
    AttrGraphPtr current = matches.front().host();
    std::vector<std::optional<AttrMorphism>> pending;
    for (const Match& m : matches) {
        if (!same_attr_graph(m.host(), current)) throw StructureError("matches of different hosts");
        pending.push_back(m.m);
    }

    SequentialRun run;
    for (std::size_t idx : order) {
        if (idx >= matches.size()) throw StructureError("match index out of range");
        if (!pending[idx]) continue;
        AttrMorphism m = std::move(*pending[idx]);
        pending[idx].reset();
        if (!validate_attr_morphism(m).ok()) {
            run.skipped.push_back(idx);
            continue;
        }
        std::optional<DirectTransformation> applied;
        try {
            applied = apply_direct(Match{matches[idx].rule, m});
        } catch (const GluingError&) {
            run.skipped.push_back(idx);
            continue;
        }
        const DirectTransformation& step = *applied;
        run.applied.push_back(idx);

        std::unordered_map<std::string, std::string> track;  // G element -> H element
        for (const auto& [x, y] : step.f.sigma().node_map()) track.emplace(y, step.g(x));
        for (const auto& [x, y] : step.f.sigma().edge_map()) track.emplace(y, step.g(x));
        for (std::size_t j = 0; j < pending.size(); ++j) {
            if (!pending[j]) continue;
            const AttrMorphism& old = *pending[j];
            IdMap nodes, edges;
            bool survives = true;
            for (const std::string& x : old.source()->graph()->elements()) {
                auto it = track.find(old(x));
                if (it == track.end()) {
                    survives = false;
                    break;
                }
                (old.source()->graph()->has_node(x) ? nodes : edges).emplace(x, it->second);
            }
            if (!survives) {
                run.skipped.push_back(j);
                pending[j].reset();
                continue;
            }
            pending[j] = AttrMorphism(old.source(), step.H,
                                      GraphMorphism(old.source()->graph(), step.H->graph(),
                                                    std::move(nodes), std::move(edges)),
                                      old.alpha());
        }
        current = step.H;
    }
    run.result = current;
    return run;
}

} // namespace wdpo
