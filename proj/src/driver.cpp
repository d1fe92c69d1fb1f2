#include "wdpo/driver.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "wdpo/error.hpp"

namespace wdpo {

Transformations all_transformations(const std::vector<RulePtr>& rules, const AttrGraphPtr& host) {
    Transformations out;
    for (const RulePtr& rule : rules) {
        std::vector<Match> found = find_matches(rule, host);
        out.per_rule.emplace_back(rule->name, found.size());
        for (std::size_t k = 0; k < found.size(); ++k) {
            try {
                out.gammas.push_back(apply_direct(found[k]));
                out.matches.push_back(std::move(found[k]));
            } catch (const GluingError& e) {
                out.gluing_failures.push_back(rule->name + "#" + std::to_string(k) + ": " + e.what());
            }
        }
    }
    return out;
}

RunResult run_system(const std::vector<RulePtr>& rules, const AttrGraphPtr& host, std::size_t steps,
                     RunMode mode) {
    RunResult run{host, {host}, {}};
    for (std::size_t s = 1; s <= steps; ++s) {
        StepReport report;
        report.step = s;
        Transformations t = all_transformations(rules, run.result);
        report.matches_per_rule = t.per_rule;
        report.gluing_failures = t.gluing_failures;
        report.transformations = t.gammas.size();
        if (t.gammas.empty()) {
            report.fixpoint = true;
            report.coherence = "no transformations";
            run.steps.push_back(std::move(report));
            break;
        }
        AttrGraphPtr next;
        if (mode == RunMode::Pct) {
            const std::size_t p = t.gammas.size();
            ParallelStep step = pct(std::move(t.gammas));
            report.coherence = std::to_string(p) + "x" + std::to_string(p) + " coherent";
            report.dprime_nodes = step.Dprime->graph()->node_count();
            report.dprime_edges = step.Dprime->graph()->edge_count();
            next = step.Hprime;
        } else {
            std::vector<std::size_t> order(t.matches.size());
            std::iota(order.begin(), order.end(), 0);
            SequentialRun seq = apply_sequentially(t.matches, order);
            report.coherence = "sequential: " + std::to_string(seq.applied.size()) + " applied, " +
                               std::to_string(seq.skipped.size()) + " skipped";
            next = seq.result;
        }
        report.hprime_nodes = next->graph()->node_count();
        report.hprime_edges = next->graph()->edge_count();
        run.steps.push_back(std::move(report));
        run.result = next;
        run.history.push_back(next);
    }
    return run;
}

HexRun run_hexca(int radius, const std::set<Axial>& seeds, std::size_t generations, RunMode mode) {
    if (radius < 1) throw StructureError("grid radius must be at least 1");
    int reach = 0;
    for (const Axial& c : seeds) reach = std::max(reach, hex_distance(Axial{}, c));
    const std::size_t need = static_cast<std::size_t>(reach) + generations + 1;
    if (static_cast<std::size_t>(radius) < need)
        throw StructureError("grid radius " + std::to_string(radius) + " too small for " +
                             std::to_string(generations) + " generations (need at least " +
                             std::to_string(need) + ")");
    HexRun out{{}, {}, run_system(huw_rules(), hex_grid(radius, seeds), generations, mode)};
    for (const AttrGraphPtr& g : out.run.history) out.live.push_back(live_cells(*g));
    for (const StepReport& s : out.run.steps) out.transitions.push_back(s.transformations);
    return out;
}

std::string report_to_text(const std::vector<StepReport>& steps) {
    nlohmann::json out = nlohmann::json::array();
    for (const StepReport& s : steps) {
        nlohmann::json matches = nlohmann::json::object();
        for (const auto& [rule, n] : s.matches_per_rule) matches[rule] = n;
        out.push_back({{"step", s.step},
                       {"matches", matches},
                       {"gluing_failures", s.gluing_failures},
                       {"transformations", s.transformations},
                       {"coherence", s.coherence},
                       {"dprime", {{"nodes", s.dprime_nodes}, {"edges", s.dprime_edges}}},
                       {"hprime", {{"nodes", s.hprime_nodes}, {"edges", s.hprime_edges}}},
                       {"fixpoint", s.fixpoint}});
    }
    return out.dump(2) + "\n";
}

} // namespace wdpo
