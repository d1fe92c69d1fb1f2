#ifndef WDPO_DRIVER_HPP
#define WDPO_DRIVER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "wdpo/presets.hpp"

namespace wdpo {

enum class RunMode { Pct, Sequential };

struct StepReport {
    std::size_t step = 0;
    std::vector<std::pair<std::string, std::size_t>> matches_per_rule;
    std::vector<std::string> gluing_failures;  // "<rule>#<index>: <reason>"
    std::size_t transformations = 0;
    std::string coherence;  // "p x p coherent", or the failing pair
    std::size_t dprime_nodes = 0, dprime_edges = 0;
    std::size_t hprime_nodes = 0, hprime_edges = 0;
    bool fixpoint = false;
};

struct RunResult {
    AttrGraphPtr result;
    std::vector<AttrGraphPtr> history;  // host, then one graph per completed step
    std::vector<StepReport> steps;
};

struct Transformations {
    std::vector<Match> matches;  // all rules, rule order then canonical match order
    std::vector<DirectTransformation> gammas;
    std::vector<std::pair<std::string, std::size_t>> per_rule;
    std::vector<std::string> gluing_failures;
};

// Every match of every rule, applied; matches violating the gluing
// condition are reported and left out of `gammas`.
Transformations all_transformations(const std::vector<RulePtr>& rules, const AttrGraphPtr& host);

// Iterates rewriting steps; an empty match set stops early. In pct mode an
// incoherent set throws IncoherentError.
RunResult run_system(const std::vector<RulePtr>& rules, const AttrGraphPtr& host, std::size_t steps,
                     RunMode mode);

struct HexRun {
    std::vector<std::set<Axial>> live;        // per generation, starting with the seed
    std::vector<std::size_t> transitions;     // matches per step
    RunResult run;
};

// Radius must be at least generations + 1.
HexRun run_hexca(int radius, const std::set<Axial>& seeds, std::size_t generations,
                 RunMode mode = RunMode::Pct);

std::string report_to_text(const std::vector<StepReport>& steps);

} // namespace wdpo

#endif // WDPO_DRIVER_HPP
