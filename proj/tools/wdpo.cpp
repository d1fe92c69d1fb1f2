#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wdpo/driver.hpp"
#include "wdpo/error.hpp"

using namespace wdpo;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kGluing = 3, kIncoherent = 4 };

struct Options {
    std::string rules;
    std::string host;
    std::string out;
    std::string report;
};

struct Loaded {
    std::vector<RulePtr> rules;
    AttrGraphPtr host;
};

Loaded load(const Options& o) {
    Loaded l;
    if (!o.rules.empty()) {
        SystemSpec spec = load_system(o.rules);
        l.rules = spec.rules;
        l.host = spec.host;
    }
    if (!o.host.empty()) l.host = load_graph(o.host);
    if (!l.host) throw ParseError("no host graph (give --host or a system file with \"host\")");
    return l;
}

void emit_graph(const Options& o, const AttributedGraph& g) {
    if (o.out.empty())
        std::cout << g.to_string() << "\n";
    else
        save_graph(g, o.out);
}

std::string describe_match(std::size_t index, const Match& m) {
    std::ostringstream out;
    out << index << " " << m.rule->name << " ";
    bool first = true;
    for (const auto& [x, y] : m.m.sigma().node_map()) {
        out << (first ? "" : ",") << x << "->" << y;
        first = false;
    }
    out << " " << m.m.alpha().describe();
    return out.str();
}

std::vector<Match> global_matches(const Loaded& l) {
    std::vector<Match> all;
    for (const RulePtr& r : l.rules)
        for (Match& m : find_matches(r, l.host)) all.push_back(std::move(m));
    return all;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw ParseError("bad match index '" + item + "'");
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak double-pushout rewriting of finitely attributed graphs"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool needs_rules) {
        auto* r = sub->add_option("--rules", o.rules, "System file (rules and optional host)");
        if (needs_rules) r->required();
        sub->add_option("--host", o.host, "Host graph file (overrides the system's host)");
        sub->add_option("--out", o.out, "Write the result graph here");
        sub->add_option("--report", o.report, "Write the step report here");
    };

    auto* match = app.add_subcommand("match", "List the matches of every rule");
    common(match, true);

    std::string rule_name;
    std::size_t match_index = 0;
    auto* apply = app.add_subcommand("apply", "Apply one rule at one match");
    common(apply, true);
    apply->add_option("--rule", rule_name, "Rule name")->required();
    apply->add_option("--match", match_index, "Index among that rule's matches")->required();

    std::string match_list;
    bool all = false;
    auto* pct_cmd = app.add_subcommand("pct", "One parallel coherent step over chosen matches");
    common(pct_cmd, true);
    auto* list_opt = pct_cmd->add_option("--matches", match_list, "Comma-separated match indices");
    pct_cmd->add_flag("--all", all, "Use every match (default)")->excludes(list_opt);

    std::size_t steps = 1;
    std::string mode = "pct";
    auto* run = app.add_subcommand("run", "Iterate rewriting steps");
    common(run, true);
    run->add_option("--steps", steps, "Number of steps")->required();
    run->add_option("--mode", mode, "pct or seq")->check(CLI::IsMember({"pct", "seq"}));

    int radius = 0;
    std::size_t generations = 0;
    std::vector<std::string> seeds;
    auto* hexca = app.add_subcommand("hexca", "Hex-Ulam-Warburton automaton on a hexagonal grid");
    common(hexca, false);
    hexca->add_option("--radius", radius, "Grid radius")->required();
    hexca->add_option("--generations", generations, "Generations to compute")->required();
    hexca->add_option("--seed", seeds, "Live seed cell q,r (default 0,0)");
    hexca->add_option("--mode", mode, "pct or seq")->check(CLI::IsMember({"pct", "seq"}));

    std::string dot_path;
    auto* exp = app.add_subcommand("export", "Write the host graph as Graphviz DOT");
    common(exp, false);
    exp->add_option("--dot", dot_path, "DOT output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*match) {
            Loaded l = load(o);
            std::vector<Match> all_matches = global_matches(l);
            std::ostringstream out;
            for (std::size_t k = 0; k < all_matches.size(); ++k)
                out << describe_match(k, all_matches[k]) << "\n";
            std::cout << out.str() << all_matches.size() << " matches\n";
            if (!o.report.empty()) write_file(o.report, out.str());
        } else if (*apply) {
            Loaded l = load(o);
            RulePtr rule;
            for (const RulePtr& r : l.rules)
                if (r->name == rule_name) rule = r;
            if (!rule) throw ParseError("no rule named '" + rule_name + "'");
            std::vector<Match> ms = find_matches(rule, l.host);
            if (match_index >= ms.size())
                throw ParseError("rule '" + rule_name + "' has " + std::to_string(ms.size()) +
                                 " matches");
            DirectTransformation t = apply_direct(ms[match_index]);
            emit_graph(o, *t.H);
        } else if (*pct_cmd) {
            Loaded l = load(o);
            std::vector<Match> ms = global_matches(l);
            std::vector<std::size_t> chosen;
            if (match_list.empty()) {
                for (std::size_t k = 0; k < ms.size(); ++k) chosen.push_back(k);
            } else {
                chosen = parse_indices(match_list);
            }
            if (chosen.empty()) throw StructureError("no matches to apply");
            std::vector<DirectTransformation> gammas;
            for (std::size_t k : chosen) {
                if (k >= ms.size()) throw ParseError("match index " + std::to_string(k) + " out of range");
                gammas.push_back(apply_direct(ms[k]));
            }
            ParallelStep step = pct(std::move(gammas));
            emit_graph(o, *step.Hprime);
            if (!o.report.empty()) {
                StepReport r;
                r.step = 1;
                r.transformations = chosen.size();
                r.coherence = std::to_string(chosen.size()) + "x" + std::to_string(chosen.size()) +
                              " coherent";
                r.dprime_nodes = step.Dprime->graph()->node_count();
                r.dprime_edges = step.Dprime->graph()->edge_count();
                r.hprime_nodes = step.Hprime->graph()->node_count();
                r.hprime_edges = step.Hprime->graph()->edge_count();
                write_file(o.report, report_to_text({r}));
            }
        } else if (*run) {
            Loaded l = load(o);
            RunResult r = run_system(l.rules, l.host, steps,
                                     mode == "seq" ? RunMode::Sequential : RunMode::Pct);
            emit_graph(o, *r.result);
            if (!o.report.empty()) write_file(o.report, report_to_text(r.steps));
        } else if (*hexca) {
            std::set<Axial> live;
            for (const std::string& s : seeds) {
                int q = 0, r = 0;
                char comma = 0;
                std::istringstream in(s);
                if (!(in >> q >> comma >> r) || comma != ',')
                    throw ParseError("bad seed '" + s + "', expected q,r");
                live.insert(Axial{q, r});
            }
            if (live.empty()) live.insert(Axial{});
            HexRun h = run_hexca(radius, live, generations,
                                 mode == "seq" ? RunMode::Sequential : RunMode::Pct);
            for (std::size_t g = 0; g < h.live.size(); ++g) {
                std::cout << "generation " << g << ": " << h.live[g].size() << " live";
                if (g > 0) std::cout << " (" << h.transitions[g - 1] << " transitions)";
                std::cout << "\n";
            }
            if (!o.out.empty()) save_graph(*h.run.result, o.out);
            if (!o.report.empty()) write_file(o.report, report_to_text(h.run.steps));
        } else if (*exp) {
            Loaded l = load(o);
            export_dot(*l.host, dot_path);
        }
    } catch (const GluingError& e) {
        std::cerr << "gluing condition violated: " << e.what() << "\n";
        return kGluing;
    } catch (const IncoherentError& e) {
        std::cerr << "incoherent: " << e.what() << "\n";
        return kIncoherent;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kOk;
}
