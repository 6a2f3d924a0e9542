// Command-line front end: simulate, plan, diff.
//
// Exit codes
//   0  success (converged / plan found / no moved flows)
//   1  input error
//   2  simulation did not converge (oscillation)
//   3  plan infeasible (witnesses printed)
//   4  plan search exhausted its budget
//   5  diff found moved flows

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bgpte/engine.hpp"
#include "bgpte/error.hpp"
#include "bgpte/flow.hpp"
#include "bgpte/planner.hpp"
#include "bgpte/scenario.hpp"

namespace fs = std::filesystem;
using namespace bgpte;

namespace {

enum Exit : int { kOk = 0, kInput = 1, kOscillation = 2, kInfeasible = 3, kExhausted = 4, kMoved = 5 };

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Emits `content` as `name` under `out_dir`, or to stdout when no directory was given.
void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
    if (out_dir.empty()) {
        std::cout << content;
        return;
    }
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / name, content);
}

IngressEntries all_ingress(const ConvergedState& s, const Topology& t) {
    IngressEntries merged;
    for (const auto& [asn, prefixes] : t.originations) {
        if (prefixes.empty()) continue;
        auto m = ingress_map(s, t, asn);
        merged.insert(m.entries.begin(), m.entries.end());
    }
    return merged;
}

void print_oscillation(const OscillationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& pair : e.changing()) std::cerr << "  changing " << pair.as.value << ' ' << pair.prefix.str() << '\n';
}

struct Common {
    std::string scenario;
    std::string out;
    int max_rounds = 0;
    bool trace = false;
};

PropagationOptions propagation_options(const Common& c) {
    PropagationOptions opts;
    if (c.max_rounds > 0) opts.max_rounds = c.max_rounds;
    if (c.trace) {
        opts.trace = [](int round, const ConvergedState& s) {
            std::cerr << "--- round " << round << '\n' << dump_state(s);
        };
    }
    return opts;
}

int cmd_simulate(const Common& c) {
    try {
        Scenario sc = load_scenario(c.scenario);
        ConvergedState state = propagate_to_convergence(sc.topology, sc.te_config, propagation_options(c));
        emit(c.out, "state.txt", dump_state(state));
        emit(c.out, "ingress.csv", ingress_csv(all_ingress(state, sc.topology)));
        return kOk;
    } catch (const OscillationError& e) {
        print_oscillation(e);
        return kOscillation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
}

int cmd_plan(const Common& c, std::size_t budget_actions) {
    try {
        Scenario sc = load_scenario(c.scenario);
        if (sc.objectives.empty()) throw ConfigError("scenario has no objective records");
        const Asn dest = sc.objectives.front().flow.dst_asn;

        Budget budget;
        budget.max_actions = budget_actions;
        if (c.max_rounds > 0) budget.max_rounds = c.max_rounds;
        PlanResult result = plan_inbound_te(sc.topology, dest, sc.te_config, sc.objectives, budget);

        if (const auto* inf = std::get_if<Infeasible>(&result)) {
            std::ostringstream out;
            for (const auto& w : inf->witnesses) out << "witness " << to_string(w) << '\n';
            std::cout << "infeasible\n" << out.str();
            if (!c.out.empty()) emit(c.out, "witnesses.txt", out.str());
            return kInfeasible;
        }
        if (const auto* ex = std::get_if<Exhausted>(&result)) {
            std::cout << "exhausted after " << ex->candidates_evaluated << " candidates\n";
            return kExhausted;
        }
        const Plan& plan = std::get<Plan>(result);
        PlanEvaluation ev = evaluate_plan(sc.topology, dest, sc.te_config, plan.actions, sc.objectives);
        std::ostringstream table;
        for (std::size_t i = 0; i < sc.objectives.size(); ++i) {
            table << (ev.satisfied[i] ? "satisfied   " : "unsatisfied ") << to_string(sc.objectives[i]) << '\n';
        }
        emit(c.out, "plan.txt", serialize_plan(plan));
        emit(c.out, "satisfaction.txt", table.str());
        emit(c.out, "ingress.csv", ingress_csv(plan.predicted_map.entries));
        if (!c.out.empty()) {
            std::cout << "plan found: " << plan.actions.size() << " actions, " << plan.side_effects.size()
                      << " side effects\n";
        }
        return ev.all_satisfied() ? kOk : kInput;
    } catch (const OscillationError& e) {
        print_oscillation(e);
        return kOscillation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
}

int cmd_diff(const std::string& base_dir, const std::string& cmp_dir) {
    try {
        auto base = parse_ingress_csv(read_file(fs::path(base_dir) / "ingress.csv"));
        auto next = parse_ingress_csv(read_file(fs::path(cmp_dir) / "ingress.csv"));
        auto moves = diff_entries(base, next);
        for (const auto& mv : moves) {
            std::cout << mv.src.value << ',' << mv.dst_prefix.str() << ',' << render_link(mv.old_link) << ','
                      << render_link(mv.new_link) << '\n';
        }
        return moves.empty() ? kOk : kMoved;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AS-level BGP simulator and inbound traffic-engineering planner"};
    app.require_subcommand(1);

    Common sim;
    auto* simulate = app.add_subcommand("simulate", "Propagate routes to a fixed point and report ingress links");
    simulate->add_option("--scenario,scenario", sim.scenario, "Scenario file")->required();
    simulate->add_option("--out", sim.out, "Output directory (default: stdout)");
    simulate->add_option("--max-rounds", sim.max_rounds, "Round bound override");
    simulate->add_flag("--trace", sim.trace, "Dump RIBs after every round to stderr");

    Common pl;
    std::size_t budget_actions = Budget{}.max_actions;
    auto* plan = app.add_subcommand("plan", "Search community/advertisement actions meeting the objectives");
    plan->add_option("--scenario,scenario", pl.scenario, "Scenario file with objective records")->required();
    plan->add_option("--out", pl.out, "Output directory (default: stdout)");
    plan->add_option("--max-rounds", pl.max_rounds, "Round bound override");
    plan->add_option("--budget-actions", budget_actions, "Maximum number of actions in a plan");

    std::string base_dir, cmp_dir;
    auto* diff = app.add_subcommand("diff", "Compare ingress.csv of two run directories");
    diff->add_option("baseline", base_dir, "Baseline run directory")->required();
    diff->add_option("comparison", cmp_dir, "Comparison run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInput;
    }

    if (simulate->parsed()) return cmd_simulate(sim);
    if (plan->parsed()) return cmd_plan(pl, budget_actions);
    return cmd_diff(base_dir, cmp_dir);
}
