#include "scmdp/io/commands.hpp"

#include "scmdp/axioms.hpp"
#include "scmdp/errors.hpp"
#include "scmdp/io/report.hpp"
#include "scmdp/io/scenario_file.hpp"
#include "scmdp/scenarios.hpp"
#include "scmdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "CLI11.hpp"

#ifndef SCMDP_VERSION
#define SCMDP_VERSION "0.0.0"
#endif

namespace scmdp::io {

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string gamma;
    double epsilon = 1e-9;
    double tie_tolerance = 1e-7;
    std::uint64_t seed = 0;
    std::string mode = "both";
    std::size_t samples = 720;
    bool brute_force = false;
    std::size_t cap = 1'000'000;
    int theorem = 0;
    std::size_t trajectories = 10'000;
    std::string policy;

    std::size_t members = 2;
    std::size_t alternatives = 2;
    std::size_t states = 3;
    std::string stickiness = "1/2";
    std::string attraction = "1/2";
    bool action_independent = false;
};

struct Loaded {
    Scenario scenario;
    std::string source;
    std::string digest;
};

Loaded load_input(const Options& opt) {
    if (opt.input.empty()) throw InputError("--input is required");
    Loaded l;
    const std::string text = read_file(opt.input);
    l.scenario = parse_scenario(text);
    l.source = opt.input;
    l.digest = sha256_hex(text);
    return l;
}

DriftParams drift_params(const Options& opt) {
    DriftParams p;
    p.stickiness = Rational::parse(opt.stickiness);
    p.attraction = Rational::parse(opt.attraction);
    p.seed = opt.seed;
    p.action_independent = opt.action_independent;
    return p;
}

Loaded generate_input(const Options& opt) {
    Loaded l;
    l.scenario.mdp = gen_drift_mdp(opt.members, opt.alternatives, opt.states, drift_params(opt));
    if (!opt.gamma.empty()) l.scenario.gamma = Rational::parse(opt.gamma);
    l.source = "generator";
    l.digest = sha256_hex(serialize_scenario(l.scenario));
    return l;
}

DiscountFactor resolve_gamma(const Options& opt, const Scenario& sc) {
    Rational g;
    if (!opt.gamma.empty()) {
        g = Rational::parse(opt.gamma);
    } else if (sc.gamma) {
        g = *sc.gamma;
    } else {
        throw InputError("no discount factor: pass --gamma or set \"gamma\" in the scenario");
    }
    if (g <= 0 || g >= 1) throw InputError("gamma must lie strictly between 0 and 1, got " + g.to_string());
    return DiscountFactor(g.to_double());
}

SolveConfig solve_config(const Options& opt) {
    SolveConfig cfg;
    cfg.epsilon = opt.epsilon;
    cfg.tie_tolerance = opt.tie_tolerance;
    cfg.seed = opt.seed;
    cfg.trajectories = opt.trajectories;
    cfg.enumeration_cap = opt.cap;
    cfg.validate();
    return cfg;
}

CheckMode check_mode(const Options& opt) {
    CheckMode mode;
    if (opt.mode == "pair") {
        mode.kind = CheckMode::Kind::Pair;
    } else if (opt.mode == "generative") {
        mode.kind = CheckMode::Kind::Generative;
    } else if (opt.mode == "both") {
        mode.kind = CheckMode::Kind::Both;
    } else {
        throw InputError("--mode must be pair, generative or both");
    }
    mode.seed = opt.seed;
    mode.samples = opt.samples;
    return mode;
}

Policy parse_policy(const std::string& text, const SocialChoiceMDP& m) {
    Policy pi;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string label = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto it = std::find_if(m.alternatives.begin(), m.alternatives.end(),
                                     [&](const Alternative& a) { return a.label == label; });
        if (it == m.alternatives.end()) throw InputError("--policy: unknown alternative '" + label + "'");
        pi.choice.push_back(it->id);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (pi.choice.size() != m.state_count()) {
        throw InputError("--policy needs one alternative per state (" + std::to_string(m.state_count()) + ")");
    }
    return pi;
}

Json config_echo(const Options& opt, const std::string& command) {
    Json c = Json::object();
    if (!opt.gamma.empty()) c["gamma"] = opt.gamma;
    c["epsilon"] = opt.epsilon;
    c["tie_tolerance"] = opt.tie_tolerance;
    c["seed"] = opt.seed;
    if (command == "check-axioms" || (command == "verify" && opt.theorem == 2)) {
        c["mode"] = opt.mode;
        c["samples"] = opt.samples;
    }
    if (command == "solve") c["brute_force"] = opt.brute_force;
    if (command == "solve" || command == "verify") c["cap"] = opt.cap;
    if (command == "verify") {
        c["theorem"] = opt.theorem;
        c["trajectories"] = opt.trajectories;
        if (!opt.policy.empty()) c["policy"] = opt.policy;
    }
    if (command == "find-violation" && opt.input.empty()) {
        c["generator"] = Json{{"members", opt.members},       {"alternatives", opt.alternatives},
                              {"states", opt.states},         {"stickiness", opt.stickiness},
                              {"attraction", opt.attraction}, {"action_independent", opt.action_independent}};
    }
    return c;
}

struct Outcome {
    int code = kExitOk;
    Json results;
};

Outcome cmd_check_axioms(const Options& opt, const Loaded& in) {
    const auto& m = in.scenario.mdp;
    const CheckMode mode = check_mode(opt);
    std::vector<AxiomReport> reports;
    reports.push_back(check_pareto_swf(m.reward, m.states, mode.witness_limit));
    reports.push_back(check_iia(m.reward, m.states, mode.witness_limit));
    reports.push_back(check_cuc_invariance(m.reward, m.states, mode));
    reports.push_back(check_functional_anonymity(m.reward, m.states, mode));
    Outcome o;
    o.results = Json::object();
    bool all = true;
    o.results["axiom_reports"] = Json::array();
    for (const auto& r : reports) {
        all = all && r.passed();
        o.results["axiom_reports"].push_back(axiom_report_to_json(r, m));
    }
    o.results["all_passed"] = all;
    o.code = all ? kExitOk : kExitViolation;
    return o;
}

Outcome cmd_solve(const Options& opt, const Loaded& in) {
    const auto& m = in.scenario.mdp;
    const DiscountFactor gamma = resolve_gamma(opt, in.scenario);
    const SolveConfig cfg = solve_config(opt);
    const DenseModel dense(m);
    Outcome o;
    o.results = Json::object();
    o.results["gamma"] = gamma.value();
    o.results["states"] = m.state_names;
    o.results["solution"] = solution_to_json(value_iteration(dense, gamma, cfg), m);
    if (opt.brute_force) {
        o.results["optimal_policies"] = policy_set_to_json(brute_force_optimal_policies(dense, gamma, cfg), m);
    }
    return o;
}

Outcome cmd_verify(const Options& opt, const Loaded& in) {
    const auto& m = in.scenario.mdp;
    Outcome o;
    o.results = Json::object();
    o.results["theorem"] = opt.theorem;
    switch (opt.theorem) {
        case 2: {
            const auto report = verify_theorem2(m.reward, m.states, check_mode(opt));
            o.results["equivalence"] = equivalence_report_to_json(report, m);
            o.code = report.consistent() ? kExitOk : kExitViolation;
            break;
        }
        case 3: {
            const DiscountFactor gamma = resolve_gamma(opt, in.scenario);
            const SolveConfig cfg = solve_config(opt);
            const DenseModel dense(m);
            const Policy pi = opt.policy.empty() ? value_iteration(dense, gamma, cfg).greedy : parse_policy(opt.policy, m);
            const auto report = verify_theorem3(dense, pi, gamma, cfg);
            o.results["states"] = m.state_names;
            o.results["bellman_vs_sum"] = bellman_sum_report_to_json(report, m);
            o.code = report.all_agree ? kExitOk : kExitViolation;
            break;
        }
        case 4: {
            if (!is_quasi_utilitarian(m.reward)) {
                throw InputError("--theorem 4 needs a quasi-utilitarian reward, scenario has " + reward_kind_name(m.reward));
            }
            const DiscountFactor gamma = resolve_gamma(opt, in.scenario);
            const auto report = verify_theorem4(m, gamma, solve_config(opt));
            o.results["states"] = m.state_names;
            o.results["optimal_sets"] = optimal_set_report_to_json(report, m);
            o.code = report.equal ? kExitOk : kExitViolation;
            break;
        }
        default: throw InputError("--theorem must be 2, 3 or 4");
    }
    return o;
}

Outcome cmd_find_violation(const Options& opt, const Loaded& in) {
    const auto& m = in.scenario.mdp;
    const DiscountFactor gamma = resolve_gamma(opt, in.scenario);
    const SolveConfig cfg = solve_config(opt);
    Outcome o;
    o.results = Json::object();
    o.results["gamma"] = gamma.value();
    o.results["states"] = m.state_names;
    const auto violation = find_pareto_scf_violation(m, gamma, cfg);
    if (violation) {
        o.results["found"] = true;
        o.results["violation"] = violation_to_json(*violation, m);
        o.results["pareto_scf"] = axiom_report_to_json(check_pareto_scf(violation->policy, m), m);
        o.code = kExitOk;
    } else {
        o.results["found"] = false;
        o.code = kExitViolation;
    }
    return o;
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
    if (opt.output.empty()) {
        out << text;
    } else {
        write_file_atomically(opt.output, text);
    }
}

int run_report_command(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    Json report = Json::object();
    report["tool"] = "scmdp";
    report["version"] = SCMDP_VERSION;
    report["command"] = command;
    int code = kExitOk;
    try {
        const Loaded in = (command == "find-violation" && opt.input.empty()) ? generate_input(opt) : load_input(opt);
        report["input"] = Json{{"source", in.source}, {"sha256", in.digest}};
        report["config"] = config_echo(opt, command);
        report["scenario"] = scenario_to_json(in.scenario);
        Outcome o;
        if (command == "check-axioms") {
            o = cmd_check_axioms(opt, in);
        } else if (command == "solve") {
            o = cmd_solve(opt, in);
        } else if (command == "verify") {
            o = cmd_verify(opt, in);
        } else {
            o = cmd_find_violation(opt, in);
        }
        report["results"] = std::move(o.results);
        code = o.code;
    } catch (const std::exception& e) {
        // Every failure to run the requested check is an input problem from the caller's view.
        err << "scmdp " << command << ": " << e.what() << "\n";
        report["error"] = e.what();
        code = kExitInvalid;
    }
    report["exit_code"] = code;
    report["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    try {
        if (code != kExitInvalid || !opt.output.empty()) emit(opt, report.dump(2) + "\n", out);
    } catch (const std::exception& e) {
        err << "scmdp " << command << ": " << e.what() << "\n";
        return kExitInvalid;
    }
    return code;
}

int run_gen_scenario(const Options& opt, std::ostream& out, std::ostream& err) {
    try {
        const Loaded l = generate_input(opt);
        if (l.scenario.gamma && (*l.scenario.gamma <= 0 || *l.scenario.gamma >= 1)) {
            throw InputError("gamma must lie strictly between 0 and 1");
        }
        emit(opt, serialize_scenario(l.scenario), out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "scmdp gen-scenario: " << e.what() << "\n";
        return kExitInvalid;
    }
}

int run_recheck(const Options& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.input.empty()) throw InputError("--input is required");
        const auto summary = recheck_report(Json::parse(read_file(opt.input)));
        Json result = Json{{"witnesses", summary.witnesses},
                           {"reproduced", summary.reproduced},
                           {"failures", summary.failures}};
        emit(opt, result.dump(2) + "\n", out);
        return summary.ok() ? kExitOk : kExitViolation;
    } catch (const std::exception& e) {
        err << "scmdp recheck: " << e.what() << "\n";
        return kExitInvalid;
    }
}

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--input", opt.input, "Scenario file");
    sub->add_option("--output", opt.output, "Write the report here instead of stdout");
    sub->add_option("--seed", opt.seed, "Seed for sampling");
}

void add_solver_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--gamma", opt.gamma, "Discount factor in (0,1), rational or decimal");
    sub->add_option("--epsilon", opt.epsilon, "Sup-norm accuracy target")->check(CLI::PositiveNumber);
    sub->add_option("--tie-tolerance", opt.tie_tolerance, "Action values this close count as tied")
        ->check(CLI::PositiveNumber);
    sub->add_option("--cap", opt.cap, "Policy enumeration cap");
}

void add_mode_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--mode", opt.mode, "pair, generative or both")->check(CLI::IsMember({"pair", "generative", "both"}));
    sub->add_option("--samples", opt.samples, "Permutations sampled for rosters above six members");
}

void add_generator_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--members", opt.members, "Group size");
    sub->add_option("--alternatives", opt.alternatives, "Number of alternatives");
    sub->add_option("--states", opt.states, "Number of profiles");
    sub->add_option("--stickiness", opt.stickiness, "Probability of staying put");
    sub->add_option("--attraction", opt.attraction, "Share of moving mass drawn toward high-sum states");
    sub->add_flag("--action-independent", opt.action_independent, "Transitions ignore the chosen alternative");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Social choice MDP toolkit: axiom checks, solvers and verifiers", "scmdp"};
    app.require_subcommand(1);
    Options opt;

    auto* check = app.add_subcommand("check-axioms", "Check Pareto, IIA, CUC-invariance and anonymity of the reward");
    add_common(check, opt);
    add_mode_flags(check, opt);

    auto* solve = app.add_subcommand("solve", "Value iteration, optionally with exhaustive policy search");
    add_common(solve, opt);
    add_solver_flags(solve, opt);
    solve->add_flag("--brute-force", opt.brute_force, "Also enumerate every optimal deterministic policy");

    auto* verify = app.add_subcommand("verify", "Run an equivalence verifier");
    add_common(verify, opt);
    add_solver_flags(verify, opt);
    add_mode_flags(verify, opt);
    verify->add_option("--theorem", opt.theorem, "2: axioms vs agreement, 3: Bellman vs sampled returns, 4: optimal sets")
        ->required()
        ->check(CLI::IsMember({2, 3, 4}));
    verify->add_option("--trajectories", opt.trajectories, "Monte Carlo trajectories per state");
    verify->add_option("--policy", opt.policy, "Comma-separated alternative labels, one per state");

    auto* find = app.add_subcommand("find-violation", "Look for an optimal choice that everyone disprefers");
    add_common(find, opt);
    add_solver_flags(find, opt);
    add_generator_flags(find, opt);

    auto* gen = app.add_subcommand("gen-scenario", "Write a random preference-drift scenario file");
    gen->add_option("--output", opt.output, "Scenario destination (stdout if omitted)");
    gen->add_option("--seed", opt.seed, "Generator seed");
    gen->add_option("--gamma", opt.gamma, "Discount factor stored in the file");
    add_generator_flags(gen, opt);

    auto* recheck = app.add_subcommand("recheck", "Replay every witness recorded in a report");
    recheck->add_option("--input", opt.input, "Report file")->required();
    recheck->add_option("--output", opt.output, "Summary destination (stdout if omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    if (check->parsed()) return run_report_command("check-axioms", opt, out, err);
    if (solve->parsed()) return run_report_command("solve", opt, out, err);
    if (verify->parsed()) return run_report_command("verify", opt, out, err);
    if (find->parsed()) return run_report_command("find-violation", opt, out, err);
    if (gen->parsed()) return run_gen_scenario(opt, out, err);
    return run_recheck(opt, out, err);
}

}  // namespace scmdp::io
