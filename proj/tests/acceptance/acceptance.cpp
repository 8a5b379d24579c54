// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Indented lines under a criterion are diagnostics.

#include "scmdp/axioms.hpp"
#include "scmdp/io/report.hpp"
#include "scmdp/io/scenario_file.hpp"
#include "scmdp/scenarios.hpp"
#include "scmdp/solver.hpp"

#include "support/generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

using namespace scmdp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string data(const std::string& name) { return std::string(SCMDP_TEST_DATA) + "/" + name; }

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& line) { notes.push_back(line); }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::vector<RewardSpec> quasi_family() {
    std::vector<RewardSpec> out{UtilitarianReward{}};
    for (const auto& t : transform_registry()) out.push_back(QuasiUtilitarianReward{t});
    return out;
}

std::string reward_label(const RewardSpec& r) { return reward_kind_name(r); }

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto rewards = quasi_family();
    std::size_t witnesses = 0;
    std::size_t checked = 0;
    for (std::uint64_t set = 0; set < 200; ++set) {
        std::mt19937_64 rng(set);
        const std::size_t n = 1 + set % 4;
        const std::size_t k = 1 + (set / 4) % 4;
        std::vector<Profile> profiles;
        for (int i = 0; i < 3; ++i) profiles.push_back(testing::random_profile(rng, n, k, -5, 5));
        // Related pairs give the pair-mode CUC and anonymity checks something to compare.
        profiles.push_back(testing::random_cuc_image(rng, profiles[0]));
        Permutation rho(n);
        std::iota(rho.begin(), rho.end(), std::size_t{0});
        std::shuffle(rho.begin(), rho.end(), rng);
        profiles.push_back(apply_permutation(profiles[1], rho));
        std::sort(profiles.begin(), profiles.end());
        profiles.erase(std::unique(profiles.begin(), profiles.end()), profiles.end());

        const CheckMode mode = CheckMode::both(set);
        for (const auto& r : rewards) {
            const std::vector<AxiomReport> reports{
                check_pareto_swf(r, profiles),
                check_iia(r, profiles),
                check_cuc_invariance(r, profiles, mode),
                check_functional_anonymity(r, profiles, mode),
            };
            for (const auto& rep : reports) {
                checked += rep.checked_count;
                witnesses += rep.witnesses.size();
                if (!rep.passed()) {
                    o.require(false, reward_label(r) + " " + axiom_name(rep.axiom) + " on set " + std::to_string(set));
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    o.require(witnesses == 0, "zero witnesses");
    o.require(elapsed < 10.0, "runtime under 10 s");
    o.note(std::to_string(rewards.size()) + " rewards x 200 profile sets, " + std::to_string(checked) +
           " instances checked, " + std::to_string(witnesses) + " witnesses, " + fmt("%.2f s", elapsed));
    return o;
}

// ---------------------------------------------------------------------------

bool report_replays(const RewardSpec& r, const SocialChoiceMDP& m, const AxiomReport& rep) {
    io::Scenario sc;
    sc.mdp = with_reward(m, r);
    io::Json doc = io::Json::object();
    doc["scenario"] = io::scenario_to_json(sc);
    doc["results"] = io::Json::array({io::axiom_report_to_json(rep, sc.mdp)});
    const auto summary = io::recheck_report(io::Json::parse(doc.dump()));
    return summary.ok() && summary.witnesses == rep.witnesses.size();
}

void expect_failure(Outcome& o, const std::string& label, const RewardSpec& r, const SocialChoiceMDP& m,
                    const AxiomReport& rep) {
    o.require(!rep.passed(), label + " fails");
    o.require(!rep.witnesses.empty(), label + " has a witness");
    bool sound = true;
    for (const auto& w : rep.witnesses) sound = sound && replay_witness(rep.axiom, r, w);
    o.require(sound, label + " witnesses replay");
    o.require(report_replays(r, m, rep), label + " witnesses replay from the serialised report");
    o.note(label + ": " + std::to_string(rep.violation_count) + " violation(s), witnesses replay");
}

Outcome criterion2() {
    Outcome o;
    const auto f1 = io::load_scenario_file(data("constant.json")).mdp;
    const std::vector<Profile> only_ua{f1.states[0]};
    const RewardSpec constant = f1.reward;
    SocialChoiceMDP ua_only = f1;
    ua_only.states = only_ua;
    ua_only.state_names = {"U_A"};
    ua_only.kernel = {};
    ua_only.kernel.set_row(0, 0, {{0, 1}});
    ua_only.kernel.set_row(0, 1, {{0, 1}});
    expect_failure(o, "constant / pareto-swf", constant, ua_only, check_pareto_swf(constant, only_ua));
    expect_failure(o, "constant / agreement", constant, ua_only, check_agrees_with_utilitarianism(constant, only_ua));

    const auto dictator_mdp = io::load_scenario_file(data("dictator.json")).mdp;
    const RewardSpec dictator = dictator_mdp.reward;
    expect_failure(o, "dictator / functional-anonymity", dictator, dictator_mdp,
                   check_functional_anonymity(dictator, dictator_mdp.states, CheckMode::both()));
    expect_failure(o, "dictator / agreement", dictator, dictator_mdp,
                   check_agrees_with_utilitarianism(dictator, dictator_mdp.states));

    const auto iia_mdp = io::load_scenario_file(data("iia.json")).mdp;
    expect_failure(o, "z-dependent / iia", iia_mdp.reward, iia_mdp, check_iia(iia_mdp.reward, iia_mdp.states));

    // The equivalence verdicts line up with the individual checks.
    o.require(verify_theorem2(constant, only_ua, CheckMode::both()).verdict == EquivalenceReport::Verdict::BothFail,
              "constant verdict both-fail");
    o.require(verify_theorem2(dictator, dictator_mdp.states, CheckMode::both()).verdict ==
                  EquivalenceReport::Verdict::BothFail,
              "dictator verdict both-fail");
    o.require(verify_theorem2(iia_mdp.reward, iia_mdp.states, CheckMode::pair()).verdict ==
                  EquivalenceReport::Verdict::BothFail,
              "z-dependent verdict both-fail");
    return o;
}

// ---------------------------------------------------------------------------

double normal_upper_quantile(double tail) {
    // Bisection on the complementary error function.
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        if (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail) lo = mid; else hi = mid;
    }
    return lo;
}

double binomial_upper_tail(std::size_t n, std::size_t k, double p) {
    double tail = 0.0;
    for (std::size_t j = k; j <= n; ++j) {
        tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                         static_cast<double>(j) * std::log(p) + static_cast<double>(n - j) * std::log1p(-p));
    }
    return tail;
}

Outcome criterion3() {
    Outcome o;
    const auto t0 = Clock::now();
    const DiscountFactor gamma(0.9);
    std::size_t comparisons = 0;
    std::size_t misses = 0;
    double max_z = 0.0;
    bool deterministic_ok = true;

    auto run = [&](const SocialChoiceMDP& m, const Policy& pi, std::uint64_t seed, const std::string& label) {
        SolveConfig cfg;
        cfg.seed = seed;
        cfg.trajectories = 10'000;
        const DenseModel dense(m);
        const auto report = verify_theorem3(dense, pi, gamma, cfg);
        for (const auto& s : report.states) {
            ++comparisons;
            const double diff = std::abs(s.bellman_value - s.monte_carlo_value);
            if (!s.agrees) {
                ++misses;
                o.note(label + " state " + std::to_string(s.state) +
                       fmt(": |diff| %.4g > eps + half-width %.4g", diff, s.tolerance));
            }
            if (s.half_width > 0) max_z = std::max(max_z, diff / (s.half_width / 1.95996));
            if (dense.deterministic() && diff > 1e-6) deterministic_ok = false;
        }
    };

    const auto f1 = fixture_f1();
    for (const Policy& pi : {Policy{{0, 0}}, Policy{{0, 1}}, Policy{{1, 0}}, Policy{{1, 1}}}) run(f1, pi, 0, "f1");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        DriftParams params;
        params.seed = seed;
        const auto m = gen_drift_mdp(1 + seed % 3, 2 + seed % 2, 2 + seed % 5, params);
        const Policy pi = value_iteration(m, gamma, SolveConfig{}).greedy;
        run(m, pi, seed, "drift seed " + std::to_string(seed));
    }
    const double elapsed = seconds_since(t0);

    o.require(misses == 0, "every state within eps + 95% half-width");
    o.require(deterministic_ok, "deterministic kernels within 1e-6");
    o.require(elapsed < 60.0, "runtime under 60 s");

    // Calibration: a correct estimator misses a 95% interval about 5% of the time.
    const double tail = binomial_upper_tail(comparisons, misses, 0.05);
    const double bonferroni = normal_upper_quantile(0.05 / (2.0 * static_cast<double>(comparisons)));
    o.note(std::to_string(comparisons) + " state comparisons, " + std::to_string(misses) + " outside eps + half-width" +
           fmt(" (expected %.1f at 95%% coverage; P[X >= observed] = %.3f)", 0.05 * comparisons, tail));
    o.note(fmt("largest |diff| / standard error %.3f; family-wise 95%% bound %.3f", max_z, bonferroni) +
           (max_z <= bonferroni ? " (within)" : " (exceeded)"));
    o.note(fmt("%.2f s", elapsed));
    return o;
}

// ---------------------------------------------------------------------------

struct CorpusInstance {
    std::string name;
    SocialChoiceMDP mdp;
};

std::vector<CorpusInstance> theorem4_corpus() {
    std::vector<CorpusInstance> corpus;
    for (const auto& entry : std::filesystem::directory_iterator(SCMDP_TEST_DATA)) {
        try {
            corpus.push_back({entry.path().filename().string(), io::load_scenario_file(entry.path()).mdp});
        } catch (const InputError&) {
            // Deliberately malformed files.
        }
    }
    std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    corpus.push_back({"fixture_f1", fixture_f1()});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        DriftParams params;
        params.seed = seed;
        corpus.push_back({"drift seed " + std::to_string(seed),
                          gen_drift_mdp(1 + seed % 3, 2 + seed % 2, 2 + seed % 5, params)});
    }
    // Larger shapes up to the 4096 bound: 2^12, 4^6, 8^4, 16^3.
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 12}, {4, 6}, {8, 4}, {16, 3}};
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        DriftParams params;
        params.seed = 1000 + i;
        params.stickiness = Rational(1, 4);
        corpus.push_back({"drift " + std::to_string(shapes[i].first) + "^" + std::to_string(shapes[i].second),
                          gen_drift_mdp(2, shapes[i].first, shapes[i].second, params)});
    }
    return corpus;
}

Outcome criterion4() {
    Outcome o;
    const DiscountFactor gamma(0.9);
    SolveConfig cfg;
    cfg.tie_tolerance = 1e-7;
    const std::vector<MonotoneTransform> transforms{MonotoneTransform::identity(), MonotoneTransform::affine(3, 5),
                                                    MonotoneTransform::odd_power(3)};
    std::size_t instances = 0;
    std::size_t skipped = 0;
    std::size_t policies = 0;
    for (const auto& inst : theorem4_corpus()) {
        const double count = std::pow(static_cast<double>(inst.mdp.action_count()), inst.mdp.state_count());
        if (count > 4096) {
            ++skipped;
            continue;
        }
        ++instances;
        std::set<Policy> identity_set;
        for (const auto& t : transforms) {
            const auto m = with_reward(inst.mdp, QuasiUtilitarianReward{t});
            const auto report = verify_theorem4(m, gamma, cfg);
            policies += report.from_enumeration.size();
            o.require(report.equal, inst.name + " / " + t.name() + ": value iteration set equals enumeration");
            if (std::holds_alternative<IdentityTransform>(t.kind())) identity_set = report.from_enumeration;
            if (std::holds_alternative<AffineTransform>(t.kind())) {
                o.require(report.from_enumeration == identity_set, inst.name + " / affine set equals identity set");
            }
        }
    }
    o.note(std::to_string(instances) + " instances x 3 transforms, " + std::to_string(policies) +
           " optimal policies matched; " + std::to_string(skipped) + " corpus instances above 4096 policies");
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
    Outcome o;
    const auto m = fixture_f1();
    const SolveConfig cfg;

    // Hand oracle: at U_A staying earns 2 per step, moving earns 0 now and 20 per step after.
    auto oracle = [](double g) {
        const double vb = 20 / (1 - g);
        const double stay = 2 / (1 - g);
        const double move = g * vb;
        return std::tuple(std::max(stay, move), vb, move > stay);
    };

    const auto [va_hi, vb_hi, move_hi] = oracle(0.9);
    const auto sol = value_iteration(m, DiscountFactor(0.9), cfg);
    o.require(std::abs(va_hi - 180) <= 1e-9 && std::abs(vb_hi - 200) <= 1e-9, "oracle gives 180 and 200");
    o.require(std::abs(sol.values.values[0] - 180) <= 1e-6, "V*(U_A) = 180");
    o.require(std::abs(sol.values.values[1] - 200) <= 1e-6, "V*(U_B) = 200");
    o.require(sol.greedy.choice[0] == 1 && move_hi, "optimal choice y at U_A");
    const auto hit = find_pareto_scf_violation(m, DiscountFactor(0.9), cfg);
    o.require(hit && hit->state == 0 && hit->dominating == 0 && hit->chosen == 1, "witness (U_A, x)");
    if (hit) {
        Witness w{{m.states[hit->state]}, {hit->dominating, hit->chosen}, std::nullopt, std::nullopt, {}, hit->state};
        o.require(replay_witness(Axiom::ParetoScf, m.reward, w), "witness replays");
    }
    o.note(fmt("gamma 0.9: V*(U_A) %.9f, V*(U_B) %.9f", sol.values.values[0], sol.values.values[1]));

    const auto [va_lo, vb_lo, move_lo] = oracle(0.01);
    const auto low = value_iteration(m, DiscountFactor(0.01), cfg);
    o.require(std::abs(low.values.values[0] - va_lo) <= 1e-6 && std::abs(low.values.values[1] - vb_lo) <= 1e-6,
              "gamma 0.01 values match the oracle");
    o.require(!move_lo && !find_pareto_scf_violation(m, DiscountFactor(0.01), cfg), "no violation at gamma 0.01");
    o.note(fmt("gamma 0.01: x worth %.5f, y worth %.5f at U_A", 2 / 0.99, 0.01 * vb_lo));
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
    Outcome o;
    std::size_t bad_relations = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        std::mt19937_64 rng(i);
        const std::size_t n = 1 + i % 4;
        const std::size_t k = 1 + (i / 4) % 5;
        const Profile p = testing::random_profile(rng, n, k, -10, 10);
        const RewardSpec r = testing::random_reward(rng, {testing::random_profile(rng, n, k, -10, 10), p});
        const auto rel = induced_swf(r, p);
        if (!rel.is_complete() || !rel.is_transitive()) ++bad_relations;
    }
    o.require(bad_relations == 0, "1000 induced SWFs complete and transitive");

    std::size_t invalid = 0;
    std::size_t round_trip_failures = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        DriftParams params;
        params.seed = i;
        params.stickiness = Rational(static_cast<std::int64_t>(i % 5), 4);
        params.attraction = Rational(static_cast<std::int64_t>((i / 5) % 3), 2);
        params.action_independent = i % 7 == 0;
        const auto m = gen_drift_mdp(1 + i % 4, 1 + (i / 4) % 4, 1 + (i / 16) % 8, params);
        if (!validate_mdp(m).ok()) ++invalid;
        io::Scenario sc;
        sc.mdp = m;
        if (i % 2 == 0) sc.gamma = Rational(9, 10);
        const std::string text = io::serialize_scenario(sc);
        if (io::serialize_scenario(io::parse_scenario(text)) != text) ++round_trip_failures;
    }
    o.require(invalid == 0, "1000 generated MDPs pass validate_mdp");
    o.require(round_trip_failures == 0, "1000 generated scenarios round-trip");

    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(SCMDP_TEST_DATA)) {
        const std::string text = io::read_file(entry.path());
        io::Scenario sc;
        try {
            sc = io::parse_scenario(text);
        } catch (const InputError&) {
            continue;
        }
        // Only canonical-form files are expected to survive byte for byte.
        if (entry.path().filename() == "f1_compact.json") continue;
        ++files;
        o.require(io::serialize_scenario(sc) == text, entry.path().filename().string() + " round-trips");
    }
    o.note("1000 (reward, profile) pairs: " + std::to_string(bad_relations) + " incomplete or intransitive");
    o.note("1000 generated MDPs: " + std::to_string(invalid) + " invalid, " + std::to_string(round_trip_failures) +
           " round-trip mismatches");
    o.note(std::to_string(files) + " canonical corpus files round-trip byte for byte");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "utilitarian and registry quasi-utilitarian rewards pass all four axioms", criterion1},
        {2, "contrast rewards fail with sound, replayable witnesses", criterion2},
        {3, "Bellman values agree with sampled discounted returns", criterion3},
        {4, "value iteration optimal sets equal exhaustive enumeration", criterion4},
        {5, "fixture values, optimal choice and Pareto (SCF) violation threshold", criterion5},
        {6, "induced SWFs, generated MDPs and scenario round trips", criterion6},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        std::printf("criterion %d: %s - %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
