#include "scmdp/axioms.hpp"

#include "scmdp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace scmdp {

namespace {

std::vector<Rational> reward_vector(const RewardSpec& r, const Profile& p) {
    std::vector<Rational> values(p.alternative_count());
    for (std::size_t x = 0; x < values.size(); ++x) values[x] = eval_reward(r, p, x);
    return values;
}

// First (x, y) whose weak comparison differs between the two reward vectors.
std::optional<std::pair<std::size_t, std::size_t>> first_relation_difference(const std::vector<Rational>& a,
                                                                             const std::vector<Rational>& b) {
    for (std::size_t x = 0; x < a.size(); ++x) {
        for (std::size_t y = 0; y < a.size(); ++y) {
            if ((a[x] >= a[y]) != (b[x] >= b[y])) return std::make_pair(x, y);
        }
    }
    return std::nullopt;
}

class Recorder {
public:
    Recorder(Axiom axiom, std::string mode, std::size_t limit) : limit_(limit) {
        report_.axiom = axiom;
        report_.mode = std::move(mode);
    }

    void examined() { ++report_.checked_count; }

    void violation(Witness w) {
        w.instance = report_.checked_count == 0 ? 0 : report_.checked_count - 1;
        ++report_.violation_count;
        if (report_.witnesses.size() < limit_) report_.witnesses.push_back(std::move(w));
    }

    AxiomReport take() { return std::move(report_); }

private:
    AxiomReport report_;
    std::size_t limit_;
};

Witness pair_witness(const Profile& u, const Profile& v, std::size_t x, std::size_t y, const std::vector<Rational>& ru,
                     const std::vector<Rational>& rv) {
    Witness w;
    w.profiles = {u, v};
    w.alternatives = {x, y};
    w.reward_values = {ru[x], ru[y], rv[x], rv[y]};
    return w;
}

void require_total(const RewardSpec& r, const char* check) {
    if (!is_total(r)) {
        throw ModeError(std::string(check) +
                        ": generative mode needs a reward defined on every profile; this tabular reward has no "
                        "extension rule");
    }
}

void merge_into(AxiomReport& into, AxiomReport from, std::size_t limit) {
    for (auto& w : from.witnesses) {
        if (into.witnesses.size() >= limit) break;
        w.instance += into.checked_count;
        into.witnesses.push_back(std::move(w));
    }
    into.violation_count += from.violation_count;
    into.checked_count += from.checked_count;
}

AxiomReport cuc_pair(const RewardSpec& r, std::span<const Profile> profiles, std::size_t limit) {
    Recorder rec(Axiom::CucInvariance, "pair", limit);
    std::vector<std::vector<Rational>> values;
    values.reserve(profiles.size());
    for (const auto& p : profiles) values.push_back(reward_vector(r, p));
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            rec.examined();
            const auto witness = profiles_cuc_related(profiles[i], profiles[j]);
            if (!witness) continue;
            if (const auto diff = first_relation_difference(values[i], values[j])) {
                Witness w = pair_witness(profiles[i], profiles[j], diff->first, diff->second, values[i], values[j]);
                w.cuc = *witness;
                rec.violation(std::move(w));
            }
        }
    }
    return rec.take();
}

AxiomReport cuc_generative(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode) {
    require_total(r, "CUC-invariance");
    Recorder rec(Axiom::CucInvariance, "generative", mode.witness_limit);
    if (mode.alpha_grid.empty()) return rec.take();
    for (const auto& base : profiles) {
        const auto base_values = reward_vector(r, base);
        const std::size_t n = base.member_count();
        for (const Rational& beta : mode.beta_grid) {
            if (beta <= 0) throw InputError("CUC grid scale must be positive, got " + beta.to_string());
            // Odometer over alpha_grid^n, first member varying slowest.
            std::vector<std::size_t> digits(n, 0);
            while (true) {
                CucWitness cw{beta, std::vector<Rational>(n)};
                for (std::size_t i = 0; i < n; ++i) cw.alphas[i] = mode.alpha_grid[digits[i]];
                const Profile image = apply_cuc(base, cw);
                rec.examined();
                const auto image_values = reward_vector(r, image);
                if (const auto diff = first_relation_difference(image_values, base_values)) {
                    Witness w = pair_witness(image, base, diff->first, diff->second, image_values, base_values);
                    w.cuc = std::move(cw);
                    rec.violation(std::move(w));
                }
                std::size_t k = n;
                while (k > 0 && ++digits[k - 1] == mode.alpha_grid.size()) {
                    digits[k - 1] = 0;
                    --k;
                }
                if (k == 0) break;
            }
        }
    }
    return rec.take();
}

AxiomReport anonymity_pair(const RewardSpec& r, std::span<const Profile> profiles, std::size_t limit) {
    Recorder rec(Axiom::FunctionalAnonymity, "pair", limit);
    std::vector<std::vector<Rational>> values;
    values.reserve(profiles.size());
    for (const auto& p : profiles) values.push_back(reward_vector(r, p));
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            rec.examined();
            auto rho = profiles_permutation_related(profiles[i], profiles[j]);
            if (!rho) continue;
            if (const auto diff = first_relation_difference(values[i], values[j])) {
                Witness w = pair_witness(profiles[i], profiles[j], diff->first, diff->second, values[i], values[j]);
                w.permutation = std::move(*rho);
                rec.violation(std::move(w));
            }
        }
    }
    return rec.take();
}

AxiomReport anonymity_generative(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode) {
    require_total(r, "functional anonymity");
    Recorder rec(Axiom::FunctionalAnonymity, "generative", mode.witness_limit);
    std::mt19937_64 rng(mode.seed);
    for (const auto& base : profiles) {
        const auto base_values = reward_vector(r, base);
        const std::size_t n = base.member_count();
        auto visit = [&](const Permutation& rho) {
            const Profile image = apply_permutation(base, rho);
            rec.examined();
            const auto image_values = reward_vector(r, image);
            if (const auto diff = first_relation_difference(base_values, image_values)) {
                Witness w = pair_witness(base, image, diff->first, diff->second, base_values, image_values);
                w.permutation = rho;
                rec.violation(std::move(w));
            }
        };
        Permutation rho(n);
        std::iota(rho.begin(), rho.end(), std::size_t{0});
        if (n <= kMaxEnumeratedMembers) {
            do {
                visit(rho);
            } while (std::next_permutation(rho.begin(), rho.end()));
        } else {
            for (std::size_t k = 0; k < mode.samples; ++k) {
                std::shuffle(rho.begin(), rho.end(), rng);
                visit(rho);
            }
        }
    }
    return rec.take();
}

}  // namespace

std::string axiom_name(Axiom axiom) {
    switch (axiom) {
        case Axiom::ParetoSwf: return "pareto-swf";
        case Axiom::Iia: return "iia";
        case Axiom::CucInvariance: return "cuc-invariance";
        case Axiom::FunctionalAnonymity: return "functional-anonymity";
        case Axiom::AgreesWithUtilitarianism: return "agrees-with-utilitarianism";
        case Axiom::ParetoScf: return "pareto-scf";
    }
    return "unknown";
}

AxiomReport check_pareto_swf(const RewardSpec& r, std::span<const Profile> profiles, std::size_t witness_limit) {
    Recorder rec(Axiom::ParetoSwf, "pair", witness_limit);
    for (const auto& u : profiles) {
        const auto values = reward_vector(r, u);
        for (std::size_t x = 0; x < values.size(); ++x) {
            for (std::size_t y = 0; y < values.size(); ++y) {
                if (x == y) continue;
                rec.examined();
                if (unanimously_prefers(u, x, y) && !(values[x] > values[y])) {
                    rec.violation(Witness{{u}, {x, y}, std::nullopt, std::nullopt, {values[x], values[y]}, 0});
                }
            }
        }
    }
    return rec.take();
}

AxiomReport check_iia(const RewardSpec& r, std::span<const Profile> profiles, std::size_t witness_limit) {
    Recorder rec(Axiom::Iia, "pair", witness_limit);
    std::vector<std::vector<Rational>> values;
    values.reserve(profiles.size());
    for (const auto& p : profiles) values.push_back(reward_vector(r, p));
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            const Profile& u = profiles[i];
            const Profile& v = profiles[j];
            if (u.member_count() != v.member_count() || u.alternative_count() != v.alternative_count()) continue;
            const std::size_t n_alts = u.alternative_count();
            for (std::size_t x = 0; x < n_alts; ++x) {
                for (std::size_t y = 0; y < n_alts; ++y) {
                    if (x == y) continue;
                    rec.examined();
                    bool same_columns = true;
                    for (std::size_t m = 0; m < u.member_count() && same_columns; ++m) {
                        same_columns = u.rows[m].values[x] == v.rows[m].values[x] &&
                                       u.rows[m].values[y] == v.rows[m].values[y];
                    }
                    if (same_columns && (values[i][x] >= values[i][y]) != (values[j][x] >= values[j][y])) {
                        rec.violation(pair_witness(u, v, x, y, values[i], values[j]));
                    }
                }
            }
        }
    }
    return rec.take();
}

AxiomReport check_cuc_invariance(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode) {
    if (mode.kind == CheckMode::Kind::Pair) return cuc_pair(r, profiles, mode.witness_limit);
    if (mode.kind == CheckMode::Kind::Generative) return cuc_generative(r, profiles, mode);
    AxiomReport report = cuc_pair(r, profiles, mode.witness_limit);
    merge_into(report, cuc_generative(r, profiles, mode), mode.witness_limit);
    report.mode = "both";
    return report;
}

AxiomReport check_functional_anonymity(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode) {
    if (mode.kind == CheckMode::Kind::Pair) return anonymity_pair(r, profiles, mode.witness_limit);
    if (mode.kind == CheckMode::Kind::Generative) return anonymity_generative(r, profiles, mode);
    AxiomReport report = anonymity_pair(r, profiles, mode.witness_limit);
    merge_into(report, anonymity_generative(r, profiles, mode), mode.witness_limit);
    report.mode = "both";
    return report;
}

AxiomReport check_agrees_with_utilitarianism(const RewardSpec& r, std::span<const Profile> profiles,
                                             std::size_t witness_limit) {
    Recorder rec(Axiom::AgreesWithUtilitarianism, "pair", witness_limit);
    for (const auto& u : profiles) {
        const auto values = reward_vector(r, u);
        std::vector<Rational> sums(values.size());
        for (std::size_t x = 0; x < sums.size(); ++x) sums[x] = utilitarian_sum(u, x);
        for (std::size_t x = 0; x < values.size(); ++x) {
            for (std::size_t y = 0; y < values.size(); ++y) {
                if (x == y) continue;
                rec.examined();
                if ((values[x] >= values[y]) != (sums[x] >= sums[y])) {
                    rec.violation(
                        Witness{{u}, {x, y}, std::nullopt, std::nullopt, {values[x], values[y], sums[x], sums[y]}, 0});
                }
            }
        }
    }
    return rec.take();
}

AxiomReport check_pareto_scf(const Policy& pi, const SocialChoiceMDP& m, std::size_t witness_limit) {
    if (pi.choice.size() != m.state_count()) {
        throw InputError("policy covers " + std::to_string(pi.choice.size()) + " states, MDP has " +
                         std::to_string(m.state_count()));
    }
    AxiomReport report;
    report.axiom = Axiom::ParetoScf;
    for (std::size_t s = 0; s < m.state_count(); ++s) {
        const std::size_t chosen = pi.choice[s];
        for (std::size_t x = 0; x < m.action_count(); ++x) {
            ++report.checked_count;
            if (x != chosen && unanimously_prefers(m.states[s], x, chosen)) {
                ++report.violation_count;
                if (report.witnesses.size() < witness_limit) {
                    report.witnesses.push_back(Witness{{m.states[s]}, {x, chosen}, std::nullopt, std::nullopt, {}, s});
                }
            }
        }
    }
    return report;
}

bool replay_witness(Axiom axiom, const RewardSpec& r, const Witness& w) {
    const auto need = [&](std::size_t profiles) {
        return w.profiles.size() == profiles && w.alternatives.size() == 2;
    };
    switch (axiom) {
        case Axiom::ParetoSwf: {
            if (!need(1)) return false;
            const auto& u = w.profiles[0];
            const auto [x, y] = std::pair(w.alternatives[0], w.alternatives[1]);
            return unanimously_prefers(u, x, y) && !strictly_prefers(induced_swf(r, u), x, y);
        }
        case Axiom::Iia: {
            if (!need(2)) return false;
            const auto& u = w.profiles[0];
            const auto& v = w.profiles[1];
            const auto [x, y] = std::pair(w.alternatives[0], w.alternatives[1]);
            for (std::size_t m = 0; m < u.member_count(); ++m) {
                if (u.utility(m, x) != v.utility(m, x) || u.utility(m, y) != v.utility(m, y)) return false;
            }
            return induced_swf(r, u).weak(x, y) != induced_swf(r, v).weak(x, y);
        }
        case Axiom::CucInvariance: {
            if (!need(2) || !w.cuc) return false;
            if (apply_cuc(w.profiles[1], *w.cuc) != w.profiles[0]) return false;
            const auto [x, y] = std::pair(w.alternatives[0], w.alternatives[1]);
            return induced_swf(r, w.profiles[0]).weak(x, y) != induced_swf(r, w.profiles[1]).weak(x, y);
        }
        case Axiom::FunctionalAnonymity: {
            if (!need(2) || !w.permutation) return false;
            if (apply_permutation(w.profiles[0], *w.permutation) != w.profiles[1]) return false;
            const auto [x, y] = std::pair(w.alternatives[0], w.alternatives[1]);
            return induced_swf(r, w.profiles[0]).weak(x, y) != induced_swf(r, w.profiles[1]).weak(x, y);
        }
        case Axiom::AgreesWithUtilitarianism: {
            if (!need(1)) return false;
            const auto& u = w.profiles[0];
            const auto [x, y] = std::pair(w.alternatives[0], w.alternatives[1]);
            return (eval_reward(r, u, x) >= eval_reward(r, u, y)) != (utilitarian_sum(u, x) >= utilitarian_sum(u, y));
        }
        case Axiom::ParetoScf: {
            if (!need(1)) return false;
            return unanimously_prefers(w.profiles[0], w.alternatives[0], w.alternatives[1]);
        }
    }
    return false;
}

std::string verdict_name(EquivalenceReport::Verdict v) {
    switch (v) {
        case EquivalenceReport::Verdict::BothHold: return "both-hold";
        case EquivalenceReport::Verdict::BothFail: return "both-fail";
        case EquivalenceReport::Verdict::FiniteDomainArtifact: return "finite-domain-artifact";
        case EquivalenceReport::Verdict::ForwardViolation: return "forward-violation";
    }
    return "unknown";
}

EquivalenceReport verify_theorem2(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode) {
    EquivalenceReport out;
    const std::size_t limit = mode.witness_limit;

    out.axiom_reports.push_back(check_pareto_swf(r, profiles, limit));
    out.axiom_reports.push_back(check_iia(r, profiles, limit));
    out.axiom_reports.push_back(cuc_pair(r, profiles, limit));
    out.axiom_reports.push_back(anonymity_pair(r, profiles, limit));
    const std::size_t pair_reports = out.axiom_reports.size();
    if (mode.includes_generative()) {
        out.axiom_reports.push_back(cuc_generative(r, profiles, mode));
        out.axiom_reports.push_back(anonymity_generative(r, profiles, mode));
    }

    out.agreement = check_agrees_with_utilitarianism(r, profiles, limit);
    out.axioms_hold = std::all_of(out.axiom_reports.begin(), out.axiom_reports.end(),
                                  [](const AxiomReport& a) { return a.passed(); });
    const bool pair_axioms_hold = std::all_of(out.axiom_reports.begin(), out.axiom_reports.begin() + pair_reports,
                                              [](const AxiomReport& a) { return a.passed(); });
    out.forward_implication_holds = !out.agreement.passed() || pair_axioms_hold;
    out.agreement_holds = out.agreement.passed();

    if (!out.axioms_hold) {
        std::vector<Profile> extended(profiles.begin(), profiles.end());
        for (const auto& report : out.axiom_reports) {
            for (const auto& w : report.witnesses) {
                for (const auto& p : w.profiles) {
                    if (std::find(extended.begin(), extended.end(), p) == extended.end()) extended.push_back(p);
                }
            }
        }
        out.agreement_extended = check_agrees_with_utilitarianism(r, extended, limit);
        out.agreement_holds = out.agreement_extended->passed();
        if (out.agreement_holds) {
            for (const auto& report : out.axiom_reports) {
                if (!report.passed()) {
                    out.finite_domain_artifacts.push_back(axiom_name(report.axiom) + " (" + report.mode +
                                                          ") failed while agreement holds on the witness profiles");
                }
            }
        }
    } else if (!out.agreement_holds) {
        out.finite_domain_artifacts.push_back(
            "agreement fails but no axiom violation was found among the checked instances");
    }

    if (!out.forward_implication_holds) {
        out.verdict = EquivalenceReport::Verdict::ForwardViolation;
    } else if (out.axioms_hold && out.agreement_holds) {
        out.verdict = EquivalenceReport::Verdict::BothHold;
    } else if (!out.axioms_hold && !out.agreement_holds) {
        out.verdict = EquivalenceReport::Verdict::BothFail;
    } else {
        out.verdict = EquivalenceReport::Verdict::FiniteDomainArtifact;
    }
    return out;
}

}  // namespace scmdp
