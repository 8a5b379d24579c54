#include "scmdp/io/report.hpp"

#include <openssl/evp.h>

#include <cstdio>

namespace scmdp::io {

namespace {

std::string alt_label(const SocialChoiceMDP& m, std::size_t a) {
    return a < m.alternatives.size() ? m.alternatives[a].label : std::to_string(a);
}

std::string state_label(const SocialChoiceMDP& m, std::size_t s) {
    return s < m.state_names.size() ? m.state_names[s] : std::to_string(s);
}

Json rationals(const std::vector<Rational>& values) {
    Json out = Json::array();
    for (const auto& v : values) out.push_back(v.to_string());
    return out;
}

Json witness_to_json(const Witness& w, const SocialChoiceMDP& m) {
    Json out = Json::object();
    out["instance"] = w.instance;
    out["profiles"] = Json::array();
    for (const auto& p : w.profiles) out["profiles"].push_back(profile_to_json(p));
    out["alternatives"] = Json::array();
    for (std::size_t a : w.alternatives) out["alternatives"].push_back(alt_label(m, a));
    out["alternative_indices"] = w.alternatives;
    if (w.cuc) {
        out["cuc"] = Json{{"beta", w.cuc->beta.to_string()}, {"alphas", rationals(w.cuc->alphas)}};
    }
    if (w.permutation) out["permutation"] = *w.permutation;
    out["reward_values"] = rationals(w.reward_values);
    return out;
}

std::optional<Axiom> axiom_from_name(const std::string& name) {
    for (Axiom a : {Axiom::ParetoSwf, Axiom::Iia, Axiom::CucInvariance, Axiom::FunctionalAnonymity,
                    Axiom::AgreesWithUtilitarianism, Axiom::ParetoScf}) {
        if (axiom_name(a) == name) return a;
    }
    return std::nullopt;
}

Witness witness_from_json(const Json& j) {
    Witness w;
    w.instance = j.at("instance").get<std::size_t>();
    for (const auto& p : j.at("profiles")) w.profiles.push_back(profile_from_json(p));
    w.alternatives = j.at("alternative_indices").get<std::vector<std::size_t>>();
    if (j.contains("cuc")) {
        CucWitness cw;
        cw.beta = Rational::parse(j.at("cuc").at("beta").get<std::string>());
        for (const auto& a : j.at("cuc").at("alphas")) cw.alphas.push_back(Rational::parse(a.get<std::string>()));
        w.cuc = std::move(cw);
    }
    if (j.contains("permutation")) w.permutation = j.at("permutation").get<Permutation>();
    for (const auto& v : j.at("reward_values")) w.reward_values.push_back(Rational::parse(v.get<std::string>()));
    return w;
}

void walk(const Json& node, const std::string& path, const RewardSpec& reward, RecheckSummary& out) {
    if (node.is_object()) {
        if (node.contains("axiom") && node.contains("witnesses") && node.at("axiom").is_string()) {
            const auto axiom = axiom_from_name(node.at("axiom").get<std::string>());
            const Json& ws = node.at("witnesses");
            for (std::size_t i = 0; i < ws.size(); ++i) {
                ++out.witnesses;
                bool ok = false;
                try {
                    ok = axiom && replay_witness(*axiom, reward, witness_from_json(ws[i]));
                } catch (const std::exception&) {
                    ok = false;
                }
                if (ok) {
                    ++out.reproduced;
                } else {
                    out.failures.push_back(path + "[\"witnesses\"][" + std::to_string(i) + "]");
                }
            }
            return;
        }
        for (const auto& [key, child] : node.items()) {
            if (key == "scenario") continue;
            walk(child, path + "[\"" + key + "\"]", reward, out);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) walk(node[i], path + "[" + std::to_string(i) + "]", reward, out);
    }
}

}  // namespace

Json profile_to_json(const Profile& p) {
    Json out = Json::array();
    for (const auto& row : p.rows) out.push_back(rationals(row.values));
    return out;
}

Profile profile_from_json(const Json& j) {
    Profile p;
    for (const auto& row : j) {
        UtilityFunction u;
        for (const auto& v : row) u.values.push_back(Rational::parse(v.get<std::string>()));
        p.rows.push_back(std::move(u));
    }
    return p;
}

Json policy_to_json(const Policy& pi, const SocialChoiceMDP& m) {
    Json out = Json::array();
    for (std::size_t a : pi.choice) out.push_back(alt_label(m, a));
    return out;
}

Json policy_set_to_json(const std::set<Policy>& policies, const SocialChoiceMDP& m) {
    Json out = Json::array();
    for (const auto& p : policies) out.push_back(policy_to_json(p, m));
    return out;
}

Json axiom_report_to_json(const AxiomReport& report, const SocialChoiceMDP& m) {
    Json out = Json::object();
    out["axiom"] = axiom_name(report.axiom);
    out["mode"] = report.mode;
    out["passed"] = report.passed();
    out["checked_count"] = report.checked_count;
    out["violation_count"] = report.violation_count;
    out["witnesses"] = Json::array();
    for (const auto& w : report.witnesses) out["witnesses"].push_back(witness_to_json(w, m));
    return out;
}

Json equivalence_report_to_json(const EquivalenceReport& report, const SocialChoiceMDP& m) {
    Json out = Json::object();
    out["verdict"] = verdict_name(report.verdict);
    out["consistent"] = report.consistent();
    out["axioms_hold"] = report.axioms_hold;
    out["agreement_holds"] = report.agreement_holds;
    out["forward_implication_holds"] = report.forward_implication_holds;
    out["finite_domain_artifacts"] = report.finite_domain_artifacts;
    out["axiom_reports"] = Json::array();
    for (const auto& r : report.axiom_reports) out["axiom_reports"].push_back(axiom_report_to_json(r, m));
    out["agreement"] = axiom_report_to_json(report.agreement, m);
    if (report.agreement_extended) out["agreement_extended"] = axiom_report_to_json(*report.agreement_extended, m);
    return out;
}

Json solution_to_json(const OptimalSolution& sol, const SocialChoiceMDP& m) {
    Json out = Json::object();
    Json values = Json::object();
    Json actions = Json::object();
    for (std::size_t s = 0; s < sol.values.values.size(); ++s) {
        values[state_label(m, s)] = sol.values.values[s];
        Json tied = Json::array();
        for (std::size_t a : sol.optimal_actions[s]) tied.push_back(alt_label(m, a));
        actions[state_label(m, s)] = std::move(tied);
    }
    out["values"] = std::move(values);
    out["greedy_policy"] = policy_to_json(sol.greedy, m);
    out["optimal_actions"] = std::move(actions);
    out["iterations"] = sol.iterations;
    out["bellman_optimality_residual"] = sol.residual;
    return out;
}

Json bellman_sum_report_to_json(const BellmanSumReport& report, const SocialChoiceMDP& m) {
    Json out = Json::object();
    out["policy"] = policy_to_json(report.policy, m);
    out["all_agree"] = report.all_agree;
    out["states"] = Json::array();
    for (const auto& s : report.states) {
        out["states"].push_back(Json{{"state", state_label(m, s.state)},
                                     {"bellman_value", s.bellman_value},
                                     {"monte_carlo_value", s.monte_carlo_value},
                                     {"half_width", s.half_width},
                                     {"tolerance", s.tolerance},
                                     {"agrees", s.agrees}});
    }
    return out;
}

Json optimal_set_report_to_json(const OptimalSetReport& report, const SocialChoiceMDP& m) {
    Json out = Json::object();
    out["equal"] = report.equal;
    out["from_value_iteration"] = policy_set_to_json(report.from_value_iteration, m);
    out["from_enumeration"] = policy_set_to_json(report.from_enumeration, m);
    out["only_value_iteration"] = policy_set_to_json(report.only_value_iteration, m);
    out["only_enumeration"] = policy_set_to_json(report.only_enumeration, m);
    return out;
}

Json violation_to_json(const ParetoScfViolation& v, const SocialChoiceMDP& m) {
    Json out = Json::object();
    out["state"] = state_label(m, v.state);
    out["profile"] = profile_to_json(m.states[v.state]);
    out["dominating"] = alt_label(m, v.dominating);
    out["chosen"] = alt_label(m, v.chosen);
    out["dominating_value"] = v.dominating_value;
    out["chosen_value"] = v.chosen_value;
    out["policy"] = policy_to_json(v.policy, m);
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    hex.reserve(len * 2);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

RecheckSummary recheck_report(const Json& report) {
    RecheckSummary out;
    const Scenario sc = scenario_from_json(report.at("scenario"));
    walk(report.at("results"), "$[\"results\"]", sc.mdp.reward, out);
    return out;
}

}  // namespace scmdp::io
