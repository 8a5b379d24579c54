#pragma once

#include "scmdp/axioms.hpp"
#include "scmdp/io/scenario_file.hpp"
#include "scmdp/scenarios.hpp"
#include "scmdp/solver.hpp"

#include <set>
#include <string>

namespace scmdp::io {

Json profile_to_json(const Profile& p);
Profile profile_from_json(const Json& j);

Json policy_to_json(const Policy& pi, const SocialChoiceMDP& m);
Json policy_set_to_json(const std::set<Policy>& policies, const SocialChoiceMDP& m);

/// Witnesses inline their profiles so they can be replayed from the report alone.
Json axiom_report_to_json(const AxiomReport& report, const SocialChoiceMDP& m);
Json equivalence_report_to_json(const EquivalenceReport& report, const SocialChoiceMDP& m);
Json solution_to_json(const OptimalSolution& sol, const SocialChoiceMDP& m);
Json bellman_sum_report_to_json(const BellmanSumReport& report, const SocialChoiceMDP& m);
Json optimal_set_report_to_json(const OptimalSetReport& report, const SocialChoiceMDP& m);
Json violation_to_json(const ParetoScfViolation& v, const SocialChoiceMDP& m);

/// Hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

struct RecheckSummary {
    std::size_t witnesses = 0;
    std::size_t reproduced = 0;
    std::vector<std::string> failures;  ///< JSON paths of witnesses that did not replay

    bool ok() const noexcept { return failures.empty(); }
};

/**
 * Replays every witness in a report produced by the CLI, using only the
 * scenario echoed inside the report for the reward definition.
 */
RecheckSummary recheck_report(const Json& report);

}  // namespace scmdp::io
