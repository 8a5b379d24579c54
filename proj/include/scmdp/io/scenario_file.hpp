#pragma once

#include "scmdp/errors.hpp"
#include "scmdp/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace scmdp::io {

using Json = nlohmann::ordered_json;

/// Malformed scenario; `path()` is a JSON key path such as `$.kernel["U_A,x"][0][1]`.
class ScenarioError : public InputError {
public:
    ScenarioError(std::string path, const std::string& message)
        : InputError(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct Scenario {
    SocialChoiceMDP mdp;
    std::optional<Rational> gamma;
};

/**
 * Scenario file layout (all rationals are strings "p", "p/q" or decimals):
 *
 *   {
 *     "members": ["1", "2"],
 *     "alternatives": ["x", "y"],
 *     "states": [{"name": "U_A", "utilities": [["1", "0"], ["1", "0"]]}, ...],
 *     "kernel": {"U_A,x": [["U_A", "1"]], ...},
 *     "reward": {"kind": "utilitarian"}
 *             | {"kind": "quasi", "transform": {"kind": "identity"}
 *                                            | {"kind": "affine", "a": "3", "b": "5"}
 *                                            | {"kind": "odd-power", "k": 3}
 *                                            | {"kind": "piecewise-linear", "points": [["0", "0"], ...]}}
 *             | {"kind": "tabular", "values": {"U_A": ["2", "0"], ...}, "extension": "none" | "nearest-by-sum"}
 *             | {"kind": "custom", "expr": "(sum-over-members (utility member alt))"},
 *     "gamma": "9/10"                                    optional
 *   }
 *
 * Unknown keys are rejected. The parsed MDP must pass validate_mdp.
 */
Scenario parse_scenario(std::string_view text);
Scenario scenario_from_json(const Json& doc);

Json scenario_to_json(const Scenario& scenario);
/// Canonical text: two-space indent, fixed key order, trailing newline.
std::string serialize_scenario(const Scenario& scenario);

Json reward_to_json(const RewardSpec& reward, const SocialChoiceMDP& m);

Scenario load_scenario_file(const std::filesystem::path& path);

/// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace scmdp::io
