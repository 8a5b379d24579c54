#pragma once

#include "scmdp/model.hpp"
#include "scmdp/profile.hpp"
#include "scmdp/welfare.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scmdp {

enum class Axiom { ParetoSwf, Iia, CucInvariance, FunctionalAnonymity, AgreesWithUtilitarianism, ParetoScf };

std::string axiom_name(Axiom axiom);

/**
 * Replayable counterexample.
 *
 * Field use per axiom:
 *   ParetoSwf      profiles {U}, alternatives {x, y}, rewards {R(U,x), R(U,y)}
 *   Iia            profiles {U, U'}, alternatives {x, y}, rewards {R(U,x), R(U,y), R(U',x), R(U',y)}
 *   CucInvariance  as Iia, plus cuc with U = alpha + beta * U'
 *   FunctionalAnonymity  as Iia, plus permutation with U'_i = U_{rho(i)}
 *   AgreesWithUtilitarianism  profiles {U}, alternatives {x, y}, rewards {R(U,x), R(U,y), sum(x), sum(y)}
 *   ParetoScf      profiles {U}, alternatives {dominating x, chosen pi(U)}, instance = state index
 */
struct Witness {
    std::vector<Profile> profiles;
    std::vector<std::size_t> alternatives;
    std::optional<CucWitness> cuc;
    std::optional<Permutation> permutation;
    std::vector<Rational> reward_values;
    std::size_t instance = 0;
};

struct AxiomReport {
    Axiom axiom = Axiom::ParetoSwf;
    std::string mode = "pair";
    std::vector<Witness> witnesses;  // at most the witness limit, in instance order
    std::size_t violation_count = 0;
    std::size_t checked_count = 0;

    bool passed() const noexcept { return violation_count == 0; }
};

inline constexpr std::size_t kDefaultWitnessLimit = 64;

struct CheckMode {
    enum class Kind { Pair, Generative, Both };

    Kind kind = Kind::Pair;
    std::uint64_t seed = 0;
    /// Permutations drawn when the roster is too large to enumerate.
    std::size_t samples = 720;
    std::vector<Rational> beta_grid{Rational(1, 3), Rational(1, 2), 1, 2, 3};
    std::vector<Rational> alpha_grid{-2, -1, 0, 1, 2};
    std::size_t witness_limit = kDefaultWitnessLimit;

    static CheckMode pair() { return {}; }
    static CheckMode generative(std::uint64_t seed = 0) {
        CheckMode m;
        m.kind = Kind::Generative;
        m.seed = seed;
        return m;
    }
    static CheckMode both(std::uint64_t seed = 0) {
        CheckMode m;
        m.kind = Kind::Both;
        m.seed = seed;
        return m;
    }

    bool includes_pair() const noexcept { return kind != Kind::Generative; }
    bool includes_generative() const noexcept { return kind != Kind::Pair; }
};

/// Rosters up to this size get every permutation in generative mode.
inline constexpr std::size_t kMaxEnumeratedMembers = 6;

AxiomReport check_pareto_swf(const RewardSpec& r, std::span<const Profile> profiles,
                             std::size_t witness_limit = kDefaultWitnessLimit);

AxiomReport check_iia(const RewardSpec& r, std::span<const Profile> profiles,
                      std::size_t witness_limit = kDefaultWitnessLimit);

/// Throws ModeError for generative checks on rewards undefined off their table.
AxiomReport check_cuc_invariance(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode);

AxiomReport check_functional_anonymity(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode);

AxiomReport check_agrees_with_utilitarianism(const RewardSpec& r, std::span<const Profile> profiles,
                                             std::size_t witness_limit = kDefaultWitnessLimit);

/// A policy read as a social choice function must never pick a unanimously dominated alternative.
AxiomReport check_pareto_scf(const Policy& pi, const SocialChoiceMDP& m,
                             std::size_t witness_limit = kDefaultWitnessLimit);

/// Re-derives the violation recorded in `w` from scratch. True if it reproduces.
bool replay_witness(Axiom axiom, const RewardSpec& r, const Witness& w);

struct EquivalenceReport {
    enum class Verdict {
        BothHold,
        BothFail,
        /// Axioms and agreement disagree, but only in the direction a finite
        /// profile set cannot rule out.
        FiniteDomainArtifact,
        /// Agreement held while a pair-mode axiom failed: impossible for a correct checker.
        ForwardViolation,
    };

    std::vector<AxiomReport> axiom_reports;
    AxiomReport agreement;
    /// Agreement re-run over the supplied profiles plus every axiom-witness profile.
    std::optional<AxiomReport> agreement_extended;
    bool axioms_hold = true;
    bool agreement_holds = true;
    bool forward_implication_holds = true;
    std::vector<std::string> finite_domain_artifacts;
    Verdict verdict = Verdict::BothHold;

    /// Everything except a forward violation is consistent with the equivalence.
    bool consistent() const noexcept { return verdict != Verdict::ForwardViolation; }
};

std::string verdict_name(EquivalenceReport::Verdict v);

EquivalenceReport verify_theorem2(const RewardSpec& r, std::span<const Profile> profiles, const CheckMode& mode);

}  // namespace scmdp
