#pragma once

// Seeded Monte Carlo experiments for the randomized election. Each trial is a
// pure function of (spec, trial index), so the OpenMP kernel and the serial
// reference produce identical outcome vectors.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "obring/protocols.hpp"

namespace obring {

struct RandomizedTrialSpec {
    RandomizedParams params;
    std::vector<std::size_t> n_choices;
    std::uint64_t master_seed = 0;
    std::uint64_t step_cap = 2'000'000;
    /// When false only the identifier predicates are evaluated.
    bool simulate = true;
    /// Replaces ceil(c2 log2 U) as the scatteredness parameter and election d.
    std::optional<std::uint64_t> d_override;

    std::uint64_t d() const { return d_override.value_or(params.d()); }
    /// Throws BadParam on an empty n list, n == 0 or n > U.
    void validate() const;
};

struct TrialOutcome {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool simulated = false;
    bool success = false;
    bool collision = false;
    bool scatter_violation = false;
    bool wrong_leader = false;
    bool non_quiescent = false;
    /// Counts match (2 len - 1) d and 1 + #zeros for every process.
    bool formula_ok = false;
    /// Common per-process clockwise send count, when all processes agree.
    std::optional<std::uint64_t> cw_per_process;
    std::optional<std::uint64_t> ccw_per_process;

    bool operator==(const TrialOutcome&) const = default;
};

TrialOutcome run_randomized_trial(const RandomizedTrialSpec& spec, std::uint64_t index);

std::vector<TrialOutcome> run_trials_serial(const RandomizedTrialSpec& spec, std::uint64_t trials);
std::vector<TrialOutcome> run_trials_parallel(const RandomizedTrialSpec& spec, std::uint64_t trials);

struct FailureTaxonomy {
    std::uint64_t collisions = 0;
    std::uint64_t scatter_violations = 0;
    std::uint64_t wrong_leader = 0;
    std::uint64_t non_quiescent = 0;

    bool operator==(const FailureTaxonomy&) const = default;
};

struct MonteCarloReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double bound = 0.0;  // lower bound on the success probability
    std::uint64_t seed = 0;
    FailureTaxonomy failures;
    /// Successful trials whose counts differ from the exact formula.
    std::uint64_t formula_mismatches = 0;
    /// Per-process clockwise count of successful trials -> number of trials.
    std::map<std::uint64_t, std::uint64_t> cw_per_process;
    std::map<std::size_t, std::uint64_t> trials_by_n;

    double estimate() const noexcept;
    double violation_fraction() const noexcept { return 1.0 - estimate(); }
    /// Binomial standard error sqrt(p(1-p)/trials) at probability p.
    double sigma_at(double p) const noexcept;
    /// Half-width of the 3-sigma normal band around the estimate.
    double ci_halfwidth() const noexcept;

    void add(const TrialOutcome& outcome);
    void merge(const MonteCarloReport& other);
};

enum class Execution { Serial, Parallel };

MonteCarloReport summarize(const std::vector<TrialOutcome>& outcomes, double bound,
                           std::uint64_t seed);

/// Success = exactly one Leader at the minimum id with quiescent termination.
/// Bound 1 - U^-c. Throws BadParam for trials == 0 or any n > U.
MonteCarloReport mc_randomized_success(std::uint64_t bound, std::uint64_t c,
                                       std::vector<std::size_t> n_choices, std::uint64_t trials,
                                       std::uint64_t seed, Execution exec = Execution::Parallel);

MonteCarloReport mc_randomized_success(const RandomizedTrialSpec& spec, std::uint64_t trials,
                                       Execution exec = Execution::Parallel);

/// Success = the drawn arrangement is d-scattered. Bound 1 - ceil(c1 log2 U) U^(1-c2).
MonteCarloReport mc_scatteredness(std::uint64_t bound, std::uint64_t c1, std::uint64_t c2,
                                  std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                  std::optional<std::uint64_t> d_override = std::nullopt,
                                  Execution exec = Execution::Parallel);

/// Same, sampling n from spec.n_choices; `simulate` is forced off.
MonteCarloReport mc_scatteredness(RandomizedTrialSpec spec, std::uint64_t trials,
                                  Execution exec = Execution::Parallel);

}  // namespace obring
