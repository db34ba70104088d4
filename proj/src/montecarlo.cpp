#include "obring/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "obring/analysis.hpp"
#include "obring/error.hpp"
#include "obring/scheduler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace obring {

void RandomizedTrialSpec::validate() const {
    params.validate();
    if (n_choices.empty()) throw Error(ErrorCode::BadParam, "no ring sizes to sample");
    for (auto n : n_choices) {
        if (n == 0) throw Error(ErrorCode::BadParam, "ring size must be positive");
        if (n > params.bound)
            throw Error(ErrorCode::BadParam,
                        "ring size " + std::to_string(n) + " exceeds U=" + std::to_string(params.bound));
    }
    if (d_override && *d_override == 0) throw Error(ErrorCode::BadParam, "d must be positive");
}

TrialOutcome run_randomized_trial(const RandomizedTrialSpec& spec, std::uint64_t index) {
    TrialOutcome out;
    out.seed = derive_seed(spec.master_seed, index);
    Rng rng(out.seed);
    out.n = spec.n_choices[uniform_below(rng, spec.n_choices.size())];

    std::vector<std::uint64_t> ids(out.n);
    for (auto& id : ids) id = randomized_make_id(spec.params, rng);
    const std::uint64_t scheduler_seed = rng();

    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    out.collision = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();

    Arrangement arrangement;
    arrangement.reserve(out.n);
    for (auto id : ids) arrangement.push_back(EncodedId::from_raw(id));
    const auto d = spec.d();
    out.scatter_violation = !is_d_scattered(arrangement, d);

    out.simulated = spec.simulate;
    if (!spec.simulate) {
        out.success = !out.scatter_violation;
        return out;
    }

    std::vector<ProtocolMachine> machines;
    machines.reserve(out.n);
    for (const auto& e : arrangement) machines.push_back(log_election_new(e, d));
    RunOptions options;
    options.step_cap = spec.step_cap;
    const RingConfig config{out.n, spec.params.bound, ids};
    const auto result = run(config, std::move(machines), SeededRandom{scheduler_seed}, options);
    const auto judgement = judge_log_election(result, arrangement, d);

    out.wrong_leader = !judgement.leader_ok;
    out.non_quiescent = !judgement.quiescent_ok;
    out.success = judgement.leader_ok && judgement.quiescent_ok;
    out.formula_ok = judgement.cw_count_ok && judgement.ccw_count_ok;
    const auto& c = result.counters;
    if (std::all_of(c.begin(), c.end(), [&](const auto& x) { return x.sent_cw == c[0].sent_cw; }))
        out.cw_per_process = c[0].sent_cw;
    if (std::all_of(c.begin(), c.end(), [&](const auto& x) { return x.sent_ccw == c[0].sent_ccw; }))
        out.ccw_per_process = c[0].sent_ccw;
    return out;
}

std::vector<TrialOutcome> run_trials_serial(const RandomizedTrialSpec& spec, std::uint64_t trials) {
    spec.validate();
    std::vector<TrialOutcome> outcomes(trials);
    for (std::uint64_t i = 0; i < trials; ++i) outcomes[i] = run_randomized_trial(spec, i);
    return outcomes;
}

std::vector<TrialOutcome> run_trials_parallel(const RandomizedTrialSpec& spec, std::uint64_t trials) {
    spec.validate();
    std::vector<TrialOutcome> outcomes(trials);
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            outcomes[static_cast<std::size_t>(i)] =
                run_randomized_trial(spec, static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical(obring_mc_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

double MonteCarloReport::estimate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
}

double MonteCarloReport::sigma_at(double p) const noexcept {
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double MonteCarloReport::ci_halfwidth() const noexcept { return 3.0 * sigma_at(estimate()); }

void MonteCarloReport::add(const TrialOutcome& o) {
    ++trials;
    ++trials_by_n[o.n];
    if (o.collision) ++failures.collisions;
    if (o.scatter_violation) ++failures.scatter_violations;
    if (o.wrong_leader) ++failures.wrong_leader;
    if (o.non_quiescent) ++failures.non_quiescent;
    if (!o.success) return;
    ++successes;
    if (o.cw_per_process) ++cw_per_process[*o.cw_per_process];
    if (o.simulated && !o.formula_ok) ++formula_mismatches;
}

void MonteCarloReport::merge(const MonteCarloReport& other) {
    trials += other.trials;
    successes += other.successes;
    failures.collisions += other.failures.collisions;
    failures.scatter_violations += other.failures.scatter_violations;
    failures.wrong_leader += other.failures.wrong_leader;
    failures.non_quiescent += other.failures.non_quiescent;
    formula_mismatches += other.formula_mismatches;
    for (const auto& [k, v] : other.cw_per_process) cw_per_process[k] += v;
    for (const auto& [k, v] : other.trials_by_n) trials_by_n[k] += v;
}

MonteCarloReport summarize(const std::vector<TrialOutcome>& outcomes, double bound,
                           std::uint64_t seed) {
    MonteCarloReport report;
    report.bound = bound;
    report.seed = seed;
    for (const auto& o : outcomes) report.add(o);
    return report;
}

namespace {

std::vector<TrialOutcome> execute(const RandomizedTrialSpec& spec, std::uint64_t trials,
                                  Execution exec) {
    if (trials == 0) throw Error(ErrorCode::BadParam, "trials must be positive");
    return exec == Execution::Serial ? run_trials_serial(spec, trials)
                                     : run_trials_parallel(spec, trials);
}

}  // namespace

MonteCarloReport mc_randomized_success(const RandomizedTrialSpec& spec, std::uint64_t trials,
                                       Execution exec) {
    const auto outcomes = execute(spec, trials, exec);
    const double bound =
        1.0 - std::pow(static_cast<double>(spec.params.bound), -static_cast<double>(spec.params.c));
    return summarize(outcomes, bound, spec.master_seed);
}

MonteCarloReport mc_randomized_success(std::uint64_t bound, std::uint64_t c,
                                       std::vector<std::size_t> n_choices, std::uint64_t trials,
                                       std::uint64_t seed, Execution exec) {
    RandomizedTrialSpec spec;
    spec.params = RandomizedParams::with_c(bound, c, seed);
    spec.n_choices = std::move(n_choices);
    spec.master_seed = seed;
    return mc_randomized_success(spec, trials, exec);
}

MonteCarloReport mc_scatteredness(RandomizedTrialSpec spec, std::uint64_t trials, Execution exec) {
    spec.simulate = false;
    const auto outcomes = execute(spec, trials, exec);
    const double per_bit = std::pow(static_cast<double>(spec.params.bound),
                                    1.0 - static_cast<double>(spec.params.c2));
    const double aggregated = static_cast<double>(spec.params.id_exponent()) * per_bit;
    return summarize(outcomes, 1.0 - aggregated, spec.master_seed);
}

MonteCarloReport mc_scatteredness(std::uint64_t bound, std::uint64_t c1, std::uint64_t c2,
                                  std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                  std::optional<std::uint64_t> d_override, Execution exec) {
    RandomizedTrialSpec spec;
    spec.params = RandomizedParams{bound, c2 >= 2 ? c2 - 2 : 0, c1, c2, seed};
    spec.n_choices = {n};
    spec.master_seed = seed;
    spec.d_override = d_override;
    return mc_scatteredness(std::move(spec), trials, exec);
}

}  // namespace obring
