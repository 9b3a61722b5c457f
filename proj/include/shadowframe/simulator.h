// Copyright 2026 The shadowframe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shot-level simulation of measurement runs and their statistics.
//
// All randomness flows from a 64-bit seed. Runs split across workers or realizations use
// derive_seed(seed, k) for stream k, so results depend only on (seed, partition).

#ifndef SHADOWFRAME_SIMULATOR_H
#define SHADOWFRAME_SIMULATOR_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shadowframe/frame.h"
#include "shadowframe/povm.h"

namespace shadowframe {

/// Inverse-CDF sampling from p_b = <mu_b, rho>. Probabilities summing to within 1e-9 of
/// one are renormalized; anything else throws ValidationError.
std::vector<int> sample_outcomes(const Povm &p, const HermOperator &rho, std::int64_t n, Rng &rng);
std::vector<int> sample_outcomes(const Povm &p, const HermOperator &rho, std::int64_t n, uint64_t seed);

struct ShotRecord {
    int outcome;
    double value;
};

/// o(b_k) = <O, mu~_{b_k}> for each drawn outcome.
std::vector<ShotRecord> evaluate_estimator(const DualFrame &dual, const HermOperator &o, std::span<const int> outcomes);
std::vector<double> record_values(std::span<const ShotRecord> records);

/// Streaming count / mean / sum of squared deviations, mergeable without loss.
class RunningMoments {
   public:
    void add(double x);
    /// Pairwise combination of two disjoint partial runs.
    void merge(const RunningMoments &other);

    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance (n - 1 denominator); 0 for fewer than two values.
    double sample_variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double min() const { return min_; }
    double max() const { return max_; }

   private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

struct RunSummary {
    std::int64_t n = 0;
    double mean = 0.0;
    double sample_variance = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::optional<double> median_of_means;
    std::optional<int> groups;
    uint64_t seed = 0;
};

/// Median of the means of K contiguous groups; the first N mod K groups get one extra value.
double median_of_means(std::span<const double> values, int groups);

/// Requires N >= 2 and, if given, 2 <= K <= N.
RunSummary summarize(std::span<const double> values, std::optional<int> groups = {}, uint64_t seed = 0);

/// Draws N outcomes and evaluates the estimator: the per-shot value stream of one run.
std::vector<double> simulate_values(const Povm &p, const DualFrame &dual, const HermOperator &rho,
                                    const HermOperator &o, std::int64_t n, uint64_t seed);

struct ParallelRun {
    /// Mean and variance come from merging per-worker moments.
    RunSummary summary;
    /// Per-shot values in worker order.
    std::vector<double> values;
};

/// The same run split over `workers` threads, worker w drawing ceil/floor shares from
/// stream derive_seed(seed, w). Deterministic for a fixed (seed, workers) pair.
ParallelRun simulate_parallel(const Povm &p, const DualFrame &dual, const HermOperator &rho, const HermOperator &o,
                             std::int64_t n, uint64_t seed, int workers, std::optional<int> groups = {});

/// Per-shot canonical-estimator values for the Haar-random basis measurement:
/// (d + 1) <b|U O U^dagger|b> - tr(O).
std::vector<double> covariant_values(int d, const HermOperator &rho, const HermOperator &o, std::int64_t n,
                                     uint64_t seed);
RunSummary covariant_run(int d, const HermOperator &rho, const HermOperator &o, std::int64_t n, uint64_t seed,
                         std::optional<int> groups = {});

/// R sample means of N-shot runs; realization r uses stream derive_seed(seed, r).
std::vector<double> realization_means(const Povm &p, const DualFrame &dual, const HermOperator &rho,
                                      const HermOperator &o, std::int64_t n, int realizations, uint64_t seed);
std::vector<double> covariant_realization_means(int d, const HermOperator &rho, const HermOperator &o,
                                                std::int64_t n, int realizations, uint64_t seed);

struct GrowthPoint {
    std::int64_t n;
    double mean;
    double sample_variance;
};

/// Running mean and sample variance of the prefix of length n, for each checkpoint n.
std::vector<GrowthPoint> growth_curve(std::span<const double> values, std::span<const std::int64_t> checkpoints);
/// Roughly log-spaced checkpoints from 2 to n.
std::vector<std::int64_t> log_checkpoints(std::int64_t n, int per_decade);

struct HistogramBin {
    double low;
    double high;
    std::int64_t count;
    double density;
};

/// Fixed-width bins over [min, max]; density = count / (N * width).
std::vector<HistogramBin> histogram_export(std::span<const double> values, int bins);

struct MassPoint {
    double value;
    double probability;
};

/// Exact distribution of o(b) under rho: equal values (to 1e-12 relative) are merged.
std::vector<MassPoint> estimator_pmf(const Povm &p, const DualFrame &dual, const HermOperator &rho,
                                     const HermOperator &o);

}  // namespace shadowframe

#endif
