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

#include "shadowframe/simulator.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "shadowframe/errors.h"
#include "shadowframe/variance.h"
#include "test_util.h"

using namespace shadowframe;
using namespace shadowframe::testing;

TEST(sample_outcomes, frequencies_match_born_rule) {
    Rng rng(1);
    Povm p = random_rank1(3, 7, rng);
    HermOperator rho = random_mixed_state(3, rng);
    const std::int64_t n = 200000;
    std::vector<int> outcomes = sample_outcomes(p, rho, n, uint64_t{42});
    std::vector<double> counts(p.size(), 0.0);
    for (int b : outcomes) counts[b] += 1.0;
    std::vector<double> probs = p.probabilities(rho);
    // Pearson chi-square with 6 degrees of freedom; 99.9th percentile is 22.46.
    double chi2 = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
        const double e = probs[b] * n;
        chi2 += (counts[b] - e) * (counts[b] - e) / e;
    }
    ASSERT_LT(chi2, 22.46);
}

TEST(sample_outcomes, reproducible_and_seed_sensitive) {
    Povm p = mub_povm(3);
    HermOperator rho = HermOperator::basis_projector(3, 1);
    ASSERT_EQ(sample_outcomes(p, rho, 1000, uint64_t{7}), sample_outcomes(p, rho, 1000, uint64_t{7}));
    ASSERT_NE(sample_outcomes(p, rho, 1000, uint64_t{7}), sample_outcomes(p, rho, 1000, uint64_t{8}));
    // Zero-probability outcomes never appear.
    for (int b : sample_outcomes(p, rho, 1000, uint64_t{9})) {
        ASSERT_NE(b, 0);
        ASSERT_NE(b, 2);
    }
}

TEST(sample_outcomes, rejects_bad_inputs) {
    Povm p = mub_povm(2);
    ASSERT_THROW(sample_outcomes(p, HermOperator::identity(2), 10, uint64_t{1}), ValidationError);
    ASSERT_THROW(sample_outcomes(p, HermOperator::basis_projector(3, 0), 10, uint64_t{1}), DimensionError);
    Povm incomplete({HermOperator::basis_projector(2, 0)});
    ASSERT_THROW(sample_outcomes(incomplete, HermOperator::basis_projector(2, 1), 10, uint64_t{1}), ValidationError);
}

TEST(evaluate_estimator, values_follow_dual) {
    Povm p = toy_povm(ToyPovm::ic);
    DualFrame dual = canonical_estimator(p);
    std::vector<int> outcomes = {0, 1, 2, 3, 0};
    std::vector<ShotRecord> rec = evaluate_estimator(dual, pauli_z(), outcomes);
    std::vector<double> vals = record_values(rec);
    std::vector<double> expect = {5, -1, -1, -1, 5};
    ASSERT_EQ(vals.size(), expect.size());
    for (std::size_t k = 0; k < vals.size(); ++k) {
        ASSERT_NEAR(vals[k], expect[k], 1e-12);
        ASSERT_EQ(rec[k].outcome, outcomes[k]);
    }
    std::vector<int> bad = {4};
    ASSERT_THROW(evaluate_estimator(dual, pauli_z(), bad), ValidationError);
}

TEST(running_moments, merge_matches_sequential) {
    Rng rng(2);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<double> xs(1001);
    for (double &x : xs) x = g(rng);
    RunningMoments all;
    for (double x : xs) all.add(x);
    for (std::size_t split : {std::size_t{0}, std::size_t{1}, std::size_t{500}, std::size_t{1001}}) {
        RunningMoments a, b;
        for (std::size_t k = 0; k < xs.size(); ++k) (k < split ? a : b).add(xs[k]);
        a.merge(b);
        ASSERT_EQ(a.count(), all.count());
        ASSERT_NEAR(a.mean(), all.mean(), 1e-12);
        ASSERT_NEAR(a.sample_variance(), all.sample_variance(), 1e-10);
        ASSERT_EQ(a.min(), all.min());
        ASSERT_EQ(a.max(), all.max());
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    ASSERT_NEAR(all.sample_variance(), ss / (xs.size() - 1), 1e-10);
}

TEST(median_of_means, grouping) {
    std::vector<double> v = {1, 2, 3, 4, 5, 6, 7};
    // Groups {1,2,3}, {4,5}, {6,7}: means 2, 4.5, 6.5.
    ASSERT_DOUBLE_EQ(median_of_means(v, 3), 4.5);
    // Groups {1,2,3,4}, {5,6,7}: means 2.5, 6.
    ASSERT_DOUBLE_EQ(median_of_means(v, 2), 4.25);
    ASSERT_DOUBLE_EQ(median_of_means(v, 7), 4.0);
    ASSERT_THROW(median_of_means(v, 8), ValidationError);
    ASSERT_THROW(median_of_means(v, 0), ValidationError);
}

TEST(median_of_means, robust_to_outliers) {
    std::vector<double> v(1000, 1.0);
    v[3] = 1e9;
    ASSERT_DOUBLE_EQ(median_of_means(v, 10), 1.0);
}

TEST(summarize, fields_and_validation) {
    std::vector<double> v = {1, 2, 3, 4};
    RunSummary s = summarize(v, 2, 17);
    ASSERT_EQ(s.n, 4);
    ASSERT_DOUBLE_EQ(s.mean, 2.5);
    ASSERT_DOUBLE_EQ(s.sample_variance, 5.0 / 3);
    ASSERT_DOUBLE_EQ(*s.median_of_means, 2.5);
    ASSERT_EQ(s.seed, 17u);
    std::vector<double> one = {1};
    ASSERT_THROW(summarize(one), ValidationError);
    ASSERT_THROW(summarize(v, 1), ValidationError);
    ASSERT_THROW(summarize(v, 5), ValidationError);
}

TEST(simulate, unbiased_with_matching_variance) {
    Rng rng(3);
    Povm p = random_ic_povm(2, 8, rng);
    HermOperator rho = random_pure_state(2, rng);
    HermOperator o = random_traceless_observable(2, rng);
    DualFrame dual = canonical_estimator(p);
    const std::int64_t n = 100000;
    RunSummary s = summarize(simulate_values(p, dual, rho, o, n, 11), 10, 11);
    const double var = variance_exact(p, dual, rho, o);
    ASSERT_LE(std::abs(s.mean - hs_inner(o, rho)), 5.0 * std::sqrt(var / n));
    ASSERT_NEAR(s.sample_variance, var, 0.05 * var);
}

TEST(simulate_parallel, deterministic_and_consistent) {
    Povm p = mub_povm(3);
    DualFrame dual = canonical_estimator(p);
    HermOperator rho = HermOperator::basis_projector(3, 0);
    Rng rng(4);
    HermOperator o = random_traceless_observable(3, rng);
    ParallelRun a = simulate_parallel(p, dual, rho, o, 10001, 5, 4, 9);
    ParallelRun b = simulate_parallel(p, dual, rho, o, 10001, 5, 4, 9);
    ASSERT_EQ(a.values, b.values);
    ASSERT_EQ(a.summary.mean, b.summary.mean);
    ASSERT_EQ(static_cast<std::int64_t>(a.values.size()), 10001);
    RunSummary seq = summarize(a.values, 9, 5);
    ASSERT_NEAR(a.summary.mean, seq.mean, 1e-12);
    ASSERT_NEAR(a.summary.sample_variance, seq.sample_variance, 1e-10);
    ASSERT_EQ(*a.summary.median_of_means, *seq.median_of_means);
    // One worker reproduces the serial stream for stream 0.
    ParallelRun single = simulate_parallel(p, dual, rho, o, 500, 5, 1);
    ASSERT_EQ(single.values, simulate_values(p, dual, rho, o, 500, derive_seed(5, 0)));
    ASSERT_THROW(simulate_parallel(p, dual, rho, o, 100, 5, 0), ValidationError);
}

TEST(covariant, unbiased_with_design_variance) {
    const int d = 3;
    HermOperator rho = HermOperator::basis_projector(d, 0);
    Rng rng(6);
    HermOperator o = random_hermitian(d, rng);
    const std::int64_t n = 40000;
    RunSummary s = covariant_run(d, rho, o, n, 21);
    const double var = variance_3design(rho, o, d);
    ASSERT_LE(std::abs(s.mean - hs_inner(o, rho)), 5.0 * std::sqrt(var / n));
    ASSERT_NEAR(s.sample_variance, var, 0.06 * var);
    ASSERT_EQ(covariant_values(d, rho, o, 50, 3), covariant_values(d, rho, o, 50, 3));
}

TEST(realization_means, spread_matches_variance) {
    Povm p = mub_povm(2);
    DualFrame dual = canonical_estimator(p);
    HermOperator rho = HermOperator::basis_projector(2, 0);
    std::vector<double> means = realization_means(p, dual, rho, pauli_x(), 100, 400, 8);
    RunSummary s = summarize(means);
    const double var = variance_exact(p, dual, rho, pauli_x());
    ASSERT_NEAR(s.sample_variance * 100, var, 0.2 * var);
    ASSERT_EQ(means, realization_means(p, dual, rho, pauli_x(), 100, 400, 8));
}

TEST(growth_curve, checkpoints) {
    std::vector<double> v = {1, 3, 5, 7, 9};
    std::vector<std::int64_t> cps = {2, 5};
    std::vector<GrowthPoint> g = growth_curve(v, cps);
    ASSERT_EQ(g.size(), 2u);
    ASSERT_DOUBLE_EQ(g[0].mean, 2.0);
    ASSERT_DOUBLE_EQ(g[1].mean, 5.0);
    ASSERT_DOUBLE_EQ(g[1].sample_variance, 10.0);
    std::vector<std::int64_t> bad = {3, 2};
    ASSERT_THROW(growth_curve(v, bad), ValidationError);
    std::vector<std::int64_t> lc = log_checkpoints(1000, 3);
    ASSERT_EQ(lc.front(), 2);
    ASSERT_EQ(lc.back(), 1000);
    for (std::size_t k = 1; k < lc.size(); ++k) ASSERT_GT(lc[k], lc[k - 1]);
}

TEST(histogram_export, integrates_to_one) {
    Rng rng(7);
    std::normal_distribution<double> g;
    std::vector<double> xs(5000);
    for (double &x : xs) x = g(rng);
    std::vector<HistogramBin> h = histogram_export(xs, 37);
    double area = 0.0;
    std::int64_t count = 0;
    for (const auto &b : h) {
        area += b.density * (b.high - b.low);
        count += b.count;
    }
    ASSERT_NEAR(area, 1.0, 1e-12);
    ASSERT_EQ(count, 5000);
    std::vector<double> flat(10, 2.0);
    std::vector<HistogramBin> hf = histogram_export(flat, 4);
    ASSERT_DOUBLE_EQ(hf.front().low, 1.5);
    ASSERT_DOUBLE_EQ(hf.back().high, 2.5);
    ASSERT_THROW(histogram_export(flat, 0), ValidationError);
}

TEST(estimator_pmf, moments_match_exact) {
    Povm p = toy_povm(ToyPovm::ic);
    DualFrame dual = canonical_estimator(p);
    HermOperator rho = HermOperator::basis_projector(2, 0);
    std::vector<MassPoint> pmf = estimator_pmf(p, dual, rho, pauli_z());
    ASSERT_EQ(pmf.size(), 2u);
    ASSERT_DOUBLE_EQ(pmf[0].value, -1.0);
    ASSERT_NEAR(pmf[0].probability, 2.0 / 3, 1e-12);
    ASSERT_NEAR(pmf[1].probability, 1.0 / 3, 1e-12);

    Rng rng(8);
    Povm q = random_ic_povm(3, 12, rng);
    HermOperator r = random_mixed_state(3, rng);
    HermOperator o = random_hermitian(3, rng);
    DualFrame dq = canonical_estimator(q);
    double total = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto &m : estimator_pmf(q, dq, r, o)) {
        total += m.probability;
        m1 += m.probability * m.value;
        m2 += m.probability * m.value * m.value;
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
    ASSERT_NEAR(m1, hs_inner(o, r), 1e-9);
    ASSERT_NEAR(m2 - m1 * m1, variance_exact(q, dq, r, o), 1e-9);
}
