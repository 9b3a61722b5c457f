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

#include <algorithm>
#include <cmath>
#include <thread>

#include "shadowframe/errors.h"

namespace shadowframe {

namespace {

std::vector<double> cumulative_probabilities(const Povm &p, const HermOperator &rho) {
    if (rho.dim() != p.dim()) {
        throw DimensionError("sample_outcomes: state dimension mismatch");
    }
    if (!is_density_matrix(rho)) {
        throw ValidationError("sample_outcomes: not a density matrix");
    }
    std::vector<double> prob = p.probabilities(rho);
    double total = 0.0;
    for (double &x : prob) {
        if (x < -kPsdTol) {
            throw ValidationError("sample_outcomes: negative outcome probability");
        }
        x = std::max(x, 0.0);
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ValidationError("sample_outcomes: outcome probabilities do not sum to one");
    }
    double acc = 0.0;
    for (double &x : prob) {
        acc += x / total;
        x = acc;
    }
    prob.back() = 1.0;
    return prob;
}

int draw(const std::vector<double> &cdf, Rng &rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
        --it;
    }
    return static_cast<int>(it - cdf.begin());
}

std::vector<double> outcome_values(const DualFrame &dual, const HermOperator &o) {
    if (o.dim() != dual.dim()) {
        throw DimensionError("estimator: observable dimension mismatch");
    }
    return dual.values(o);
}

double mean_of(std::span<const double> values) {
    RunningMoments m;
    for (double v : values) {
        m.add(v);
    }
    return m.mean();
}

}  // namespace

std::vector<int> sample_outcomes(const Povm &p, const HermOperator &rho, std::int64_t n, Rng &rng) {
    if (n < 0) {
        throw ValidationError("sample_outcomes: negative shot count");
    }
    const std::vector<double> cdf = cumulative_probabilities(p, rho);
    std::vector<int> out(static_cast<std::size_t>(n));
    for (auto &b : out) {
        b = draw(cdf, rng);
    }
    return out;
}

std::vector<int> sample_outcomes(const Povm &p, const HermOperator &rho, std::int64_t n, uint64_t seed) {
    Rng rng = make_rng(seed);
    return sample_outcomes(p, rho, n, rng);
}

std::vector<ShotRecord> evaluate_estimator(const DualFrame &dual, const HermOperator &o,
                                           std::span<const int> outcomes) {
    const std::vector<double> vals = outcome_values(dual, o);
    std::vector<ShotRecord> out;
    out.reserve(outcomes.size());
    for (int b : outcomes) {
        if (b < 0 || static_cast<std::size_t>(b) >= vals.size()) {
            throw ValidationError("evaluate_estimator: outcome index out of range");
        }
        out.push_back({b, vals[b]});
    }
    return out;
}

std::vector<double> record_values(std::span<const ShotRecord> records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(r.value);
    }
    return out;
}

void RunningMoments::add(double x) {
    if (n_ == 0) {
        min_ = max_ = x;
    } else {
        min_ = std::min(min_, x);
        max_ = std::max(max_, x);
    }
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments &other) {
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
}

double median_of_means(std::span<const double> values, int groups) {
    const auto n = static_cast<std::int64_t>(values.size());
    if (groups < 1 || groups > n) {
        throw ValidationError("median_of_means: need 1 <= K <= N");
    }
    const std::int64_t base = n / groups;
    const std::int64_t extra = n % groups;
    std::vector<double> means;
    means.reserve(groups);
    std::int64_t start = 0;
    for (int g = 0; g < groups; ++g) {
        const std::int64_t len = base + (g < extra ? 1 : 0);
        means.push_back(mean_of(values.subspan(start, len)));
        start += len;
    }
    std::sort(means.begin(), means.end());
    const std::size_t mid = means.size() / 2;
    return means.size() % 2 == 1 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

RunSummary summarize(std::span<const double> values, std::optional<int> groups, uint64_t seed) {
    if (values.size() < 2) {
        throw ValidationError("summarize: need at least two values");
    }
    RunningMoments m;
    for (double v : values) {
        m.add(v);
    }
    RunSummary s;
    s.n = m.count();
    s.mean = m.mean();
    s.sample_variance = m.sample_variance();
    s.min = m.min();
    s.max = m.max();
    s.seed = seed;
    if (groups) {
        if (*groups < 2 || *groups > s.n) {
            throw ValidationError("summarize: need 2 <= K <= N");
        }
        s.groups = groups;
        s.median_of_means = median_of_means(values, *groups);
    }
    return s;
}

std::vector<double> simulate_values(const Povm &p, const DualFrame &dual, const HermOperator &rho,
                                    const HermOperator &o, std::int64_t n, uint64_t seed) {
    if (dual.size() != p.size()) {
        throw DimensionError("simulate: dual does not match POVM");
    }
    const std::vector<double> vals = outcome_values(dual, o);
    const std::vector<double> cdf = cumulative_probabilities(p, rho);
    Rng rng = make_rng(seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto &v : out) {
        v = vals[draw(cdf, rng)];
    }
    return out;
}

ParallelRun simulate_parallel(const Povm &p, const DualFrame &dual, const HermOperator &rho, const HermOperator &o,
                             std::int64_t n, uint64_t seed, int workers, std::optional<int> groups) {
    if (workers < 1) {
        throw ValidationError("simulate_parallel: need at least one worker");
    }
    if (n < 2) {
        throw ValidationError("simulate_parallel: need at least two shots");
    }
    // Validate on the calling thread so errors surface as exceptions here.
    outcome_values(dual, o);
    cumulative_probabilities(p, rho);
    std::vector<std::vector<double>> parts(workers);
    std::vector<RunningMoments> moments(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t share = n / workers + (w < n % workers ? 1 : 0);
        threads.emplace_back([&, w, share] {
            parts[w] = simulate_values(p, dual, rho, o, share, derive_seed(seed, w));
            for (double v : parts[w]) {
                moments[w].add(v);
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    RunningMoments total;
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < workers; ++w) {
        total.merge(moments[w]);
        all.insert(all.end(), parts[w].begin(), parts[w].end());
    }
    RunSummary s;
    s.n = total.count();
    s.mean = total.mean();
    s.sample_variance = total.sample_variance();
    s.min = total.min();
    s.max = total.max();
    s.seed = seed;
    if (groups) {
        if (*groups < 2 || *groups > s.n) {
            throw ValidationError("summarize: need 2 <= K <= N");
        }
        s.groups = groups;
        s.median_of_means = median_of_means(all, *groups);
    }
    return {s, std::move(all)};
}

std::vector<double> covariant_values(int d, const HermOperator &rho, const HermOperator &o, std::int64_t n,
                                     uint64_t seed) {
    if (o.dim() != d) {
        throw DimensionError("covariant_run: observable dimension mismatch");
    }
    CovariantSampler sampler(d, seed);
    const double tr_o = o.trace();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto &v : out) {
        const CovariantSampler::Draw dr = sampler.draw(rho);
        const Eigen::RowVectorXcd row = dr.unitary.row(dr.outcome);
        const double expectation = (row * o.matrix() * row.adjoint())(0, 0).real();
        v = (d + 1) * expectation - tr_o;
    }
    return out;
}

RunSummary covariant_run(int d, const HermOperator &rho, const HermOperator &o, std::int64_t n, uint64_t seed,
                         std::optional<int> groups) {
    const std::vector<double> vals = covariant_values(d, rho, o, n, seed);
    return summarize(vals, groups, seed);
}

std::vector<double> realization_means(const Povm &p, const DualFrame &dual, const HermOperator &rho,
                                      const HermOperator &o, std::int64_t n, int realizations, uint64_t seed) {
    if (realizations < 1 || n < 1) {
        throw ValidationError("realization_means: need positive N and R");
    }
    std::vector<double> out;
    out.reserve(realizations);
    for (int r = 0; r < realizations; ++r) {
        out.push_back(mean_of(simulate_values(p, dual, rho, o, n, derive_seed(seed, r))));
    }
    return out;
}

std::vector<double> covariant_realization_means(int d, const HermOperator &rho, const HermOperator &o,
                                                std::int64_t n, int realizations, uint64_t seed) {
    if (realizations < 1 || n < 1) {
        throw ValidationError("realization_means: need positive N and R");
    }
    std::vector<double> out;
    out.reserve(realizations);
    for (int r = 0; r < realizations; ++r) {
        out.push_back(mean_of(covariant_values(d, rho, o, n, derive_seed(seed, r))));
    }
    return out;
}

std::vector<GrowthPoint> growth_curve(std::span<const double> values, std::span<const std::int64_t> checkpoints) {
    std::vector<GrowthPoint> out;
    RunningMoments m;
    std::size_t next = 0;
    for (std::int64_t n : checkpoints) {
        if (n < 1 || n > static_cast<std::int64_t>(values.size())) {
            throw ValidationError("growth_curve: checkpoint outside the run");
        }
        while (static_cast<std::int64_t>(next) < n) {
            m.add(values[next++]);
        }
        if (m.count() != n) {
            throw ValidationError("growth_curve: checkpoints must be increasing");
        }
        out.push_back({n, m.mean(), m.sample_variance()});
    }
    return out;
}

std::vector<std::int64_t> log_checkpoints(std::int64_t n, int per_decade) {
    if (n < 2 || per_decade < 1) {
        throw ValidationError("log_checkpoints: need N >= 2 and a positive density");
    }
    std::vector<std::int64_t> out;
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double x = 2.0; x < static_cast<double>(n); x *= step) {
        const auto k = static_cast<std::int64_t>(std::llround(x));
        if (out.empty() || k > out.back()) {
            out.push_back(k);
        }
    }
    if (out.empty() || out.back() != n) {
        out.push_back(n);
    }
    return out;
}

std::vector<HistogramBin> histogram_export(std::span<const double> values, int bins) {
    if (bins < 1) {
        throw ValidationError("histogram: need at least one bin");
    }
    if (values.empty()) {
        throw ValidationError("histogram: no values");
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    std::vector<HistogramBin> out(bins);
    for (int k = 0; k < bins; ++k) {
        out[k].low = lo + k * width;
        out[k].high = k + 1 == bins ? hi : lo + (k + 1) * width;
        out[k].count = 0;
    }
    for (double v : values) {
        auto k = static_cast<int>((v - lo) / width);
        k = std::clamp(k, 0, bins - 1);
        ++out[k].count;
    }
    const double total = static_cast<double>(values.size());
    for (auto &b : out) {
        b.density = b.count / (total * (b.high - b.low));
    }
    return out;
}

std::vector<MassPoint> estimator_pmf(const Povm &p, const DualFrame &dual, const HermOperator &rho,
                                     const HermOperator &o) {
    const std::vector<double> vals = outcome_values(dual, o);
    const std::vector<double> cdf = cumulative_probabilities(p, rho);
    std::vector<MassPoint> raw;
    double prev = 0.0;
    for (std::size_t b = 0; b < vals.size(); ++b) {
        raw.push_back({vals[b], cdf[b] - prev});
        prev = cdf[b];
    }
    std::sort(raw.begin(), raw.end(), [](const MassPoint &a, const MassPoint &b) { return a.value < b.value; });
    std::vector<MassPoint> out;
    for (const auto &m : raw) {
        if (!out.empty() && std::abs(m.value - out.back().value) <= 1e-12 * std::max(1.0, std::abs(m.value))) {
            out.back().probability += m.probability;
        } else {
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace shadowframe
