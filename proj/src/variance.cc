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

#include "shadowframe/variance.h"

#include <cmath>
#include <vector>

#include "shadowframe/errors.h"

namespace shadowframe {

namespace {

constexpr double kPurityTol = 1e-12;

void require_match(const Povm &p, const DualFrame &dual, const char *what) {
    if (dual.size() != p.size() || dual.dim() != p.dim()) {
        throw DimensionError(std::string(what) + ": dual does not match POVM");
    }
}

void require_state(const HermOperator &rho, int d, const char *what) {
    if (rho.dim() != d) {
        throw DimensionError(std::string(what) + ": state dimension mismatch");
    }
    if (!is_density_matrix(rho)) {
        throw ValidationError(std::string(what) + ": not a density matrix");
    }
}

void require_purity(double purity, int d, const char *what) {
    if (!(purity >= 1.0 / d - kPurityTol && purity <= 1.0 + kPurityTol)) {
        throw DomainError(std::string(what) + ": purity must lie in [1/d, 1]");
    }
}

// Lower-right (traceless) block of F_{I/d}. F_{I/d} maps I to d I, so it is block diagonal.
RMatrix traceless_block(const FrameOperator &f) {
    const Eigen::Index n = f.superop().matrix().rows();
    return f.superop().matrix().bottomRightCorner(n - 1, n - 1);
}

FrameOperator require_ic_canonical(const Povm &p, const char *what) {
    FrameOperator f = canonical_frame_superop(p);
    if (!f.informationally_complete()) {
        throw DomainError(std::string(what) + ": POVM is not informationally complete");
    }
    return f;
}

}  // namespace

SuperOperator mse_matrix(const Povm &p, const DualFrame &dual, const HermOperator &rho) {
    require_match(p, dual, "mse_matrix");
    require_state(rho, p.dim(), "mse_matrix");
    const std::vector<double> prob = p.probabilities(rho);
    const int n = p.dim() * p.dim();
    RMatrix m = RMatrix::Zero(n, n);
    for (std::size_t b = 0; b < p.size(); ++b) {
        const RVector v = vectorize(dual[b]);
        m.noalias() += prob[b] * v * v.transpose();
    }
    const RVector r = vectorize(rho);
    m.noalias() -= r * r.transpose();
    return SuperOperator(p.dim(), 0.5 * (m + m.transpose()));
}

double state_error(const Povm &p, const DualFrame &dual, const HermOperator &rho) {
    return mse_matrix(p, dual, rho).trace();
}

double variance_exact(const Povm &p, const DualFrame &dual, const HermOperator &rho, const HermOperator &o) {
    require_match(p, dual, "variance_exact");
    require_state(rho, p.dim(), "variance_exact");
    if (o.dim() != p.dim()) {
        throw DimensionError("variance_exact: observable dimension mismatch");
    }
    const std::vector<double> prob = p.probabilities(rho);
    const std::vector<double> vals = dual.values(o);
    double second = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
        second += prob[b] * vals[b] * vals[b];
    }
    const double mean = hs_inner(o, rho);
    return second - mean * mean;
}

double variance_exact_mse(const Povm &p, const DualFrame &dual, const HermOperator &rho, const HermOperator &o) {
    if (o.dim() != p.dim()) {
        throw DimensionError("variance_exact_mse: observable dimension mismatch");
    }
    return superop_form(mse_matrix(p, dual, rho), o, o);
}

double maximally_mixed_variance(const HermOperator &o) {
    const double d = o.dim();
    const double tr = o.trace();
    return hs_inner(o, o) / d - tr * tr / (d * d);
}

double variance_averaged(const Povm &p, const HermOperator &o, double purity) {
    const int d = p.dim();
    if (o.dim() != d) {
        throw DimensionError("variance_averaged: observable dimension mismatch");
    }
    require_purity(purity, d, "variance_averaged");
    FrameOperator f = require_ic_canonical(p, "variance_averaged");
    const RVector v = vectorize(o).tail(d * d - 1);
    const RMatrix block = traceless_block(f);
    const double form = v.dot(block.ldlt().solve(v));
    return form - (d * purity - 1.0) / (d * d - 1.0) * maximally_mixed_variance(o);
}

MonteCarloAverage variance_averaged_monte_carlo(const Povm &p, const DualFrame &dual, const HermOperator &o,
                                                std::span<const double> spectrum, int samples, Rng &rng) {
    if (samples < 2) {
        throw ValidationError("variance_averaged_monte_carlo: need at least two samples");
    }
    double mean = 0.0;
    double m2 = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double v = variance_exact(p, dual, random_state(p.dim(), spectrum, rng), o);
        const double delta = v - mean;
        mean += delta / (k + 1);
        m2 += delta * (v - mean);
    }
    return {mean, std::sqrt(m2 / (samples - 1) / samples), samples};
}

EigenvalueBounds variance_eig_bounds(const Povm &p, const HermOperator &o, double purity) {
    const int d = p.dim();
    if (o.dim() != d) {
        throw DimensionError("variance_eig_bounds: observable dimension mismatch");
    }
    require_purity(purity, d, "variance_eig_bounds");
    FrameOperator f = require_ic_canonical(p, "variance_eig_bounds");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(traceless_block(f), Eigen::EigenvaluesOnly);
    EigenvalueBounds out{};
    out.lambda_min = es.eigenvalues().minCoeff();
    out.lambda_max = es.eigenvalues().maxCoeff();
    if (!(out.lambda_min > kPseudoInverseRelTol * out.lambda_max)) {
        throw DomainError("variance_eig_bounds: traceless frame operator is singular");
    }
    out.condition_number = out.lambda_max / out.lambda_min;
    const double var = maximally_mixed_variance(o);
    out.form_lower = var * d / out.lambda_max;
    out.form_upper = var * d / out.lambda_min;
    const double shift = (d * purity - 1.0) / (d * d - 1.0) * var;
    out.averaged_lower = out.form_lower - shift;
    out.averaged_upper = out.form_upper - shift;
    return out;
}

double lambda1_star(double a, double b, int d) {
    if (d < 2) {
        throw DimensionError("lambda1_star: d must be at least 2");
    }
    const double m = d * d - 1.0;
    const double slack = 1e-12 * std::max(1.0, a * a);
    if (!(b > 0.0) || b > a * a + slack || a * a > m * b + slack) {
        throw DomainError("lambda1_star: (a, b) violates 0 < b <= a^2 <= (d^2 - 1) b");
    }
    const double disc = std::max(0.0, (m - 1.0) * (m * b - a * a));
    return a / m - std::sqrt(disc) / (m * (m - 1.0));
}

double worst_case_lower_bound(double a, double b, int d, double purity) {
    require_purity(purity, d, "worst_case_lower_bound");
    return 1.0 / lambda1_star(a, b, d) - (purity - 1.0 / d) / (d * d - 1.0);
}

HermOperator a_operator(const Povm &p, const DualFrame &dual, const HermOperator &o) {
    require_match(p, dual, "a_operator");
    if (o.dim() != p.dim()) {
        throw DimensionError("a_operator: observable dimension mismatch");
    }
    const std::vector<double> vals = dual.values(o);
    HermOperator a = HermOperator::zero(p.dim());
    for (std::size_t b = 0; b < p.size(); ++b) {
        a += (vals[b] * vals[b]) * p[b];
    }
    return a;
}

MinMax variance_minmax(const Povm &p, const DualFrame &dual, const HermOperator &o) {
    const HermOperator a = a_operator(p, dual, o);
    const RVector ev = a.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff(), a.trace() / p.dim()};
}

double shadow_norm_sq(const Povm &p, const DualFrame &dual, const HermOperator &o) {
    return a_operator(p, dual, o).op_norm();
}

double variance_3design(const HermOperator &rho, const HermOperator &o, int d) {
    if (rho.dim() != d || o.dim() != d) {
        throw DimensionError("variance_3design: dimension mismatch");
    }
    const double tr_o = o.trace();
    const double tr_o2 = hs_inner(o, o);
    const double exp_o = hs_inner(o, rho);
    const HermOperator o2(o.matrix() * o.matrix(), 1e-9);
    const double exp_o2 = hs_inner(o2, rho);
    return -(tr_o * tr_o + 2.0 * tr_o * exp_o) / (d + 2.0) + (d + 1.0) / (d + 2.0) * (tr_o2 + 2.0 * exp_o2) -
           exp_o * exp_o;
}

double variance_double_averaged(const Povm &p, const HermOperator &o, double purity) {
    const int d = p.dim();
    if (o.dim() != d) {
        throw DimensionError("variance_double_averaged: observable dimension mismatch");
    }
    require_purity(purity, d, "variance_double_averaged");
    FrameOperator f = require_ic_canonical(p, "variance_double_averaged");
    const double tr_inv = f.inverse().trace();
    return maximally_mixed_variance(o) * d / (d * d - 1.0) * (tr_inv - purity);
}

double tight_general_error(int d, double avg_purity, double purity) {
    if (d < 2) {
        throw DimensionError("tight_general_error: d must be at least 2");
    }
    require_purity(purity, d, "tight_general_error");
    const double denom = d * d * avg_purity - d;
    if (!(avg_purity <= 1.0 + kPurityTol) || !(denom > kPurityTol * d * d)) {
        throw DomainError("tight_general_error: average element purity must lie in (1/d, 1]");
    }
    const double m = d * d - 1.0;
    return m * m / denom - (purity - 1.0 / d);
}

VarianceReport make_variance_report(const Povm &p, const DualFrame &dual, const HermOperator &o,
                                    const std::optional<HermOperator> &rho, double purity, uint64_t seed,
                                    int mc_samples) {
    const int d = p.dim();
    require_purity(purity, d, "variance report");
    VarianceReport r;
    r.dual_kind = to_string(dual.kind);
    r.purity = purity;
    if (rho) {
        r.exact = variance_exact(p, dual, *rho, o);
        r.exact_via_mse = variance_exact_mse(p, dual, *rho, o);
        r.state_error = state_error(p, dual, *rho);
    }
    const bool ic = is_informationally_complete(p);
    if (dual.kind == DualKind::canonical_estimator && ic) {
        r.averaged = variance_averaged(p, o, purity);
        r.averaged_method = "closed_form";
    } else {
        // Spectrum (x, (1-x)/(d-1), ...) with purity P.
        const double x = 1.0 / d + std::sqrt(std::max(0.0, (purity - 1.0 / d) * (d - 1.0) / d));
        std::vector<double> spectrum(d, (1.0 - x) / (d - 1.0));
        spectrum[0] = x;
        Rng rng = make_rng(seed, 1);
        r.averaged = variance_averaged_monte_carlo(p, dual, o, spectrum, mc_samples, rng).mean;
        r.averaged_method = "monte_carlo";
    }
    if (ic) {
        r.double_averaged = variance_double_averaged(p, o, purity);
        r.eig = variance_eig_bounds(p, o, purity);
        const TightnessCheck t = is_tight(p);
        try {
            r.lambda1_star = lambda1_star(t.a, t.b, d);
            r.worst_case_lower = maximally_mixed_variance(o) * d * worst_case_lower_bound(t.a, t.b, d, purity);
        } catch (const DomainError &) {
            // Moments outside the feasible region; leave the bound unset.
        }
    }
    const HermOperator a = a_operator(p, dual, o);
    r.a_eigenvalues = a.eigenvalues();
    r.a_min = r.a_eigenvalues.minCoeff();
    r.a_max = r.a_eigenvalues.maxCoeff();
    r.a_trace_over_d = a.trace() / d;
    r.shadow_norm_sq = a.op_norm();
    return r;
}

}  // namespace shadowframe
