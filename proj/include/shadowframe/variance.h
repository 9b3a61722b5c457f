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

// Exact, state-averaged and bounded variances of observable estimators.
//
// Notation: p_b = <mu_b, rho>, o(b) = <O, mu~_b>, V = tr(O^2)/d - tr(O)^2/d^2 (the variance
// of O on I/d), and F~ = Pi_H0 F_{I/d} Pi_H0. Averages over states are over
// U rho U^dagger with Haar U, so they depend on rho only through its purity P.

#ifndef SHADOWFRAME_VARIANCE_H
#define SHADOWFRAME_VARIANCE_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "shadowframe/frame.h"
#include "shadowframe/operator_space.h"
#include "shadowframe/povm.h"

namespace shadowframe {

/// C_rho = sum_b p_b P(mu~_b) - P(rho).
SuperOperator mse_matrix(const Povm &p, const DualFrame &dual, const HermOperator &rho);
/// tr C_rho, the expected squared L2 error of the state estimate.
double state_error(const Povm &p, const DualFrame &dual, const HermOperator &rho);

/// sum_b p_b o(b)^2 - <O, rho>^2.
double variance_exact(const Povm &p, const DualFrame &dual, const HermOperator &rho, const HermOperator &o);
/// <O, C_rho(O)>. Agrees with variance_exact.
double variance_exact_mse(const Povm &p, const DualFrame &dual, const HermOperator &rho, const HermOperator &o);

/// tr(O^2)/d - tr(O)^2/d^2.
double maximally_mixed_variance(const HermOperator &o);

/// Canonical-estimator variance averaged over states of purity P:
/// <O, F~^-1(O)> - (dP - 1)/(d^2 - 1) V. Throws DomainError if not IC or P outside [1/d, 1].
double variance_averaged(const Povm &p, const HermOperator &o, double purity);

struct MonteCarloAverage {
    double mean;
    double standard_error;
    int samples;
};

/// Mean of variance_exact over U diag(spectrum) U^dagger for Haar U.
MonteCarloAverage variance_averaged_monte_carlo(const Povm &p, const DualFrame &dual, const HermOperator &o,
                                                std::span<const double> spectrum, int samples, Rng &rng);

struct EigenvalueBounds {
    /// V d / lambda_max(F~) <= <O, F~^-1(O)> <= V d / lambda_min(F~), eigenvalues on H0.
    double form_lower;
    double form_upper;
    /// The same bracket shifted to the averaged variance at purity P.
    double averaged_lower;
    double averaged_upper;
    double lambda_max;
    double lambda_min;
    double condition_number;
};

EigenvalueBounds variance_eig_bounds(const Povm &p, const HermOperator &o, double purity = 1.0);

/// a/m - sqrt((m-1)(m b - a^2)) / (m (m-1)), m = d^2 - 1: the largest possible smallest
/// eigenvalue of a positive operator on H0 with trace a and squared trace b.
/// Throws DomainError unless 0 < b <= a^2 <= m b.
double lambda1_star(double a, double b, int d);
/// 1/lambda1_star - (P - 1/d)/(d^2 - 1). Multiply by V d for a variance.
double worst_case_lower_bound(double a, double b, int d, double purity);

/// A = sum_b o(b)^2 mu_b, so that <A, rho> = Var + <O, rho>^2.
HermOperator a_operator(const Povm &p, const DualFrame &dual, const HermOperator &o);

struct MinMax {
    double min;
    double max;
    double trace_over_d;
};

/// Eigenvalue range of A and its state average tr(A)/d.
MinMax variance_minmax(const Povm &p, const DualFrame &dual, const HermOperator &o);
/// ||A||_op.
double shadow_norm_sq(const Povm &p, const DualFrame &dual, const HermOperator &o);

/// Closed-form canonical-estimator variance for a rank-one 3-design.
double variance_3design(const HermOperator &rho, const HermOperator &o, int d);

/// Canonical-estimator variance averaged over states of purity P and over unitarily
/// equivalent observables: V d (tr F_{I/d}^-1 - P)/(d^2 - 1).
double variance_double_averaged(const Povm &p, const HermOperator &o, double purity);

/// Averaged state error of a tight frame whose elements have average purity w:
/// (d^2 - 1)^2 / (d^2 w - d) - (P - 1/d). Throws DomainError for w outside (1/d, 1].
double tight_general_error(int d, double avg_purity, double purity);

struct VarianceReport {
    std::string dual_kind;
    double purity = 1.0;
    std::optional<double> exact;
    std::optional<double> exact_via_mse;
    std::optional<double> state_error;
    double averaged = 0.0;
    /// "closed_form" for the canonical estimator, "monte_carlo" otherwise.
    std::string averaged_method;
    std::optional<double> double_averaged;
    std::optional<EigenvalueBounds> eig;
    std::optional<double> lambda1_star;
    /// V d * worst_case_lower_bound(a, b, d, P).
    std::optional<double> worst_case_lower;
    double a_min = 0.0;
    double a_max = 0.0;
    double a_trace_over_d = 0.0;
    double shadow_norm_sq = 0.0;
    RVector a_eigenvalues;
};

/// Collects every quantity for one configuration. rho is optional; the averaged variance
/// for non-canonical duals uses `mc_samples` Haar draws from a stream seeded by `seed`.
VarianceReport make_variance_report(const Povm &p, const DualFrame &dual, const HermOperator &o,
                                    const std::optional<HermOperator> &rho, double purity, uint64_t seed,
                                    int mc_samples = 2000);

}  // namespace shadowframe

#endif
