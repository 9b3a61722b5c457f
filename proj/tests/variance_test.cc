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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "shadowframe/errors.h"
#include "test_util.h"

using namespace shadowframe;
using namespace shadowframe::testing;

namespace {

HermOperator ket_state(int d, int k) { return HermOperator::basis_projector(d, k); }

HermOperator minus_state() {
    CVector v(2);
    v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return HermOperator::projector(v);
}

}  // namespace

TEST(variance_exact, qubit_fixture) {
    Povm p = toy_povm(ToyPovm::ic);
    DualFrame dual = canonical_estimator(p);
    const HermOperator p0 = ket_state(2, 0), p1 = ket_state(2, 1);
    EXPECT_NEAR(variance_exact(p, dual, p0, pauli_z()), 8.0, 1e-12);
    EXPECT_NEAR(variance_exact(p, dual, p1, pauli_x()), 5.0, 1e-12);
    EXPECT_NEAR(variance_exact(p, dual, p1, pauli_y()), 5.0, 1e-12);
    EXPECT_NEAR(variance_exact(p, dual, p1, pauli_z()), 0.0, 1e-12);
    EXPECT_NEAR(variance_exact(p, dual, minus_state(), pauli_x()), 0.0, 1e-12);

    HermOperator a = a_operator(p, dual, pauli_x());
    CMatrix expect(2, 2);
    expect << 5, 4, 4, 5;
    ASSERT_LE(max_abs(CMatrix(a.matrix() - expect)), 1e-12);
    MinMax mm = variance_minmax(p, dual, pauli_x());
    EXPECT_NEAR(mm.min, 1.0, 1e-12);
    EXPECT_NEAR(mm.max, 9.0, 1e-12);
    EXPECT_NEAR(shadow_norm_sq(p, dual, pauli_x()), 9.0, 1e-12);
}

TEST(variance_exact, two_paths_and_reference) {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 3;
        Povm p = random_ic_povm(d, d * d + trial % 4, rng);
        HermOperator rho = random_mixed_state(d, rng);
        HermOperator o = random_hermitian(d, rng);
        for (const DualFrame &dual : {canonical_estimator(p), canonical_dual(p), min_variance_dual(p, rho)}) {
            const double v = variance_exact(p, dual, rho, o);
            const double scale = std::max(1.0, std::abs(v));
            ASSERT_NEAR(v, variance_exact_mse(p, dual, rho, o), 1e-10 * scale);
            ASSERT_NEAR(v, reference_variance(p, matrices(dual), rho.matrix(), o.matrix()), 1e-9 * scale);
            ASSERT_GE(v, -1e-10);
            // <A, rho> - <O, rho>^2.
            const double mean = hs_inner(o, rho);
            ASSERT_NEAR(hs_inner(a_operator(p, dual, o), rho) - mean * mean, v, 1e-10 * scale);
        }
    }
}

TEST(variance_exact, shift_invariant_for_trace_preserving_duals) {
    Rng rng(2);
    Povm p = random_ic_povm(3, 11, rng);
    HermOperator rho = random_mixed_state(3, rng);
    HermOperator o = random_hermitian(3, rng);
    HermOperator shifted = o + HermOperator::identity(3) * 2.5;
    for (const DualFrame &dual : {canonical_estimator(p), min_variance_dual(p, rho)}) {
        ASSERT_NEAR(variance_exact(p, dual, rho, o), variance_exact(p, dual, rho, shifted), 1e-9);
        ASSERT_NEAR(variance_exact(p, dual, rho, o * 3.0), 9.0 * variance_exact(p, dual, rho, o), 1e-9);
    }
}

TEST(variance_exact, pure_state_bounded_by_a_operator) {
    Rng rng(3);
    Povm p = random_ic_povm(2, 6, rng);
    DualFrame dual = canonical_estimator(p);
    HermOperator o = random_traceless_observable(2, rng);
    MinMax mm = variance_minmax(p, dual, o);
    for (int k = 0; k < 200; ++k) {
        HermOperator psi = random_pure_state(2, rng);
        const double second = variance_exact(p, dual, psi, o) + std::pow(hs_inner(o, psi), 2);
        ASSERT_LE(second, mm.max + 1e-10);
        ASSERT_GE(second, mm.min - 1e-10);
    }
}

TEST(state_error, tight_value) {
    Rng rng(4);
    for (int d : {2, 3, 5}) {
        Povm p = mub_povm(d);
        DualFrame dual = canonical_estimator(p);
        for (int k = 0; k < 5; ++k) {
            HermOperator rho = random_mixed_state(d, rng);
            ASSERT_NEAR(state_error(p, dual, rho), d * d + d - 1 - purity(rho), 1e-9);
            ASSERT_NEAR(mse_matrix(p, dual, rho).trace(), state_error(p, dual, rho), 1e-9);
        }
    }
}

TEST(variance_averaged, matches_exact_haar_average) {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + trial % 3;
        Povm p = random_ic_povm(d, d * d + trial % 5, rng);
        HermOperator o = random_hermitian(d, rng);
        std::vector<CMatrix> ref = reference_weighted_dual(p, [&] {
            std::vector<double> w = p.traces();
            for (double &x : w) x /= d;
            return w;
        }());
        for (double purity : {1.0 / d, 0.5 + 0.5 / d, 1.0}) {
            ASSERT_NEAR(variance_averaged(p, o, purity), haar_averaged_variance(p, ref, o.matrix(), purity), 1e-8)
                << "d=" << d << " P=" << purity;
        }
    }
}

TEST(variance_averaged, agrees_with_monte_carlo) {
    Rng rng(6);
    Povm p = random_ic_povm(2, 5, rng);
    HermOperator o = random_traceless_observable(2, rng);
    DualFrame dual = canonical_estimator(p);
    std::vector<double> spec = spectrum_with_purity(2, 0.8);
    MonteCarloAverage mc = variance_averaged_monte_carlo(p, dual, o, spec, 4000, rng);
    ASSERT_NEAR(mc.mean, variance_averaged(p, o, 0.8), 5.0 * mc.standard_error);
}

TEST(variance_averaged, canonical_estimator_is_optimal) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 2;
        Povm p = random_ic_povm(d, d * d + 2, rng);
        HermOperator o = random_traceless_observable(d, rng);
        DualFrame best = canonical_estimator(p);
        const double optimal = haar_averaged_variance(p, matrices(best), o.matrix(), 1.0);
        ASSERT_NEAR(optimal, variance_averaged(p, o, 1.0), 1e-9);
        for (int k = 0; k < 10; ++k) {
            DualFrame other = random_valid_dual(p, best, 0.5, rng);
            ASSERT_GE(haar_averaged_variance(p, matrices(other), o.matrix(), 1.0), optimal - 1e-9);
        }
    }
}

TEST(variance_averaged, tight_closed_form) {
    Rng rng(8);
    for (int d : {2, 3, 5, 7}) {
        Povm p = mub_povm(d);
        for (int k = 0; k < 5; ++k) {
            HermOperator o = random_hermitian(d, rng);
            const double vd = maximally_mixed_variance(o) * d;
            for (double purity : {1.0 / d, 0.6, 1.0}) {
                const double expect = vd * (d * d + d - 1 - purity) / (d * d - 1.0);
                ASSERT_NEAR(variance_averaged(p, o, purity), expect, 1e-9);
                ASSERT_NEAR(variance_double_averaged(p, o, purity), expect, 1e-9);
            }
        }
        // Projector observables: 1 - (1 + P)/(d(d+1)).
        for (double purity : {1.0 / d, 1.0}) {
            ASSERT_NEAR(variance_averaged(p, ket_state(d, 0), purity), 1.0 - (1.0 + purity) / (d * (d + 1.0)), 1e-9);
        }
    }
}

TEST(variance_averaged, normalized_traceless_mub3_value) {
    Rng rng(9);
    HermOperator o = random_traceless_observable(3, rng);
    // V d = 1 for traceless, unit-norm O; (d^2 + d - 1 - P)/(d^2 - 1) = 10/8.
    ASSERT_NEAR(variance_averaged(mub_povm(3), o, 1.0), 1.25, 1e-9);
}

TEST(variance_averaged, domain_errors) {
    ASSERT_THROW(variance_averaged(toy_povm(ToyPovm::non_ic), pauli_z(), 1.0), DomainError);
    ASSERT_THROW(variance_averaged(mub_povm(2), pauli_z(), 0.3), DomainError);
    ASSERT_THROW(variance_averaged(mub_povm(2), pauli_z(), 1.2), DomainError);
    ASSERT_THROW(variance_averaged(mub_povm(2), HermOperator::identity(3), 1.0), DimensionError);
}

TEST(variance_double_averaged, equals_basis_average) {
    // Averaging the quadratic form over an orthonormal traceless basis equals the unitary-orbit average.
    Rng rng(10);
    for (int d : {2, 3}) {
        Povm p = random_ic_povm(d, d * d + 3, rng);
        HermBasis basis = standard_herm_basis(d);
        for (double purity : {1.0 / d, 1.0}) {
            double mean = 0.0;
            for (std::size_t j = 1; j < basis.size(); ++j) {
                mean += variance_averaged(p, basis[j], purity);
            }
            mean /= d * d - 1.0;
            // V d = 1 for each basis element.
            HermOperator o = random_traceless_observable(d, rng);
            ASSERT_NEAR(variance_double_averaged(p, o, purity), mean, 1e-9);
        }
    }
}

TEST(eig_bounds, qubit_fixture) {
    EigenvalueBounds e = variance_eig_bounds(toy_povm(ToyPovm::ic), pauli_z(), 1.0);
    EXPECT_NEAR(e.averaged_lower, 8.0 / 3, 1e-12);
    EXPECT_NEAR(e.averaged_upper, 17.0 / 3, 1e-12);
    EXPECT_NEAR(e.lambda_max, 2.0 / 3, 1e-12);
    EXPECT_NEAR(e.lambda_min, 1.0 / 3, 1e-12);
    EXPECT_NEAR(e.condition_number, 2.0, 1e-12);
}

TEST(eig_bounds, bracket_contains_averaged) {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + trial % 3;
        Povm p = random_ic_povm(d, d * d + trial % 3, rng);
        HermOperator o = random_hermitian(d, rng);
        const double purity = 1.0 / d + (1.0 - 1.0 / d) * (trial % 4) / 3.0;
        EigenvalueBounds e = variance_eig_bounds(p, o, purity);
        const double v = variance_averaged(p, o, purity);
        ASSERT_LE(e.averaged_lower, v + 1e-9);
        ASSERT_GE(e.averaged_upper, v - 1e-9);
    }
}

TEST(lambda1_star, fixture_and_domain) {
    EXPECT_NEAR(lambda1_star(10.0 / 3, 14.0 / 3, 2), (10.0 - std::sqrt(13.0)) / 9.0, 1e-12);
    EXPECT_NEAR(2.0 * worst_case_lower_bound(10.0 / 3, 14.0 / 3, 2, 1.0), 2.0 * 9.0 / (10.0 - std::sqrt(13.0)) - 1.0 / 3,
                1e-12);
    // Equal eigenvalues: lambda1* is the common value.
    EXPECT_NEAR(lambda1_star(3.0, 3.0, 2), 1.0, 1e-12);
    EXPECT_THROW(lambda1_star(1.0, 2.0, 2), DomainError);
    EXPECT_THROW(lambda1_star(3.0, 0.5, 2), DomainError);
}

TEST(lambda1_star, dominates_smallest_eigenvalue) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + trial % 2;
        Povm p = random_ic_povm(d, d * d + trial % 4, rng);
        TightnessCheck t = is_tight(p);
        const double l1 = lambda1_star(t.a, t.b, d);
        EigenvalueBounds e = variance_eig_bounds(p, random_hermitian(d, rng), 1.0);
        ASSERT_LE(e.lambda_min, l1 + 1e-12);
        ASSERT_GE(e.lambda_max, l1 - 1e-12);
    }
}

TEST(lambda1_star, worst_case_bound_is_attained_below_max) {
    Rng rng(13);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 2 + trial % 2;
        Povm p = random_ic_povm(d, d * d + 1, rng);
        TightnessCheck t = is_tight(p);
        for (double purity : {1.0 / d, 1.0}) {
            const double bound = worst_case_lower_bound(t.a, t.b, d, purity);
            double worst = 0.0;
            for (int k = 0; k < 200; ++k) {
                worst = std::max(worst, variance_averaged(p, random_traceless_observable(d, rng), purity));
            }
            ASSERT_LE(bound, worst + 1e-9);
        }
    }
}

TEST(variance_3design, matches_qubit_mub) {
    Rng rng(14);
    Povm p = mub_povm(2);
    DualFrame dual = canonical_estimator(p);
    for (int k = 0; k < 20; ++k) {
        HermOperator rho = random_mixed_state(2, rng);
        HermOperator o = random_hermitian(2, rng);
        ASSERT_NEAR(variance_3design(rho, o, 2), variance_exact(p, dual, rho, o), 1e-9);
    }
    ASSERT_NEAR(variance_3design(ket_state(3, 0), HermOperator::identity(3), 3), 0.0, 1e-12);
}

TEST(variance_3design, differs_on_qutrit_mub) {
    Rng rng(15);
    Povm p = mub_povm(3);
    DualFrame dual = canonical_estimator(p);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        HermOperator rho = random_pure_state(3, rng);
        HermOperator o = random_hermitian(3, rng);
        worst = std::max(worst, std::abs(variance_3design(rho, o, 3) - variance_exact(p, dual, rho, o)));
    }
    ASSERT_GT(worst, 1e-3);
}

TEST(tight_general_error, values) {
    for (int d : {2, 3, 5}) {
        for (double purity : {1.0 / d, 1.0}) {
            ASSERT_NEAR(tight_general_error(d, 1.0, purity), d * d + d - 1 - purity, 1e-12);
        }
    }
    ASSERT_NEAR(tight_general_error(2, 0.75, 1.0), 8.5, 1e-12);
    ASSERT_THROW(tight_general_error(2, 0.5, 1.0), DomainError);
    ASSERT_THROW(tight_general_error(2, 1.5, 1.0), DomainError);
}

TEST(tight_general_error, matches_depolarized_mub) {
    // Elements ((1 - s) P_b + s I/d)/(d + 1) form a tight frame with average purity below one.
    for (int d : {2, 3}) {
        Povm mub = mub_povm(d);
        for (double s : {0.2, 0.5}) {
            std::vector<HermOperator> elems;
            for (const auto &e : mub.elements()) {
                elems.push_back(e * (1.0 - s) + HermOperator::identity(d) * (s / (d * (d + 1.0))));
            }
            Povm p(elems);
            ASSERT_TRUE(validate(p).passed());
            double avg_purity = 0.0;
            for (const auto &e : elems) avg_purity += hs_inner(e, e) / e.trace();
            avg_purity /= d;
            ASSERT_NEAR(avg_purity, canonical_frame_superop(p).superop().trace() / (d * d), 1e-12);
            DualFrame dual = canonical_estimator(p);
            const double purity = 1.0;
            // Haar average of the L2 error at purity P: linear part at I/d, then subtract P.
            const double avg = state_error(p, dual, HermOperator::identity(d) / d) + 1.0 / d - purity;
            ASSERT_NEAR(tight_general_error(d, avg_purity, purity), avg, 1e-9);
        }
    }
}

TEST(variance_report, canonical_uses_closed_form) {
    Povm p = toy_povm(ToyPovm::ic);
    VarianceReport r = make_variance_report(p, canonical_estimator(p), pauli_z(), ket_state(2, 0), 1.0, 1);
    EXPECT_EQ(r.averaged_method, "closed_form");
    EXPECT_NEAR(*r.exact, 8.0, 1e-12);
    EXPECT_NEAR(*r.exact_via_mse, 8.0, 1e-12);
    EXPECT_NEAR(r.averaged, variance_averaged(p, pauli_z(), 1.0), 1e-12);
    ASSERT_TRUE(r.eig.has_value());
    ASSERT_TRUE(r.lambda1_star.has_value());
    EXPECT_NEAR(*r.lambda1_star, 1.0 / 3, 1e-12);
    EXPECT_NEAR(*r.worst_case_lower, 17.0 / 3, 1e-9);
}

TEST(variance_report, other_duals_use_monte_carlo) {
    Rng rng(16);
    Povm p = random_ic_povm(2, 6, rng);
    HermOperator rho = random_mixed_state(2, rng);
    HermOperator o = random_traceless_observable(2, rng);
    DualFrame dual = min_variance_dual(p, rho);
    VarianceReport r = make_variance_report(p, dual, o, rho, 1.0, 3, 4000);
    EXPECT_EQ(r.averaged_method, "monte_carlo");
    const double expect = haar_averaged_variance(p, matrices(dual), o.matrix(), 1.0);
    EXPECT_NEAR(r.averaged, expect, 0.05 * expect);
    VarianceReport again = make_variance_report(p, dual, o, rho, 1.0, 3, 4000);
    EXPECT_EQ(r.averaged, again.averaged);
}
