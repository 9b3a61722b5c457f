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

// Frame superoperators and dual frames (unbiased estimators).
//
// Every frame operator here has the form F_alpha = sum_b P(mu_b) / alpha_b:
//
//   plain       alpha_b = 1
//   rescaled    alpha_b = <mu_b, rho>        (rho is the prior)
//   canonical   alpha_b = tr(mu_b) / d
//   alpha       arbitrary positive weights
//
// and the matching dual is mu~_b = F_alpha^{-1}(mu_b) / alpha_b.

#ifndef SHADOWFRAME_FRAME_H
#define SHADOWFRAME_FRAME_H

#include <optional>
#include <string>
#include <vector>

#include "shadowframe/operator_space.h"
#include "shadowframe/povm.h"

namespace shadowframe {

/// Outcome probabilities below this are rejected when building F_rho.
inline constexpr double kProbabilityFloor = 1e-12;

enum class FrameKind { plain, rescaled, canonical, alpha };

std::string to_string(FrameKind kind);

class FrameOperator {
   public:
    FrameOperator(const Povm &p, FrameKind kind, std::vector<double> alpha, std::optional<HermOperator> prior = {});

    FrameKind kind() const { return kind_; }
    int dim() const { return superop_.dim(); }
    const SuperOperator &superop() const { return superop_; }
    /// Moore-Penrose inverse (the true inverse when IC).
    const SuperOperator &inverse() const { return inverse_; }
    int rank() const { return rank_; }
    bool informationally_complete() const { return rank_ == dim() * dim(); }
    const SpectralDecomposition &spectrum() const { return spectrum_; }
    const std::vector<double> &alpha() const { return alpha_; }
    const std::optional<HermOperator> &prior() const { return prior_; }

    /// Pi_H0 F Pi_H0.
    SuperOperator traceless_part() const;
    HermOperator apply(const HermOperator &x) const { return superop_apply(superop_, x); }
    HermOperator apply_inverse(const HermOperator &x) const { return superop_apply(inverse_, x); }

   private:
    FrameKind kind_;
    std::vector<double> alpha_;
    std::optional<HermOperator> prior_;
    SuperOperator superop_;
    SpectralDecomposition spectrum_;
    SuperOperator inverse_;
    int rank_;
};

FrameOperator frame_superop(const Povm &p);
/// F_rho. Probabilities below kProbabilityFloor throw DomainError unless a floor is given,
/// in which case they are clamped to max(p_b, floor).
FrameOperator rescaled_frame_superop(const Povm &p, const HermOperator &prior, std::optional<double> floor = {});
/// F_{I/d} = d sum_b P(mu_b) / tr(mu_b).
FrameOperator canonical_frame_superop(const Povm &p);
FrameOperator alpha_rescaled_frame_superop(const Povm &p, std::vector<double> alpha);

bool is_informationally_complete(const Povm &p);

struct TightnessCheck {
    bool tight;
    /// tr of the traceless part of F_{I/d}.
    double a;
    /// tr of its square.
    double b;
};

/// Tight iff IC and |(d^2-1) b - a^2| <= 1e-9 a^2.
TightnessCheck is_tight(const Povm &p);

enum class DualKind { canonical_dual, min_variance, canonical_estimator, alpha_rescaled, custom, oracle };
/// strict: non-IC input throws DomainError. pseudo: the pseudo-inverse is used and the
/// dual is flagged as support-restricted (it is not unbiased off the frame span).
enum class DualMode { strict, pseudo };

std::string to_string(DualKind kind);

struct DualFrame {
    DualKind kind;
    std::vector<HermOperator> elements;
    /// Weights of the generating frame F_alpha; empty for custom and oracle duals.
    std::vector<double> alpha;
    std::optional<HermOperator> prior;
    int frame_rank = 0;
    bool support_restricted = false;

    int dim() const { return elements.front().dim(); }
    std::size_t size() const { return elements.size(); }
    const HermOperator &operator[](std::size_t b) const { return elements[b]; }
    /// o(b) = <O, mu~_b> for every outcome.
    std::vector<double> values(const HermOperator &o) const;
};

DualFrame canonical_dual(const Povm &p, DualMode mode = DualMode::strict);
DualFrame min_variance_dual(const Povm &p, const HermOperator &prior, DualMode mode = DualMode::strict,
                            std::optional<double> floor = {});
DualFrame canonical_estimator(const Povm &p, DualMode mode = DualMode::strict);
DualFrame alpha_rescaled_dual(const Povm &p, std::vector<double> alpha, DualMode mode = DualMode::strict);
/// Wraps caller-supplied elements; checks shape only. Use reconstruction_defect to verify.
DualFrame custom_dual(const Povm &p, std::vector<HermOperator> elements);

/// max-entry norm of sum_b |mu~_b>><<mu_b| - Id in the standard basis.
double reconstruction_defect(const Povm &p, const DualFrame &dual);

struct EstimatorBound {
    double bound;
    double max_abs_value;
    /// ||O||_2 ||F^-1||_op with the plain frame operator.
    double plain_bound;
    bool holds;
};

/// Bound on max_b |<O, mu~_b>|. For duals generated by F_alpha this is
/// ||O||_2 ||F_alpha^-1||_op max(1, max_b ||mu_b||_2 / alpha_b); for custom duals it is
/// ||O||_2 max_b ||mu~_b||_2. Throws DomainError for non-IC input.
EstimatorBound estimator_bound(const Povm &p, const DualFrame &dual, const HermOperator &o);

/// Minimum-variance dual computed by constrained least squares over the full affine set
/// of duals, without using any frame-operator inverse. With an observable, the cost is
/// sum_b p_b <O, mu~_b>^2 and only the values <O, mu~_b> are determined.
DualFrame brute_force_min_variance_oracle(const Povm &p, const HermOperator &prior,
                                          const std::optional<HermOperator> &o = {});

/// sum_b <mu_b, rho> tr(mu~_b^2): the state-estimation second moment minimized by the
/// min-variance dual.
double dual_cost(const Povm &p, const DualFrame &dual, const HermOperator &rho);

/// base + Delta with sum_b <mu_b, X> Delta_b = 0 for all X and Gaussian coefficients of
/// size scale. Unbiased by construction.
DualFrame random_valid_dual(const Povm &p, const DualFrame &base, double scale, Rng &rng);

}  // namespace shadowframe

#endif
