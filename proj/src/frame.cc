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

#include "shadowframe/frame.h"

#include <algorithm>
#include <cmath>

#include "shadowframe/errors.h"

namespace shadowframe {

namespace {

// Rows are the standard-basis coordinates of the elements.
RMatrix coordinate_rows(const std::vector<HermOperator> &ops) {
    const int n = ops.front().dim() * ops.front().dim();
    RMatrix m(ops.size(), n);
    for (std::size_t b = 0; b < ops.size(); ++b) {
        m.row(b) = vectorize(ops[b]).transpose();
    }
    return m;
}

void require_density(const HermOperator &rho, int d, const char *what) {
    if (rho.dim() != d) {
        throw DimensionError(std::string(what) + ": state dimension mismatch");
    }
    if (!is_density_matrix(rho)) {
        throw ValidationError(std::string(what) + ": prior is not a density matrix");
    }
}

std::vector<double> prior_weights(const Povm &p, const HermOperator &prior, std::optional<double> floor) {
    require_density(prior, p.dim(), "rescaled frame");
    std::vector<double> alpha = p.probabilities(prior);
    for (double &a : alpha) {
        if (floor) {
            a = std::max(a, *floor);
        }
        if (a < kProbabilityFloor) {
            throw DomainError("rescaled frame: outcome has zero probability under the prior");
        }
    }
    return alpha;
}

std::vector<double> canonical_weights(const Povm &p) {
    std::vector<double> alpha = p.traces();
    for (double &a : alpha) {
        if (a <= kProbabilityFloor) {
            throw DomainError("canonical frame: element with zero trace");
        }
        a /= p.dim();
    }
    return alpha;
}

DualFrame dual_from_frame(const Povm &p, const FrameOperator &f, DualKind kind, DualMode mode) {
    if (!f.informationally_complete() && mode == DualMode::strict) {
        throw DomainError("dual frame: POVM is not informationally complete (frame rank " + std::to_string(f.rank()) +
                          " < " + std::to_string(p.dim() * p.dim()) + ")");
    }
    DualFrame dual{kind, {}, f.alpha(), f.prior(), f.rank(), !f.informationally_complete()};
    dual.elements.reserve(p.size());
    for (std::size_t b = 0; b < p.size(); ++b) {
        dual.elements.push_back(f.apply_inverse(p[b]) / f.alpha()[b]);
    }
    return dual;
}

// Orthonormal basis of the null space of m (as columns), from a full SVD.
RMatrix null_space(const RMatrix &m, double rel_tol = 1e-10) {
    Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullV);
    const RVector &s = svd.singularValues();
    const double scale = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > rel_tol * scale) {
        ++rank;
    }
    return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace

std::string to_string(FrameKind kind) {
    switch (kind) {
        case FrameKind::plain:
            return "plain";
        case FrameKind::rescaled:
            return "rescaled";
        case FrameKind::canonical:
            return "canonical";
        case FrameKind::alpha:
            return "alpha";
    }
    return "unknown";
}

std::string to_string(DualKind kind) {
    switch (kind) {
        case DualKind::canonical_dual:
            return "canonical_dual";
        case DualKind::min_variance:
            return "min_variance";
        case DualKind::canonical_estimator:
            return "canonical_estimator";
        case DualKind::alpha_rescaled:
            return "alpha_rescaled";
        case DualKind::custom:
            return "custom";
        case DualKind::oracle:
            return "oracle";
    }
    return "unknown";
}

FrameOperator::FrameOperator(const Povm &p, FrameKind kind, std::vector<double> alpha,
                             std::optional<HermOperator> prior)
    : kind_(kind),
      alpha_(std::move(alpha)),
      prior_(std::move(prior)),
      superop_(SuperOperator::zero(p.dim())),
      inverse_(SuperOperator::zero(p.dim())),
      rank_(0) {
    if (alpha_.size() != p.size()) {
        throw DimensionError("frame operator: need one weight per outcome");
    }
    RVector inv_alpha(alpha_.size());
    for (std::size_t b = 0; b < alpha_.size(); ++b) {
        if (!(alpha_[b] > 0.0) || !std::isfinite(alpha_[b])) {
            throw DomainError("frame operator: weights must be positive");
        }
        inv_alpha(b) = 1.0 / alpha_[b];
    }
    RMatrix rows = coordinate_rows(p.elements());
    RMatrix m = rows.transpose() * inv_alpha.asDiagonal() * rows;
    superop_ = SuperOperator(p.dim(), 0.5 * (m + m.transpose()));
    spectrum_ = superop_eig(superop_);
    PseudoInverse pinv = superop_pseudo_inverse(superop_);
    inverse_ = std::move(pinv.inverse);
    rank_ = pinv.rank;
}

SuperOperator FrameOperator::traceless_part() const {
    SuperOperator pi = traceless_projector(dim());
    return pi * superop_ * pi;
}

FrameOperator frame_superop(const Povm &p) {
    return FrameOperator(p, FrameKind::plain, std::vector<double>(p.size(), 1.0));
}

FrameOperator rescaled_frame_superop(const Povm &p, const HermOperator &prior, std::optional<double> floor) {
    return FrameOperator(p, FrameKind::rescaled, prior_weights(p, prior, floor), prior);
}

FrameOperator canonical_frame_superop(const Povm &p) {
    return FrameOperator(p, FrameKind::canonical, canonical_weights(p));
}

FrameOperator alpha_rescaled_frame_superop(const Povm &p, std::vector<double> alpha) {
    return FrameOperator(p, FrameKind::alpha, std::move(alpha));
}

bool is_informationally_complete(const Povm &p) { return frame_superop(p).informationally_complete(); }

TightnessCheck is_tight(const Povm &p) {
    FrameOperator f = canonical_frame_superop(p);
    const RMatrix ft = f.traceless_part().matrix();
    const double a = ft.trace();
    const double b = (ft * ft).trace();
    const int d = p.dim();
    const bool tight = f.informationally_complete() && std::abs((d * d - 1) * b - a * a) <= 1e-9 * a * a;
    return {tight, a, b};
}

std::vector<double> DualFrame::values(const HermOperator &o) const {
    std::vector<double> out;
    out.reserve(elements.size());
    for (const auto &e : elements) {
        out.push_back(hs_inner(o, e));
    }
    return out;
}

DualFrame canonical_dual(const Povm &p, DualMode mode) {
    return dual_from_frame(p, frame_superop(p), DualKind::canonical_dual, mode);
}

DualFrame min_variance_dual(const Povm &p, const HermOperator &prior, DualMode mode, std::optional<double> floor) {
    return dual_from_frame(p, rescaled_frame_superop(p, prior, floor), DualKind::min_variance, mode);
}

DualFrame canonical_estimator(const Povm &p, DualMode mode) {
    return dual_from_frame(p, canonical_frame_superop(p), DualKind::canonical_estimator, mode);
}

DualFrame alpha_rescaled_dual(const Povm &p, std::vector<double> alpha, DualMode mode) {
    return dual_from_frame(p, alpha_rescaled_frame_superop(p, std::move(alpha)), DualKind::alpha_rescaled, mode);
}

DualFrame custom_dual(const Povm &p, std::vector<HermOperator> elements) {
    if (elements.size() != p.size()) {
        throw DimensionError("custom dual: need one element per outcome");
    }
    for (const auto &e : elements) {
        if (e.dim() != p.dim()) {
            throw DimensionError("custom dual: element dimension mismatch");
        }
    }
    return DualFrame{DualKind::custom, std::move(elements), {}, {}, frame_superop(p).rank(), false};
}

double reconstruction_defect(const Povm &p, const DualFrame &dual) {
    if (dual.size() != p.size() || dual.dim() != p.dim()) {
        throw DimensionError("reconstruction_defect: dual does not match POVM");
    }
    RMatrix r = coordinate_rows(dual.elements).transpose() * coordinate_rows(p.elements());
    r -= RMatrix::Identity(r.rows(), r.cols());
    return r.cwiseAbs().maxCoeff();
}

EstimatorBound estimator_bound(const Povm &p, const DualFrame &dual, const HermOperator &o) {
    if (dual.size() != p.size() || dual.dim() != p.dim() || o.dim() != p.dim()) {
        throw DimensionError("estimator_bound: dimension mismatch");
    }
    FrameOperator plain = frame_superop(p);
    if (!plain.informationally_complete()) {
        throw DomainError("estimator_bound: POVM is not informationally complete");
    }
    const double o_norm = hs_norm(o);
    EstimatorBound out{};
    out.plain_bound = o_norm / plain.spectrum().eigenvalues.minCoeff();
    if (dual.alpha.empty()) {
        double worst = 0.0;
        for (const auto &e : dual.elements) {
            worst = std::max(worst, hs_norm(e));
        }
        out.bound = o_norm * worst;
    } else {
        FrameOperator f = alpha_rescaled_frame_superop(p, dual.alpha);
        double scale = 1.0;
        for (std::size_t b = 0; b < p.size(); ++b) {
            scale = std::max(scale, hs_norm(p[b]) / dual.alpha[b]);
        }
        out.bound = o_norm * scale / f.spectrum().eigenvalues.minCoeff();
    }
    for (double v : dual.values(o)) {
        out.max_abs_value = std::max(out.max_abs_value, std::abs(v));
    }
    out.holds = out.max_abs_value <= out.bound * (1.0 + 1e-12);
    return out;
}

DualFrame brute_force_min_variance_oracle(const Povm &p, const HermOperator &prior,
                                          const std::optional<HermOperator> &o) {
    require_density(prior, p.dim(), "oracle");
    const int n = p.dim() * p.dim();
    const int l = static_cast<int>(p.size());
    const RMatrix mu = coordinate_rows(p.elements());
    const std::vector<double> prob = p.probabilities(prior);

    // Unknowns x[b*n + j] = <sigma_j, mu~_b>. Constraint (i, j): sum_b mu[b, i] x[b*n + j] = delta_ij.
    RMatrix a = RMatrix::Zero(n * n, l * n);
    RVector rhs = RVector::Zero(n * n);
    for (int i = 0; i < n; ++i) {
        rhs(i * n + i) = 1.0;
        for (int j = 0; j < n; ++j) {
            for (int b = 0; b < l; ++b) {
                a(i * n + j, b * n + j) = mu(b, i);
            }
        }
    }
    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(a);
    const RVector x0 = cod.solve(rhs);
    if ((a * x0 - rhs).cwiseAbs().maxCoeff() > 1e-8) {
        throw DomainError("oracle: unbiasedness constraints are infeasible (POVM not informationally complete)");
    }
    const RMatrix null = null_space(a);

    RMatrix cost;
    if (o) {
        if (o->dim() != p.dim()) {
            throw DimensionError("oracle: observable dimension mismatch");
        }
        const RVector ov = vectorize(*o);
        cost = RMatrix::Zero(l, l * n);
        for (int b = 0; b < l; ++b) {
            cost.block(b, b * n, 1, n) = std::sqrt(std::max(prob[b], 0.0)) * ov.transpose();
        }
    } else {
        cost = RMatrix::Zero(l * n, l * n);
        for (int b = 0; b < l; ++b) {
            cost.block(b * n, b * n, n, n).diagonal().setConstant(std::sqrt(std::max(prob[b], 0.0)));
        }
    }
    RVector x = x0;
    if (null.cols() > 0) {
        const RMatrix lhs = cost * null;
        const RVector z = Eigen::CompleteOrthogonalDecomposition<RMatrix>(lhs).solve(RVector(-(cost * x0)));
        x += null * z;
    }

    DualFrame dual{DualKind::oracle, {}, {}, prior, n, false};
    dual.elements.reserve(l);
    for (int b = 0; b < l; ++b) {
        dual.elements.push_back(devectorize(RVector(x.segment(b * n, n))));
    }
    return dual;
}

double dual_cost(const Povm &p, const DualFrame &dual, const HermOperator &rho) {
    if (dual.size() != p.size()) {
        throw DimensionError("dual_cost: dual does not match POVM");
    }
    const std::vector<double> prob = p.probabilities(rho);
    double total = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
        total += prob[b] * hs_inner(dual[b], dual[b]);
    }
    return total;
}

DualFrame random_valid_dual(const Povm &p, const DualFrame &base, double scale, Rng &rng) {
    if (base.size() != p.size() || base.dim() != p.dim()) {
        throw DimensionError("random_valid_dual: dual does not match POVM");
    }
    const RMatrix mu = coordinate_rows(p.elements());
    const RMatrix kernel = null_space(mu.transpose());
    DualFrame out = base;
    out.kind = DualKind::custom;
    out.alpha.clear();
    out.prior.reset();
    if (kernel.cols() == 0) {
        return out;
    }
    std::normal_distribution<double> normal(0.0, scale);
    RMatrix g(kernel.cols(), mu.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            g(i, j) = normal(rng);
        }
    }
    const RMatrix delta = kernel * g;
    for (std::size_t b = 0; b < p.size(); ++b) {
        out.elements[b] += devectorize(RVector(delta.row(b).transpose()));
    }
    return out;
}

}  // namespace shadowframe
