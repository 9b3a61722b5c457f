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

#include "shadowframe/povm.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "shadowframe/errors.h"

namespace shadowframe {

namespace {

CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

const std::vector<WeightedState> &require_rank1(const Povm &p, const char *what) {
    if (!p.rank1_form()) {
        throw ValidationError(std::string(what) + ": POVM has no rank-one form");
    }
    return *p.rank1_form();
}

DesignCheck design_residual(const Povm &p, int t) {
    const auto &rank1 = require_rank1(p, t == 2 ? "is_2design" : "is_3design");
    const int d = p.dim();
    const int n = t == 2 ? d * d : d * d * d;
    CMatrix moment = CMatrix::Zero(n, n);
    for (const auto &ws : rank1) {
        CVector v = kron(ws.state, ws.state);
        if (t == 3) {
            v = kron(v, ws.state);
        }
        moment.noalias() += ws.weight * (v * v.adjoint());
    }
    const double norm = d / binomial(d + t - 1, t);
    moment -= norm * sym_projector(d, t);
    const double residual = moment.cwiseAbs().maxCoeff();
    return {residual <= kDesignTol, residual};
}

}  // namespace

Povm::Povm(std::vector<HermOperator> elements, std::optional<std::vector<WeightedState>> rank1)
    : elements_(std::move(elements)), rank1_(std::move(rank1)) {
    if (elements_.empty()) {
        throw ValidationError("Povm: no elements");
    }
    const int d = elements_.front().dim();
    for (const auto &e : elements_) {
        if (e.dim() != d) {
            throw DimensionError("Povm: elements have different dimensions");
        }
    }
    if (rank1_) {
        if (rank1_->size() != elements_.size()) {
            throw DimensionError("Povm: rank-one form has wrong number of entries");
        }
        for (const auto &ws : *rank1_) {
            if (ws.state.size() != d) {
                throw DimensionError("Povm: rank-one state has wrong dimension");
            }
        }
    }
}

Povm Povm::from_rank1(std::vector<WeightedState> rank1) {
    if (rank1.empty()) {
        throw ValidationError("Povm: no elements");
    }
    std::vector<HermOperator> elements;
    elements.reserve(rank1.size());
    for (auto &ws : rank1) {
        const double n = ws.state.norm();
        if (n <= 0.0) {
            throw ValidationError("Povm: zero state vector");
        }
        ws.state /= n;
        elements.push_back(ws.weight * HermOperator::projector(ws.state));
    }
    return Povm(std::move(elements), std::move(rank1));
}

std::vector<double> Povm::probabilities(const HermOperator &rho) const {
    std::vector<double> out;
    out.reserve(elements_.size());
    for (const auto &e : elements_) {
        out.push_back(hs_inner(e, rho));
    }
    return out;
}

std::vector<double> Povm::traces() const {
    std::vector<double> out;
    out.reserve(elements_.size());
    for (const auto &e : elements_) {
        out.push_back(e.trace());
    }
    return out;
}

PovmValidation validate(const Povm &p) {
    PovmValidation r;
    const int d = p.dim();
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    CMatrix total = CMatrix::Zero(d, d);
    for (const auto &e : p.elements()) {
        r.min_eigenvalue = std::min(r.min_eigenvalue, e.min_eigenvalue());
        total += e.matrix();
    }
    r.completeness_defect = (total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (r.min_eigenvalue < -kPsdTol) {
        std::ostringstream s;
        s << "element not positive semidefinite (min eigenvalue " << r.min_eigenvalue << ")";
        r.failures.push_back(s.str());
    }
    if (r.completeness_defect > kCompletenessTol) {
        std::ostringstream s;
        s << "elements do not sum to identity (defect " << r.completeness_defect << ")";
        r.failures.push_back(s.str());
    }
    if (const auto &rank1 = p.rank1_form()) {
        double defect = 0.0;
        double weights = 0.0;
        bool unit = true;
        for (std::size_t b = 0; b < p.size(); ++b) {
            const auto &ws = (*rank1)[b];
            unit = unit && std::abs(ws.state.norm() - 1.0) <= kRank1Tol;
            weights += ws.weight;
            CMatrix diff = p[b].matrix() - ws.weight * ws.state * ws.state.adjoint();
            defect = std::max(defect, diff.cwiseAbs().maxCoeff());
        }
        r.rank1_defect = defect;
        r.weight_sum_defect = std::abs(weights - d);
        if (defect > kRank1Tol || !unit) {
            r.failures.push_back("rank-one form inconsistent with elements");
        }
        if (*r.weight_sum_defect > kCompletenessTol) {
            r.failures.push_back("rank-one weights do not sum to d");
        }
    }
    return r;
}

Povm projective(std::span<const CVector> basis_vectors) {
    const auto n = static_cast<Eigen::Index>(basis_vectors.size());
    if (n < 2) {
        throw DimensionError("projective: need at least two basis vectors");
    }
    CMatrix v(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (basis_vectors[k].size() != n) {
            throw DimensionError("projective: need exactly d vectors of length d");
        }
        v.col(k) = basis_vectors[k];
    }
    const double defect = (v.adjoint() * v - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw ValidationError("projective: basis vectors are not orthonormal");
    }
    std::vector<WeightedState> rank1;
    for (Eigen::Index k = 0; k < n; ++k) {
        rank1.push_back({1.0, v.col(k)});
    }
    return Povm::from_rank1(std::move(rank1));
}

Povm random_rank1(int d, int outcomes, Rng &rng) {
    if (d < 2) {
        throw DimensionError("random_rank1: d must be at least 2");
    }
    if (outcomes < d) {
        throw ValidationError("random_rank1: need at least d outcomes");
    }
    // Columns of a Haar unitary form a Haar isometry V; mu_b = |v_b><v_b| with v_b = V^dagger |b>.
    CMatrix u = random_haar_unitary(outcomes, rng);
    CMatrix iso = u.leftCols(d);
    std::vector<WeightedState> rank1;
    rank1.reserve(outcomes);
    for (int b = 0; b < outcomes; ++b) {
        CVector v = iso.row(b).adjoint();
        const double w = v.squaredNorm();
        rank1.push_back({w, v / std::sqrt(w)});
    }
    return Povm::from_rank1(std::move(rank1));
}

bool is_prime(int n) {
    if (n < 2) {
        return false;
    }
    for (int k = 2; k * k <= n; ++k) {
        if (n % k == 0) {
            return false;
        }
    }
    return true;
}

Povm mub_povm(int d) {
    if (!is_prime(d)) {
        throw ValidationError("mub_povm: dimension must be prime");
    }
    const double w = 1.0 / (d + 1);
    std::vector<WeightedState> rank1;
    rank1.reserve(static_cast<std::size_t>(d) * (d + 1));
    for (int m = 0; m < d; ++m) {
        rank1.push_back({w, ket(d, m)});
    }
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    if (d == 2) {
        const Complex i(0.0, 1.0);
        for (const Complex phase : {Complex(1.0), Complex(-1.0), i, -i}) {
            CVector v(2);
            v << inv, phase * inv;
            rank1.push_back({w, v});
        }
        return Povm::from_rank1(std::move(rank1));
    }
    for (int k = 0; k < d; ++k) {
        for (int m = 0; m < d; ++m) {
            CVector v(d);
            for (int j = 0; j < d; ++j) {
                const long e = (static_cast<long>(k) * j * j + static_cast<long>(m) * j) % d;
                v(j) = std::polar(inv, 2.0 * std::numbers::pi * static_cast<double>(e) / d);
            }
            rank1.push_back({w, v});
        }
    }
    return Povm::from_rank1(std::move(rank1));
}

Povm toy_povm(ToyPovm which) {
    const double s = 1.0 / std::sqrt(2.0);
    CVector zero = ket(2, 0), one = ket(2, 1);
    CVector plus = s * (zero + one), minus = s * (zero - one);
    CVector right = s * (zero + Complex(0.0, 1.0) * one);
    switch (which) {
        case ToyPovm::projective: {
            const CVector basis[] = {zero, one};
            return projective(basis);
        }
        case ToyPovm::non_ic:
            return Povm::from_rank1({{0.5, zero}, {0.5, one}, {0.5, plus}, {0.5, minus}});
        case ToyPovm::ic: {
            HermOperator m1 = HermOperator::projector(zero) / 3.0;
            HermOperator m2 = HermOperator::projector(plus) / 3.0;
            HermOperator m3 = HermOperator::projector(right) / 3.0;
            HermOperator m4 = HermOperator::identity(2) - m1 - m2 - m3;
            return Povm({m1, m2, m3, m4});
        }
    }
    throw ValidationError("toy_povm: unknown fixture");
}

DesignCheck is_2design(const Povm &p) { return design_residual(p, 2); }

DesignCheck is_3design(const Povm &p) { return design_residual(p, 3); }

CovariantSampler::CovariantSampler(int d, uint64_t seed) : dim_(d), rng_(seed) {
    if (d < 2) {
        throw DimensionError("CovariantSampler: d must be at least 2");
    }
}

CovariantSampler::Draw CovariantSampler::draw(const HermOperator &rho) {
    if (rho.dim() != dim_) {
        throw DimensionError("covariant_draw: state dimension mismatch");
    }
    if (!is_density_matrix(rho)) {
        throw ValidationError("covariant_draw: invalid density matrix");
    }
    CMatrix u = random_haar_unitary(dim_, rng_);
    RVector p = (u * rho.matrix() * u.adjoint()).diagonal().real();
    std::uniform_real_distribution<double> unif(0.0, p.sum());
    const double r = unif(rng_);
    int b = 0;
    double acc = p(0);
    while (b + 1 < dim_ && r >= acc) {
        ++b;
        acc += p(b);
    }
    CVector row = u.row(b).adjoint();
    return {HermOperator::projector(row), b, std::move(u)};
}

CovariantSampler::Draw covariant_draw(CovariantSampler &sampler, const HermOperator &rho) {
    return sampler.draw(rho);
}

}  // namespace shadowframe
