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

#include "shadowframe/operator_space.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "shadowframe/errors.h"

namespace shadowframe {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_same_dim(int a, int b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

int num_pairs(int d) { return d * (d - 1) / 2; }

}  // namespace

// ---------------------------------------------------------------------------
// HermOperator

HermOperator::HermOperator(const CMatrix &m, double tol) {
    if (m.rows() != m.cols()) {
        throw DimensionError("HermOperator: matrix is not square");
    }
    if (m.rows() < 2) {
        throw DimensionError("HermOperator: dimension must be at least 2");
    }
    double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(defect <= tol)) {
        throw ValidationError("HermOperator: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    m_ = 0.5 * (m + m.adjoint());
}

HermOperator HermOperator::identity(int d) { return HermOperator(CMatrix::Identity(d, d)); }

HermOperator HermOperator::zero(int d) { return HermOperator(CMatrix::Zero(d, d)); }

HermOperator HermOperator::projector(const CVector &v) {
    CMatrix m = v * v.adjoint();
    return HermOperator(0.5 * (m + m.adjoint()), Unchecked{});
}

HermOperator HermOperator::basis_projector(int d, int k) {
    if (k < 0 || k >= d) {
        throw DimensionError("basis_projector: index out of range");
    }
    CMatrix m = CMatrix::Zero(d, d);
    m(k, k) = 1.0;
    return HermOperator(m);
}

HermOperator HermOperator::diagonal(const RVector &diag) {
    return HermOperator(CMatrix(diag.cast<Complex>().asDiagonal()));
}

RVector HermOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double HermOperator::min_eigenvalue() const { return eigenvalues()(0); }

double HermOperator::op_norm() const { return eigenvalues().cwiseAbs().maxCoeff(); }

HermOperator &HermOperator::operator+=(const HermOperator &o) {
    require_same_dim(dim(), o.dim(), "HermOperator +");
    m_ += o.m_;
    return *this;
}

HermOperator &HermOperator::operator-=(const HermOperator &o) {
    require_same_dim(dim(), o.dim(), "HermOperator -");
    m_ -= o.m_;
    return *this;
}

HermOperator &HermOperator::operator*=(double s) {
    m_ *= s;
    return *this;
}

double hs_inner(const HermOperator &x, const HermOperator &y) {
    require_same_dim(x.dim(), y.dim(), "hs_inner");
    // tr(X^dagger Y) = sum_ij conj(X_ij) Y_ij
    return (x.matrix().conjugate().cwiseProduct(y.matrix())).sum().real();
}

double hs_norm(const HermOperator &x) { return std::sqrt(hs_inner(x, x)); }

HermOperator pauli_x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return HermOperator(m);
}

HermOperator pauli_y() {
    CMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return HermOperator(m);
}

HermOperator pauli_z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return HermOperator(m);
}

CVector ket(int d, int k) {
    if (k < 0 || k >= d) {
        throw DimensionError("ket: index out of range");
    }
    CVector v = CVector::Zero(d);
    v(k) = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Hermitian basis and coordinates

HermBasis::HermBasis(int dim, std::vector<HermOperator> elements, bool standard)
    : dim_(dim), elements_(std::move(elements)), standard_(standard) {
    if (elements_.size() != static_cast<std::size_t>(dim) * dim) {
        throw DimensionError("HermBasis: need d^2 elements");
    }
    for (const auto &e : elements_) {
        require_same_dim(e.dim(), dim, "HermBasis");
    }
}

HermBasis standard_herm_basis(int d) {
    if (d < 2) {
        throw DimensionError("standard_herm_basis: d must be at least 2");
    }
    std::vector<HermOperator> out;
    out.reserve(static_cast<std::size_t>(d) * d);
    out.push_back(HermOperator::identity(d) / std::sqrt(static_cast<double>(d)));
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            CMatrix m = CMatrix::Zero(d, d);
            m(j, k) = m(k, j) = 1.0 / kSqrt2;
            out.emplace_back(m);
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            CMatrix m = CMatrix::Zero(d, d);
            m(j, k) = Complex(0.0, -1.0 / kSqrt2);
            m(k, j) = Complex(0.0, 1.0 / kSqrt2);
            out.emplace_back(m);
        }
    }
    for (int l = 1; l < d; ++l) {
        RVector diag = RVector::Zero(d);
        diag.head(l).setOnes();
        diag(l) = -l;
        out.push_back(HermOperator::diagonal(diag / std::sqrt(static_cast<double>(l) * (l + 1))));
    }
    return HermBasis(d, std::move(out), true);
}

RVector vectorize(const HermOperator &x) {
    const int d = x.dim();
    const int np = num_pairs(d);
    const CMatrix &m = x.matrix();
    RVector v(d * d);
    v(0) = m.trace().real() / std::sqrt(static_cast<double>(d));
    int p = 0;
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k, ++p) {
            v(1 + p) = kSqrt2 * m(j, k).real();
            v(1 + np + p) = -kSqrt2 * m(j, k).imag();
        }
    }
    double running = 0.0;
    for (int l = 1; l < d; ++l) {
        running += m(l - 1, l - 1).real();
        v(2 * np + l) = (running - l * m(l, l).real()) / std::sqrt(static_cast<double>(l) * (l + 1));
    }
    return v;
}

HermOperator devectorize(const RVector &v) {
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size() || d < 2) {
        throw DimensionError("devectorize: length is not d^2 with d >= 2");
    }
    const int np = num_pairs(d);
    CMatrix m = CMatrix::Zero(d, d);
    const double c0 = v(0) / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        m(i, i) = c0;
    }
    int p = 0;
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k, ++p) {
            Complex z(v(1 + p) / kSqrt2, -v(1 + np + p) / kSqrt2);
            m(j, k) = z;
            m(k, j) = std::conj(z);
        }
    }
    for (int l = 1; l < d; ++l) {
        const double c = v(2 * np + l) / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) {
            m(j, j) += c;
        }
        m(l, l) -= c * l;
    }
    return HermOperator(m);
}

RVector vectorize(const HermOperator &x, const HermBasis &basis) {
    require_same_dim(x.dim(), basis.dim(), "vectorize");
    if (basis.is_standard()) {
        return vectorize(x);
    }
    RVector v(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = hs_inner(basis[k], x);
    }
    return v;
}

HermOperator devectorize(const RVector &v, const HermBasis &basis) {
    if (static_cast<std::size_t>(v.size()) != basis.size()) {
        throw DimensionError("devectorize: coordinate length does not match basis");
    }
    if (basis.is_standard()) {
        return devectorize(v);
    }
    HermOperator out = HermOperator::zero(basis.dim());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        out += v(static_cast<Eigen::Index>(k)) * basis[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Superoperators

SuperOperator::SuperOperator(int dim, RMatrix matrix) : dim_(dim), m_(std::move(matrix)) {
    if (dim < 2 || m_.rows() != dim * dim || m_.cols() != dim * dim) {
        throw DimensionError("SuperOperator: matrix must be d^2 x d^2 with d >= 2");
    }
}

SuperOperator SuperOperator::identity(int d) { return SuperOperator(d, RMatrix::Identity(d * d, d * d)); }

SuperOperator SuperOperator::zero(int d) { return SuperOperator(d, RMatrix::Zero(d * d, d * d)); }

bool SuperOperator::is_symmetric(double tol) const { return (m_ - m_.transpose()).cwiseAbs().maxCoeff() <= tol; }

SuperOperator &SuperOperator::operator+=(const SuperOperator &o) {
    require_same_dim(dim_, o.dim_, "SuperOperator +");
    m_ += o.m_;
    return *this;
}

SuperOperator &SuperOperator::operator-=(const SuperOperator &o) {
    require_same_dim(dim_, o.dim_, "SuperOperator -");
    m_ -= o.m_;
    return *this;
}

SuperOperator &SuperOperator::operator*=(double s) {
    m_ *= s;
    return *this;
}

SuperOperator operator*(const SuperOperator &a, const SuperOperator &b) {
    require_same_dim(a.dim(), b.dim(), "SuperOperator compose");
    return SuperOperator(a.dim(), a.matrix() * b.matrix());
}

SuperOperator outer_superop(const HermOperator &y) {
    RVector v = vectorize(y);
    return SuperOperator(y.dim(), v * v.transpose());
}

void accumulate_outer(SuperOperator &s, const HermOperator &y, double w) {
    require_same_dim(s.dim(), y.dim(), "accumulate_outer");
    RVector v = vectorize(y);
    s += SuperOperator(s.dim(), w * v * v.transpose());
}

HermOperator superop_apply(const SuperOperator &s, const HermOperator &x) {
    require_same_dim(s.dim(), x.dim(), "superop_apply");
    return devectorize(RVector(s.matrix() * vectorize(x)));
}

double superop_form(const SuperOperator &s, const HermOperator &x, const HermOperator &y) {
    require_same_dim(s.dim(), x.dim(), "superop_form");
    require_same_dim(s.dim(), y.dim(), "superop_form");
    return vectorize(x).dot(s.matrix() * vectorize(y));
}

HermOperator SpectralDecomposition::eigenoperator(int k) const { return devectorize(RVector(vectors.col(k))); }

RMatrix SpectralDecomposition::reconstruct() const {
    return vectors * eigenvalues.asDiagonal() * vectors.transpose();
}

SpectralDecomposition superop_eig(const SuperOperator &s) {
    if (!s.is_symmetric()) {
        throw ValidationError("superop_eig: superoperator is not symmetric");
    }
    RMatrix sym = 0.5 * (s.matrix() + s.matrix().transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(sym);
    SpectralDecomposition out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

PseudoInverse superop_pseudo_inverse(const SuperOperator &s, double rel_tol) {
    SpectralDecomposition eig = superop_eig(s);
    const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
    RVector inv = RVector::Zero(eig.eigenvalues.size());
    int rank = 0;
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        const double lam = eig.eigenvalues(k);
        if (scale > 0.0 && std::abs(lam) >= rel_tol * scale) {
            inv(k) = 1.0 / lam;
            ++rank;
        }
    }
    RMatrix m = eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
    return {SuperOperator(s.dim(), 0.5 * (m + m.transpose())), rank};
}

SuperOperator traceless_projector(int d) {
    SuperOperator p = SuperOperator::identity(d);
    RMatrix m = p.matrix();
    m(0, 0) = 0.0;
    return SuperOperator(d, std::move(m));
}

CMatrix sym_projector(int d, int copies) {
    if (copies != 2 && copies != 3) {
        throw ValidationError("sym_projector: only 2 or 3 copies are supported");
    }
    if (d < 1) {
        throw DimensionError("sym_projector: d must be positive");
    }
    const int n = copies == 2 ? d * d : d * d * d;
    CMatrix out = CMatrix::Zero(n, n);
    if (copies == 2) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                out(i * d + j, i * d + j) += 0.5;
                out(j * d + i, i * d + j) += 0.5;  // swap
            }
        }
        return out;
    }
    std::array<int, 3> perm = {0, 1, 2};
    do {
        // W_pi |i0 i1 i2> = |i_pi(0) i_pi(1) i_pi(2)>
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                for (int c = 0; c < d; ++c) {
                    const std::array<int, 3> idx = {a, b, c};
                    const int src = (a * d + b) * d + c;
                    const int dst = (idx[perm[0]] * d + idx[perm[1]]) * d + idx[perm[2]];
                    out(dst, src) += 1.0 / 6.0;
                }
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

CMatrix to_matrix_unit_basis(const SuperOperator &s) {
    const int d = s.dim();
    HermBasis basis = standard_herm_basis(d);
    CMatrix t(d * d, d * d);
    for (int n = 0; n < d * d; ++n) {
        const CMatrix &e = basis[n].matrix();
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                t(i * d + j, n) = e(i, j);
            }
        }
    }
    return t * s.matrix().cast<Complex>() * t.adjoint();
}

// ---------------------------------------------------------------------------
// Sampling

CMatrix random_haar_unitary(int d, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0 / kSqrt2);
    CMatrix g(d, d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
    const CMatrix &r = qr.matrixQR();
    for (int j = 0; j < d; ++j) {
        const double a = std::abs(r(j, j));
        const Complex phase = a > 0.0 ? r(j, j) / a : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return q;
}

HermOperator random_state(int d, std::span<const double> spectrum, Rng &rng) {
    if (spectrum.size() != static_cast<std::size_t>(d)) {
        throw DimensionError("random_state: spectrum length must equal d");
    }
    double total = 0.0;
    for (double p : spectrum) {
        if (!(p >= 0.0)) {
            throw ValidationError("random_state: spectrum must be nonnegative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("random_state: spectrum must sum to one");
    }
    CMatrix u = random_haar_unitary(d, rng);
    RVector diag = Eigen::Map<const RVector>(spectrum.data(), d);
    CMatrix m = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
    return HermOperator(0.5 * (m + m.adjoint()), 1e-10);
}

HermOperator random_hermitian(int d, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        m(i, i) = normal(rng);
        for (int j = i + 1; j < d; ++j) {
            const double re = normal(rng) / kSqrt2;
            const double im = normal(rng) / kSqrt2;
            m(i, j) = Complex(re, im);
            m(j, i) = Complex(re, -im);
        }
    }
    return HermOperator(m);
}

HermOperator random_traceless_observable(int d, Rng &rng) {
    HermOperator o = random_hermitian(d, rng);
    o -= (o.trace() / d) * HermOperator::identity(d);
    return o / hs_norm(o);
}

CVector random_ket(int d, Rng &rng) { return random_haar_unitary(d, rng).col(0); }

bool is_density_matrix(const HermOperator &rho, double tol) {
    return std::abs(rho.trace() - 1.0) <= tol && rho.min_eigenvalue() >= -tol;
}

double purity(const HermOperator &rho) { return hs_inner(rho, rho); }

}  // namespace shadowframe
