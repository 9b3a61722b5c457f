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

// Hermitian-operator algebra on C^d.
//
// Every superoperator in this library is stored as a real d^2 x d^2 matrix over the
// standard Hermitian basis returned by standard_herm_basis(d). The ordering of that
// basis is frozen, since serialized fixtures depend on it:
//
//   index 0                      I / sqrt(d)
//   next d(d-1)/2 entries        (|j><k| + |k><j|) / sqrt(2)          j < k, lexicographic
//   next d(d-1)/2 entries        (-i|j><k| + i|k><j|) / sqrt(2)       j < k, lexicographic
//   last d-1 entries             (sum_{j<l} |j><j| - l |l><l|) / sqrt(l(l+1))   l = 1..d-1
//
// For d = 2 this is {I, X, Y, Z} / sqrt(2).

#ifndef SHADOWFRAME_OPERATOR_SPACE_H
#define SHADOWFRAME_OPERATOR_SPACE_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shadowframe/rng.h"

namespace shadowframe {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPseudoInverseRelTol = 1e-10;

/// A d x d Hermitian matrix, d >= 2. The stored matrix is exactly Hermitian: inputs
/// within kHermiticityTol of Hermitian are symmetrized on construction.
class HermOperator {
   public:
    explicit HermOperator(const CMatrix &m, double tol = kHermiticityTol);

    static HermOperator identity(int d);
    static HermOperator zero(int d);
    /// |v><v| (v is used as given, not normalized).
    static HermOperator projector(const CVector &v);
    /// |k><k| in the computational basis of C^d.
    static HermOperator basis_projector(int d, int k);
    static HermOperator diagonal(const RVector &diag);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix &matrix() const { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    double trace() const { return m_.trace().real(); }
    /// Eigenvalues in ascending order.
    RVector eigenvalues() const;
    double min_eigenvalue() const;
    /// Largest absolute eigenvalue.
    double op_norm() const;
    double max_abs_entry() const { return m_.cwiseAbs().maxCoeff(); }

    HermOperator &operator+=(const HermOperator &o);
    HermOperator &operator-=(const HermOperator &o);
    HermOperator &operator*=(double s);

    friend HermOperator operator+(HermOperator a, const HermOperator &b) { return a += b; }
    friend HermOperator operator-(HermOperator a, const HermOperator &b) { return a -= b; }
    friend HermOperator operator*(HermOperator a, double s) { return a *= s; }
    friend HermOperator operator*(double s, HermOperator a) { return a *= s; }
    friend HermOperator operator/(HermOperator a, double s) { return a *= 1.0 / s; }

   private:
    struct Unchecked {};
    HermOperator(CMatrix m, Unchecked) : m_(std::move(m)) {}
    CMatrix m_;
};

/// Hilbert-Schmidt inner product tr(X^dagger Y), real for Hermitian operands.
double hs_inner(const HermOperator &x, const HermOperator &y);
/// sqrt(tr X^2).
double hs_norm(const HermOperator &x);

HermOperator pauli_x();
HermOperator pauli_y();
HermOperator pauli_z();
/// Computational basis vector |k> in C^d.
CVector ket(int d, int k);

/// Ordered orthonormal basis of Herm(C^d).
class HermBasis {
   public:
    HermBasis(int dim, std::vector<HermOperator> elements, bool standard = false);

    int dim() const { return dim_; }
    std::size_t size() const { return elements_.size(); }
    const HermOperator &operator[](std::size_t k) const { return elements_[k]; }
    const std::vector<HermOperator> &elements() const { return elements_; }
    /// True when this is the library's fixed standard basis, enabling closed-form coordinates.
    bool is_standard() const { return standard_; }

   private:
    int dim_;
    std::vector<HermOperator> elements_;
    bool standard_;
};

HermBasis standard_herm_basis(int d);

/// Coordinates <sigma_k, X> in the given basis.
RVector vectorize(const HermOperator &x, const HermBasis &basis);
HermOperator devectorize(const RVector &v, const HermBasis &basis);
/// Coordinates in the standard basis, computed in closed form without materializing it.
RVector vectorize(const HermOperator &x);
HermOperator devectorize(const RVector &v);

/// Linear map on Herm(C^d) as a real d^2 x d^2 matrix in the standard basis.
class SuperOperator {
   public:
    SuperOperator(int dim, RMatrix matrix);

    static SuperOperator identity(int d);
    static SuperOperator zero(int d);

    int dim() const { return dim_; }
    const RMatrix &matrix() const { return m_; }
    double trace() const { return m_.trace(); }
    bool is_symmetric(double tol = kSymmetryTol) const;

    SuperOperator &operator+=(const SuperOperator &o);
    SuperOperator &operator-=(const SuperOperator &o);
    SuperOperator &operator*=(double s);

    friend SuperOperator operator+(SuperOperator a, const SuperOperator &b) { return a += b; }
    friend SuperOperator operator-(SuperOperator a, const SuperOperator &b) { return a -= b; }
    friend SuperOperator operator*(SuperOperator a, double s) { return a *= s; }
    friend SuperOperator operator*(double s, SuperOperator a) { return a *= s; }
    /// Composition: (a * b)(X) = a(b(X)).
    friend SuperOperator operator*(const SuperOperator &a, const SuperOperator &b);

   private:
    int dim_;
    RMatrix m_;
};

/// The rank-one map P(Y): X -> <Y, X> Y.
SuperOperator outer_superop(const HermOperator &y);
/// Adds w * P(Y) in place; avoids allocating a d^2 x d^2 temporary per term.
void accumulate_outer(SuperOperator &s, const HermOperator &y, double w);
HermOperator superop_apply(const SuperOperator &s, const HermOperator &x);
/// <X, S(Y)>.
double superop_form(const SuperOperator &s, const HermOperator &x, const HermOperator &y);

struct SpectralDecomposition {
    /// Sorted descending.
    RVector eigenvalues;
    /// Orthonormal eigenvectors as columns, in standard-basis coordinates.
    RMatrix vectors;

    HermOperator eigenoperator(int k) const;
    RMatrix reconstruct() const;
};

/// Full eigendecomposition of a symmetric superoperator. Throws ValidationError otherwise.
SpectralDecomposition superop_eig(const SuperOperator &s);

struct PseudoInverse {
    SuperOperator inverse;
    int rank;
};

/// Moore-Penrose inverse of a symmetric superoperator: eigenvalues below
/// rel_tol * max|lambda| are mapped to zero.
PseudoInverse superop_pseudo_inverse(const SuperOperator &s, double rel_tol = kPseudoInverseRelTol);

/// Id - P(I/sqrt(d)), i.e. diag(0, 1, ..., 1) in the standard basis.
SuperOperator traceless_projector(int d);

/// Projector onto the symmetric subspace of (C^d)^{\otimes copies}, copies in {2, 3}.
CMatrix sym_projector(int d, int copies);

/// Matrix of the superoperator in the matrix-unit basis {|i><j|}, row index i*d + j.
CMatrix to_matrix_unit_basis(const SuperOperator &s);

/// Haar-distributed unitary: Ginibre matrix, QR, phases of diag(R) absorbed into Q.
CMatrix random_haar_unitary(int d, Rng &rng);
/// U diag(spectrum) U^dagger with Haar U. spectrum must be a probability vector.
HermOperator random_state(int d, std::span<const double> spectrum, Rng &rng);
/// Gaussian Hermitian matrix (GUE, unit-variance entries).
HermOperator random_hermitian(int d, Rng &rng);
/// GUE sample with the trace removed and rescaled to tr(O^2) = 1.
HermOperator random_traceless_observable(int d, Rng &rng);
/// Haar-random pure state vector.
CVector random_ket(int d, Rng &rng);

/// Checks that rho is a density matrix (PSD within tol, unit trace within tol).
bool is_density_matrix(const HermOperator &rho, double tol = 1e-9);
double purity(const HermOperator &rho);

}  // namespace shadowframe

#endif
