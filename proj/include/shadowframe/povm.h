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

#ifndef SHADOWFRAME_POVM_H
#define SHADOWFRAME_POVM_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadowframe/operator_space.h"

namespace shadowframe {

inline constexpr double kPsdTol = 1e-10;
inline constexpr double kCompletenessTol = 1e-9;
inline constexpr double kRank1Tol = 1e-10;
inline constexpr double kDesignTol = 1e-9;

/// mu_b = weight * |state><state| with a unit state vector.
struct WeightedState {
    double weight;
    CVector state;
};

/// Outcome-indexed family of Hermitian operators on C^d, optionally carrying a rank-one
/// weighted-state description. Construction only checks shape; positivity and completeness
/// are reported by validate(), so that malformed input can be loaded and diagnosed.
class Povm {
   public:
    explicit Povm(std::vector<HermOperator> elements, std::optional<std::vector<WeightedState>> rank1 = std::nullopt);

    /// Builds elements from the rank-one description.
    static Povm from_rank1(std::vector<WeightedState> rank1);

    int dim() const { return elements_.front().dim(); }
    std::size_t size() const { return elements_.size(); }
    const HermOperator &operator[](std::size_t b) const { return elements_[b]; }
    const std::vector<HermOperator> &elements() const { return elements_; }
    const std::optional<std::vector<WeightedState>> &rank1_form() const { return rank1_; }

    /// <mu_b, rho> for every outcome.
    std::vector<double> probabilities(const HermOperator &rho) const;
    std::vector<double> traces() const;

   private:
    std::vector<HermOperator> elements_;
    std::optional<std::vector<WeightedState>> rank1_;
};

struct PovmValidation {
    /// Smallest eigenvalue over all elements.
    double min_eigenvalue = 0.0;
    /// max |(sum_b mu_b - I)_ij|.
    double completeness_defect = 0.0;
    /// max_b max |(mu_b - w_b |psi_b><psi_b|)_ij|, when a rank-one form is present.
    std::optional<double> rank1_defect;
    /// |sum_b w_b - d|, when a rank-one form is present.
    std::optional<double> weight_sum_defect;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

PovmValidation validate(const Povm &p);

/// Projective measurement onto an orthonormal basis. Throws ValidationError otherwise.
Povm projective(std::span<const CVector> basis_vectors);
/// mu_b = V^dagger |b><b| V for a Haar-random isometry V: C^d -> C^outcomes.
Povm random_rank1(int d, int outcomes, Rng &rng);
/// All vectors of d+1 mutually unbiased bases, each weighted 1/(d+1). d must be prime.
/// Basis 0 is computational; for d = 2 the others are the X and Y eigenbases, for odd d
/// they are (1/sqrt d) sum_j w^{k j^2 + m j} |j>, k = 0..d-1.
Povm mub_povm(int d);

enum class ToyPovm { projective, non_ic, ic };
/// The three single-qubit toy measurements: {P0, P1}; {P0, P1, P+, P-}/2;
/// {P0/3, P+/3, PR/3, I - rest}.
Povm toy_povm(ToyPovm which);

struct DesignCheck {
    bool holds;
    double residual;
};

/// Residual of sum_b w_b P(psi_b)^{(x)2} against d Pi_sym / C(d+1, 2).
DesignCheck is_2design(const Povm &p);
/// Residual of sum_b w_b P(psi_b)^{(x)3} against d Pi_sym3 / C(d+2, 3).
DesignCheck is_3design(const Povm &p);

bool is_prime(int n);

/// Haar-random basis measurement (the covariant measurement mu_{U,b} = U^dagger |b><b| U).
/// Holds mutable RNG state; use one sampler per thread.
class CovariantSampler {
   public:
    CovariantSampler(int d, uint64_t seed);

    struct Draw {
        HermOperator element;
        int outcome;
        CMatrix unitary;
    };

    int dim() const { return dim_; }
    /// Draws U Haar, then b with probability <b|U rho U^dagger|b>.
    Draw draw(const HermOperator &rho);
    Rng &rng() { return rng_; }

   private:
    int dim_;
    Rng rng_;
};

CovariantSampler::Draw covariant_draw(CovariantSampler &sampler, const HermOperator &rho);

}  // namespace shadowframe

#endif
