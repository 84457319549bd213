#pragma once

// Seeded random generators for algebra elements, module vectors, operators,
// frames and unit-ball samples. Every draw goes through a caller-owned
// std::mt19937_64, so a fixed seed reproduces the same values.

#include <cstdint>
#include <random>
#include <vector>

#include "cstar/module.hpp"

namespace cstar {

using Rng = std::mt19937_64;

/// Entries with independent standard complex Gaussian real and imaginary parts.
Matrix random_matrix(Rng& rng, int rows, int cols);
AlgebraElement random_element(Rng& rng, const AlgebraShape& shape);
/// b*b for a random b: positive, almost surely invertible.
AlgebraElement random_positive(Rng& rng, const AlgebraShape& shape);
ModuleVector random_vector(Rng& rng, const AlgebraShape& shape, int dim);
ModuleOperator random_operator(Rng& rng, const AlgebraShape& shape, int target_dim, int source_dim);
/// Random vector rescaled to norm `radius`.
ModuleVector random_vector_with_norm(Rng& rng, const AlgebraShape& shape, int dim, double radius);
/// A random state with full-rank densities.
State random_state(Rng& rng, const AlgebraShape& shape);
/// Shape with `blocks` blocks of size 1 or 2 (at least one of each when blocks >= 2).
AlgebraShape random_mixed_shape(Rng& rng, int blocks);

/// `count` random vectors of A^dim followed by the standard basis when
/// `count` < dim would not span. The result always spans A^dim.
std::vector<ModuleVector> random_frame_vectors(Rng& rng, const AlgebraShape& shape, int dim, int count);

/// Samples of the closed unit ball of A^dim: Gaussian directions with uniform
/// radius in (0, 1], plus deterministic extreme witnesses e_j p for every
/// coordinate j and every p among the unit, the central block projections and
/// the first matrix unit of each non-trivial block.
struct BallSampler {
  std::uint64_t seed = 0;
  std::size_t random_points = 64;
  bool include_witnesses = true;

  std::vector<ModuleVector> draw(const AlgebraShape& shape, int dim) const;
};

/// The deterministic witnesses of BallSampler on their own.
std::vector<ModuleVector> ball_witnesses(const AlgebraShape& shape, int dim);

}  // namespace cstar
