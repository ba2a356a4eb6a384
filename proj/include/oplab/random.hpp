#pragma once

#include <cstdint>
#include <random>

#include "oplab/algebra.hpp"

namespace oplab {

using Rng = std::mt19937_64;

Matrix random_ginibre(Rng& rng, int rows, int cols);
Matrix random_hermitian(Rng& rng, int n, double scale = 1.0);
Matrix random_unitary(Rng& rng, int n);
// C C* with C of shape n x rank
Matrix random_psd(Rng& rng, int n, int rank);

// total dimension at most max_total_dim, between 1 and max_blocks blocks, weights in [0.25, 2]
AlgebraRef random_block_algebra(Rng& rng, int max_total_dim, int max_blocks = 3);

Operator random_operator(Rng& rng, const AlgebraRef& alg, double scale = 1.0);
Operator random_hermitian_op(Rng& rng, const AlgebraRef& alg, double scale = 1.0);
Operator random_unitary_op(Rng& rng, const AlgebraRef& alg);
// rank_deficit removes that many dimensions from every block where possible
Operator random_positive_op(Rng& rng, const AlgebraRef& alg, int rank_deficit = 0);
// faithful, eigenvalues bounded below by roughly floor relative to the largest one
DensityState random_faithful_density(Rng& rng, const AlgebraRef& alg, double floor = 0.05);

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);

} // namespace oplab
