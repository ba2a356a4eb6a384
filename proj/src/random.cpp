#include "oplab/random.hpp"

#include <algorithm>

namespace oplab {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Matrix random_ginibre(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
    return m;
}

Matrix random_hermitian(Rng& rng, int n, double scale) {
    Matrix g = random_ginibre(rng, n, n);
    return scale * 0.5 * (g + g.adjoint()) / std::sqrt(static_cast<double>(n));
}

Matrix random_unitary(Rng& rng, int n) {
    Matrix g = random_ginibre(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix column phases so the distribution is Haar
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

Matrix random_psd(Rng& rng, int n, int rank) {
    Matrix c = random_ginibre(rng, n, std::max(rank, 0));
    Matrix p = c * c.adjoint();
    return 0.5 * (p + p.adjoint());
}

AlgebraRef random_block_algebra(Rng& rng, int max_total_dim, int max_blocks) {
    int nblocks = uniform_int(rng, 1, std::max(1, std::min(max_blocks, max_total_dim)));
    int remaining = max_total_dim;
    std::vector<Block> blocks;
    for (int k = 0; k < nblocks; ++k) {
        int left_after = nblocks - k - 1;
        int hi = std::max(1, remaining - left_after);
        int d = uniform_int(rng, 1, hi);
        remaining -= d;
        blocks.push_back({d, uniform(rng, 0.25, 2.0)});
    }
    return BlockAlgebra::make(std::move(blocks));
}

Operator random_operator(Rng& rng, const AlgebraRef& alg, double scale) {
    std::vector<Matrix> b;
    for (const auto& blk : alg->blocks())
        b.push_back(scale * random_ginibre(rng, blk.dim, blk.dim) / std::sqrt(static_cast<double>(blk.dim)));
    return Operator(alg, std::move(b));
}

Operator random_hermitian_op(Rng& rng, const AlgebraRef& alg, double scale) {
    std::vector<Matrix> b;
    for (const auto& blk : alg->blocks()) b.push_back(random_hermitian(rng, blk.dim, scale));
    return Operator(alg, std::move(b));
}

Operator random_unitary_op(Rng& rng, const AlgebraRef& alg) {
    std::vector<Matrix> b;
    for (const auto& blk : alg->blocks()) b.push_back(random_unitary(rng, blk.dim));
    return Operator(alg, std::move(b));
}

Operator random_positive_op(Rng& rng, const AlgebraRef& alg, int rank_deficit) {
    std::vector<Matrix> b;
    for (const auto& blk : alg->blocks()) {
        int rank = std::max(0, blk.dim - rank_deficit);
        b.push_back(random_psd(rng, blk.dim, rank) / static_cast<double>(blk.dim));
    }
    return Operator(alg, std::move(b));
}

DensityState random_faithful_density(Rng& rng, const AlgebraRef& alg, double floor) {
    std::vector<Matrix> b;
    for (const auto& blk : alg->blocks()) {
        Matrix u = random_unitary(rng, blk.dim);
        Vector ev(blk.dim);
        for (int i = 0; i < blk.dim; ++i) ev(i) = uniform(rng, floor, 1.0);
        b.push_back(u * ev.asDiagonal() * u.adjoint());
    }
    return DensityState::normalized(Operator(alg, std::move(b)));
}

} // namespace oplab
