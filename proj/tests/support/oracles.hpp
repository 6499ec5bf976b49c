#pragma once

// Brute-force dense oracles for the test suites. Everything here is written
// as straight loops or dense kernels, independent of the library's TT
// computation paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ttround/rng.hpp"
#include "ttround/tensor.hpp"

namespace oracle {

using ttround::Core;
using ttround::DenseTensor;
using ttround::Index;
using ttround::Matrix;
using ttround::TTTensor;
using ttround::Vector;

//! Dense tensor evaluated entry-by-entry through TTTensor::entry (the slice
//! product), not through the library's contraction path.
inline DenseTensor dense_pointwise(const TTTensor& tt) {
    DenseTensor out;
    out.mode_sizes = tt.mode_sizes();
    Index total = 1;
    for (Index n : out.mode_sizes) total *= n;
    out.values.resize(static_cast<std::size_t>(total));
    const Index d = tt.order();
    std::vector<Index> idx(static_cast<std::size_t>(d), 1);
    for (Index lin = 0; lin < total; ++lin) {
        out.values[static_cast<std::size_t>(lin)] = tt.entry(idx);
        for (Index k = 0; k < d; ++k) {
            if (++idx[static_cast<std::size_t>(k)] <= out.mode_sizes[static_cast<std::size_t>(k)])
                break;
            idx[static_cast<std::size_t>(k)] = 1;
        }
    }
    return out;
}

inline double dense_rel_error(const DenseTensor& a, const DenseTensor& b) {
    double diff2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        diff2 += d * d;
        ref2 += a.values[i] * a.values[i];
    }
    return ref2 == 0.0 ? std::sqrt(diff2) : std::sqrt(diff2 / ref2);
}

inline double dense_rel_error(const TTTensor& a, const TTTensor& b) {
    return dense_rel_error(ttround::contract_to_dense(a), ttround::contract_to_dense(b));
}

//! Horizontal unfolding of the trailing-core product H(X_{k:d}) with the
//! column ordering implied by the KRP identity (mode k fastest). k is
//! 1-based.
inline Matrix dense_trailing_unfolding(const TTTensor& tt, Index k) {
    const Index d = tt.order();
    Matrix t = tt.core(d - 1).horizontal(); // r_{d-1} x n_d
    for (Index mode = d - 1; mode >= k; --mode) {
        const Core& c = tt.core(mode - 1);
        Matrix next(c.r_left(), c.n() * t.cols());
        for (Index rest = 0; rest < t.cols(); ++rest)
            for (Index j = 0; j < c.n(); ++j)
                next.col(rest * c.n() + j) = c.slice(j) * t.col(rest);
        t = std::move(next);
    }
    return t;
}

//! Explicit column-wise Khatri-Rao product of the factors for modes k..d
//! (Omega_d KRP ... KRP Omega_k), matching dense_trailing_unfolding's
//! column ordering.
inline Matrix dense_krp(const std::vector<Matrix>& factors_k_to_d) {
    Matrix krp = factors_k_to_d.back();
    for (auto it = factors_k_to_d.rbegin() + 1; it != factors_k_to_d.rend(); ++it) {
        const Matrix& f = *it;
        Matrix next(krp.rows() * f.rows(), krp.cols());
        for (Index c = 0; c < krp.cols(); ++c)
            for (Index a = 0; a < krp.rows(); ++a)
                next.col(c).segment(a * f.rows(), f.rows()) = krp(a, c) * f.col(c);
        krp = std::move(next);
    }
    return krp;
}

//! Dense mode-k product (k 1-based): out = x with `a` applied along mode k.
inline DenseTensor dense_mode_product(const DenseTensor& x, Index k, const Matrix& a) {
    DenseTensor out;
    out.mode_sizes = x.mode_sizes;
    out.mode_sizes[static_cast<std::size_t>(k - 1)] = a.rows();
    Index total = 1;
    for (Index n : out.mode_sizes) total *= n;
    out.values.assign(static_cast<std::size_t>(total), 0.0);

    Index inner = 1, outer = 1;
    for (Index m = 0; m < k - 1; ++m) inner *= x.mode_sizes[static_cast<std::size_t>(m)];
    for (std::size_t m = static_cast<std::size_t>(k); m < x.mode_sizes.size(); ++m)
        outer *= x.mode_sizes[m];
    const Index n_old = x.mode_sizes[static_cast<std::size_t>(k - 1)];
    const Index n_new = a.rows();
    for (Index o = 0; o < outer; ++o)
        for (Index jn = 0; jn < n_new; ++jn)
            for (Index jo = 0; jo < n_old; ++jo) {
                const double w = a(jn, jo);
                if (w == 0.0) continue;
                const double* src = x.values.data() + (o * n_old + jo) * inner;
                double* dst = out.values.data() + (o * n_new + jn) * inner;
                for (Index i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
    return out;
}

//! Apply a full Kronecker-sum operator densely through mode products.
inline DenseTensor dense_kron_sum_apply(const std::vector<std::vector<Matrix>>& terms,
                                        const DenseTensor& x) {
    DenseTensor acc;
    acc.mode_sizes = x.mode_sizes;
    acc.values.assign(x.values.size(), 0.0);
    for (const auto& term : terms) {
        DenseTensor y = x;
        for (std::size_t k = 0; k < term.size(); ++k)
            y = dense_mode_product(y, static_cast<Index>(k + 1), term[k]);
        for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += y.values[i];
    }
    return acc;
}

//! Random TT tensor padded with zero blocks to a larger rank chain; the
//! represented tensor is unchanged by the padding.
inline TTTensor zero_padded_tt(const TTTensor& tt, const std::vector<Index>& padded_ranks) {
    const Index d = tt.order();
    std::vector<Core> cores;
    for (Index k = 0; k < d; ++k) {
        const Core& c = tt.core(k);
        const Index rl = k == 0 ? 1 : padded_ranks[static_cast<std::size_t>(k - 1)];
        const Index rr = k == d - 1 ? 1 : padded_ranks[static_cast<std::size_t>(k)];
        Core padded(rl, c.n(), rr);
        for (Index g = 0; g < c.r_right(); ++g)
            for (Index j = 0; j < c.n(); ++j)
                for (Index i = 0; i < c.r_left(); ++i) padded(i, j, g) = c(i, j, g);
        cores.push_back(std::move(padded));
    }
    return TTTensor(std::move(cores));
}

//! Deterministic pseudo-random TT instance with bounded dense size.
inline TTTensor random_instance(std::uint64_t seed, Index max_d = 6, Index max_n = 20,
                                Index max_r = 6, Index max_entries = 1000000) {
    ttround::GaussianStream pick(ttround::derive_seed(seed, 77));
    auto uniform_int = [&](Index lo, Index hi) {
        const double u = std::abs(pick.next());
        return lo + static_cast<Index>(std::fmod(u * 1000.0, static_cast<double>(hi - lo + 1)));
    };
    const Index d = uniform_int(2, max_d);
    std::vector<Index> modes(static_cast<std::size_t>(d));
    Index total = 1;
    for (auto& n : modes) {
        Index cap = max_n;
        while (cap > 2 && total * cap > max_entries) --cap;
        n = uniform_int(2, std::max<Index>(2, cap));
        total *= n;
    }
    std::vector<Index> ranks(static_cast<std::size_t>(d + 1), 1);
    for (std::size_t k = 1; k < ranks.size() - 1; ++k) ranks[k] = uniform_int(1, max_r);
    return ttround::random_gaussian_tt(modes, ranks, ttround::derive_seed(seed, 78));
}

} // namespace oracle
