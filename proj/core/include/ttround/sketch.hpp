#pragma once

#include <vector>

#include "ttround/rng.hpp"
#include "ttround/tensor.hpp"

namespace ttround {

//! Gaussian sketching factors Omega_t..Omega_d, one n_k x cols matrix per
//! mode, all sharing the column count. Entries are N(0,1); the estimator
//! scaling 1/sqrt(cols) lives with the consumers.
struct GaussianFactorSet {
    Index start_mode = 2; // 1-based mode index of factors.front()
    std::vector<Matrix> factors;

    Index cols() const { return factors.empty() ? 0 : factors.front().cols(); }
    const Matrix& at_mode(Index k) const {
        return factors[static_cast<std::size_t>(k - start_mode)];
    }
    Matrix& at_mode(Index k) { return factors[static_cast<std::size_t>(k - start_mode)]; }
};

//! Draw factors for modes start_mode..d of tt.
GaussianFactorSet draw_gaussian_factors(const TTTensor& tt, Index start_mode, Index cols,
                                        GaussianStream& stream);

//! Append `extra` fresh columns to every factor.
void append_gaussian_columns(GaussianFactorSet& set, Index extra, GaussianStream& stream);

//! Partial contraction matrices W_t..W_d of a TT tensor against a KRP of
//! Gaussian factors: W_k = H(X_{k:d}) (Omega_d KRP ... KRP Omega_k), of
//! shape r_{k-1} x cols. Columns are appendable; after per-mode appends the
//! matrices below the append mode keep their old width.
struct PartialContractionSet {
    Index start_mode = 2;
    std::vector<Matrix> w;

    Index cols() const { return w.empty() ? 0 : w.front().cols(); }
    const Matrix& at_mode(Index k) const { return w[static_cast<std::size_t>(k - start_mode)]; }
    Matrix& at_mode(Index k) { return w[static_cast<std::size_t>(k - start_mode)]; }
};

//! Right-to-left KRP contraction sweep (MTTKRP evaluation order, one KRP
//! column at a time; never materializes the full Khatri-Rao matrix).
//! Leading cost 2*(d-t)*n*r^2*cols flops.
PartialContractionSet krp_partial_contractions_rl(const TTTensor& tt,
                                                  const GaussianFactorSet& factors);

//! Contract fresh factor columns (factors.start_mode..d) and append the new
//! columns to w.at_mode(k) for every k >= factors.start_mode.
void append_krp_contractions(PartialContractionSet& set, const TTTensor& tt,
                             const GaussianFactorSet& fresh);

//! TT-structured partial contractions (two-step recurrence
//! Z_k = X_k x_3 W_k, W_{k-1} = H(Z_k) H(R_k)^T). Returns W_1..W_{d-1} with
//! W_k = H(X_{k+1:d}) H(R_{k+1:d})^T of shape r_k x l_k, at index k-1.
std::vector<Matrix> tt_partial_contractions_rl(const TTTensor& x, const TTTensor& r);

//! Randomized Frobenius norm estimate ||V(X_1) W_2||_F / sqrt(width) with
//! fresh factors drawn from `seed`. The squared estimate is unbiased for
//! ||X||^2.
double estimate_norm_krp(const TTTensor& tt, Index width, std::uint64_t seed);

//! ||S||_F / sqrt(block): unbiased (after squaring) estimate of the
//! Frobenius norm of the sketched matrix.
double residual_norm_estimate(const Eigen::Ref<const Matrix>& s, Index block);

} // namespace ttround
