#pragma once

#include <optional>
#include <vector>

#include "ttround/sketch.hpp"

namespace ttround {

//! Fixed-rank randomize-then-orthogonalize rounding with KRP sketches:
//! one right-to-left partial contraction, then a left-to-right sweep of
//! sketch / thin QR / core update. Output cores 1..d-1 are left-orthonormal
//! and ranks are min(l_k, feasible shape caps).
TTTensor round_fixed_krp(const TTTensor& tt, const std::vector<Index>& target_ranks,
                         std::uint64_t seed);

//! Everything governing an adaptive rounding run.
struct AdaptiveConfig {
    double tolerance = 1e-6;   // relative, in (0,1)
    double f_init = 0.1;       // initial block fraction, in (0,1)
    double f_inc = 0.05;       // increment block fraction, in (0,1)
    std::uint64_t seed = 0;
    std::optional<double> known_norm;                 // absent: sketch estimate
    std::optional<std::vector<Index>> max_rank_cap;   // optional per-mode cap
};

//! Adaptive-rank randomize-then-orthogonalize rounding with KRP sketches and
//! residual-sketch stopping. Output is left-orthogonal except the last core;
//! ||X - Y|| <= eps ||X|| with high probability. Hitting the maximum
//! feasible rank at a mode is lossless there, not an error.
TTTensor round_adaptive_krp(const TTTensor& tt, const AdaptiveConfig& cfg);

//! Residual sketch for basis expansion: draws fresh factor columns when
//! w lacks cols(q)+b of them (appending to every affected W_j), then returns
//! S = Z * W_{k+1}(:, cols(q)+1 : cols(q)+b) projected against q.
//! k is the 1-based mode index; z is the current vertical unfolding.
Matrix generate_residual_sketch(const TTTensor& tt, const Eigen::Ref<const Matrix>& z,
                                const Eigen::Ref<const Matrix>& q, PartialContractionSet& w,
                                Index k, Index b, GaussianStream& stream);

//! Reverse truncated-SVD sweep (k = d down to 2) with per-mode threshold tau
//! over a tensor that is left-orthogonal except its last core. Ranks never
//! increase; the extra error is at most sqrt(d-1)*tau. Throws
//! NotLeftOrthogonal when the input violates orthogonality by >= 1e-8.
TTTensor compression_pass(const TTTensor& left_orthogonal, double tau);

//! Fixed-rank randomize-then-orthogonalize with a Gaussian TT sketch tensor
//! of ranks {l_k} (TT-structured partial contractions).
TTTensor round_rand_orth_tt(const TTTensor& tt, const std::vector<Index>& target_ranks,
                            std::uint64_t seed);

//! Orthogonalize-then-randomize, fixed-rank mode: right-to-left
//! orthogonalization, then a per-mode randomized range finder at rank l_k.
TTTensor round_orth_rand(const TTTensor& tt, const std::vector<Index>& target_ranks,
                         std::uint64_t seed);

//! Orthogonalize-then-randomize, adaptive mode: blocked adaptive range
//! finder per mode with the residual norm tracked exactly, stopping at
//! tau = eps*||X||/sqrt(d-1). Guarantees ||X - Y|| <= eps ||X||.
TTTensor round_orth_rand(const TTTensor& tt, double eps, std::uint64_t seed);

} // namespace ttround
