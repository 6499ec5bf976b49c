#pragma once

#include <vector>

#include "ttround/sum_round.hpp"

namespace ttround {

//! Linear operator sum_i A_{i,1} (x) ... (x) A_{i,d} acting on d-way TT
//! tensors; every A_{i,k} is square of size n_k.
struct KroneckerSumOperator {
    std::vector<std::vector<Matrix>> terms; // terms[i][k-1] = A_{i,k}

    static KroneckerSumOperator of(std::vector<std::vector<Matrix>> terms);

    Index num_terms() const { return static_cast<Index>(terms.size()); }
    Index order() const { return static_cast<Index>(terms.front().size()); }
    std::vector<Index> mode_sizes() const;
};

struct CookieProblem {
    KroneckerSumOperator op;
    TTTensor rhs;
};

//! Parametric diffusion ("cookie") problem on the unit square, 5-point
//! finite differences with homogeneous Dirichlet boundary. num_param_modes
//! discs of radius 0.35/ceil(sqrt(p)) sit on a ceil(sqrt(p)) grid of
//! centers; each disc carries one parameter mode with num_param_samples
//! coefficients linearly spaced in [rho_min, rho_max]. The first tensor
//! mode is the flattened grid_size^2 spatial grid. num_param_modes == 0
//! degenerates to the plain Poisson system. The right-hand side is the
//! rank-1 TT of the constant source f = 1.
CookieProblem build_cookie_problem(Index num_param_modes, Index grid_size,
                                   Index num_param_samples, double rho_min, double rho_max);

//! Apply the operator term-wise: the result is the s-term sum whose i-th
//! term is x with A_{i,k} applied along mode k (ranks preserved per term).
TTSum apply_operator(const KroneckerSumOperator& op, const TTTensor& x);

enum class RoundingStrategy { Deterministic, RandOrthTT, AdaptiveKRPSum };

struct GMRESConfig {
    double rel_tolerance = 1e-8;
    Index max_iterations = 200;
    RoundingStrategy strategy = RoundingStrategy::Deterministic;
    double rounding_tolerance = 0.0; // 0: defaults to 0.1 * rel_tolerance
    std::uint64_t seed = 0;
    //! Recompute the true residual (and iterate) every iteration; when off,
    //! only the Arnoldi estimate is tracked and the iterate is formed once.
    bool track_true_residual = true;
    //! Left-precondition with the mean-field spatial operator
    //! M = sum_i (prod_{k>=2} mean diag A_{i,k}) A_{i,1} applied along mode 1.
    //! Without it the unpreconditioned Krylov vectors of the cookie operator
    //! are not low-rank and iteration counts blow up; reported residuals stay
    //! those of the original system.
    bool mean_field_preconditioner = true;
};

struct GMRESResult {
    TTTensor solution;
    //! Arnoldi least-squares residual estimate per iteration (relative).
    std::vector<double> residual_history;
    //! True residual ||b - A x_j|| / ||b|| recomputed in TT arithmetic.
    std::vector<double> true_residual_history;
    //! Max TT rank of the Krylov vector produced at each iteration.
    std::vector<Index> max_rank_history;
    //! Cumulative seconds spent in Sum+Round, sampled per iteration.
    std::vector<double> rounding_seconds_history;
    double rounding_seconds = 0.0;
    Index iterations = 0;
    bool converged = false;
};

//! TT-GMRES: Arnoldi with modified Gram-Schmidt in TT arithmetic; every
//! operator application and linear combination is followed by the configured
//! Sum+Round. Throws Breakdown on a vanishing Arnoldi vector before
//! convergence.
GMRESResult tt_gmres(const KroneckerSumOperator& op, const TTTensor& rhs,
                     const GMRESConfig& cfg);

} // namespace ttround
