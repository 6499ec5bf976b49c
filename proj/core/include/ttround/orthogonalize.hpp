#pragma once

#include <variant>
#include <vector>

#include "ttround/tensor.hpp"

namespace ttround {

enum class Direction { RightToLeft, LeftToRight };

//! Orthogonalization sweep. RightToLeft leaves every horizontal unfolding
//! with orthonormal rows except the first core; LeftToRight leaves every
//! vertical unfolding with orthonormal columns except the last core. The
//! represented tensor is unchanged; thin QR may shrink ranks to the
//! unfolding dimensions.
TTTensor orthogonalize(const TTTensor& tt, Direction direction);

//! Truncation rule for an SVD: either an absolute tail tolerance tau or a
//! rank cap.
struct TruncationRule {
    static TruncationRule tolerance(double tau);
    static TruncationRule rank(Index l);

    bool is_tolerance() const noexcept { return std::holds_alternative<double>(rule_); }
    double tau() const { return std::get<double>(rule_); }
    Index max_rank() const { return std::get<Index>(rule_); }

private:
    std::variant<double, Index> rule_;
};

struct TruncatedSVD {
    Matrix u;   // m x rank
    Vector s;   // rank
    Matrix v;   // n x rank
    Index rank; // >= 1
};

//! Truncated SVD. Tolerance rule keeps the smallest rank whose discarded
//! tail satisfies sqrt(sum_{j>s} sigma_j^2) <= tau; singular values at
//! machine-noise level count as zero. Rank rule caps at min(l, #sigma).
//! At least one singular triplet is always kept.
TruncatedSVD truncated_svd(const Eigen::Ref<const Matrix>& m, const TruncationRule& rule);

//! Deterministic TT rounding, fixed-precision mode: right-to-left
//! orthogonalization, then a left-to-right truncated-SVD sweep with per-mode
//! threshold tau = eps*||X||/sqrt(d-1). Guarantees ||X - Y|| <= eps*||X||.
//! Output is left-orthogonal except the last core.
TTTensor round_deterministic(const TTTensor& tt, double eps);

//! Deterministic TT rounding, fixed-rank mode: target ranks l_1..l_{d-1};
//! requests beyond the feasible unfolding dimensions are silently capped.
TTTensor round_deterministic(const TTTensor& tt, const std::vector<Index>& target_ranks);

} // namespace ttround
