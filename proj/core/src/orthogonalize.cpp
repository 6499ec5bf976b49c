#include "ttround/orthogonalize.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "internal.hpp"

namespace ttround {

namespace {

std::vector<Core> orthogonalize_rl_cores(const TTTensor& tt) {
    std::vector<Core> cores = tt.cores();
    const Index d = tt.order();
    for (Index k = d - 1; k >= 1; --k) {
        const Core& c = cores[static_cast<std::size_t>(k)];
        auto [q, r] = linalg::thin_qr(c.horizontal().transpose());
        // H(Y_k) = Q^T has orthonormal rows; R^T folds into the left neighbor
        cores[static_cast<std::size_t>(k)] =
            Core::from_horizontal(c.n(), c.r_right(), q.transpose());
        cores[static_cast<std::size_t>(k - 1)] =
            detail::contract_third(cores[static_cast<std::size_t>(k - 1)], r.transpose());
    }
    return cores;
}

std::vector<Core> orthogonalize_lr_cores(const TTTensor& tt) {
    std::vector<Core> cores = tt.cores();
    const Index d = tt.order();
    for (Index k = 0; k + 1 < d; ++k) {
        const Core& c = cores[static_cast<std::size_t>(k)];
        auto [q, r] = linalg::thin_qr(c.vertical());
        cores[static_cast<std::size_t>(k)] = Core::from_vertical(c.r_left(), c.n(), q);
        cores[static_cast<std::size_t>(k + 1)] =
            detail::contract_first(cores[static_cast<std::size_t>(k + 1)], r);
    }
    return cores;
}

//! Compression sweep over right-orthogonal cores: per mode
//! QR of the vertical unfolding, truncated SVD of the small triangle, fold
//! Sigma V^T into the next core.
TTTensor compress_sweep(std::vector<Core> cores,
                        const std::function<TruncationRule(Index)>& rule_at) {
    const Index d = static_cast<Index>(cores.size());
    for (Index k = 0; k + 1 < d; ++k) {
        const Core& c = cores[static_cast<std::size_t>(k)];
        auto [q, r] = linalg::thin_qr(c.vertical());
        auto tsvd = truncated_svd(r, rule_at(k));
        cores[static_cast<std::size_t>(k)] =
            Core::from_vertical(c.r_left(), c.n(), linalg::mul(q, tsvd.u));
        Matrix sv = tsvd.s.asDiagonal() * tsvd.v.transpose();
        cores[static_cast<std::size_t>(k + 1)] =
            detail::contract_first(cores[static_cast<std::size_t>(k + 1)], sv);
    }
    return TTTensor(std::move(cores));
}

} // namespace

TTTensor orthogonalize(const TTTensor& tt, Direction direction) {
    return TTTensor(direction == Direction::RightToLeft ? orthogonalize_rl_cores(tt)
                                                        : orthogonalize_lr_cores(tt));
}

double norm_exact(const TTTensor& tt) {
    if (tt.order() == 1) return tt.core(0).vertical().norm();
    auto cores = orthogonalize_rl_cores(tt);
    return cores.front().vertical().norm();
}

TruncationRule TruncationRule::tolerance(double tau) {
    if (tau < 0) fail(Errc::InvalidArgument, "truncation tolerance must be >= 0");
    TruncationRule r;
    r.rule_ = tau;
    return r;
}

TruncationRule TruncationRule::rank(Index l) {
    if (l < 1) fail(Errc::InvalidArgument, "truncation rank must be >= 1");
    TruncationRule r;
    r.rule_ = l;
    return r;
}

TruncatedSVD truncated_svd(const Eigen::Ref<const Matrix>& m, const TruncationRule& rule) {
    auto dec = linalg::svd(m);
    const Index count = dec.s.size();
    Index keep;
    if (rule.is_tolerance()) {
        // singular values at machine-noise level count as zero
        const double floor = count > 0 ? dec.s(0) * std::max(m.rows(), m.cols()) *
                                             std::numeric_limits<double>::epsilon()
                                       : 0.0;
        const double tau = std::max(rule.tau(), floor);
        double tail = 0.0;
        keep = count;
        while (keep > 1) {
            const double candidate = tail + dec.s(keep - 1) * dec.s(keep - 1);
            if (std::sqrt(candidate) > tau) break;
            tail = candidate;
            --keep;
        }
    } else {
        keep = std::min(rule.max_rank(), count);
    }
    keep = std::max<Index>(keep, 1);
    TruncatedSVD out;
    out.u = dec.u.leftCols(keep);
    out.s = dec.s.head(keep);
    out.v = dec.v.leftCols(keep);
    out.rank = keep;
    return out;
}

TTTensor round_deterministic(const TTTensor& tt, double eps) {
    if (eps < 0) fail(Errc::InvalidArgument, "rounding tolerance must be >= 0");
    const Index d = tt.order();
    if (d == 1) return tt;
    auto cores = orthogonalize_rl_cores(tt);
    // per-mode budget tau = eps*||X||/sqrt(d-1); the norm sits in the first core
    const double nrm = cores.front().vertical().norm();
    const double tau = eps * nrm / std::sqrt(static_cast<double>(d - 1));
    auto rule = TruncationRule::tolerance(tau);
    return compress_sweep(std::move(cores), [&](Index) { return rule; });
}

TTTensor round_deterministic(const TTTensor& tt, const std::vector<Index>& target_ranks) {
    const Index d = tt.order();
    if (static_cast<Index>(target_ranks.size()) != d - 1)
        fail(Errc::InvalidRanks, "expected d-1 target ranks");
    for (Index l : target_ranks)
        if (l < 1) fail(Errc::InvalidRanks, "target ranks must be >= 1");
    if (d == 1) return tt;
    auto cores = orthogonalize_rl_cores(tt);
    return compress_sweep(std::move(cores), [&](Index k) {
        return TruncationRule::rank(target_ranks[static_cast<std::size_t>(k)]);
    });
}

} // namespace ttround
