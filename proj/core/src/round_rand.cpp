#include "ttround/round_rand.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "internal.hpp"
#include "ttround/orthogonalize.hpp"

namespace ttround {

namespace {

std::vector<Index> checked_targets(const TTTensor& tt, const std::vector<Index>& target_ranks) {
    if (static_cast<Index>(target_ranks.size()) != tt.order() - 1)
        fail(Errc::InvalidRanks, "expected d-1 target ranks");
    for (Index l : target_ranks)
        if (l < 1) fail(Errc::InvalidRanks, "target ranks must be >= 1");
    return target_ranks;
}

//! Left-to-right randomize-then-orthogonalize sweep. `sketch(k, v, l)` must
//! return the sketched matrix of the current vertical unfolding `v` at mode
//! k (1-based) with l columns. Requested ranks are capped at the unfolding
//! dimensions.
TTTensor rand_orth_sweep(const TTTensor& tt, const std::vector<Index>& target_ranks,
                         const std::function<Matrix(Index, const Matrix&, Index)>& sketch) {
    const Index d = tt.order();
    std::vector<Core> out;
    out.reserve(static_cast<std::size_t>(d));
    Core work = tt.core(0);
    for (Index k = 1; k < d; ++k) {
        const Matrix v = work.vertical();
        const Index l_eff = std::min({target_ranks[static_cast<std::size_t>(k - 1)], v.rows(),
                                      v.cols()});
        Matrix s = sketch(k, v, l_eff);
        Matrix q = linalg::thin_qr_q(s);
        Matrix m = linalg::tmul(q, v); // l_eff x r_k
        out.push_back(Core::from_vertical(work.r_left(), work.n(), q));
        work = detail::contract_first(tt.core(k), m);
    }
    out.push_back(std::move(work));
    return TTTensor(std::move(out));
}

Index ceil_fraction(double f, Index n) {
    return std::max<Index>(1, static_cast<Index>(std::ceil(f * static_cast<double>(n))));
}

} // namespace

TTTensor round_fixed_krp(const TTTensor& tt, const std::vector<Index>& target_ranks,
                         std::uint64_t seed) {
    auto targets = checked_targets(tt, target_ranks);
    const Index d = tt.order();
    if (d == 1) return tt;
    const Index width = *std::max_element(targets.begin(), targets.end());
    GaussianStream stream(seed);
    auto factors = draw_gaussian_factors(tt, 2, width, stream);
    auto w = krp_partial_contractions_rl(tt, factors);
    return rand_orth_sweep(tt, targets, [&](Index k, const Matrix& v, Index l) {
        return linalg::mul(v, w.at_mode(k + 1).leftCols(l));
    });
}

TTTensor round_rand_orth_tt(const TTTensor& tt, const std::vector<Index>& target_ranks,
                            std::uint64_t seed) {
    auto targets = checked_targets(tt, target_ranks);
    const Index d = tt.order();
    if (d == 1) return tt;
    std::vector<Index> sketch_ranks(targets.size() + 2, 1);
    for (std::size_t k = 0; k < targets.size(); ++k) sketch_ranks[k + 1] = targets[k];
    TTTensor r = random_gaussian_tt(tt.mode_sizes(), sketch_ranks, seed);
    auto w = tt_partial_contractions_rl(tt, r);
    return rand_orth_sweep(tt, targets, [&](Index k, const Matrix& v, Index l) {
        return linalg::mul(v, w[static_cast<std::size_t>(k - 1)].leftCols(l));
    });
}

Matrix generate_residual_sketch(const TTTensor& tt, const Eigen::Ref<const Matrix>& z,
                                const Eigen::Ref<const Matrix>& q, PartialContractionSet& w,
                                Index k, Index b, GaussianStream& stream) {
    if (b < 1) fail(Errc::InvalidArgument, "sketch block size must be >= 1");
    if (k < 1 || k >= tt.order()) fail(Errc::InvalidArgument, "core index out of range");
    const Index used = q.cols();
    const Index have = w.at_mode(k + 1).cols();
    if (have < used + b) {
        auto fresh = draw_gaussian_factors(tt, k + 1, used + b - have, stream);
        append_krp_contractions(w, tt, fresh);
    }
    Matrix s = linalg::mul(z, w.at_mode(k + 1).middleCols(used, b));
    if (used > 0) s -= linalg::mul(q, linalg::tmul(q, s));
    return s;
}

TTTensor round_adaptive_krp(const TTTensor& tt, const AdaptiveConfig& cfg) {
    if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1.0))
        fail(Errc::InvalidArgument, "adaptive tolerance must lie in (0,1)");
    if (!(cfg.f_init > 0.0 && cfg.f_init < 1.0) || !(cfg.f_inc > 0.0 && cfg.f_inc < 1.0))
        fail(Errc::InvalidArgument, "block fractions must lie in (0,1)");
    const Index d = tt.order();
    if (d == 1) return tt;

    GaussianStream stream(cfg.seed);
    const Index width = ceil_fraction(cfg.f_init, tt.max_rank());
    auto factors = draw_gaussian_factors(tt, 2, width, stream);
    auto w = krp_partial_contractions_rl(tt, factors);

    double nrm;
    if (cfg.known_norm) {
        nrm = *cfg.known_norm;
    } else {
        // reuse the initial contraction for the norm estimate
        Matrix s0 = linalg::mul(tt.core(0).vertical(), w.at_mode(2));
        nrm = s0.norm() / std::sqrt(static_cast<double>(width));
    }
    const double tau = cfg.tolerance * nrm / std::sqrt(static_cast<double>(d - 1));

    std::vector<Core> out;
    out.reserve(static_cast<std::size_t>(d));
    Core work = tt.core(0);
    for (Index k = 1; k < d; ++k) {
        const Matrix v = work.vertical();
        Index rbar = std::min(v.rows(), v.cols());
        if (cfg.max_rank_cap)
            rbar = std::min(rbar, (*cfg.max_rank_cap)[static_cast<std::size_t>(k - 1)]);

        const Index b_init = std::min(ceil_fraction(cfg.f_init, rbar), rbar);
        Matrix q = linalg::thin_qr_q(linalg::mul(v, w.at_mode(k + 1).leftCols(b_init)));
        Matrix h_next = linalg::mul(linalg::tmul(q, v), tt.core(k).horizontal());

        const Index b_inc = ceil_fraction(cfg.f_inc, rbar);
        while (q.cols() < rbar) {
            Matrix s = generate_residual_sketch(tt, v, q, w, k, b_inc, stream);
            if (residual_norm_estimate(s, b_inc) <= tau) break;
            const Index grow = std::min(b_inc, rbar - q.cols());
            Matrix q_new = linalg::thin_qr_q(s.leftCols(grow));
            // re-orthogonalize the new directions against the current basis
            q_new = linalg::thin_qr_q(q_new - linalg::mul(q, linalg::tmul(q, q_new)));
            Matrix m_new = linalg::tmul(q_new, v);
            Matrix h_grown(h_next.rows() + q_new.cols(), h_next.cols());
            h_grown << h_next, linalg::mul(m_new, tt.core(k).horizontal());
            h_next = std::move(h_grown);
            Matrix q_grown(q.rows(), q.cols() + q_new.cols());
            q_grown << q, q_new;
            q = std::move(q_grown);
        }
        out.push_back(Core::from_vertical(work.r_left(), work.n(), q));
        work = Core::from_horizontal(tt.core(k).n(), tt.core(k).r_right(), h_next);
    }
    out.push_back(std::move(work));
    return TTTensor(std::move(out));
}

TTTensor compression_pass(const TTTensor& left_orthogonal, double tau) {
    if (tau < 0) fail(Errc::InvalidArgument, "compression threshold must be >= 0");
    const Index d = left_orthogonal.order();
    for (Index k = 0; k + 1 < d; ++k) {
        const Matrix v = left_orthogonal.core(k).vertical();
        const double defect = (linalg::tmul(v, v) - Matrix::Identity(v.cols(), v.cols())).norm();
        if (defect >= 1e-8)
            fail(Errc::NotLeftOrthogonal, "compression pass requires a left-orthogonal input");
    }
    if (d == 1) return left_orthogonal;

    std::vector<Core> cores = left_orthogonal.cores();
    for (Index k = d - 1; k >= 1; --k) {
        const Core& c = cores[static_cast<std::size_t>(k)];
        auto [q, r] = linalg::thin_qr(c.horizontal().transpose());
        auto tsvd = truncated_svd(r.transpose(), TruncationRule::tolerance(tau));
        // H(Y_k) = U S V^T Q^T; keep (Q V_s)^T as the right-orthogonal core
        cores[static_cast<std::size_t>(k)] =
            Core::from_horizontal(c.n(), c.r_right(), linalg::mul(q, tsvd.v).transpose());
        Matrix us = tsvd.u * tsvd.s.asDiagonal();
        cores[static_cast<std::size_t>(k - 1)] =
            detail::contract_third(cores[static_cast<std::size_t>(k - 1)], us);
    }
    return TTTensor(std::move(cores));
}

TTTensor round_orth_rand(const TTTensor& tt, const std::vector<Index>& target_ranks,
                         std::uint64_t seed) {
    auto targets = checked_targets(tt, target_ranks);
    const Index d = tt.order();
    if (d == 1) return tt;
    TTTensor y = orthogonalize(tt, Direction::RightToLeft);
    GaussianStream stream(seed);
    std::vector<Core> cores = y.cores();
    for (Index k = 1; k < d; ++k) {
        const Core& c = cores[static_cast<std::size_t>(k - 1)];
        const Matrix v = c.vertical();
        const Index l_eff = std::min({targets[static_cast<std::size_t>(k - 1)], v.rows(), v.cols()});
        Matrix omega = stream.matrix(v.cols(), l_eff);
        Matrix q = linalg::thin_qr_q(linalg::mul(v, omega));
        Matrix m = linalg::tmul(q, v);
        cores[static_cast<std::size_t>(k - 1)] = Core::from_vertical(c.r_left(), c.n(), q);
        cores[static_cast<std::size_t>(k)] =
            detail::contract_first(cores[static_cast<std::size_t>(k)], m);
    }
    return TTTensor(std::move(cores));
}

TTTensor round_orth_rand(const TTTensor& tt, double eps, std::uint64_t seed) {
    if (eps < 0) fail(Errc::InvalidArgument, "tolerance must be >= 0");
    const Index d = tt.order();
    if (d == 1) return tt;
    constexpr double f_init = 0.1, f_inc = 0.05;
    TTTensor y = orthogonalize(tt, Direction::RightToLeft);
    const double nrm = y.core(0).vertical().norm();
    const double tau = eps * nrm / std::sqrt(static_cast<double>(d - 1));
    GaussianStream stream(seed);
    std::vector<Core> cores = y.cores();
    for (Index k = 1; k < d; ++k) {
        const Core& c = cores[static_cast<std::size_t>(k - 1)];
        const Matrix v = c.vertical();
        const Index rbar = std::min(v.rows(), v.cols());
        const Index b_init = std::min(ceil_fraction(f_init, rbar), rbar);
        const Index b_inc = ceil_fraction(f_inc, rbar);

        // adaptive range finder with the residual matrix kept explicitly:
        // its Frobenius norm is the exact per-mode error
        Matrix q = linalg::thin_qr_q(linalg::mul(v, stream.matrix(v.cols(), b_init)));
        Matrix resid = v - linalg::mul(q, linalg::tmul(q, v));
        while (resid.norm() > tau && q.cols() < rbar) {
            const Index grow = std::min(b_inc, rbar - q.cols());
            Matrix s = linalg::mul(resid, stream.matrix(v.cols(), grow));
            Matrix q_new = linalg::thin_qr_q(s);
            q_new = linalg::thin_qr_q(q_new - linalg::mul(q, linalg::tmul(q, q_new)));
            Matrix q_grown(q.rows(), q.cols() + q_new.cols());
            q_grown << q, q_new;
            q = std::move(q_grown);
            resid -= linalg::mul(q_new, linalg::tmul(q_new, resid));
        }
        Matrix m = linalg::tmul(q, v);
        cores[static_cast<std::size_t>(k - 1)] = Core::from_vertical(c.r_left(), c.n(), q);
        cores[static_cast<std::size_t>(k)] =
            detail::contract_first(cores[static_cast<std::size_t>(k)], m);
    }
    return TTTensor(std::move(cores));
}

} // namespace ttround
