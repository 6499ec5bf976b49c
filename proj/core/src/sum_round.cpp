#include "ttround/sum_round.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "internal.hpp"

namespace ttround {

TTSum TTSum::of(std::vector<TTTensor> terms) {
    if (terms.empty()) fail(Errc::EmptyTermList, "sum of no TT terms");
    const auto modes = terms.front().mode_sizes();
    for (const auto& t : terms)
        if (t.mode_sizes() != modes) fail(Errc::ModeSizeMismatch, "sum terms mode sizes differ");
    TTSum s;
    s.terms = std::move(terms);
    return s;
}

Matrix residual_sketch_sum(const std::vector<TTTensor>& terms, const Eigen::Ref<const Matrix>& z,
                           const Eigen::Ref<const Matrix>& q,
                           std::vector<PartialContractionSet>& w, Index k, Index b,
                           GaussianStream& stream) {
    if (terms.empty()) fail(Errc::EmptyTermList, "residual sketch of no terms");
    if (b < 1) fail(Errc::InvalidArgument, "sketch block size must be >= 1");
    if (k < 1 || k >= terms.front().order())
        fail(Errc::InvalidArgument, "core index out of range");
    const Index used = q.cols();
    const Index have = w.front().at_mode(k + 1).cols();
    if (have < used + b) {
        // one shared fresh draw so that the sketch of the sum stays the sum
        // of the per-term sketches
        auto fresh = draw_gaussian_factors(terms.front(), k + 1, used + b - have, stream);
        for (std::size_t i = 0; i < terms.size(); ++i)
            append_krp_contractions(w[i], terms[i], fresh);
    }
    Index expected_cols = 0;
    for (const auto& t : terms) expected_cols += t.rank(k);
    if (z.cols() != expected_cols)
        fail(Errc::ModeSizeMismatch, "working unfolding width mismatch");

    Matrix s = Matrix::Zero(z.rows(), b);
    Index col = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Index r_k = terms[i].rank(k);
        s += linalg::mul(z.middleCols(col, r_k), w[i].at_mode(k + 1).middleCols(used, b));
        col += r_k;
    }
    if (used > 0) s -= linalg::mul(q, linalg::tmul(q, s));
    return s;
}

TTTensor round_sum_adaptive_krp(const TTSum& sum, double eps, double f_inc, std::uint64_t seed) {
    if (sum.terms.empty()) fail(Errc::EmptyTermList, "sum of no TT terms");
    if (!(eps > 0.0)) fail(Errc::InvalidArgument, "tolerance must be > 0");
    if (!(f_inc > 0.0 && f_inc < 1.0)) fail(Errc::InvalidArgument, "f_inc must lie in (0,1)");
    const auto& terms = sum.terms;
    const Index s_count = static_cast<Index>(terms.size());
    const Index d = sum.order();
    const auto modes = sum.mode_sizes();

    if (d == 1) {
        // single mode: the sum is exact at rank one
        Core c(1, modes[0], 1);
        for (const auto& t : terms)
            for (Index j = 0; j < modes[0]; ++j) c(0, j, 0) += t.core(0)(0, j, 0);
        return TTTensor({std::move(c)});
    }

    GaussianStream stream(seed);
    Index width = 1;
    for (const auto& t : terms) width = std::max(width, t.max_rank());

    auto factors = draw_gaussian_factors(terms.front(), 2, width, stream);
    std::vector<PartialContractionSet> w;
    w.reserve(terms.size());
    for (const auto& t : terms) w.push_back(krp_partial_contractions_rl(t, factors));

    // sketch-based norm estimate of the sum; per-term estimates feed the
    // cancellation guard
    Matrix s0 = Matrix::Zero(modes[0], width);
    double max_term_estimate = 0.0;
    for (Index i = 0; i < s_count; ++i) {
        Matrix si = linalg::mul(terms[static_cast<std::size_t>(i)].core(0).vertical(),
                                w[static_cast<std::size_t>(i)].at_mode(2));
        max_term_estimate =
            std::max(max_term_estimate, si.norm() / std::sqrt(static_cast<double>(width)));
        s0 += si;
    }
    const double nrm = s0.norm() / std::sqrt(static_cast<double>(width));
    if (nrm < 1e3 * std::numeric_limits<double>::epsilon() * max_term_estimate)
        return TTTensor::zero(modes);
    const double tau = eps * nrm / std::sqrt(static_cast<double>(d - 1));

    // working state: the vertical unfolding of the projected formal-sum
    // core, one column block of width r_k^{(i)} per term
    Matrix v(modes[0], 0);
    for (const auto& t : terms) {
        Matrix grown(modes[0], v.cols() + t.rank(1));
        grown << v, t.core(0).vertical();
        v = std::move(grown);
    }

    std::vector<Core> out;
    out.reserve(static_cast<std::size_t>(d));
    Index l_prev = 1;
    for (Index k = 1; k < d; ++k) {
        const Index rbar = std::min(v.rows(), v.cols());
        Index b_init = 1;
        for (const auto& t : terms) b_init = std::max(b_init, t.rank(k));
        b_init = std::min(b_init, rbar);

        // initial sketch from the shared leading factor columns
        Matrix s = Matrix::Zero(v.rows(), b_init);
        Index col = 0;
        for (Index i = 0; i < s_count; ++i) {
            const Index r_k = terms[static_cast<std::size_t>(i)].rank(k);
            s += linalg::mul(v.middleCols(col, r_k),
                             w[static_cast<std::size_t>(i)].at_mode(k + 1).leftCols(b_init));
            col += r_k;
        }
        Matrix q = linalg::thin_qr_q(s);
        Matrix m = linalg::tmul(q, v);

        const Index b_inc =
            std::max<Index>(1, static_cast<Index>(std::ceil(f_inc * static_cast<double>(rbar))));
        while (q.cols() < rbar) {
            Matrix sk = residual_sketch_sum(terms, v, q, w, k, b_inc, stream);
            if (residual_norm_estimate(sk, b_inc) <= tau) break;
            const Index grow = std::min(b_inc, rbar - q.cols());
            Matrix q_new = linalg::thin_qr_q(sk.leftCols(grow));
            q_new = linalg::thin_qr_q(q_new - linalg::mul(q, linalg::tmul(q, q_new)));
            Matrix m_grown(m.rows() + q_new.cols(), m.cols());
            m_grown << m, linalg::tmul(q_new, v);
            m = std::move(m_grown);
            Matrix q_grown(q.rows(), q.cols() + q_new.cols());
            q_grown << q, q_new;
            q = std::move(q_grown);
        }

        out.push_back(Core::from_vertical(l_prev, modes[static_cast<std::size_t>(k - 1)], q));
        l_prev = q.cols();

        if (k == d - 1) {
            // right boundary: the per-term projections add up
            Matrix h_last = Matrix::Zero(l_prev, modes[static_cast<std::size_t>(k)]);
            Index c0 = 0;
            for (Index i = 0; i < s_count; ++i) {
                const auto& t = terms[static_cast<std::size_t>(i)];
                h_last += linalg::mul(m.middleCols(c0, t.rank(k)), t.core(k).horizontal());
                c0 += t.rank(k);
            }
            out.push_back(Core::from_horizontal(modes[static_cast<std::size_t>(k)], 1, h_last));
        } else {
            Index next_cols = 0;
            for (const auto& t : terms) next_cols += t.rank(k + 1);
            Matrix v_next(l_prev * modes[static_cast<std::size_t>(k)], next_cols);
            Index c0 = 0, out_col = 0;
            for (Index i = 0; i < s_count; ++i) {
                const auto& t = terms[static_cast<std::size_t>(i)];
                Matrix h_i = linalg::mul(m.middleCols(c0, t.rank(k)), t.core(k).horizontal());
                // the horizontal product buffer doubles as the next vertical block
                v_next.middleCols(out_col, t.rank(k + 1)) =
                    Eigen::Map<const Matrix>(h_i.data(), l_prev * t.core(k).n(), t.rank(k + 1));
                c0 += t.rank(k);
                out_col += t.rank(k + 1);
            }
            v = std::move(v_next);
        }
    }
    return TTTensor(std::move(out));
}

} // namespace ttround
