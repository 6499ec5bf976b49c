#include "ttround/sketch.hpp"

#include <cmath>

#include "internal.hpp"
#include "ttround/flops.hpp"

namespace ttround {

namespace {

//! One MTTKRP step: out(:, c) = sum_g w(g, c) * (slab_g(core) * omega(:, c)).
//! Works one KRP column at a time; the n*r x cols Khatri-Rao matrix is never
//! formed.
Matrix mttkrp_step(const Core& core, const Matrix& w_next, const Matrix& omega) {
    const Index cols = w_next.cols();
    Matrix out = Matrix::Zero(core.r_left(), cols);
    Matrix slab_hits(core.r_left(), core.r_right());
    for (Index c = 0; c < cols; ++c) {
        for (Index g = 0; g < core.r_right(); ++g)
            slab_hits.col(g) = linalg::mul_vec(core.slab(g), omega.col(c));
        out.col(c) = linalg::mul_vec(slab_hits, w_next.col(c));
    }
    return out;
}

//! Contraction of the trailing cores start_mode..d against the given factor
//! columns; returns one matrix per mode.
std::vector<Matrix> contract_tail(const TTTensor& tt, const GaussianFactorSet& factors) {
    flops::SketchScope scope;
    const Index d = tt.order();
    const Index t = factors.start_mode;
    std::vector<Matrix> out(static_cast<std::size_t>(d - t + 1));
    out.back() = linalg::mul(tt.core(d - 1).horizontal(), factors.at_mode(d));
    for (Index k = d - 1; k >= t; --k)
        out[static_cast<std::size_t>(k - t)] =
            mttkrp_step(tt.core(k - 1), out[static_cast<std::size_t>(k - t + 1)],
                        factors.at_mode(k));
    return out;
}

} // namespace

GaussianFactorSet draw_gaussian_factors(const TTTensor& tt, Index start_mode, Index cols,
                                        GaussianStream& stream) {
    const Index d = tt.order();
    if (start_mode < 2 || start_mode > d)
        fail(Errc::InvalidArgument, "factor start mode must lie in [2, d]");
    if (cols < 1) fail(Errc::InvalidArgument, "factor column count must be >= 1");
    GaussianFactorSet set;
    set.start_mode = start_mode;
    set.factors.reserve(static_cast<std::size_t>(d - start_mode + 1));
    for (Index k = start_mode; k <= d; ++k)
        set.factors.push_back(stream.matrix(tt.core(k - 1).n(), cols));
    return set;
}

void append_gaussian_columns(GaussianFactorSet& set, Index extra, GaussianStream& stream) {
    for (auto& f : set.factors) {
        Matrix fresh = stream.matrix(f.rows(), extra);
        Matrix grown(f.rows(), f.cols() + extra);
        grown << f, fresh;
        f = std::move(grown);
    }
}

PartialContractionSet krp_partial_contractions_rl(const TTTensor& tt,
                                                  const GaussianFactorSet& factors) {
    const Index d = tt.order();
    if (factors.start_mode < 2) fail(Errc::InvalidArgument, "contraction start mode must be >= 2");
    for (Index k = factors.start_mode; k <= d; ++k)
        if (factors.at_mode(k).rows() != tt.core(k - 1).n())
            fail(Errc::ModeSizeMismatch, "factor rows must match the mode size");
    PartialContractionSet set;
    set.start_mode = factors.start_mode;
    set.w = contract_tail(tt, factors);
    return set;
}

void append_krp_contractions(PartialContractionSet& set, const TTTensor& tt,
                             const GaussianFactorSet& fresh) {
    if (fresh.start_mode < set.start_mode)
        fail(Errc::InvalidArgument, "append must not precede the contraction start mode");
    auto fresh_w = contract_tail(tt, fresh);
    for (Index k = fresh.start_mode; k <= tt.order(); ++k) {
        Matrix& w = set.at_mode(k);
        const Matrix& add = fresh_w[static_cast<std::size_t>(k - fresh.start_mode)];
        Matrix grown(w.rows(), w.cols() + add.cols());
        grown << w, add;
        w = std::move(grown);
    }
}

std::vector<Matrix> tt_partial_contractions_rl(const TTTensor& x, const TTTensor& r) {
    if (x.mode_sizes() != r.mode_sizes())
        fail(Errc::ModeSizeMismatch, "contraction pair mode sizes differ");
    flops::SketchScope scope;
    const Index d = x.order();
    std::vector<Matrix> w(static_cast<std::size_t>(d - 1));
    w.back() = linalg::mul_nt(x.core(d - 1).horizontal(), r.core(d - 1).horizontal());
    for (Index k = d - 1; k >= 2; --k) {
        const Core& cx = x.core(k - 1);
        // Z_k = X_k x_3 W_k, then W_{k-1} = H(Z_k) H(R_k)^T
        Core z = detail::contract_third(cx, w[static_cast<std::size_t>(k - 1)]);
        w[static_cast<std::size_t>(k - 2)] =
            linalg::mul_nt(z.horizontal(), r.core(k - 1).horizontal());
    }
    return w;
}

double estimate_norm_krp(const TTTensor& tt, Index width, std::uint64_t seed) {
    if (width < 1) fail(Errc::InvalidArgument, "sketch width must be >= 1");
    if (tt.order() == 1) return tt.core(0).vertical().norm();
    GaussianStream stream(seed);
    auto factors = draw_gaussian_factors(tt, 2, width, stream);
    auto w = krp_partial_contractions_rl(tt, factors);
    Matrix s = linalg::mul(tt.core(0).vertical(), w.at_mode(2));
    return s.norm() / std::sqrt(static_cast<double>(width));
}

double residual_norm_estimate(const Eigen::Ref<const Matrix>& s, Index block) {
    if (block < 1) fail(Errc::InvalidArgument, "block size must be >= 1");
    return s.norm() / std::sqrt(static_cast<double>(block));
}

} // namespace ttround
