#include "ttround/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "ttround/linalg.hpp"
#include "ttround/rng.hpp"

namespace ttround {

namespace {

void check_positive_dims(Index r_left, Index n, Index r_right) {
    if (r_left < 1 || n < 1 || r_right < 1)
        fail(Errc::InvalidArgument, "core dimensions must be positive");
}

} // namespace

Core::Core(Index r_left, Index n, Index r_right)
    : r_left_(r_left), n_(n), r_right_(r_right),
      data_(static_cast<std::size_t>(r_left * n * r_right), 0.0) {
    check_positive_dims(r_left, n, r_right);
}

Core::Core(Index r_left, Index n, Index r_right, std::vector<double> entries)
    : r_left_(r_left), n_(n), r_right_(r_right), data_(std::move(entries)) {
    check_positive_dims(r_left, n, r_right);
    if (static_cast<Index>(data_.size()) != r_left * n * r_right)
        fail(Errc::InvalidArgument, "core entry count does not match shape");
}

Core Core::from_vertical(Index r_left, Index n, const Eigen::Ref<const Matrix>& v) {
    if (v.rows() != r_left * n) fail(Errc::InvalidArgument, "vertical unfolding shape mismatch");
    Core out(r_left, n, v.cols());
    Eigen::Map<Matrix>(out.data_.data(), v.rows(), v.cols()) = v;
    return out;
}

Core Core::from_horizontal(Index n, Index r_right, const Eigen::Ref<const Matrix>& h) {
    if (h.cols() != n * r_right) fail(Errc::InvalidArgument, "horizontal unfolding shape mismatch");
    Core out(h.rows(), n, r_right);
    Eigen::Map<Matrix>(out.data_.data(), h.rows(), h.cols()) = h;
    return out;
}

Eigen::Map<const Matrix> Core::vertical() const {
    return {data_.data(), r_left_ * n_, r_right_};
}

Eigen::Map<const Matrix> Core::horizontal() const {
    return {data_.data(), r_left_, n_ * r_right_};
}

Eigen::Map<const Matrix> Core::slab(Index g) const {
    return {data_.data() + g * r_left_ * n_, r_left_, n_};
}

Matrix Core::slice(Index j) const {
    Matrix out(r_left_, r_right_);
    for (Index g = 0; g < r_right_; ++g)
        for (Index i = 0; i < r_left_; ++i) out(i, g) = (*this)(i, j, g);
    return out;
}

TTTensor::TTTensor(std::vector<Core> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) fail(Errc::EmptyCoreList, "TT tensor needs at least one core");
    if (cores_.front().r_left() != 1 || cores_.back().r_right() != 1)
        fail(Errc::BoundaryRankNotOne, "boundary TT ranks must be 1");
    for (std::size_t k = 0; k + 1 < cores_.size(); ++k) {
        if (cores_[k].r_right() != cores_[k + 1].r_left())
            fail(Errc::RankChainMismatch, "adjacent core ranks differ at position " +
                                              std::to_string(k + 1));
    }
    for (const auto& c : cores_) {
        if (!Eigen::Map<const Vector>(c.data().data(), c.size()).allFinite())
            fail(Errc::InvalidArgument, "core entries must be finite");
    }
}

std::vector<Index> TTTensor::mode_sizes() const {
    std::vector<Index> out;
    out.reserve(cores_.size());
    for (const auto& c : cores_) out.push_back(c.n());
    return out;
}

std::vector<Index> TTTensor::ranks() const {
    std::vector<Index> out;
    out.reserve(cores_.size() + 1);
    out.push_back(1);
    for (const auto& c : cores_) out.push_back(c.r_right());
    return out;
}

Index TTTensor::rank(Index k) const {
    if (k == 0) return 1;
    return cores_[static_cast<std::size_t>(k - 1)].r_right();
}

Index TTTensor::max_rank() const {
    Index m = 1;
    for (const auto& c : cores_) m = std::max(m, c.r_right());
    return m;
}

double TTTensor::entry(std::span<const Index> index) const {
    const Index d = order();
    if (static_cast<Index>(index.size()) != d)
        fail(Errc::IndexOutOfRange, "index length does not match tensor order");
    for (Index k = 0; k < d; ++k) {
        if (index[static_cast<std::size_t>(k)] < 1 ||
            index[static_cast<std::size_t>(k)] > cores_[static_cast<std::size_t>(k)].n())
            fail(Errc::IndexOutOfRange, "index out of range at mode " + std::to_string(k + 1));
    }
    // product of slice matrices, 1-based indices at the boundary
    Matrix acc = cores_[0].slice(index[0] - 1); // 1 x r_1
    for (Index k = 1; k < d; ++k)
        acc = acc * cores_[static_cast<std::size_t>(k)].slice(index[static_cast<std::size_t>(k)] - 1);
    return acc(0, 0);
}

double TTTensor::entry(std::initializer_list<Index> index) const {
    return entry(std::span<const Index>(index.begin(), index.size()));
}

TTTensor TTTensor::zero(const std::vector<Index>& mode_sizes) {
    std::vector<Core> cores;
    cores.reserve(mode_sizes.size());
    for (Index n : mode_sizes) cores.emplace_back(1, n, 1);
    return TTTensor(std::move(cores));
}

Index DenseTensor::offset(std::span<const Index> index) const {
    Index off = 0, stride = 1;
    for (std::size_t k = 0; k < mode_sizes.size(); ++k) {
        off += index[k] * stride;
        stride *= mode_sizes[k];
    }
    return off;
}

double DenseTensor::norm() const {
    return Eigen::Map<const Vector>(values.data(), size()).norm();
}

DenseTensor contract_to_dense(const TTTensor& tt, Index max_entries) {
    const Index d = tt.order();
    Index total = 1;
    for (Index n : tt.mode_sizes()) {
        if (n != 0 && total > max_entries / n)
            fail(Errc::DenseTooLarge, "dense reconstruction exceeds the entry guard");
        total *= n;
    }
    if (total > max_entries) fail(Errc::DenseTooLarge, "dense reconstruction exceeds the entry guard");

    // grow the left product one mode at a time (oracle path, uncounted)
    Matrix m = tt.core(0).vertical();
    Index rows = tt.core(0).n();
    for (Index k = 1; k < d; ++k) {
        const Core& c = tt.core(k);
        Matrix t = m * c.horizontal(); // rows x (n * r_k)
        Matrix next(rows * c.n(), c.r_right());
        for (Index g = 0; g < c.r_right(); ++g)
            for (Index j = 0; j < c.n(); ++j)
                next.block(j * rows, g, rows, 1) = t.col(g * c.n() + j);
        m = std::move(next);
        rows *= c.n();
    }
    DenseTensor out;
    out.mode_sizes = tt.mode_sizes();
    out.values.assign(m.data(), m.data() + m.size());
    return out;
}

TTTensor formal_sum(const std::vector<TTTensor>& terms) {
    if (terms.empty()) fail(Errc::EmptyTermList, "formal sum of no terms");
    const auto modes = terms.front().mode_sizes();
    for (const auto& t : terms)
        if (t.mode_sizes() != modes) fail(Errc::ModeSizeMismatch, "formal sum mode sizes differ");
    if (terms.size() == 1) return terms.front();
    const Index d = static_cast<Index>(modes.size());

    if (d == 1) {
        Core c(1, modes[0], 1);
        for (const auto& t : terms)
            for (Index j = 0; j < modes[0]; ++j) c(0, j, 0) += t.core(0)(0, j, 0);
        return TTTensor({std::move(c)});
    }

    std::vector<Core> cores;
    cores.reserve(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
        Index rl = 0, rr = 0;
        for (const auto& t : terms) {
            rl += t.core(k).r_left();
            rr += t.core(k).r_right();
        }
        if (k == 0) rl = 1;
        if (k == d - 1) rr = 1;
        Core out(rl, modes[static_cast<std::size_t>(k)], rr);
        Index row_off = 0, col_off = 0;
        for (const auto& t : terms) {
            const Core& c = t.core(k);
            for (Index g = 0; g < c.r_right(); ++g)
                for (Index j = 0; j < c.n(); ++j)
                    for (Index i = 0; i < c.r_left(); ++i)
                        out(row_off + i, j, col_off + g) = c(i, j, g);
            if (k > 0) row_off += c.r_left();
            if (k < d - 1) col_off += c.r_right();
        }
        cores.push_back(std::move(out));
    }
    return TTTensor(std::move(cores));
}

TTTensor random_gaussian_tt(const std::vector<Index>& mode_sizes,
                            const std::vector<Index>& ranks, std::uint64_t seed) {
    const Index d = static_cast<Index>(mode_sizes.size());
    if (d < 1 || ranks.size() != mode_sizes.size() + 1)
        fail(Errc::InvalidRankChain, "rank chain length must be d+1");
    if (ranks.front() != 1 || ranks.back() != 1)
        fail(Errc::InvalidRankChain, "boundary ranks must be 1");
    for (Index r : ranks)
        if (r < 1) fail(Errc::InvalidRankChain, "ranks must be positive");
    for (Index n : mode_sizes)
        if (n < 1) fail(Errc::InvalidRankChain, "mode sizes must be positive");

    GaussianStream stream(seed);
    std::vector<Core> cores;
    cores.reserve(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
        const Index rl = ranks[static_cast<std::size_t>(k)];
        const Index n = mode_sizes[static_cast<std::size_t>(k)];
        const Index rr = ranks[static_cast<std::size_t>(k) + 1];
        Core c(rl, n, rr);
        const double sigma = 1.0 / std::sqrt(static_cast<double>(rl) * n * rr);
        for (auto& v : c.data()) v = sigma * stream.next();
        cores.push_back(std::move(c));
    }
    return TTTensor(std::move(cores));
}

double dot(const TTTensor& a, const TTTensor& b) {
    if (a.mode_sizes() != b.mode_sizes()) fail(Errc::ModeSizeMismatch, "dot: mode sizes differ");
    const Index d = a.order();
    Matrix w = Matrix::Identity(1, 1); // r_b(k) x r_a(k)
    for (Index k = 0; k < d; ++k) {
        const Core& ca = a.core(k);
        const Core& cb = b.core(k);
        Matrix hz = linalg::mul(w, ca.horizontal()); // r_b(k-1) x (n * r_a(k))
        Eigen::Map<const Matrix> vz(hz.data(), cb.r_left() * ca.n(), ca.r_right());
        w = linalg::tmul(cb.vertical(), vz); // r_b(k) x r_a(k)
    }
    return w(0, 0);
}

TTTensor scaled(const TTTensor& tt, double alpha) {
    std::vector<Core> cores = tt.cores();
    for (auto& v : cores.front().data()) v *= alpha;
    return TTTensor(std::move(cores));
}

double relative_error(const TTTensor& a, const TTTensor& b) {
    const double na = norm_exact(a);
    const double nd = norm_exact(formal_sum({a, scaled(b, -1.0)}));
    return na == 0.0 ? nd : nd / na;
}

} // namespace ttround
