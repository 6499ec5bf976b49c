#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ttround/types.hpp"

namespace ttround {

//! A 3-way TT core of shape r_left x n x r_right. Entries are stored
//! contiguously as the column-major vertical unfolding: element (i, j, g)
//! lives at offset g*(r_left*n) + j*r_left + i. With the horizontal
//! unfolding convention H(i, g*n + j) = X(i, j, g) this same buffer is also
//! the column-major horizontal unfolding, so both matricizations are
//! zero-copy views.
class Core {
public:
    Core(Index r_left, Index n, Index r_right); // zero-initialized
    Core(Index r_left, Index n, Index r_right, std::vector<double> entries);

    //! Interpret a (r_left*n) x r_right matrix as the vertical unfolding.
    static Core from_vertical(Index r_left, Index n, const Eigen::Ref<const Matrix>& v);
    //! Interpret a r_left x (n*r_right) matrix as the horizontal unfolding.
    static Core from_horizontal(Index n, Index r_right, const Eigen::Ref<const Matrix>& h);

    Index r_left() const noexcept { return r_left_; }
    Index n() const noexcept { return n_; }
    Index r_right() const noexcept { return r_right_; }
    Index size() const noexcept { return static_cast<Index>(data_.size()); }

    double operator()(Index i, Index j, Index g) const {
        return data_[static_cast<std::size_t>(g * r_left_ * n_ + j * r_left_ + i)];
    }
    double& operator()(Index i, Index j, Index g) {
        return data_[static_cast<std::size_t>(g * r_left_ * n_ + j * r_left_ + i)];
    }

    //! (r_left*n) x r_right view, no data movement.
    Eigen::Map<const Matrix> vertical() const;
    //! r_left x (n*r_right) view, no data movement.
    Eigen::Map<const Matrix> horizontal() const;
    //! r_left x n view of the slice X(:, :, g), no data movement.
    Eigen::Map<const Matrix> slab(Index g) const;
    //! r_left x r_right copy of the mode slice X(:, j, :).
    Matrix slice(Index j) const;

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

private:
    Index r_left_, n_, r_right_;
    std::vector<double> data_;
};

//! Tensor in TT format: an ordered chain of 3-way cores with a validated
//! rank chain (boundary ranks 1). Immutable after construction; safe for
//! concurrent reads.
class TTTensor {
public:
    //! Validates the rank chain; throws RankChainMismatch /
    //! BoundaryRankNotOne / EmptyCoreList.
    explicit TTTensor(std::vector<Core> cores);

    Index order() const noexcept { return static_cast<Index>(cores_.size()); }
    std::vector<Index> mode_sizes() const;
    //! Ranks r_0..r_d (size d+1, boundary entries 1).
    std::vector<Index> ranks() const;
    Index rank(Index k) const; // r_k, 0 <= k <= d
    Index max_rank() const;
    const Core& core(Index k) const { return cores_[static_cast<std::size_t>(k)]; }
    const std::vector<Core>& cores() const noexcept { return cores_; }

    //! Element evaluation via the slice-matrix product. Indices are 1-based,
    //! matching the usual TT notation; throws IndexOutOfRange.
    double entry(std::span<const Index> index) const;
    double entry(std::initializer_list<Index> index) const;

    //! Rank-1 all-zero tensor with the given mode sizes.
    static TTTensor zero(const std::vector<Index>& mode_sizes);

private:
    std::vector<Core> cores_;
};

//! Full multi-dimensional array in generalized column-major order (first
//! index fastest). Desk-scale oracle for correctness tests.
struct DenseTensor {
    std::vector<Index> mode_sizes;
    std::vector<double> values;

    Index size() const noexcept { return static_cast<Index>(values.size()); }
    //! Linear offset of a 0-based multi-index.
    Index offset(std::span<const Index> index) const;
    double norm() const;
};

inline constexpr Index kDenseGuardDefault = 10'000'000;

//! Materialize every entry of the TT tensor; guarded against blow-up
//! (throws DenseTooLarge above max_entries).
DenseTensor contract_to_dense(const TTTensor& tt, Index max_entries = kDenseGuardDefault);

//! Formal (exact, untruncated) sum: ranks add, first cores concatenate along
//! r_right, last cores along r_left, middle cores are slice-wise
//! block-diagonal.
TTTensor formal_sum(const std::vector<TTTensor>& terms);

//! TT tensor with cores filled i.i.d. N(0, 1/(r_{k-1} n_k r_k)),
//! deterministic per seed.
TTTensor random_gaussian_tt(const std::vector<Index>& mode_sizes,
                            const std::vector<Index>& ranks, std::uint64_t seed);

//! Frobenius norm via right-to-left orthogonalization (the norm then sits in
//! the first core). Equals the dense Frobenius norm.
double norm_exact(const TTTensor& tt);

//! Inner product <a, b> computed by the standard sweep of core contractions.
double dot(const TTTensor& a, const TTTensor& b);

//! Copy with the first core scaled by alpha.
TTTensor scaled(const TTTensor& tt, double alpha);

//! Relative Frobenius distance ||a - b|| / ||a||, evaluated in TT arithmetic
//! through the formal difference (stable down to machine noise).
double relative_error(const TTTensor& a, const TTTensor& b);

} // namespace ttround
