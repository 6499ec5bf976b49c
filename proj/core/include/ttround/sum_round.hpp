#pragma once

#include <vector>

#include "ttround/round_rand.hpp"

namespace ttround {

//! A sum of TT tensors kept as its list of summands (the formal sum is never
//! materialized outside of test oracles).
struct TTSum {
    std::vector<TTTensor> terms;

    //! Validates non-emptiness and equal mode sizes.
    static TTSum of(std::vector<TTTensor> terms);

    Index order() const { return terms.front().order(); }
    std::vector<Index> mode_sizes() const { return terms.front().mode_sizes(); }
};

//! Residual sketch for a sum of TT tensors: per-term partial contraction
//! slices stacked against the concatenated working unfolding z, projected
//! against q. All terms share one fresh factor draw per append so that the
//! sketch of the sum is the sum of the sketches. z has one column block per
//! term, of width terms[i].rank(k).
Matrix residual_sketch_sum(const std::vector<TTTensor>& terms, const Eigen::Ref<const Matrix>& z,
                           const Eigen::Ref<const Matrix>& q,
                           std::vector<PartialContractionSet>& w, Index k, Index b,
                           GaussianStream& stream);

//! Adaptive randomized rounding of a sum of TT tensors without forming the
//! formal sum. Initial per-mode block sizes are the maximum summand ranks;
//! the threshold uses the sketch-based norm estimate of the sum. Output is
//! left-orthogonal except the last core.
TTTensor round_sum_adaptive_krp(const TTSum& sum, double eps, double f_inc, std::uint64_t seed);

} // namespace ttround
