#pragma once

#include "ttround/tensor.hpp"

namespace ttround {

//! Synthetic rounding benchmark instance X = Y + eps_pert * Z with Y, Z
//! independent normalized random TT tensors of the given ranks; X carries
//! the padded (doubled) rank chain of the formal sum.
struct SyntheticTensor {
    TTTensor x;
    TTTensor y; // normalized low-rank part
    TTTensor z; // normalized perturbation
};

SyntheticTensor synthetic_perturbed_tt(const std::vector<Index>& mode_sizes,
                                       const std::vector<Index>& ranks, double eps_pert,
                                       std::uint64_t seed);

//! Uniform-parameter convenience overload: d modes of size n, internal ranks r.
SyntheticTensor synthetic_perturbed_tt(Index d, Index n, Index r, double eps_pert,
                                       std::uint64_t seed);

} // namespace ttround
