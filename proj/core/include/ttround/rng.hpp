#pragma once

#include <cstdint>

#include "ttround/types.hpp"

namespace ttround {

//! Deterministic Gaussian stream: splitmix64-seeded xoshiro256++ uniforms fed
//! through Box-Muller. Distinct seeds (and distinct split tags) give
//! independent streams; draws are counted in flops::counters().rng.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed);

    double next();

    //! rows x cols matrix of i.i.d. N(0,1), filled column-major.
    Matrix matrix(Index rows, Index cols);

    //! Independent substream derived from (this stream's seed, tag).
    GaussianStream split(std::uint64_t tag) const;

private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

//! i.i.d. N(0,1) matrix, deterministic per (rows, cols, seed).
Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed);

//! Stable seed derivation for independent substreams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

} // namespace ttround
