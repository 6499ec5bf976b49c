#include "ttround/rng.hpp"

#include <cmath>

#include "ttround/flops.hpp"

namespace ttround {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

} // namespace

GaussianStream::GaussianStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

GaussianStream GaussianStream::split(std::uint64_t tag) const {
    // mix (seed, tag) into a fresh seed; distinct tags give independent streams
    std::uint64_t s = seed_ ^ (0xd1342543de82ef95ULL * (tag + 1));
    return GaussianStream(splitmix64(s));
}

double GaussianStream::next() {
    flops::counters().rng += 1;
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // xoshiro256++ uniforms, Box-Muller pair
    auto uniform = [this]() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return (result >> 11) * 0x1.0p-53;
    };
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Matrix GaussianStream::matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = next();
    return m;
}

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) fail(Errc::InvalidArgument, "gaussian_matrix: empty shape");
    GaussianStream stream(seed);
    return stream.matrix(rows, cols);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (tag + 1));
    return splitmix64(s);
}

} // namespace ttround
