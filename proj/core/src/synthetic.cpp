#include "ttround/synthetic.hpp"

#include "ttround/orthogonalize.hpp"
#include "ttround/rng.hpp"

namespace ttround {

SyntheticTensor synthetic_perturbed_tt(const std::vector<Index>& mode_sizes,
                                       const std::vector<Index>& ranks, double eps_pert,
                                       std::uint64_t seed) {
    if (eps_pert < 0) fail(Errc::InvalidArgument, "perturbation must be >= 0");
    TTTensor y = random_gaussian_tt(mode_sizes, ranks, derive_seed(seed, 1));
    TTTensor z = random_gaussian_tt(mode_sizes, ranks, derive_seed(seed, 2));
    y = scaled(y, 1.0 / norm_exact(y));
    z = scaled(z, 1.0 / norm_exact(z));
    TTTensor x = formal_sum({y, scaled(z, eps_pert)});
    return SyntheticTensor{std::move(x), std::move(y), std::move(z)};
}

SyntheticTensor synthetic_perturbed_tt(Index d, Index n, Index r, double eps_pert,
                                       std::uint64_t seed) {
    std::vector<Index> modes(static_cast<std::size_t>(d), n);
    std::vector<Index> ranks(static_cast<std::size_t>(d) + 1, r);
    ranks.front() = ranks.back() = 1;
    return synthetic_perturbed_tt(modes, ranks, eps_pert, seed);
}

} // namespace ttround
