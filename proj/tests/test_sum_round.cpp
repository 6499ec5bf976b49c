#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "ttround/flops.hpp"
#include "ttround/linalg.hpp"
#include "ttround/orthogonalize.hpp"
#include "ttround/sum_round.hpp"

using namespace ttround;

namespace {

std::vector<TTTensor> random_terms(Index count, const std::vector<Index>& modes,
                                   const std::vector<Index>& ranks, std::uint64_t seed) {
    std::vector<TTTensor> terms;
    for (Index i = 0; i < count; ++i)
        terms.push_back(random_gaussian_tt(modes, ranks, derive_seed(seed, static_cast<std::uint64_t>(i))));
    return terms;
}

} // namespace

TEST_SUITE("sum_round") {

TEST_CASE("stacked residual sketch equals the formal-sum sketch") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Index s = 2 + static_cast<Index>(seed % 3);
        auto terms = random_terms(s, {4, 5, 4, 3}, {1, 3, 2, 3, 1}, 3000 + seed);
        TTTensor formal = formal_sum(terms);

        // shared factors: per-term contraction sets and the formal-sum set
        GaussianStream fs(derive_seed(seed, 9));
        auto factors = draw_gaussian_factors(terms.front(), 2, 3, fs);
        std::vector<PartialContractionSet> w;
        for (const auto& t : terms) w.push_back(krp_partial_contractions_rl(t, factors));
        auto w_formal = krp_partial_contractions_rl(formal, factors);

        // k = 1: the working unfoldings are the raw first cores
        Matrix z(4, formal.rank(1));
        Index col = 0;
        for (const auto& t : terms) {
            z.middleCols(col, t.rank(1)) = t.core(0).vertical();
            col += t.rank(1);
        }
        Matrix q(z.rows(), 0);
        GaussianStream append_a(derive_seed(seed, 10));
        GaussianStream append_b(derive_seed(seed, 10));
        Matrix s_sum = residual_sketch_sum(terms, z, q, w, 1, 3, append_a);
        Matrix s_formal =
            generate_residual_sketch(formal, formal.core(0).vertical(), q, w_formal, 1, 3, append_b);
        CHECK((s_sum - s_formal).norm() <= 1e-13 * (1.0 + s_formal.norm()));

        // stacked per-term contractions equal the formal-sum contraction
        for (Index k = 2; k <= 4; ++k) {
            Index row = 0;
            for (Index i = 0; i < s; ++i) {
                const Matrix& wi = w[static_cast<std::size_t>(i)].at_mode(k);
                const Matrix block = w_formal.at_mode(k).middleRows(row, wi.rows());
                CHECK((wi - block).norm() <= 1e-13 * (1.0 + block.norm()));
                row += wi.rows();
            }
        }
    }
}

TEST_CASE("residual sketch of a single term reduces to the plain path") {
    auto terms = random_terms(1, {5, 4, 5}, {1, 3, 3, 1}, 42);
    GaussianStream fs(7);
    auto factors = draw_gaussian_factors(terms.front(), 2, 3, fs);
    std::vector<PartialContractionSet> w{krp_partial_contractions_rl(terms[0], factors)};
    auto w_single = krp_partial_contractions_rl(terms[0], factors);

    const Matrix z = terms[0].core(0).vertical();
    Matrix q = linalg::thin_qr_q(z.leftCols(1));
    GaussianStream a(99), b(99);
    Matrix s_sum = residual_sketch_sum(terms, z, q, w, 1, 2, a);
    Matrix s_single = generate_residual_sketch(terms[0], z, q, w_single, 1, 2, b);
    CHECK((s_sum - s_single).norm() <= 1e-14 * (1.0 + s_single.norm()));
}

TEST_CASE("two identical terms double the sketch before projection") {
    auto terms = random_terms(1, {4, 4, 4}, {1, 2, 2, 1}, 11);
    std::vector<TTTensor> twice{terms[0], terms[0]};
    GaussianStream fs(13);
    auto factors = draw_gaussian_factors(terms[0], 2, 2, fs);
    std::vector<PartialContractionSet> w{krp_partial_contractions_rl(terms[0], factors),
                                         krp_partial_contractions_rl(terms[0], factors)};
    Matrix z(4, 4);
    z << terms[0].core(0).vertical(), terms[0].core(0).vertical();
    Matrix q(z.rows(), 0);
    GaussianStream a(1);
    Matrix s = residual_sketch_sum(twice, z, q, w, 1, 2, a);
    Matrix single = terms[0].core(0).vertical() * w[0].at_mode(2).leftCols(2);
    CHECK((s - 2.0 * single).norm() <= 1e-13 * (1.0 + single.norm()));
}

TEST_CASE("adaptive sum rounding") {
    SUBCASE("eight random terms against the dense sum") {
        const double eps = 1e-6;
        auto terms = random_terms(8, {8, 8, 8, 8}, {1, 3, 3, 3, 1}, 606);
        TTTensor formal = formal_sum(terms);
        DenseTensor reference = contract_to_dense(formal);
        int hits = 0;
        std::vector<Index> det_ranks;
        {
            TTTensor det = round_deterministic(formal, eps);
            for (Index k = 1; k < det.order(); ++k) det_ranks.push_back(det.rank(k));
        }
        int rank_ok = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            TTTensor y = round_sum_adaptive_krp(TTSum::of(terms), eps, 0.05, seed);
            if (oracle::dense_rel_error(reference, contract_to_dense(y)) <= 1.5 * eps) ++hits;
            const double nrm = y.core(y.order() - 1).vertical().norm();
            TTTensor passed = compression_pass(y, eps * nrm / std::sqrt(3.0));
            bool ok = true;
            for (Index k = 1; k < passed.order(); ++k)
                ok = ok && passed.rank(k) <= det_ranks[static_cast<std::size_t>(k - 1)] + 2;
            if (ok) ++rank_ok;
        }
        CHECK(hits >= 9);
        CHECK(rank_ok >= 9);
    }
    SUBCASE("opposite terms cancel to the zero tensor") {
        auto terms = random_terms(1, {5, 4, 5}, {1, 3, 3, 1}, 37);
        TTTensor x = terms[0];
        TTTensor y = round_sum_adaptive_krp(TTSum::of({x, scaled(x, -1.0)}), 1e-6, 0.05, 4);
        CHECK(y.max_rank() == 1);
        CHECK(norm_exact(y) <= 1e-10 * norm_exact(x));
    }
    SUBCASE("single term behaves like the single-tensor algorithm") {
        auto terms = random_terms(1, {6, 5, 6}, {1, 4, 4, 1}, 52);
        TTTensor y = round_sum_adaptive_krp(TTSum::of(terms), 1e-10, 0.05, 8);
        CHECK(relative_error(terms[0], y) <= 1e-9);
    }
    SUBCASE("term validation") {
        try {
            TTSum::of({});
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::EmptyTermList);
        }
        auto terms = random_terms(1, {4, 4}, {1, 2, 1}, 3);
        try {
            TTSum::of({terms[0], random_gaussian_tt({4, 5}, {1, 2, 1}, 3)});
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ModeSizeMismatch);
        }
    }
}

TEST_CASE("contraction work grows linearly in the number of terms") {
    // scaled copies keep the adaptive loop behavior identical across s
    const std::vector<Index> modes{8, 8, 8, 8, 8};
    const std::vector<Index> ranks{1, 8, 8, 8, 8, 1};
    TTTensor base = random_gaussian_tt(modes, ranks, 31337);

    auto sketch_flops = [&](Index s) {
        std::vector<TTTensor> terms;
        for (Index i = 0; i < s; ++i)
            terms.push_back(scaled(base, 1.0 + 0.1 * static_cast<double>(i)));
        flops::reset();
        round_sum_adaptive_krp(TTSum::of(terms), 0.5, 0.01, 5);
        return flops::counters().sketch;
    };
    const auto f1 = sketch_flops(1);
    const auto f8 = sketch_flops(8);
    const double ratio = static_cast<double>(f8) / static_cast<double>(f1);
    CHECK(ratio >= 6.0);
    CHECK(ratio <= 10.0);
}

} // TEST_SUITE
