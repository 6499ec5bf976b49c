#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "ttround/flops.hpp"
#include "ttround/orthogonalize.hpp"
#include "ttround/sketch.hpp"
#include "ttround/synthetic.hpp"

using namespace ttround;

TEST_SUITE("sketch") {

TEST_CASE("gaussian_matrix") {
    SUBCASE("deterministic per seed") {
        CHECK((gaussian_matrix(4, 3, 12) - gaussian_matrix(4, 3, 12)).norm() == 0.0);
        CHECK((gaussian_matrix(4, 3, 12) - gaussian_matrix(4, 3, 13)).norm() > 0.0);
    }
    SUBCASE("single draw is finite") {
        Matrix one = gaussian_matrix(1, 1, 99);
        CHECK(std::isfinite(one(0, 0)));
    }
    SUBCASE("moments") {
        Matrix m = gaussian_matrix(1000, 100, 2024);
        const double mean = m.mean();
        const double var = (m.array() - mean).square().mean();
        CHECK(std::abs(mean) <= 0.02);
        CHECK(std::abs(var - 1.0) <= 0.05);
    }
}

TEST_CASE("krp partial contractions match the dense KRP oracle") {
    SUBCASE("d = 2 rank-1 hand example") {
        Core c1(1, 2, 1, {1.0, 2.0});
        Core c2(1, 2, 1, {3.0, 4.0});
        TTTensor tt({c1, c2});
        GaussianFactorSet f;
        f.start_mode = 2;
        f.factors.push_back(Matrix::Ones(2, 1));
        auto w = krp_partial_contractions_rl(tt, f);
        CHECK(w.at_mode(2)(0, 0) == doctest::Approx(7.0));
    }
    SUBCASE("zero factors give zero contractions") {
        TTTensor tt = random_gaussian_tt({3, 4, 3}, {1, 2, 2, 1}, 5);
        GaussianFactorSet f;
        f.start_mode = 2;
        f.factors.push_back(Matrix::Zero(4, 2));
        f.factors.push_back(Matrix::Zero(3, 2));
        auto w = krp_partial_contractions_rl(tt, f);
        CHECK(w.at_mode(2).norm() == 0.0);
        CHECK(w.at_mode(3).norm() == 0.0);
    }
    SUBCASE("random instances across shapes") {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            GaussianStream pick(seed);
            const Index d = 3 + static_cast<Index>(seed % 3); // up to 5
            std::vector<Index> modes, ranks{1};
            for (Index k = 0; k < d; ++k) {
                modes.push_back(2 + static_cast<Index>(std::abs(pick.next()) * 10) % 5);
                ranks.push_back(1 + static_cast<Index>(std::abs(pick.next()) * 10) % 4);
            }
            ranks.back() = 1;
            TTTensor tt = random_gaussian_tt(modes, ranks, 900 + seed);
            GaussianStream fs(derive_seed(seed, 4));
            const Index cols = 1 + static_cast<Index>(seed % 4);
            auto factors = draw_gaussian_factors(tt, 2, cols, fs);
            auto w = krp_partial_contractions_rl(tt, factors);
            for (Index k = 2; k <= d; ++k) {
                Matrix trailing = oracle::dense_trailing_unfolding(tt, k);
                std::vector<Matrix> facs(factors.factors.begin() + (k - 2),
                                         factors.factors.end());
                Matrix expect = trailing * oracle::dense_krp(facs);
                CHECK((w.at_mode(k) - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
            }
        }
    }
    SUBCASE("column append equals one-shot contraction with concatenated factors") {
        TTTensor tt = random_gaussian_tt({4, 3, 5, 4}, {1, 3, 4, 2, 1}, 77);
        GaussianStream s1(500);
        auto f1 = draw_gaussian_factors(tt, 2, 3, s1);
        auto w = krp_partial_contractions_rl(tt, f1);

        GaussianStream s2(501);
        auto fresh = draw_gaussian_factors(tt, 2, 2, s2);
        append_krp_contractions(w, tt, fresh);

        GaussianFactorSet all;
        all.start_mode = 2;
        for (std::size_t i = 0; i < f1.factors.size(); ++i) {
            Matrix joined(f1.factors[i].rows(), 5);
            joined << f1.factors[i], fresh.factors[i];
            all.factors.push_back(joined);
        }
        auto w_once = krp_partial_contractions_rl(tt, all);
        for (Index k = 2; k <= 4; ++k)
            CHECK((w.at_mode(k) - w_once.at_mode(k)).norm() == 0.0);
    }
}

TEST_CASE("tt partial contractions") {
    SUBCASE("self-contraction of a right-orthogonal tensor is the identity") {
        TTTensor t = orthogonalize(random_gaussian_tt({4, 3, 4, 5}, {1, 3, 3, 4, 1}, 15),
                                   Direction::RightToLeft);
        auto w = tt_partial_contractions_rl(t, t);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const Matrix& m = w[k];
            CHECK((m - Matrix::Identity(m.rows(), m.cols())).norm() <= 1e-12);
        }
    }
    SUBCASE("d = 2 single step") {
        TTTensor x = random_gaussian_tt({3, 4}, {1, 2, 1}, 1);
        TTTensor r = random_gaussian_tt({3, 4}, {1, 3, 1}, 2);
        auto w = tt_partial_contractions_rl(x, r);
        Matrix expect = x.core(1).horizontal() * r.core(1).horizontal().transpose();
        CHECK((w[0] - expect).norm() <= 1e-13);
    }
    SUBCASE("random pair matches dense unfolding products") {
        TTTensor x = random_gaussian_tt({3, 4, 3, 4}, {1, 3, 4, 2, 1}, 61);
        TTTensor r = random_gaussian_tt({3, 4, 3, 4}, {1, 2, 3, 3, 1}, 62);
        auto w = tt_partial_contractions_rl(x, r);
        for (Index k = 1; k <= 3; ++k) {
            Matrix hx = oracle::dense_trailing_unfolding(x, k + 1);
            Matrix hr = oracle::dense_trailing_unfolding(r, k + 1);
            Matrix expect = hx * hr.transpose();
            CHECK((w[static_cast<std::size_t>(k - 1)] - expect).norm() <=
                  1e-12 * (1.0 + expect.norm()));
        }
    }
}

TEST_CASE("norm estimation") {
    SUBCASE("zero tensor estimates zero") {
        CHECK(estimate_norm_krp(TTTensor::zero({4, 4, 4}), 8, 3) == 0.0);
    }
    SUBCASE("squared estimator is unbiased within 3 standard errors") {
        auto syn = synthetic_perturbed_tt(4, 10, 5, 1e-5, 99);
        const double truth = norm_exact(syn.x);
        const double t2 = truth * truth;
        const int trials = 400;
        double sum = 0.0, sumsq = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double e = estimate_norm_krp(syn.x, 64, 7000 + static_cast<std::uint64_t>(t));
            sum += e * e;
            sumsq += e * e * e * e;
        }
        const double mean = sum / trials;
        const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
        CHECK(std::abs(mean - t2) <= 3.0 * se);
    }
    SUBCASE("residual norm estimate basics") {
        CHECK(residual_norm_estimate(Matrix::Zero(5, 3), 3) == 0.0);
        Vector v(3);
        v << 1.0, 2.0, 2.0;
        CHECK(residual_norm_estimate(v, 1) == doctest::Approx(3.0));
    }
    SUBCASE("mean estimate tightens as the width grows") {
        auto syn = synthetic_perturbed_tt(4, 10, 5, 1e-5, 1212);
        const double truth = norm_exact(syn.x);
        const int trials = 1500;
        double prev_gap = 1e300;
        for (Index width : {8, 32, 128}) {
            double sum = 0.0;
            for (int t = 0; t < trials; ++t)
                sum += estimate_norm_krp(syn.x, width,
                                         derive_seed(555, static_cast<std::uint64_t>(width * 10000 + t)));
            const double gap = std::abs(sum / trials - truth) / truth;
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
    }
    SUBCASE("sketch estimate of a dense matrix norm is unbiased") {
        // S = A * Omega for a KRP Omega; mean of ||S||_F^2 / b approaches ||A||_F^2
        TTTensor t = random_gaussian_tt({5, 4, 4}, {1, 3, 3, 1}, 404);
        DenseTensor dense = contract_to_dense(t);
        Matrix a = Matrix::Map(dense.values.data(), 5, 16);
        const double a2 = a.squaredNorm();
        const int trials = 600;
        const Index b = 8;
        double sum = 0.0, sumsq = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            GaussianStream stream(9000 + static_cast<std::uint64_t>(trial));
            std::vector<Matrix> fac{stream.matrix(4, b), stream.matrix(4, b)};
            Matrix omega = oracle::dense_krp(fac);
            const double est = residual_norm_estimate(a * omega, b);
            sum += est * est;
            sumsq += est * est * est * est;
        }
        const double mean = sum / trials;
        const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
        CHECK(std::abs(mean - a2) <= 3.0 * se);
    }
}

TEST_CASE("partial contraction flops are tagged as sketch work") {
    TTTensor tt = random_gaussian_tt({6, 6, 6, 6}, {1, 5, 5, 5, 1}, 8);
    GaussianStream stream(3);
    auto factors = draw_gaussian_factors(tt, 2, 4, stream);
    flops::reset();
    auto w = krp_partial_contractions_rl(tt, factors);
    auto counts = flops::counters();
    CHECK(counts.sketch > 0);
    CHECK(counts.sketch == counts.gemm);
    CHECK(w.cols() == 4);
}

} // TEST_SUITE
