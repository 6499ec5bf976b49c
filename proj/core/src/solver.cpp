#include "ttround/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>

#include <Eigen/LU>

#include "internal.hpp"
#include "ttround/orthogonalize.hpp"

namespace ttround {

KroneckerSumOperator KroneckerSumOperator::of(std::vector<std::vector<Matrix>> terms) {
    if (terms.empty()) fail(Errc::InvalidArgument, "operator needs at least one term");
    const std::size_t d = terms.front().size();
    if (d == 0) fail(Errc::InvalidArgument, "operator term needs at least one factor");
    for (const auto& term : terms) {
        if (term.size() != d) fail(Errc::ModeSizeMismatch, "operator terms have unequal order");
        for (std::size_t k = 0; k < d; ++k) {
            if (term[k].rows() != term[k].cols() || term[k].rows() != terms.front()[k].rows())
                fail(Errc::ModeSizeMismatch, "operator factors must be square and consistent");
        }
    }
    KroneckerSumOperator op;
    op.terms = std::move(terms);
    return op;
}

std::vector<Index> KroneckerSumOperator::mode_sizes() const {
    std::vector<Index> out;
    out.reserve(terms.front().size());
    for (const auto& a : terms.front()) out.push_back(a.rows());
    return out;
}

namespace {

//! 5-point flux-form finite differences for -div(chi grad u) on the unit
//! square interior grid, homogeneous Dirichlet boundary. chi is evaluated at
//! edge midpoints, so operators for different subdomains add exactly.
Matrix fd_diffusion_matrix(Index grid, const std::function<double(double, double)>& chi) {
    const Index n = grid * grid;
    const double h = 1.0 / static_cast<double>(grid + 1);
    Matrix a = Matrix::Zero(n, n);
    auto node = [grid](Index ix, Index iy) { return iy * grid + ix; };
    const Index dx[4] = {1, -1, 0, 0};
    const Index dy[4] = {0, 0, 1, -1};
    for (Index iy = 0; iy < grid; ++iy) {
        for (Index ix = 0; ix < grid; ++ix) {
            const double x = (ix + 1) * h;
            const double y = (iy + 1) * h;
            const Index row = node(ix, iy);
            for (int e = 0; e < 4; ++e) {
                const double mx = x + 0.5 * h * dx[e];
                const double my = y + 0.5 * h * dy[e];
                const double c = chi(mx, my) / (h * h);
                if (c == 0.0) continue;
                a(row, row) += c;
                const Index jx = ix + dx[e], jy = iy + dy[e];
                if (jx >= 0 && jx < grid && jy >= 0 && jy < grid) a(row, node(jx, jy)) -= c;
            }
        }
    }
    return a;
}

TTTensor ones_rank1(const std::vector<Index>& modes) {
    std::vector<Core> cores;
    cores.reserve(modes.size());
    for (Index n : modes) {
        Core c(1, n, 1);
        for (auto& v : c.data()) v = 1.0;
        cores.push_back(std::move(c));
    }
    return TTTensor(std::move(cores));
}

} // namespace

CookieProblem build_cookie_problem(Index num_param_modes, Index grid_size,
                                   Index num_param_samples, double rho_min, double rho_max) {
    if (grid_size < 8) fail(Errc::InvalidGrid, "grid size must be >= 8");
    if (num_param_modes < 0) fail(Errc::InvalidGrid, "parameter mode count must be >= 0");
    if (num_param_modes > 0 && num_param_samples < 1)
        fail(Errc::InvalidGrid, "need at least one parameter sample");
    if (rho_max < rho_min) fail(Errc::InvalidGrid, "empty parameter range");

    const Index p = num_param_modes;
    const Index d = p + 1;
    std::vector<Index> modes(static_cast<std::size_t>(d), num_param_samples);
    modes[0] = grid_size * grid_size;

    // discs on a ceil(sqrt(p)) x ceil(sqrt(p)) grid of centers
    const Index cells = p > 0 ? static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(p)))) : 1;
    const double radius = 0.35 / static_cast<double>(cells);
    std::vector<std::pair<double, double>> centers;
    for (Index i = 0; i < p; ++i) {
        const Index cx = i % cells, cy = i / cells;
        centers.emplace_back((cx + 0.5) / static_cast<double>(cells),
                             (cy + 0.5) / static_cast<double>(cells));
    }

    Vector rho(num_param_samples);
    for (Index i = 0; i < num_param_samples; ++i)
        rho(i) = num_param_samples == 1
                     ? rho_min
                     : rho_min + (rho_max - rho_min) * static_cast<double>(i) /
                                     static_cast<double>(num_param_samples - 1);

    std::vector<std::vector<Matrix>> terms;
    const auto eye = [&](Index k) { return Matrix::Identity(modes[static_cast<std::size_t>(k)],
                                                            modes[static_cast<std::size_t>(k)]); };

    std::vector<Matrix> base(static_cast<std::size_t>(d));
    base[0] = fd_diffusion_matrix(grid_size, [](double, double) { return 1.0; });
    for (Index k = 1; k < d; ++k) base[static_cast<std::size_t>(k)] = eye(k);
    terms.push_back(std::move(base));

    for (Index i = 0; i < p; ++i) {
        const auto [cx, cy] = centers[static_cast<std::size_t>(i)];
        std::vector<Matrix> term(static_cast<std::size_t>(d));
        term[0] = fd_diffusion_matrix(grid_size, [cx, cy, radius](double x, double y) {
            const double ddx = x - cx, ddy = y - cy;
            return ddx * ddx + ddy * ddy <= radius * radius ? 1.0 : 0.0;
        });
        for (Index k = 1; k < d; ++k) term[static_cast<std::size_t>(k)] = eye(k);
        term[static_cast<std::size_t>(i + 1)] = Matrix(rho.asDiagonal());
        terms.push_back(std::move(term));
    }

    CookieProblem out{KroneckerSumOperator::of(std::move(terms)), ones_rank1(modes)};
    return out;
}

TTSum apply_operator(const KroneckerSumOperator& op, const TTTensor& x) {
    if (op.mode_sizes() != x.mode_sizes())
        fail(Errc::ModeSizeMismatch, "operator and tensor mode sizes differ");
    const Index d = x.order();
    std::vector<TTTensor> out_terms;
    out_terms.reserve(op.terms.size());
    for (const auto& term : op.terms) {
        std::vector<Core> cores;
        cores.reserve(static_cast<std::size_t>(d));
        for (Index k = 0; k < d; ++k)
            cores.push_back(detail::contract_mode(x.core(k), term[static_cast<std::size_t>(k)]));
        out_terms.emplace_back(std::move(cores));
    }
    return TTSum::of(std::move(out_terms));
}

namespace {

//! Norm of a tensor that is left-orthogonal except its last core.
double left_orthogonal_norm(const TTTensor& tt) {
    return tt.core(tt.order() - 1).vertical().norm();
}

class SumRounder {
public:
    SumRounder(RoundingStrategy strategy, double delta, std::uint64_t seed)
        : strategy_(strategy), delta_(delta), seed_(seed) {}

    TTTensor round(const std::vector<TTTensor>& terms) {
        const auto start = std::chrono::steady_clock::now();
        TTTensor out = round_impl(terms);
        seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

    double seconds() const { return seconds_; }

private:
    TTTensor round_impl(const std::vector<TTTensor>& terms) {
        const std::uint64_t seed = derive_seed(seed_, counter_++);
        switch (strategy_) {
        case RoundingStrategy::Deterministic:
            return round_deterministic(formal_sum(terms), delta_);
        case RoundingStrategy::RandOrthTT: {
            TTTensor f = formal_sum(terms);
            if (f.order() == 1) return f;
            // sketch at the formal-sum ranks: the randomized projection is
            // then lossless and the compression pass owns the truncation
            std::vector<Index> targets;
            for (Index k = 1; k < f.order(); ++k) targets.push_back(f.rank(k));
            TTTensor y = round_rand_orth_tt(f, targets, seed);
            const double tau = delta_ * left_orthogonal_norm(y) /
                               std::sqrt(static_cast<double>(y.order() - 1));
            return compression_pass(y, tau);
        }
        case RoundingStrategy::AdaptiveKRPSum: {
            TTTensor y = round_sum_adaptive_krp(TTSum::of(terms), delta_, 0.05, seed);
            if (y.order() == 1) return y;
            const double nrm = left_orthogonal_norm(y);
            // the cancellation guard returns a plain zero tensor; nothing to pass over
            if (nrm == 0.0) return y;
            const double tau =
                delta_ * nrm / std::sqrt(static_cast<double>(y.order() - 1));
            return compression_pass(y, tau);
        }
        }
        fail(Errc::InvalidArgument, "unknown rounding strategy");
    }

    RoundingStrategy strategy_;
    double delta_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double seconds_ = 0.0;
};

} // namespace

namespace {

//! Mean-field spatial preconditioner: collapse every parameter factor to the
//! mean of its diagonal and sum the resulting mode-1 operators.
Matrix mean_field_matrix(const KroneckerSumOperator& op) {
    Matrix m = Matrix::Zero(op.terms.front()[0].rows(), op.terms.front()[0].cols());
    for (const auto& term : op.terms) {
        double weight = 1.0;
        for (std::size_t k = 1; k < term.size(); ++k)
            weight *= term[k].diagonal().mean();
        m += weight * term[0];
    }
    return m;
}

//! Apply a prefactored mode-1 solve to every core-1 column.
TTTensor solve_mode1(const Eigen::PartialPivLU<Matrix>& lu, const TTTensor& x) {
    std::vector<Core> cores = x.cores();
    const Core& c = cores.front();
    Matrix solved = lu.solve(Matrix(c.vertical()));
    cores.front() = Core::from_vertical(c.r_left(), c.n(), solved);
    return TTTensor(std::move(cores));
}

} // namespace

GMRESResult tt_gmres(const KroneckerSumOperator& op, const TTTensor& rhs,
                     const GMRESConfig& cfg) {
    if (!(cfg.rel_tolerance > 0.0)) fail(Errc::InvalidArgument, "solver tolerance must be > 0");
    if (op.mode_sizes() != rhs.mode_sizes())
        fail(Errc::ModeSizeMismatch, "operator and rhs mode sizes differ");
    const double delta =
        cfg.rounding_tolerance > 0.0 ? cfg.rounding_tolerance : 0.1 * cfg.rel_tolerance;
    const Index m = cfg.max_iterations;
    SumRounder rounder(cfg.strategy, delta, cfg.seed);

    // right preconditioning keeps the Arnoldi residual equal to the residual
    // of the original system
    std::optional<Eigen::PartialPivLU<Matrix>> precond;
    if (cfg.mean_field_preconditioner) precond.emplace(mean_field_matrix(op));

    GMRESResult result{TTTensor::zero(rhs.mode_sizes()), {}, {}, {}, {}, 0.0, 0, false};
    const double normb = norm_exact(rhs);
    if (normb == 0.0) {
        result.converged = true;
        return result;
    }

    // x0 = 0, so the first Krylov vector is b/||b||
    std::vector<TTTensor> basis;
    basis.push_back(scaled(rhs, 1.0 / normb));

    Matrix hess = Matrix::Zero(m + 1, m);
    Vector g = Vector::Zero(m + 1);
    g(0) = normb;
    Vector cs = Vector::Zero(m), sn = Vector::Zero(m);

    auto solve_iterate = [&](Index j) {
        // back-substitution on the Givens-reduced triangle, then the TT
        // linear combination of the basis (mapped back through M^{-1})
        Vector y = g.head(j + 1);
        for (Index i = j; i >= 0; --i) {
            for (Index l = i + 1; l <= j; ++l) y(i) -= hess(i, l) * y(l);
            y(i) /= hess(i, i);
        }
        std::vector<TTTensor> combo;
        combo.reserve(static_cast<std::size_t>(j + 1));
        for (Index i = 0; i <= j; ++i)
            combo.push_back(scaled(basis[static_cast<std::size_t>(i)], y(i)));
        TTTensor x = rounder.round(combo);
        return precond ? solve_mode1(*precond, x) : x;
    };

    auto true_residual = [&](const TTTensor& x) {
        TTSum ax = apply_operator(op, x);
        std::vector<TTTensor> diff;
        diff.reserve(ax.terms.size() + 1);
        diff.push_back(rhs);
        for (const auto& t : ax.terms) diff.push_back(scaled(t, -1.0));
        return norm_exact(formal_sum(diff)) / normb;
    };

    for (Index j = 0; j < m; ++j) {
        const TTTensor& v = basis[static_cast<std::size_t>(j)];
        TTSum aw = apply_operator(op, precond ? solve_mode1(*precond, v) : v);
        TTTensor w = rounder.round(aw.terms);

        // modified Gram-Schmidt in TT arithmetic, Sum+Round after every
        // subtraction
        for (Index i = 0; i <= j; ++i) {
            const double hij = dot(w, basis[static_cast<std::size_t>(i)]);
            hess(i, j) = hij;
            w = rounder.round({w, scaled(basis[static_cast<std::size_t>(i)], -hij)});
        }
        const double hj1 = norm_exact(w);
        hess(j + 1, j) = hj1;

        for (Index i = 0; i < j; ++i) {
            const double t = cs(i) * hess(i, j) + sn(i) * hess(i + 1, j);
            hess(i + 1, j) = -sn(i) * hess(i, j) + cs(i) * hess(i + 1, j);
            hess(i, j) = t;
        }
        const double denom = std::hypot(hess(j, j), hess(j + 1, j));
        if (denom == 0.0) {
            cs(j) = 1.0;
            sn(j) = 0.0;
        } else {
            cs(j) = hess(j, j) / denom;
            sn(j) = hess(j + 1, j) / denom;
        }
        hess(j, j) = denom;
        hess(j + 1, j) = 0.0;
        g(j + 1) = -sn(j) * g(j);
        g(j) = cs(j) * g(j);

        const double estimate = std::abs(g(j + 1)) / normb;
        result.residual_history.push_back(estimate);
        result.max_rank_history.push_back(w.max_rank());
        result.rounding_seconds_history.push_back(rounder.seconds());
        result.iterations = j + 1;

        const bool stagnated = hj1 <= 1e-14 * normb;
        const bool stopping = estimate <= cfg.rel_tolerance || stagnated || j + 1 == m;
        double true_res = estimate;
        if (cfg.track_true_residual || stopping) {
            TTTensor x = solve_iterate(j);
            true_res = true_residual(x);
            result.solution = std::move(x);
        }
        if (cfg.track_true_residual) result.true_residual_history.push_back(true_res);

        if (estimate <= cfg.rel_tolerance) {
            result.converged = true;
            break;
        }
        if (stagnated) {
            if (true_res <= cfg.rel_tolerance) {
                result.converged = true;
                break;
            }
            fail(Errc::Breakdown, "Arnoldi vector norm vanished before convergence");
        }
        basis.push_back(scaled(w, 1.0 / hj1));
    }

    result.rounding_seconds = rounder.seconds();
    return result;
}

} // namespace ttround
