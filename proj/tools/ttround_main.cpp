// Command-line front end: rounding TTF1 files, the synthetic rounding
// benchmark, the randomized norm-estimation study, and the parametric
// cookie-problem TT-GMRES comparison. Single-run results go to stdout as
// JSON; sweeps write CSV.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ttround/flops.hpp"
#include "ttround/io.hpp"
#include "ttround/orthogonalize.hpp"
#include "ttround/round_rand.hpp"
#include "ttround/sketch.hpp"
#include "ttround/solver.hpp"
#include "ttround/sum_round.hpp"
#include "ttround/synthetic.hpp"

using namespace ttround;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ranks_string(const std::vector<Index>& ranks) {
    std::string out;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (i) out += 'x';
        out += std::to_string(ranks[i]);
    }
    return out;
}

struct BenchRecord {
    std::string algorithm;
    std::string mode; // "ranks" or "tolerance"
    double target;    // uniform target rank or tolerance
    double rel_error;
    std::vector<Index> ranks;
    double wall_seconds;
    flops::Counts counts;
    std::uint64_t seed;
};

json to_json(const BenchRecord& r) {
    return json{{"algorithm", r.algorithm},
                {"mode", r.mode},
                {"target", r.target},
                {"rel_error", r.rel_error},
                {"ranks", r.ranks},
                {"wall_seconds", r.wall_seconds},
                {"flops_total", r.counts.total()},
                {"flops_gemm", r.counts.gemm},
                {"flops_qr", r.counts.qr},
                {"flops_svd", r.counts.svd},
                {"flops_sketch", r.counts.sketch},
                {"rng_draws", r.counts.rng},
                {"seed", r.seed}};
}

constexpr const char* kBenchCsvHeader =
    "algorithm,mode,target,rel_error,ranks,wall_seconds,flops_total,flops_gemm,flops_qr,"
    "flops_svd,flops_sketch,rng_draws,seed";

void write_csv_row(std::ostream& out, const BenchRecord& r) {
    out << r.algorithm << ',' << r.mode << ',' << fmt17(r.target) << ',' << fmt17(r.rel_error)
        << ',' << ranks_string(r.ranks) << ',' << fmt17(r.wall_seconds) << ','
        << r.counts.total() << ',' << r.counts.gemm << ',' << r.counts.qr << ',' << r.counts.svd
        << ',' << r.counts.sketch << ',' << r.counts.rng << ',' << r.seed << '\n';
}

TTTensor dispatch_rounding(const std::string& algo, const TTTensor& x,
                           const std::optional<std::vector<Index>>& targets,
                           std::optional<double> tol, std::uint64_t seed) {
    if (algo == "det") {
        if (targets) return round_deterministic(x, *targets);
        return round_deterministic(x, *tol);
    }
    if (algo == "krp-fix") {
        if (!targets) fail(Errc::InvalidRanks, "krp-fix requires --ranks");
        return round_fixed_krp(x, *targets, seed);
    }
    if (algo == "rand-orth") {
        if (!targets) fail(Errc::InvalidRanks, "rand-orth requires --ranks");
        return round_rand_orth_tt(x, *targets, seed);
    }
    if (algo == "orth-rand") {
        if (targets) return round_orth_rand(x, *targets, seed);
        return round_orth_rand(x, *tol, seed);
    }
    if (algo == "krp-adapt" || algo == "krp-adapt-r") {
        if (!tol) fail(Errc::InvalidArgument, "krp-adapt requires --tol");
        AdaptiveConfig cfg;
        cfg.tolerance = *tol;
        cfg.seed = seed;
        TTTensor out = round_adaptive_krp(x, cfg);
        if (algo == "krp-adapt-r" && out.order() > 1) {
            const double nrm = out.core(out.order() - 1).vertical().norm();
            out = compression_pass(
                out, *tol * nrm / std::sqrt(static_cast<double>(out.order() - 1)));
        }
        return out;
    }
    fail(Errc::InvalidArgument, "unknown algorithm: " + algo);
}

BenchRecord run_rounding(const std::string& algo, const TTTensor& x,
                         const std::optional<std::vector<Index>>& targets,
                         std::optional<double> tol, std::uint64_t seed) {
    BenchRecord rec;
    rec.algorithm = algo;
    rec.seed = seed;
    rec.mode = targets ? "ranks" : "tolerance";
    rec.target = targets
                     ? static_cast<double>(*std::max_element(targets->begin(), targets->end()))
                     : *tol;
    flops::reset();
    const auto start = std::chrono::steady_clock::now();
    TTTensor y = dispatch_rounding(algo, x, targets, tol, seed);
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.counts = flops::counters();
    rec.ranks = y.ranks();
    rec.rel_error = relative_error(x, y);
    return rec;
}

int cmd_round(const std::string& in_path, const std::string& out_path,
              const std::vector<Index>& ranks_flag, std::optional<double> tol,
              const std::string& algo, std::uint64_t seed) {
    TTTensor x = read_ttf1(in_path);
    std::optional<std::vector<Index>> targets;
    if (!ranks_flag.empty()) {
        if (static_cast<Index>(ranks_flag.size()) != x.order() - 1)
            fail(Errc::InvalidRanks, "expected " + std::to_string(x.order() - 1) +
                                         " target ranks, got " +
                                         std::to_string(ranks_flag.size()));
        targets = ranks_flag;
    }
    if (!targets && !tol) fail(Errc::InvalidArgument, "need --ranks or --tol");

    flops::reset();
    const auto start = std::chrono::steady_clock::now();
    TTTensor y = dispatch_rounding(algo, x, targets, tol, seed);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto counts = flops::counters();
    write_ttf1(y, out_path);

    BenchRecord rec{algo,
                    targets ? "ranks" : "tolerance",
                    targets ? static_cast<double>(
                                  *std::max_element(targets->begin(), targets->end()))
                            : *tol,
                    relative_error(x, y),
                    y.ranks(),
                    wall,
                    counts,
                    seed};
    std::cout << to_json(rec).dump() << "\n";
    return 0;
}

int cmd_bench_synthetic(Index d, Index n, Index rank, double eps_pert,
                        const std::vector<Index>& targets, const std::vector<double>& tols,
                        Index num_seeds, const std::string& csv_path, std::uint64_t master_seed) {
    if (d < 2 || n < 1 || rank < 1 || eps_pert < 0 || num_seeds < 1)
        fail(Errc::InvalidArgument, "invalid benchmark parameters");
    if (targets.empty() && tols.empty()) fail(Errc::InvalidArgument, "need --targets or --tols");
    auto syn = synthetic_perturbed_tt(d, n, rank, eps_pert, master_seed);

    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) fail(Errc::IoError, "cannot open " + csv_path);
    csv << kBenchCsvHeader << '\n';

    for (Index target : targets) {
        const std::vector<Index> tr(static_cast<std::size_t>(d - 1), target);
        for (std::uint64_t seed = 0; seed < static_cast<std::uint64_t>(num_seeds); ++seed)
            for (const char* algo : {"det", "krp-fix", "rand-orth", "orth-rand"})
                write_csv_row(csv, run_rounding(algo, syn.x, tr, std::nullopt, seed));
    }
    for (double tol : tols) {
        for (std::uint64_t seed = 0; seed < static_cast<std::uint64_t>(num_seeds); ++seed)
            for (const char* algo : {"det", "krp-adapt", "krp-adapt-r", "orth-rand"})
                write_csv_row(csv, run_rounding(algo, syn.x, std::nullopt, tol, seed));
    }
    std::cout << json{{"csv", csv_path},
                      {"d", d},
                      {"n", n},
                      {"rank", rank},
                      {"eps_pert", eps_pert},
                      {"x_ranks", syn.x.ranks()}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_norm_study(const std::vector<Index>& ds, const std::vector<Index>& widths, Index trials,
                   const std::string& csv_path, bool zero_mode, Index n, Index rank,
                   double eps_pert, std::uint64_t master_seed) {
    if (trials < 100) fail(Errc::InvalidArgument, "need at least 100 trials");
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) fail(Errc::IoError, "cannot open " + csv_path);
    csv << "d,width,trials,mean_estimate,min_estimate,max_estimate,true_norm\n";
    for (Index d : ds) {
        TTTensor x =
            zero_mode
                ? TTTensor::zero(std::vector<Index>(static_cast<std::size_t>(d), n))
                : synthetic_perturbed_tt(d, n, rank, eps_pert,
                                         derive_seed(master_seed, static_cast<std::uint64_t>(d)))
                      .x;
        const double truth = norm_exact(x);
        for (Index width : widths) {
            double sum = 0.0, lo = 1e300, hi = -1e300;
            for (Index t = 0; t < trials; ++t) {
                const double e = estimate_norm_krp(
                    x, width,
                    derive_seed(master_seed,
                                static_cast<std::uint64_t>(d * 1000000 + width * 10000 + t)));
                sum += e;
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            csv << d << ',' << width << ',' << trials << ',' << fmt17(sum / trials) << ','
                << fmt17(lo) << ',' << fmt17(hi) << ',' << fmt17(truth) << '\n';
        }
    }
    std::cout << json{{"csv", csv_path}, {"trials", trials}}.dump() << "\n";
    return 0;
}

int cmd_cookie(Index params, Index grid, Index nsamples, double rho_min, double rho_max,
               double tol, const std::string& strategy_name, std::uint64_t seed,
               const std::string& csv_path, Index max_iters, double round_tol,
               bool no_true_residual) {
    RoundingStrategy strategy;
    if (strategy_name == "det")
        strategy = RoundingStrategy::Deterministic;
    else if (strategy_name == "rand-orth")
        strategy = RoundingStrategy::RandOrthTT;
    else if (strategy_name == "krp-adapt-sum")
        strategy = RoundingStrategy::AdaptiveKRPSum;
    else
        fail(Errc::InvalidArgument, "unknown strategy: " + strategy_name);

    auto prob = build_cookie_problem(params, grid, nsamples, rho_min, rho_max);
    GMRESConfig cfg;
    cfg.rel_tolerance = tol;
    cfg.strategy = strategy;
    cfg.seed = seed;
    cfg.max_iterations = max_iters;
    cfg.rounding_tolerance = round_tol;
    cfg.track_true_residual = !no_true_residual;
    auto res = tt_gmres(prob.op, prob.rhs, cfg);

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv) fail(Errc::IoError, "cannot open " + csv_path);
        csv << "iteration,rel_residual,max_tt_rank,cum_rounding_seconds\n";
        for (std::size_t i = 0; i < res.residual_history.size(); ++i) {
            const double resid = cfg.track_true_residual ? res.true_residual_history[i]
                                                         : res.residual_history[i];
            csv << (i + 1) << ',' << fmt17(resid) << ',' << res.max_rank_history[i] << ','
                << fmt17(res.rounding_seconds_history[i]) << '\n';
        }
    }
    json summary{{"converged", res.converged},
                 {"iterations", res.iterations},
                 {"strategy", strategy_name},
                 {"arnoldi_residual",
                  res.residual_history.empty() ? 0.0 : res.residual_history.back()},
                 {"solution_ranks", res.solution.ranks()},
                 {"rounding_seconds", res.rounding_seconds},
                 {"seed", seed}};
    if (cfg.track_true_residual && !res.true_residual_history.empty())
        summary["true_residual"] = res.true_residual_history.back();
    if (!csv_path.empty()) summary["csv"] = csv_path;
    std::cout << summary.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-train rounding toolkit"};
    app.require_subcommand(1);

    auto* round = app.add_subcommand("round", "round a TTF1 tensor file");
    std::string in_path, out_path, algo = "det";
    std::vector<Index> ranks_flag;
    double tol_flag = 0.0;
    std::uint64_t seed = 0;
    round->add_option("--in", in_path, "input TTF1 file")->required();
    round->add_option("--out", out_path, "output TTF1 file")->required();
    auto* tol_opt = round->add_option("--tol", tol_flag, "relative tolerance");
    round->add_option("--ranks", ranks_flag, "target ranks r_1..r_{d-1}")->delimiter(',');
    round->add_option("--algo", algo, "det|rand-orth|orth-rand|krp-fix|krp-adapt")
        ->check(CLI::IsMember({"det", "rand-orth", "orth-rand", "krp-fix", "krp-adapt"}));
    round->add_option("--seed", seed, "random seed");

    auto* bench =
        app.add_subcommand("bench-synthetic", "rounding benchmark on perturbed low-rank tensors");
    Index bd = 5, bn = 20, brank = 10, bseeds = 10;
    double beps = 1e-5;
    std::vector<Index> btargets;
    std::vector<double> btols;
    std::string bcsv = "bench.csv";
    std::uint64_t bmaster = 20250807;
    bench->add_option("--d", bd, "tensor order");
    bench->add_option("--n", bn, "mode size");
    bench->add_option("--rank", brank, "base rank of the unperturbed tensor");
    bench->add_option("--eps-pert", beps, "perturbation magnitude");
    bench->add_option("--targets", btargets, "fixed-rank targets")->delimiter(',');
    bench->add_option("--tols", btols, "adaptive tolerances")->delimiter(',');
    bench->add_option("--seeds", bseeds, "number of seeds per cell");
    bench->add_option("--csv", bcsv, "output CSV path");
    bench->add_option("--master-seed", bmaster, "seed of the synthetic instance");

    auto* norm = app.add_subcommand("norm-study", "randomized norm estimator statistics");
    std::vector<Index> nds{3, 4, 5}, nwidths{8, 32, 128};
    Index ntrials = 1000, nn = 15, nrank = 6;
    double neps = 1e-5;
    std::string ncsv = "norm_study.csv";
    bool nzero = false;
    std::uint64_t nmaster = 31415;
    norm->add_option("--d", nds, "tensor orders")->delimiter(',');
    norm->add_option("--widths", nwidths, "sketch widths")->delimiter(',');
    norm->add_option("--trials", ntrials, "trials per cell (>= 100)");
    norm->add_option("--csv", ncsv, "output CSV path");
    norm->add_flag("--zero", nzero, "estimate the zero tensor instead");
    norm->add_option("--n", nn, "mode size of the synthetic tensor");
    norm->add_option("--rank", nrank, "base rank of the synthetic tensor");
    norm->add_option("--eps-pert", neps, "perturbation magnitude");
    norm->add_option("--master-seed", nmaster, "seed of the synthetic instance");

    auto* cookie = app.add_subcommand("cookie", "parametric cookie problem via TT-GMRES");
    Index cparams = 3, cgrid = 16, cnsamples = 8, cmaxit = 250;
    double crho_min = 1.0, crho_max = 10.0, ctol = 1e-6, cround_tol = 0.0;
    std::string cstrategy = "krp-adapt-sum", ccsv;
    std::uint64_t cseed = 0;
    bool cnotrack = false;
    cookie->add_option("--params", cparams, "number of parameter modes (discs)");
    cookie->add_option("--grid", cgrid, "interior grid size per spatial direction");
    cookie->add_option("--nsamples", cnsamples, "samples per parameter mode");
    cookie->add_option("--rho-min", crho_min, "smallest coefficient");
    cookie->add_option("--rho-max", crho_max, "largest coefficient");
    cookie->add_option("--tol", ctol, "GMRES relative tolerance");
    cookie->add_option("--strategy", cstrategy, "det|rand-orth|krp-adapt-sum")
        ->check(CLI::IsMember({"det", "rand-orth", "krp-adapt-sum"}));
    cookie->add_option("--seed", cseed, "random seed");
    cookie->add_option("--csv", ccsv, "iteration log CSV path");
    cookie->add_option("--max-iters", cmaxit, "iteration cap");
    cookie->add_option("--round-tol", cround_tol, "per-iteration rounding tolerance");
    cookie->add_flag("--no-true-residual", cnotrack, "skip per-iteration true residuals");

    CLI11_PARSE(app, argc, argv);

    try {
        if (round->parsed()) {
            std::optional<double> tol;
            if (tol_opt->count() > 0) tol = tol_flag;
            return cmd_round(in_path, out_path, ranks_flag, tol, algo, seed);
        }
        if (bench->parsed())
            return cmd_bench_synthetic(bd, bn, brank, beps, btargets, btols, bseeds, bcsv,
                                       bmaster);
        if (norm->parsed())
            return cmd_norm_study(nds, nwidths, ntrials, ncsv, nzero, nn, nrank, neps, nmaster);
        if (cookie->parsed())
            return cmd_cookie(cparams, cgrid, cnsamples, crho_min, crho_max, ctol, cstrategy,
                              cseed, ccsv, cmaxit, cround_tol, cnotrack);
    } catch (const Error& e) {
        std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
