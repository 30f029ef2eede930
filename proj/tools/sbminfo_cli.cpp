// sbminfo: experiment runner for the two-groups SBM information/estimation
// limits. Subcommands sweep the single-letter formulas, run AMP against
// state evolution, exercise the exact small-n oracle suite, and export
// sampled instances. Every run writes a JSON manifest next to its output.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbminfo/amp.hpp"
#include "sbminfo/errors.hpp"
#include "sbminfo/fixed_point.hpp"
#include "sbminfo/models.hpp"
#include "sbminfo/oracle.hpp"
#include "sbminfo/rng.hpp"
#include "sbminfo/scalar_channel.hpp"

using nlohmann::json;
using namespace sbminfo;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kLog2 = 0.6931471805599453;

struct ExperimentConfig {
    std::string command;
    double lambda_min = 0.0;
    double lambda_max = 4.0;
    int steps = 81;
    double eps = 0.0;
    int n = 1000;
    double pbar = 0.5;
    std::uint64_t seed = 1;
    int quad_order = 61;
    double tol = 1e-12;
    long max_iter = 100000;
    int mc_samples = 2000;
    int iters = 10;                // AMP / SE iterations
    std::string sweep = "lambda";  // or "theta"
    std::string format = "csv";
    std::string out = "out";
    bool pbar_given = false;       // --pbar or config key present (amp input choice)
};

void to_json(json& j, const ExperimentConfig& c) {
    j = json{{"command", c.command},   {"lambda_min", c.lambda_min},
             {"lambda_max", c.lambda_max}, {"steps", c.steps},
             {"eps", c.eps},           {"n", c.n},
             {"pbar", c.pbar},         {"seed", c.seed},
             {"quad_order", c.quad_order}, {"tol", c.tol},
             {"max_iter", c.max_iter}, {"mc_samples", c.mc_samples},
             {"iters", c.iters},       {"sweep", c.sweep},
             {"format", c.format},     {"out", c.out}};
}

void from_json(const json& j, ExperimentConfig& c) {
    c.command = j.value("command", c.command);
    c.lambda_min = j.value("lambda_min", c.lambda_min);
    c.lambda_max = j.value("lambda_max", c.lambda_max);
    c.steps = j.value("steps", c.steps);
    c.eps = j.value("eps", c.eps);
    c.n = j.value("n", c.n);
    c.pbar = j.value("pbar", c.pbar);
    c.seed = j.value("seed", c.seed);
    c.quad_order = j.value("quad_order", c.quad_order);
    c.tol = j.value("tol", c.tol);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.mc_samples = j.value("mc_samples", c.mc_samples);
    c.iters = j.value("iters", c.iters);
    c.sweep = j.value("sweep", c.sweep);
    c.format = j.value("format", c.format);
    c.out = j.value("out", c.out);
}

void validate(const ExperimentConfig& c) {
    if (c.lambda_min > c.lambda_max)
        throw parameter_error("config: lambda_min must be <= lambda_max");
    if (c.steps < 1) throw parameter_error("config: steps must be >= 1");
    if (!(c.tol > 0.0)) throw parameter_error("config: tol must be positive");
    if (c.format != "csv" && c.format != "json")
        throw parameter_error("config: format must be csv or json");
    if (c.sweep != "lambda" && c.sweep != "theta")
        throw parameter_error("config: sweep must be lambda or theta");
}

int thread_budget() {
    if (const char* env = std::getenv("SBMINFO_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count) across the thread budget. Each i owns its
// output slot, so the result is independent of scheduling.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const int workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (std::thread& t : pool) t.join();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct CurvePoint {
    double lambda = 0.0;  // the sweep variable (theta in theta mode)
    double gamma_star = 0.0;
    double psi = 0.0;
    double upper_bound = 0.0;    // lambda / 4
    double mmse_limit = 0.0;     // 1 - (gamma*/lambda)^2
    double vmmse_lower = 0.0;    // 1 - gamma*/lambda
    double vmmse_upper = 0.0;    // 1 - (gamma*/lambda)^2
    double overlap_lower = 0.0;  // (gamma*/lambda)^2
};

void emit_curve(const std::vector<CurvePoint>& points, const std::string& format,
                const std::string& out) {
    if (points.empty()) throw parameter_error("emit_curve: no points to emit");
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open " + out + " for writing");
    if (format == "csv") {
        file << "lambda,gamma_star,psi,upper_bound,mmse_limit,vmmse_lower,"
                "vmmse_upper,overlap_lower\n";
        for (const CurvePoint& p : points)
            file << fmt(p.lambda) << ',' << fmt(p.gamma_star) << ',' << fmt(p.psi)
                 << ',' << fmt(p.upper_bound) << ',' << fmt(p.mmse_limit) << ','
                 << fmt(p.vmmse_lower) << ',' << fmt(p.vmmse_upper) << ','
                 << fmt(p.overlap_lower) << '\n';
    } else {
        json j;
        auto column = [&](const char* name, auto&& get) {
            json arr = json::array();
            for (const CurvePoint& p : points) arr.push_back(get(p));
            j[name] = arr;
        };
        column("lambda", [](const CurvePoint& p) { return p.lambda; });
        column("gamma_star", [](const CurvePoint& p) { return p.gamma_star; });
        column("psi", [](const CurvePoint& p) { return p.psi; });
        column("upper_bound", [](const CurvePoint& p) { return p.upper_bound; });
        column("mmse_limit", [](const CurvePoint& p) { return p.mmse_limit; });
        column("vmmse_lower", [](const CurvePoint& p) { return p.vmmse_lower; });
        column("vmmse_upper", [](const CurvePoint& p) { return p.vmmse_upper; });
        column("overlap_lower", [](const CurvePoint& p) { return p.overlap_lower; });
        file << j.dump(2) << '\n';
    }
    if (!file) throw std::runtime_error("write failed on " + out);
}

void write_manifest(const ExperimentConfig& config, double wall_seconds,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["config"] = config;
    manifest["version"] = kVersion;
    manifest["wall_time_s"] = wall_seconds;
    manifest["outputs"] = outputs;
    std::ofstream file(config.out + ".manifest.json");
    if (!file) throw std::runtime_error("cannot write manifest for " + config.out);
    file << manifest.dump(2) << '\n';
}

int run_curve(const ExperimentConfig& config) {
    const QuadratureRule rule = gauss_hermite(config.quad_order);
    const SolverOptions opts{config.tol, config.max_iter};

    std::vector<double> grid(config.steps);
    for (int i = 0; i < config.steps; ++i)
        grid[i] = config.steps == 1
                      ? config.lambda_min
                      : config.lambda_min + (config.lambda_max - config.lambda_min) *
                                                i / (config.steps - 1);
    if (config.sweep == "theta") {
        // theta parametrizes (p, q) at fixed (n, pbar); lambda_n(theta) = theta,
        // so the curve is evaluated at lambda = theta once feasibility holds.
        for (double theta : grid) params_from_lambda(config.n, config.pbar, theta);
    }

    std::vector<CurvePoint> points(config.steps);
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;
    parallel_for(config.steps, [&](int i) {
        if (failed.load()) return;
        try {
            CurvePoint p;
            p.lambda = grid[i];
            double ratio;  // gamma*/lambda, -> eps as lambda -> 0
            if (grid[i] <= 0.0) {
                p.gamma_star = 0.0;
                p.psi = config.eps * kLog2;
                ratio = config.eps;
            } else {
                const FixedPointSolution sol =
                    solve_gamma_star(grid[i], config.eps, rule, opts);
                p.gamma_star = sol.gamma_star;
                p.psi = sol.psi;
                ratio = sol.gamma_star / grid[i];
            }
            p.upper_bound = grid[i] / 4.0;
            p.mmse_limit = 1.0 - ratio * ratio;
            p.vmmse_lower = 1.0 - ratio;
            p.vmmse_upper = 1.0 - ratio * ratio;
            p.overlap_lower = ratio * ratio;
            points[i] = p;
        } catch (const std::exception& err) {
            std::lock_guard<std::mutex> lock(error_mutex);
            failed = true;
            error_message = err.what();
        }
    });
    if (failed) throw std::runtime_error("sweep failed: " + error_message);
    emit_curve(points, config.format, config.out);
    return 0;
}

int run_se(const ExperimentConfig& config) {
    const QuadratureRule rule = gauss_hermite(config.quad_order);
    const SETrajectory traj =
        se_trajectory(config.lambda_min, config.eps, config.iters, rule);
    std::ofstream file(config.out);
    if (!file) throw std::runtime_error("cannot open " + config.out);
    file << "t,gamma,mu,sigma2,se_overlap,se_mse\n";
    for (std::size_t t = 0; t < traj.gammas.size(); ++t) {
        const double ratio = traj.gammas[t] / config.lambda_min;
        file << t << ',' << fmt(traj.gammas[t]) << ',' << fmt(traj.mus[t]) << ','
             << fmt(traj.sigmas2[t]) << ',' << fmt(ratio) << ','
             << fmt(1.0 - ratio * ratio) << '\n';
    }
    return 0;
}

int run_amp(const ExperimentConfig& config) {
    if (!(config.eps > 0.0))
        throw parameter_error(
            "amp: eps must be > 0 (side information breaks the sign symmetry; "
            "default 0.05)");
    const QuadratureRule rule = gauss_hermite(config.quad_order);
    const double lambda = config.lambda_min;

    Eigen::VectorXi labels;
    Eigen::MatrixXd y;
    if (config.pbar_given) {
        // Rescaled SBM input at matched lambda.
        const SbmParams params = params_from_lambda(config.n, config.pbar, lambda);
        const SbmInstance inst = sample_sbm(params, config.seed);
        labels = inst.labels;
        y = rescale_adjacency(inst);
    } else {
        SpikedInstance inst = sample_spiked(config.n, lambda, config.seed);
        labels = inst.labels;
        y = std::move(inst.y);
    }
    const SideInfo side = sample_side_info(labels, config.eps, config.seed);
    const AmpTrajectory traj = amp_run(y, side, lambda, config.iters, labels, rule);
    write_trajectory_csv(traj, config.out);
    return 0;
}

int run_sbm_sample(const ExperimentConfig& config) {
    const SbmParams params =
        params_from_lambda(config.n, config.pbar, config.lambda_min);
    const SbmInstance inst = sample_sbm(params, config.seed);
    write_sbm_edge_list(inst, config.out);
    write_labels(inst.labels, config.out + ".labels");
    return 0;
}

json check_record(const std::string& name, json params, double estimate,
                  double std_error, double bound, bool pass) {
    return json{{"check_name", name}, {"params", std::move(params)},
                {"estimate", estimate}, {"stderr", std_error},
                {"bound", bound},       {"pass", pass}};
}

int run_oracle_suite(const ExperimentConfig& config) {
    const int n = std::min(config.n, kMaxExactN);
    const double lambda = config.lambda_min > 0.0 ? config.lambda_min : 2.0;
    const int mc = config.mc_samples;
    json checks = json::array();

    // Elementary bound on a 5-point lambda grid.
    for (int k = 1; k <= 5; ++k) {
        const double lam = lambda * k / 5.0;
        const MonteCarloEstimate est =
            exact_mi_gauss(n, lam, 0.0, mc, derive_seed(config.seed, 10, k));
        const double bound = lam / 4.0 + 1.0 / n + 3.0 * est.std_error;
        checks.push_back(check_record("elementary_bound",
                                      {{"n", n}, {"lambda", lam}}, est.value,
                                      est.std_error, bound, est.value <= bound));
    }

    // I-MMSE finite difference.
    {
        const MonteCarloEstimate res =
            immse_check(n, lambda, 0.05, 0.1, mc, derive_seed(config.seed, 11));
        const double bound = 0.01 + 3.0 * res.std_error;
        checks.push_back(check_record(
            "immse_residual",
            {{"n", n}, {"lambda", lambda}, {"dlambda", 0.05}, {"eps", 0.1}},
            res.value, res.std_error, bound, std::fabs(res.value) <= bound));
    }

    // Metric sandwich on enumerated instances.
    {
        int violations = 0;
        const int instances = 500;
        for (int k = 0; k < instances; ++k) {
            const SpikedInstance inst =
                sample_spiked(n, lambda, derive_seed(config.seed, 12, k));
            ExactPosterior post = exact_posterior(inst);
            post.normalize();
            const MetricsReport rep = metrics_from_posterior(post, inst.labels);
            const bool ok =
                rep.vmmse <= rep.mmse_matrix + 1e-9 &&
                1.0 - std::sqrt(1.0 - (1.0 - 1.0 / n) * rep.mmse_matrix) <=
                    rep.vmmse + 1e-9 &&
                rep.overlap_lb >= 1.0 - rep.vmmse - 5.0 / std::sqrt(n);
            if (!ok) ++violations;
        }
        checks.push_back(check_record(
            "metric_sandwich",
            {{"n", n}, {"lambda", lambda}, {"instances", instances}}, violations,
            0.0, 0.0, violations == 0));
    }

    // Universality gap, dense vs sparse pbar. The sparsest pbar the
    // parametrization admits at lambda = 1 and small n is ~lambda/(n+lambda);
    // 0.1 keeps q strictly positive.
    {
        const std::vector<UniversalityGap> gaps =
            universality_gap(n, 1.0, {0.5, 0.1}, mc, derive_seed(config.seed, 13));
        checks.push_back(check_record(
            "universality_gap_dense",
            {{"n", n}, {"lambda", 1.0}, {"pbar", 0.5}, {"gap_sparse", gaps[1].gap}},
            gaps[0].gap, gaps[0].std_error, 0.05, gaps[0].gap < 0.05));
        const double combined = std::sqrt(gaps[0].std_error * gaps[0].std_error +
                                          gaps[1].std_error * gaps[1].std_error);
        checks.push_back(check_record(
            "universality_trend",
            {{"n", n}, {"lambda", 1.0}, {"pbar", {0.5, 0.1}}},
            gaps[0].gap - gaps[1].gap, combined, 3.0 * combined,
            gaps[0].gap - gaps[1].gap <= 3.0 * combined));
    }

    // Derivative of the SBM mutual information along the theta path.
    {
        const ThetaDerivativeCheck check = sbm_theta_derivative_check(
            std::min(n, 10), 1.0, 0.05, 0.5, mc, derive_seed(config.seed, 14));
        const double bound = 1.25 * check.bound_scale + 3.0 * check.std_error;
        checks.push_back(
            check_record("theta_derivative",
                         {{"n", std::min(n, 10)}, {"theta", 1.0}, {"pbar", 0.5}},
                         check.residual, check.std_error, bound,
                         std::fabs(check.residual) <= bound));
    }

    std::ofstream file(config.out);
    if (!file) throw std::runtime_error("cannot open " + config.out);
    file << checks.dump(2) << '\n';

    for (const json& c : checks)
        if (!c["pass"].get<bool>()) return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-letter information limits of the two-groups SBM"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string config_path;
    json file_json;

    // The config file is the base layer; flags override it. Scan for --config
    // up front so the file can be loaded before CLI11 binds the flags.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--config") == 0) config_path = argv[i + 1];
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << json{{"error", "parameter"},
                              {"message", "cannot read config file " + config_path}}
                             .dump()
                      << '\n';
            return 1;
        }
        try {
            in >> file_json;
            from_json(file_json, config);
        } catch (const std::exception& err) {
            std::cerr << json{{"error", "parameter"}, {"message", err.what()}}.dump()
                      << '\n';
            return 1;
        }
    }

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--lambda-min", config.lambda_min,
                        "sweep start; the value for single-lambda commands");
        cmd->add_option("--lambda-max", config.lambda_max, "sweep end");
        cmd->add_option("--steps", config.steps, "grid points");
        cmd->add_option("--eps", config.eps, "reveal probability");
        cmd->add_option("--n", config.n, "vertex count");
        cmd->add_option("--pbar", config.pbar, "average edge probability");
        cmd->add_option("--seed", config.seed, "master seed");
        cmd->add_option("--quad-order", config.quad_order, "Gauss-Hermite order");
        cmd->add_option("--tol", config.tol, "solver tolerance");
        cmd->add_option("--max-iter", config.max_iter, "solver iteration budget");
        cmd->add_option("--mc-samples", config.mc_samples, "Monte Carlo replicates");
        cmd->add_option("--iters", config.iters, "AMP/SE iterations");
        cmd->add_option("--sweep", config.sweep, "sweep variable: lambda | theta");
        cmd->add_option("--format", config.format, "csv | json");
        cmd->add_option("--out", config.out, "output path");
        cmd->add_option("--config", config_path, "JSON config file (flags override)");
    };

    CLI::App* mi_curve = app.add_subcommand("mi-curve", "Psi(gamma*, lambda) sweep");
    CLI::App* mmse_curve =
        app.add_subcommand("mmse-curve", "asymptotic estimation-error sweep");
    CLI::App* se = app.add_subcommand("se", "state-evolution trajectory");
    CLI::App* amp = app.add_subcommand("amp", "AMP run against state evolution");
    CLI::App* oracle = app.add_subcommand("oracle-suite", "exact small-n oracle checks");
    CLI::App* sbm_sample =
        app.add_subcommand("sbm-sample", "sample and export a graph");
    for (CLI::App* cmd : {mi_curve, mmse_curve, se, amp, oracle, sbm_sample})
        add_common(cmd);

    try {
        app.parse(argc, argv);
        CLI::App* active = app.get_subcommands().front();
        config.command = active->get_name();

        auto given = [&](const std::string& flag, const char* key) {
            return active->count(flag) > 0 || file_json.contains(key);
        };
        // Per-command defaults for values no source provided.
        if (config.command == "amp") {
            if (!given("--eps", "eps")) config.eps = 0.05;
            if (!given("--lambda-min", "lambda_min")) config.lambda_min = 4.0;
        } else if (config.command == "se") {
            if (!given("--eps", "eps")) config.eps = 0.05;
            if (!given("--lambda-min", "lambda_min")) config.lambda_min = 2.0;
            if (!given("--iters", "iters")) config.iters = 50;
        } else if (config.command == "oracle-suite") {
            if (!given("--n", "n")) config.n = 10;
            if (!given("--lambda-min", "lambda_min")) config.lambda_min = 2.0;
        } else if (config.command == "sbm-sample") {
            if (!given("--lambda-min", "lambda_min")) config.lambda_min = 2.0;
        }
        config.pbar_given = given("--pbar", "pbar");
        validate(config);

        const auto start = std::chrono::steady_clock::now();
        int status = 0;
        std::vector<std::string> outputs{config.out};
        if (config.command == "mi-curve" || config.command == "mmse-curve")
            status = run_curve(config);
        else if (config.command == "se")
            status = run_se(config);
        else if (config.command == "amp")
            status = run_amp(config);
        else if (config.command == "oracle-suite")
            status = run_oracle_suite(config);
        else if (config.command == "sbm-sample") {
            status = run_sbm_sample(config);
            outputs.push_back(config.out + ".labels");
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        write_manifest(config, wall, outputs);
        return status;
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const parameter_error& err) {
        std::cerr << json{{"error", "parameter"}, {"message", err.what()}}.dump()
                  << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << json{{"error", "runtime"}, {"message", err.what()}}.dump()
                  << '\n';
        return 2;
    }
}
