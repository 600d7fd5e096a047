// Command-line driver: reproducible simulate / optimize / verification runs
// on top of the chemoctrl library. Every output file is a pure function of
// the config file and the seed; nothing wall-clock-dependent is written
// inside a run directory (the directory *name* carries the timestamp).

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "chemoctrl/config.hpp"
#include "chemoctrl/csv.hpp"
#include "chemoctrl/diagnostics.hpp"
#include "chemoctrl/errors.hpp"
#include "chemoctrl/helmholtz.hpp"
#include "chemoctrl/objective.hpp"
#include "chemoctrl/operators.hpp"
#include "chemoctrl/optimizer.hpp"
#include "chemoctrl/parallel.hpp"
#include "chemoctrl/snapshot.hpp"
#include "chemoctrl/tangent_adjoint.hpp"

namespace fs = std::filesystem;
using namespace chemoctrl;

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_override;
    bool force = false;
    std::uint64_t seed = 0;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --force writes straight into the output directory; otherwise each run gets
// a fresh timestamped subdirectory so nothing is ever partially overwritten.
fs::path prepare_run_dir(const RunConfig& cfg, const CliArgs& args, const std::string& kind) {
    fs::path base = args.out_override.empty() ? fs::path(cfg.output_dir)
                                              : fs::path(args.out_override);
    if (args.force) {
        fs::create_directories(base);
        return base;
    }
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
    fs::path dir = base / (kind + "-" + stamp);
    for (int k = 1; fs::exists(dir); ++k)
        dir = base / (kind + "-" + stamp + "-" + std::to_string(k));
    fs::create_directories(dir);
    return dir;
}

void write_summary(const fs::path& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

std::string snap_name(const char* prefix, int node) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06d.field", prefix, node);
    return buf;
}

void write_field_series(const fs::path& dir, const char* prefix,
                        const std::vector<ScalarField>& series, const TimeGrid& tg, int stride) {
    for (int n = 0; n < static_cast<int>(series.size()); ++n) {
        if (n % stride != 0 && n != tg.steps()) continue;
        write_snapshot(series[static_cast<std::size_t>(n)], n, tg.time(n),
                       (dir / snap_name(prefix, n)).string());
    }
}

double min_value(const ScalarField& f) {
    double m = f[0];
    for (std::int64_t c = 1; c < f.size(); ++c) m = std::min(m, f[c]);
    return m;
}

TargetData make_targets(const RunConfig& cfg, const Grid& grid, const TimeGrid& tg,
                        const ScalarField& u0, const ScalarField& v0,
                        const SchemeOptions& opts) {
    switch (cfg.targets.kind) {
        case TargetSpec::Kind::constant:
            return TargetData::constant(grid, tg, cfg.targets.u_value, cfg.targets.v_value);
        case TargetSpec::Kind::file: {
            ScalarField u_d = read_snapshot_field(cfg.targets.u_path, grid);
            ScalarField v_d = read_snapshot_field(cfg.targets.v_path, grid);
            TargetData t;
            t.u_d.assign(static_cast<std::size_t>(tg.nodes()), u_d);
            t.v_d.assign(static_cast<std::size_t>(tg.nodes()), v_d);
            return t;
        }
        case TargetSpec::Kind::uncontrolled: {
            Control zero(grid, tg);
            return TargetData::from_trajectory(simulate(u0, v0, zero, tg, opts));
        }
    }
    throw InvalidInputError("unreachable target kind");
}

// Uniform [-1, 1] noise on the control region at every node.
Control random_control(const Grid& grid, const TimeGrid& tg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Control f(grid, tg);
    for (auto& node : f.f)
        for (std::int64_t c = 0; c < node.size(); ++c)
            if (grid.in_control_region(c)) node[c] = dist(rng);
    return f;
}

int run_simulate(const RunConfig& cfg, const CliArgs& args) {
    Grid grid = make_grid(cfg);
    TimeGrid tg = make_time_grid(cfg);
    SchemeOptions opts = make_scheme_options(cfg);
    ScalarField u0 = materialize_field(cfg.u0, grid);
    ScalarField v0 = materialize_field(cfg.v0, grid);
    Control f = make_control(cfg, grid, tg);

    fs::path dir = prepare_run_dir(cfg, args, "simulate");
    save_config(cfg, (dir / "config.ini").string());

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("command", "simulate");
    kv.emplace_back("seed", std::to_string(args.seed));
    kv.emplace_back("threads", std::to_string(worker_count()));
    kv.emplace_back("cells", std::to_string(grid.cell_count()));
    kv.emplace_back("steps", std::to_string(tg.steps()));
    kv.emplace_back("dt", fmt(tg.dt()));

    if (cfg.eps == 0.0) {
        Trajectory traj = simulate(u0, v0, f, tg, opts);
        write_field_series(dir, "u", traj.u, tg, cfg.snapshot_stride);
        write_field_series(dir, "v", traj.v, tg, cfg.snapshot_stride);

        EnergySeries es = entropy_energy(traj);
        CsvWriter csv((dir / "diagnostics.csv").string());
        csv.row({"step", "time", "mass", "mass_drift", "min_u", "min_v", "energy",
                 "dissipation"});
        const double m0 = traj.mass[0];
        for (int n = 0; n <= tg.steps(); ++n) {
            const auto i = static_cast<std::size_t>(n);
            csv.row({CsvWriter::number(n), CsvWriter::number(tg.time(n)),
                     CsvWriter::number(traj.mass[i]),
                     CsvWriter::number(std::abs(traj.mass[i] - m0) / std::abs(m0)),
                     CsvWriter::number(traj.min_u[i]), CsvWriter::number(traj.min_v[i]),
                     CsvWriter::number(es.energy[i]), CsvWriter::number(es.dissipation[i])});
        }

        StrongResidual res = strong_residual(traj, f, opts.flux);
        kv.emplace_back("mass_drift", fmt(mass_drift(traj)));
        kv.emplace_back("max_grad_v", fmt(traj.max_grad_v));
        kv.emplace_back("safe_dt_advisory", fmt(traj.safe_dt_advisory));
        kv.emplace_back("regularity_norm", fmt(regularity_norm(traj)));
        kv.emplace_back("strong_residual_u", fmt(res.residual_u));
        kv.emplace_back("strong_residual_v", fmt(res.residual_v));
    } else {
        RegularizedStateTriple st = simulate_regularized(u0, v0, f, tg, cfg.eps, opts);
        write_field_series(dir, "u", st.u, tg, cfg.snapshot_stride);
        write_field_series(dir, "z", st.z, tg, cfg.snapshot_stride);
        write_field_series(dir, "v", st.v, tg, cfg.snapshot_stride);

        CsvWriter csv((dir / "diagnostics.csv").string());
        csv.row({"step", "time", "mass", "mass_drift", "min_u", "min_v", "zv_gap"});
        const double m0 = st.mass[0];
        double worst_gap = 0.0;
        for (int n = 0; n <= tg.steps(); ++n) {
            const auto i = static_cast<std::size_t>(n);
            ScalarField gap = st.z[i];
            for (std::int64_t c = 0; c < gap.size(); ++c) gap[c] -= st.v[i][c];
            const double gap_norm = l2_norm(gap);
            worst_gap = std::max(worst_gap, gap_norm);
            csv.row({CsvWriter::number(n), CsvWriter::number(tg.time(n)),
                     CsvWriter::number(st.mass[i]),
                     CsvWriter::number(std::abs(st.mass[i] - m0) / std::abs(m0)),
                     CsvWriter::number(min_value(st.u[i])),
                     CsvWriter::number(min_value(st.v[i])), CsvWriter::number(gap_norm)});
        }
        kv.emplace_back("eps", fmt(cfg.eps));
        kv.emplace_back("zv_gap_max", fmt(worst_gap));
        double drift = 0.0;
        for (double m : st.mass) drift = std::max(drift, std::abs(m - m0) / std::abs(m0));
        kv.emplace_back("mass_drift", fmt(drift));
    }

    write_summary(dir / "summary.txt", kv);
    std::cout << "run directory: " << dir.string() << "\n";
    return 0;
}

int run_optimize(const RunConfig& cfg, const CliArgs& args) {
    Grid grid = make_grid(cfg);
    TimeGrid tg = make_time_grid(cfg);
    SchemeOptions opts = make_scheme_options(cfg);
    ScalarField u0 = materialize_field(cfg.u0, grid);
    ScalarField v0 = materialize_field(cfg.v0, grid);
    Control f_init = make_control(cfg, grid, tg);
    TargetData targets = make_targets(cfg, grid, tg, u0, v0, opts);
    OptimizeOptions oopts = make_optimize_options(cfg);

    OptimizeResult res = cfg.method == OptimizerMethod::projected_gradient
                             ? optimize(u0, v0, f_init, tg, targets, cfg.weights, cfg.box, oopts)
                             : optimize_fixed_point(u0, v0, f_init, tg, targets, cfg.weights,
                                                    cfg.box, oopts);

    fs::path dir = prepare_run_dir(cfg, args, "optimize");
    save_config(cfg, (dir / "config.ini").string());

    CsvWriter iter_csv((dir / "iterations.csv").string());
    iter_csv.row({"iter", "objective", "residual", "step", "backtracks"});
    for (const auto& rec : res.report.history)
        iter_csv.row({CsvWriter::number(rec.iter), CsvWriter::number(rec.objective),
                      CsvWriter::number(rec.residual), CsvWriter::number(rec.step),
                      CsvWriter::number(rec.backtracks)});

    write_field_series(dir, "u", res.traj.u, tg, cfg.snapshot_stride);
    write_field_series(dir, "v", res.traj.v, tg, cfg.snapshot_stride);
    write_field_series(dir, "f", res.f.f, tg, cfg.snapshot_stride);

    CsvWriter csv((dir / "diagnostics.csv").string());
    csv.row({"step", "time", "mass", "mass_drift", "min_u", "min_v"});
    const double m0 = res.traj.mass[0];
    for (int n = 0; n <= tg.steps(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        csv.row({CsvWriter::number(n), CsvWriter::number(tg.time(n)),
                 CsvWriter::number(res.traj.mass[i]),
                 CsvWriter::number(std::abs(res.traj.mass[i] - m0) / std::abs(m0)),
                 CsvWriter::number(res.traj.min_u[i]), CsvWriter::number(res.traj.min_v[i])});
    }

    write_summary(dir / "summary.txt",
                  {{"command", "optimize"},
                   {"seed", std::to_string(args.seed)},
                   {"threads", std::to_string(worker_count())},
                   {"method", cfg.method == OptimizerMethod::projected_gradient
                                  ? "projected_gradient"
                                  : "fixed_point"},
                   {"converged", res.report.converged ? "true" : "false"},
                   {"stop_reason", res.report.stop_reason},
                   {"iterations", std::to_string(res.report.iterations)},
                   {"initial_residual", fmt(res.report.initial_residual)},
                   {"final_residual", fmt(res.report.final_residual)},
                   {"final_objective", fmt(res.report.final_objective)},
                   {"control_norm", fmt(control_norm(res.f))},
                   {"mass_drift", fmt(mass_drift(res.traj))}});
    std::cout << "run directory: " << dir.string() << "\n";
    std::cout << (res.report.converged ? "converged" : "not converged") << ": "
              << res.report.stop_reason << " after " << res.report.iterations
              << " iterations, objective " << fmt(res.report.final_objective) << "\n";
    return 0;
}

int run_check_gradient(const RunConfig& cfg, const CliArgs& args) {
    Grid grid = make_grid(cfg);
    TimeGrid tg = make_time_grid(cfg);
    SchemeOptions opts = make_scheme_options(cfg);
    ScalarField u0 = materialize_field(cfg.u0, grid);
    ScalarField v0 = materialize_field(cfg.v0, grid);
    Control f = project(make_control(cfg, grid, tg), cfg.box);
    TargetData targets = make_targets(cfg, grid, tg, u0, v0, opts);

    Trajectory traj = simulate(u0, v0, f, tg, opts);
    AdjointPair adj = solve_adjoint(traj, f, targets, cfg.weights, opts);
    Control g = control_gradient(f, traj, adj, cfg.weights);

    Control dir = random_control(grid, tg, args.seed);
    const double adjoint_value = spacetime_dot(g.f, dir.f, tg);

    auto j_at = [&](double sigma) {
        Control fs = f;
        for (std::size_t n = 0; n < fs.f.size(); ++n)
            for (std::int64_t c = 0; c < fs.f[n].size(); ++c)
                fs.f[n][c] += sigma * dir.f[n][c];
        Trajectory t = simulate(u0, v0, fs, tg, opts);
        return evaluate_objective(t, fs, targets, cfg.weights);
    };

    std::printf("%-12s %-24s %-24s %-12s\n", "sigma", "finite_difference", "adjoint",
                "rel_error");
    double best = 1e300;
    for (double sigma : {1e-3, 1e-4, 1e-5}) {
        const double fd = (j_at(sigma) - j_at(-sigma)) / (2.0 * sigma);
        const double scale = std::max({std::abs(fd), std::abs(adjoint_value), 1e-300});
        const double rel = std::abs(fd - adjoint_value) / scale;
        best = std::min(best, rel);
        std::printf("%-12.3g %-24.16g %-24.16g %-12.3g\n", sigma, fd, adjoint_value, rel);
    }
    const bool ok = best <= 1e-4;
    std::printf("gradient check: %s (best rel error %.3g, seed %" PRIu64 ")\n",
                ok ? "PASS" : "FAIL", best, args.seed);
    return ok ? 0 : 1;
}

int run_verify(const RunConfig& cfg, const CliArgs& args) {
    Grid grid = make_grid(cfg);
    TimeGrid tg = make_time_grid(cfg);
    SchemeOptions opts = make_scheme_options(cfg);
    ScalarField u0 = materialize_field(cfg.u0, grid);
    ScalarField v0 = materialize_field(cfg.v0, grid);
    Control f = make_control(cfg, grid, tg);

    int failures = 0;
    auto report = [&](const char* name, bool ok, double value, double bound) {
        std::printf("[%s] %-28s  value %.3e  bound %.3e\n", ok ? " OK " : "FAIL", name, value,
                    bound);
        if (!ok) ++failures;
    };

    Trajectory traj = simulate(u0, v0, f, tg, opts);

    const double drift = mass_drift(traj);
    report("mass_conservation", drift <= 1e-9, drift, 1e-9);

    StrongResidual sres = strong_residual(traj, f, opts.flux);
    const double res_bound = 10.0 * opts.helmholtz_tol;
    report("strong_residual_u", sres.residual_u <= res_bound, sres.residual_u, res_bound);
    report("strong_residual_v", sres.residual_v <= res_bound, sres.residual_v, res_bound);

    // Discrete balance of the v-integral: each step satisfies
    // (Iv' - Iv)/dt + Iv' = Iu + If ; the solves make this exact to roundoff.
    {
        const auto& mask = grid.control_mask();
        double worst = 0.0;
        for (int n = 0; n < tg.steps(); ++n) {
            const auto i = static_cast<std::size_t>(n);
            const double iv0 = integrate(traj.v[i]);
            const double iv1 = integrate(traj.v[i + 1]);
            const double iu = integrate(traj.u[i]);
            double ifv = 0.0;
            for (std::int64_t c = 0; c < grid.cell_count(); ++c)
                if (mask[static_cast<std::size_t>(c)])
                    ifv += f.f[i][c] * traj.v[i][c];
            ifv *= grid.cell_volume();
            const double lhs = (iv1 - iv0) / tg.dt() + iv1;
            const double scale = std::max({std::abs(iu), std::abs(iv1), 1.0});
            worst = std::max(worst, std::abs(lhs - iu - ifv) / scale);
        }
        report("v_integral_balance", worst <= 1e-9, worst, 1e-9);
    }

    // Krylov residual monotonicity on a seeded random Helmholtz problem.
    {
        std::mt19937_64 rng(args.seed + 1);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        ScalarField rhs(grid);
        for (std::int64_t c = 0; c < grid.cell_count(); ++c) rhs[c] = dist(rng);
        HelmholtzProblem prob;
        prob.a = 1.0;
        prob.b = 0.5;
        prob.tol = 1e-12;
        prob.diagonal_precondition = cfg.diagonal_precondition;
        SolveStats stats;
        helmholtz_solve(prob, rhs, nullptr, &stats);
        double worst = 0.0;
        for (std::size_t i = 1; i < stats.residual_history.size(); ++i) {
            const double prev = stats.residual_history[i - 1];
            const double cur = stats.residual_history[i];
            if (prev > 0.0) worst = std::max(worst, (cur - prev) / prev);
        }
        report("krylov_residual_monotone", worst <= 1e-12, worst, 1e-12);
    }

    // Snapshot round trip, bit for bit.
    {
        fs::path tmp = fs::temp_directory_path() / "chemoctrl_verify_snapshot.field";
        const ScalarField& last = traj.u.back();
        write_snapshot(last, tg.steps(), tg.horizon(), tmp.string());
        ScalarField back = read_snapshot_field(tmp.string(), grid);
        std::int64_t bad = 0;
        for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
            const double a = last[c];
            const double b = back[c];
            if (std::memcmp(&a, &b, sizeof a) != 0) ++bad;
        }
        fs::remove(tmp);
        report("snapshot_round_trip", bad == 0, static_cast<double>(bad), 0.0);
    }

    // Duality of the linearized and adjoint marches on seeded random sources.
    {
        TargetData targets = make_targets(cfg, grid, tg, u0, v0, opts);
        AdjointPair adj = solve_adjoint(traj, f, targets, cfg.weights, opts);

        std::mt19937_64 rng(args.seed + 2);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<ScalarField> g_u, g_v;
        for (int n = 0; n <= tg.steps(); ++n) {
            ScalarField a(grid), b(grid);
            for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
                a[c] = dist(rng);
                b[c] = dist(rng);
            }
            g_u.push_back(a);
            g_v.push_back(b);
        }
        TangentPair lin = solve_linearized(traj, f, nullptr, nullptr, nullptr, &g_u, &g_v, opts);

        double lhs = spacetime_dot(adj.lambda, g_u, tg) + spacetime_dot(adj.eta, g_v, tg);
        double rhs_sum = 0.0;
        for (int n = 0; n <= tg.steps(); ++n) {
            const auto i = static_cast<std::size_t>(n);
            ScalarField hu(grid), dv(grid);
            for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
                hu[c] = cfg.weights.alpha_u *
                        tracking_derivative_density(traj.u[i][c] - targets.u_d[i][c]);
                dv[c] = cfg.weights.alpha_v * (traj.v[i][c] - targets.v_d[i][c]);
            }
            rhs_sum += tg.weight(n) * tg.dt() *
                       (dot_volume(hu, lin.U[i]) + dot_volume(dv, lin.V[i]));
        }
        const double scale = std::max({std::abs(lhs), std::abs(rhs_sum), 1e-300});
        const double rel = std::abs(lhs - rhs_sum) / scale;
        report("tangent_adjoint_duality", rel <= 1e-9, rel, 1e-9);
    }

    std::printf("verify: %d failure%s\n", failures, failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}

int run_sweep_eps(const RunConfig& cfg, const CliArgs& args) {
    Grid grid = make_grid(cfg);
    TimeGrid tg = make_time_grid(cfg);
    SchemeOptions opts = make_scheme_options(cfg);
    ScalarField u0 = materialize_field(cfg.u0, grid);
    ScalarField v0 = materialize_field(cfg.v0, grid);
    Control f = make_control(cfg, grid, tg);

    Trajectory base = simulate(u0, v0, f, tg, opts);

    fs::path dir = prepare_run_dir(cfg, args, "sweep-eps");
    save_config(cfg, (dir / "config.ini").string());
    CsvWriter csv((dir / "sweep.csv").string());
    csv.row({"eps", "u_distance", "zv_gap"});

    std::printf("%-12s %-24s %-24s\n", "eps", "u_distance_L2Q", "zv_gap_max");
    for (double eps : cfg.eps_list) {
        RegularizedStateTriple st = simulate_regularized(u0, v0, f, tg, eps, opts);
        std::vector<ScalarField> diff;
        diff.reserve(st.u.size());
        for (std::size_t n = 0; n < st.u.size(); ++n) {
            ScalarField d = st.u[n];
            for (std::int64_t c = 0; c < d.size(); ++c) d[c] -= base.u[n][c];
            diff.push_back(std::move(d));
        }
        const double u_dist = spacetime_l2_norm(diff, tg);
        double gap = 0.0;
        for (std::size_t n = 0; n < st.z.size(); ++n) {
            ScalarField d = st.z[n];
            for (std::int64_t c = 0; c < d.size(); ++c) d[c] -= st.v[n][c];
            gap = std::max(gap, l2_norm(d));
        }
        csv.row({CsvWriter::number(eps), CsvWriter::number(u_dist), CsvWriter::number(gap)});
        std::printf("%-12.3g %-24.16g %-24.16g\n", eps, u_dist, gap);
    }
    std::cout << "run directory: " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemotaxis control: simulate, optimize, and verify runs"};
    app.require_subcommand(1);

    CliArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "run configuration file")->required();
        sub->add_flag("--force", args.force,
                      "write directly into the output directory (may overwrite)");
        sub->add_option("--seed", args.seed, "seed for all randomized checks (default 0)");
        sub->add_option("--out", args.out_override, "override the configured output directory");
    };

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "run the forward model");
    CLI::App* cmd_optimize = app.add_subcommand("optimize", "solve the control problem");
    CLI::App* cmd_check = app.add_subcommand(
        "check-gradient", "compare the adjoint gradient with finite differences");
    CLI::App* cmd_verify = app.add_subcommand("verify", "run the invariant suite on a config");
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep-eps", "distance of regularized runs to the limit");
    for (CLI::App* sub : {cmd_simulate, cmd_optimize, cmd_check, cmd_verify, cmd_sweep})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.get_name() << ": " << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        RunConfig cfg = load_config(args.config_path);
        if (app.got_subcommand(cmd_simulate)) return run_simulate(cfg, args);
        if (app.got_subcommand(cmd_optimize)) return run_optimize(cfg, args);
        if (app.got_subcommand(cmd_check)) return run_check_gradient(cfg, args);
        if (app.got_subcommand(cmd_verify)) return run_verify(cfg, args);
        if (app.got_subcommand(cmd_sweep)) return run_sweep_eps(cfg, args);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        if (e.line > 0)
            std::cerr << "config error (line " << e.line << "): " << e.what() << "\n";
        else
            std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
