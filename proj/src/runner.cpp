// runner.cpp

#include "nmdyn/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace nmdyn::cli {

using nlohmann::json;

namespace {

constexpr double kCutoffStudyStepRatio = 0.025;

json check_json(double value, double tolerance, bool pass) {
    return {{"value", value}, {"tolerance", tolerance}, {"pass", pass}};
}

EvolveOptions evolve_options(const RunConfig& cfg) {
    EvolveOptions eo;
    eo.ode.rtol = cfg.solver.rtol;
    eo.ode.atol = cfg.solver.atol;
    eo.scaling = cfg.unrenormalized_init ? InitialScaling::Unrenormalized : InitialScaling::Renormalized;
    return eo;
}

KernelFunction memory_kernel(const BathModel& bath) {
    return bath.peak_count() == 0 ? zero_kernel() : lorentz_kernel(bath);
}

std::string csv_header(Eigen::Index levels) {
    std::string h = "t";
    for (Eigen::Index i = 0; i <= levels; ++i)
        for (Eigen::Index j = 0; j <= levels; ++j) {
            const std::string base = ",rho_" + std::to_string(i) + "_" + std::to_string(j);
            h += base + "_re" + base + "_im";
        }
    return h + ",excited_population\n";
}

struct SweepPoint {
    std::size_t index = 0;
    json values = json::object();
    int exit_code = kExitOk;
    std::string message;
};

std::string point_dir_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%04zu", index);
    return buf;
}

int run_sweep(const RunConfig& cfg, const RunOptions& options, std::ostream& log) {
    if (cfg.sweep.empty())
        throw ConfigError(ErrorKind::ValidationError, "sweep", "sweep needs at least one axis");

    json base = to_json(cfg);
    base.erase("sweep");

    std::size_t total = 1;
    for (const auto& axis : cfg.sweep) total *= axis.values.size();

    std::vector<SweepPoint> points(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        points[idx].index = idx;
        std::size_t rem = idx;
        // Last axis varies fastest.
        for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
            const auto& axis = cfg.sweep[a];
            points[idx].values[axis.path] = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
        }
    }

    auto run_point = [&](SweepPoint& p) {
        json doc = base;
        try {
            for (const auto& axis : cfg.sweep) doc[json::json_pointer(axis.path)] = p.values[axis.path];
            const RunConfig point_cfg = config_from_json(doc);
            const SimulationOutput result = run_simulation(point_cfg);
            const auto dir = options.out_dir / point_dir_name(p.index);
            std::filesystem::create_directories(dir);
            write_atomically(dir / "trajectory.csv", result.csv);
            write_atomically(dir / "report.json", result.report.dump(2) + "\n");
        } catch (const ConfigError& e) {
            p.exit_code = kExitConfig;
            p.message = e.what();
        } catch (const json::exception& e) {
            p.exit_code = kExitConfig;
            p.message = e.what();
        } catch (const Error& e) {
            p.exit_code = kExitNumerical;
            p.message = e.what();
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < total; i = next++) run_point(points[i]);
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(total)));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
    }

    json manifest;
    json axes = json::array();
    for (const auto& axis : cfg.sweep) axes.push_back({{"path", axis.path}, {"values", axis.values}});
    manifest["axes"] = std::move(axes);
    json entries = json::array();
    int worst = kExitOk;
    for (const auto& p : points) {
        json e = {{"index", p.index}, {"values", p.values}, {"exit_code", p.exit_code}};
        if (p.exit_code == kExitOk) {
            e["dir"] = point_dir_name(p.index);
        } else {
            e["error"] = p.message;
            log << "sweep point " << p.index << ": " << p.message << "\n";
        }
        worst = std::max(worst, p.exit_code);
        entries.push_back(std::move(e));
    }
    manifest["points"] = std::move(entries);
    std::filesystem::create_directories(options.out_dir);
    write_atomically(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
    return worst;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    if (name == "simulate") return Command::Simulate;
    if (name == "check") return Command::Check;
    if (name == "compare") return Command::Compare;
    if (name == "cutoff-study") return Command::CutoffStudy;
    if (name == "sweep") return Command::Sweep;
    return std::nullopt;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

json dilation_json(const DilationReport& r) {
    json blocks = json::array();
    for (const auto& b : r.per_block)
        blocks.push_back({{"energy", b.energy}, {"min_eigenvalue", b.min_eigenvalue}, {"pass", b.pass}});
    return {{"spectral_pass", r.spectral_pass},
            {"min_eigenvalue_v", r.min_eigenvalue_v},
            {"psd_tolerance", r.psd_tolerance},
            {"closed_form_pass", r.closed_form_pass},
            {"threshold", r.threshold},
            {"min_eigenvalue_h", r.min_eigenvalue_h},
            {"per_block", std::move(blocks)}};
}

SimulationOutput run_simulation(const RunConfig& cfg) {
    const TimeGrid grid = cfg.time.grid();
    const Trajectory traj = simulate(cfg.system, cfg.bath, cfg.initial, grid, evolve_options(cfg));
    const auto obs = observables(traj, cfg.initial);
    const DilationReport dilation = check_dilation_closed_form(cfg.system, cfg.bath);

    DensityDiagnostics worst;
    worst.min_eigenvalue = std::numeric_limits<double>::infinity();
    worst.third_eigenvalue = -std::numeric_limits<double>::infinity();
    for (const auto& o : obs) {
        const DensityDiagnostics d = diagnose(o.rho);
        if (!d.ok())
            throw Error(ErrorKind::InvariantViolation,
                        "reduced density matrix invariants violated at t = " + format_double(o.t));
        worst.asymmetry = std::max(worst.asymmetry, d.asymmetry);
        worst.trace_deviation = std::max(worst.trace_deviation, d.trace_deviation);
        worst.min_eigenvalue = std::min(worst.min_eigenvalue, d.min_eigenvalue);
        worst.third_eigenvalue = std::max(worst.third_eigenvalue, d.third_eigenvalue);
    }

    const Eigen::Index n = cfg.system.levels();
    std::string csv = csv_header(n);
    for (const auto& o : obs) {
        csv += format_double(o.t);
        for (Eigen::Index i = 0; i <= n; ++i)
            for (Eigen::Index j = 0; j <= n; ++j) {
                csv += ',' + format_double(o.rho.matrix(i, j).real());
                csv += ',' + format_double(o.rho.matrix(i, j).imag());
            }
        csv += ',' + format_double(o.excited_population) + '\n';
    }

    const double growth = max_norm_increase(traj);
    json norm_check = check_json(growth, kNormSlack, growth <= kNormSlack);
    norm_check["applies"] = dilation.spectral_pass;

    json report;
    report["command"] = "simulate";
    report["config"] = to_json(cfg);
    report["dilation"] = dilation_json(dilation);
    report["trajectory"] = {
        {"points", obs.size()},
        {"final_excited_population", obs.back().excited_population},
        {"final_ground_population", obs.back().ground_population},
        {"checks",
         {{"max_asymmetry", check_json(worst.asymmetry, kDensityTolerance, worst.asymmetry < kDensityTolerance)},
          {"max_trace_deviation",
           check_json(worst.trace_deviation, kDensityTolerance, worst.trace_deviation < kDensityTolerance)},
          {"min_rho_eigenvalue",
           check_json(worst.min_eigenvalue, kDensityTolerance, worst.min_eigenvalue > -kDensityTolerance)},
          {"max_third_eigenvalue",
           check_json(worst.third_eigenvalue, kDensityTolerance, worst.third_eigenvalue < kDensityTolerance)},
          {"max_norm_increase", std::move(norm_check)}}}};
    return SimulationOutput{std::move(csv), std::move(report)};
}

ComparisonResult run_comparison(const RunConfig& cfg) {
    const std::size_t steps = cfg.solver.oracle_steps;
    const double t_max = cfg.time.t_max;
    const TimeGrid grid = TimeGrid::uniform(t_max, steps);
    const Trajectory traj = simulate(cfg.system, cfg.bath, cfg.initial, grid, evolve_options(cfg));

    const KernelFunction kernel = memory_kernel(cfg.bath);
    const double eta = cfg.bath.eta();
    auto solve = [&](std::size_t s) {
        return solve_renormalized(cfg.system, eta, kernel, cfg.initial.psi(), t_max, s);
    };
    const OracleTrajectory extrapolated = richardson_extrapolate(solve, steps);
    const OracleTrajectory raw = solve(steps);

    ComparisonResult r;
    r.steps = steps;
    r.sup = compare_trajectories(traj, extrapolated, {TrajectoryNorm::Sup});
    r.l2 = compare_trajectories(traj, extrapolated, {TrajectoryNorm::L2});
    r.raw_sup = compare_trajectories(traj, raw, {TrajectoryNorm::Sup});
    return r;
}

CutoffStudyResult run_cutoff_study(const RunConfig& cfg) {
    const auto& cutoffs = cfg.cutoff_study.cutoffs;
    const double t_max = cfg.time.t_max;
    const double w_max = *std::max_element(cutoffs.begin(), cutoffs.end());
    const auto needed = static_cast<std::size_t>(std::ceil(t_max * w_max / kCutoffStudyStepRatio));
    const std::size_t steps = std::max(cfg.solver.oracle_steps, needed);

    const KernelFunction kernel = memory_kernel(cfg.bath);
    const auto family = solve_cutoff_family(cfg.system, cfg.bath.eta(), cutoffs, kernel, cfg.initial.psi(), t_max, steps);
    const auto reference = solve_renormalized(cfg.system, cfg.bath.eta(), kernel, cfg.initial.psi(), t_max, steps);

    CutoffStudyResult result;
    result.steps = steps;
    CompareOptions window{TrajectoryNorm::Sup, cfg.cutoff_study.t_from};
    for (std::size_t k = 0; k < cutoffs.size(); ++k)
        result.rows.push_back({cutoffs[k], compare_trajectories(family[k], reference, window)});
    return result;
}

int run(Command command, const RunConfig& cfg, const RunOptions& options, std::ostream& out, std::ostream& log) {
    namespace fs = std::filesystem;
    try {
        switch (command) {
            case Command::Simulate: {
                const SimulationOutput result = run_simulation(cfg);
                fs::create_directories(options.out_dir);
                write_atomically(options.out_dir / "trajectory.csv", result.csv);
                write_atomically(options.out_dir / "report.json", result.report.dump(2) + "\n");
                return kExitOk;
            }
            case Command::Check: {
                const std::string text = dilation_json(check_dilation_closed_form(cfg.system, cfg.bath)).dump(2) + "\n";
                fs::create_directories(options.out_dir);
                write_atomically(options.out_dir / "dilation.json", text);
                out << text;
                return kExitOk;
            }
            case Command::Compare: {
                const ComparisonResult r = run_comparison(cfg);
                const bool pass = r.sup <= options.threshold;
                json report;
                report["command"] = "compare";
                report["config"] = to_json(cfg);
                report["oracle"] = {{"steps", r.steps}, {"extrapolation", "richardson h, h/2, h/4 (orders 2, 3)"}};
                report["deviation"] = {{"sup", check_json(r.sup, options.threshold, pass)},
                                       {"l2", r.l2},
                                       {"raw_second_order_sup", r.raw_sup}};
                fs::create_directories(options.out_dir);
                write_atomically(options.out_dir / "compare.json", report.dump(2) + "\n");
                out << "sup deviation " << format_double(r.sup) << " (threshold " << format_double(options.threshold)
                    << ")\n";
                if (!pass) {
                    log << "comparison threshold exceeded\n";
                    return kExitThreshold;
                }
                return kExitOk;
            }
            case Command::CutoffStudy: {
                const CutoffStudyResult r = run_cutoff_study(cfg);
                std::string csv = "Omega,sup_deviation\n";
                json rows = json::array();
                for (std::size_t k = 0; k < r.rows.size(); ++k) {
                    const auto& row = r.rows[k];
                    csv += format_double(row.cutoff) + ',' + format_double(row.sup_deviation) + '\n';
                    json entry = {{"cutoff", row.cutoff}, {"sup_deviation", row.sup_deviation}};
                    if (k > 0 && row.sup_deviation > 0.0 && r.rows[k - 1].sup_deviation > 0.0)
                        entry["observed_rate"] = std::log(r.rows[k - 1].sup_deviation / row.sup_deviation) /
                                                 std::log(row.cutoff / r.rows[k - 1].cutoff);
                    rows.push_back(std::move(entry));
                }
                json report = {{"command", "cutoff-study"},
                               {"config", to_json(cfg)},
                               {"steps", r.steps},
                               {"t_from", cfg.cutoff_study.t_from},
                               {"rows", std::move(rows)}};
                fs::create_directories(options.out_dir);
                write_atomically(options.out_dir / "cutoff_study.csv", csv);
                write_atomically(options.out_dir / "cutoff_study.json", report.dump(2) + "\n");
                out << csv;
                return kExitOk;
            }
            case Command::Sweep:
                return run_sweep(cfg, options, log);
        }
    } catch (const ConfigError& e) {
        log << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        log << e.what() << "\n";
        return kExitNumerical;
    } catch (const fs::filesystem_error& e) {
        log << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace nmdyn::cli
