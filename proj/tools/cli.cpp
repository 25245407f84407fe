#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "lbp/analytics.hpp"
#include "lbp/experiments.hpp"
#include "lbp/lattice.hpp"
#include "lbp/oracle.hpp"
#include "lbp/rectangle_process.hpp"
#include "lbp/report.hpp"

namespace lbp::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(what + ": not a number: '" + s + "'");
}

std::int64_t to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(what + ": not an integer: '" + s + "'");
}

// lo:hi:steps, optionally lo:hi:steps:log for geometric spacing.
std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log"))
        throw UsageError("--p-grid expects lo:hi:steps or lo:hi:steps:log, got '" + spec + "'");
    const double lo = to_double(parts[0], "--p-grid"), hi = to_double(parts[1], "--p-grid");
    const std::int64_t steps = to_int(parts[2], "--p-grid");
    const bool log = parts.size() == 4;
    if (steps < 1 || hi < lo || (log && lo <= 0)) throw UsageError("--p-grid: need steps >= 1, lo <= hi (lo > 0 for log)");
    std::vector<double> out;
    for (std::int64_t i = 0; i < steps; ++i) {
        const double t = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
        out.push_back(log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return out;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(to_double(part, what));
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

// lo:hi or a single integer.
std::vector<std::int64_t> parse_int_range(const std::string& s, const std::string& what) {
    std::vector<std::int64_t> out;
    for (const auto& item : split(s, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_int(parts[0], what));
        } else if (parts.size() == 2) {
            const auto lo = to_int(parts[0], what), hi = to_int(parts[1], what);
            if (hi < lo) throw UsageError(what + ": empty range '" + item + "'");
            for (auto v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            throw UsageError(what + ": expected n, lo:hi or a comma list, got '" + s + "'");
        }
    }
    return out;
}

Variant parse_variant(const std::string& s) {
    try {
        return Variant::parse(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<double> p_values(const std::string& p, const std::string& grid) {
    if (!p.empty() && !grid.empty()) throw UsageError("give either --p or --p-grid, not both");
    if (p.empty() && grid.empty()) throw UsageError("one of --p or --p-grid is required");
    return p.empty() ? parse_grid(grid) : parse_list(p, "--p");
}

// Flag -> value for every option given on the command line except --out.
std::map<std::string, std::string> recorded_parameters(const CLI::App& sub) {
    std::map<std::string, std::string> params;
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--out" || name == "--help") continue;
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
        params[name] = joined;
    }
    return params;
}

struct Output {
    std::string path;  // empty: CSV to stdout, no manifest
};

void emit(const CsvTable& table, const Output& o, RunManifest manifest, std::ostream& out, std::ostream& err) {
    manifest.finished_at = utc_timestamp();
    if (o.path.empty()) {
        out << table.render();
        return;
    }
    write_outputs(table, o.path, manifest);
    err << "wrote " << o.path << " and " << manifest_path_for(o.path).string() << "\n";
}

RunManifest start_manifest(const CLI::App& sub, std::uint64_t seed) {
    RunManifest m;
    m.subcommand = sub.get_name();
    m.parameters = recorded_parameters(sub);
    m.seed = seed;
    m.tool_version = std::string(tool_version());
    m.started_at = utc_timestamp();
    return m;
}

std::vector<Site> parse_sites(const std::string& s) {
    std::vector<Site> sites;
    if (s.empty()) return sites;
    for (const auto& item : split(s, ';')) {
        const auto xy = split(item, ',');
        if (xy.size() != 2) throw UsageError("--window expects x,y;x,y;..., got '" + s + "'");
        sites.push_back({to_int(xy[0], "--window"), to_int(xy[1], "--window")});
    }
    return sites;
}

Rect parse_rect(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 4) throw UsageError("--target expects xmin:xmax:ymin:ymax");
    const auto v = [&](int i) { return to_int(parts[static_cast<std::size_t>(i)], "--target"); };
    if (v(1) < v(0) || v(3) < v(2)) throw UsageError("--target: inverted rectangle");
    return Rect(v(0), v(1), v(2), v(3));
}

struct Args {
    std::string model = "standard";
    std::string p;
    std::string p_grid;
    std::int64_t trials = 0;
    double kappa = 2.0;
    std::int64_t step_cap = 1'000'000;
    std::uint64_t seed = 0;
    std::string out;
    unsigned workers = 1;

    std::string estimator = "rectangle";
    std::string kind;
    std::string a = "1:10", b = "1:10", s = "0", t = "0";
    double c_lower = 1.0, c_upper = 1.0;
    double tolerance = 1e-10;
    std::string window, target = "0:0:0:0";
    std::int64_t L = 2;
    std::string Ls;
    std::string input;
    std::string lambda_model;
    std::string manifest;
    std::string out_dir;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local bootstrap percolation toolkit"};
    app.name("lbp");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));
    Args a;

    const auto model_opt = [&](CLI::App* sub) {
        sub->add_option("--model", a.model, "standard | modified | frobose")->capture_default_str();
    };
    const auto seed_opt = [&](CLI::App* sub) { sub->add_option("--seed", a.seed, "master seed")->required(); };
    const auto workers_opt = [&](CLI::App* sub) {
        sub->add_option("--workers", a.workers, "worker threads (never changes results)")->check(CLI::Range(1u, 1024u));
    };

    auto* growth = app.add_subcommand("growth", "estimate the growth probability at one or more p");
    model_opt(growth);
    growth->add_option("--p", a.p, "p value or comma list");
    growth->add_option("--p-grid", a.p_grid, "lo:hi:steps[:log]");
    growth->add_option("--trials", a.trials, "trials per p")->required();
    growth->add_option("--kappa", a.kappa, "success threshold factor")->capture_default_str();
    growth->add_option("--step-cap", a.step_cap, "rectangle process step cap")->capture_default_str();
    growth->add_option("--estimator", a.estimator, "rectangle | window | unconditioned")->capture_default_str();
    seed_opt(growth);
    growth->add_option("--out", a.out, "CSV path (manifest written beside it)");
    workers_opt(growth);

    auto* bounds = app.add_subcommand("bounds", "evaluate analytic bounds over grids");
    model_opt(bounds);
    bounds->add_option("--kind", a.kind, "double-gap | border | envelope")->required();
    bounds->add_option("--p", a.p, "p value or comma list");
    bounds->add_option("--p-grid", a.p_grid, "lo:hi:steps[:log]");
    bounds->add_option("--a", a.a, "a values: n, lo:hi or list")->capture_default_str();
    bounds->add_option("--b", a.b, "b values")->capture_default_str();
    bounds->add_option("--s", a.s, "s values (border)")->capture_default_str();
    bounds->add_option("--t", a.t, "t values (border)")->capture_default_str();
    bounds->add_option("--c-lower", a.c_lower, "envelope lower constant")->capture_default_str();
    bounds->add_option("--c-upper", a.c_upper, "envelope upper constant")->capture_default_str();
    bounds->add_option("--out", a.out, "CSV path");

    auto* lambda = app.add_subcommand("lambda", "integrate the rate function");
    model_opt(lambda);
    lambda->add_option("--tolerance", a.tolerance, "absolute tolerance (>= 1e-12)")->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "exact enumeration on tiny windows");
    model_opt(oracle);
    oracle->add_option("--kind", a.kind, "growth | bp-span")->required();
    oracle->add_option("--window", a.window, "growth: non-origin sites x,y;x,y;...");
    oracle->add_option("--target", a.target, "growth: xmin:xmax:ymin:ymax")->capture_default_str();
    oracle->add_option("--L", a.L, "bp-span: side length")->capture_default_str();
    oracle->add_option("--p", a.p, "evaluate at p (comma list)");
    workers_opt(oracle);

    auto* fit = app.add_subcommand("fit", "fit alpha(p) = c p^gamma to a growth CSV");
    fit->add_option("--input", a.input, "growth CSV")->required();
    fit->add_option("--lambda-model", a.lambda_model, "recompute alpha from p_hat with this model's lambda");

    auto* scan = app.add_subcommand("bp-scan", "finite-size scan of plain bootstrap percolation");
    scan->add_option("--L", a.Ls, "side lengths: comma list or lo:hi")->required();
    scan->add_option("--p", a.p, "p value or comma list");
    scan->add_option("--p-grid", a.p_grid, "lo:hi:steps[:log]");
    scan->add_option("--trials", a.trials, "trials per cell")->required();
    seed_opt(scan);
    scan->add_option("--out", a.out, "CSV path");
    workers_opt(scan);

    auto* trace = app.add_subcommand("trace", "dump one rectangle-process trajectory");
    model_opt(trace);
    trace->add_option("--p", a.p, "p")->required();
    trace->add_option("--kappa", a.kappa, "success threshold factor")->capture_default_str();
    trace->add_option("--step-cap", a.step_cap, "step cap")->capture_default_str();
    seed_opt(trace);
    trace->add_option("--out", a.out, "trajectory file (default stdout)");

    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay->add_option("--manifest", a.manifest, "manifest JSON")->required();
    replay->add_option("--out-dir", a.out_dir, "where to write regenerated files (default: temp dir)");
    replay->add_option("--workers", a.workers, "override worker count");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (growth->parsed()) {
            const Variant v = parse_variant(a.model);
            const auto ps = p_values(a.p, a.p_grid);
            if (a.trials < 1) throw UsageError("--trials must be >= 1");
            if (a.estimator != "rectangle" && a.estimator != "window" && a.estimator != "unconditioned")
                throw UsageError("--estimator must be rectangle, window or unconditioned");
            RunManifest m = start_manifest(*growth, a.seed);
            std::vector<GrowthEstimate> rows;
            if (a.estimator == "rectangle" && ps.size() > 1) {
                rows = sweep(v, ps, {a.trials}, a.kappa, a.seed, a.workers, a.step_cap);
            } else {
                for (const double p : ps) {
                    GrowthOptions o;
                    o.variant = v;
                    o.p = p;
                    o.trials = a.trials;
                    o.kappa = a.kappa;
                    o.step_cap = a.step_cap;
                    o.seed = a.seed;
                    o.workers = a.workers;
                    o.estimator = a.estimator == "window"          ? Estimator::Window
                                  : a.estimator == "unconditioned" ? Estimator::RectangleUnconditioned
                                                                   : Estimator::RectangleConditioned;
                    rows.push_back(estimate_growth(o));
                }
            }
            for (const auto& r : rows) {
                if (!r.note.empty()) err << "p=" << format_number(r.p) << ": " << r.note << "\n";
                if (r.capped > 0) err << "p=" << format_number(r.p) << ": " << r.capped << " trials hit the step cap\n";
            }
            emit(growth_table(rows), {a.out}, m, out, err);
            return kOk;
        }

        if (bounds->parsed()) {
            const Variant v = parse_variant(a.model);
            const auto ps = p_values(a.p, a.p_grid);
            RunManifest m = start_manifest(*bounds, 0);
            CsvTable table;
            const std::string name(v.name());
            if (a.kind == "double-gap") {
                table.header = {"model", "p", "a", "b", "bound", "no_gap_exact"};
                for (const double p : ps)
                    for (const auto av : parse_int_range(a.a, "--a"))
                        for (const auto bv : parse_int_range(a.b, "--b")) {
                            const double q = q_of(p);
                            table.rows.push_back({name, format_number(p), std::to_string(av), std::to_string(bv),
                                                  format_number(double_gap_bound(av, bv, q, v)),
                                                  format_number(no_double_gap_exact(av, std::exp(-bv * q), gap_mode(v)))});
                        }
            } else if (a.kind == "border") {
                table.header = {"model", "p", "a", "b", "s", "t", "bound"};
                for (const double p : ps)
                    for (const auto av : parse_int_range(a.a, "--a"))
                        for (const auto bv : parse_int_range(a.b, "--b"))
                            for (const auto sv : parse_int_range(a.s, "--s"))
                                for (const auto tv : parse_int_range(a.t, "--t"))
                                    table.rows.push_back({name, format_number(p), std::to_string(av), std::to_string(bv),
                                                          std::to_string(sv), std::to_string(tv),
                                                          format_number(border_bound(av, bv, sv, tv, q_of(p), v))});
            } else if (a.kind == "envelope") {
                table.header = {"model", "p", "c_lower", "c_upper", "lower", "upper"};
                for (const double p : ps) {
                    const Envelope e = envelope(p, a.c_lower, a.c_upper, v);
                    table.rows.push_back({name, format_number(p), format_number(a.c_lower), format_number(a.c_upper),
                                          format_number(e.lower), format_number(e.upper)});
                }
            } else {
                throw UsageError("--kind must be double-gap, border or envelope");
            }
            emit(table, {a.out}, m, out, err);
            return kOk;
        }

        if (lambda->parsed()) {
            const Variant v = parse_variant(a.model);
            if (!(a.tolerance >= 1e-12)) throw UsageError("--tolerance must be >= 1e-12");
            const QuadratureResult r = lambda_integral(v, a.tolerance);
            out << "model " << v.name() << "\n";
            out << "lambda " << format_number(r.value) << "\n";
            out << "error_bound " << format_number(r.error_bound) << "\n";
            out << "evaluations " << r.evaluations << "\n";
            return kOk;
        }

        if (oracle->parsed()) {
            ExactResult r;
            if (a.kind == "growth") {
                r = exact_growth_probability(parse_sites(a.window), parse_variant(a.model), parse_rect(a.target), a.workers);
            } else if (a.kind == "bp-span") {
                r = exact_bp_spanning(a.L, a.workers);
            } else {
                throw UsageError("--kind must be growth or bp-span");
            }
            out << "n " << r.n << "\ncoefficients";
            for (const auto c : r.coefficients) out << ' ' << c;
            out << "\n";
            if (!a.p.empty())
                for (const double p : parse_list(a.p, "--p")) {
                    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p must lie in [0,1]");
                    out << "p " << format_number(p) << " probability " << format_number(r.evaluate(p)) << "\n";
                }
            return kOk;
        }

        if (fit->parsed()) {
            const CsvTable table = parse_csv(read_file(a.input));
            std::optional<double> lam;
            double lambda_used;
            if (!a.lambda_model.empty()) {
                lam = parse_variant(a.lambda_model).lambda();
                lambda_used = *lam;
            } else {
                const Variant v = table.has_column("model") && !table.rows.empty()
                                      ? parse_variant(table.rows[0][table.column("model")])
                                      : Variant::standard();
                lambda_used = v.lambda();
            }
            const FitResult f = fit_correction(fit_rows_from_growth_csv(table, lam), lambda_used);
            for (const auto& w : f.warnings) err << "warning: " << w << "\n";
            out << "c " << format_number(f.c) << "\n";
            out << "gamma " << format_number(f.gamma) << "\n";
            out << "residual_norm " << format_number(f.residual_norm) << "\n";
            out << "lambda " << format_number(f.lambda) << "\n";
            out << "rows_used " << f.rows_used << "\n";
            return kOk;
        }

        if (scan->parsed()) {
            const auto Ls = parse_int_range(a.Ls, "--L");
            const auto ps = p_values(a.p, a.p_grid);
            RunManifest m = start_manifest(*scan, a.seed);
            emit(scan_table(bp_transition_scan(Ls, ps, a.trials, a.seed, a.workers)), {a.out}, m, out, err);
            return kOk;
        }

        if (trace->parsed()) {
            const Variant v = parse_variant(a.model);
            const double p = to_double(a.p, "--p");
            if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p must lie in [0,1]");
            const Field field(a.seed, p);
            const Trajectory traj = run(field, v, success_threshold(p, a.kappa), a.step_cap);
            std::ostringstream text;
            write_trajectory(text, traj);
            if (a.out.empty()) {
                out << text.str();
            } else {
                write_file(a.out, text.str());
            }
            std::size_t g_fail = 0, d_fail = 0;
            for (std::size_t i = 0; i < traj.rects.size(); ++i) {
                g_fail += !check_G(field, traj.rects[i], v);
                if (i) d_fail += !check_D(field, traj.rects[i - 1], traj.rects[i], v);
            }
            err << "rectangles " << traj.rects.size() << ", stop " << to_string(traj.stop) << ", G failures " << g_fail
                << ", D failures " << d_fail << "\n";
            return kOk;
        }

        if (replay->parsed()) {
            const RunManifest m = RunManifest::from_json(read_file(a.manifest));
            if (m.output_digests.size() != 1) throw std::runtime_error("replay: manifest must list exactly one output");
            namespace fs = std::filesystem;
            fs::path dir = a.out_dir.empty() ? fs::temp_directory_path() / ("lbp-replay-" + std::to_string(m.seed))
                                             : fs::path(a.out_dir);
            fs::create_directories(dir);
            const std::string& file = m.output_digests.begin()->first;
            std::vector<std::string> rerun{m.subcommand};
            for (const auto& [flag, value] : m.parameters) {
                if (flag == "--workers" && replay->count("--workers")) continue;
                rerun.push_back(flag);
                rerun.push_back(value);
            }
            if (replay->count("--workers")) {
                rerun.push_back("--workers");
                rerun.push_back(std::to_string(a.workers));
            }
            rerun.push_back("--out");
            rerun.push_back((dir / file).string());
            const int code = dispatch(rerun, out, err);
            if (code != kOk) return code;
            const std::string digest = sha256_hex(read_file(dir / file));
            const bool same = digest == m.output_digests.begin()->second;
            out << (same ? "match " : "MISMATCH ") << file << " " << digest << "\n";
            return same ? kOk : kFailure;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ScaleRefused& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace lbp::cli
