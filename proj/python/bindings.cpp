#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lbp/analytics.hpp"
#include "lbp/experiments.hpp"
#include "lbp/lattice.hpp"
#include "lbp/oracle.hpp"
#include "lbp/rectangle_process.hpp"
#include "lbp/report.hpp"

namespace py = pybind11;
using namespace lbp;

namespace {

using RectTuple = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

std::optional<RectTuple> to_tuple(const Rect& r) {
    if (r.is_empty()) return std::nullopt;
    return RectTuple{r.x_min(), r.x_max(), r.y_min(), r.y_max()};
}

Rect from_tuple(const RectTuple& t) { return Rect(std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)); }

py::dict estimate_dict(const GrowthEstimate& e) {
    py::dict d;
    d["model"] = std::string(e.variant.name());
    d["p"] = e.p;
    d["trials"] = e.trials;
    d["successes"] = e.successes;
    d["capped"] = e.capped;
    d["p_hat"] = e.p_hat;
    d["ci_low"] = e.ci_low;
    d["ci_high"] = e.ci_high;
    d["alpha_hat"] = e.alpha_defined ? py::object(py::float_(e.alpha_hat)) : py::object(py::none());
    d["kappa"] = e.kappa;
    d["seed"] = e.seed;
    d["threshold"] = e.threshold;
    d["note"] = e.note;
    return d;
}

std::vector<Site> to_sites(const std::vector<std::pair<std::int64_t, std::int64_t>>& xs) {
    std::vector<Site> out;
    for (const auto& [x, y] : xs) out.push_back({x, y});
    return out;
}

}  // namespace

PYBIND11_MODULE(_lbp, m) {
    m.doc() = "Local bootstrap percolation: simulation, exact enumeration and analytic bounds";
    m.attr("__version__") = std::string(tool_version());

    py::register_exception<ScaleRefused>(m, "ScaleRefused", PyExc_RuntimeError);

    m.def("beta", &beta, py::arg("u"));
    m.def("rate_function", [](double z, const std::string& model) { return rate_function(z, Variant::parse(model)); },
          py::arg("z"), py::arg("model") = "standard");
    m.def(
        "lambda_integral",
        [](const std::string& model, double tolerance) {
            const auto r = lambda_integral(Variant::parse(model), tolerance);
            return std::make_pair(r.value, r.error_bound);
        },
        py::arg("model") = "standard", py::arg("tolerance") = 1e-10);
    m.def(
        "no_double_gap_exact",
        [](std::int64_t n, double empty_prob, bool single_gap) {
            return no_double_gap_exact(n, empty_prob, single_gap ? GapMode::SingleGap : GapMode::DoubleGap);
        },
        py::arg("n"), py::arg("empty_prob"), py::arg("single_gap") = false);
    m.def(
        "double_gap_bound",
        [](std::int64_t a, std::int64_t b, double q, const std::string& model) {
            return double_gap_bound(a, b, q, Variant::parse(model));
        },
        py::arg("a"), py::arg("b"), py::arg("q"), py::arg("model") = "standard");
    m.def(
        "border_bound",
        [](std::int64_t a, std::int64_t b, std::int64_t s, std::int64_t t, double q, const std::string& model) {
            return border_bound(a, b, s, t, q, Variant::parse(model));
        },
        py::arg("a"), py::arg("b"), py::arg("s"), py::arg("t"), py::arg("q"), py::arg("model") = "standard");
    m.def(
        "envelope",
        [](double p, double c_lower, double c_upper, const std::string& model) {
            const auto e = envelope(p, c_lower, c_upper, Variant::parse(model));
            return std::make_pair(e.lower, e.upper);
        },
        py::arg("p"), py::arg("c_lower"), py::arg("c_upper"), py::arg("model") = "standard");
    m.def(
        "scale_constants",
        [](double p) {
            const auto k = scale_constants(p);
            py::dict d;
            d["p"] = k.p;
            d["q"] = k.q;
            d["A"] = k.A;
            d["B"] = k.B;
            d["in_regime"] = k.in_regime;
            d["warning"] = k.warning;
            return d;
        },
        py::arg("p"));

    m.def(
        "run_trajectory",
        [](std::uint64_t seed, double p, const std::string& model, double kappa, std::int64_t step_cap) {
            const Trajectory t = run(Field(seed, p), Variant::parse(model), success_threshold(p, kappa), step_cap);
            std::vector<RectTuple> rects;
            for (const auto& r : t.rects) rects.push_back(*to_tuple(r));
            return std::make_pair(rects, std::string(to_string(t.stop)));
        },
        py::arg("seed"), py::arg("p"), py::arg("model") = "standard", py::arg("kappa") = 2.0,
        py::arg("step_cap") = 1'000'000);
    m.def(
        "eventually_active_bounds",
        [](std::uint64_t seed, double p, const RectTuple& window, const std::string& model) {
            const auto ea = eventually_active(Field(seed, p), from_tuple(window), Variant::parse(model));
            return std::make_pair(to_tuple(ea.active_bounds()), ea.boundary_touched);
        },
        py::arg("seed"), py::arg("p"), py::arg("window"), py::arg("model") = "standard");
    m.def("run_standard_bp", &run_standard_bp, py::arg("L"), py::arg("p"), py::arg("seed"));

    m.def(
        "estimate_growth",
        [](const std::string& model, double p, std::int64_t trials, double kappa, std::uint64_t seed, unsigned workers,
           std::int64_t step_cap) {
            GrowthOptions o;
            o.variant = Variant::parse(model);
            o.p = p;
            o.trials = trials;
            o.kappa = kappa;
            o.seed = seed;
            o.workers = workers;
            o.step_cap = step_cap;
            GrowthEstimate e;
            {
                py::gil_scoped_release release;
                e = estimate_growth(o);
            }
            return estimate_dict(e);
        },
        py::arg("model"), py::arg("p"), py::arg("trials"), py::arg("kappa") = 2.0, py::arg("seed"),
        py::arg("workers") = 1, py::arg("step_cap") = 1'000'000);
    m.def(
        "growth_csv",
        [](const std::string& model, const std::vector<double>& ps, std::int64_t trials, double kappa,
           std::uint64_t seed, unsigned workers) {
            return growth_table(sweep(Variant::parse(model), ps, {trials}, kappa, seed, workers)).render();
        },
        py::arg("model"), py::arg("ps"), py::arg("trials"), py::arg("kappa") = 2.0, py::arg("seed"),
        py::arg("workers") = 1);
    m.def(
        "fit_correction",
        [](const std::vector<double>& ps, const std::vector<double>& alphas, std::optional<std::vector<double>> weights,
           double lambda_value) {
            if (ps.size() != alphas.size() || (weights && weights->size() != ps.size()))
                throw std::invalid_argument("fit_correction: ps, alphas and weights must have equal length");
            std::vector<FitRow> rows;
            for (std::size_t i = 0; i < ps.size(); ++i) rows.push_back({ps[i], alphas[i], weights ? (*weights)[i] : 1.0});
            const auto f = fit_correction(rows, lambda_value);
            py::dict d;
            d["c"] = f.c;
            d["gamma"] = f.gamma;
            d["residual_norm"] = f.residual_norm;
            d["lambda"] = f.lambda;
            d["rows_used"] = f.rows_used;
            d["gamma_in_range"] = f.gamma_in_range;
            d["warnings"] = f.warnings;
            return d;
        },
        py::arg("ps"), py::arg("alphas"), py::arg("weights") = py::none(), py::arg("lambda_value") = 0.0);
    m.def(
        "bp_transition_scan",
        [](const std::vector<std::int64_t>& Ls, const std::vector<double>& ps, std::int64_t trials, std::uint64_t seed,
           unsigned workers) {
            std::vector<std::tuple<std::int64_t, double, double>> out;
            for (const auto& r : bp_transition_scan(Ls, ps, trials, seed, workers))
                out.emplace_back(r.L, r.p, r.spanned_fraction);
            return out;
        },
        py::arg("Ls"), py::arg("ps"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);

    m.def(
        "exact_growth_probability",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& window, const RectTuple& target,
           const std::string& model) {
            return exact_growth_probability(to_sites(window), Variant::parse(model), from_tuple(target)).coefficients;
        },
        py::arg("window"), py::arg("target"), py::arg("model") = "standard");
    m.def(
        "exact_bp_spanning", [](std::int64_t L) { return exact_bp_spanning(L).coefficients; }, py::arg("L"));
    m.def(
        "evaluate_polynomial",
        [](const std::vector<std::uint64_t>& coefficients, double p) {
            ExactResult r;
            if (coefficients.empty()) throw std::invalid_argument("evaluate_polynomial: no coefficients");
            r.n = coefficients.size() - 1;
            r.coefficients = coefficients;
            return r.evaluate(p);
        },
        py::arg("coefficients"), py::arg("p"));
}
