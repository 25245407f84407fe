#include "lbp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "lbp/analytics.hpp"
#include "lbp/lattice.hpp"
#include "lbp/rectangle_process.hpp"

namespace lbp {

namespace {

// Runs body(trial) for trial in [0, trials) over contiguous per-worker ranges and
// sums the returned counters. The sum does not depend on the worker count.
template <class Counts, class Body>
Counts parallel_count(std::int64_t trials, unsigned workers, Body body) {
    workers = std::max(1u, workers);
    if (trials < static_cast<std::int64_t>(workers)) workers = static_cast<unsigned>(std::max<std::int64_t>(1, trials));
    std::vector<Counts> partial(workers);
    const auto range = [&](unsigned w) {
        const std::int64_t lo = trials * w / workers, hi = trials * (w + 1) / workers;
        for (std::int64_t t = lo; t < hi; ++t) partial[w] += body(t);
    };
    if (workers == 1) {
        range(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(range, w);
        for (auto& t : threads) t.join();
    }
    Counts total{};
    for (const auto& c : partial) total += c;
    return total;
}

struct TrialCounts {
    std::int64_t successes = 0;
    std::int64_t capped = 0;
    TrialCounts& operator+=(const TrialCounts& o) {
        successes += o.successes;
        capped += o.capped;
        return *this;
    }
};

}  // namespace

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0 || successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: require 0 <= successes <= trials, trials > 0");
    const double n = static_cast<double>(trials), x = static_cast<double>(successes);
    const double z2 = z * z;
    const double centre = (x + z2 / 2.0) / (n + z2);
    const double half = z * std::sqrt(x * (n - x) / n + z2 / 4.0) / (n + z2);
    const double phat = x / n;
    // Clamp so the interval always brackets the point estimate despite rounding.
    return {std::clamp(centre - half, 0.0, phat), std::clamp(centre + half, phat, 1.0)};
}

std::int64_t success_threshold(double p, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("success_threshold: kappa must be > 0");
    if (p <= 0.0) return std::numeric_limits<std::int64_t>::max();
    if (p >= 1.0) return 2;
    const double q = q_of(p);
    const double B = std::floor(std::log(1.0 / q) / q);
    return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(kappa * B)));
}

GrowthEstimate estimate_growth(const GrowthOptions& o) {
    if (o.trials < 1) throw std::invalid_argument("estimate_growth: trials must be >= 1");
    if (!(o.p >= 0.0 && o.p <= 1.0)) throw std::invalid_argument("estimate_growth: p must lie in [0,1]");
    if (o.step_cap < 1) throw std::invalid_argument("estimate_growth: step cap must be >= 1");
    if (o.p > 0.0 && o.p < kMinEstimableP) {
        std::ostringstream msg;
        msg << "estimate_growth: p = " << o.p << " is below " << kMinEstimableP
            << "; the growth probability (about exp(-2*lambda/p)) is out of reach of plain Monte Carlo";
        throw ScaleRefused(msg.str());
    }
    GrowthEstimate est;
    est.variant = o.variant;
    est.p = o.p;
    est.trials = o.trials;
    est.kappa = o.kappa;
    est.seed = o.seed;
    est.threshold = success_threshold(o.p, o.kappa);

    TrialCounts counts;
    if (o.p > 0.0) {
        const std::int64_t threshold = est.threshold;
        const int pad = o.variant.pad_width();
        counts = parallel_count<TrialCounts>(o.trials, o.workers, [&](std::int64_t t) {
            const std::uint64_t s = mix_seed(o.seed, static_cast<std::uint64_t>(t));
            TrialCounts c;
            switch (o.estimator) {
                case Estimator::RectangleConditioned:
                case Estimator::RectangleUnconditioned: {
                    const Field field = o.estimator == Estimator::RectangleConditioned ? Field::conditioned(s, o.p)
                                                                                        : Field::unconditioned(s, o.p);
                    const Trajectory traj = run(field, o.variant, threshold, o.step_cap);
                    c.successes = traj.stop == StopReason::ThresholdReached;
                    c.capped = traj.stop == StopReason::StepCap;
                    break;
                }
                case Estimator::Window: {
                    const std::int64_t half = threshold + 2 * pad + 2;
                    const EventualActivity ea =
                        eventually_active(Field::conditioned(s, o.p), Rect(-half, half, -half, half), o.variant);
                    c.successes = ea.boundary_touched || ea.active_bounds().semiperimeter() >= threshold;
                    break;
                }
            }
            return c;
        });
    }
    est.successes = counts.successes;
    est.capped = counts.capped;
    const std::int64_t decided = o.trials - counts.capped;
    const double factor = o.estimator == Estimator::RectangleUnconditioned ? 1.0 : o.p;
    if (o.p == 0.0 || decided == 0) {
        est.p_hat = 0.0;
        est.ci_low = 0.0;
        est.ci_high = decided == 0 ? 1.0 : 0.0;
    } else {
        const Interval ci = wilson_interval(counts.successes, decided);
        est.p_hat = factor * static_cast<double>(counts.successes) / static_cast<double>(decided);
        est.ci_low = factor * ci.low;
        est.ci_high = factor * ci.high;
    }
    est.alpha_defined = est.successes > 0 && o.p > 0.0;
    est.alpha_hat = est.alpha_defined ? 2.0 * o.variant.lambda() + o.p * std::log(est.p_hat)
                                      : std::numeric_limits<double>::quiet_NaN();
    if (!est.alpha_defined && o.p > 0.0) est.note = "no successes: one-sided interval, alpha undefined";
    return est;
}

std::vector<GrowthEstimate> sweep(Variant variant, const std::vector<double>& ps,
                                  const std::vector<std::int64_t>& trials_per_point, double kappa, std::uint64_t seed,
                                  unsigned workers, std::int64_t step_cap) {
    if (ps.empty()) throw std::invalid_argument("sweep: empty p list");
    if (trials_per_point.size() != 1 && trials_per_point.size() != ps.size())
        throw std::invalid_argument("sweep: give one trial count, or one per p");
    std::vector<GrowthEstimate> rows;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        GrowthOptions o;
        o.variant = variant;
        o.p = ps[i];
        o.trials = trials_per_point.size() == 1 ? trials_per_point[0] : trials_per_point[i];
        o.kappa = kappa;
        o.seed = seed;
        o.workers = workers;
        o.step_cap = step_cap;
        try {
            rows.push_back(estimate_growth(o));
        } catch (const std::exception& e) {
            GrowthEstimate flagged;
            flagged.variant = variant;
            flagged.p = ps[i];
            flagged.kappa = kappa;
            flagged.seed = seed;
            flagged.alpha_hat = std::numeric_limits<double>::quiet_NaN();
            flagged.note = e.what();
            rows.push_back(flagged);
        }
    }
    return rows;
}

FitResult fit_correction(const std::vector<FitRow>& rows, double lambda) {
    FitResult out;
    out.lambda = lambda;
    double W = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    std::vector<FitRow> used;
    for (const auto& r : rows) {
        if (!(std::isfinite(r.alpha) && r.alpha > 0.0 && r.p > 0.0 && r.weight > 0.0 && std::isfinite(r.weight))) {
            std::ostringstream msg;
            msg << "excluded row p=" << r.p << " alpha=" << r.alpha << " weight=" << r.weight;
            out.warnings.push_back(msg.str());
            continue;
        }
        used.push_back(r);
        const double x = std::log(r.p), y = std::log(r.alpha);
        W += r.weight;
        Sx += r.weight * x;
        Sy += r.weight * y;
        Sxx += r.weight * x * x;
        Sxy += r.weight * x * y;
    }
    if (used.size() < 3) throw std::invalid_argument("fit_correction: fewer than 3 usable rows");
    const double det = W * Sxx - Sx * Sx;
    if (!(std::abs(det) > 1e-300 * std::max(1.0, W * Sxx)))
        throw std::invalid_argument("fit_correction: p values do not span a range");
    out.gamma = (W * Sxy - Sx * Sy) / det;
    const double log_c = (Sy - out.gamma * Sx) / W;
    out.c = std::exp(log_c);
    double rss = 0.0;
    for (const auto& r : used) {
        const double res = std::log(r.alpha) - (log_c + out.gamma * std::log(r.p));
        rss += r.weight * res * res;
    }
    out.residual_norm = std::sqrt(rss);
    out.rows_used = used.size();
    out.gamma_in_range = out.gamma > 0.0 && out.gamma < 2.0;
    if (!out.gamma_in_range) out.warnings.push_back("fitted exponent outside (0, 2)");
    return out;
}

std::vector<ScanRow> bp_transition_scan(const std::vector<std::int64_t>& Ls, const std::vector<double>& ps,
                                        std::int64_t trials_per_cell, std::uint64_t seed, unsigned workers) {
    if (trials_per_cell < 1) throw std::invalid_argument("bp_transition_scan: trials must be >= 1");
    for (const auto L : Ls) {
        if (L < 1) throw std::invalid_argument("bp_transition_scan: L must be >= 1");
        if (L > kMaxWindowSites / L) throw ScaleRefused("bp_transition_scan: L^2 exceeds 10^9 cells");
    }
    for (const double p : ps)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bp_transition_scan: p must lie in [0,1]");
    const double lambda = Variant::standard().lambda();
    std::vector<ScanRow> rows;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        const std::uint64_t cell_seed = mix_seed(seed, i);
        for (const double p : ps) {
            ScanRow row;
            row.L = Ls[i];
            row.p = p;
            row.trials = trials_per_cell;
            row.spanned = parallel_count<std::int64_t>(trials_per_cell, workers, [&](std::int64_t t) -> std::int64_t {
                return run_standard_bp(row.L, p, mix_seed(cell_seed, static_cast<std::uint64_t>(t)));
            });
            row.spanned_fraction = static_cast<double>(row.spanned) / static_cast<double>(trials_per_cell);
            row.p_log_L_minus_lambda = p * std::log(static_cast<double>(row.L)) - lambda;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace lbp
