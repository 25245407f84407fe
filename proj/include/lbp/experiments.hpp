#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbp/core.hpp"

namespace lbp {

// Below this p the growth probability is out of reach of plain Monte Carlo and
// estimation is refused with ScaleRefused.
inline constexpr double kMinEstimableP = 0.08;

enum class Estimator {
    RectangleConditioned,    // forced Active origin, success rate multiplied by p
    RectangleUnconditioned,  // origin sampled
    Window,                  // eventually_active on a window, forced origin, times p
};

struct GrowthOptions {
    Variant variant = Variant::standard();
    double p = 0.0;
    std::int64_t trials = 0;
    double kappa = 2.0;
    std::int64_t step_cap = 1'000'000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    Estimator estimator = Estimator::RectangleConditioned;
};

struct GrowthEstimate {
    Variant variant;
    double p = 0.0;
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    std::int64_t capped = 0;  // step-cap exhaustions, excluded from the denominator
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double alpha_hat = 0.0;  // NaN when successes == 0
    bool alpha_defined = false;
    double kappa = 2.0;
    std::uint64_t seed = 0;
    std::int64_t threshold = 0;  // success semiperimeter
    std::string note;            // set on flagged sweep rows
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval (95% by default) for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

// Success semiperimeter ceil(kappa * B(q)), at least 2.
std::int64_t success_threshold(double p, double kappa);

GrowthEstimate estimate_growth(const GrowthOptions& options);

// One estimate per p with the same master seed. Failing points come back as
// flagged rows (note set, zero trials) instead of aborting the sweep.
// trials_per_point holds either one count for all points or one per point.
std::vector<GrowthEstimate> sweep(Variant variant, const std::vector<double>& ps,
                                  const std::vector<std::int64_t>& trials_per_point, double kappa, std::uint64_t seed,
                                  unsigned workers = 1, std::int64_t step_cap = 1'000'000);

struct FitRow {
    double p = 0.0;
    double alpha = 0.0;
    double weight = 1.0;
};

// alpha(p) = c p^gamma by weighted least squares in log-log coordinates.
struct FitResult {
    double c = 0.0;
    double gamma = 0.0;
    double residual_norm = 0.0;
    double lambda = 0.0;
    std::size_t rows_used = 0;
    bool gamma_in_range = false;  // gamma in (0, 2)
    std::vector<std::string> warnings;
};

FitResult fit_correction(const std::vector<FitRow>& rows, double lambda);

struct ScanRow {
    std::int64_t L = 0;
    double p = 0.0;
    std::int64_t trials = 0;
    std::int64_t spanned = 0;
    double spanned_fraction = 0.0;
    double p_log_L_minus_lambda = 0.0;
};

// Monte Carlo I(L, p) over the grid, L-major.
std::vector<ScanRow> bp_transition_scan(const std::vector<std::int64_t>& Ls, const std::vector<double>& ps,
                                        std::int64_t trials_per_cell, std::uint64_t seed, unsigned workers = 1);

}  // namespace lbp
