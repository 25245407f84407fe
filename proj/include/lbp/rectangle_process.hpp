#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lbp/core.hpp"

namespace lbp {

enum class StopReason { Fixated, ThresholdReached, StepCap };

std::string_view to_string(StopReason r);
StopReason parse_stop_reason(std::string_view s);

// rho_0 subset rho_1 subset ... ; the fixation repeat is not stored.
struct Trajectory {
    std::vector<Rect> rects;
    StopReason stop = StopReason::Fixated;
    Variant variant;

    Rect final_rect() const { return rects.empty() ? Rect::empty() : rects.back(); }
};

// The relaxed Active set of an advance step was not a rectangle.
class RectangularityViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// One rectangle-process step: rect all Active, sigma on the pad frame, Empty beyond;
// relax and return the Active set, which must be a rectangle.
template <StateSource S>
Rect advance(const S& sigma, Variant variant, const Rect& rect);

// Iterates advance from {0} (or nothing if sigma(0) is not Active) until
// fixation, semiperimeter >= success_semiperimeter, or step_cap steps.
template <StateSource S>
Trajectory run(const S& sigma, Variant variant, std::int64_t success_semiperimeter, std::int64_t step_cap);

// No double gap (standard) / no empty line (variants) among the columns and rows
// of rect in sigma.
template <StateSource S>
bool check_G(const S& sigma, const Rect& rect, Variant variant);

// The column conditions on S1+S8+S7 and S3+S4+S5 and the row conditions on
// S1+S2+S3 and S7+S6+S5.
template <StateSource S>
bool check_D(const S& sigma, const Rect& inner, const Rect& outer, Variant variant);

// Rectangle process started from inner (all Active) with sigma restricted to
// outer; true when it fills outer. For Froböse this is the transition event
// that replaces the strip conditions of check_D.
template <StateSource S>
bool grows_to(const S& sigma, Variant variant, const Rect& inner, const Rect& outer);

// Some rectangle containing 0 with one dimension in [B-A-10, B-A] and the other
// in [1, A] satisfies G. Throws std::domain_error when B-A-10 < 1.
template <StateSource S>
bool check_E(const S& sigma, double p, Variant variant = Variant::standard());

// Nesting and per-step growth limits of a trajectory.
bool trajectory_is_consistent(const Trajectory& traj);

struct GoodSequence {
    std::vector<Rect> rects;
    double q = 0.0;
    std::int64_t A = 0;
    std::int64_t B = 0;

    std::vector<Dims> dims() const;
};

enum class ExtractionStatus {
    Good,
    Escaped,     // dimensions never entered the good region
    Incomplete,  // entered the good region but the trajectory ended inside it
};

struct Extraction {
    ExtractionStatus status = ExtractionStatus::Escaped;
    GoodSequence sequence;
};

Extraction extract_good_sequence(const Trajectory& traj, double q);

// Properties (ii)-(vi) on dimensions, plus non-negative increments.
bool is_good_sequence(const std::vector<Dims>& dims, double q, std::int64_t A, std::int64_t B);

// `i xMin xMax yMin yMax` per rectangle, then `stop <reason>`.
void write_trajectory(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory(std::istream& is, Variant variant = Variant::standard());

}  // namespace lbp
