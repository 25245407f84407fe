#include "lbp/rectangle_process.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lbp/analytics.hpp"
#include "lbp/lattice.hpp"

namespace lbp {

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::Fixated: return "fixated";
        case StopReason::ThresholdReached: return "threshold_reached";
        case StopReason::StepCap: return "step_cap";
    }
    return "?";
}

StopReason parse_stop_reason(std::string_view s) {
    if (s == "fixated") return StopReason::Fixated;
    if (s == "threshold_reached") return StopReason::ThresholdReached;
    if (s == "step_cap") return StopReason::StepCap;
    throw std::invalid_argument("unknown stop reason '" + std::string(s) + "'");
}

template <StateSource S>
Rect advance(const S& sigma, Variant variant, const Rect& rect) {
    if (rect.is_empty()) throw std::invalid_argument("advance: rectangle must be nonempty");
    const Rect outer = rect.padded(variant.pad_width());
    Configuration config(outer);
    std::size_t i = 0;
    for (std::int64_t y = outer.y_min(); y <= outer.y_max(); ++y)
        for (std::int64_t x = outer.x_min(); x <= outer.x_max(); ++x, ++i) {
            if (rect.contains(x, y)) {
                config.set_index(i, SiteState::Active);
            } else {
                const SiteState s = sigma.site_state(x, y);
                if (s != SiteState::Empty) config.set_index(i, s);
            }
        }
    const Relaxation relaxed = relax(std::move(config), Dynamics::local(variant));
    const Rect bounds = relaxed.config.active_bounds();
    if (static_cast<std::int64_t>(relaxed.config.count(SiteState::Active)) != bounds.area())
        throw RectangularityViolation("advance from " + rect.to_string() +
                                      ": relaxed Active set is not a rectangle (bounds " + bounds.to_string() + ")");
    return bounds;
}

template <StateSource S>
Trajectory run(const S& sigma, Variant variant, std::int64_t success_semiperimeter, std::int64_t step_cap) {
    if (success_semiperimeter < 2) throw std::invalid_argument("run: success semiperimeter must be >= 2");
    if (step_cap < 1) throw std::invalid_argument("run: step cap must be >= 1");
    Trajectory traj;
    traj.variant = variant;
    if (sigma.site_state(0, 0) != SiteState::Active) {
        traj.stop = StopReason::Fixated;
        return traj;
    }
    Rect current = Rect::origin();
    traj.rects.push_back(current);
    if (current.semiperimeter() >= success_semiperimeter) {
        traj.stop = StopReason::ThresholdReached;
        return traj;
    }
    for (std::int64_t steps = 0;; ++steps) {
        if (steps >= step_cap) {
            traj.stop = StopReason::StepCap;
            return traj;
        }
        const Rect next = advance(sigma, variant, current);
        if (next == current) {
            traj.stop = StopReason::Fixated;
            return traj;
        }
        traj.rects.push_back(next);
        current = next;
        if (current.semiperimeter() >= success_semiperimeter) {
            traj.stop = StopReason::ThresholdReached;
            return traj;
        }
    }
}

namespace {

template <StateSource S>
std::vector<bool> empty_columns(const S& sigma, const Rect& r) {
    std::vector<bool> out;
    for (std::int64_t x = r.x_min(); x <= r.x_max(); ++x) {
        bool empty = true;
        for (std::int64_t y = r.y_min(); y <= r.y_max() && empty; ++y) empty = sigma.site_state(x, y) == SiteState::Empty;
        out.push_back(empty);
    }
    return out;
}

template <StateSource S>
std::vector<bool> empty_rows(const S& sigma, const Rect& r) {
    std::vector<bool> out;
    for (std::int64_t y = r.y_min(); y <= r.y_max(); ++y) {
        bool empty = true;
        for (std::int64_t x = r.x_min(); x <= r.x_max() && empty; ++x) empty = sigma.site_state(x, y) == SiteState::Empty;
        out.push_back(empty);
    }
    return out;
}

bool gaps_allowed(const std::vector<bool>& empty, Variant variant) {
    for (std::size_t i = 0; i < empty.size(); ++i) {
        if (!empty[i]) continue;
        if (variant.forbids_single_gaps()) return false;
        if (i + 1 < empty.size() && empty[i + 1]) return false;
    }
    return true;
}

template <StateSource S>
bool columns_ok(const S& sigma, const Rect& r, Variant variant) {
    return r.is_empty() || gaps_allowed(empty_columns(sigma, r), variant);
}

template <StateSource S>
bool rows_ok(const S& sigma, const Rect& r, Variant variant) {
    return r.is_empty() || gaps_allowed(empty_rows(sigma, r), variant);
}

}  // namespace

template <StateSource S>
bool check_G(const S& sigma, const Rect& rect, Variant variant) {
    if (rect.is_empty()) throw std::invalid_argument("check_G: rectangle must be nonempty");
    return columns_ok(sigma, rect, variant) && rows_ok(sigma, rect, variant);
}

template <StateSource S>
bool check_D(const S& sigma, const Rect& inner, const Rect& outer, Variant variant) {
    const auto s = frame_strips(inner, outer);
    const Rect left = s[0].bounding_union(s[7]).bounding_union(s[6]);
    const Rect right = s[2].bounding_union(s[3]).bounding_union(s[4]);
    const Rect bottom = s[0].bounding_union(s[1]).bounding_union(s[2]);
    const Rect top = s[6].bounding_union(s[5]).bounding_union(s[4]);
    return columns_ok(sigma, left, variant) && columns_ok(sigma, right, variant) && rows_ok(sigma, bottom, variant) &&
           rows_ok(sigma, top, variant);
}

namespace {

// Non-empty-site counts over a square region with per-column and per-row prefix sums.
class LineCounts {
public:
    template <StateSource S>
    LineCounts(const S& sigma, std::int64_t radius) : r_(radius), n_(2 * radius + 1) {
        col_.assign(static_cast<std::size_t>(n_ * (n_ + 1)), 0);
        row_.assign(static_cast<std::size_t>(n_ * (n_ + 1)), 0);
        for (std::int64_t j = 0; j < n_; ++j)
            for (std::int64_t i = 0; i < n_; ++i) {
                const int v = sigma.site_state(i - r_, j - r_) != SiteState::Empty;
                col_[idx(i, j + 1)] = col_[idx(i, j)] + v;
                row_[idx(j, i + 1)] = row_[idx(j, i)] + v;
            }
    }

    bool column_empty(std::int64_t x, std::int64_t y0, std::int64_t y1) const {
        return col_[idx(x + r_, y1 + r_ + 1)] == col_[idx(x + r_, y0 + r_)];
    }
    bool row_empty(std::int64_t y, std::int64_t x0, std::int64_t x1) const {
        return row_[idx(y + r_, x1 + r_ + 1)] == row_[idx(y + r_, x0 + r_)];
    }

    bool g_holds(const Rect& rc, Variant variant) const {
        const bool single = variant.forbids_single_gaps();
        bool prev = false;
        for (std::int64_t x = rc.x_min(); x <= rc.x_max(); ++x) {
            const bool e = column_empty(x, rc.y_min(), rc.y_max());
            if (e && (single || prev)) return false;
            prev = e;
        }
        prev = false;
        for (std::int64_t y = rc.y_min(); y <= rc.y_max(); ++y) {
            const bool e = row_empty(y, rc.x_min(), rc.x_max());
            if (e && (single || prev)) return false;
            prev = e;
        }
        return true;
    }

private:
    std::size_t idx(std::int64_t line, std::int64_t k) const { return static_cast<std::size_t>(line * (n_ + 1) + k); }

    std::int64_t r_, n_;
    std::vector<std::int32_t> col_, row_;
};

}  // namespace

template <StateSource S>
bool check_E(const S& sigma, double p, Variant variant) {
    const ScaleConstants sc = scale_constants(p);
    const std::int64_t lo = sc.B - sc.A - 10, hi = sc.B - sc.A;
    if (lo < 1) throw std::domain_error("check_E: scales degenerate at this p (B - A - 10 < 1)");
    const LineCounts counts(sigma, hi);
    for (int orientation = 0; orientation < 2; ++orientation)
        for (std::int64_t longer = lo; longer <= hi; ++longer)
            for (std::int64_t shorter = 1; shorter <= sc.A; ++shorter) {
                const std::int64_t w = orientation == 0 ? longer : shorter;
                const std::int64_t h = orientation == 0 ? shorter : longer;
                for (std::int64_t x0 = -w + 1; x0 <= 0; ++x0)
                    for (std::int64_t y0 = -h + 1; y0 <= 0; ++y0)
                        if (counts.g_holds(Rect(x0, x0 + w - 1, y0, y0 + h - 1), variant)) return true;
            }
    return false;
}

bool trajectory_is_consistent(const Trajectory& traj) {
    const std::int64_t max_growth = 2 * traj.variant.pad_width();
    for (std::size_t i = 0; i + 1 < traj.rects.size(); ++i) {
        const Rect& a = traj.rects[i];
        const Rect& b = traj.rects[i + 1];
        if (a.is_empty() || !b.contains(a) || a == b) return false;
        const Dims da = a.dims(), db = b.dims();
        if (db.a - da.a > max_growth || db.b - da.b > max_growth) return false;
        if (db.a == da.a && db.b == da.b) return false;
    }
    return true;
}

std::vector<Dims> GoodSequence::dims() const {
    std::vector<Dims> out;
    out.reserve(rects.size());
    for (const auto& r : rects) out.push_back(r.dims());
    return out;
}

Extraction extract_good_sequence(const Trajectory& traj, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("extract_good_sequence: q must be > 0");
    Extraction out;
    out.sequence.q = q;
    out.sequence.A = scale_A(q);
    out.sequence.B = scale_B(q);
    const std::int64_t A = out.sequence.A, B = out.sequence.B;
    const double root = std::sqrt(q);
    const auto in_good_region = [&](const Dims& d) { return d.a >= A && d.b >= A && d.a + d.b <= B; };

    std::size_t j = 0;
    while (j < traj.rects.size() && !in_good_region(traj.rects[j].dims())) ++j;
    if (j == traj.rects.size()) {
        out.status = ExtractionStatus::Escaped;
        return out;
    }
    auto& seq = out.sequence.rects;
    seq.push_back(traj.rects[j]);
    for (std::size_t k = j + 1; k < traj.rects.size(); ++k) {
        const Dims cur = seq.back().dims();
        const Dims cand = traj.rects[k].dims();
        const auto s = cand.a - cur.a, t = cand.b - cur.b;
        if (static_cast<double>(s) >= static_cast<double>(cur.a) * root ||
            static_cast<double>(t) >= static_cast<double>(cur.b) * root) {
            seq.push_back(traj.rects[k]);
            if (!in_good_region(cand)) {
                out.status = ExtractionStatus::Good;
                return out;
            }
        }
    }
    out.status = ExtractionStatus::Incomplete;
    return out;
}

bool is_good_sequence(const std::vector<Dims>& dims, double q, std::int64_t A, std::int64_t B) {
    if (dims.size() < 2) throw std::invalid_argument("is_good_sequence: need at least two rectangles");
    const double root = std::sqrt(q);
    const std::size_t n = dims.size() - 1;
    const std::int64_t first_min = std::min(dims[0].a, dims[0].b);
    if (first_min < A || first_min > A + 3) return false;                      // (ii)
    if (dims[n - 1].a + dims[n - 1].b > B) return false;                       // (iii)
    if (dims[n].a + dims[n].b <= B) return false;                              // (iv)
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(dims[i].a), b = static_cast<double>(dims[i].b);
        const auto s = dims[i + 1].a - dims[i].a, t = dims[i + 1].b - dims[i].b;
        if (s < 0 || t < 0) return false;
        const double sd = static_cast<double>(s), td = static_cast<double>(t);
        if (!(sd >= a * root || td >= b * root)) return false;                  // (v)
        if (!(sd < a * root + 4.0 && td < b * root + 4.0)) return false;        // (vi)
    }
    return true;
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.rects.size(); ++i) {
        const Rect& r = traj.rects[i];
        os << i << ' ' << r.x_min() << ' ' << r.x_max() << ' ' << r.y_min() << ' ' << r.y_max() << '\n';
    }
    os << "stop " << to_string(traj.stop) << '\n';
}

Trajectory read_trajectory(std::istream& is, Variant variant) {
    Trajectory traj;
    traj.variant = variant;
    std::string line;
    bool stopped = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (stopped) throw std::runtime_error("trajectory: content after stop line");
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "stop") {
            std::string reason;
            ls >> reason;
            traj.stop = parse_stop_reason(reason);
            stopped = true;
            continue;
        }
        std::int64_t x0, x1, y0, y1;
        if (!(ls >> x0 >> x1 >> y0 >> y1) || std::stoull(head) != traj.rects.size())
            throw std::runtime_error("trajectory: malformed line '" + line + "'");
        traj.rects.emplace_back(x0, x1, y0, y1);
    }
    if (!stopped) throw std::runtime_error("trajectory: missing stop line");
    return traj;
}

template <StateSource S>
bool grows_to(const S& sigma, Variant variant, const Rect& inner, const Rect& outer) {
    if (inner.is_empty() || !outer.contains(inner)) throw std::invalid_argument("grows_to: need nonempty inner inside outer");
    struct Bounded {
        const S* base;
        Rect box;
        SiteState site_state(std::int64_t x, std::int64_t y) const {
            return box.contains(x, y) ? base->site_state(x, y) : SiteState::Empty;
        }
    } bounded{&sigma, outer};
    Rect current = inner;
    for (;;) {
        const Rect next = advance(bounded, variant, current);
        if (next == current) return current == outer;
        current = next;
    }
}

#define LBP_INSTANTIATE(S)                                                                  \
    template Rect advance<S>(const S&, Variant, const Rect&);                               \
    template Trajectory run<S>(const S&, Variant, std::int64_t, std::int64_t);              \
    template bool check_G<S>(const S&, const Rect&, Variant);                               \
    template bool check_D<S>(const S&, const Rect&, const Rect&, Variant);                  \
    template bool check_E<S>(const S&, double, Variant);                                    \
    template bool grows_to<S>(const S&, Variant, const Rect&, const Rect&);

LBP_INSTANTIATE(Field)
LBP_INSTANTIATE(PlacedSites)
LBP_INSTANTIATE(Restricted<Field>)
LBP_INSTANTIATE(Restricted<PlacedSites>)

#undef LBP_INSTANTIATE

}  // namespace lbp
