#include "lbp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>
#include <thread>

namespace lbp {

double ExactResult::evaluate(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ExactResult::evaluate: p must lie in [0,1]");
    double total = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        if (coefficients[k] == 0) continue;
        total += static_cast<double>(coefficients[k]) * std::pow(p, static_cast<double>(k)) *
                 std::pow(1.0 - p, static_cast<double>(n - k));
    }
    return total;
}

bool AssignmentView::on_at(std::int64_t x, std::int64_t y) const {
    for (std::size_t i = 0; i < sites_->size(); ++i)
        if ((*sites_)[i] == Site{x, y}) return on(i);
    return false;
}

PlacedSites AssignmentView::local_configuration() const {
    PlacedSites placed(SiteState::Active);
    for (std::size_t i = 0; i < sites_->size(); ++i)
        if (on(i)) placed.occupy((*sites_)[i].x, (*sites_)[i].y);
    return placed;
}

namespace {

// Dense grid with its own rule evaluation; shares no code with the lattice kernel.
struct NaiveGrid {
    std::int64_t x0 = 0, y0 = 0, w = 0, h = 0;
    std::vector<SiteState> cells;

    NaiveGrid(const Rect& r) : x0(r.x_min()), y0(r.y_min()), w(r.width()), h(r.height()),
                              cells(static_cast<std::size_t>(w * h), SiteState::Empty) {}

    SiteState get(std::int64_t x, std::int64_t y) const {
        const std::int64_t i = x - x0, j = y - y0;
        if (i < 0 || j < 0 || i >= w || j >= h) return SiteState::Empty;
        return cells[static_cast<std::size_t>(j * w + i)];
    }
    void put(std::int64_t x, std::int64_t y, SiteState s) { cells[static_cast<std::size_t>((y - y0) * w + (x - x0))] = s; }
};

bool within_reach(VariantKind kind, std::int64_t dx, std::int64_t dy) {
    const std::int64_t l1 = std::abs(dx) + std::abs(dy);
    const std::int64_t linf = std::max(std::abs(dx), std::abs(dy));
    switch (kind) {
        case VariantKind::Standard: return l1 >= 1 && l1 <= 2;
        case VariantKind::Modified: return linf == 1;
        case VariantKind::Frobose: return l1 == 1;
    }
    return false;
}

void naive_relax_grid(NaiveGrid& g, const Dynamics& d) {
    for (bool changed = true; changed;) {
        changed = false;
        NaiveGrid next = g;
        for (std::int64_t y = g.y0; y < g.y0 + g.h; ++y)
            for (std::int64_t x = g.x0; x < g.x0 + g.w; ++x) {
                const SiteState s = g.get(x, y);
                bool fire = false;
                if (s == SiteState::Occupied && d.occupied_activation) {
                    for (std::int64_t dy = -2; dy <= 2 && !fire; ++dy)
                        for (std::int64_t dx = -2; dx <= 2 && !fire; ++dx)
                            fire = within_reach(d.variant.kind(), dx, dy) && g.get(x + dx, y + dy) == SiteState::Active;
                } else if (s == SiteState::Empty) {
                    const int n = (g.get(x + 1, y) == SiteState::Active) + (g.get(x - 1, y) == SiteState::Active) +
                                  (g.get(x, y + 1) == SiteState::Active) + (g.get(x, y - 1) == SiteState::Active);
                    fire = n >= 2;
                }
                if (fire) {
                    next.put(x, y, SiteState::Active);
                    changed = true;
                }
            }
        g = std::move(next);
    }
}

void validate_window(const std::vector<Site>& window, bool origin_allowed) {
    if (window.size() > kMaxOracleSites)
        throw ScaleRefused("oracle: " + std::to_string(window.size()) + " sites exceeds the limit of " +
                           std::to_string(kMaxOracleSites));
    std::set<Site> seen;
    for (const auto& s : window) {
        if (!origin_allowed && s == Site{0, 0}) throw std::invalid_argument("oracle: window must not contain the origin");
        if (!seen.insert(s).second) throw std::invalid_argument("oracle: duplicate window site");
    }
}

Rect bounding_box(const std::vector<Site>& window, Rect seed) {
    for (const auto& s : window) seed = seed.bounding_union(Rect::point(s.x, s.y));
    return seed;
}

// Splits [0, 2^n) into contiguous ranges, one per worker, and sums per-k counts.
template <class PerRange>
ExactResult enumerate(std::size_t n, unsigned workers, PerRange per_range) {
    const std::uint64_t total = std::uint64_t{1} << n;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n + 1, 0));
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
        if (workers == 1) {
            per_range(lo, hi, partial[w]);
        } else {
            threads.emplace_back([&, lo, hi, w] { per_range(lo, hi, partial[w]); });
        }
    }
    for (auto& t : threads) t.join();
    ExactResult out;
    out.n = n;
    out.coefficients.assign(n + 1, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k <= n; ++k) out.coefficients[k] += p[k];
    return out;
}

constexpr std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

}  // namespace

Configuration naive_relax(const Configuration& config, const Dynamics& dynamics) {
    NaiveGrid g(config.window());
    for (std::int64_t y = g.y0; y < g.y0 + g.h; ++y)
        for (std::int64_t x = g.x0; x < g.x0 + g.w; ++x) g.put(x, y, config.at(x, y));
    naive_relax_grid(g, dynamics);
    Configuration out(config.window());
    for (std::int64_t y = g.y0; y < g.y0 + g.h; ++y)
        for (std::int64_t x = g.x0; x < g.x0 + g.w; ++x) out.set(x, y, g.get(x, y));
    return out;
}

ExactResult exact_growth_probability(const std::vector<Site>& window, Variant variant, const Rect& target,
                                     unsigned workers) {
    validate_window(window, false);
    if (target.is_empty()) throw std::invalid_argument("exact_growth_probability: target must be nonempty");
    const Rect box = bounding_box(window, Rect::origin().bounding_union(target)).padded(1);
    const Dynamics dynamics = Dynamics::local(variant);
    return enumerate(window.size(), workers, [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& counts) {
        NaiveGrid input(box);
        input.put(0, 0, SiteState::Active);
        std::uint64_t mask = gray(lo);
        for (std::size_t b = 0; b < window.size(); ++b)
            if ((mask >> b) & 1u) input.put(window[b].x, window[b].y, SiteState::Occupied);
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (i > lo) {
                const std::uint64_t next = gray(i);
                const auto bit = static_cast<std::size_t>(std::countr_zero(next ^ mask));
                mask = next;
                const Site& s = window[bit];
                input.put(s.x, s.y, ((mask >> bit) & 1u) ? SiteState::Occupied : SiteState::Empty);
            }
            NaiveGrid g = input;
            naive_relax_grid(g, dynamics);
            bool all = true;
            for (std::int64_t y = target.y_min(); y <= target.y_max() && all; ++y)
                for (std::int64_t x = target.x_min(); x <= target.x_max() && all; ++x)
                    all = g.get(x, y) == SiteState::Active;
            if (all) ++counts[static_cast<std::size_t>(std::popcount(mask))];
        }
    });
}

ExactResult exact_event_probability(const std::vector<Site>& window,
                                    const std::function<bool(const AssignmentView&)>& predicate, unsigned workers) {
    validate_window(window, true);
    return enumerate(window.size(), workers, [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& counts) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t mask = gray(i);
            if (predicate(AssignmentView(window, mask))) ++counts[static_cast<std::size_t>(std::popcount(mask))];
        }
    });
}

ExactResult exact_bp_spanning(std::int64_t L, unsigned workers) {
    if (L < 1 || L * L > static_cast<std::int64_t>(kMaxOracleSites))
        throw ScaleRefused("exact_bp_spanning: L*L must lie in [1, " + std::to_string(kMaxOracleSites) + "]");
    std::vector<Site> sites;
    for (std::int64_t y = 1; y <= L; ++y)
        for (std::int64_t x = 1; x <= L; ++x) sites.push_back({x, y});
    const Rect square(1, L, 1, L);
    return exact_event_probability(
        sites,
        [&](const AssignmentView& view) {
            NaiveGrid g(square);
            for (std::size_t i = 0; i < view.size(); ++i)
                if (view.on(i)) g.put(view.site(i).x, view.site(i).y, SiteState::Active);
            naive_relax_grid(g, Dynamics::bootstrap_only());
            return std::all_of(g.cells.begin(), g.cells.end(), [](SiteState s) { return s == SiteState::Active; });
        },
        workers);
}

std::uint64_t engine_mismatches(const std::vector<Site>& window, Variant variant, unsigned workers) {
    validate_window(window, false);
    const Rect box = bounding_box(window, Rect::origin()).padded(1);
    const Dynamics dynamics = Dynamics::local(variant);
    const ExactResult r =
        enumerate(window.size(), workers, [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& counts) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                const std::uint64_t mask = gray(i);
                Configuration input(box);
                input.set(0, 0, SiteState::Active);
                for (std::size_t b = 0; b < window.size(); ++b)
                    if ((mask >> b) & 1u) input.set(window[b].x, window[b].y, SiteState::Occupied);
                if (!(relax(input, dynamics).config == naive_relax(input, dynamics))) ++counts[0];
            }
        });
    return r.coefficients[0];
}

}  // namespace lbp
