#pragma once

#include <cstdint>
#include <vector>

#include "lbp/core.hpp"

namespace lbp {

// Two bits per site.
class PackedStates {
public:
    PackedStates() = default;
    explicit PackedStates(std::size_t n) : size_(n), words_((n + 31) / 32, 0) {}

    std::size_t size() const { return size_; }

    SiteState get(std::size_t i) const {
        return static_cast<SiteState>((words_[i >> 5] >> ((i & 31) * 2)) & 3u);
    }
    void set(std::size_t i, SiteState s) {
        const unsigned shift = (i & 31) * 2;
        std::uint64_t& w = words_[i >> 5];
        w = (w & ~(std::uint64_t{3} << shift)) | (std::uint64_t(s) << shift);
    }

    friend bool operator==(const PackedStates&, const PackedStates&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Windows larger than this many sites are refused.
inline constexpr std::int64_t kMaxWindowSites = 1'000'000'000;

// Finite window of the lattice at one time step. Sites outside the window read Empty.
class Configuration {
public:
    explicit Configuration(const Rect& window);

    template <StateSource S>
    static Configuration sample(const S& sigma, const Rect& window) {
        Configuration c(window);
        std::size_t i = 0;
        for (std::int64_t y = window.y_min(); y <= window.y_max(); ++y)
            for (std::int64_t x = window.x_min(); x <= window.x_max(); ++x, ++i) {
                const SiteState s = sigma.site_state(x, y);
                if (s != SiteState::Empty) c.states_.set(i, s);
            }
        return c;
    }

    const Rect& window() const { return window_; }
    std::int64_t time() const { return time_; }
    void set_time(std::int64_t t) { time_ = t; }

    std::int64_t width() const { return width_; }
    std::int64_t height() const { return height_; }
    std::size_t site_count() const { return states_.size(); }

    SiteState at(std::int64_t x, std::int64_t y) const {
        if (!window_.contains(x, y)) return SiteState::Empty;
        return states_.get(index_of(x, y));
    }
    void set(std::int64_t x, std::int64_t y, SiteState s);
    void fill(const Rect& r, SiteState s);

    std::size_t index_of(std::int64_t x, std::int64_t y) const {
        return static_cast<std::size_t>((y - window_.y_min()) * width_ + (x - window_.x_min()));
    }
    SiteState at_index(std::size_t i) const { return states_.get(i); }
    void set_index(std::size_t i, SiteState s) { states_.set(i, s); }

    std::size_t count(SiteState s) const;
    std::vector<Site> sites_in(SiteState s) const;
    Rect active_bounds() const;
    // True when the Active set is empty or equals its bounding rectangle.
    bool active_is_rectangle() const;

    // Window and states; time is ignored.
    friend bool operator==(const Configuration& l, const Configuration& r) {
        return l.window_ == r.window_ && l.states_ == r.states_;
    }

private:
    Rect window_;
    std::int64_t width_ = 0;
    std::int64_t height_ = 0;
    std::int64_t time_ = 0;
    PackedStates states_;
};

// Update rules: occupied activation per variant (L1 family), empty activation by
// two active lattice neighbours (L2). Plain bootstrap percolation disables the former.
struct Dynamics {
    Variant variant = Variant::standard();
    bool occupied_activation = true;

    static Dynamics local(Variant v) { return {v, true}; }
    static Dynamics bootstrap_only() { return {Variant::standard(), false}; }
};

// One synchronous application of the rules to every window site.
Configuration step(const Configuration& config, const Dynamics& dynamics);

struct Relaxation {
    Configuration config;
    std::int64_t steps_taken = 0;  // includes the final pass that changed nothing
};

// Iterates synchronous steps to a fixed point, re-examining only the neighbourhoods
// of sites activated in the previous step.
Relaxation relax(Configuration config, const Dynamics& dynamics);

struct EventualActivity {
    Configuration config;
    // An Active site lies within the pad width of the window edge: the window
    // answer may differ from the infinite-lattice one and must be treated as censored.
    bool boundary_touched = false;

    std::vector<Site> active_sites() const { return config.sites_in(SiteState::Active); }
    Rect active_bounds() const { return config.active_bounds(); }
};

bool touches_boundary(const Configuration& config, int pad);

template <StateSource S>
EventualActivity eventually_active(const S& sigma, const Rect& window, Variant variant) {
    if (!window.contains(0, 0)) throw std::invalid_argument("eventually_active: window must contain the origin");
    Relaxation r = relax(Configuration::sample(sigma, window), Dynamics::local(variant));
    const bool touched = touches_boundary(r.config, variant.pad_width());
    return {std::move(r.config), touched};
}

// Standard bootstrap percolation on {1..L}^2: each site initially Active with
// probability p. Returns whether the whole square is Active at fixation.
bool run_standard_bp(std::int64_t L, double p, std::uint64_t seed);

}  // namespace lbp
