#include "lbp/lattice.hpp"

#include <array>
#include <span>
#include <string>

namespace lbp {

namespace {

struct Offset {
    int dx, dy;
};

constexpr std::array<Offset, 4> kLatticeNeighbours{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

template <std::size_t N>
constexpr std::array<Offset, N> reach_offsets(Variant v) {
    std::array<Offset, N> out{};
    std::size_t k = 0;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
            if (v.occupied_reach(dx, dy)) out[k++] = {dx, dy};
    return out;
}

constexpr auto kStandardReach = reach_offsets<12>(Variant::standard());
constexpr auto kModifiedReach = reach_offsets<8>(Variant::modified());
constexpr auto kFroboseReach = reach_offsets<4>(Variant::frobose());

std::span<const Offset> reach_of(Variant v) {
    switch (v.kind()) {
        case VariantKind::Standard: return kStandardReach;
        case VariantKind::Modified: return kModifiedReach;
        case VariantKind::Frobose: return kFroboseReach;
    }
    return {};
}

// Sites whose rule outcome can depend on a given site becoming Active.
std::span<const Offset> influence_of(const Dynamics& d) {
    if (!d.occupied_activation) return kLatticeNeighbours;
    // Every reach set contains the four lattice neighbours.
    return reach_of(d.variant);
}

class Kernel {
public:
    Kernel(const Configuration& c, const Dynamics& d)
        : c_(c), w_(c.width()), h_(c.height()), reach_(reach_of(d.variant)), occupied_(d.occupied_activation) {}

    bool activates(std::int64_t x, std::int64_t y, SiteState s) const {
        if (s == SiteState::Occupied) {
            if (!occupied_) return false;
            for (const auto& o : reach_)
                if (active(x + o.dx, y + o.dy)) return true;
            return false;
        }
        if (s == SiteState::Empty) {
            int n = 0;
            for (const auto& o : kLatticeNeighbours) n += active(x + o.dx, y + o.dy);
            return n >= 2;
        }
        return false;
    }

private:
    // Local coordinates.
    bool active(std::int64_t x, std::int64_t y) const {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return false;
        return c_.at_index(static_cast<std::size_t>(y * w_ + x)) == SiteState::Active;
    }

    const Configuration& c_;
    std::int64_t w_, h_;
    std::span<const Offset> reach_;
    bool occupied_;
};

}  // namespace

Configuration::Configuration(const Rect& window) : window_(window) {
    if (window.is_empty()) throw std::invalid_argument("configuration window must be nonempty");
    const Dims d = window.dims();
    if (d.a > kMaxWindowSites / d.b)
        throw ScaleRefused("window " + window.to_string() + " exceeds " + std::to_string(kMaxWindowSites) + " sites");
    width_ = d.a;
    height_ = d.b;
    states_ = PackedStates(static_cast<std::size_t>(d.a * d.b));
}

void Configuration::set(std::int64_t x, std::int64_t y, SiteState s) {
    if (!window_.contains(x, y))
        throw std::out_of_range("site (" + std::to_string(x) + "," + std::to_string(y) + ") outside window");
    states_.set(index_of(x, y), s);
}

void Configuration::fill(const Rect& r, SiteState s) {
    if (r.is_empty()) return;
    if (!window_.contains(r)) throw std::out_of_range("fill rectangle outside window");
    for (std::int64_t y = r.y_min(); y <= r.y_max(); ++y)
        for (std::int64_t x = r.x_min(); x <= r.x_max(); ++x) states_.set(index_of(x, y), s);
}

std::size_t Configuration::count(SiteState s) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < states_.size(); ++i) n += states_.get(i) == s;
    return n;
}

std::vector<Site> Configuration::sites_in(SiteState s) const {
    std::vector<Site> out;
    std::size_t i = 0;
    for (std::int64_t y = window_.y_min(); y <= window_.y_max(); ++y)
        for (std::int64_t x = window_.x_min(); x <= window_.x_max(); ++x, ++i)
            if (states_.get(i) == s) out.push_back({x, y});
    return out;
}

Rect Configuration::active_bounds() const {
    Rect r = Rect::empty();
    std::size_t i = 0;
    for (std::int64_t y = window_.y_min(); y <= window_.y_max(); ++y)
        for (std::int64_t x = window_.x_min(); x <= window_.x_max(); ++x, ++i)
            if (states_.get(i) == SiteState::Active) r = r.bounding_union(Rect::point(x, y));
    return r;
}

bool Configuration::active_is_rectangle() const {
    const Rect b = active_bounds();
    return static_cast<std::int64_t>(count(SiteState::Active)) == b.area();
}

Configuration step(const Configuration& config, const Dynamics& dynamics) {
    Configuration next = config;
    const Kernel kernel(config, dynamics);
    std::size_t i = 0;
    for (std::int64_t y = 0; y < config.height(); ++y)
        for (std::int64_t x = 0; x < config.width(); ++x, ++i)
            if (kernel.activates(x, y, config.at_index(i))) next.set_index(i, SiteState::Active);
    next.set_time(config.time() + 1);
    return next;
}

Relaxation relax(Configuration config, const Dynamics& dynamics) {
    const std::int64_t w = config.width(), h = config.height();
    const auto influence = influence_of(dynamics);

    std::vector<std::uint32_t> candidates;
    candidates.reserve(config.site_count());
    for (std::size_t i = 0; i < config.site_count(); ++i)
        if (config.at_index(i) != SiteState::Active) candidates.push_back(static_cast<std::uint32_t>(i));

    // Round in which a site was last queued; avoids duplicate candidates.
    std::vector<std::uint32_t> queued(config.site_count(), 0);
    std::vector<std::uint32_t> fired;
    std::int64_t steps = 0;
    for (;;) {
        ++steps;
        fired.clear();
        {
            const Kernel kernel(config, dynamics);
            for (const std::uint32_t i : candidates) {
                const std::int64_t x = i % w, y = i / w;
                if (kernel.activates(x, y, config.at_index(i))) fired.push_back(i);
            }
        }
        if (fired.empty()) break;
        for (const std::uint32_t i : fired) config.set_index(i, SiteState::Active);

        const auto round = static_cast<std::uint32_t>(steps);
        candidates.clear();
        for (const std::uint32_t i : fired) {
            const std::int64_t x = i % w, y = i / w;
            for (const auto& o : influence) {
                const std::int64_t nx = x + o.dx, ny = y + o.dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const auto j = static_cast<std::uint32_t>(ny * w + nx);
                if (queued[j] == round || config.at_index(j) == SiteState::Active) continue;
                queued[j] = round;
                candidates.push_back(j);
            }
        }
    }
    config.set_time(config.time() + steps);
    return {std::move(config), steps};
}

bool touches_boundary(const Configuration& config, int pad) {
    const std::int64_t w = config.width(), h = config.height();
    std::size_t i = 0;
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x, ++i) {
            if (config.at_index(i) != SiteState::Active) continue;
            if (x < pad || y < pad || w - 1 - x < pad || h - 1 - y < pad) return true;
        }
    return false;
}

namespace {

// Site grid for plain bootstrap percolation, independent of the local-model field.
struct BootstrapSquare {
    std::uint64_t seed;
    BernoulliThreshold bernoulli;
    SiteState site_state(std::int64_t x, std::int64_t y) const {
        return bernoulli.hit(site_hash(seed, x, y)) ? SiteState::Active : SiteState::Empty;
    }
};

}  // namespace

bool run_standard_bp(std::int64_t L, double p, std::uint64_t seed) {
    if (L < 1) throw std::invalid_argument("run_standard_bp: L must be >= 1");
    if (L > kMaxWindowSites / L) throw ScaleRefused("L^2 exceeds " + std::to_string(kMaxWindowSites) + " cells");
    const Rect square(1, L, 1, L);
    const BootstrapSquare sigma{seed, BernoulliThreshold(p)};
    const Relaxation r = relax(Configuration::sample(sigma, square), Dynamics::bootstrap_only());
    return r.config.count(SiteState::Active) == r.config.site_count();
}

}  // namespace lbp
