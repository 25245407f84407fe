#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lbp {

enum class SiteState : std::uint8_t { Empty = 0, Occupied = 1, Active = 2 };

char glyph(SiteState s);

enum class VariantKind { Standard, Modified, Frobose };

enum class RateKind { G, F };

// Occupied-activation neighbourhood, pad width and rate function of one local model.
class Variant {
public:
    constexpr Variant() = default;
    constexpr explicit Variant(VariantKind kind) : kind_(kind) {}

    static constexpr Variant standard() { return Variant(VariantKind::Standard); }
    static constexpr Variant modified() { return Variant(VariantKind::Modified); }
    static constexpr Variant frobose() { return Variant(VariantKind::Frobose); }

    // Accepts "standard", "modified", "frobose" (also "froböse").
    static Variant parse(std::string_view name);
    static const std::array<Variant, 3>& all();

    constexpr VariantKind kind() const { return kind_; }
    std::string_view name() const;

    // Whether an Active site at offset (dx, dy) activates an Occupied one.
    constexpr bool occupied_reach(std::int64_t dx, std::int64_t dy) const {
        const std::int64_t ax = dx < 0 ? -dx : dx;
        const std::int64_t ay = dy < 0 ? -dy : dy;
        if (ax == 0 && ay == 0) return false;
        switch (kind_) {
            case VariantKind::Standard: return ax + ay <= 2;
            case VariantKind::Modified: return ax <= 1 && ay <= 1;
            case VariantKind::Frobose: return ax + ay <= 1;
        }
        return false;
    }

    constexpr int pad_width() const { return kind_ == VariantKind::Standard ? 2 : 1; }
    constexpr RateKind rate() const { return kind_ == VariantKind::Standard ? RateKind::G : RateKind::F; }

    // pi^2/18 for the standard model, pi^2/6 otherwise.
    double lambda() const;

    // Standard: no two adjacent empty lines. Modified/Froböse: no empty line at all.
    constexpr bool forbids_single_gaps() const { return kind_ != VariantKind::Standard; }

    friend constexpr bool operator==(Variant, Variant) = default;

private:
    VariantKind kind_ = VariantKind::Standard;
};

struct Site {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend constexpr bool operator==(const Site&, const Site&) = default;
    friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

struct SiteHash {
    std::size_t operator()(const Site& s) const noexcept;
};

struct Dims {
    std::int64_t a = 0;
    std::int64_t b = 0;
    friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

// Coordinates at or beyond this magnitude are refused.
inline constexpr std::int64_t kCoordinateLimit = std::int64_t{1} << 62;

class CoordinateOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// A request whose size or rarity is outside what the tool will attempt.
class ScaleRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inclusive integer rectangle {x_min..x_max} x {y_min..y_max}, or the empty rectangle.
class Rect {
public:
    Rect() = default;  // empty
    Rect(std::int64_t x_min, std::int64_t x_max, std::int64_t y_min, std::int64_t y_max);

    static Rect empty() { return Rect(); }
    static Rect point(std::int64_t x, std::int64_t y) { return Rect(x, x, y, y); }
    static Rect origin() { return point(0, 0); }

    bool is_empty() const { return empty_; }

    // These throw std::logic_error on the empty rectangle.
    std::int64_t x_min() const;
    std::int64_t x_max() const;
    std::int64_t y_min() const;
    std::int64_t y_max() const;
    Dims dims() const;
    std::int64_t width() const { return dims().a; }
    std::int64_t height() const { return dims().b; }
    std::int64_t semiperimeter() const;

    std::int64_t area() const;  // 0 for empty
    bool contains(std::int64_t x, std::int64_t y) const;
    bool contains(const Rect& other) const;  // empty is contained in everything
    Rect padded(std::int64_t k) const;
    Rect bounding_union(const Rect& other) const;

    friend bool operator==(const Rect& l, const Rect& r);

    std::string to_string() const;

private:
    void require_nonempty() const;

    bool empty_ = true;
    std::int64_t x_min_ = 0, x_max_ = -1, y_min_ = 0, y_max_ = -1;
};

// Strips S1..S8 of outer \ inner, counterclockwise from the bottom-left corner:
// S1 bottom-left, S2 bottom, S3 bottom-right, S4 right, S5 top-right, S6 top,
// S7 top-left, S8 left. Throws std::invalid_argument unless inner is a nonempty
// subset of outer.
std::array<Rect, 8> frame_strips(const Rect& inner, const Rect& outer);

// Stateless 64-bit finaliser (splitmix64).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t site_hash(std::uint64_t seed, std::int64_t x, std::int64_t y) {
    return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(x)) ^ static_cast<std::uint64_t>(y));
}

// Bernoulli(p) threshold on a 64-bit hash: hit iff hash < p * 2^64.
class BernoulliThreshold {
public:
    BernoulliThreshold() = default;
    explicit BernoulliThreshold(double p);
    bool hit(std::uint64_t h) const { return always_ || h < threshold_; }

private:
    std::uint64_t threshold_ = 0;
    bool always_ = false;
};

// Lazily sampled infinite initial configuration. Non-origin sites are Occupied
// with probability p, else Empty. The origin is either forced to a fixed state
// or sampled as Active with probability p, else Empty.
class Field {
public:
    // Conditioned field: origin forced Active.
    Field(std::uint64_t master_seed, double p);
    Field(std::uint64_t master_seed, double p, std::optional<SiteState> origin_override);

    static Field conditioned(std::uint64_t seed, double p) { return Field(seed, p, SiteState::Active); }
    static Field unconditioned(std::uint64_t seed, double p) { return Field(seed, p, std::nullopt); }

    std::uint64_t master_seed() const { return seed_; }
    double p() const { return p_; }
    const std::optional<SiteState>& origin_override() const { return origin_; }

    bool sampled(std::int64_t x, std::int64_t y) const { return bernoulli_.hit(site_hash(seed_, x, y)); }

    SiteState site_state(std::int64_t x, std::int64_t y) const {
        if (x == 0 && y == 0) {
            if (origin_) return *origin_;
            return sampled(0, 0) ? SiteState::Active : SiteState::Empty;
        }
        return sampled(x, y) ? SiteState::Occupied : SiteState::Empty;
    }

    friend bool operator==(const Field& l, const Field& r) {
        return l.seed_ == r.seed_ && l.p_ == r.p_ && l.origin_ == r.origin_;
    }

private:
    std::uint64_t seed_;
    double p_;
    std::optional<SiteState> origin_;
    BernoulliThreshold bernoulli_;
};

SiteState site_state(const Field& field, std::int64_t x, std::int64_t y);

// Explicit initial configuration: listed sites carry their state, all others are Empty.
class PlacedSites {
public:
    PlacedSites() = default;
    explicit PlacedSites(SiteState origin) { set(0, 0, origin); }

    PlacedSites& set(std::int64_t x, std::int64_t y, SiteState s);
    PlacedSites& occupy(std::int64_t x, std::int64_t y) { return set(x, y, SiteState::Occupied); }

    SiteState site_state(std::int64_t x, std::int64_t y) const;
    std::size_t size() const { return states_.size(); }

private:
    std::unordered_map<Site, SiteState, SiteHash> states_;
};

// Any initial configuration sigma: a pure function of the site.
template <class S>
concept StateSource = requires(const S& s, std::int64_t x, std::int64_t y) {
    { s.site_state(x, y) } -> std::convertible_to<SiteState>;
};

// sigma restricted to `allowed` (plus the origin); everything else reads Empty.
template <StateSource Base>
class Restricted {
public:
    Restricted(const Base& base, const std::vector<Site>& allowed) : base_(&base) {
        for (const auto& s : allowed) allowed_.emplace(s, true);
    }
    SiteState site_state(std::int64_t x, std::int64_t y) const {
        if ((x == 0 && y == 0) || allowed_.contains(Site{x, y})) return base_->site_state(x, y);
        return SiteState::Empty;
    }

private:
    const Base* base_;
    std::unordered_map<Site, bool, SiteHash> allowed_;
};

}  // namespace lbp
