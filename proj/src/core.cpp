#include "lbp/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lbp {

char glyph(SiteState s) {
    switch (s) {
        case SiteState::Empty: return '.';
        case SiteState::Occupied: return 'o';
        case SiteState::Active: return '*';
    }
    return '?';
}

Variant Variant::parse(std::string_view name) {
    if (name == "standard") return standard();
    if (name == "modified") return modified();
    if (name == "frobose" || name == "froböse") return frobose();
    throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected standard|modified|frobose)");
}

const std::array<Variant, 3>& Variant::all() {
    static const std::array<Variant, 3> variants{standard(), modified(), frobose()};
    return variants;
}

std::string_view Variant::name() const {
    switch (kind_) {
        case VariantKind::Standard: return "standard";
        case VariantKind::Modified: return "modified";
        case VariantKind::Frobose: return "frobose";
    }
    return "?";
}

double Variant::lambda() const {
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    return kind_ == VariantKind::Standard ? pi2 / 18.0 : pi2 / 6.0;
}

std::size_t SiteHash::operator()(const Site& s) const noexcept {
    return static_cast<std::size_t>(site_hash(0x5151, s.x, s.y));
}

namespace {

void check_coordinate(std::int64_t v) {
    if (v >= kCoordinateLimit || v <= -kCoordinateLimit)
        throw CoordinateOverflow("rectangle coordinate " + std::to_string(v) + " exceeds 2^62");
}

}  // namespace

Rect::Rect(std::int64_t x_min, std::int64_t x_max, std::int64_t y_min, std::int64_t y_max)
    : empty_(false), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
    check_coordinate(x_min);
    check_coordinate(x_max);
    check_coordinate(y_min);
    check_coordinate(y_max);
    if (x_min > x_max || y_min > y_max)
        throw std::invalid_argument("inverted rectangle bounds; use Rect::empty() for the empty rectangle");
}

void Rect::require_nonempty() const {
    if (empty_) throw std::logic_error("operation undefined on the empty rectangle");
}

std::int64_t Rect::x_min() const { require_nonempty(); return x_min_; }
std::int64_t Rect::x_max() const { require_nonempty(); return x_max_; }
std::int64_t Rect::y_min() const { require_nonempty(); return y_min_; }
std::int64_t Rect::y_max() const { require_nonempty(); return y_max_; }

Dims Rect::dims() const {
    require_nonempty();
    return {x_max_ - x_min_ + 1, y_max_ - y_min_ + 1};
}

std::int64_t Rect::semiperimeter() const {
    const Dims d = dims();
    return d.a + d.b;
}

std::int64_t Rect::area() const {
    if (empty_) return 0;
    const Dims d = dims();
    return d.a * d.b;
}

bool Rect::contains(std::int64_t x, std::int64_t y) const {
    return !empty_ && x >= x_min_ && x <= x_max_ && y >= y_min_ && y <= y_max_;
}

bool Rect::contains(const Rect& other) const {
    if (other.empty_) return true;
    if (empty_) return false;
    return other.x_min_ >= x_min_ && other.x_max_ <= x_max_ && other.y_min_ >= y_min_ && other.y_max_ <= y_max_;
}

Rect Rect::padded(std::int64_t k) const {
    require_nonempty();
    return Rect(x_min_ - k, x_max_ + k, y_min_ - k, y_max_ + k);
}

Rect Rect::bounding_union(const Rect& other) const {
    if (empty_) return other;
    if (other.empty_) return *this;
    return Rect(std::min(x_min_, other.x_min_), std::max(x_max_, other.x_max_),
                std::min(y_min_, other.y_min_), std::max(y_max_, other.y_max_));
}

bool operator==(const Rect& l, const Rect& r) {
    if (l.empty_ || r.empty_) return l.empty_ == r.empty_;
    return l.x_min_ == r.x_min_ && l.x_max_ == r.x_max_ && l.y_min_ == r.y_min_ && l.y_max_ == r.y_max_;
}

std::string Rect::to_string() const {
    if (empty_) return "{}";
    std::ostringstream os;
    os << "{" << x_min_ << ".." << x_max_ << "}x{" << y_min_ << ".." << y_max_ << "}";
    return os.str();
}

namespace {

Rect span_or_empty(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1) {
    if (x0 > x1 || y0 > y1) return Rect::empty();
    return Rect(x0, x1, y0, y1);
}

}  // namespace

std::array<Rect, 8> frame_strips(const Rect& inner, const Rect& outer) {
    if (inner.is_empty() || !outer.contains(inner))
        throw std::invalid_argument("frame_strips: inner " + inner.to_string() + " is not a nonempty subset of " +
                                    outer.to_string());
    const std::int64_t lx0 = outer.x_min(), lx1 = inner.x_min() - 1;
    const std::int64_t mx0 = inner.x_min(), mx1 = inner.x_max();
    const std::int64_t rx0 = inner.x_max() + 1, rx1 = outer.x_max();
    const std::int64_t by0 = outer.y_min(), by1 = inner.y_min() - 1;
    const std::int64_t my0 = inner.y_min(), my1 = inner.y_max();
    const std::int64_t ty0 = inner.y_max() + 1, ty1 = outer.y_max();
    return {
        span_or_empty(lx0, lx1, by0, by1),  // S1
        span_or_empty(mx0, mx1, by0, by1),  // S2
        span_or_empty(rx0, rx1, by0, by1),  // S3
        span_or_empty(rx0, rx1, my0, my1),  // S4
        span_or_empty(rx0, rx1, ty0, ty1),  // S5
        span_or_empty(mx0, mx1, ty0, ty1),  // S6
        span_or_empty(lx0, lx1, ty0, ty1),  // S7
        span_or_empty(lx0, lx1, my0, my1),  // S8
    };
}

BernoulliThreshold::BernoulliThreshold(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
    const double scaled = std::ldexp(p, 64);
    if (scaled >= 18446744073709551616.0) {
        always_ = true;
    } else {
        threshold_ = static_cast<std::uint64_t>(scaled);
    }
}

Field::Field(std::uint64_t master_seed, double p) : Field(master_seed, p, SiteState::Active) {}

Field::Field(std::uint64_t master_seed, double p, std::optional<SiteState> origin_override)
    : seed_(master_seed), p_(p), origin_(origin_override), bernoulli_(p) {}

SiteState site_state(const Field& field, std::int64_t x, std::int64_t y) { return field.site_state(x, y); }

PlacedSites& PlacedSites::set(std::int64_t x, std::int64_t y, SiteState s) {
    states_[Site{x, y}] = s;
    return *this;
}

SiteState PlacedSites::site_state(std::int64_t x, std::int64_t y) const {
    const auto it = states_.find(Site{x, y});
    return it == states_.end() ? SiteState::Empty : it->second;
}

}  // namespace lbp
