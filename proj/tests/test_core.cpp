#include <doctest.h>

#include <cmath>
#include <random>

#include "lbp/core.hpp"

using namespace lbp;

TEST_CASE("site_state at p = 0 and p = 1") {
    const Field empty(42, 0.0), full(42, 1.0);
    for (std::int64_t x = -5; x <= 5; ++x)
        for (std::int64_t y = -5; y <= 5; ++y) {
            if (x == 0 && y == 0) continue;
            CHECK(empty.site_state(x, y) == SiteState::Empty);
            CHECK(full.site_state(x, y) == SiteState::Occupied);
        }
    CHECK(empty.site_state(0, 0) == SiteState::Active);
    CHECK(Field::unconditioned(1, 0.0).site_state(0, 0) == SiteState::Empty);
    CHECK(Field::unconditioned(1, 1.0).site_state(0, 0) == SiteState::Active);
    CHECK(Field(1, 0.5, SiteState::Empty).site_state(0, 0) == SiteState::Empty);
}

TEST_CASE("site_state occupied fraction at p = 0.5 over 10^6 sites") {
    const Field field(42, 0.5);
    std::int64_t occupied = 0, n = 0;
    for (std::int64_t x = 1; x <= 1000; ++x)
        for (std::int64_t y = 1; y <= 1000; ++y, ++n) occupied += field.site_state(x, y) == SiteState::Occupied;
    const double frac = static_cast<double>(occupied) / static_cast<double>(n);
    CHECK(std::abs(frac - 0.5) <= 0.0015);
}

TEST_CASE("field marginals and pairwise independence at p = 0.3") {
    const double p = 0.3;
    const Field field(7, p);
    const double sigma = std::sqrt(p * (1 - p) / 1e6);
    std::int64_t occ = 0, both = 0;
    for (std::int64_t i = 0; i < 1'000'000; ++i) {
        const std::int64_t x = i % 1000 + 1, y = i / 1000 - 500;
        const bool a = field.site_state(x, y) == SiteState::Occupied;
        const bool b = field.site_state(x + 1, y) == SiteState::Occupied;
        occ += a;
        both += a && b;
    }
    CHECK(std::abs(occ / 1e6 - p) <= 3 * sigma);
    const double sigma2 = std::sqrt(p * p * (1 - p * p) / 1e6);
    CHECK(std::abs(both / 1e6 - p * p) <= 3 * sigma2);

    // Origin sampled Active with probability p across seeds.
    std::int64_t active = 0;
    for (std::uint64_t s = 0; s < 1'000'000; ++s) active += Field::unconditioned(s, p).site_state(0, 0) == SiteState::Active;
    CHECK(std::abs(active / 1e6 - p) <= 3 * sigma);
}

TEST_CASE("field determinism") {
    const Field a(99, 0.37), b(99, 0.37), c(100, 0.37);
    bool any_diff = false;
    for (std::int64_t x = -30; x <= 30; ++x)
        for (std::int64_t y = -30; y <= 30; ++y) {
            CHECK(a.site_state(x, y) == b.site_state(x, y));
            CHECK(site_state(a, x, y) == a.site_state(x, y));
            any_diff |= a.site_state(x, y) != c.site_state(x, y);
        }
    CHECK(a == b);
    CHECK(any_diff);
    CHECK_THROWS_AS(Field(1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(Field(1, -0.1), std::invalid_argument);
}

TEST_CASE("variant table") {
    CHECK(Variant::standard().pad_width() == 2);
    CHECK(Variant::modified().pad_width() == 1);
    CHECK(Variant::frobose().pad_width() == 1);
    CHECK(Variant::standard().rate() == RateKind::G);
    CHECK(Variant::modified().rate() == RateKind::F);
    CHECK(Variant::frobose().rate() == RateKind::F);
    CHECK(Variant::standard().lambda() == doctest::Approx(M_PI * M_PI / 18).epsilon(1e-15));
    CHECK(Variant::modified().lambda() == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-15));
    CHECK(Variant::parse("frobose") == Variant::frobose());
    CHECK_THROWS_AS(Variant::parse("moore"), std::invalid_argument);
}

TEST_CASE("variant neighbourhood nesting") {
    int std_count = 0, mod_count = 0, fro_count = 0;
    for (int dx = -2; dx <= 2; ++dx)
        for (int dy = -2; dy <= 2; ++dy) {
            const bool s = Variant::standard().occupied_reach(dx, dy);
            const bool m = Variant::modified().occupied_reach(dx, dy);
            const bool f = Variant::frobose().occupied_reach(dx, dy);
            CHECK((!f || m));
            CHECK((!m || s));
            std_count += s;
            mod_count += m;
            fro_count += f;
        }
    CHECK(std_count == 12);
    CHECK(mod_count == 8);
    CHECK(fro_count == 4);
}

TEST_CASE("rect basics") {
    const Rect r(0, 2, -1, 3);
    CHECK(r.dims() == Dims{3, 5});
    CHECK(r.semiperimeter() == 8);
    CHECK(r.area() == 15);
    CHECK(r.padded(2).dims() == Dims{7, 9});
    CHECK(r.padded(1).contains(r));
    CHECK_FALSE(r.contains(r.padded(1)));
    CHECK(Rect::empty().is_empty());
    CHECK(Rect::empty().area() == 0);
    CHECK_THROWS_AS(Rect::empty().dims(), std::logic_error);
    CHECK_THROWS_AS(Rect(3, 2, 0, 0), std::invalid_argument);
    CHECK(Rect::empty() == Rect::empty());
    CHECK_FALSE(Rect::empty() == Rect::origin());
    CHECK(r.bounding_union(Rect::point(5, 5)) == Rect(0, 5, -1, 5));
}

TEST_CASE("rect coordinates near 2^62 are refused") {
    CHECK_THROWS_AS(Rect(0, kCoordinateLimit, 0, 0), CoordinateOverflow);
    const Rect edge(kCoordinateLimit - 2, kCoordinateLimit - 1, 0, 0);
    CHECK_THROWS_AS(edge.padded(1), CoordinateOverflow);
}

TEST_CASE("frame_strips examples") {
    const Rect inner(0, 2, 0, 2);
    for (const auto& s : frame_strips(inner, inner)) CHECK(s.is_empty());

    const auto full = frame_strips(inner, Rect(-1, 3, -1, 3));
    std::int64_t area = 0;
    for (const auto& s : full) {
        CHECK_FALSE(s.is_empty());
        area += s.area();
    }
    CHECK(area == 16);
    CHECK(full[0] == Rect(-1, -1, -1, -1));  // S1 bottom-left
    CHECK(full[1] == Rect(0, 2, -1, -1));    // S2 bottom
    CHECK(full[3] == Rect(3, 3, 0, 2));      // S4 right
    CHECK(full[6] == Rect(-1, -1, 3, 3));    // S7 top-left

    // Growth to the right only: the right-hand strips carry all of the frame.
    const auto right = frame_strips(inner, Rect(0, 4, 0, 2));
    CHECK(right[2].area() + right[3].area() + right[4].area() == 6);
    CHECK(right[3] == Rect(3, 4, 0, 2));
    for (int i : {0, 1, 5, 6, 7}) CHECK(right[static_cast<std::size_t>(i)].is_empty());

    CHECK_THROWS_AS(frame_strips(Rect(0, 5, 0, 0), inner), std::invalid_argument);
}

TEST_CASE("frame_strips partitions the frame for random nested pairs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coord(-6, 6), grow(0, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        const Rect inner(x0, x1, y0, y1);
        const Rect outer(x0 - grow(rng), x1 + grow(rng), y0 - grow(rng), y1 + grow(rng));
        const auto strips = frame_strips(inner, outer);
        std::int64_t area = inner.area();
        for (const auto& s : strips) {
            CHECK(outer.contains(s));
            area += s.area();
        }
        REQUIRE(area == outer.area());
        for (std::int64_t x = outer.x_min(); x <= outer.x_max(); ++x)
            for (std::int64_t y = outer.y_min(); y <= outer.y_max(); ++y) {
                int hits = inner.contains(x, y);
                for (const auto& s : strips) hits += s.contains(x, y);
                REQUIRE(hits == 1);
            }
    }
}

TEST_CASE("placed sites and restriction") {
    PlacedSites sigma(SiteState::Active);
    sigma.occupy(2, 0).occupy(0, 2);
    CHECK(sigma.site_state(0, 0) == SiteState::Active);
    CHECK(sigma.site_state(2, 0) == SiteState::Occupied);
    CHECK(sigma.site_state(1, 0) == SiteState::Empty);

    const Field field(5, 1.0);
    const Restricted<Field> only(field, {{1, 0}});
    CHECK(only.site_state(1, 0) == SiteState::Occupied);
    CHECK(only.site_state(2, 0) == SiteState::Empty);
    CHECK(only.site_state(0, 0) == SiteState::Active);
}
