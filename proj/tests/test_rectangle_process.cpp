#include <doctest.h>

#include <sstream>

#include "lbp/analytics.hpp"
#include "lbp/lattice.hpp"
#include "lbp/rectangle_process.hpp"

using namespace lbp;

namespace {

// Columns of `rect` empty in sigma, one flag per column.
template <class S>
std::vector<bool> empty_columns(const S& sigma, const Rect& rect) {
    std::vector<bool> out;
    for (std::int64_t x = rect.x_min(); x <= rect.x_max(); ++x) {
        bool empty = true;
        for (std::int64_t y = rect.y_min(); y <= rect.y_max(); ++y) empty &= sigma.site_state(x, y) == SiteState::Empty;
        out.push_back(empty);
    }
    return out;
}

template <class S>
bool naive_G(const S& sigma, const Rect& r) {
    const auto ok = [](const std::vector<bool>& e) {
        for (std::size_t i = 1; i < e.size(); ++i)
            if (e[i] && e[i - 1]) return false;
        return true;
    };
    const Rect t(r.y_min(), r.y_max(), r.x_min(), r.x_max());
    struct Swapped {
        const S* s;
        SiteState site_state(std::int64_t x, std::int64_t y) const { return s->site_state(y, x); }
    } sw{&sigma};
    return ok(empty_columns(sigma, r)) && ok(empty_columns(sw, t));
}

template <class S>
bool naive_E(const S& sigma, std::int64_t A, std::int64_t B) {
    for (std::int64_t len = B - A - 10; len <= B - A; ++len)
        for (std::int64_t thick = 1; thick <= A; ++thick)
            for (std::int64_t x0 = -len + 1; x0 <= 0; ++x0)
                for (std::int64_t y0 = -thick + 1; y0 <= 0; ++y0) {
                    if (naive_G(sigma, Rect(x0, x0 + len - 1, y0, y0 + thick - 1))) return true;
                    if (naive_G(sigma, Rect(y0, y0 + thick - 1, x0, x0 + len - 1))) return true;
                }
    return false;
}

Trajectory synthetic(std::initializer_list<Dims> dims) {
    Trajectory t;
    for (const auto& d : dims) t.rects.emplace_back(0, d.a - 1, 0, d.b - 1);
    t.stop = StopReason::ThresholdReached;
    return t;
}

}  // namespace

TEST_CASE("advance examples") {
    PlacedSites none(SiteState::Active);
    CHECK(advance(none, Variant::standard(), Rect::origin()) == Rect::origin());

    PlacedSites two(SiteState::Active);
    two.occupy(2, 0).occupy(0, 2);
    CHECK(advance(two, Variant::standard(), Rect::origin()) == Rect(0, 2, 0, 2));

    PlacedSites diag(SiteState::Active);
    diag.occupy(1, 1);
    CHECK(advance(diag, Variant::modified(), Rect::origin()) == Rect(0, 1, 0, 1));
    CHECK(advance(diag, Variant::frobose(), Rect::origin()) == Rect::origin());
}

TEST_CASE("run examples") {
    const auto dead = run(Field(1, 0.5, SiteState::Empty), Variant::standard(), 10, 100);
    CHECK(dead.rects.empty());
    CHECK(dead.stop == StopReason::Fixated);

    const auto lone = run(PlacedSites(SiteState::Active), Variant::standard(), 10, 100);
    REQUIRE(lone.rects.size() == 1);
    CHECK(lone.rects[0] == Rect::origin());
    CHECK(lone.stop == StopReason::Fixated);

    const Field field(7, 0.3);
    const auto traj = run(field, Variant::standard(), 128, 1'000'000);
    CHECK(trajectory_is_consistent(traj));
    for (std::size_t i = 0; i < traj.rects.size(); ++i) {
        CHECK(check_G(field, traj.rects[i], Variant::standard()));
        if (i) CHECK(traj.rects[i].contains(traj.rects[i - 1]));
    }

    const auto full = run(Field(1, 1.0), Variant::frobose(), 10, 100);
    CHECK(full.stop == StopReason::ThresholdReached);
    CHECK(full.final_rect().semiperimeter() >= 10);

    const auto capped = run(Field(1, 1.0), Variant::standard(), 1000, 2);
    CHECK(capped.stop == StopReason::StepCap);

    CHECK_THROWS_AS(run(field, Variant::standard(), 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(run(field, Variant::standard(), 10, 0), std::invalid_argument);
}

TEST_CASE("check_G examples") {
    const PlacedSites blank(SiteState::Active);
    CHECK(check_G(blank, Rect::point(5, 5), Variant::standard()));
    CHECK_FALSE(check_G(blank, Rect(3, 4, 3, 4), Variant::standard()));
    PlacedSites pattern;
    pattern.occupy(3, 0);
    CHECK_FALSE(check_G(pattern, Rect(1, 3, 0, 0), Variant::standard()));
    pattern.occupy(2, 0);
    CHECK(check_G(pattern, Rect(1, 3, 0, 0), Variant::standard()));
    CHECK_FALSE(check_G(pattern, Rect(1, 3, 0, 0), Variant::modified()));
}

TEST_CASE("check_D examples") {
    const Rect inner(0, 2, 0, 2);
    const Field full(1, 1.0);
    CHECK(check_D(full, inner, inner, Variant::standard()));

    const Restricted<Field> right_empty(full, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}});
    const Rect outer(0, 3, 0, 2);
    CHECK(check_D(right_empty, inner, outer, Variant::standard()));
    CHECK_FALSE(check_D(right_empty, inner, outer, Variant::modified()));
    CHECK_FALSE(check_D(right_empty, inner, Rect(0, 4, 0, 2), Variant::standard()));
}

TEST_CASE("grows_to") {
    const Rect inner(0, 2, 0, 2), outer(-1, 4, 0, 3);
    CHECK(grows_to(Field(1, 1.0), Variant::frobose(), inner, outer));
    CHECK_FALSE(grows_to(Field(1, 0.0), Variant::frobose(), inner, outer));
    CHECK(grows_to(Field(1, 0.0), Variant::standard(), inner, inner));
    // One occupied site per new column and row, each adjacent to the growing rectangle.
    PlacedSites sigma;
    sigma.occupy(3, 1).occupy(1, 3);
    CHECK(grows_to(sigma, Variant::frobose(), inner, Rect(0, 3, 0, 3)));
    CHECK_FALSE(grows_to(sigma, Variant::frobose(), inner, Rect(0, 4, 0, 3)));
    CHECK_THROWS(grows_to(sigma, Variant::frobose(), outer, inner));
}

TEST_CASE("check_E examples and brute force agreement") {
    const double p = 0.05;
    CHECK(check_E(Field(1, 1.0), p));
    CHECK_FALSE(check_E(Field(1, 0.0), p));
    const ScaleConstants k = scale_constants(p);
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const Field f(seed, p);
        CHECK(check_E(f, p) == naive_E(f, k.A, k.B));
    }
    // A dense field makes E likely; compare there as well.
    for (std::uint64_t seed : {11ull, 21ull}) {
        const Field f(seed, 0.6);
        CHECK(check_E(f, p) == naive_E(f, k.A, k.B));
    }
    CHECK_THROWS_AS(check_E(Field(1, 0.5), 0.3), std::domain_error);
}

TEST_CASE("good sequences") {
    CHECK(extract_good_sequence(synthetic({{1, 1}, {2, 2}}), 1.0 / 16).status == ExtractionStatus::Escaped);

    const double q = 1.0 / 16;
    const std::int64_t A = scale_A(q), B = scale_B(q);
    CHECK(A == 4);
    CHECK(B == 44);
    Trajectory t;
    for (std::int64_t k = 4; k <= 30; ++k) t.rects.emplace_back(0, k - 1, 0, k - 1);
    t.stop = StopReason::ThresholdReached;
    const auto ex = extract_good_sequence(t, q);
    REQUIRE(ex.status == ExtractionStatus::Good);
    CHECK(ex.sequence.rects.size() >= 2);
    CHECK(is_good_sequence(ex.sequence.dims(), q, A, B));

    CHECK(is_good_sequence({{4, 4}, {5, 5}, {7, 7}, {9, 9}, {12, 12}, {15, 15}, {19, 19}, {24, 24}}, q, A, B));
    CHECK_FALSE(is_good_sequence({{4, 4}, {5, 5}, {7, 7}, {9, 9}, {12, 12}, {15, 15}, {19, 19}, {24, 24}, {30, 30}},
                                 q, A, B));  // second to last already outside
    CHECK_FALSE(is_good_sequence({{4, 4}, {10, 4}}, q, A, B));           // s_i >= a_i sqrt(q) + 4
    CHECK_THROWS(is_good_sequence({{4, 4}}, q, A, B));
}

TEST_CASE("pipeline self-consistency at p = 0.08") {
    const double p = 0.08, q = q_of(p);
    const ScaleConstants k = scale_constants(p);
    int good = 0, escaped = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const Field f(mix_seed(808, s), p);
        const auto traj = run(f, Variant::standard(), k.B, 1'000'000);
        const auto ex = extract_good_sequence(traj, q);
        if (ex.status == ExtractionStatus::Good) {
            ++good;
            REQUIRE(is_good_sequence(ex.sequence.dims(), q, k.A, k.B));
        } else if (ex.status == ExtractionStatus::Escaped && traj.stop == StopReason::ThresholdReached) {
            ++escaped;
            CHECK(check_E(f, p));
        }
    }
    CHECK(good + escaped > 0);
}

TEST_CASE("trajectory text round trip") {
    const auto traj = run(Field(42, 0.3), Variant::standard(), 64, 1000);
    std::stringstream ss;
    write_trajectory(ss, traj);
    const auto back = read_trajectory(ss);
    CHECK(back.rects == traj.rects);
    CHECK(back.stop == traj.stop);
    CHECK(parse_stop_reason("threshold_reached") == StopReason::ThresholdReached);
    std::stringstream bad("0 0 0 0\n");
    CHECK_THROWS(read_trajectory(bad));
}
