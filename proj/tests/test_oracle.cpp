#include <doctest.h>

#include <cmath>

#include "lbp/oracle.hpp"
#include "lbp/rectangle_process.hpp"

using namespace lbp;

TEST_CASE("growth oracle on a two-site window") {
    const std::vector<Site> window{{1, 0}, {2, 0}};
    const Rect target(0, 2, 0, 0);
    const auto s = exact_growth_probability(window, Variant::standard(), target);
    CHECK(s.coefficients == std::vector<std::uint64_t>{0, 1, 1});
    for (double p : {0.1, 0.5, 0.9}) CHECK(s.evaluate(p) == doctest::Approx(p));
    const auto f = exact_growth_probability(window, Variant::frobose(), target);
    CHECK(f.coefficients == std::vector<std::uint64_t>{0, 0, 1});
    CHECK(f.evaluate(0.3) == doctest::Approx(0.09));
    CHECK(exact_growth_probability(window, Variant::modified(), target).evaluate(0.3) == doctest::Approx(0.09));

    const auto trivial = exact_growth_probability({}, Variant::standard(), Rect::origin());
    CHECK(trivial.evaluate(0.4) == 1.0);
}

TEST_CASE("event oracle") {
    std::vector<Site> sites;
    for (int i = 0; i < 10; ++i) sites.push_back({i, 3});
    const auto always = exact_event_probability(sites, [](const AssignmentView&) { return true; });
    CHECK(always.evaluate(0.5) == 1.0);
    for (std::size_t k = 0; k <= 10; ++k) {
        std::uint64_t binom = 1;
        for (std::size_t j = 0; j < k; ++j) binom = binom * (10 - j) / (j + 1);
        CHECK(always.coefficients[k] == binom);
    }

    // G on a 2x2 rectangle: fails only when both columns (hence both rows) are empty.
    const std::vector<Site> square{{1, 1}, {2, 1}, {1, 2}, {2, 2}};
    const auto g = exact_event_probability(square, [](const AssignmentView& v) {
        PlacedSites sigma;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v.on(i)) sigma.occupy(v.site(i).x, v.site(i).y);
        return check_G(sigma, Rect(1, 2, 1, 2), Variant::standard());
    });
    const auto direct = exact_event_probability(square, [](const AssignmentView& v) { return v.mask() != 0; });
    CHECK(g.coefficients == direct.coefficients);
    CHECK(g.evaluate(0.5) == 0.9375);

    const auto span = exact_bp_spanning(2);
    for (double p : {0.2, 0.3, 0.5}) {
        const double expect = std::pow(p, 4) + 4 * std::pow(p, 3) * (1 - p) + 2 * p * p * (1 - p) * (1 - p);
        CHECK(span.evaluate(p) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(exact_bp_spanning(1).evaluate(0.37) == doctest::Approx(0.37));
}

TEST_CASE("oracle evaluations are monotone for monotone events") {
    const std::vector<Site> window{{1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}};
    const auto grow = exact_growth_probability(window, Variant::standard(), Rect(0, 2, 0, 2));
    const auto span = exact_bp_spanning(3);
    double prev_g = 0.0, prev_s = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double p = i / 10.0;
        CHECK(grow.evaluate(p) >= prev_g);
        CHECK(span.evaluate(p) >= prev_s);
        CHECK(grow.evaluate(p) <= 1.0);
        prev_g = grow.evaluate(p);
        prev_s = span.evaluate(p);
    }
}

TEST_CASE("oracle worker count does not change results") {
    const std::vector<Site> window{{1, 0}, {2, 0}, {0, 1}, {1, 1}, {-1, 0}, {0, -1}, {0, 2}, {-2, 0}, {1, -1}, {-1, 1}};
    const auto one = exact_growth_probability(window, Variant::modified(), Rect(-1, 1, -1, 1), 1);
    const auto four = exact_growth_probability(window, Variant::modified(), Rect(-1, 1, -1, 1), 4);
    CHECK(one.coefficients == four.coefficients);
    CHECK(engine_mismatches(window, Variant::standard(), 3) == 0);
}

TEST_CASE("oracle refuses large windows") {
    std::vector<Site> big;
    for (int i = 1; i <= 23; ++i) big.push_back({i, 0});
    CHECK_THROWS_AS(exact_growth_probability(big, Variant::standard(), Rect::origin()), ScaleRefused);
    CHECK_THROWS_AS(exact_bp_spanning(5), ScaleRefused);
    CHECK_THROWS_AS(exact_growth_probability({{0, 0}}, Variant::standard(), Rect::origin()), std::invalid_argument);
}
