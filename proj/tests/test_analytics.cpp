#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "lbp/analytics.hpp"

using namespace lbp;

namespace {
const double kPi2 = std::numbers::pi * std::numbers::pi;
}

TEST_CASE("beta") {
    CHECK(beta(0.0) == 0.0);
    CHECK(beta(1.0) == 1.0);
    CHECK(beta(0.5) == doctest::Approx(0.809016994374947424).epsilon(1e-15));
    CHECK_THROWS_AS(beta(1.5), std::domain_error);
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double u = i / 1000.0, b = beta(u);
        CHECK(b >= u);
        CHECK(b > prev);
        prev = b;
    }
}

TEST_CASE("rate functions") {
    CHECK(rate_f(std::log(2.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(rate_g(std::log(2.0)) == doctest::Approx(0.211935355500341862).epsilon(1e-13));
    for (double z : {0.1, 1.0, 3.0}) CHECK(rate_g(z) < rate_f(z));
    CHECK(rate_function(1.0, Variant::standard()) == rate_g(1.0));
    CHECK(rate_function(1.0, Variant::frobose()) == rate_f(1.0));

    // Positive, decreasing, convex on a geometric grid.
    for (auto h : {rate_g, rate_f}) {
        std::vector<double> z, v;
        for (double x = 1e-6; x <= 40.0; x *= 1.1) {
            z.push_back(x);
            v.push_back(h(x));
        }
        for (std::size_t i = 0; i < z.size(); ++i) {
            CHECK(v[i] > 0.0);
            if (i) CHECK(v[i] < v[i - 1]);
            if (i && i + 1 < z.size()) {
                const double left = (v[i] - v[i - 1]) / (z[i] - z[i - 1]);
                const double right = (v[i + 1] - v[i]) / (z[i + 1] - z[i]);
                CHECK(right >= left * (1 + 1e-9) - 1e-300);
            }
            CHECK(rate_f(z[i]) >= rate_g(z[i]));
        }
    }
    for (double eps : {1e-4, 1e-6}) CHECK(std::abs(rate_g(eps) / (0.5 * std::log(1.0 / eps)) - 1.0) < 0.05);
}

TEST_CASE("lambda integrals") {
    const auto s = lambda_integral(Variant::standard());
    CHECK(std::abs(s.value - kPi2 / 18) < 1e-8);
    CHECK(s.error_bound < 1e-8);
    const auto m = lambda_integral(Variant::modified());
    CHECK(std::abs(m.value - kPi2 / 6) < 1e-8);
    CHECK(lambda_integral(Variant::frobose()).value == m.value);
    CHECK_THROWS(lambda_integral(Variant::standard(), 1e-13));

    // Tails against the asymptotic half exp(-2K).
    CHECK(rate_integral(Variant::standard(), 5, 40).value == doctest::Approx(2.25992719562e-5).epsilon(1e-9));
    CHECK(rate_integral(Variant::standard(), 10, 40).value == doctest::Approx(1.03054562180e-9).epsilon(1e-9));
    CHECK(0.5 * std::exp(-80.0) < 1e-30);
}

TEST_CASE("no double gap recursion") {
    for (double u : {0.0, 0.3, 1.0}) {
        CHECK(no_double_gap_exact(0, u, GapMode::DoubleGap) == 1.0);
        CHECK(no_double_gap_exact(1, u, GapMode::DoubleGap) == 1.0);
        CHECK(no_double_gap_exact(2, u, GapMode::DoubleGap) == doctest::Approx(1 - u * u));
    }
    CHECK(no_double_gap_exact(3, 0.5, GapMode::DoubleGap) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(no_double_gap_exact(4, 0.2, GapMode::SingleGap) == doctest::Approx(std::pow(0.8, 4)));

    // Against brute force over all gap patterns.
    for (int n = 0; n <= 12; ++n)
        for (double u : {0.1, 0.45, 0.9}) {
            double total = 0.0;
            for (int mask = 0; mask < (1 << n); ++mask) {
                if (mask & (mask >> 1)) continue;
                const int k = __builtin_popcount(static_cast<unsigned>(mask));
                total += std::pow(u, k) * std::pow(1 - u, n - k);
            }
            CHECK(no_double_gap_exact(n, u, GapMode::DoubleGap) == doctest::Approx(total).epsilon(1e-12));
        }
    CHECK(std::isfinite(log_no_double_gap_exact(1'000'000, 0.9, GapMode::DoubleGap)));
    for (double u : {0.1, 0.3, 0.5, 0.8})
        CHECK(std::abs(std::pow(no_double_gap_exact(1000, u, GapMode::DoubleGap), 1e-3) - beta(1 - u)) < 1e-3);
}

TEST_CASE("double gap and border bounds") {
    const double q = q_of(0.1);
    CHECK(double_gap_bound(1, 7, q, Variant::standard()) == 1.0);
    CHECK(double_gap_bound(10, 10, q, Variant::standard()) == doctest::Approx(0.398634997037658739).epsilon(1e-12));
    for (double p : {0.02, 0.05, 0.1, 0.2, 0.3})
        for (const auto v : Variant::all())
            for (int a = 1; a <= 50; ++a)
                for (int b = 1; b <= 50; ++b) {
                    const double qq = q_of(p);
                    const double exact = log_no_double_gap_exact(a, std::exp(-b * qq), gap_mode(v));
                    const double bound = log_double_gap_bound(a, b, qq, v);
                    REQUIRE(exact <= bound + 1e-12 * std::max(1.0, std::abs(bound)));
                }

    const double zero = border_bound(5, 7, 0, 0, q, Variant::standard());
    CHECK(zero == doctest::Approx(std::exp(2 * (rate_g(7 * q) + rate_g(5 * q)))));
    CHECK(zero >= 1.0);
    CHECK(border_bound(20, 20, 3, 0, q, Variant::standard()) == doctest::Approx(1.01351755266245808).epsilon(1e-12));
    // No s*t term for Froböse; the modified bound has one.
    const double b11 = log_border_bound(6, 6, 1, 1, q, Variant::frobose());
    const double b10 = log_border_bound(6, 6, 1, 0, q, Variant::frobose());
    const double b01 = log_border_bound(6, 6, 0, 1, q, Variant::frobose());
    const double b00 = log_border_bound(6, 6, 0, 0, q, Variant::frobose());
    CHECK(b11 - b10 - b01 + b00 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(log_border_bound(6, 6, 1, 1, q, Variant::modified()) - log_border_bound(6, 6, 1, 0, q, Variant::modified()) -
              log_border_bound(6, 6, 0, 1, q, Variant::modified()) + log_border_bound(6, 6, 0, 0, q, Variant::modified()) >
          0.0);
}

TEST_CASE("path weight") {
    const double lo = 0.3, hi = 2.0;
    CHECK(path_weight(MonotonePath({{lo, lo}}), Variant::standard()) == 0.0);
    const double diag = 2 * rate_integral(Variant::standard(), lo, hi).value;
    CHECK(path_weight(MonotonePath({{lo, lo}, {hi, hi}}), Variant::standard()) == doctest::Approx(diag).epsilon(1e-10));
    CHECK_THROWS(MonotonePath({{1.0, 1.0}, {0.5, 2.0}}));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<MonotonePath::Point> pts{{lo, lo}};
        double x = lo, y = lo;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 18; ++i) {
            if (u(rng) < 0.5) x = std::min(hi, x + u(rng) * 0.3); else y = std::min(hi, y + u(rng) * 0.3);
            pts.emplace_back(x, y);
        }
        pts.emplace_back(hi, hi);
        CHECK(path_weight(MonotonePath(pts), Variant::standard()) >= diag - 1e-9);
    }
}

TEST_CASE("envelope") {
    for (const auto v : Variant::all()) {
        const auto e = envelope(0.2, 0.0, 0.0, v);
        CHECK(e.lower == doctest::Approx(std::exp(-2 * v.lambda() / 0.2)));
        CHECK(e.upper == e.lower);
        const auto f = envelope(0.2, 1.0, 2.0, v);
        CHECK(f.lower <= f.upper);
    }
    const auto e = envelope(0.1, 1.0, 1.0, Variant::standard());
    CHECK(e.lower == doctest::Approx(4.08119941640492758e-4).epsilon(1e-12));
    CHECK(e.upper == doctest::Approx(1.00809631929976e12).epsilon(1e-10));
}

TEST_CASE("scale constants") {
    const auto k = scale_constants(0.1);
    CHECK(k.q == doctest::Approx(0.105360515657826301).epsilon(1e-15));
    CHECK(k.A == 4);
    CHECK(k.B == 21);
    CHECK_FALSE(k.in_regime);
    CHECK_FALSE(k.warning.empty());
    CHECK(scale_constants(0.05).in_regime);
    CHECK(q_of(1e-8) / 1e-8 == doctest::Approx(1.0).epsilon(1e-7));
    for (double p = 0.001; p < 0.5; p *= 1.3) CHECK(scale_A(q_of(p)) * std::sqrt(q_of(p)) >= 1.0);
    CHECK_THROWS(scale_constants(0.0));
    CHECK_THROWS(scale_constants(1.0));
}

TEST_CASE("adaptive quadrature") {
    const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.error_bound < 1e-12);
}
