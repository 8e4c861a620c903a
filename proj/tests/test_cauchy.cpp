#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "capstone/cauchy.hpp"
#include "doctest.h"

using namespace capstone;
using namespace capstone::cauchy;
using geometry::CompactSet;

namespace {

const SignedMeasure& disc_pair() {
    static const SignedMeasure mu =
        signed_equilibrium_difference(CompactSet::disc(-1, 0.5), CompactSet::disc(1, 0.5), 256, 1e-8, 1);
    return mu;
}

DiscreteMeasure uniform(std::vector<Complex> z) {
    std::vector<double> w(z.size(), 1.0 / static_cast<double>(z.size()));
    return DiscreteMeasure::from_weights(std::move(z), std::move(w));
}

// + on the fourth roots of unity, - on the same rotated by pi/4
SignedMeasure four_fold() {
    std::vector<Complex> a, b;
    for (int i = 0; i < 4; ++i) {
        a.push_back(std::polar(1.0, kPi * i / 2));
        b.push_back(std::polar(1.0, kPi * i / 2 + kPi / 4));
    }
    return {uniform(a), uniform(b)};
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("signed equilibrium difference") {
    const auto& mu = disc_pair();
    CHECK(mu.positive.mass == doctest::Approx(1.0));
    CHECK(mu.negative.mass == doctest::Approx(1.0));
    for (auto z : mu.positive.support) CHECK(std::abs(z + 1.0) == doctest::Approx(0.5));
    for (auto z : mu.negative.support) CHECK(std::abs(z - 1.0) == doctest::Approx(0.5));
    CHECK(std::abs(moments(mu, 1)[0]) < 1e-12);

    const auto d = CompactSet::disc(0, 1);
    CHECK(error_of([&] { signed_equilibrium_difference(d, d, 64, 1e-8, 0); }).find("supports overlap") !=
          std::string::npos);
    CHECK(error_of([&] { signed_equilibrium_difference(CompactSet::point_set({0}), d, 64, 1e-8, 0); })
              .find("polar component") != std::string::npos);
}

TEST_CASE("Cauchy transform far field") {
    const auto& mu = disc_pair();
    CHECK(cauchy_transform(mu, 100.0).real() == doctest::Approx(2e-4).epsilon(0.05));
    double prev = 0;
    for (double r : {1e2, 1e3, 1e4, 1e5}) {
        const double s = std::abs(r * r * cauchy_transform(mu, r));
        CHECK(s < 3.0);
        if (prev > 0) CHECK(s == doctest::Approx(prev).epsilon(0.05));
        prev = s;
    }
    const SignedMeasure zero{mu.positive, mu.positive};
    CHECK(std::abs(cauchy_transform(zero, Complex(3, 4))) < 1e-15);
    CHECK(laurent_tail(zero, 8).is_zero());
    CHECK_THROWS_AS(cauchy_transform(mu, mu.positive.support[3]), InvalidInput);
}

TEST_CASE("Laurent tail from moments") {
    const auto t = laurent_tail(disc_pair(), 8);
    CHECK(t.start_order == 2);
    CHECK(std::abs(t.coefficient(1)) == 0.0);
    CHECK(std::abs(t.coefficient(2) - 2.0) < 1e-6);

    const auto mu = four_fold();
    // brute-force moments
    for (int l = 0; l < 9; ++l) {
        Complex m = 0;
        for (auto z : mu.positive.support) m += std::pow(z, l) / 4.0;
        for (auto z : mu.negative.support) m -= std::pow(z, l) / 4.0;
        CHECK(std::abs(moments(mu, 9)[l] - m) < 1e-12);
    }
    const auto f = laurent_tail(mu, 10);
    CHECK(f.start_order == 5);
    CHECK(std::abs(f.coefficient(5) + 2.0) < 1e-12);
    CHECK(std::abs(f.coefficient(2)) == 0.0);
    CHECK(std::abs(f.coefficient(3)) == 0.0);
    CHECK_THROWS_AS(laurent_tail(mu, 1), InvalidInput);
}

TEST_CASE("contour coefficients agree with moment coefficients") {
    const auto& mu = disc_pair();
    const auto c = contour_coefficients([&](Complex z) { return cauchy_transform(mu, z); }, 50.0, 6, 256);
    const auto m = moments(mu, 6);
    double scale = 1.0;
    for (auto x : m) scale = std::max(scale, std::abs(x));
    for (int l = 1; l <= 6; ++l) CHECK(std::abs(c[l - 1] + m[l - 1]) <= 1e-8 * scale);
}

TEST_CASE("area Cauchy transform") {
    const auto d = CompactSet::disc(0, 1);
    CHECK(area_cauchy_transform(d, 2.0, 64).real() == doctest::Approx(-kPi / 2).epsilon(0.01));
    CHECK(area_cauchy_transform(d, 10.0, 64).real() == doctest::Approx(-kPi / 10).epsilon(0.01));
    for (double r : {1e2, 1e3, 1e4}) {
        const Complex z = std::polar(r, 0.7);
        CHECK(std::abs(z * area_cauchy_transform(d, z, 64)) == doctest::Approx(kPi).epsilon(0.01));
    }
    const auto sq = CompactSet::polygon({0, 2, {2, 2}, {0, 2}});
    CHECK(std::abs(1e4 * area_cauchy_transform(sq, 1e4, 64)) == doctest::Approx(4.0).epsilon(0.01));
    CHECK(error_of([&] { area_cauchy_transform(CompactSet::segment(0, 1), 3.0, 64); }).find("zero area") !=
          std::string::npos);
}

TEST_CASE("vanishing boost on the disc pair") {
    const auto& mu = disc_pair();
    const auto tail = laurent_tail(mu, 14);
    auto f = [&](Complex z) { return cauchy_transform(mu, z); };
    const std::vector<Complex> anchors = {3, Complex(0, 4), -5};
    const auto g = vanishing_boost(tail, f, anchors);
    CHECK(g.order() >= 3);
    REQUIRE(g.combiners.size() == 3);
    double norm = 0;
    for (auto b : g.combiners) norm += std::norm(b);
    CHECK(std::sqrt(norm) == doctest::Approx(1.0));
    for (auto a : g.residuals) CHECK(std::abs(a) <= 1e-10 * std::max(1.0, std::abs(tail.coefficient(2))));

    // independent check of the boosted tail by contour quadrature of g on |z| = 50
    const auto c = contour_coefficients(g.evaluator, 50.0, 4, 512);
    CHECK(std::abs(c[0]) < 1e-9);
    CHECK(std::abs(c[1]) < 1e-9);
    CHECK(std::abs(c[2] - g.tail.coefficient(3)) < 1e-6 * std::max(1.0, std::abs(c[2])));

    CHECK_THROWS_AS(vanishing_boost(tail, f, {3, 3, -5}), InvalidInput);
}

TEST_CASE("boost combiners solve the homogeneous system") {
    const std::vector<Complex> z = {2, Complex(0, 2), -2};
    const std::vector<Complex> fz = {0.3, Complex(0.1, -0.2), -0.25};
    const auto b = boost_combiners(2, fz, z);
    REQUIRE(b.size() == 3);
    for (int m = 1; m <= 2; ++m) {
        Complex a = 0;
        for (int l = 0; l < 3; ++l) a += b[l] * fz[l] * std::pow(z[l], m - 1);
        CHECK(std::abs(a) < 1e-12);
    }
}

TEST_CASE("Wiegerinck sequence") {
    const auto e1 = CompactSet::disc(-1, 0.5);
    const auto e2 = CompactSet::disc(1, 0.5);
    const auto one = wiegerinck_sequence(e1, e2, 1, -3, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].kind == BoostedFunction::Kind::cauchy);

    const auto seq = wiegerinck_sequence(e1, e2, 4, -3, 1);
    REQUIRE(seq.size() == 4);
    for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i].order() > seq[i - 1].order());
    for (const auto& g : seq) {
        REQUIRE(g.verdict);
        CHECK(g.verdict->finite() == (g.order() >= 3));
    }

    // boost soundness: direct evaluation against the stored tail on |z| = 1e3
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (const auto& g : seq) {
        for (int i = 0; i < 20; ++i) {
            const Complex z = std::polar(1e3, u(rng));
            const Complex direct = g(z);
            CHECK(std::abs(direct - evaluate_tail(g.tail, z)) <= 1e-6 * std::abs(direct));
        }
    }
}

TEST_CASE("rational seed falls back to area powers") {
    // +delta at -1, -delta at 1 gives f = 2 / (z^2 - 1)
    const SignedMeasure mu{uniform({-1}), uniform({1})};
    CHECK(std::abs(cauchy_transform(mu, 3.0) - 2.0 / 8.0) < 1e-15);
    const auto area = CompactSet::disc(0, 0.5);
    const auto seq = boost_sequence(cauchy_function(mu), &area, 3.0, 4, 0, 1);
    REQUIRE(seq.size() == 4);
    bool noted = false;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        CHECK(seq[i].order() > seq[i - 1].order());
        noted = noted || seq[i].note.find("f appears rational") != std::string::npos;
    }
    CHECK(noted);
    CHECK(seq.back().kind == BoostedFunction::Kind::area_power);
    CHECK_THROWS_AS(boost_sequence(cauchy_function(mu), nullptr, 3.0, 3, 0, 1), Error);
}

TEST_CASE("weighted tail norm") {
    LaurentTail t;
    t.start_order = 3;
    t.coefficients = {1.0};
    CHECK(weighted_tail_norm(t, -3, 2.0).finite());
    t.start_order = 2;
    const auto v = weighted_tail_norm(t, -4, 2.0);
    CHECK(v.divergent());
    CHECK(v.exponent >= -1.0);
    const auto z = weighted_tail_norm(LaurentTail{}, 0, 2.0);
    CHECK(z.finite());
    CHECK(z.value == 0.0);

    // closed form: 2 pi int_2^inf r^{-3} (1+r^2)^{-2} dr for start_order 2, k = 0
    t.start_order = 2;
    const auto w = weighted_tail_norm(t, 0, 2.0);
    const double F = 0.225 - std::log(1.25);  // int_2^inf r^-3 (1+r^2)^-2 dr
    CHECK(w.value == doctest::Approx(2 * kPi * F).epsilon(1e-8));
}
