#include <algorithm>
#include <cmath>
#include <random>

#include "capstone/potential.hpp"
#include "doctest.h"

using namespace capstone;
using namespace capstone::potential;
using geometry::CompactSet;

namespace {

std::vector<Complex> roots_of_unity(int n) {
    std::vector<Complex> z;
    for (int i = 0; i < n; ++i) z.push_back(std::polar(1.0, 2 * kPi * i / n));
    return z;
}

DiscreteMeasure uniform(std::vector<Complex> z) {
    std::vector<double> w(z.size(), 1.0 / static_cast<double>(z.size()));
    return DiscreteMeasure::from_weights(std::move(z), std::move(w));
}

}  // namespace

TEST_CASE("log_energy of the fourth roots of unity") {
    const auto z = roots_of_unity(4);
    // brute-force pair product
    double prod = 1.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) prod *= std::abs(z[i] - z[j]);
    CHECK(prod == doctest::Approx(16.0));
    const double expected = 2.0 * std::log(prod) / 16.0;
    CHECK(log_energy(uniform(z)) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(log_energy(uniform(z)) == doctest::Approx(std::log(4.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("log_energy trivial cases and coincident points") {
    CHECK(log_energy(uniform({0, 1})) == doctest::Approx(0.0));
    CHECK(log_energy(DiscreteMeasure::from_weights({0, 5}, {1.0, 0.0})) == 0.0);
    CHECK_THROWS_AS(log_energy(uniform({0, 0})), InvalidInput);
    CHECK_THROWS_AS(DiscreteMeasure::from_weights({0, 1}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(DiscreteMeasure::from_weights({0, 1}, {1.5, -0.5}), InvalidInput);
}

TEST_CASE("potential_eval: mean value property on the circle") {
    const auto m = uniform(roots_of_unity(256));
    CHECK(potential_eval(m, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-3));
    CHECK(std::abs(potential_eval(m, 0.0)) < 1e-3);
    CHECK(potential_eval(uniform({0}), std::exp(1.0)) == doctest::Approx(1.0));
    CHECK(potential_eval(uniform({0}), 0.0) == -INFINITY);
}

TEST_CASE("equilibrium measure of the disc is uniform on the circle") {
    const auto m = equilibrium_measure(CompactSet::disc(0, 1), 256, 1e-8, 1);
    REQUIRE(m.size() == 256);
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(std::abs(m.support[i]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m.weights[i] * 256.0 - 1.0) < 0.02);
    }
}

TEST_CASE("equilibrium measure of a segment follows the arcsine law") {
    const auto m = equilibrium_measure(CompactSet::segment(-1, 1), 256, 1e-8, 1);
    constexpr int bins = 10;
    std::vector<double> got(bins, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const int b = std::min(bins - 1, static_cast<int>((m.support[i].real() + 1.0) / 2.0 * bins));
        got[b] += m.weights[i];
    }
    auto cdf = [](double x) { return 0.5 + std::asin(x) / kPi; };
    for (int b = 0; b < bins; ++b) {
        const double lo = -1.0 + 2.0 * b / bins;
        const double expected = cdf(lo + 2.0 / bins) - cdf(lo);
        CHECK(std::abs(got[b] / expected - 1.0) < 0.05);
    }
}

TEST_CASE("polar input has no equilibrium measure") {
    CHECK_THROWS_AS(equilibrium_measure(CompactSet::point_set({0}), 1, 1e-8, 0), InvalidInput);
    CHECK(capacity(CompactSet::point_set({0}), 16, 1e-8, 0) == 0.0);
}

TEST_CASE("capacity oracles") {
    CHECK(capacity(CompactSet::disc(0, 1), 256, 1e-8, 1) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(capacity(CompactSet::segment(-1, 1), 256, 1e-8, 1) == doctest::Approx(0.5).epsilon(0.05));
    // Gamma(1/4)^2 / (4 pi^{3/2}) for the unit square
    const double square = std::pow(std::tgamma(0.25), 2) / (4.0 * std::pow(kPi, 1.5));
    CHECK(capacity(CompactSet::polygon({0, 1, {1, 1}, {0, 1}}), 256, 1e-8, 1) ==
          doctest::Approx(square).epsilon(0.02));
}

TEST_CASE("capacity scales with the set") {
    for (double alpha : {2.0, 0.5}) {
        const double d = capacity(CompactSet::disc(0, alpha), 256, 1e-8, 3);
        const double s = capacity(CompactSet::segment(-alpha, alpha), 256, 1e-8, 3);
        CHECK(d == doctest::Approx(alpha * capacity(CompactSet::disc(0, 1), 256, 1e-8, 3)).epsilon(0.02));
        CHECK(s == doctest::Approx(alpha * capacity(CompactSet::segment(-1, 1), 256, 1e-8, 3)).epsilon(0.02));
    }
}

TEST_CASE("Frostman flatness on disc and segment") {
    for (const auto& set : {CompactSet::disc(0, 1), CompactSet::segment(-1, 1)}) {
        const double tol = 1e-8;
        const auto sol = solve_equilibrium(set, 256, tol, 1);
        const auto [lo, hi] = std::minmax_element(sol.support_potential.begin(), sol.support_potential.end());
        CHECK(*hi - *lo <= 5 * tol);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double reach = 0.25 * geometry::diameter(set);
        for (int i = 0; i < 100; ++i) {
            Complex z;
            do {
                z = std::polar(1.0 + 4.0 * u(rng), 2 * kPi * u(rng));
            } while (geometry::distance(set, z) < reach);
            CHECK(potential_eval(sol.measure, z) >= sol.energy - 5 * tol);
        }
    }
}

TEST_CASE("Fekete diameter: closed form on the disc, monotone, n = 2 is the diameter") {
    double prev = INFINITY;
    for (int n : {4, 8, 16}) {
        const double d = fekete_diameter(CompactSet::disc(0, 1), n, 1);
        CHECK(d == doctest::Approx(std::pow(n, 1.0 / (n - 1))).epsilon(0.01));
        CHECK(d <= prev * (1 + 1e-9));
        prev = d;
    }
    const auto tri = CompactSet::polygon({0, 3, {0, 1}});
    CHECK(fekete_diameter(tri, 2, 0) == doctest::Approx(geometry::diameter(tri)));
    CHECK(fekete_diameter(CompactSet::segment(-1, 1), 2, 0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(fekete_diameter(tri, 1, 0), InvalidInput);
}

TEST_CASE("capacity and transfinite diameter agree at n = 128" * doctest::timeout(300)) {
    for (const auto& set : {CompactSet::disc(0, 1), CompactSet::segment(-1, 1)}) {
        const double cap = capacity(set, 256, 1e-8, 1);
        const double d = fekete_diameter(set, 128, 1);
        CHECK(d >= cap * (1 - 1e-3));
        CHECK(std::abs(cap - d) / cap <= 0.05);
    }
}

TEST_CASE("polarity classification") {
    const auto five = CompactSet::point_set({0, 1, 2, {0, 1}, {3, 3}});
    CHECK(classify_polarity(five).classification == PolarityVerdict::Classification::polar);
    const auto disc = classify_polarity(CompactSet::disc(0, 1));
    CHECK(disc.classification == PolarityVerdict::Classification::nonpolar);
    CHECK(disc.capacity_estimate == doctest::Approx(1.0).epsilon(0.02));
    CHECK(disc.sequence.size() == 3);
    const auto tiny = classify_polarity(CompactSet::segment(0, 1e-9), 1e-6);
    CHECK(tiny.classification != PolarityVerdict::Classification::nonpolar);
    CHECK(tiny.capacity_estimate == doctest::Approx(2.5e-10).epsilon(0.05));
    CHECK(tiny.capacity_estimate < tiny.threshold);
}
