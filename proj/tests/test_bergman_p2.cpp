#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "capstone/bergman_p2.hpp"
#include "doctest.h"

using namespace capstone;
using namespace capstone::bergman_p2;
using geometry::PlanePoint2;

namespace {

using boost::math::quadrature::gauss_kronrod;

double weight(double r, double s, int p, int q, int k) {
    return std::pow(r, 2 * p + 1) * std::pow(s, 2 * q + 1) * std::pow(1 + r * r + s * s, -(3 + k));
}

// (2 pi)^2 int_{r > sqrt 2} int_0^{r^-l} ... ds dr, adaptive Gauss-Kronrod
double x_oracle(int l, int p, int q, int k) {
    auto outer = [&](double r) {
        auto inner = [&](double s) { return weight(r, s, p, q, k); };
        return gauss_kronrod<double, 31>::integrate(inner, 0.0, std::pow(r, -l), 8, 1e-12);
    };
    const double v = gauss_kronrod<double, 31>::integrate(outer, std::sqrt(2.0),
                                                           std::numeric_limits<double>::infinity(), 12, 1e-11);
    return 4 * kPi * kPi * v;
}

// Same integral over the Z_m shadow in u = r + s, v = r - s (dr ds = du dv / 2):
// u^2 + v^2 > 4 and |v| < u^-m.
double z_oracle(int m, int p, int q, int k) {
    auto slice = [&](double u) {
        const double lo = std::sqrt(std::max(0.0, 4 - u * u));
        const double hi = std::min(std::pow(u, -m), u);
        if (hi <= lo) return 0.0;
        auto f = [&](double v) {
            const double r = (u + v) / 2, s = (u - v) / 2;
            return 0.5 * (weight(r, s, p, q, k) + weight(s, r, p, q, k));
        };
        return gauss_kronrod<double, 31>::integrate(f, lo, hi, 8, 1e-12);
    };
    // the slice opens where u^-m = sqrt(4 - u^2), just below 2
    double a = 1.0, b = 2.0;
    for (int i = 0; i < 80; ++i) {
        const double c = 0.5 * (a + b);
        (std::pow(c, -m) > std::sqrt(4 - c * c) ? b : a) = c;
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double v = gauss_kronrod<double, 31>::integrate(slice, b, 2.0, 8, 1e-12) +
                     gauss_kronrod<double, 31>::integrate(slice, 2.0, inf, 12, 1e-11);
    return 4 * kPi * kPi * v;
}

}  // namespace

TEST_CASE("region specs") {
    CHECK_THROWS_AS(RegionSpec::x(0), InvalidInput);
    CHECK_THROWS_AS(RegionSpec::z(1), InvalidInput);
    CHECK_THROWS_AS(RegionSpec::union_of({}), InvalidInput);
    CHECK(to_string(omega_k_spec(0)) == "B u X1 u Y u Z2");
    CHECK(to_string(omega_k_spec(-3)) == "B u X3 u Y u Z6");
    CHECK(to_string(omega_k_spec(-4)) == "B u X5 u Y u Z10");
}

TEST_CASE("region membership") {
    CHECK(region_contains(RegionSpec::b(), {1, 1}));
    CHECK(region_contains(RegionSpec::x(2), {2, 0.1}));
    CHECK_FALSE(region_contains(RegionSpec::x(2), {2, 0.3}));
    CHECK(region_contains(RegionSpec::z(2), {1, 1.05}));
    CHECK_FALSE(region_contains(RegionSpec::z(2), {1, 1.5}));
    CHECK(region_contains(RegionSpec::y(), {0.1, 3}));
    CHECK(region_contains(omega_k_spec(0), {0.1, 3}));
    CHECK_FALSE(region_contains(omega_k_spec(0), {3, 3.5}));
}

TEST_CASE("monomial predicates") {
    CHECK(monomial_predicate(RegionSpec::x(1), {3, 1}, 0));
    CHECK_FALSE(monomial_predicate(RegionSpec::y(), {0, 3}, 0));
    CHECK_FALSE(monomial_predicate(RegionSpec::z(2), {2, 1}, 0));
    CHECK(monomial_predicate(RegionSpec::z(2), {1, 1}, 0));
    CHECK(monomial_predicate(RegionSpec::b(), {40, 40}, -6));
}

TEST_CASE("predicates agree with the sign of the radial exponent") {
    for (int k = -6; k <= 3; ++k)
        for (int p = 0; p <= 8; ++p)
            for (int q = 0; q <= 8; ++q)
                for (const auto& r : {RegionSpec::x(1), RegionSpec::x(4), RegionSpec::y(), RegionSpec::z(2),
                                      RegionSpec::z(7)})
                    CHECK(monomial_predicate(r, {p, q}, k) == (radial_exponent(r, {p, q}, k) < -1));
}

TEST_CASE("predicate membership grows with the region parameter") {
    for (int k = -6; k <= 3; ++k)
        for (int p = 0; p <= 8; ++p)
            for (int q = 0; q <= 8; ++q) {
                for (int l = 1; l < 8; ++l)
                    if (monomial_predicate(RegionSpec::x(l), {p, q}, k))
                        CHECK(monomial_predicate(RegionSpec::x(l + 1), {p, q}, k));
                for (int m = 2; m < 12; ++m)
                    if (monomial_predicate(RegionSpec::z(m), {p, q}, k))
                        CHECK(monomial_predicate(RegionSpec::z(m + 1), {p, q}, k));
            }
}

TEST_CASE("norm estimates") {
    for (int k = -6; k <= 2; ++k)
        for (int p = 0; p <= 6; p += 3)
            for (int q = 0; q <= 6; q += 2) CHECK(monomial_norm_estimate(RegionSpec::b(), {p, q}, k).finite());

    const auto x = monomial_norm_estimate(RegionSpec::x(1), {3, 1}, 0);
    CHECK(x.finite());
    CHECK(x.exponent == doctest::Approx(-3.0).epsilon(0.05));
    CHECK(x.value == doctest::Approx(x_oracle(1, 3, 1, 0)).epsilon(1e-4));

    const auto z = monomial_norm_estimate(RegionSpec::z(2), {2, 1}, 0);
    CHECK(z.divergent());
    CHECK(std::abs(z.exponent - 0.0) <= 0.2);

    const auto zf = monomial_norm_estimate(RegionSpec::z(2), {1, 1}, 0);
    CHECK(zf.finite());
    CHECK(zf.value == doctest::Approx(z_oracle(2, 1, 1, 0)).epsilon(1e-3));

    const auto y = monomial_norm_estimate(RegionSpec::y(), {1, 2}, 0);
    CHECK(y.finite());
    CHECK(y.value == doctest::Approx(x_oracle(1, 2, 1, 0)).epsilon(1e-4));

    CHECK_THROWS_AS(monomial_norm_estimate(omega_k_spec(0), {0, 0}, 0), InvalidInput);
}

TEST_CASE("divergent verdicts carry the radial exponent") {
    for (int k : {-3, 0})
        for (int p = 0; p <= 6; ++p)
            for (int q = 0; p + q <= 6; ++q)
                for (const auto& r : {RegionSpec::x(1), RegionSpec::z(2)}) {
                    const auto v = monomial_norm_estimate(r, {p, q}, k);
                    if (v.divergent() && !v.near_critical)
                        CHECK(std::abs(v.exponent - radial_exponent(r, {p, q}, k)) <= 0.2);
                }
}

TEST_CASE("monomial bases of the domains") {
    using V = std::vector<MonomialIndex>;
    CHECK(omega_k_monomial_basis(0, default_p_max(0)) == V{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}});
    CHECK(omega_k_monomial_basis(-3, default_p_max(-3)) == V{{1, 0}});
    CHECK(omega_k_monomial_basis(-2, default_p_max(-2)) == V{{0, 0}});
    CHECK(omega_k_monomial_basis(-5, default_p_max(-5)) == V{{3, 0}});
    CHECK_THROWS_AS(omega_k_monomial_basis(3, 2), InvalidInput);

    for (int k = -2; k <= 3; ++k) {
        V expected;
        for (int p = 0; p <= k + 2; ++p)
            for (int q = 0; p + q <= k + 2; ++q) expected.push_back({p, q});
        CHECK(omega_k_monomial_basis(k, default_p_max(k)) == expected);
    }
}

TEST_CASE("basis does not depend on enumeration order") {
    std::mt19937_64 rng(2);
    for (int k = -6; k <= 3; ++k) {
        const auto omega = omega_k_spec(k);
        const int pm = default_p_max(k);
        std::vector<MonomialIndex> all;
        for (int p = 0; p <= pm; ++p)
            for (int q = 0; q <= pm; ++q) all.push_back({p, q});
        const auto ref = omega_k_monomial_basis(k, pm);
        for (int t = 0; t < 5; ++t) {
            std::shuffle(all.begin(), all.end(), rng);
            std::set<MonomialIndex> got;
            for (const auto& i : all)
                if (monomial_predicate(omega, i, k)) got.insert(i);
            CHECK(std::vector<MonomialIndex>(got.begin(), got.end()) == ref);
        }
    }
}

TEST_CASE("dimension counts") {
    CHECK(omega_k_dimension(1) == 10);
    CHECK(omega_k_dimension(-5) == 1);
    CHECK(omega_k_dimension(0) == 6);
    CHECK(dim_global_sections_p2(2) == 6);
    CHECK(dim_global_sections_p2(-1) == 0);
    CHECK(dim_global_sections_p2(0) == 1);
    for (int k = -6; k <= 3; ++k) {
        const long d = omega_k_dimension(k);
        CHECK(d == (k >= -2 ? (k + 3) * (k + 4) / 2 : 1));
        CHECK(dim_global_sections_p2(k) < d);
    }
}
