#include <cmath>
#include <random>

#include "capstone/bergman_p1.hpp"
#include "doctest.h"

using namespace capstone;
using namespace capstone::bergman_p1;
using geometry::CompactSet;

namespace {

double minus_log_phi(int k, Complex z) { return -std::log(phi_k({k}, z)); }

// Five-point Laplacian, Richardson-extrapolated from steps h and h/2.
double richardson_laplacian(int k, Complex z, double h) {
    auto five = [&](double s) {
        const double c = minus_log_phi(k, z);
        return (minus_log_phi(k, z + s) + minus_log_phi(k, z - s) + minus_log_phi(k, z + Complex(0, s)) +
                minus_log_phi(k, z - Complex(0, s)) - 4 * c) /
               (s * s);
    };
    return (4 * five(h / 2) - five(h)) / 3;
}

ScalarField area_field() {
    ScalarField f;
    f.evaluation = [](Complex z) { return std::norm(z); };
    f.label = "|z|^2";
    return f;
}

}  // namespace

TEST_CASE("phi_k and its log-Laplacian") {
    CHECK(phi_k({-2}, Complex(3, -7)) == 1.0);
    CHECK(phi_k({0}, 0) == 1.0);
    CHECK(phi_k({1}, 1) == doctest::Approx(0.125));
    CHECK(laplacian_log_weight({-2}, Complex(0.4, 2)) == 0.0);
    CHECK(laplacian_log_weight({0}, 0) == doctest::Approx(8.0));
    CHECK(laplacian_log_weight({0}, 1) == doctest::Approx(2.0));
    CHECK(richardson_laplacian(0, 1, 1e-2) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("log-Laplacian matches a finite-difference oracle at random points") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k : {-1, 0, 2, 5}) {
        for (int i = 0; i < 100; ++i) {
            Complex z;
            do z = {u(rng), u(rng)};
            while (std::abs(z) > 10.0);
            const double exact = laplacian_log_weight({k}, z);
            const double fd = richardson_laplacian(k, z, 1e-2 * std::max(1.0, std::abs(z)));
            CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
        }
    }
}

TEST_CASE("global section dimensions") {
    CHECK(dim_global_sections(3) == 4);
    CHECK(dim_global_sections(-1) == 0);
    CHECK(dim_global_sections(0) == 1);
    CHECK(dim_global_sections(-9) == 0);
}

TEST_CASE("Riesz mass of the weight fields") {
    for (int k = -2; k <= 3; ++k) {
        const auto m = riesz_mass(log_weight_field(k));
        CHECK_FALSE(m.infinite);
        if (k == -2) {
            CHECK(std::abs(m.value) < 1e-3);
        } else {
            CHECK(m.value == doctest::Approx(4 * kPi * (k + 2)).epsilon(0.01));
        }
        CHECK(bly_dimension(m) == Dimension::finite(dim_global_sections(k)));
    }
    CHECK(riesz_mass(area_field()).infinite);
    CHECK(bly_dimension(riesz_mass(area_field())).infinite);
}

TEST_CASE("superharmonic input is reported") {
    std::string what;
    try {
        riesz_mass(log_weight_field(-3));
    } catch (const InvalidInput& e) {
        what = e.what();
    }
    CHECK(what.find("not subharmonic") != std::string::npos);
}

TEST_CASE("strict floor") {
    CHECK(strict_floor(0.0) == 0);
    CHECK(strict_floor(2.0) == 1);
    CHECK(strict_floor(2.5) == 2);
    CHECK(strict_floor(1e-9) == 0);
    CHECK_THROWS_AS(strict_floor(-1.0), InvalidInput);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 2000; ++i) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (i % 7 == 0) a = std::floor(a) + 1.0;  // integers
        if (a <= 0.0) continue;
        CHECK(static_cast<double>(strict_floor(a)) < a);
        CHECK(strict_floor(a) + 1 >= a);
        if (a <= b) CHECK(strict_floor(a) <= strict_floor(b));
    }
}

TEST_CASE("BLY dimension") {
    CHECK(bly_dimension(8 * kPi) == Dimension::finite(1));
    CHECK(bly_dimension(0.0) == Dimension::finite(0));
    CHECK(bly_dimension(10.0) == Dimension::finite(0));
    CHECK(bly_dimension(0.0, true) == Dimension::infinity());
    CHECK_THROWS_AS(bly_dimension(-1.0), InvalidInput);
}

TEST_CASE("dimension reports") {
    const auto seg = dimension_report(-5, CompactSet::segment(-1, 1));
    REQUIRE(seg.dimension);
    CHECK(seg.dimension->infinite);

    const auto three = dimension_report(2, CompactSet::point_set({0, 1, Complex(0, 1)}));
    REQUIRE(three.dimension);
    CHECK(*three.dimension == Dimension::finite(3));

    const auto one = dimension_report(-7, CompactSet::point_set({0}));
    REQUIRE(one.dimension);
    CHECK(*one.dimension == Dimension::finite(0));

    const std::vector<Complex> pts = {0, 1, Complex(0, 2), Complex(-3, 1), Complex(2, 2)};
    for (int k : {-3, 0, 4}) {
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto r = dimension_report(k, CompactSet::point_set({pts.begin(), pts.begin() + n}));
            REQUIRE(r.dimension);
            CHECK(*r.dimension == Dimension::finite(dim_global_sections(k)));
        }
    }

    const auto via_psi = dimension_report(1, CompactSet::point_set({0, 1}), log_weight_field(1));
    REQUIRE(via_psi.dimension);
    CHECK(*via_psi.dimension == Dimension::finite(2));
}

TEST_CASE("witness field on the unit disc" * doctest::timeout(120)) {
    const auto w = witness_psi_star(CompactSet::disc(0, 1), 0.01, 256, 1);
    CHECK(w.field.bounded);
    CHECK(w.R_outer > 2 * w.R);

    // beyond the bump the field is e^{-ln|z|}
    const Complex far = 1.1 * w.R_outer * Complex(0.6, 0.8);
    CHECK(w.field(far) == doctest::Approx(1.0 / std::abs(far)).epsilon(0.02));

    CHECK(excluded_probe(w, w.R, 2 * w.R));
    CHECK(excluded_probe(w, w.R, Complex(0, 2 * w.R)));
    CHECK_FALSE(excluded_probe(w, w.R, 3 * w.R));

    const auto rep = verify_witness_bounds(w, w.R, 10000, 5);
    CHECK(rep.tau2 > 0);
    CHECK(rep.tau3 > 0);
    CHECK(rep.certified());
    CHECK(rep.max_value <= rep.bound);

    // Laplacian of e^{-p} outside the disc is e^{-p} |grad p|^2 = |z|^{-3}
    for (double r : {3.0, 10.0, 50.0}) {
        if (r < w.R_outer) continue;
        CHECK(w.exact_laplacian(r) == doctest::Approx(std::pow(r, -3)).epsilon(0.02));
    }
}

TEST_CASE("witness without the bump is not strictly subharmonic inside") {
    const auto w = witness_psi_star(CompactSet::disc(0, 1), 0.0, 256, 1);
    const auto rep = verify_witness_bounds(w, w.R, 2000, 5);
    CHECK_FALSE(rep.tau3_certified);
    CHECK_FALSE(rep.certified());
}

TEST_CASE("witness input checks") {
    CHECK_THROWS_AS(witness_psi_star(CompactSet::point_set({0, 1}), 0.01, 64, 1), InvalidInput);
    std::string what;
    try {
        witness_psi_star(CompactSet::disc(0, 1), 0.1, 256, 1);
    } catch (const InvalidInput& e) {
        what = e.what();
    }
    CHECK(what.find("eps too large") != std::string::npos);
}
