#include "capstone/bergman_p1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "capstone/parallel.hpp"

namespace capstone::bergman_p1 {

using geometry::CompactSet;

double phi_k(const WeightSpec& spec, Complex z) { return std::pow(1.0 + std::norm(z), -(spec.k + 2.0)); }

double laplacian_log_weight(const WeightSpec& spec, Complex z) {
    const double s = 1.0 + std::norm(z);
    return 4.0 * (spec.k + 2.0) / (s * s);
}

long dim_global_sections(int k) { return std::max(0L, static_cast<long>(k) + 1); }

bool ScalarField::in_domain(Complex z) const {
    for (const auto& c : excluded_points)
        if (std::abs(z - c) < exclusion_radius) return false;
    return true;
}

ScalarField log_weight_field(int k) {
    ScalarField f;
    f.evaluation = [k](Complex z) { return (k + 2.0) * std::log1p(std::norm(z)); };
    f.label = "-ln phi_" + std::to_string(k);
    return f;
}

double fd_laplacian(const ScalarField& f, Complex z, double h) {
    const Complex dx(h, 0.0);
    const Complex dy(0.0, h);
    const double edge = f(z + dx) + f(z - dx) + f(z + dy) + f(z - dy);
    const double corner = f(z + dx + dy) + f(z + dx - dy) + f(z - dx + dy) + f(z - dx - dy);
    return (4.0 * edge + corner - 20.0 * f(z)) / (6.0 * h * h);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct AnnulusResult {
    double mass = 0.0;
    double negative = 0.0;  // mass of cells whose Laplacian is negative beyond round-off
};

AnnulusResult integrate_annulus(const ScalarField& f, double r0, double r1, const RadialGrid& g, double h_floor) {
    AnnulusResult out;
    const double dr = (r1 - r0) / static_cast<double>(g.n_r);
    const double dt = 2.0 * kPi / static_cast<double>(g.n_theta);
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double r = r0 + dr * (static_cast<double>(i) + 0.5);
        const double h = std::max(g.step * r, h_floor);
        for (std::size_t j = 0; j < g.n_theta; ++j) {
            const Complex z = std::polar(r, dt * (static_cast<double>(j) + 0.5));
            const double lap = fd_laplacian(f, z, h);
            const double cell = lap * r * dr * dt;
            out.mass += cell;
            const double noise = 64.0 * kEps * std::abs(f(z)) / (h * h);
            if (lap < -noise) out.negative += -cell;
        }
    }
    return out;
}

}  // namespace

RieszMass riesz_mass(const ScalarField& field, const RadialGrid& grid) {
    if (grid.j_max < grid.j_min || grid.n_r == 0 || grid.n_theta == 0) throw InvalidInput("bad radial grid");
    const double r_inner = std::ldexp(1.0, grid.j_min);
    const std::size_t shells = static_cast<std::size_t>(grid.j_max - grid.j_min + 1);
    std::vector<AnnulusResult> parts(shells + 1);
    parallel_for(0, shells + 1, [&](std::size_t s) {
        if (s == 0) {
            parts[0] = integrate_annulus(field, 0.0, r_inner, grid, grid.step * r_inner);
        } else {
            const double r0 = std::ldexp(1.0, grid.j_min + static_cast<int>(s) - 1);
            parts[s] = integrate_annulus(field, r0, 2.0 * r0, grid, 0.0);
        }
    });
    RieszMass out;
    out.inner = parts[0].mass;
    double total = parts[0].mass;
    double negative = parts[0].negative;
    for (std::size_t s = 1; s <= shells; ++s) {
        out.shell_masses.push_back(parts[s].mass);
        total += parts[s].mass;
        negative += parts[s].negative;
    }
    if (negative > grid.negative_tol * std::max(1.0, std::abs(total)))
        throw InvalidInput("field is not subharmonic: negative Laplacian mass " + std::to_string(negative));
    out.value = total;
    const auto& m = out.shell_masses;
    if (m.size() >= 3) {
        const std::size_t n = m.size();
        const bool rising = m[n - 1] >= m[n - 2] && m[n - 2] >= m[n - 3];
        out.infinite = rising && m[n - 1] > grid.infinite_floor * std::abs(total);
    }
    if (out.infinite) out.value = std::numeric_limits<double>::infinity();
    return out;
}

long strict_floor(double x) {
    if (!std::isfinite(x)) throw InvalidInput("strict_floor needs a finite argument");
    if (x < 0.0) throw InvalidInput("negative mass");
    if (x == 0.0) return 0;
    return static_cast<long>(std::ceil(x)) - 1;
}

std::string to_string(const Dimension& d) { return d.infinite ? "infinite" : std::to_string(d.value); }

Dimension bly_dimension(double mass, bool infinite, double snap_tol) {
    if (infinite || std::isinf(mass)) return Dimension::infinity();
    if (mass < 0.0) throw InvalidInput("negative mass");
    double x = mass / (4.0 * kPi);
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= snap_tol * std::max(1.0, nearest)) x = nearest;
    return Dimension::finite(strict_floor(x));
}

Dimension bly_dimension(const RieszMass& mass, double snap_tol) {
    return bly_dimension(mass.value, mass.infinite, snap_tol);
}

DimensionReport dimension_report(int k, const CompactSet& complement_of, const std::optional<ScalarField>& psi,
                                 const potential::PolarityOptions& polarity, const RadialGrid& grid) {
    DimensionReport r;
    r.polarity = potential::classify_polarity(complement_of, polarity);
    auto polar_answer = [&](std::string& method) {
        if (psi) {
            method = "polar:bly-riesz-mass";
            return bly_dimension(riesz_mass(*psi, grid));
        }
        method = "polar:global-sections";
        return Dimension::finite(dim_global_sections(k));
    };
    using C = potential::PolarityVerdict::Classification;
    switch (r.polarity.classification) {
        case C::nonpolar:
            r.dimension = Dimension::infinity();
            r.method = "nonpolar:infinite";
            break;
        case C::polar:
            r.dimension = polar_answer(r.method);
            break;
        case C::inconclusive: {
            std::string ignored;
            r.if_polar = polar_answer(ignored);
            r.if_nonpolar = Dimension::infinity();
            r.method = "inconclusive";
            break;
        }
    }
    return r;
}

ChiProfile ChiProfile::make(double R) {
    if (!(R > 0.0)) throw InvalidInput("R must be positive");
    ChiProfile c;
    c.R = R;
    constexpr double c2 = -5973.0;
    constexpr double c3 = 4015.0;
    auto coeffs = [&](double c0, double c1) {
        return std::array<double, 6>{16.0, c0 - 16.0, c1 - c0, c2 - c1, c3 - c2, -c3};
    };
    // Slope and value must return to zero at t = 1; both conditions are affine in (c0, c1).
    auto residual = [&](double c0, double c1) {
        const auto a = coeffs(c0, c1);
        double s1 = 0.0;
        double s2 = 0.0;
        for (int j = 0; j < 6; ++j) {
            s1 += a[j] / (j + 1.0);
            s2 += a[j] / ((j + 1.0) * (j + 2.0));
        }
        return std::array<double, 2>{c.U * s1 + 8.0, 4.0 + 8.0 * c.U + c.U * c.U * s2};
    };
    const auto r0 = residual(0.0, 0.0);
    const auto rx = residual(1.0, 0.0);
    const auto ry = residual(0.0, 1.0);
    const double m00 = rx[0] - r0[0], m01 = ry[0] - r0[0];
    const double m10 = rx[1] - r0[1], m11 = ry[1] - r0[1];
    const double det = m00 * m11 - m01 * m10;
    const double c0 = (-r0[0] * m11 + r0[1] * m01) / det;
    const double c1 = (-r0[1] * m00 + r0[0] * m10) / det;
    c.a = coeffs(c0, c1);
    return c;
}

double ChiProfile::outer_radius() const { return 2.0 * R * std::exp(U); }

double ChiProfile::value(double r) const {
    if (r <= 2.0 * R) return r * r;
    if (r >= outer_radius()) return 0.0;
    const double t = std::log(r / (2.0 * R)) / U;
    double s = 0.0;
    double tp = t * t;
    for (int j = 0; j < 6; ++j) {
        s += a[j] * tp / ((j + 1.0) * (j + 2.0));
        tp *= t;
    }
    return R * R * (4.0 + 8.0 * U * t + U * U * s);
}

double ChiProfile::laplacian(double r) const {
    if (r < 2.0 * R) return 4.0;
    if (r >= outer_radius()) return 0.0;
    const double t = std::log(r / (2.0 * R)) / U;
    double g = 0.0;
    for (int j = 5; j >= 0; --j) g = g * t + a[j];
    return R * R * g / (r * r);
}

double ChiProfile::sup() const {
    // Dense scan of the blend plus a slope bound for the gaps.
    constexpr int samples = 200000;
    double best = 4.0 * R * R;
    double slope = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        best = std::max(best, value(2.0 * R * std::exp(U * t)));
        double s = 0.0;
        double tp = t;
        for (int j = 0; j < 6; ++j) {
            s += a[j] * tp / (j + 1.0);
            tp *= t;
        }
        slope = std::max(slope, std::abs(R * R * U * (8.0 + U * s)));
    }
    return best + slope / samples;
}

double WitnessField::exact_laplacian(Complex z) const {
    Complex grad(0.0, 0.0);
    for (std::size_t i = 0; i < measure.size(); ++i) grad += measure.weights[i] / (z - measure.support[i]);
    return std::exp(-potential::potential_eval(measure, z)) * std::norm(grad) + eps * chi.laplacian(std::abs(z));
}

WitnessField witness_psi_star(const CompactSet& G, double eps, std::size_t n, std::uint64_t seed) {
    geometry::validate(G);
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidInput("eps must be finite and nonnegative");
    if (geometry::is_atomic(G)) throw InvalidInput("polar G");
    potential::PolarityOptions po;
    po.seed = seed;
    if (potential::classify_polarity(G, po).classification != potential::PolarityVerdict::Classification::nonpolar)
        throw InvalidInput("polar G");

    WitnessField w;
    const auto sol = potential::solve_equilibrium(G, n, potential::kDefaultTol, seed);
    w.measure = sol.measure;
    w.eps = eps;
    w.R = 1.01 * geometry::bounding_radius(G);
    w.chi = ChiProfile::make(w.R);
    w.R_outer = w.chi.outer_radius();
    w.delta = 0.5 * sol.min_separation;

    const auto measure = w.measure;
    const auto chi = w.chi;
    w.field.evaluation = [measure, chi, eps](Complex z) {
        return std::exp(-potential::potential_eval(measure, z)) + eps * chi.value(std::abs(z));
    };
    w.field.excluded_points = measure.support;
    w.field.exclusion_radius = w.delta;
    w.field.label = "psi_*";

    // e^{-p} is subharmonic off the support and vanishes at infinity, so its sup
    // over the domain is attained on the removed circles.
    double sup_e = 0.0;
    for (const auto& c : measure.support) {
        for (int d = 0; d < 16; ++d) {
            const Complex z = c + std::polar(w.delta, 2.0 * kPi * d / 16.0);
            sup_e = std::max(sup_e, std::exp(-potential::potential_eval(measure, z)));
        }
    }
    w.sup_exp_potential = sup_e;
    w.field.bounded = true;
    w.field.bound = 1.01 * sup_e + eps * chi.sup();

    double min_lap = std::numeric_limits<double>::infinity();
    constexpr int radial = 400;
    constexpr int angular = 64;
    for (int i = 0; i <= radial; ++i) {
        const double r = 2.0 * w.R * std::exp(chi.U * i / static_cast<double>(radial));
        for (int j = 0; j < angular; ++j) {
            const double lap = w.exact_laplacian(std::polar(r, 2.0 * kPi * (j + 0.5) / angular));
            min_lap = std::min(min_lap, lap);
        }
    }
    w.min_blend_laplacian = min_lap;
    if (!(min_lap > 0.0))
        throw InvalidInput("eps too large: Laplacian of psi_* reaches " + std::to_string(min_lap) + " on the blend");
    return w;
}

bool excluded_probe(const WitnessField& w, double R, Complex z) {
    return std::abs(std::abs(z) - 2.0 * R) < 0.02 * R || !w.field.in_domain(z);
}

WitnessReport verify_witness_bounds(const WitnessField& w, double R, std::size_t probes, std::uint64_t seed) {
    if (!(R > 0.0)) throw InvalidInput("R must be positive");
    if (probes < 2) throw InvalidInput("need at least 2 probes");
    WitnessReport rep;
    rep.bound = w.field.bound;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double band = 0.01 * 2.0 * R;
    const double r_lo = 2.0 * R + band;
    const double r_hi = 40.0 * R;

    auto nearest = [&](Complex z) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : w.measure.support) d = std::min(d, std::abs(z - c));
        return d;
    };
    auto step = [&](Complex z) { return std::min(1e-3 * std::max(1.0, std::abs(z)), 0.05 * nearest(z)); };

    rep.tau2 = std::numeric_limits<double>::infinity();
    rep.tau3 = std::numeric_limits<double>::infinity();
    bool ok2 = true;
    bool ok3 = true;
    bool bounded = true;
    rep.max_value = -std::numeric_limits<double>::infinity();
    const std::size_t want_inside = probes / 2;
    const std::size_t want_outside = probes - want_inside;
    std::size_t guard = 0;
    while ((rep.probes_inside < want_inside || rep.probes_outside < want_outside) && guard < 100 * probes) {
        ++guard;
        const bool inside = rep.probes_inside < want_inside;
        Complex z;
        if (inside) {
            z = std::polar(2.0 * R * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
            if (excluded_probe(w, R, z)) {
                ++rep.excluded;
                continue;
            }
        } else {
            z = std::polar(r_lo * std::exp(unit(rng) * std::log(r_hi / r_lo)), 2.0 * kPi * unit(rng));
        }
        const double value = w.field(z);
        rep.max_value = std::max(rep.max_value, value);
        if (!std::isfinite(value) || value > w.field.bound) bounded = false;
        const double h = step(z);
        const double lap = fd_laplacian(w.field, z, h);
        const double noise = 64.0 * kEps * std::abs(value) / (h * h);
        rep.noise_floor = std::max(rep.noise_floor, noise);
        if (inside) {
            rep.tau3 = std::min(rep.tau3, lap);
            ok3 = ok3 && lap > noise;
            ++rep.probes_inside;
        } else {
            const double r = std::abs(z);
            rep.tau2 = std::min(rep.tau2, lap * r * r * r);
            ok2 = ok2 && lap > noise;
            ++rep.probes_outside;
        }
    }
    rep.tau2_certified = ok2 && rep.probes_outside == want_outside && rep.tau2 > 0.0;
    rep.tau3_certified = ok3 && rep.probes_inside == want_inside && rep.tau3 > 0.0;
    rep.bounded = bounded;
    return rep;
}

}  // namespace capstone::bergman_p1
