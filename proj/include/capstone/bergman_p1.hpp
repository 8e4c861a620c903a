#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "capstone/geometry.hpp"
#include "capstone/potential.hpp"
#include "capstone/types.hpp"

namespace capstone::bergman_p1 {

/// Line bundle O(k) on the projective line, in the affine chart.
struct WeightSpec {
    int k = 0;
};

/// (1+|z|^2)^{-(k+2)}.
double phi_k(const WeightSpec& spec, Complex z);

/// Laplacian of -ln phi_k: 4(k+2)(1+|z|^2)^{-2}.
double laplacian_log_weight(const WeightSpec& spec, Complex z);

/// max(0, k+1).
long dim_global_sections(int k);

/// Real field on the plane or on the complement of finitely many small discs.
struct ScalarField {
    std::function<double(Complex)> evaluation;
    std::vector<Complex> excluded_points;  // centers of removed discs
    double exclusion_radius = 0.0;
    bool bounded = false;
    double bound = 0.0;
    std::string label;

    double operator()(Complex z) const { return evaluation(z); }
    bool in_domain(Complex z) const;
};

/// psi = -ln phi_k = (k+2) ln(1+|z|^2).
ScalarField log_weight_field(int k);

/// Nine-point finite-difference Laplacian with step h.
double fd_laplacian(const ScalarField& f, Complex z, double h);

/// Shells r in [2^j, 2^{j+1}], j = j_min..j_max, plus the disc r < 2^{j_min}.
struct RadialGrid {
    int j_min = -6;
    int j_max = 20;
    std::size_t n_r = 64;
    std::size_t n_theta = 64;
    double step = 1e-2;            // finite-difference step relative to r
    double negative_tol = 1e-6;    // allowed negative Laplacian, relative to the mass so far
    double infinite_floor = 1e-6;  // last shell must carry at least this share for an infinite flag
};

struct RieszMass {
    double value = 0.0;
    bool infinite = false;
    double inner = 0.0;  // mass of the disc r < 2^{j_min}
    std::vector<double> shell_masses;
};

/// Integrates the Laplacian over the plane; throws InvalidInput when it is
/// negative beyond tolerance (field not subharmonic).
RieszMass riesz_mass(const ScalarField& field, const RadialGrid& grid = {});

/// Greatest integer strictly below x for x > 0; 0 at 0. Throws for x < 0.
long strict_floor(double x);

struct Dimension {
    bool infinite = false;
    long value = 0;

    static Dimension finite(long v) { return {false, v}; }
    static Dimension infinity() { return {true, 0}; }
    bool operator==(const Dimension& o) const { return infinite == o.infinite && (infinite || value == o.value); }
};

std::string to_string(const Dimension& d);

/// mass/4pi is snapped to the nearest integer when within snap_tol (relative), then strict_floor.
Dimension bly_dimension(double mass, bool infinite = false, double snap_tol = 2e-3);
Dimension bly_dimension(const RieszMass& mass, double snap_tol = 2e-3);

struct DimensionReport {
    potential::PolarityVerdict polarity;
    std::optional<Dimension> dimension;  // empty when polarity is inconclusive
    std::string method;
    std::optional<Dimension> if_polar;
    std::optional<Dimension> if_nonpolar;
};

/// Dimension of the weighted Bergman space on the complement of K for O(k).
DimensionReport dimension_report(int k, const geometry::CompactSet& complement_of,
                                 const std::optional<ScalarField>& psi = std::nullopt,
                                 const potential::PolarityOptions& polarity = {}, const RadialGrid& grid = {});

/// C^2 radial bump: |z|^2 on r <= 2R, zero for r >= R' = 2R e^U, and on the
/// blend the log-Laplacian r^2 chi'' is R^2 G(t), t = ln(r/2R)/U, with
/// G(t) = 16(1-t) + t(1-t)(c0 + c1 t + c2 t^2 + c3 t^3).
struct ChiProfile {
    double R = 1.0;
    double U = 2.0;
    std::array<double, 6> a{};  // G(t) = sum a_j t^j

    static ChiProfile make(double R);
    double outer_radius() const;
    double value(double r) const;
    double laplacian(double r) const;
    double sup() const;
};

struct WitnessField {
    ScalarField field;
    potential::DiscreteMeasure measure;
    ChiProfile chi;
    double eps = 0.0;
    double R = 0.0;
    double R_outer = 0.0;
    double delta = 0.0;  // radius of the discs removed around support points
    double sup_exp_potential = 0.0;
    double min_blend_laplacian = 0.0;  // min of Laplacian(psi) over the blend check grid

    /// Laplacian of e^{-p} + eps chi from the closed forms.
    double exact_laplacian(Complex z) const;
};

/// e^{-p} + eps chi with p the potential of the equilibrium measure of G.
WitnessField witness_psi_star(const geometry::CompactSet& G, double eps, std::size_t n, std::uint64_t seed);

struct WitnessReport {
    double tau2 = 0.0;  // min of Laplacian * |z|^3 outside disc(0, 2R)
    double tau3 = 0.0;  // min of Laplacian inside disc(0, 2R)
    bool tau2_certified = false;
    bool tau3_certified = false;
    bool bounded = false;
    double max_value = 0.0;
    double bound = 0.0;
    std::size_t probes_inside = 0;
    std::size_t probes_outside = 0;
    std::size_t excluded = 0;
    double noise_floor = 0.0;

    bool certified() const { return tau2_certified && tau3_certified && bounded; }
};

/// True for probes in the band ||z| - 2R| < 0.02 R or inside a removed disc.
bool excluded_probe(const WitnessField& w, double R, Complex z);

/// Finite-difference certification at seeded probes. Probes within 1% of |z| = 2R
/// are skipped; half the probes are uniform in disc(0, 2R), half log-uniform in [2R, 40R].
WitnessReport verify_witness_bounds(const WitnessField& w, double R, std::size_t probes, std::uint64_t seed);

}  // namespace capstone::bergman_p1
