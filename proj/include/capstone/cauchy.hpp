#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "capstone/geometry.hpp"
#include "capstone/potential.hpp"
#include "capstone/types.hpp"

namespace capstone::cauchy {

using potential::DiscreteMeasure;

/// A boost whose result is numerically the zero function.
class TrivialBoost : public Error {
public:
    using Error::Error;
};

/// mu = positive - negative.
struct SignedMeasure {
    DiscreteMeasure positive;
    DiscreteMeasure negative;
};

/// Equilibrium measures of e1 and e2 as a signed difference. Both sets must be
/// classified nonpolar and their samples must not meet the other set.
SignedMeasure signed_equilibrium_difference(const geometry::CompactSet& e1, const geometry::CompactSet& e2,
                                            std::size_t n, double tol, std::uint64_t seed);

/// f(z) = sum w+ / (xi+ - z) - sum w- / (xi- - z). Throws within 1e-9 of a support point.
Complex cauchy_transform(const SignedMeasure& mu, Complex z);

/// m_0, ..., m_{count-1} with m_l = sum xi^l dmu.
std::vector<Complex> moments(const SignedMeasure& mu, int count);

/// Coefficients c_l of sum_{l >= start_order} c_l z^{-l}.
struct LaurentTail {
    int start_order = 1;
    std::vector<Complex> coefficients;

    bool is_zero() const { return coefficients.empty(); }
    int end_order() const { return start_order + static_cast<int>(coefficients.size()) - 1; }
    Complex coefficient(int order) const;
};

/// Builds a tail for orders first_order.. and drops leading entries with
/// |c_l| <= rel_tol * scale_l. All-zero input gives the zero tail.
LaurentTail normalized_tail(int first_order, const std::vector<Complex>& c, const std::vector<double>& scales,
                            double rel_tol);

/// c_l = -m_{l-1} for l = 1..max_order, normalized.
LaurentTail laurent_tail(const SignedMeasure& mu, int max_order);

/// Partial sum of the tail at z.
Complex evaluate_tail(const LaurentTail& tail, Complex z);

/// Laurent coefficients c_1..c_max_order of a function holomorphic outside a disc,
/// by the trapezoidal rule on |z| = radius.
std::vector<Complex> contour_coefficients(const std::function<Complex(Complex)>& f, double radius, int max_order,
                                          std::size_t nodes);

/// int_E dA(xi) / (xi - z) by midpoint quadrature (polar cells on discs,
/// a bounding-box grid on polygons).
Complex area_cauchy_transform(const geometry::CompactSet& e, Complex z, std::size_t n_grid);

/// Extended-precision Cauchy transform of a complex node measure.
class NodeFunction;

struct BoostedFunction {
    enum class Kind { cauchy, boost, area_power };

    Kind kind = Kind::cauchy;
    std::shared_ptr<const BoostedFunction> base;
    std::vector<Complex> anchors;
    std::vector<Complex> combiners;
    std::vector<Complex> anchor_values;  // base evaluated at the anchors
    std::vector<Complex> residuals;      // a_1..a_p of the boost system
    LaurentTail tail;
    int power = 0;  // area_power only
    std::function<Complex(Complex)> evaluator;
    std::shared_ptr<const NodeFunction> nodes;  // set when the function is a node-measure transform
    std::optional<ConvergenceVerdict> verdict;
    std::string note;

    Complex operator()(Complex z) const { return evaluator(z); }
    int order() const { return tail.start_order; }
};

std::string to_string(BoostedFunction::Kind kind);

struct BoostOptions {
    double residual_tol = 1e-10;  // |a_m| <= residual_tol * max(1, scale_m)
    double zero_tol = 1e-10;      // coefficients below zero_tol * scale count as zero
    double node_zero_tol = 1e-24; // same, for node-measure functions held in extended precision
    int extra_orders = 12;        // tail kept up to start_order + extra_orders
    int search_orders = 40;       // window searched for the first nonzero coefficient
};

/// Cauchy transform of mu as the first member of a sequence.
BoostedFunction cauchy_function(const SignedMeasure& mu, const BoostOptions& options = {});

/// Area Cauchy transform as a node-measure function.
BoostedFunction area_function(const geometry::CompactSet& e, std::size_t n_grid, const BoostOptions& options = {});

/// Null-space combiners for the p x (p+1) system sum_l b_l f(z_l) z_l^{m-1} = 0.
std::vector<Complex> boost_combiners(int p, const std::vector<Complex>& anchor_values,
                                     const std::vector<Complex>& anchors);

/// g(z) = sum b_l (f(z) - f(z_l)) / (z - z_l) for a black-box f given by its tail and values.
BoostedFunction vanishing_boost(const LaurentTail& tail, const std::function<Complex(Complex)>& evaluator,
                                const std::vector<Complex>& anchors, const BoostOptions& options = {});

/// Same construction on a previous function; stays node-backed when base is.
BoostedFunction vanishing_boost(const std::shared_ptr<const BoostedFunction>& base,
                                const std::vector<Complex>& anchors, const BoostOptions& options = {});

/// Rebuilds a boost from stored combiners (no solve).
BoostedFunction apply_boost(const std::shared_ptr<const BoostedFunction>& base, const std::vector<Complex>& anchors,
                            const std::vector<Complex>& combiners, const BoostOptions& options = {});

/// count points equally spaced on |z| = radius with a seeded rotation.
std::vector<Complex> default_anchors(double radius, std::size_t count, std::uint64_t seed);

/// area^j for the rational fallback.
BoostedFunction area_power(const std::shared_ptr<const BoostedFunction>& area, int j, const BoostOptions& options = {});

struct SequenceOptions {
    std::size_t n = potential::kDefaultN;
    double tol = potential::kDefaultTol;
    std::size_t n_grid = 64;
    int max_attempts = 3;
    BoostOptions boost;
};

/// Radius used for the tail norm of a sequence whose anchors sit on anchor_radius.
double tail_radius(double anchor_radius);

/// Cauchy transform of mu_1 - mu_2 followed by count-1 vanishing-order boosts,
/// each tagged with weighted_tail_norm(tail, k, R).
std::vector<BoostedFunction> wiegerinck_sequence(const geometry::CompactSet& e1, const geometry::CompactSet& e2,
                                                 std::size_t count, int k, std::uint64_t seed,
                                                 const SequenceOptions& options = {});

/// Sequence from an arbitrary first function. area_source supplies the positive-area
/// set for the rational fallback; anchors sit on anchor_radius.
std::vector<BoostedFunction> boost_sequence(BoostedFunction first, const geometry::CompactSet* area_source,
                                            double anchor_radius, std::size_t count, int k, std::uint64_t seed,
                                            const SequenceOptions& options = {});

/// 2 pi sum |c_l|^2 int_R^inf r^{1-2l} (1+r^2)^{-2-k} dr over the stored coefficients.
ConvergenceVerdict weighted_tail_norm(const LaurentTail& tail, int k, double R);

}  // namespace capstone::cauchy
