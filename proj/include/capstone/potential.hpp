#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "capstone/geometry.hpp"
#include "capstone/types.hpp"

namespace capstone::potential {

/// Weighted point cloud. Support points are pairwise distinct.
struct DiscreteMeasure {
    std::vector<Complex> support;
    std::vector<double> weights;
    double mass = 0.0;

    /// Builds a measure with mass = sum(weights); throws on length mismatch or negative weights.
    static DiscreteMeasure from_weights(std::vector<Complex> support, std::vector<double> weights);

    std::size_t size() const { return support.size(); }
};

/// Throws InvalidInput unless the measure is well formed (lengths, nonnegative
/// weights, mass consistent to 1e-12 relative, distinct support).
void check(const DiscreteMeasure& m);

/// Sum over i != j of w_i w_j ln|z_i - z_j|.
double log_energy(const DiscreteMeasure& m);

/// p(z) = sum w_i ln|z - z_i|; -inf when z hits a weighted support point.
double potential_eval(const DiscreteMeasure& m, Complex z);

inline constexpr double kDefaultTol = 1e-8;
inline constexpr std::size_t kDefaultN = 256;
inline constexpr std::size_t kDefaultMaxIter = 2'000'000;

/// Full output of the equilibrium solver.
struct EquilibriumSolution {
    DiscreteMeasure measure;
    std::vector<double> cell_lengths;
    /// Discrete potential at each support point, including the cell self-energy.
    std::vector<double> support_potential;
    double energy = 0.0;  // w^T A w, the estimate of I(nu_K)
    double gap = 0.0;     // max potential minus min potential over the active set
    double min_separation = 0.0;
    std::size_t iterations = 0;
    std::size_t active = 0;
};

/// Maximizes w^T A w over the probability simplex by pairwise conditional-gradient
/// steps with exact line search. A_ij = ln|z_i - z_j| off the diagonal and
/// A_ii = ln(h_i) - 3/2, the self-energy of a uniform cell of length h_i.
EquilibriumSolution solve_equilibrium(const geometry::CompactSet& spec, std::size_t n, double tol,
                                      std::uint64_t seed, std::size_t max_iter = kDefaultMaxIter);

DiscreteMeasure equilibrium_measure(const geometry::CompactSet& spec, std::size_t n, double tol, std::uint64_t seed);

/// e^{I} of the computed equilibrium measure; 0 for finite point sets.
double capacity(const geometry::CompactSet& spec, std::size_t n, double tol, std::uint64_t seed);

struct FeketeResult {
    std::vector<Complex> points;
    double diameter = 0.0;
    std::size_t sweeps = 0;
};

/// Coordinate ascent on sum_{i<j} ln|z_i - z_j| over the set's boundary pieces.
FeketeResult fekete_points(const geometry::CompactSet& spec, std::size_t n, std::uint64_t seed,
                           std::size_t max_sweeps = 2000);

double fekete_diameter(const geometry::CompactSet& spec, std::size_t n, std::uint64_t seed);

struct PolarityVerdict {
    enum class Classification { polar, nonpolar, inconclusive };

    double capacity_estimate = 0.0;
    std::vector<double> sequence;
    std::vector<std::size_t> schedule;
    Classification classification = Classification::inconclusive;
    double threshold = 1e-6;
    std::string note;
};

std::string to_string(PolarityVerdict::Classification c);

struct PolarityOptions {
    double threshold = 1e-6;
    std::vector<std::size_t> schedule{64, 128, 256};
    double tol = kDefaultTol;
    std::uint64_t seed = 0;
};

PolarityVerdict classify_polarity(const geometry::CompactSet& spec, const PolarityOptions& options = {});

inline PolarityVerdict classify_polarity(const geometry::CompactSet& spec, double threshold) {
    PolarityOptions o;
    o.threshold = threshold;
    return classify_polarity(spec, o);
}

}  // namespace capstone::potential
