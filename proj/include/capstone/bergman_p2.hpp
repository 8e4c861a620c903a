#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "capstone/geometry.hpp"
#include "capstone/types.hpp"

namespace capstone::bergman_p2 {

/// Reinhardt pieces of C^2:
///   B   max(|z|,|w|) < 2
///   X_l |z| > sqrt 2, |w| < |z|^-l          (l >= 1)
///   Y   |w| > sqrt 2, |z| < 1/|w|
///   Z_m |z|^2+|w|^2 > 2, ||z|-|w|| (|z|+|w|)^m < 1   (m >= 2)
struct RegionSpec {
    enum class Kind { B, X, Y, Z, Union };

    Kind kind = Kind::B;
    int param = 0;  // l for X, m for Z
    std::vector<RegionSpec> children;

    static RegionSpec b() { return {Kind::B, 0, {}}; }
    static RegionSpec x(int l);
    static RegionSpec y() { return {Kind::Y, 0, {}}; }
    static RegionSpec z(int m);
    static RegionSpec union_of(std::vector<RegionSpec> parts);
};

/// "B", "X1", "Z2", "B u X1 u Y u Z2".
std::string to_string(const RegionSpec& r);

bool region_contains(const RegionSpec& r, const geometry::PlanePoint2& pt);

struct MonomialIndex {
    int p = 0;
    int q = 0;

    bool operator==(const MonomialIndex& o) const { return p == o.p && q == o.q; }
    bool operator<(const MonomialIndex& o) const { return p != o.p ? p < o.p : q < o.q; }
};

/// Closed-form test for z^p w^q being square integrable against
/// (1+|z|^2+|w|^2)^{-(3+k)} on r. A union requires every piece.
bool monomial_predicate(const RegionSpec& r, const MonomialIndex& idx, int k);

/// Growth exponent e of the radial integrand R^e; the norm is finite iff e < -1.
/// Not defined for B or unions.
double radial_exponent(const RegionSpec& r, const MonomialIndex& idx, int k);

struct NormBudget {
    double r_max = 65536.0;
    std::size_t shells = 48;
    std::size_t fit_shells = 5;
    double finite_below = -1.3;    // fitted exponent below this: finite
    double divergent_above = -0.7; // above this: divergent
    double flat_tol = 1e-6;        // relative slack for "non-decreasing" shell masses
    bool escalate = true;          // retry a near-critical fit once with r_max squared
};

/// (2 pi)^2 times the integral of r^{2p+1} s^{2q+1} (1+r^2+s^2)^{-(3+k)} over the
/// (r, s) shadow of a single region, classified from the dyadic shell masses.
ConvergenceVerdict monomial_norm_estimate(const RegionSpec& r, const MonomialIndex& idx, int k,
                                          const NormBudget& budget = {});

/// B u X_1 u Y u Z_2 for k >= -2, B u X_{1-2(k+2)} u Y u Z_{-2(2k+3)} below.
RegionSpec omega_k_spec(int k);

/// k+4 for k >= -2, 2-k below.
int default_p_max(int k);

/// Monomials passing every component predicate, with p, q <= p_max, ordered by (p, q).
/// Throws when p_max does not cover the total degree allowed by the Z piece.
std::vector<MonomialIndex> omega_k_monomial_basis(int k, int p_max);

long omega_k_dimension(int k);

/// (k+1)(k+2)/2 for k >= 0, else 0.
long dim_global_sections_p2(int k);

}  // namespace capstone::bergman_p2
