#include "capstone/bergman_p2.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace capstone::bergman_p2 {

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;
const double kSqrt2 = std::sqrt(2.0);

using Status = ConvergenceVerdict::Status;

}  // namespace

RegionSpec RegionSpec::x(int l) {
    if (l < 1) throw InvalidInput("X_l needs l >= 1");
    return {Kind::X, l, {}};
}

RegionSpec RegionSpec::z(int m) {
    if (m < 2) throw InvalidInput("Z_m needs m >= 2");
    return {Kind::Z, m, {}};
}

RegionSpec RegionSpec::union_of(std::vector<RegionSpec> parts) {
    if (parts.empty()) throw InvalidInput("empty union");
    return {Kind::Union, 0, std::move(parts)};
}

std::string to_string(const RegionSpec& r) {
    switch (r.kind) {
        case RegionSpec::Kind::B: return "B";
        case RegionSpec::Kind::X: return "X" + std::to_string(r.param);
        case RegionSpec::Kind::Y: return "Y";
        case RegionSpec::Kind::Z: return "Z" + std::to_string(r.param);
        case RegionSpec::Kind::Union: {
            std::string s;
            for (const auto& c : r.children) s += (s.empty() ? "" : " u ") + to_string(c);
            return s;
        }
    }
    return "?";
}

bool region_contains(const RegionSpec& r, const geometry::PlanePoint2& pt) {
    const double a = std::abs(pt.z);
    const double b = std::abs(pt.w);
    switch (r.kind) {
        case RegionSpec::Kind::B: return std::max(a, b) < 2.0;
        case RegionSpec::Kind::X: return a > kSqrt2 && b < std::pow(a, -r.param);
        case RegionSpec::Kind::Y: return b > kSqrt2 && a < 1.0 / b;
        case RegionSpec::Kind::Z: return a * a + b * b > 2.0 && std::abs(a - b) * std::pow(a + b, r.param) < 1.0;
        case RegionSpec::Kind::Union:
            return std::any_of(r.children.begin(), r.children.end(),
                               [&](const RegionSpec& c) { return region_contains(c, pt); });
    }
    return false;
}

bool monomial_predicate(const RegionSpec& r, const MonomialIndex& idx, int k) {
    const int p = idx.p;
    const int q = idx.q;
    switch (r.kind) {
        case RegionSpec::Kind::B: return true;
        case RegionSpec::Kind::X: return p - r.param * q <= k + r.param + 1;
        case RegionSpec::Kind::Y: return q - p <= k + 2;
        case RegionSpec::Kind::Z: return 2 * (p + q) <= r.param + 2 * k + 2;
        case RegionSpec::Kind::Union:
            return std::all_of(r.children.begin(), r.children.end(),
                               [&](const RegionSpec& c) { return monomial_predicate(c, idx, k); });
    }
    return false;
}

double radial_exponent(const RegionSpec& r, const MonomialIndex& idx, int k) {
    const double p = idx.p;
    const double q = idx.q;
    switch (r.kind) {
        case RegionSpec::Kind::X:
            return 2 * p + 2 * q + 3 - (r.param + 1.0) * (2 * q + 2) - 2.0 * (3 + k);
        case RegionSpec::Kind::Y:
            return 2 * p + 2 * q + 3 - 2.0 * (2 * p + 2) - 2.0 * (3 + k);
        case RegionSpec::Kind::Z:
            return 2 * p + 2 * q + 3 - (r.param + 1.0) - 2.0 * (3 + k);
        default:
            throw InvalidInput("radial exponent needs a single unbounded region");
    }
}

namespace {

// Log of the radial integrand per unit ln r for X_l, in the (r, s) coordinates: s = r^-l u.
double x_log_integrand(double r, int p, int q, int k, int l) {
    const double lr = std::log(r);
    const double base = std::log1p(r * r);
    const double inner = GL::integrate(
        [&](double u) {
            if (u <= 0.0) return 0.0;
            const double s2 = std::exp(-2.0 * l * lr) * u * u;
            return std::pow(u, 2 * q + 1) * std::exp(-(3.0 + k) * (std::log1p(r * r + s2) - base));
        },
        0.0, 1.0);
    // r^{2p+1} * r^{-l(2q+2)} from the substitution, times dr = r d(ln r).
    return (2.0 * p + 2.0 - l * (2.0 * q + 2.0)) * lr - (3.0 + k) * base + std::log(inner);
}

// Half-width of the Z_m wedge about the diagonal: sin(psi) cos^m(psi) = (sqrt2 R)^{-m-1}.
double z_half_width(double R, int m) {
    const double c = std::exp(-(m + 1.0) * std::log(kSqrt2 * R));
    auto f = [&](double psi) { return std::sin(psi) * std::pow(std::cos(psi), m) - c; };
    const double hi = std::min(std::atan(1.0 / std::sqrt(static_cast<double>(m))), kPi / 4.0);
    if (f(hi) <= 0.0) return hi;
    std::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(f, 0.0, hi, -c, f(hi),
                                                        boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (root.first + root.second);
}

double z_log_integrand(double R, int p, int q, int k, int m) {
    const double g = z_half_width(R, m);
    const double angular = GL::integrate(
        [&](double psi) {
            const double a = kPi / 4.0 - psi;
            return std::pow(std::cos(a), 2 * p + 1) * std::pow(std::sin(a), 2 * q + 1);
        },
        -g, g);
    return (2.0 * p + 2 * q + 4) * std::log(R) - (3.0 + k) * std::log1p(R * R) + std::log(angular);
}

struct ShellRun {
    std::vector<double> log_masses;
    std::vector<double> starts;  // ln of the inner radius of each shell
    double log_ratio = 0.0;

    std::vector<double> masses() const {
        std::vector<double> out;
        for (double l : log_masses) out.push_back(std::exp(l));
        return out;
    }
};

// Shell masses are kept as logs so that fast-decaying integrands do not underflow.
ShellRun integrate_shells(const std::function<double(double)>& log_per_log_r, double r_min, double r_max,
                          std::size_t shells) {
    ShellRun run;
    const double a = std::log(r_min);
    run.log_ratio = (std::log(r_max) - a) / static_cast<double>(shells);
    run.log_masses.resize(shells);
    run.starts.resize(shells);
    for (std::size_t i = 0; i < shells; ++i) {
        const double lo = a + run.log_ratio * static_cast<double>(i);
        const double ref = log_per_log_r(std::exp(lo + 0.5 * run.log_ratio));
        run.starts[i] = lo;
        const double scaled = GL::integrate([&](double x) { return std::exp(log_per_log_r(std::exp(x)) - ref); }, lo,
                                            lo + run.log_ratio);
        run.log_masses[i] = ref + std::log(scaled);
    }
    return run;
}

// Least-squares slope of ln(mass) against ln(R) over the last n shells, minus one.
double fitted_exponent(const ShellRun& run, std::size_t n) {
    const std::size_t total = run.log_masses.size();
    n = std::min(n, total);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = total - n; i < total; ++i) {
        const double x = run.starts[i];
        const double y = run.log_masses[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx) - 1.0;
}

bool non_decreasing(const std::vector<double>& log_m, std::size_t n, double tol) {
    n = std::min(n, log_m.size());
    for (std::size_t i = log_m.size() - n + 1; i < log_m.size(); ++i)
        if (log_m[i] < log_m[i - 1] + std::log1p(-tol)) return false;
    return true;
}

ConvergenceVerdict classify(const ShellRun& run, const NormBudget& budget) {
    ConvergenceVerdict v;
    v.shell_masses = run.masses();
    v.exponent = fitted_exponent(run, budget.fit_shells);
    double partial = 0.0;
    for (double m : v.shell_masses) partial += m;
    const double scale = 4.0 * kPi * kPi;
    if (v.exponent < budget.finite_below) {
        const double rho = std::exp(run.log_ratio * (v.exponent + 1.0));
        const double tail = v.shell_masses.back() * rho / (1.0 - rho);
        v.status = Status::finite;
        v.value = scale * (partial + tail);
        v.error = scale * (std::abs(tail) + 1e-10 * partial);
    } else if (v.exponent > budget.divergent_above) {
        v.status = Status::divergent;
        v.value = scale * partial;
    } else {
        v.status = Status::undecided;
        v.near_critical = true;
        v.value = scale * partial;
    }
    return v;
}

ConvergenceVerdict estimate_unbounded(const std::function<double(double)>& log_per_log_r, const NormBudget& budget) {
    auto v = classify(integrate_shells(log_per_log_r, kSqrt2, budget.r_max, budget.shells), budget);
    if (v.status != Status::undecided || !budget.escalate) return v;
    // Square r_max and keep the shell width, so the fit sees twice the log range.
    const double r_big = budget.r_max * budget.r_max / kSqrt2;
    const auto run = integrate_shells(log_per_log_r, kSqrt2, r_big, 2 * budget.shells);
    v = classify(run, budget);
    v.near_critical = true;
    if (v.status == Status::undecided) {
        if (non_decreasing(run.log_masses, budget.fit_shells, budget.flat_tol)) {
            v.status = Status::divergent;
            v.note = "logarithmic growth: shell masses level off";
        } else {
            v.note = "near-critical exponent after escalation";
        }
    } else {
        v.note = "decided after escalation";
    }
    return v;
}

}  // namespace

ConvergenceVerdict monomial_norm_estimate(const RegionSpec& r, const MonomialIndex& idx, int k,
                                          const NormBudget& budget) {
    if (idx.p < 0 || idx.q < 0) throw InvalidInput("monomial exponents must be nonnegative");
    if (budget.shells < budget.fit_shells || budget.fit_shells < 2 || !(budget.r_max > 2.0))
        throw InvalidInput("bad norm budget");
    const int p = idx.p;
    const int q = idx.q;
    switch (r.kind) {
        case RegionSpec::Kind::B: {
            const double v = GL::integrate(
                [&](double a) {
                    return GL::integrate(
                        [&](double b) {
                            return std::pow(a, 2 * p + 1) * std::pow(b, 2 * q + 1) *
                                   std::pow(1.0 + a * a + b * b, -(3.0 + k));
                        },
                        0.0, 2.0);
                },
                0.0, 2.0);
            ConvergenceVerdict out;
            out.status = Status::finite;
            out.value = 4.0 * kPi * kPi * v;
            out.error = 1e-12 * out.value;
            out.note = "bounded region";
            return out;
        }
        case RegionSpec::Kind::X: {
            const int l = r.param;
            return estimate_unbounded([=](double x) { return x_log_integrand(x, p, q, k, l); }, budget);
        }
        case RegionSpec::Kind::Y:
            // Mirror image of X_1 under z <-> w.
            return estimate_unbounded([=](double x) { return x_log_integrand(x, q, p, k, 1); }, budget);
        case RegionSpec::Kind::Z: {
            const int m = r.param;
            return estimate_unbounded([=](double x) { return z_log_integrand(x, p, q, k, m); }, budget);
        }
        case RegionSpec::Kind::Union:
            throw InvalidInput("norm estimate needs a single region, not a union");
    }
    return {};
}

RegionSpec omega_k_spec(int k) {
    if (k >= -2)
        return RegionSpec::union_of({RegionSpec::b(), RegionSpec::x(1), RegionSpec::y(), RegionSpec::z(2)});
    return RegionSpec::union_of(
        {RegionSpec::b(), RegionSpec::x(1 - 2 * (k + 2)), RegionSpec::y(), RegionSpec::z(-2 * (2 * k + 3))});
}

int default_p_max(int k) { return k >= -2 ? k + 4 : 2 - k; }

std::vector<MonomialIndex> omega_k_monomial_basis(int k, int p_max) {
    const auto omega = omega_k_spec(k);
    int degree_cap = std::numeric_limits<int>::max();
    for (const auto& c : omega.children)
        if (c.kind == RegionSpec::Kind::Z) degree_cap = std::min(degree_cap, (c.param + 2 * k + 2) / 2);
    if (p_max < std::max(0, degree_cap))
        throw InvalidInput("p_max " + std::to_string(p_max) + " below the total degree bound " +
                           std::to_string(degree_cap));
    std::vector<MonomialIndex> basis;
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= p_max; ++q)
            if (monomial_predicate(omega, {p, q}, k)) basis.push_back({p, q});
    return basis;
}

long omega_k_dimension(int k) { return static_cast<long>(omega_k_monomial_basis(k, default_p_max(k)).size()); }

long dim_global_sections_p2(int k) {
    if (k < 0) return 0;
    return (static_cast<long>(k) + 1) * (static_cast<long>(k) + 2) / 2;
}

}  // namespace capstone::bergman_p2
