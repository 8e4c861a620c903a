#include "capstone/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "quad.hpp"

namespace capstone::cauchy {

using detail::QComplex;
using detail::qreal;
using geometry::CompactSet;

namespace {

constexpr double kSupportGuard = 1e-9;

double min_distance(const std::vector<Complex>& pts, Complex z) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, std::abs(z - p));
    return best;
}

}  // namespace

class NodeFunction {
public:
    std::vector<Complex> nodes;
    std::vector<QComplex> weights;

    QComplex eval(Complex z) const {
        if (min_distance(nodes, z) <= kSupportGuard) throw InvalidInput("evaluation on support");
        QComplex acc;
        const QComplex zq(z);
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] / (QComplex(nodes[i]) - zq);
        return acc;
    }

    // c_1..c_max and the matching absolute scales sum |w| |xi|^{l-1}.
    void coefficients(int max_order, std::vector<QComplex>& c, std::vector<double>& scales) const {
        c.assign(max_order, QComplex());
        scales.assign(max_order, 0.0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            QComplex power(1, 0);
            const QComplex xi(nodes[i]);
            const double wabs = weights[i].abs();
            double pabs = 1.0;
            for (int l = 0; l < max_order; ++l) {
                c[l] -= weights[i] * power;
                scales[l] += wabs * pabs;
                power = power * xi;
                pabs *= std::abs(nodes[i]);
            }
        }
    }
};

Complex LaurentTail::coefficient(int order) const {
    if (order < start_order || order > end_order()) return {0.0, 0.0};
    return coefficients[static_cast<std::size_t>(order - start_order)];
}

LaurentTail normalized_tail(int first_order, const std::vector<Complex>& c, const std::vector<double>& scales,
                            double rel_tol) {
    if (first_order < 1) throw InvalidInput("tail orders start at 1");
    LaurentTail t;
    std::size_t lead = 0;
    while (lead < c.size() && std::abs(c[lead]) <= rel_tol * (lead < scales.size() ? scales[lead] : 0.0)) ++lead;
    if (lead == c.size()) {
        t.start_order = first_order + static_cast<int>(c.size());
        return t;
    }
    t.start_order = first_order + static_cast<int>(lead);
    t.coefficients.assign(c.begin() + static_cast<std::ptrdiff_t>(lead), c.end());
    return t;
}

Complex evaluate_tail(const LaurentTail& tail, Complex z) {
    // Horner in 1/z, then shift by the start order.
    const Complex u = 1.0 / z;
    Complex acc(0.0, 0.0);
    for (auto it = tail.coefficients.rbegin(); it != tail.coefficients.rend(); ++it) acc = acc * u + *it;
    return acc * std::pow(u, tail.start_order);
}

std::vector<Complex> contour_coefficients(const std::function<Complex(Complex)>& f, double radius, int max_order,
                                          std::size_t nodes) {
    std::vector<Complex> c(max_order, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < nodes; ++k) {
        const Complex z = std::polar(radius, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes));
        const Complex fz = f(z);
        Complex zl = z;
        for (int l = 0; l < max_order; ++l) {
            c[l] += fz * zl;
            zl *= z;
        }
    }
    for (auto& x : c) x /= static_cast<double>(nodes);
    return c;
}

SignedMeasure signed_equilibrium_difference(const CompactSet& e1, const CompactSet& e2, std::size_t n, double tol,
                                            std::uint64_t seed) {
    geometry::validate(e1);
    geometry::validate(e2);
    potential::PolarityOptions po;
    po.tol = tol;
    po.seed = seed;
    for (const auto* e : {&e1, &e2}) {
        if (geometry::is_atomic(*e)) throw InvalidInput("polar component");
        const auto verdict = potential::classify_polarity(*e, po);
        if (verdict.classification != potential::PolarityVerdict::Classification::nonpolar)
            throw InvalidInput("polar component (classified " + potential::to_string(verdict.classification) + ")");
    }
    SignedMeasure mu{potential::equilibrium_measure(e1, n, tol, seed),
                     potential::equilibrium_measure(e2, n, tol, seed + 1)};
    const double guard = 1e-12 * std::max(1.0, geometry::bounding_radius(geometry::CompactSet::union_of({e1, e2})));
    for (const auto& z : mu.positive.support)
        if (geometry::contains(e2, z, guard)) throw InvalidInput("supports overlap");
    for (const auto& z : mu.negative.support)
        if (geometry::contains(e1, z, guard)) throw InvalidInput("supports overlap");
    return mu;
}

Complex cauchy_transform(const SignedMeasure& mu, Complex z) {
    if (std::min(min_distance(mu.positive.support, z), min_distance(mu.negative.support, z)) <= kSupportGuard)
        throw InvalidInput("evaluation on support");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < mu.positive.size(); ++i) acc += mu.positive.weights[i] / (mu.positive.support[i] - z);
    for (std::size_t i = 0; i < mu.negative.size(); ++i) acc -= mu.negative.weights[i] / (mu.negative.support[i] - z);
    return acc;
}

namespace {

// Each part is rescaled in extended precision to its mass (exactly 1 for
// probability measures), so that m_0 cancels far below double rounding.
NodeFunction nodes_of(const SignedMeasure& mu) {
    NodeFunction f;
    auto append = [&f](const DiscreteMeasure& m, double sign) {
        qreal total = 0;
        for (double w : m.weights) total += w;
        if (total == 0) return;
        const qreal target = std::abs(m.mass - 1.0) <= 1e-12 ? qreal(1) : qreal(m.mass);
        for (std::size_t i = 0; i < m.size(); ++i) {
            f.nodes.push_back(m.support[i]);
            f.weights.emplace_back(sign * (m.weights[i] / total) * target, 0);
        }
    };
    append(mu.positive, 1.0);
    append(mu.negative, -1.0);
    return f;
}

std::vector<Complex> to_double(const std::vector<QComplex>& v) {
    std::vector<Complex> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.to_complex());
    return out;
}

LaurentTail truncate(LaurentTail t, int extra) {
    const std::size_t keep = static_cast<std::size_t>(extra) + 1;
    if (t.coefficients.size() > keep) t.coefficients.resize(keep);
    return t;
}

// Tail of a node function: first nonzero coefficient within the window, then extra orders.
// scale_ref, when given, supplies the magnitudes the zero test is relative to. A boost
// that cancels to nothing has tiny weights of its own, so it must not set its own scale.
LaurentTail node_tail(const NodeFunction& f, const BoostOptions& o, int min_order,
                      const NodeFunction* scale_ref = nullptr) {
    const int window = min_order + o.search_orders + o.extra_orders;
    std::vector<QComplex> c;
    std::vector<double> scales;
    f.coefficients(window, c, scales);
    if (scale_ref) {
        std::vector<QComplex> unused;
        scale_ref->coefficients(window, unused, scales);
    }
    auto t = normalized_tail(1, to_double(c), scales, o.node_zero_tol);
    return truncate(std::move(t), o.extra_orders);
}

std::function<Complex(Complex)> node_evaluator(const std::shared_ptr<const NodeFunction>& f) {
    return [f](Complex z) { return f->eval(z).to_complex(); };
}

}  // namespace

std::vector<Complex> moments(const SignedMeasure& mu, int count) {
    const NodeFunction f = nodes_of(mu);
    std::vector<QComplex> c;
    std::vector<double> scales;
    f.coefficients(count, c, scales);
    std::vector<Complex> m;
    for (const auto& x : c) m.push_back(-x.to_complex());
    return m;
}

LaurentTail laurent_tail(const SignedMeasure& mu, int max_order) {
    if (max_order < 2) throw InvalidInput("max_order must be at least 2");
    const NodeFunction f = nodes_of(mu);
    std::vector<QComplex> c;
    std::vector<double> scales;
    f.coefficients(max_order, c, scales);
    return normalized_tail(1, to_double(c), scales, 1e-12);
}

Complex area_cauchy_transform(const CompactSet& e, Complex z, std::size_t n_grid) {
    geometry::validate(e);
    if (geometry::area(e) <= 0.0) throw InvalidInput("zero area");
    if (geometry::distance(e, z) <= 0.0) throw InvalidInput("evaluation point lies on the set");
    const auto f = area_function(e, n_grid);
    return f(z);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void area_cells(const CompactSet& e, std::size_t n, NodeFunction& out) {
    std::visit(overloaded{
                   [&](const geometry::Disc& d) {
                       // Exact annular-sector areas at midpoint locations.
                       const double dr = d.radius / static_cast<double>(n);
                       const double dt = 2.0 * kPi / static_cast<double>(n);
                       for (std::size_t i = 0; i < n; ++i) {
                           const double r0 = dr * static_cast<double>(i);
                           const double r1 = r0 + dr;
                           const double a = 0.5 * (r1 * r1 - r0 * r0) * dt;
                           for (std::size_t j = 0; j < n; ++j) {
                               out.nodes.push_back(d.center +
                                                   std::polar(0.5 * (r0 + r1), dt * (static_cast<double>(j) + 0.5)));
                               out.weights.emplace_back(a, 0);
                           }
                       }
                   },
                   [&](const geometry::Polygon& p) {
                       double x0 = p.vertices[0].real(), x1 = x0, y0 = p.vertices[0].imag(), y1 = y0;
                       for (const auto& v : p.vertices) {
                           x0 = std::min(x0, v.real());
                           x1 = std::max(x1, v.real());
                           y0 = std::min(y0, v.imag());
                           y1 = std::max(y1, v.imag());
                       }
                       const double hx = (x1 - x0) / static_cast<double>(n);
                       const double hy = (y1 - y0) / static_cast<double>(n);
                       const CompactSet whole{p};
                       for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t j = 0; j < n; ++j) {
                               const Complex c(x0 + hx * (static_cast<double>(i) + 0.5),
                                               y0 + hy * (static_cast<double>(j) + 0.5));
                               if (geometry::distance(whole, c) == 0.0) {
                                   out.nodes.push_back(c);
                                   out.weights.emplace_back(hx * hy, 0);
                               }
                           }
                       }
                   },
                   [&](const geometry::Union& u) {
                       for (const auto& child : u.children) area_cells(child, n, out);
                   },
                   [](const auto&) {},
               },
               e.shape);
}

}  // namespace

BoostedFunction cauchy_function(const SignedMeasure& mu, const BoostOptions& options) {
    auto f = std::make_shared<NodeFunction>(nodes_of(mu));
    BoostedFunction out;
    out.kind = BoostedFunction::Kind::cauchy;
    out.tail = node_tail(*f, options, 1);
    out.evaluator = node_evaluator(f);
    out.nodes = f;
    return out;
}

BoostedFunction area_function(const CompactSet& e, std::size_t n_grid, const BoostOptions& options) {
    geometry::validate(e);
    if (n_grid < 2) throw InvalidInput("n_grid must be at least 2");
    auto f = std::make_shared<NodeFunction>();
    area_cells(e, n_grid, *f);
    if (f->nodes.empty()) throw InvalidInput("zero area");
    BoostedFunction out;
    out.kind = BoostedFunction::Kind::area_power;
    out.power = 1;
    out.tail = node_tail(*f, options, 1);
    out.evaluator = node_evaluator(f);
    out.nodes = f;
    return out;
}

std::string to_string(BoostedFunction::Kind kind) {
    switch (kind) {
        case BoostedFunction::Kind::cauchy: return "cauchy";
        case BoostedFunction::Kind::boost: return "boost";
        case BoostedFunction::Kind::area_power: return "area_power";
    }
    return "cauchy";
}

std::vector<Complex> boost_combiners(int p, const std::vector<Complex>& anchor_values,
                                     const std::vector<Complex>& anchors) {
    const std::size_t cols = anchors.size();
    if (p < 1 || cols != static_cast<std::size_t>(p) + 1) throw InvalidInput("need exactly p+1 anchors");
    // Rows m = 1..p, row-equilibrated, padded with a zero row to a square matrix.
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(cols));
    for (int m = 1; m <= p; ++m) {
        double row_max = 0.0;
        for (std::size_t l = 0; l < cols; ++l) {
            const Complex v = anchor_values[l] * std::pow(anchors[l], m - 1);
            M(m - 1, static_cast<Eigen::Index>(l)) = v;
            row_max = std::max(row_max, std::abs(v));
        }
        if (row_max > 0.0) M.row(m - 1) /= row_max;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smax > 0.0)) {
        // f vanishes at every anchor: any unit vector works.
        std::vector<Complex> b(cols, Complex(0.0, 0.0));
        b[0] = 1.0;
        return b;
    }
    if (smin > 1e-8 * smax) throw Error("boost system has no numerical null space");
    const Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
    std::vector<Complex> b(v.data(), v.data() + v.size());
    const double norm = v.norm();
    for (auto& x : b) x /= norm;
    return b;
}

namespace {

void check_anchors(const std::vector<Complex>& anchors) {
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (!std::isfinite(std::abs(anchors[i]))) throw InvalidInput("anchors must be finite");
        for (std::size_t j = i + 1; j < anchors.size(); ++j)
            if (std::abs(anchors[i] - anchors[j]) == 0.0) throw InvalidInput("repeated anchors");
    }
}

struct Recursion {
    std::vector<Complex> a;      // a_1..a_M
    std::vector<double> scales;  // matching absolute scales
};

// a_m = sum_l b_l [ sum_{n=p}^{m-1} c_n z_l^{m-1-n} - f(z_l) z_l^{m-1} ] for m = 1..M.
Recursion recursion(const std::vector<QComplex>& c, int p, const std::vector<QComplex>& fz,
                    const std::vector<Complex>& anchors, const std::vector<Complex>& b, int M) {
    Recursion r;
    r.a.assign(M, Complex(0.0, 0.0));
    r.scales.assign(M, 0.0);
    const int end = p + static_cast<int>(c.size()) - 1;
    for (std::size_t l = 0; l < anchors.size(); ++l) {
        const QComplex bl(b[l]);
        const QComplex zl(anchors[l]);
        const double zabs = std::abs(anchors[l]);
        // q_m = sum_{n=p}^{m-1} c_n z^{m-1-n} - f z^{m-1} obeys q_{m+1} = z q_m + c_m.
        QComplex q = -fz[l];
        double qs = fz[l].abs();
        for (int m = 1; m <= M; ++m) {
            const QComplex term = bl * q;
            r.a[m - 1] += term.to_complex();
            r.scales[m - 1] += std::abs(b[l]) * qs;
            QComplex cm;
            double cabs = 0.0;
            if (m >= p && m <= end) {
                cm = c[static_cast<std::size_t>(m - p)];
                cabs = cm.abs();
            }
            q = zl * q + cm;
            qs = zabs * qs + cabs;
        }
    }
    return r;
}

// a_m = -sum_l b_l f(z_l) z_l^{m-1}, m = 1..p, in extended precision.
std::vector<QComplex> system_residuals(const std::vector<QComplex>& fz, const std::vector<Complex>& anchors,
                                       const std::vector<QComplex>& b, int p) {
    std::vector<QComplex> out;
    for (int m = 1; m <= p; ++m) {
        QComplex acc;
        for (std::size_t l = 0; l < anchors.size(); ++l) {
            QComplex zp(1, 0);
            for (int k = 1; k < m; ++k) zp = zp * QComplex(anchors[l]);
            acc -= b[l] * fz[l] * zp;
        }
        out.push_back(acc);
    }
    return out;
}

// Double-precision combiners leave residuals near 1e-16 of the row scale, which
// dominate g at large |z|. A min-norm correction in extended precision removes them;
// it depends only on the inputs, so stored combiners reproduce the same g.
std::vector<QComplex> refine_combiners(const std::vector<QComplex>& fz, const std::vector<Complex>& anchors,
                                       const std::vector<Complex>& b, int p) {
    const auto cols = static_cast<Eigen::Index>(anchors.size());
    Eigen::MatrixXcd M(p, cols);
    Eigen::VectorXd row_scale(p);
    for (int m = 1; m <= p; ++m) {
        double row_max = 0.0;
        for (Eigen::Index l = 0; l < cols; ++l) {
            const Complex v = fz[static_cast<std::size_t>(l)].to_complex() * std::pow(anchors[l], m - 1);
            M(m - 1, l) = v;
            row_max = std::max(row_max, std::abs(v));
        }
        row_scale(m - 1) = row_max > 0.0 ? 1.0 / row_max : 1.0;
        M.row(m - 1) *= row_scale(m - 1);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    std::vector<QComplex> bq(b.begin(), b.end());
    for (int pass = 0; pass < 2; ++pass) {
        const auto r = system_residuals(fz, anchors, bq, p);  // equals -(M b)
        Eigen::VectorXcd rhs(p);
        for (int m = 0; m < p; ++m) rhs(m) = r[static_cast<std::size_t>(m)].to_complex() * row_scale(m);
        const Eigen::VectorXcd delta = svd.solve(rhs);
        for (Eigen::Index l = 0; l < cols; ++l) bq[static_cast<std::size_t>(l)] += QComplex(delta(l));
    }
    return bq;
}

void check_residuals(const std::vector<Complex>& res, const Recursion& rec, double tol) {
    // Scales come from the same anchor sums as the residuals.
    for (std::size_t m = 0; m < res.size(); ++m) {
        if (std::abs(res[m]) > tol * std::max(1.0, rec.scales[m]))
            throw Error("boost residual a_" + std::to_string(m + 1) + " exceeds tolerance");
    }
}

}  // namespace

BoostedFunction vanishing_boost(const LaurentTail& tail, const std::function<Complex(Complex)>& evaluator,
                                const std::vector<Complex>& anchors, const BoostOptions& options) {
    if (tail.is_zero()) throw InvalidInput("cannot boost the zero function");
    const int p = tail.start_order;
    if (p < 2) throw InvalidInput("boost needs start_order >= 2");
    if (anchors.size() != static_cast<std::size_t>(p) + 1) throw InvalidInput("need exactly p+1 anchors");
    check_anchors(anchors);
    std::vector<Complex> fz;
    for (const auto& z : anchors) {
        const Complex v = evaluator(z);
        if (!std::isfinite(std::abs(v))) throw InvalidInput("anchor on the singular set");
        fz.push_back(v);
    }
    const auto b = boost_combiners(p, fz, anchors);
    std::vector<QComplex> fq(fz.begin(), fz.end());
    std::vector<QComplex> cq(tail.coefficients.begin(), tail.coefficients.end());
    const int M = tail.end_order() + 1;
    const auto rec = recursion(cq, p, fq, anchors, b, M);
    BoostedFunction g;
    g.kind = BoostedFunction::Kind::boost;
    g.anchors = anchors;
    g.combiners = b;
    g.anchor_values = fz;
    g.residuals = to_double(system_residuals(fq, anchors, std::vector<QComplex>(b.begin(), b.end()), p));
    check_residuals(g.residuals, rec, options.residual_tol);
    std::vector<Complex> a = rec.a;
    std::vector<double> scales = rec.scales;
    for (int m = 0; m < p; ++m) a[m] = 0.0;  // annihilated by construction
    g.tail = truncate(normalized_tail(1, a, scales, options.zero_tol), options.extra_orders);
    if (g.tail.is_zero()) throw TrivialBoost("identically-zero result");
    g.evaluator = [evaluator, anchors, b, fz](Complex z) {
        Complex acc(0.0, 0.0);
        const Complex fzz = evaluator(z);
        for (std::size_t l = 0; l < anchors.size(); ++l) acc += b[l] * (fzz - fz[l]) / (z - anchors[l]);
        return acc;
    };
    return g;
}

BoostedFunction apply_boost(const std::shared_ptr<const BoostedFunction>& base, const std::vector<Complex>& anchors,
                            const std::vector<Complex>& combiners, const BoostOptions& options) {
    if (!base) throw InvalidInput("missing base function");
    if (base->tail.is_zero()) throw InvalidInput("cannot boost the zero function");
    const int p = base->tail.start_order;
    if (anchors.size() != static_cast<std::size_t>(p) + 1 || combiners.size() != anchors.size())
        throw InvalidInput("need exactly p+1 anchors and combiners");
    check_anchors(anchors);
    BoostedFunction g;
    g.kind = BoostedFunction::Kind::boost;
    g.base = base;
    g.anchors = anchors;
    g.combiners = combiners;
    std::vector<QComplex> fq;
    for (const auto& z : anchors) {
        const QComplex v = base->nodes ? base->nodes->eval(z) : QComplex(base->evaluator(z));
        fq.push_back(v);
        g.anchor_values.push_back(v.to_complex());
    }
    std::vector<QComplex> cq(base->tail.coefficients.begin(), base->tail.coefficients.end());
    const auto rec = recursion(cq, p, fq, anchors, combiners, base->tail.end_order() + 1);
    const auto bq = base->nodes ? refine_combiners(fq, anchors, combiners, p)
                                : std::vector<QComplex>(combiners.begin(), combiners.end());
    g.residuals = to_double(system_residuals(fq, anchors, bq, p));
    check_residuals(g.residuals, rec, options.residual_tol);

    if (base->nodes) {
        // g is the Cauchy transform of omega_i * beta_i, beta_i = sum_l b_l / (xi_i - z_l).
        auto f = std::make_shared<NodeFunction>();
        f->nodes = base->nodes->nodes;
        f->weights.resize(f->nodes.size());
        NodeFunction ref;
        ref.nodes = f->nodes;
        ref.weights.resize(f->nodes.size());
        for (std::size_t i = 0; i < f->nodes.size(); ++i) {
            QComplex beta;
            double beta_abs = 0.0;
            for (std::size_t l = 0; l < anchors.size(); ++l) {
                beta += bq[l] / (QComplex(f->nodes[i]) - QComplex(anchors[l]));
                beta_abs += std::abs(combiners[l]) / std::abs(f->nodes[i] - anchors[l]);
            }
            f->weights[i] = base->nodes->weights[i] * beta;
            ref.weights[i] = QComplex(Complex(std::abs(base->nodes->weights[i].to_complex()) * beta_abs));
        }
        g.tail = node_tail(*f, options, p + 1, &ref);
        g.evaluator = node_evaluator(f);
        g.nodes = f;
    } else {
        std::vector<Complex> a = rec.a;
        for (int m = 0; m < p; ++m) a[m] = 0.0;
        g.tail = truncate(normalized_tail(1, a, rec.scales, options.zero_tol), options.extra_orders);
        auto eval = base->evaluator;
        auto fz = g.anchor_values;
        g.evaluator = [eval, anchors, combiners, fz](Complex z) {
            Complex acc(0.0, 0.0);
            const Complex fzz = eval(z);
            for (std::size_t l = 0; l < anchors.size(); ++l)
                acc += combiners[l] * (fzz - fz[l]) / (z - anchors[l]);
            return acc;
        };
    }
    if (g.tail.is_zero()) throw TrivialBoost("identically-zero result");
    if (g.tail.start_order <= p)
        throw Error("boost did not raise the vanishing order (p=" + std::to_string(p) + ", got " +
                    std::to_string(g.tail.start_order) + ")");
    return g;
}

BoostedFunction vanishing_boost(const std::shared_ptr<const BoostedFunction>& base, const std::vector<Complex>& anchors,
                                const BoostOptions& options) {
    if (!base) throw InvalidInput("missing base function");
    if (base->tail.is_zero()) throw InvalidInput("cannot boost the zero function");
    const int p = base->tail.start_order;
    if (p < 2) throw InvalidInput("boost needs start_order >= 2");
    if (anchors.size() != static_cast<std::size_t>(p) + 1) throw InvalidInput("need exactly p+1 anchors");
    check_anchors(anchors);
    std::vector<Complex> fz;
    for (const auto& z : anchors) {
        const Complex v = base->nodes ? base->nodes->eval(z).to_complex() : base->evaluator(z);
        if (!std::isfinite(std::abs(v))) throw InvalidInput("anchor on the singular set");
        fz.push_back(v);
    }
    return apply_boost(base, anchors, boost_combiners(p, fz, anchors), options);
}

std::vector<Complex> default_anchors(double radius, std::size_t count, std::uint64_t seed) {
    if (!(radius > 0.0)) throw InvalidInput("anchor radius must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double step = 2.0 * kPi / static_cast<double>(count);
    const double offset = unit(rng) * step;
    std::vector<Complex> out;
    for (std::size_t l = 0; l < count; ++l) out.push_back(std::polar(radius, offset + step * static_cast<double>(l)));
    return out;
}

BoostedFunction area_power(const std::shared_ptr<const BoostedFunction>& area, int j, const BoostOptions& options) {
    if (!area || area->tail.start_order != 1) throw InvalidInput("area function must have order 1");
    if (j < 1) throw InvalidInput("power must be at least 1");
    BoostedFunction out;
    out.kind = BoostedFunction::Kind::area_power;
    out.base = area;
    out.power = j;
    // Cauchy power of the tail, orders j..j+extra.
    const int len = options.extra_orders + 1;
    std::vector<Complex> a(len, Complex(0.0, 0.0));
    for (int i = 0; i < len; ++i) a[i] = area->tail.coefficient(1 + i);
    std::vector<Complex> acc = a;  // tail of area^1, shifted to start at index 0
    for (int step = 1; step < j; ++step) {
        std::vector<Complex> next(len, Complex(0.0, 0.0));
        for (int x = 0; x < len; ++x)
            for (int y = 0; x + y < len; ++y) next[x + y] += acc[x] * a[y];
        acc = std::move(next);
    }
    out.tail.start_order = j;
    out.tail.coefficients = acc;
    auto nodes = area->nodes;
    auto eval = area->evaluator;
    out.evaluator = [nodes, eval, j](Complex z) {
        const Complex v = nodes ? nodes->eval(z).to_complex() : eval(z);
        Complex r(1.0, 0.0);
        for (int i = 0; i < j; ++i) r *= v;
        return r;
    };
    return out;
}

double tail_radius(double anchor_radius) { return std::max(2.0, 1.25 * anchor_radius); }

std::vector<BoostedFunction> boost_sequence(BoostedFunction first, const CompactSet* area_source, double anchor_radius,
                                            std::size_t count, int k, std::uint64_t seed,
                                            const SequenceOptions& options) {
    if (count < 1) throw InvalidInput("count must be at least 1");
    if (first.tail.is_zero()) throw InvalidInput("the first function vanishes identically");
    const double R = tail_radius(anchor_radius);
    std::vector<BoostedFunction> seq;
    first.verdict = weighted_tail_norm(first.tail, k, R);
    seq.push_back(std::move(first));
    auto current = std::make_shared<const BoostedFunction>(seq.back());
    std::shared_ptr<const BoostedFunction> area;
    bool rational = false;
    for (std::size_t j = 1; j < count; ++j) {
        BoostedFunction g;
        bool done = false;
        if (!rational) {
            const std::size_t anchors_needed = static_cast<std::size_t>(current->order()) + 1;
            for (int attempt = 0; attempt < options.max_attempts && !done; ++attempt) {
                const std::uint64_t s = seed * 1000003ULL + j * 7919ULL + static_cast<std::uint64_t>(attempt);
                try {
                    g = vanishing_boost(current, default_anchors(anchor_radius, anchors_needed, s), options.boost);
                    done = true;
                } catch (const TrivialBoost&) {
                }
            }
            if (!done) rational = true;
        }
        if (!done) {
            if (!area_source || geometry::area(*area_source) <= 0.0)
                throw Error("f appears rational and no positive-area component is available");
            if (!area) area = std::make_shared<const BoostedFunction>(area_function(*area_source, options.n_grid));
            g = area_power(area, current->order() + 1, options.boost);
            if (seq.back().kind != BoostedFunction::Kind::area_power) g.note = "f appears rational";
        }
        g.verdict = weighted_tail_norm(g.tail, k, R);
        seq.push_back(g);
        current = std::make_shared<const BoostedFunction>(seq.back());
    }
    return seq;
}

std::vector<BoostedFunction> wiegerinck_sequence(const CompactSet& e1, const CompactSet& e2, std::size_t count, int k,
                                                 std::uint64_t seed, const SequenceOptions& options) {
    if (count < 1) throw InvalidInput("count must be at least 1");
    const auto mu = signed_equilibrium_difference(e1, e2, options.n, options.tol, seed);
    const auto both = CompactSet::union_of({e1, e2});
    const double rho = geometry::bounding_radius(both);
    const CompactSet* area_source = geometry::area(both) > 0.0 ? &both : nullptr;
    return boost_sequence(cauchy_function(mu, options.boost), area_source, 2.0 * std::max(rho, 0.5), count, k, seed,
                          options);
}

ConvergenceVerdict weighted_tail_norm(const LaurentTail& tail, int k, double R) {
    if (!(R > 1.0)) throw InvalidInput("R must exceed 1");
    ConvergenceVerdict v;
    v.note = "closed form";
    if (tail.is_zero()) {
        v.status = ConvergenceVerdict::Status::finite;
        return v;
    }
    // Each term is (1/2) int_0^{1/R^2} t^{l+k} (1+t)^{-2-k} dt after t = 1/r^2.
    const double T = 1.0 / (R * R);
    const double a = -2.0 - static_cast<double>(k);
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i < tail.coefficients.size(); ++i) {
        const double c2 = std::norm(tail.coefficients[i]);
        if (c2 == 0.0) continue;
        const int l = tail.start_order + static_cast<int>(i);
        if (l + k <= -1) {
            v.status = ConvergenceVerdict::Status::divergent;
            v.exponent = 1.0 - 2.0 * l - 2.0 * (2.0 + k);
            v.value = std::numeric_limits<double>::infinity();
            v.note = "order " + std::to_string(l) + " term diverges";
            return v;
        }
        double binom = 1.0;
        double sum = 0.0;
        double last = 0.0;
        for (int j = 0; j < 4000; ++j) {
            const double e = static_cast<double>(l + k + j + 1);
            last = binom * std::pow(T, e) / e;
            sum += last;
            binom *= (a - j) / (j + 1.0);
            if (binom == 0.0 || (j > 0 && std::abs(last) < 1e-17 * std::abs(sum))) break;
        }
        value += c2 * 0.5 * sum;
        error += c2 * 0.5 * (std::abs(last) * T / (1.0 - T) + 1e-15 * std::abs(sum));
    }
    v.status = ConvergenceVerdict::Status::finite;
    v.value = 2.0 * kPi * value;
    v.error = 2.0 * kPi * error;
    v.exponent = 1.0 - 2.0 * tail.start_order - 2.0 * (2.0 + k);
    return v;
}

}  // namespace capstone::cauchy
