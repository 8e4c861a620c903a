#include "capstone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace capstone::geometry {

namespace {

// Jitter amplitude as a fraction of the nominal cell width.
constexpr double kJitter = 0.01;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(Complex a, Complex b, Complex z) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? ((z - a) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

bool on_segment(Complex a, Complex b, Complex p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

int orientation(Complex a, Complex b, Complex c) {
    const double v = cross(b - a, c - a);
    const double scale = std::abs(b - a) * std::abs(c - a);
    if (std::abs(v) <= 1e-14 * scale) return 0;
    return v > 0 ? 1 : -1;
}

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

bool polygon_inside(const Polygon& poly, Complex z) {
    // Crossing-number test; boundary points are handled by the distance test.
    bool inside = false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].imag() > z.imag()) != (v[j].imag() > z.imag())) {
            const double x = (v[j].real() - v[i].real()) * (z.imag() - v[i].imag()) /
                                 (v[j].imag() - v[i].imag()) +
                             v[i].real();
            if (z.real() < x) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const Polygon& poly, Complex z) {
    double best = std::numeric_limits<double>::infinity();
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        best = std::min(best, segment_distance(v[i], v[(i + 1) % v.size()], z));
    }
    return best;
}

double polygon_perimeter(const Polygon& poly) {
    double total = 0.0;
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        total += std::abs(poly.vertices[(i + 1) % poly.vertices.size()] - poly.vertices[i]);
    }
    return total;
}

Complex polygon_at(const Polygon& poly, double t) {
    const double perimeter = polygon_perimeter(poly);
    double s = (t - std::floor(t)) * perimeter;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i];
        const Complex b = v[(i + 1) % v.size()];
        const double len = std::abs(b - a);
        if (s <= len || i + 1 == v.size()) return a + (b - a) * std::min(1.0, s / len);
        s -= len;
    }
    return v.front();
}

double polygon_signed_area(const Polygon& poly) {
    double a = 0.0;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

// Interior (away from the boundary) of a two-dimensional member.
bool strictly_inside(const CompactSet& spec, Complex z, double margin) {
    return std::visit(overloaded{
                          [&](const Disc& d) { return std::abs(z - d.center) < d.radius - margin; },
                          [&](const Polygon& p) {
                              return polygon_inside(p, z) && polygon_boundary_distance(p, z) > margin;
                          },
                          [](const auto&) { return false; },
                      },
                      spec.shape);
}

bool is_continuum(const CompactSet& spec) {
    return !std::holds_alternative<PointSet>(spec.shape) && !std::holds_alternative<Union>(spec.shape);
}

void flatten(const CompactSet& spec, std::vector<const CompactSet*>& out) {
    if (const auto* u = std::get_if<Union>(&spec.shape)) {
        for (const auto& child : u->children) flatten(child, out);
    } else {
        out.push_back(&spec);
    }
}

double member_length(const CompactSet& spec) {
    return std::visit(overloaded{
                          [](const Disc& d) { return 2.0 * kPi * d.radius; },
                          [](const Segment& s) { return std::abs(s.b - s.a); },
                          [](const Polygon& p) { return polygon_perimeter(p); },
                          [](const auto&) { return 0.0; },
                      },
                      spec.shape);
}

Complex member_at(const CompactSet& spec, double t) {
    return std::visit(overloaded{
                          [&](const Disc& d) { return d.center + std::polar(d.radius, 2.0 * kPi * t); },
                          [&](const Segment& s) { return s.a + (s.b - s.a) * t; },
                          [&](const Polygon& p) { return polygon_at(p, t); },
                          [](const auto&) -> Complex { throw InvalidInput("not a curve"); },
                      },
                      spec.shape);
}

struct CurveSample {
    std::vector<double> params;
    std::vector<Complex> points;
    std::vector<double> cells;
};

// Seeded quasi-uniform parameters on one curve: cell midpoints plus jitter,
// rotated by a random offset for closed curves.
CurveSample sample_curve(const CompactSet& member, std::size_t count, std::mt19937_64& rng) {
    CurveSample out;
    if (count == 0) return out;
    const bool closed = !std::holds_alternative<Segment>(member.shape);
    const double length = member_length(member);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double offset = closed ? unit(rng) / static_cast<double>(count) : 0.0;
    out.params.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double jitter = kJitter * (unit(rng) - 0.5);
        out.params[k] = (static_cast<double>(k) + 0.5 + jitter) / static_cast<double>(count) + offset;
    }
    out.cells.resize(count);
    const double n = static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (closed) {
            const double prev = k == 0 ? out.params[count - 1] - 1.0 : out.params[k - 1];
            const double next = k + 1 == count ? out.params[0] + 1.0 : out.params[k + 1];
            out.cells[k] = count == 1 ? length : 0.5 * (next - prev) * length;
        } else {
            const double lo = k == 0 ? 0.0 : 0.5 * (out.params[k - 1] + out.params[k]);
            const double hi = k + 1 == count ? 1.0 : 0.5 * (out.params[k] + out.params[k + 1]);
            out.cells[k] = (hi - lo) * length;
        }
    }
    (void)n;
    out.points.reserve(count);
    for (double t : out.params) out.points.push_back(member_at(member, t));
    return out;
}

bool exposed(const std::vector<const CompactSet*>& members, std::size_t self, Complex z, double margin) {
    for (std::size_t j = 0; j < members.size(); ++j) {
        if (j != self && strictly_inside(*members[j], z, margin)) return false;
    }
    return true;
}

// Largest-remainder apportionment of n among nonnegative weights.
std::vector<std::size_t> apportion(std::size_t n, const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> counts(weights.size(), 0);
    if (total <= 0.0) return counts;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t used = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(n) * weights[i] / total;
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        used += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; used < n; ++r, ++used) ++counts[remainders[r % remainders.size()].second];
    return counts;
}

double min_separation(const std::vector<Complex>& pts) {
    if (pts.size() < 2) return std::numeric_limits<double>::infinity();
    std::vector<Complex> sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](Complex a, Complex b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size() && sorted[j].real() - sorted[i].real() < best; ++j) {
            best = std::min(best, std::abs(sorted[j] - sorted[i]));
        }
    }
    return best;
}

SupportSample sample_atoms(const std::vector<const CompactSet*>& members, std::size_t n, std::mt19937_64& rng) {
    std::vector<Complex> all;
    for (const auto* m : members) {
        const auto& pts = std::get<PointSet>(m->shape).points;
        all.insert(all.end(), pts.begin(), pts.end());
    }
    if (n > all.size()) {
        throw InvalidInput("requested " + std::to_string(n) + " points from a point set of cardinality " +
                           std::to_string(all.size()));
    }
    std::vector<std::size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    SupportSample out;
    for (std::size_t i : idx) out.points.push_back(all[i]);
    out.cell_lengths.assign(n, 0.0);
    return out;
}

}  // namespace

std::string to_string(ConvergenceVerdict::Status status);

Complex BoundaryPiece::at(double t) const { return member_at(source, t); }

const CompactSet& validate(const CompactSet& spec) {
    std::visit(overloaded{
                   [](const Disc& d) {
                       if (!(d.radius > 0.0) || !std::isfinite(d.radius)) throw InvalidInput("radius must be positive");
                       if (!std::isfinite(d.center.real()) || !std::isfinite(d.center.imag()))
                           throw InvalidInput("disc center must be finite");
                   },
                   [](const Segment& s) {
                       if (!(std::abs(s.b - s.a) > 0.0)) throw InvalidInput("degenerate segment");
                       if (!std::isfinite(std::abs(s.a)) || !std::isfinite(std::abs(s.b)))
                           throw InvalidInput("segment endpoints must be finite");
                   },
                   [](const Polygon& p) {
                       const auto& v = p.vertices;
                       if (v.size() < 3) throw InvalidInput("polygon needs at least 3 vertices");
                       for (std::size_t i = 0; i < v.size(); ++i) {
                           if (!std::isfinite(std::abs(v[i]))) throw InvalidInput("polygon vertices must be finite");
                           if (std::abs(v[(i + 1) % v.size()] - v[i]) == 0.0)
                               throw InvalidInput("polygon has a repeated vertex");
                       }
                       if (std::abs(polygon_signed_area(p)) == 0.0) throw InvalidInput("polygon has zero area");
                       const std::size_t m = v.size();
                       for (std::size_t i = 0; i < m; ++i) {
                           for (std::size_t j = i + 1; j < m; ++j) {
                               const bool adjacent = j == i + 1 || (i == 0 && j == m - 1);
                               if (adjacent) continue;
                               if (segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]))
                                   throw InvalidInput("polygon boundary self-intersects");
                           }
                       }
                   },
                   [](const PointSet& ps) {
                       if (ps.points.empty()) throw InvalidInput("empty point set");
                       for (const auto& z : ps.points)
                           if (!std::isfinite(std::abs(z))) throw InvalidInput("points must be finite");
                       if (min_separation(ps.points) == 0.0) throw InvalidInput("point set has repeated points");
                   },
                   [](const Union& u) {
                       if (u.children.empty()) throw InvalidInput("empty union");
                       for (const auto& child : u.children) validate(child);
                   },
               },
               spec.shape);
    return spec;
}

bool is_atomic(const CompactSet& spec) {
    std::vector<const CompactSet*> members;
    flatten(spec, members);
    return std::none_of(members.begin(), members.end(), [](const CompactSet* m) { return is_continuum(*m); });
}

SupportSample discretize(const CompactSet& spec, std::size_t n, std::uint64_t seed) {
    validate(spec);
    if (n == 0) throw InvalidInput("n must be at least 1");
    std::mt19937_64 rng(seed);
    std::vector<const CompactSet*> members;
    flatten(spec, members);

    std::vector<const CompactSet*> curves;
    std::vector<const CompactSet*> atoms;
    for (const auto* m : members) (is_continuum(*m) ? curves : atoms).push_back(m);

    SupportSample out;
    if (curves.empty()) {
        out = sample_atoms(atoms, n, rng);
    } else {
        const double scale = std::max(1.0, bounding_radius(spec));
        const double margin = 1e-12 * scale;
        // Fraction of each curve that is not buried inside another member.
        std::vector<double> fraction(curves.size(), 1.0);
        if (curves.size() > 1) {
            for (std::size_t i = 0; i < curves.size(); ++i) {
                constexpr std::size_t pilot = 512;
                std::size_t hit = 0;
                for (std::size_t k = 0; k < pilot; ++k) {
                    const double t = (static_cast<double>(k) + 0.5) / pilot;
                    if (exposed(curves, i, member_at(*curves[i], t), margin)) ++hit;
                }
                fraction[i] = static_cast<double>(hit) / pilot;
            }
        }
        std::vector<double> weights(curves.size());
        for (std::size_t i = 0; i < curves.size(); ++i) weights[i] = member_length(*curves[i]) * fraction[i];
        const auto counts = apportion(n, weights);
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const std::size_t want = counts[i];
            if (want == 0) continue;
            if (fraction[i] >= 1.0) {
                auto s = sample_curve(*curves[i], want, rng);
                out.points.insert(out.points.end(), s.points.begin(), s.points.end());
                out.cell_lengths.insert(out.cell_lengths.end(), s.cells.begin(), s.cells.end());
                continue;
            }
            const double nominal = weights[i] / static_cast<double>(want);
            std::size_t trial = static_cast<std::size_t>(std::ceil(want / std::max(fraction[i], 1e-3))) + 4;
            for (int attempt = 0;; ++attempt) {
                auto s = sample_curve(*curves[i], trial, rng);
                std::vector<std::size_t> keep;
                for (std::size_t k = 0; k < s.points.size(); ++k)
                    if (exposed(curves, i, s.points[k], margin)) keep.push_back(k);
                if (keep.size() >= want) {
                    for (std::size_t r = 0; r < want; ++r) {
                        const std::size_t k = keep[r * keep.size() / want];
                        out.points.push_back(s.points[k]);
                        out.cell_lengths.push_back(nominal);
                    }
                    break;
                }
                if (attempt > 20) throw InvalidInput("could not sample the exposed boundary of a union member");
                trial = trial * 3 / 2 + 1;
            }
        }
    }
    out.min_separation = min_separation(out.points);
    if (out.min_separation == 0.0) throw InvalidInput("sampled points coincide; union members overlap");
    return out;
}

std::vector<Complex> sample_support(const CompactSet& spec, std::size_t n, std::uint64_t seed) {
    return discretize(spec, n, seed).points;
}

double distance(const CompactSet& spec, Complex z) {
    return std::visit(overloaded{
                          [&](const Disc& d) { return std::max(0.0, std::abs(z - d.center) - d.radius); },
                          [&](const Segment& s) { return segment_distance(s.a, s.b, z); },
                          [&](const Polygon& p) { return polygon_inside(p, z) ? 0.0 : polygon_boundary_distance(p, z); },
                          [&](const PointSet& ps) {
                              double best = std::numeric_limits<double>::infinity();
                              for (const auto& q : ps.points) best = std::min(best, std::abs(z - q));
                              return best;
                          },
                          [&](const Union& u) {
                              double best = std::numeric_limits<double>::infinity();
                              for (const auto& c : u.children) best = std::min(best, distance(c, z));
                              return best;
                          },
                      },
                      spec.shape);
}

bool contains(const CompactSet& spec, Complex z, double tol) { return distance(spec, z) <= tol; }

double area(const CompactSet& spec) {
    return std::visit(overloaded{
                          [](const Disc& d) { return kPi * d.radius * d.radius; },
                          [](const Polygon& p) { return std::abs(polygon_signed_area(p)); },
                          [](const Union& u) {
                              double a = 0.0;
                              for (const auto& c : u.children) a += area(c);
                              return a;
                          },
                          [](const auto&) { return 0.0; },
                      },
                      spec.shape);
}

double boundary_length(const CompactSet& spec) {
    std::vector<const CompactSet*> members;
    flatten(spec, members);
    double total = 0.0;
    for (const auto* m : members) total += member_length(*m);
    return total;
}

double bounding_radius(const CompactSet& spec) {
    return std::visit(overloaded{
                          [](const Disc& d) { return std::abs(d.center) + d.radius; },
                          [](const Segment& s) { return std::max(std::abs(s.a), std::abs(s.b)); },
                          [](const Polygon& p) {
                              double r = 0.0;
                              for (const auto& v : p.vertices) r = std::max(r, std::abs(v));
                              return r;
                          },
                          [](const PointSet& ps) {
                              double r = 0.0;
                              for (const auto& v : ps.points) r = std::max(r, std::abs(v));
                              return r;
                          },
                          [](const Union& u) {
                              double r = 0.0;
                              for (const auto& c : u.children) r = std::max(r, bounding_radius(c));
                              return r;
                          },
                      },
                      spec.shape);
}

double diameter(const CompactSet& spec) {
    // Extreme points of every member: discs contribute (center, radius),
    // everything else contributes vertices with radius 0.
    std::vector<std::pair<Complex, double>> extremes;
    std::vector<const CompactSet*> members;
    flatten(spec, members);
    for (const auto* m : members) {
        std::visit(overloaded{
                       [&](const Disc& d) { extremes.emplace_back(d.center, d.radius); },
                       [&](const Segment& s) {
                           extremes.emplace_back(s.a, 0.0);
                           extremes.emplace_back(s.b, 0.0);
                       },
                       [&](const Polygon& p) {
                           for (const auto& v : p.vertices) extremes.emplace_back(v, 0.0);
                       },
                       [&](const PointSet& ps) {
                           for (const auto& v : ps.points) extremes.emplace_back(v, 0.0);
                       },
                       [](const Union&) {},
                   },
                   m->shape);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < extremes.size(); ++i) {
        best = std::max(best, 2.0 * extremes[i].second);
        for (std::size_t j = i + 1; j < extremes.size(); ++j) {
            best = std::max(best, std::abs(extremes[i].first - extremes[j].first) + extremes[i].second +
                                      extremes[j].second);
        }
    }
    return best;
}

std::vector<BoundaryPiece> boundary_pieces(const CompactSet& spec) {
    validate(spec);
    std::vector<const CompactSet*> members;
    flatten(spec, members);
    std::vector<BoundaryPiece> pieces;
    for (const auto* m : members) {
        BoundaryPiece piece{BoundaryPiece::Kind::atoms, {}, *m, member_length(*m)};
        if (const auto* ps = std::get_if<PointSet>(&m->shape)) {
            piece.atoms = ps->points;
        } else {
            piece.kind = std::holds_alternative<Segment>(m->shape) ? BoundaryPiece::Kind::open_curve
                                                                   : BoundaryPiece::Kind::closed_curve;
        }
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

}  // namespace capstone::geometry

namespace capstone {

std::string to_string(ConvergenceVerdict::Status status) {
    switch (status) {
        case ConvergenceVerdict::Status::finite: return "finite";
        case ConvergenceVerdict::Status::divergent: return "divergent";
        case ConvergenceVerdict::Status::undecided: return "undecided";
    }
    return "undecided";
}

}  // namespace capstone
