#include "capstone/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "capstone/parallel.hpp"

namespace capstone::potential {

using geometry::CompactSet;

DiscreteMeasure DiscreteMeasure::from_weights(std::vector<Complex> support, std::vector<double> weights) {
    DiscreteMeasure m;
    m.support = std::move(support);
    m.weights = std::move(weights);
    m.mass = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    check(m);
    return m;
}

void check(const DiscreteMeasure& m) {
    if (m.support.size() != m.weights.size()) throw InvalidInput("support and weights differ in length");
    double total = 0.0;
    for (double w : m.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be finite and nonnegative");
        total += w;
    }
    if (std::abs(total - m.mass) > 1e-12 * std::max(1.0, std::abs(m.mass)))
        throw InvalidInput("mass does not match the sum of weights");
    std::vector<Complex> pts = m.support;
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) throw InvalidInput("coincident support points");
}

double log_energy(const DiscreteMeasure& m) {
    check(m);
    const std::size_t n = m.size();
    // Rows are independent; summed afterwards in a fixed order for determinism.
    std::vector<double> rows(n, 0.0);
    parallel_for(0, n, [&](std::size_t i) {
        double acc = 0.0;
        if (m.weights[i] == 0.0) return;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || m.weights[j] == 0.0) continue;
            acc += m.weights[j] * std::log(std::abs(m.support[i] - m.support[j]));
        }
        rows[i] = m.weights[i] * acc;
    });
    return std::accumulate(rows.begin(), rows.end(), 0.0);
}

double potential_eval(const DiscreteMeasure& m, Complex z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.weights[i] == 0.0) continue;
        const double d = std::abs(z - m.support[i]);
        if (d == 0.0) return -std::numeric_limits<double>::infinity();
        acc += m.weights[i] * std::log(d);
    }
    return acc;
}

EquilibriumSolution solve_equilibrium(const CompactSet& spec, std::size_t n, double tol, std::uint64_t seed,
                                      std::size_t max_iter) {
    geometry::validate(spec);
    if (geometry::is_atomic(spec)) throw InvalidInput("polar input: a finite point set has no equilibrium measure");
    if (n < 2) throw InvalidInput("n must be at least 2");
    if (!(tol > 0.0)) throw InvalidInput("tol must be positive");

    const auto sample = geometry::discretize(spec, n, seed);
    const auto& z = sample.points;
    Eigen::MatrixXd A(n, n);
    parallel_for(0, n, [&](std::size_t j) {
        for (std::size_t i = 0; i < n; ++i) {
            A(i, j) = i == j ? std::log(sample.cell_lengths[i]) - 1.5 : std::log(std::abs(z[i] - z[j]));
        }
    });

    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd Aw = A * w;
    double energy = w.dot(Aw);
    const double slack = 1e-13 * (1.0 + std::abs(energy));

    EquilibriumSolution sol;
    std::size_t it = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (;; ++it) {
        Eigen::Index s = 0;
        Aw.maxCoeff(&s);
        Eigen::Index a = -1;
        double lo = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            if (w[i] > 0.0 && Aw[i] < lo) {
                lo = Aw[i];
                a = i;
            }
        }
        gap = Aw[s] - lo;
        if (gap < tol) break;
        if (it >= max_iter) {
            throw ConvergenceError("equilibrium solver: gap " + std::to_string(gap) + " after " +
                                   std::to_string(it) + " iterations");
        }
        const double kappa = A(s, s) + A(a, a) - 2.0 * A(s, a);
        double gamma = w[a];
        if (kappa < 0.0) gamma = std::min(w[a], -gap / kappa);
        w[s] += gamma;
        if (gamma == w[a]) {
            w[a] = 0.0;
        } else {
            w[a] -= gamma;
        }
        Aw += gamma * (A.col(s) - A.col(a));
        const double next = energy + 2.0 * gamma * gap + gamma * gamma * kappa;
        if (next < energy - slack) throw Error("equilibrium solver: energy decreased");
        energy = next;
        if ((it + 1) % 4096 == 0) {
            // Drift control for the incremental update.
            Aw = A * w;
            const double exact = w.dot(Aw);
            if (exact < energy - 1e3 * slack) throw Error("equilibrium solver: energy decreased");
            energy = exact;
        }
    }
    Aw = A * w;
    sol.energy = w.dot(Aw);
    sol.gap = gap;
    sol.iterations = it;
    sol.min_separation = sample.min_separation;
    sol.cell_lengths = sample.cell_lengths;
    std::vector<double> weights(w.data(), w.data() + w.size());
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& x : weights) x /= total;
    sol.measure = DiscreteMeasure::from_weights(z, std::move(weights));
    sol.support_potential.assign(Aw.data(), Aw.data() + Aw.size());
    sol.active = static_cast<std::size_t>(std::count_if(sol.measure.weights.begin(), sol.measure.weights.end(),
                                                        [](double x) { return x > 0.0; }));
    return sol;
}

DiscreteMeasure equilibrium_measure(const CompactSet& spec, std::size_t n, double tol, std::uint64_t seed) {
    return solve_equilibrium(spec, n, tol, seed).measure;
}

double capacity(const CompactSet& spec, std::size_t n, double tol, std::uint64_t seed) {
    geometry::validate(spec);
    if (geometry::is_atomic(spec)) return 0.0;
    return std::exp(solve_equilibrium(spec, n, tol, seed).energy);
}

namespace {

struct Slot {
    std::size_t piece = 0;
    double t = 0.0;  // curve parameter, or atom index for atom pieces
    Complex z;
};

double interaction(const std::vector<Slot>& slots, std::size_t skip, Complex x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        if (j == skip) continue;
        const double d = std::abs(x - slots[j].z);
        if (d == 0.0) return -std::numeric_limits<double>::infinity();
        acc += std::log(d);
    }
    return acc;
}

double total_log_product(const std::vector<Slot>& slots) {
    double acc = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i)
        for (std::size_t j = i + 1; j < slots.size(); ++j) acc += std::log(std::abs(slots[i].z - slots[j].z));
    return acc;
}

}  // namespace

FeketeResult fekete_points(const CompactSet& spec, std::size_t n, std::uint64_t seed, std::size_t max_sweeps) {
    geometry::validate(spec);
    if (n < 2) throw InvalidInput("n must be at least 2");
    const auto pieces = geometry::boundary_pieces(spec);
    std::vector<std::size_t> curves;
    std::vector<std::size_t> atom_pieces;
    double total_length = 0.0;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (pieces[p].kind == geometry::BoundaryPiece::Kind::atoms) {
            atom_pieces.push_back(p);
        } else {
            curves.push_back(p);
            total_length += pieces[p].length;
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Slot> slots;
    if (curves.empty()) {
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t p : atom_pieces)
            for (std::size_t k = 0; k < pieces[p].atoms.size(); ++k) all.emplace_back(p, k);
        if (n > all.size()) throw InvalidInput("n exceeds the number of points in the set");
        std::shuffle(all.begin(), all.end(), rng);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [p, k] = all[i];
            slots.push_back({p, static_cast<double>(k), pieces[p].atoms[k]});
        }
    } else {
        // Spread the starting points over the curves by length.
        std::size_t placed = 0;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            const auto& piece = pieces[curves[c]];
            std::size_t count = c + 1 == curves.size()
                                    ? n - placed
                                    : static_cast<std::size_t>(std::llround(n * piece.length / total_length));
            count = std::min(count, n - placed);
            const double offset = unit(rng);
            for (std::size_t k = 0; k < count; ++k) {
                double t = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
                if (piece.kind == geometry::BoundaryPiece::Kind::closed_curve) t = std::fmod(t + offset, 1.0);
                slots.push_back({curves[c], t, piece.at(t)});
            }
            placed += count;
        }
    }

    FeketeResult result;
    const std::size_t scan = std::max<std::size_t>(64, 8 * n);
    double current = total_log_product(slots);
    std::size_t sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        const double before = current;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            Slot best = slots[i];
            double best_val = interaction(slots, i, slots[i].z);
            for (std::size_t c : curves) {
                const auto& piece = pieces[c];
                const bool closed = piece.kind == geometry::BoundaryPiece::Kind::closed_curve;
                double t_best = 0.0;
                double v_best = -std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k <= scan; ++k) {
                    const double t = static_cast<double>(k) / static_cast<double>(scan);
                    const double v = interaction(slots, i, piece.at(t));
                    if (v > v_best) {
                        v_best = v;
                        t_best = t;
                    }
                }
                const double h = 1.0 / static_cast<double>(scan);
                double lo = t_best - h;
                double hi = t_best + h;
                if (!closed) {
                    lo = std::max(0.0, lo);
                    hi = std::min(1.0, hi);
                }
                auto neg = [&](double t) {
                    const double tt = closed ? t - std::floor(t) : t;
                    return -interaction(slots, i, piece.at(tt));
                };
                const auto [t_opt, f_opt] = boost::math::tools::brent_find_minima(neg, lo, hi, 52);
                double t_fin = t_opt;
                double v_fin = -f_opt;
                if (v_best > v_fin) {
                    t_fin = t_best;
                    v_fin = v_best;
                }
                if (closed) t_fin -= std::floor(t_fin);
                if (v_fin > best_val) {
                    best_val = v_fin;
                    best = {c, t_fin, piece.at(t_fin)};
                }
            }
            for (std::size_t p : atom_pieces) {
                for (std::size_t k = 0; k < pieces[p].atoms.size(); ++k) {
                    const double v = interaction(slots, i, pieces[p].atoms[k]);
                    if (v > best_val) {
                        best_val = v;
                        best = {p, static_cast<double>(k), pieces[p].atoms[k]};
                    }
                }
            }
            slots[i] = best;
        }
        current = total_log_product(slots);
        if (current - before <= 1e-13 * std::max(1.0, std::abs(current))) break;
    }
    if (sweep == max_sweeps) throw ConvergenceError("fekete_points: coordinate ascent did not settle");

    result.sweeps = sweep + 1;
    for (const auto& s : slots) result.points.push_back(s.z);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    result.diameter = std::exp(current / pairs);
    return result;
}

double fekete_diameter(const CompactSet& spec, std::size_t n, std::uint64_t seed) {
    geometry::validate(spec);
    if (n < 2) throw InvalidInput("n must be at least 2");
    if (n == 2) return geometry::diameter(spec);
    return fekete_points(spec, n, seed).diameter;
}

std::string to_string(PolarityVerdict::Classification c) {
    switch (c) {
        case PolarityVerdict::Classification::polar: return "polar";
        case PolarityVerdict::Classification::nonpolar: return "nonpolar";
        case PolarityVerdict::Classification::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

PolarityVerdict classify_polarity(const CompactSet& spec, const PolarityOptions& options) {
    geometry::validate(spec);
    if (!(options.threshold > 0.0)) throw InvalidInput("threshold must be positive");
    if (options.schedule.empty()) throw InvalidInput("empty n-schedule");
    PolarityVerdict v;
    v.threshold = options.threshold;
    v.schedule = options.schedule;
    using C = PolarityVerdict::Classification;
    if (geometry::is_atomic(spec)) {
        v.sequence.assign(options.schedule.size(), 0.0);
        v.capacity_estimate = 0.0;
        v.classification = C::polar;
        v.note = "finite point set";
        return v;
    }
    for (std::size_t n : options.schedule) {
        try {
            v.sequence.push_back(capacity(spec, n, options.tol, options.seed));
        } catch (const ConvergenceError& e) {
            v.note = e.what();
            v.classification = C::inconclusive;
            v.capacity_estimate = v.sequence.empty() ? 0.0 : v.sequence.back();
            return v;
        }
    }
    v.capacity_estimate = v.sequence.back();
    const std::size_t m = v.sequence.size();
    bool nonincreasing = true;
    for (std::size_t i = 1; i < m; ++i) nonincreasing = nonincreasing && v.sequence[i] <= 1.05 * v.sequence[i - 1];
    const bool stable = m < 2 || std::abs(v.sequence[m - 1] - v.sequence[m - 2]) <= 0.05 * v.sequence[m - 1];
    if (v.capacity_estimate < options.threshold && nonincreasing) {
        v.classification = C::polar;
    } else if (v.capacity_estimate >= options.threshold && stable) {
        v.classification = C::nonpolar;
    } else {
        v.classification = C::inconclusive;
        v.note = "capacity estimates did not settle";
    }
    return v;
}

}  // namespace capstone::potential
