#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "capstone/types.hpp"

namespace capstone::geometry {

struct Disc {
    Complex center;
    double radius = 0.0;
};

struct Segment {
    Complex a;
    Complex b;
};

struct Polygon {
    std::vector<Complex> vertices;
};

struct PointSet {
    std::vector<Complex> points;
};

struct CompactSet;

struct Union {
    std::vector<CompactSet> children;
};

/// Declarative compact subset of the plane.
///
/// Discs are closed, polygons are the closed region bounded by the vertex
/// loop, unions are finite. Cantor-like sets are written as nested unions of
/// segments.
struct CompactSet {
    std::variant<Disc, Segment, Polygon, PointSet, Union> shape;

    static CompactSet disc(Complex center, double radius) { return {Disc{center, radius}}; }
    static CompactSet segment(Complex a, Complex b) { return {Segment{a, b}}; }
    static CompactSet polygon(std::vector<Complex> vertices) { return {Polygon{std::move(vertices)}}; }
    static CompactSet point_set(std::vector<Complex> points) { return {PointSet{std::move(points)}}; }
    static CompactSet union_of(std::vector<CompactSet> children) { return {Union{std::move(children)}}; }
};

/// A point (z, w) of the affine chart of the projective plane.
struct PlanePoint2 {
    Complex z;
    Complex w;
};

/// Returns `spec` unchanged when every invariant holds, throws InvalidInput otherwise.
const CompactSet& validate(const CompactSet& spec);

/// Discretization of a set: points, the arc length each point stands for
/// (zero for isolated points), and the smallest pairwise distance.
struct SupportSample {
    std::vector<Complex> points;
    std::vector<double> cell_lengths;
    double min_separation = 0.0;

    bool atomic(std::size_t i) const { return cell_lengths[i] == 0.0; }
};

/// Quasi-uniform seeded discretization of where the equilibrium measure lives:
/// boundaries of discs and polygons, the segments themselves, and the points of
/// point sets. Isolated points are only used when the set has no continuum part.
SupportSample discretize(const CompactSet& spec, std::size_t n, std::uint64_t seed);

std::vector<Complex> sample_support(const CompactSet& spec, std::size_t n, std::uint64_t seed);

double distance(const CompactSet& spec, Complex z);

bool contains(const CompactSet& spec, Complex z, double tol);

/// True when the set is a finite collection of points.
bool is_atomic(const CompactSet& spec);

/// Lebesgue measure of the set (overlapping union members are counted twice).
double area(const CompactSet& spec);

/// Total length of the boundary curves and segments.
double boundary_length(const CompactSet& spec);

/// max |z| over the set.
double bounding_radius(const CompactSet& spec);

/// Exact diameter max |z - w|.
double diameter(const CompactSet& spec);

/// A piece of the set's outer boundary, parametrized by t in [0, 1].
struct BoundaryPiece {
    enum class Kind { closed_curve, open_curve, atoms };
    Kind kind;
    std::vector<Complex> atoms;
    CompactSet source;
    double length = 0.0;

    Complex at(double t) const;
};

std::vector<BoundaryPiece> boundary_pieces(const CompactSet& spec);

}  // namespace capstone::geometry
