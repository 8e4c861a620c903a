#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "json.hpp"

#include "capstone/bergman_p1.hpp"
#include "capstone/bergman_p2.hpp"
#include "capstone/cauchy.hpp"
#include "capstone/geometry.hpp"
#include "capstone/potential.hpp"
#include "capstone/types.hpp"

namespace capstone::json_io {

using Json = nlohmann::json;

/// Non-finite values become the strings "inf", "-inf" and "nan".
Json number(double x);
double number_from(const Json& j, const char* field);

Json to_json(Complex z);
Complex complex_from(const Json& j, const char* field);

/// {"type":"disc","center":[re,im],"radius":r} and the segment, polygon,
/// point_set and union forms. Errors name the offending field.
Json to_json(const geometry::CompactSet& s);
geometry::CompactSet compact_set_from(const Json& j);

Json to_json(const potential::DiscreteMeasure& m);
potential::DiscreteMeasure measure_from(const Json& j);

Json to_json(const potential::PolarityVerdict& v);
Json to_json(const ConvergenceVerdict& v);
Json to_json(const cauchy::LaurentTail& t);
cauchy::LaurentTail tail_from(const Json& j);

Json to_json(const cauchy::SignedMeasure& mu);
cauchy::SignedMeasure signed_measure_from(const Json& j);

/// anchors, combiners, tail, residuals and verdict of one member.
Json to_json(const cauchy::BoostedFunction& f);

/// A whole sequence plus what is needed to rebuild it: the signed measure of
/// the first member and, when the rational fallback was used, its area source.
struct SequenceRecipe {
    cauchy::SignedMeasure first;
    std::optional<geometry::CompactSet> area_source;
    std::size_t n_grid = 64;
    int k = 0;
    double tail_radius = 2.0;
};

Json sequence_to_json(const SequenceRecipe& recipe, const std::vector<cauchy::BoostedFunction>& seq);

/// Replays the stored combiners (no solves) and recomputes each verdict.
std::vector<cauchy::BoostedFunction> sequence_from_json(const Json& j);

Json to_json(const bergman_p1::Dimension& d);
Json to_json(const bergman_p1::DimensionReport& r);
Json to_json(const bergman_p1::RieszMass& m);
Json to_json(const bergman_p1::WitnessReport& r);

Json to_json(const bergman_p2::MonomialIndex& i);

}  // namespace capstone::json_io
