#include "capstone/json_io.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace capstone::json_io {

using geometry::CompactSet;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw InvalidInput("field '" + field + "': " + why);
}

const Json& require(const Json& j, const char* field) {
    if (!j.is_object()) bad(field, "expected an object around it");
    auto it = j.find(field);
    if (it == j.end()) bad(field, "missing");
    return *it;
}

void only_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) bad(it.key(), "unexpected in " + where);
    }
}

std::vector<Complex> complex_list(const Json& j, const char* field) {
    if (!j.is_array()) bad(field, "expected an array of [re, im] pairs");
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from(e, field));
    return out;
}

Json complex_list(const std::vector<Complex>& zs) {
    Json a = Json::array();
    for (auto z : zs) a.push_back(to_json(z));
    return a;
}

Json number_list(const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(number(x));
    return a;
}

}  // namespace

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from(const Json& j, const char* field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    bad(field, "expected a number");
}

Json to_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Complex complex_from(const Json& j, const char* field) {
    if (!j.is_array() || j.size() != 2) bad(field, "expected [re, im]");
    return {number_from(j[0], field), number_from(j[1], field)};
}

Json to_json(const CompactSet& s) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, geometry::Disc>) {
                return {{"type", "disc"}, {"center", to_json(v.center)}, {"radius", number(v.radius)}};
            } else if constexpr (std::is_same_v<T, geometry::Segment>) {
                return {{"type", "segment"}, {"a", to_json(v.a)}, {"b", to_json(v.b)}};
            } else if constexpr (std::is_same_v<T, geometry::Polygon>) {
                return {{"type", "polygon"}, {"vertices", complex_list(v.vertices)}};
            } else if constexpr (std::is_same_v<T, geometry::PointSet>) {
                return {{"type", "point_set"}, {"points", complex_list(v.points)}};
            } else {
                Json c = Json::array();
                for (const auto& child : v.children) c.push_back(to_json(child));
                return {{"type", "union"}, {"children", c}};
            }
        },
        s.shape);
}

CompactSet compact_set_from(const Json& j) {
    if (!j.is_object()) bad("set", "expected an object");
    const Json& t = require(j, "type");
    if (!t.is_string()) bad("type", "expected a string");
    const auto type = t.get<std::string>();
    CompactSet out;
    if (type == "disc") {
        only_fields(j, {"type", "center", "radius"}, "disc");
        out = CompactSet::disc(complex_from(require(j, "center"), "center"), number_from(require(j, "radius"), "radius"));
    } else if (type == "segment") {
        only_fields(j, {"type", "a", "b"}, "segment");
        out = CompactSet::segment(complex_from(require(j, "a"), "a"), complex_from(require(j, "b"), "b"));
    } else if (type == "polygon") {
        only_fields(j, {"type", "vertices"}, "polygon");
        out = CompactSet::polygon(complex_list(require(j, "vertices"), "vertices"));
    } else if (type == "point_set") {
        only_fields(j, {"type", "points"}, "point_set");
        out = CompactSet::point_set(complex_list(require(j, "points"), "points"));
    } else if (type == "union") {
        only_fields(j, {"type", "children"}, "union");
        const Json& c = require(j, "children");
        if (!c.is_array()) bad("children", "expected an array");
        std::vector<CompactSet> kids;
        for (const auto& e : c) kids.push_back(compact_set_from(e));
        out = CompactSet::union_of(std::move(kids));
    } else {
        bad("type", "unknown set type '" + type + "'");
    }
    geometry::validate(out);
    return out;
}

Json to_json(const potential::DiscreteMeasure& m) {
    return {{"support", complex_list(m.support)}, {"weights", number_list(m.weights)}, {"mass", number(m.mass)}};
}

potential::DiscreteMeasure measure_from(const Json& j) {
    only_fields(j, {"support", "weights", "mass"}, "measure");
    const Json& w = require(j, "weights");
    if (!w.is_array()) bad("weights", "expected an array");
    std::vector<double> weights;
    for (const auto& x : w) weights.push_back(number_from(x, "weights"));
    auto m = potential::DiscreteMeasure::from_weights(complex_list(require(j, "support"), "support"), weights);
    if (j.contains("mass")) m.mass = number_from(j["mass"], "mass");
    potential::check(m);
    return m;
}

Json to_json(const potential::PolarityVerdict& v) {
    Json schedule = Json::array();
    for (auto n : v.schedule) schedule.push_back(n);
    return {{"classification", potential::to_string(v.classification)},
            {"capacity_estimate", number(v.capacity_estimate)},
            {"sequence", number_list(v.sequence)},
            {"schedule", schedule},
            {"threshold", number(v.threshold)},
            {"note", v.note}};
}

Json to_json(const ConvergenceVerdict& v) {
    Json out = {{"status", to_string(v.status)},
                {"value", number(v.value)},
                {"error", number(v.error)},
                {"exponent", number(v.exponent)},
                {"near_critical", v.near_critical},
                {"note", v.note}};
    if (!v.shell_masses.empty()) out["shell_masses"] = number_list(v.shell_masses);
    return out;
}

Json to_json(const cauchy::LaurentTail& t) {
    return {{"start_order", t.start_order}, {"coefficients", complex_list(t.coefficients)}};
}

cauchy::LaurentTail tail_from(const Json& j) {
    cauchy::LaurentTail t;
    t.start_order = require(j, "start_order").get<int>();
    t.coefficients = complex_list(require(j, "coefficients"), "coefficients");
    return t;
}

Json to_json(const cauchy::SignedMeasure& mu) {
    return {{"positive", to_json(mu.positive)}, {"negative", to_json(mu.negative)}};
}

cauchy::SignedMeasure signed_measure_from(const Json& j) {
    return {measure_from(require(j, "positive")), measure_from(require(j, "negative"))};
}

Json to_json(const cauchy::BoostedFunction& f) {
    Json out = {{"kind", cauchy::to_string(f.kind)},
                {"order", f.order()},
                {"anchors", complex_list(f.anchors)},
                {"combiners", complex_list(f.combiners)},
                {"residuals", complex_list(f.residuals)},
                {"tail", to_json(f.tail)},
                {"note", f.note}};
    if (f.kind == cauchy::BoostedFunction::Kind::area_power) out["power"] = f.power;
    if (f.verdict) out["tail_norm"] = to_json(*f.verdict);
    return out;
}

Json sequence_to_json(const SequenceRecipe& recipe, const std::vector<cauchy::BoostedFunction>& seq) {
    Json members = Json::array();
    for (const auto& f : seq) members.push_back(to_json(f));
    Json out = {{"k", recipe.k},
                {"tail_radius", number(recipe.tail_radius)},
                {"n_grid", recipe.n_grid},
                {"first_measure", to_json(recipe.first)},
                {"members", members}};
    out["area_source"] = recipe.area_source ? to_json(*recipe.area_source) : Json();
    return out;
}

std::vector<cauchy::BoostedFunction> sequence_from_json(const Json& j) {
    const int k = require(j, "k").get<int>();
    const double R = number_from(require(j, "tail_radius"), "tail_radius");
    const std::size_t n_grid = require(j, "n_grid").get<std::size_t>();
    const auto mu = signed_measure_from(require(j, "first_measure"));
    const Json& members = require(j, "members");
    if (!members.is_array() || members.empty()) bad("members", "expected a non-empty array");

    std::vector<cauchy::BoostedFunction> seq;
    seq.push_back(cauchy::cauchy_function(mu));
    std::shared_ptr<const cauchy::BoostedFunction> area;
    for (std::size_t i = 1; i < members.size(); ++i) {
        const Json& m = members[i];
        auto prev = std::make_shared<const cauchy::BoostedFunction>(seq.back());
        const auto kind = require(m, "kind").get<std::string>();
        cauchy::BoostedFunction g;
        if (kind == "boost") {
            g = cauchy::apply_boost(prev, complex_list(require(m, "anchors"), "anchors"),
                                    complex_list(require(m, "combiners"), "combiners"));
        } else if (kind == "area_power") {
            const Json& src = require(j, "area_source");
            if (src.is_null()) bad("area_source", "needed by an area_power member");
            if (!area)
                area = std::make_shared<const cauchy::BoostedFunction>(
                    cauchy::area_function(compact_set_from(src), n_grid));
            g = cauchy::area_power(area, require(m, "power").get<int>());
        } else {
            bad("kind", "cannot rebuild a member of kind '" + kind + "'");
        }
        if (m.contains("note")) g.note = m["note"].get<std::string>();
        seq.push_back(std::move(g));
    }
    for (auto& f : seq) f.verdict = cauchy::weighted_tail_norm(f.tail, k, R);
    return seq;
}

Json to_json(const bergman_p1::Dimension& d) {
    if (d.infinite) return "infinite";
    return {{"finite", d.value}};
}

Json to_json(const bergman_p1::DimensionReport& r) {
    Json out = {{"polarity", to_json(r.polarity)}, {"method", r.method}};
    out["dimension"] = r.dimension ? to_json(*r.dimension) : Json();
    if (r.if_polar) out["if_polar"] = to_json(*r.if_polar);
    if (r.if_nonpolar) out["if_nonpolar"] = to_json(*r.if_nonpolar);
    return out;
}

Json to_json(const bergman_p1::RieszMass& m) {
    return {{"value", number(m.value)},
            {"infinite", m.infinite},
            {"inner", number(m.inner)},
            {"shell_masses", number_list(m.shell_masses)}};
}

Json to_json(const bergman_p1::WitnessReport& r) {
    return {{"tau2", number(r.tau2)},
            {"tau3", number(r.tau3)},
            {"tau2_certified", r.tau2_certified},
            {"tau3_certified", r.tau3_certified},
            {"bounded", r.bounded},
            {"certified", r.certified()},
            {"max_value", number(r.max_value)},
            {"bound", number(r.bound)},
            {"probes_inside", r.probes_inside},
            {"probes_outside", r.probes_outside},
            {"excluded", r.excluded},
            {"noise_floor", number(r.noise_floor)}};
}

Json to_json(const bergman_p2::MonomialIndex& i) { return Json::array({i.p, i.q}); }

}  // namespace capstone::json_io
