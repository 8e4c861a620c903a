#include "capstone/cli.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <sstream>

#include "capstone/bergman_p1.hpp"
#include "capstone/bergman_p2.hpp"
#include "capstone/cauchy.hpp"
#include "capstone/parallel.hpp"
#include "capstone/potential.hpp"

namespace capstone::cli {

using json_io::number;
using json_io::to_json;

namespace {

enum class Kind { set, integer, count, nonneg, real, positive, flag, count_list, choice };

struct Field {
    std::string name;
    Kind kind;
    bool required = false;
    Json fallback = nullptr;  // null: no default, or resolved later
    std::vector<std::string> choices = {};
};

Field req(std::string name, Kind kind) { return {std::move(name), kind, true}; }
Field opt(std::string name, Kind kind, Json fallback) { return {std::move(name), kind, false, std::move(fallback)}; }

Field n_field() { return opt("n", Kind::count, potential::kDefaultN); }
Field tol_field() { return opt("tol", Kind::positive, potential::kDefaultTol); }
Field seed_field() { return opt("seed", Kind::nonneg, 0); }
Field threshold_field() { return opt("threshold", Kind::positive, 1e-6); }
Field schedule_field() { return opt("schedule", Kind::count_list, Json::array({64, 128, 256})); }
Field output_field() { return opt("output", Kind::choice, nullptr); }

const std::map<std::string, std::vector<Field>>& schema() {
    static const std::map<std::string, std::vector<Field>> s = {
        {"capacity", {req("set", Kind::set), n_field(), tol_field(), seed_field(), opt("fekete_n", Kind::nonneg, 0),
                      output_field()}},
        {"equilibrium", {req("set", Kind::set), n_field(), tol_field(), seed_field(),
                         opt("max_iter", Kind::count, potential::kDefaultMaxIter), output_field()}},
        {"polarity", {req("set", Kind::set), threshold_field(), schedule_field(), tol_field(), seed_field(),
                      output_field()}},
        {"wiegerinck", {req("e1", Kind::set), req("e2", Kind::set), opt("count", Kind::count, 5),
                        opt("k", Kind::integer, -3), n_field(), tol_field(), seed_field(),
                        opt("n_grid", Kind::count, 64), output_field()}},
        {"dim-p1", {req("K", Kind::set), req("k", Kind::integer),
                    {"psi", Kind::choice, false, "none", {"none", "log_weight"}}, threshold_field(),
                    schedule_field(), tol_field(), seed_field(), output_field()}},
        {"dim-p2", {req("k", Kind::integer), opt("p_max", Kind::nonneg, nullptr), opt("verdicts", Kind::flag, true),
                    output_field()}},
        {"witness", {req("G", Kind::set), opt("eps", Kind::real, 0.01), n_field(), seed_field(),
                     opt("probes", Kind::count, 10000), output_field()}},
    };
    return s;
}

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
    throw ConfigError("field '" + field + "': " + why);
}

Json check_field(const Field& f, const Json& v) {
    switch (f.kind) {
        case Kind::set:
            try {
                return to_json(json_io::compact_set_from(v));
            } catch (const InvalidInput& e) {
                config_error(f.name, e.what());
            }
        case Kind::integer:
            if (!v.is_number_integer()) config_error(f.name, "expected an integer");
            return v;
        case Kind::count:
            if (!v.is_number_integer() || v.get<long long>() < 1) config_error(f.name, "expected a positive integer");
            return v;
        case Kind::nonneg:
            if (!v.is_number_integer() || v.get<long long>() < 0)
                config_error(f.name, "expected a nonnegative integer");
            return v;
        case Kind::real:
            if (!v.is_number()) config_error(f.name, "expected a number");
            return v;
        case Kind::positive:
            if (!v.is_number() || !(v.get<double>() > 0.0)) config_error(f.name, "expected a positive number");
            return v;
        case Kind::flag:
            if (!v.is_boolean()) config_error(f.name, "expected true or false");
            return v;
        case Kind::count_list:
            if (!v.is_array() || v.empty()) config_error(f.name, "expected a non-empty array of positive integers");
            for (const auto& e : v)
                if (!e.is_number_integer() || e.get<long long>() < 1)
                    config_error(f.name, "expected a non-empty array of positive integers");
            return v;
        case Kind::choice:
            if (f.choices.empty()) {
                if (!v.is_null() && !v.is_string()) config_error(f.name, "expected a string");
                return v;
            }
            if (!v.is_string() || std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end())
                config_error(f.name, "expected one of the documented values");
            return v;
    }
    return v;
}

std::vector<std::size_t> schedule_of(const Json& j) {
    std::vector<std::size_t> out;
    for (const auto& e : j) out.push_back(e.get<std::size_t>());
    return out;
}

potential::PolarityOptions polarity_options(const Json& p) {
    potential::PolarityOptions o;
    o.threshold = p["threshold"].get<double>();
    o.schedule = schedule_of(p["schedule"]);
    o.tol = p["tol"].get<double>();
    o.seed = p["seed"].get<std::uint64_t>();
    return o;
}

geometry::CompactSet set_of(const Json& j) { return json_io::compact_set_from(j); }

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void run_capacity(Report& r) {
    const Json& p = r.config.params;
    const auto set = set_of(p["set"]);
    const auto n = p["n"].get<std::size_t>();
    const double tol = p["tol"].get<double>();
    const auto seed = p["seed"].get<std::uint64_t>();
    if (geometry::is_atomic(set)) {
        r.results["capacity"] = 0.0;
        r.results["note"] = "finite point set: capacity zero";
    } else {
        const auto sol = potential::solve_equilibrium(set, n, tol, seed);
        r.results["capacity"] = number(std::exp(sol.energy));
        r.results["energy"] = number(sol.energy);
        r.results["gap"] = number(sol.gap);
        r.results["tol"] = tol;
        r.diagnostics["iterations"] = sol.iterations;
        r.diagnostics["active"] = sol.active;
    }
    const auto fn = p["fekete_n"].get<std::size_t>();
    if (fn > 0) r.results["fekete_diameter"] = number(potential::fekete_diameter(set, fn, seed));
}

void run_equilibrium(Report& r) {
    const Json& p = r.config.params;
    const auto set = set_of(p["set"]);
    const auto sol = potential::solve_equilibrium(set, p["n"].get<std::size_t>(), p["tol"].get<double>(),
                                                  p["seed"].get<std::uint64_t>(), p["max_iter"].get<std::size_t>());
    r.results["measure"] = to_json(sol.measure);
    r.results["energy"] = number(sol.energy);
    r.results["capacity"] = number(std::exp(sol.energy));
    r.results["gap"] = number(sol.gap);
    r.results["tol"] = p["tol"];
    r.results["min_separation"] = number(sol.min_separation);
    r.diagnostics["iterations"] = sol.iterations;
    r.diagnostics["active"] = sol.active;

    Table t{"support", {"index", "re", "im", "arc", "weight", "cell_length", "density", "potential"}, {}};
    double arc = 0.0;
    for (std::size_t i = 0; i < sol.measure.size(); ++i) {
        const double h = sol.cell_lengths[i];
        arc += 0.5 * h;
        const Complex z = sol.measure.support[i];
        t.rows.push_back({i, number(z.real()), number(z.imag()), number(arc), number(sol.measure.weights[i]),
                          number(h), number(h > 0 ? sol.measure.weights[i] / h : 0.0),
                          number(sol.support_potential[i])});
        arc += 0.5 * h;
    }
    r.tables.push_back(std::move(t));
}

void run_polarity(Report& r) {
    const auto v = potential::classify_polarity(set_of(r.config.params["set"]), polarity_options(r.config.params));
    r.results = to_json(v);
    Table t{"schedule", {"n", "capacity"}, {}};
    for (std::size_t i = 0; i < v.sequence.size() && i < v.schedule.size(); ++i)
        t.rows.push_back({v.schedule[i], number(v.sequence[i])});
    r.tables.push_back(std::move(t));
    if (v.classification == potential::PolarityVerdict::Classification::inconclusive) r.exit_code = kInconclusive;
}

void run_wiegerinck(Report& r) {
    const Json& p = r.config.params;
    const auto e1 = set_of(p["e1"]);
    const auto e2 = set_of(p["e2"]);
    cauchy::SequenceOptions opts;
    opts.n = p["n"].get<std::size_t>();
    opts.tol = p["tol"].get<double>();
    opts.n_grid = p["n_grid"].get<std::size_t>();
    const int k = p["k"].get<int>();
    const auto seed = p["seed"].get<std::uint64_t>();

    json_io::SequenceRecipe recipe;
    recipe.first = cauchy::signed_equilibrium_difference(e1, e2, opts.n, opts.tol, seed);
    const auto both = geometry::CompactSet::union_of({e1, e2});
    if (geometry::area(both) > 0.0) recipe.area_source = both;
    recipe.n_grid = opts.n_grid;
    recipe.k = k;
    const double anchor_radius = 2.0 * std::max(geometry::bounding_radius(both), 0.5);
    recipe.tail_radius = cauchy::tail_radius(anchor_radius);
    const auto seq = cauchy::boost_sequence(cauchy::cauchy_function(recipe.first, opts.boost),
                                            recipe.area_source ? &*recipe.area_source : nullptr, anchor_radius,
                                            p["count"].get<std::size_t>(), k, seed, opts);

    const auto m = cauchy::moments(recipe.first, 2);
    r.results["c1"] = to_json(-m[0]);
    r.results["c2"] = to_json(-m[1]);
    r.results["sequence"] = json_io::sequence_to_json(recipe, seq);

    Table members{"members", {"index", "kind", "order", "tail_norm", "tail_norm_value", "max_residual", "note"}, {}};
    Table coeffs{"coefficients", {"member", "order", "re", "im"}, {}};
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& f = seq[i];
        double res = 0.0;
        for (auto a : f.residuals) res = std::max(res, std::abs(a));
        members.rows.push_back({i, cauchy::to_string(f.kind), f.order(),
                                f.verdict ? to_string(f.verdict->status) : "", number(f.verdict ? f.verdict->value : 0.0),
                                number(res), f.note});
        for (std::size_t c = 0; c < f.tail.coefficients.size(); ++c)
            coeffs.rows.push_back({i, f.tail.start_order + static_cast<int>(c), number(f.tail.coefficients[c].real()),
                                   number(f.tail.coefficients[c].imag())});
    }
    r.tables.push_back(std::move(members));
    r.tables.push_back(std::move(coeffs));
}

void run_dim_p1(Report& r) {
    const Json& p = r.config.params;
    const int k = p["k"].get<int>();
    std::optional<bergman_p1::ScalarField> psi;
    if (p["psi"] == "log_weight") psi = bergman_p1::log_weight_field(k);
    const auto rep = bergman_p1::dimension_report(k, set_of(p["K"]), psi, polarity_options(p));
    r.results = to_json(rep);
    r.results["global_dimension"] = bergman_p1::dim_global_sections(k);
    if (!rep.dimension) r.exit_code = kInconclusive;
}

void run_dim_p2(Report& r) {
    Json& p = r.config.params;
    const int k = p["k"].get<int>();
    const int p_max = p["p_max"].get<int>();
    const auto omega = bergman_p2::omega_k_spec(k);
    const auto basis = bergman_p2::omega_k_monomial_basis(k, p_max);
    Json b = Json::array();
    Table bt{"basis", {"p", "q"}, {}};
    for (const auto& m : basis) {
        b.push_back(to_json(m));
        bt.rows.push_back({m.p, m.q});
    }
    r.results["k"] = k;
    r.results["omega"] = bergman_p2::to_string(omega);
    r.results["basis"] = b;
    r.results["dimension"] = basis.size();
    r.results["global_dimension"] = bergman_p2::dim_global_sections_p2(k);
    r.tables.push_back(std::move(bt));
    if (!p["verdicts"].get<bool>()) return;

    struct Cell {
        bergman_p2::RegionSpec region;
        bergman_p2::MonomialIndex idx;
        ConvergenceVerdict verdict;
    };
    std::vector<Cell> cells;
    for (const auto& c : omega.children) {
        if (c.kind == bergman_p2::RegionSpec::Kind::B) continue;
        for (int a = 0; a <= p_max; ++a)
            for (int q = 0; a + q <= p_max; ++q) cells.push_back({c, {a, q}, {}});
    }
    parallel_for(0, cells.size(), [&](std::size_t i) {
        cells[i].verdict = bergman_p2::monomial_norm_estimate(cells[i].region, cells[i].idx, k);
    });
    Json verdicts = Json::object();
    Table vt{"verdicts", {"region", "p", "q", "predicate", "status", "exponent", "expected_exponent", "near_critical"}, {}};
    for (const auto& c : cells) {
        const auto name = bergman_p2::to_string(c.region);
        const bool pred = bergman_p2::monomial_predicate(c.region, c.idx, k);
        const double expected = bergman_p2::radial_exponent(c.region, c.idx, k);
        verdicts[name].push_back({{"p", c.idx.p},
                                  {"q", c.idx.q},
                                  {"predicate", pred},
                                  {"status", to_string(c.verdict.status)},
                                  {"exponent", number(c.verdict.exponent)},
                                  {"expected_exponent", expected},
                                  {"near_critical", c.verdict.near_critical},
                                  {"value", number(c.verdict.value)},
                                  {"error", number(c.verdict.error)}});
        vt.rows.push_back({name, c.idx.p, c.idx.q, pred, to_string(c.verdict.status), number(c.verdict.exponent),
                           expected, c.verdict.near_critical});
    }
    r.results["verdicts"] = verdicts;
    r.tables.push_back(std::move(vt));
}

void run_witness(Report& r) {
    const Json& p = r.config.params;
    const auto seed = p["seed"].get<std::uint64_t>();
    const auto w = bergman_p1::witness_psi_star(set_of(p["G"]), p["eps"].get<double>(), p["n"].get<std::size_t>(), seed);
    const auto rep = bergman_p1::verify_witness_bounds(w, w.R, p["probes"].get<std::size_t>(), seed);
    r.results["R"] = number(w.R);
    r.results["R_outer"] = number(w.R_outer);
    r.results["delta"] = number(w.delta);
    r.results["sup_exp_potential"] = number(w.sup_exp_potential);
    r.results["min_blend_laplacian"] = number(w.min_blend_laplacian);
    r.results["report"] = to_json(rep);
    if (!rep.certified()) r.exit_code = kInconclusive;
}

std::string csv_cell(const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, Json>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        // Short numeric arrays ([re, im] pairs, schedules) stay in the summary; long data goes to tables.
        if (j.size() <= 8 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); })) {
            std::string s;
            for (const auto& e : j) s += (s.empty() ? "" : ";") + (e.is_string() ? e.get<std::string>() : e.dump());
            out.emplace_back(prefix, s);
        }
    } else {
        out.emplace_back(prefix, j);
    }
}

}  // namespace

Json JobConfig::echo() const {
    Json out = params;
    out["command"] = command;
    return out;
}

std::vector<std::string> commands() {
    std::vector<std::string> out;
    for (const auto& [name, fields] : schema()) out.push_back(name);
    return out;
}

JobConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("malformed JSON: top level must be an object");
    if (!j.contains("command")) config_error("command", "missing");
    if (!j["command"].is_string()) config_error("command", "expected a string");
    JobConfig cfg;
    cfg.command = j["command"].get<std::string>();
    const auto it = schema().find(cfg.command);
    if (it == schema().end()) throw ConfigError("unknown command '" + cfg.command + "'");
    const auto& fields = it->second;
    for (auto e = j.begin(); e != j.end(); ++e) {
        if (e.key() == "command") continue;
        const bool known =
            std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return f.name == e.key(); });
        if (!known) config_error(e.key(), "not a parameter of '" + cfg.command + "'");
    }
    for (const auto& f : fields) {
        if (j.contains(f.name)) {
            cfg.params[f.name] = check_field(f, j[f.name]);
        } else if (f.required) {
            config_error(f.name, "missing");
        } else {
            cfg.params[f.name] = f.fallback;
        }
    }
    if (cfg.command == "dim-p2" && cfg.params["p_max"].is_null())
        cfg.params["p_max"] = bergman_p2::default_p_max(cfg.params["k"].get<int>());
    return cfg;
}

Json Report::payload() const {
    return {{"version", version}, {"config", config.echo()}, {"results", results}};
}

Report run(const JobConfig& config) {
    static const std::map<std::string, std::function<void(Report&)>> handlers = {
        {"capacity", run_capacity}, {"equilibrium", run_equilibrium}, {"polarity", run_polarity},
        {"wiegerinck", run_wiegerinck}, {"dim-p1", run_dim_p1}, {"dim-p2", run_dim_p2},
        {"witness", run_witness},
    };
    const auto it = handlers.find(config.command);
    if (it == handlers.end()) throw ConfigError("unknown command '" + config.command + "'");
    Report r;
    r.config = config;
    const Timer timer;
    const std::string context = config.command + ": ";
    try {
        it->second(r);
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw InvalidInput(context + e.what());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(context + e.what());
    } catch (const std::exception& e) {
        throw Error(context + e.what());
    }
    r.diagnostics["seconds"] = timer.seconds();
    r.diagnostics["threads"] = worker_count();
    return r;
}

Format parse_format(const std::string& name) {
    if (name == "json") return Format::json;
    if (name == "csv-tables") return Format::csv_tables;
    throw ConfigError("unknown format '" + name + "' (json or csv-tables)");
}

std::string emit(const Report& report, Format format) {
    if (format == Format::json) {
        Json out = report.payload();
        out["diagnostics"] = report.diagnostics;
        out["exit_code"] = report.exit_code;
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    std::vector<std::pair<std::string, Json>> summary;
    flatten(report.results, "", summary);
    os << "# table: summary\nkey,value\n";
    os << "version," << csv_cell(report.version) << "\n";
    os << "command," << csv_cell(report.config.command) << "\n";
    for (const auto& [key, value] : summary) os << csv_cell(key) << "," << csv_cell(value) << "\n";
    for (const auto& t : report.tables) {
        os << "\n# table: " << t.name << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
            os << "\n";
        }
    }
    return os.str();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const Json::exception*>(&e)) return kConfigError;
    if (dynamic_cast<const ConvergenceError*>(&e)) return kNonConvergence;
    return kOtherError;
}

}  // namespace capstone::cli
