#include "vsms/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vsms {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

/// Flat key/value document: `key = value` lines grouped under [section]
/// headers. Keys render as "section.key" in diagnostics; top-level keys
/// render bare. Order is preserved so the first offence is reported.
struct Document {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

Document parse_document(const std::string& text) {
    Document doc;
    std::string section;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ParseError("line " + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value, got \"" +
                             line + "\"");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (doc.find(full) != nullptr) {
            throw ParseError("duplicate field: " + full);
        }
        doc.entries.emplace_back(full, value);
    }
    return doc;
}

double parse_real(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("invalid field: " + key + " = \"" + value + "\" (expected a finite real)");
    }
}

std::size_t parse_count(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v <= 0) throw std::invalid_argument(value);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParseError("invalid field: " + key + " = \"" + value +
                         "\" (expected a positive integer)");
    }
}

std::uint64_t parse_seed(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("invalid field: " + key + " = \"" + value +
                         "\" (expected a nonnegative integer)");
    }
}

std::vector<double> parse_reals(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(parse_real(tok, key));
    if (out.empty()) {
        throw ParseError("invalid field: " + key + " (expected one or more reals)");
    }
    return out;
}

AffineMap parse_map_value(const std::string& value, const std::string& key) {
    std::istringstream in(value);
    std::string head;
    in >> head;
    if (head == "identity") return AffineMap{1.0, 0.0};
    if (head == "affine") {
        std::string a_tok, b_tok, rest;
        if (!(in >> a_tok >> b_tok) || (in >> rest)) {
            throw ParseError("invalid field: " + key + " = \"" + value +
                             "\" (expected: affine <a> <b>)");
        }
        return AffineMap{parse_real(a_tok, key), parse_real(b_tok, key)};
    }
    throw ParseError("unknown map: " + value + " (field " + key +
                     "; expected \"affine <a> <b>\", \"identity\", or a [maps] preset)");
}

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields = {
        "id", "mode", "seed",
        "lattice.kind", "lattice.dimension", "lattice.grid_points",
        "carrier.kind", "carrier.lo", "carrier.hi", "carrier.points", "carrier.sampling",
        "carrier.grid_points",
        "metric.name", "metric.base",
        "maps.preset", "maps.p", "maps.q", "maps.k",
        "coefficients.h1", "coefficients.h2", "coefficients.h3", "coefficients.h4",
        "coefficients.h5",
        "solver.starts", "solver.gauge", "solver.n_q", "solver.sample_budget",
        "solver.max_iter", "solver.tol", "solver.tau_eq", "solver.wc_pair",
    };
    return fields;
}

Mode parse_mode(const std::string& value) {
    if (value == "verify_axioms") return Mode::VerifyAxioms;
    if (value == "check_contraction") return Mode::CheckContraction;
    if (value == "solve_three_map") return Mode::SolveThreeMap;
    if (value == "solve_two_map") return Mode::SolveTwoMap;
    if (value == "solve_integral") return Mode::SolveIntegral;
    if (value == "weak_compat") return Mode::WeakCompat;
    if (value == "uniqueness") return Mode::Uniqueness;
    throw ParseError("unknown mode: " + value);
}

void validate_map_keeps_carrier(const Scenario& s, const AffineMap& m, const char* name) {
    std::ostringstream os;
    if (s.carrier_is_interval) {
        for (double x : {s.carrier_lo, s.carrier_hi}) {
            const double y = m(x);
            if (y < s.carrier_lo - s.tau_eq || y > s.carrier_hi + s.tau_eq) {
                os << "carrier-escape: map " << name << " sends " << x << " to " << y
                   << " outside [" << s.carrier_lo << ", " << s.carrier_hi << "]";
                throw ParseError(os.str());
            }
        }
        return;
    }
    for (double x : s.carrier_points) {
        const double y = m(x);
        const bool inside = std::any_of(s.carrier_points.begin(), s.carrier_points.end(),
                                        [&](double p) { return std::abs(p - y) <= s.tau_eq; });
        if (!inside) {
            os << "carrier-escape: map " << name << " sends " << x << " to " << y
               << " outside the finite carrier";
            throw ParseError(os.str());
        }
    }
}

void require_map(const std::optional<AffineMap>& m, const char* key) {
    if (!m) throw ParseError(std::string("missing field: maps.") + key);
}

const ContractionCoefficients& require_coefficients(const Scenario& s) {
    if (!s.coefficients) throw ParseError("missing field: coefficients.h1");
    return *s.coefficients;
}

} // namespace

std::string_view mode_name(Mode m) {
    switch (m) {
    case Mode::VerifyAxioms: return "verify_axioms";
    case Mode::CheckContraction: return "check_contraction";
    case Mode::SolveThreeMap: return "solve_three_map";
    case Mode::SolveTwoMap: return "solve_two_map";
    case Mode::SolveIntegral: return "solve_integral";
    case Mode::WeakCompat: return "weak_compat";
    case Mode::Uniqueness: return "uniqueness";
    }
    return "?";
}

Scenario parse_scenario(const std::string& text) {
    const Document doc = parse_document(text);
    for (const auto& [key, value] : doc.entries) {
        if (known_fields().count(key) == 0) {
            throw ParseError("unknown field: " + key);
        }
    }
    const auto get = [&](const char* key) { return doc.find(key); };

    Scenario s;
    const std::string* mode = get("mode");
    if (mode == nullptr) throw ParseError("missing field: mode");
    s.mode = parse_mode(*mode);

    const std::string* id = get("id");
    if (id == nullptr) throw ParseError("missing field: id");
    s.id = *id;

    if (const auto* v = get("seed")) s.seed = parse_seed(*v, "seed");

    // [lattice]
    if (const auto* v = get("lattice.kind")) {
        if (*v == "scalar") {
            s.lattice_kind = OrderKind::Scalar;
            s.lattice_dim = 1;
        } else if (*v == "vector") {
            s.lattice_kind = OrderKind::Componentwise;
            const auto* d = get("lattice.dimension");
            if (d == nullptr) throw ParseError("missing field: lattice.dimension");
            s.lattice_dim = parse_count(*d, "lattice.dimension");
        } else if (*v == "grid") {
            s.lattice_kind = OrderKind::FunctionGrid;
            const auto* g = get("lattice.grid_points");
            if (g == nullptr) throw ParseError("missing field: lattice.grid_points");
            s.lattice_dim = parse_count(*g, "lattice.grid_points");
        } else {
            throw ParseError("invalid field: lattice.kind = \"" + *v +
                             "\" (expected scalar, vector, or grid)");
        }
    }

    // [carrier]
    if (const auto* v = get("carrier.kind")) {
        if (*v == "interval") {
            s.carrier_is_interval = true;
        } else if (*v == "finite") {
            s.carrier_is_interval = false;
        } else {
            throw ParseError("invalid field: carrier.kind = \"" + *v +
                             "\" (expected interval or finite)");
        }
    }
    if (s.carrier_is_interval) {
        if (const auto* v = get("carrier.lo")) s.carrier_lo = parse_real(*v, "carrier.lo");
        if (const auto* v = get("carrier.hi")) s.carrier_hi = parse_real(*v, "carrier.hi");
        if (!(s.carrier_lo < s.carrier_hi)) {
            throw ParseError("invalid field: carrier.lo/carrier.hi (lo must be < hi)");
        }
    } else {
        const auto* pts = get("carrier.points");
        if (pts == nullptr) throw ParseError("missing field: carrier.points");
        s.carrier_points = parse_reals(*pts, "carrier.points");
    }
    if (const auto* v = get("carrier.sampling")) {
        if (*v == "random") {
            s.carrier_sampling = CarrierSpace::Sampling::UniformRandom;
        } else if (*v == "grid") {
            s.carrier_sampling = CarrierSpace::Sampling::Grid;
        } else {
            throw ParseError("invalid field: carrier.sampling = \"" + *v +
                             "\" (expected random or grid)");
        }
    }
    if (const auto* v = get("carrier.grid_points")) {
        s.carrier_grid_points = parse_count(*v, "carrier.grid_points");
    }

    // [solver] — parsed before maps/coefficients so tau_eq governs their checks.
    if (const auto* v = get("solver.starts")) s.starts = parse_reals(*v, "solver.starts");
    if (const auto* v = get("solver.gauge")) s.gauge_name = *v;
    if (const auto* v = get("solver.n_q")) s.quadrature_panels = parse_count(*v, "solver.n_q");
    if (const auto* v = get("solver.sample_budget")) {
        s.sample_budget = parse_count(*v, "solver.sample_budget");
    }
    if (const auto* v = get("solver.max_iter")) s.max_iter = parse_count(*v, "solver.max_iter");
    if (const auto* v = get("solver.tol")) {
        s.tol = parse_real(*v, "solver.tol");
        if (!(s.tol > 0.0)) throw ParseError("invalid field: solver.tol (must be > 0)");
    }
    if (const auto* v = get("solver.tau_eq")) {
        s.tau_eq = parse_real(*v, "solver.tau_eq");
        if (!(s.tau_eq >= 0.0)) throw ParseError("invalid field: solver.tau_eq (must be >= 0)");
    }
    if (const auto* v = get("solver.wc_pair")) {
        if (*v == "pk") {
            s.wc_pair = MapPair::PK;
        } else if (*v == "qk") {
            s.wc_pair = MapPair::QK;
        } else {
            throw ParseError("invalid field: solver.wc_pair = \"" + *v +
                             "\" (expected pk or qk)");
        }
    }
    const auto& gauges = gauge_catalog();
    if (std::find(gauges.begin(), gauges.end(), s.gauge_name) == gauges.end()) {
        throw ParseError("unknown gauge: " + s.gauge_name);
    }

    // [metric]
    if (const auto* v = get("metric.name")) s.metric_name = *v;
    if (const auto* v = get("metric.base")) s.metric_base = *v;
    const auto is_base = [](const std::string& n) { return n == "sum_abs" || n == "max_abs"; };
    if (s.metric_name == "max_of") {
        if (!is_base(s.metric_base)) {
            throw ParseError("unknown metric: max_of base \"" + s.metric_base + "\"");
        }
    } else if (!is_base(s.metric_name)) {
        throw ParseError("unknown metric: " + s.metric_name);
    }

    // [maps]
    if (const auto* v = get("maps.preset")) {
        if (*v == "example_4_2") {
            s.map_p = AffineMap{1.0 / 12.0, 0.0};
            s.map_q = AffineMap{1.0 / 12.0, 0.0};
            s.map_k = AffineMap{1.0 / 3.0, 0.0};
        } else if (*v == "identity") {
            s.map_p = s.map_q = s.map_k = AffineMap{1.0, 0.0};
        } else {
            throw ParseError("unknown map: preset \"" + *v + "\"");
        }
    }
    if (const auto* v = get("maps.p")) s.map_p = parse_map_value(*v, "maps.p");
    if (const auto* v = get("maps.q")) s.map_q = parse_map_value(*v, "maps.q");
    if (const auto* v = get("maps.k")) s.map_k = parse_map_value(*v, "maps.k");
    if (s.map_p) validate_map_keeps_carrier(s, *s.map_p, "p");
    if (s.map_q) validate_map_keeps_carrier(s, *s.map_q, "q");
    if (s.map_k) validate_map_keeps_carrier(s, *s.map_k, "k");

    // [coefficients]
    if (get("coefficients.h1") || get("coefficients.h2") || get("coefficients.h3") ||
        get("coefficients.h4") || get("coefficients.h5")) {
        ContractionCoefficients c;
        double* slots[] = {&c.h1, &c.h2, &c.h3, &c.h4, &c.h5};
        const char* keys[] = {"coefficients.h1", "coefficients.h2", "coefficients.h3",
                              "coefficients.h4", "coefficients.h5"};
        for (int i = 0; i < 5; ++i) {
            const auto* v = get(keys[i]);
            if (v == nullptr) throw ParseError(std::string("missing field: ") + keys[i]);
            *slots[i] = parse_real(*v, keys[i]);
            if (*slots[i] < 0.0) {
                throw ParseError(std::string("invalid field: ") + keys[i] + " (must be >= 0)");
            }
        }
        if (!c.feasible()) {
            std::ostringstream os;
            os << "infeasible coefficients: weighted sum " << c.weighted_sum() << " >= 1";
            throw ParseError(os.str());
        }
        s.coefficients = c;
    }

    // Mode-specific requirements.
    switch (s.mode) {
    case Mode::VerifyAxioms:
        break;
    case Mode::CheckContraction:
    case Mode::SolveThreeMap:
    case Mode::SolveTwoMap:
    case Mode::SolveIntegral:
    case Mode::Uniqueness:
        require_map(s.map_p, "p");
        require_map(s.map_k, "k");
        require_coefficients(s);
        break;
    case Mode::WeakCompat:
        require_map(s.wc_pair == MapPair::PK ? s.map_p : s.map_q,
                    s.wc_pair == MapPair::PK ? "p" : "q");
        require_map(s.map_k, "k");
        break;
    }
    if (s.mode == Mode::SolveIntegral && s.lattice_dim != 1) {
        throw ParseError("invalid field: lattice.kind (solve_integral needs a scalar lattice)");
    }
    if (s.starts.empty()) {
        s.starts.push_back(s.carrier_is_interval ? 0.5 * (s.carrier_lo + s.carrier_hi)
                                                 : s.carrier_points[s.carrier_points.size() / 2]);
    }
    for (double x0 : s.starts) {
        const bool inside =
            s.carrier_is_interval
                ? (x0 >= s.carrier_lo - s.tau_eq && x0 <= s.carrier_hi + s.tau_eq)
                : std::any_of(s.carrier_points.begin(), s.carrier_points.end(),
                              [&](double p) { return std::abs(p - x0) <= s.tau_eq; });
        if (!inside) {
            std::ostringstream os;
            os << "invalid field: solver.starts (start " << x0 << " is outside the carrier)";
            throw ParseError(os.str());
        }
    }
    return s;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_scenario(text.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

LatticeSpace build_lattice(const Scenario& s) {
    switch (s.lattice_kind) {
    case OrderKind::Scalar: return LatticeSpace::scalar();
    case OrderKind::Componentwise: return LatticeSpace::vector(s.lattice_dim);
    case OrderKind::FunctionGrid: return LatticeSpace::grid(s.lattice_dim);
    }
    throw ParameterError("build_lattice: unknown kind");
}

CarrierSpace build_carrier(const Scenario& s) {
    if (s.carrier_is_interval) {
        return CarrierSpace::interval(s.carrier_lo, s.carrier_hi, s.carrier_sampling,
                                      s.carrier_grid_points);
    }
    return CarrierSpace::finite(s.carrier_points);
}

VectorSMetric build_metric(const Scenario& s) {
    const LatticeSpace target = build_lattice(s);
    const CarrierSpace carrier = build_carrier(s);
    const auto base = [&](const std::string& name) {
        return name == "sum_abs" ? sum_abs_metric(carrier, target)
                                 : max_abs_metric(carrier, target);
    };
    if (s.metric_name == "max_of") return max_construction(base(s.metric_base));
    return base(s.metric_name);
}

MapSystem build_map_system(const Scenario& s) {
    require_map(s.map_p, "p");
    require_map(s.map_k, "k");
    const AffineMap p = *s.map_p;
    const AffineMap q = s.map_q.value_or(p);
    const AffineMap k = *s.map_k;
    return MapSystem(build_carrier(s), p, q, k);
}

std::string RunResult::payload_json() const {
    json j;
    j["id"] = id;
    j["mode"] = std::string(mode_name(mode));
    j["verdict"] = verdict;
    if (limit) j["limit"] = *limit;
    if (counterexample) j["counterexample"] = json::parse(*counterexample);
    // The payload names the trace file, not its directory, so identical
    // scenarios reproduce identical payloads wherever the run lands.
    if (trace_path) j["trace"] = std::filesystem::path(*trace_path).filename().string();
    if (iterations > 0) j["iterations"] = iterations;
    j["exit_code"] = exit_code;
    return j.dump();
}

namespace {

std::string witness_json(const AxiomReport& report) {
    const char* axiom = "nonnegativity";
    const AxiomViolation* w = report.nonnegativity_witness ? &*report.nonnegativity_witness : nullptr;
    if (w == nullptr && report.identity_witness) {
        axiom = "identity";
        w = &*report.identity_witness;
    }
    if (w == nullptr && report.tetrahedral_witness) {
        axiom = "tetrahedral";
        w = &*report.tetrahedral_witness;
    }
    json j;
    if (w != nullptr) {
        j["axiom"] = axiom;
        j["points"] = w->points;
        j["detail"] = w->detail;
    }
    return j.dump();
}

std::string witness_json(const InequalityWitness& w) {
    json j;
    j["xi"] = w.xi;
    j["gamma"] = w.gamma;
    j["detail"] = w.detail;
    return j.dump();
}

RunResult from_trace(const Scenario& s, const ConvergenceTrace& trace,
                     const std::filesystem::path& out_dir) {
    RunResult result;
    result.verdict = std::string(verdict_name(trace.verdict));
    result.iterations = trace.iterations();
    if (trace.limit) result.limit = *trace.limit;
    result.exit_code = trace.verdict == Verdict::Converged ? 0 : 2;

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path = out_dir / (s.id + "_trace.csv");
    write_trace_csv(trace, path);
    result.trace_path = path.string();
    return result;
}

} // namespace

RunResult run(const Scenario& s, const std::filesystem::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult result;

    switch (s.mode) {
    case Mode::VerifyAxioms: {
        const AxiomReport report = verify_axioms(build_metric(s), s.sample_budget, s.seed, s.tau_eq);
        result.verdict = report.all_ok() ? "pass" : "fail";
        result.exit_code = report.all_ok() ? 0 : 2;
        if (!report.all_ok()) result.counterexample = witness_json(report);
        break;
    }
    case Mode::CheckContraction: {
        const AffineMap p = *s.map_p;
        const AffineMap q = s.map_q.value_or(p);
        const AffineMap k = *s.map_k;
        const InequalityReport report = check_inequality(build_metric(s), p, q, k,
                                                         require_coefficients(s), s.sample_budget,
                                                         s.seed, s.tau_eq);
        result.verdict = report.passed ? "pass" : "fail";
        result.exit_code = report.passed ? 0 : 2;
        if (report.witness) result.counterexample = witness_json(*report.witness);
        break;
    }
    case Mode::SolveThreeMap:
    case Mode::SolveTwoMap:
    case Mode::SolveIntegral: {
        const MapSystem maps = build_map_system(s);
        const auto containment =
            verify_range_containment(maps, std::min<std::size_t>(s.sample_budget, 256), s.seed,
                                     s.tau_eq);
        if (!containment.ok) throw RangeContainmentError(containment.detail);
        const VectorSMetric metric = build_metric(s);
        ConvergenceTrace trace;
        if (s.mode == Mode::SolveIntegral) {
            const CarrierSpace carrier = build_carrier(s);
            if (!continuity_probe(*s.map_p, carrier, 100, s.seed) &&
                !continuity_probe(*s.map_k, carrier, 100, s.seed)) {
                throw DomainError("solve_integral: neither p nor k passes the continuity probe");
            }
            trace = iterate_integral(metric, maps, require_coefficients(s),
                                     IntegralGauge::from_name(s.gauge_name, s.quadrature_panels),
                                     s.starts.front(), s.max_iter, s.tol, s.tau_eq);
        } else {
            trace = iterate(metric, maps, require_coefficients(s), s.starts.front(),
                            Gauge::max_abs(), s.max_iter, s.tol, s.tau_eq);
        }
        result = from_trace(s, trace, out_dir);
        break;
    }
    case Mode::WeakCompat: {
        Scenario filled = s; // the unchecked map of the pair defaults to its partner
        if (!filled.map_p) filled.map_p = filled.map_q;
        if (!filled.map_q) filled.map_q = filled.map_p;
        const WeakCompatReport report = weak_compatibility_check(
            build_map_system(filled), s.wc_pair, s.sample_budget, s.seed, s.tol);
        result.verdict = report.compatible ? "compatible" : "violation";
        result.exit_code = report.compatible ? 0 : 2;
        if (report.violation_point) {
            json j;
            j["point"] = *report.violation_point;
            result.counterexample = j.dump();
        }
        break;
    }
    case Mode::Uniqueness: {
        const MapSystem maps = build_map_system(s);
        const UniquenessReport report =
            uniqueness_probe(build_metric(s), maps, require_coefficients(s), Gauge::max_abs(),
                             s.starts, s.max_iter, s.tol, s.tau_eq);
        switch (report.outcome) {
        case UniquenessReport::Outcome::Unique:
            result.verdict = "unique";
            result.exit_code = 0;
            result.limit = report.limit;
            break;
        case UniquenessReport::Outcome::Divergent: {
            result.verdict = "divergent";
            result.exit_code = 2;
            json j;
            j["limits"] = {report.divergent->first, report.divergent->second};
            result.counterexample = j.dump();
            break;
        }
        case UniquenessReport::Outcome::Inconclusive:
            result.verdict = "inconclusive";
            result.exit_code = 2;
            break;
        }
        break;
    }
    }

    result.id = s.id;
    result.mode = s.mode;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::vector<std::string> metric_catalog() {
    return {"sum_abs", "max_abs", "max_of"};
}

std::vector<std::string> map_catalog() {
    return {"affine <a> <b>", "identity", "example_4_2"};
}

std::vector<std::string> gauge_catalog() {
    return {"one", "linear", "exp_decay"};
}

std::vector<std::string> mode_catalog() {
    return {"verify_axioms", "check_contraction", "solve_three_map", "solve_two_map",
            "solve_integral", "weak_compat", "uniqueness"};
}

} // namespace vsms
