#include "dagger/spec_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dagger/acceptance.hpp"
#include "dagger/local_cohomology.hpp"

namespace dagger {

namespace {

std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(const BigInt& v) { return v.str(); }

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t json_prime(const Json& spec, std::optional<std::int64_t> fallback = std::nullopt) {
    const std::int64_t p = json_int(spec, "p", fallback);
    if (!is_prime(p)) throw SchemaError("p must be a prime, got " + std::to_string(p));
    return static_cast<std::uint64_t>(p);
}

int json_small(const Json& obj, const std::string& key, int fallback, int lo, int hi) {
    const std::int64_t v = json_int(obj, key, fallback);
    if (v < lo || v > hi)
        throw SchemaError(key + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi) + ", got " +
                          std::to_string(v));
    return static_cast<int>(v);
}

const Json& section(const Json& spec, const std::string& key) {
    static const Json empty = Json::object();
    if (!spec.is_object() || !spec.contains(key)) return empty;
    const Json& s = spec.at(key);
    if (!s.is_object()) throw SchemaError(key + " must be an object");
    return s;
}

std::vector<std::int64_t> int_list(const Json& v, const std::string& what) {
    if (!v.is_array()) throw SchemaError(what + " must be an array");
    std::vector<std::int64_t> out;
    for (const auto& x : v) out.push_back(json_int_value(x, what));
    return out;
}

// Bounds from the override, the spec's "bounds" object, then the defaults.
std::pair<int, int> bounds(const Json& spec, const Overrides& o, int D0, int E0) {
    const Json& b = section(spec, "bounds");
    int D = o.D ? *o.D : json_small(b, "D", D0, 0, 64);
    int E = o.E ? *o.E : json_small(b, "E", E0, 0, 64);
    if (D < 0 || E < 0) throw SchemaError("bounds must be nonnegative");
    return {D, E};
}

int precision(const Json& spec, const Overrides& o, int fallback) {
    if (o.precision) return *o.precision;
    return json_small(spec, "precision", fallback, 1, 62);
}

Json envelope(const std::string& command, const Json& spec, Json result, Json ledger, bool pass) {
    Json r;
    r["report_version"] = kReportVersion;
    r["command"] = command;
    r["spec"] = spec;
    r["result"] = std::move(result);
    r["precision_ledger"] = std::move(ledger);
    r["verdict"] = pass ? "PASS" : "FAIL";
    return r;
}

Json strings(const std::vector<std::int64_t>& v) {
    Json a = Json::array();
    for (auto x : v) a.push_back(str(x));
    return a;
}

Json battery_json(const BatteryResult& b) {
    Json props = Json::array();
    for (const auto& t : b.properties) {
        Json j;
        j["name"] = t.name;
        j["checked"] = t.checked;
        j["failed"] = t.failed;
        j["pass"] = t.pass();
        if (!t.pass()) j["first_failure"] = t.first_failure;
        props.push_back(j);
    }
    return props;
}

}  // namespace

Json parse_spec(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("spec must be a JSON object");
    if (!j.contains("spec_version")) throw SchemaError("missing spec_version");
    if (json_int(j, "spec_version") != kSpecVersion)
        throw SchemaError("unsupported spec_version (expected " + std::to_string(kSpecVersion) + ")");
    return j;
}

Json read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read spec file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_spec(os.str());
}

std::int64_t json_int_value(const Json& v, const std::string& what) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        std::int64_t x = 0;
        const char* b = s.data();
        const char* e = s.data() + s.size();
        if (b != e && *b == '+') ++b;
        auto [ptr, ec] = std::from_chars(b, e, x);
        if (ec == std::errc() && ptr == e && b != e) return x;
    }
    throw SchemaError(what + " must be an integer (number or decimal string)");
}

std::int64_t json_int(const Json& obj, const std::string& key, std::optional<std::int64_t> fallback) {
    if (!obj.is_object() || !obj.contains(key)) {
        if (fallback) return *fallback;
        throw SchemaError("missing field " + key);
    }
    return json_int_value(obj.at(key), key);
}

VarietyPresentation parse_variety(const Json& v) {
    if (v.is_object() && v.contains("variety")) return parse_variety(v.at("variety"));
    if (!v.is_object() || !v.contains("family") || !v.at("family").is_string())
        throw SchemaError("variety needs a string field family");
    const std::string family = v.at("family").get<std::string>();
    if (family == "affine_space") return VarietyPresentation::affine_space(json_small(v, "n", 1, 0, 3));
    if (family == "torus") return VarietyPresentation::torus(json_small(v, "n", 1, 1, 3));
    if (family == "punctured_line") {
        if (!v.contains("punctures")) throw SchemaError("punctured_line needs punctures");
        return VarietyPresentation::punctured_line(int_list(v.at("punctures"), "punctures"));
    }
    if (family == "hyperelliptic_patch") {
        if (!v.contains("f")) throw SchemaError("hyperelliptic_patch needs f (coefficients, low degree first)");
        return VarietyPresentation::hyperelliptic_patch(int_list(v.at("f"), "f"));
    }
    if (family == "product") {
        if (!v.contains("components") || !v.at("components").is_array() || v.at("components").empty())
            throw SchemaError("product needs a nonempty components array");
        VarietyPresentation r = parse_variety(v.at("components")[0]);
        for (std::size_t k = 1; k < v.at("components").size(); ++k)
            r = VarietyPresentation::product(r, parse_variety(v.at("components")[k]));
        return r;
    }
    throw SchemaError("unknown family " + family);
}

TruncSeries parse_polynomial(const Json& v, const PrecisionPolicy& pol, int n) {
    if (!v.is_array()) throw SchemaError("polynomial must be an array of {c, e} terms");
    const Zmod R = pol.ring();
    TruncSeries f(pol, n);
    for (const auto& t : v) {
        if (!t.is_object() || !t.contains("c") || !t.contains("e") || !t.at("e").is_array())
            throw SchemaError("polynomial term must be {\"c\": ..., \"e\": [...]}");
        const std::int64_t c = json_int_value(t.at("c"), "coefficient");
        const auto ev = int_list(t.at("e"), "exponent");
        if (static_cast<int>(ev.size()) != n) throw SchemaError("exponent vector must have length " + std::to_string(n));
        Exp e = zero_exp();
        for (int i = 0; i < n; ++i) {
            if (ev[i] < 0 || ev[i] > 64) throw SchemaError("exponents must lie in 0..64");
            e[i] = static_cast<int>(ev[i]);
        }
        f.add_term(e, R.reduce(c));
    }
    return f;
}

Json polynomial_json(const TruncSeries& f) {
    Json a = Json::array();
    for (const auto& [e, c] : f.terms()) {
        Json t;
        t["c"] = str(c);
        Json ev = Json::array();
        for (int i = 0; i < f.nvars(); ++i) ev.push_back(e[i]);
        t["e"] = ev;
        a.push_back(t);
    }
    return a;
}

std::string format_integer_poly(const std::vector<std::int64_t>& c, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        const std::int64_t a = c[k] < 0 ? -c[k] : c[k];
        if (first) {
            if (c[k] < 0) os << "-";
        } else {
            os << (c[k] < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0 || a != 1) os << a;
        if (k >= 1) os << var;
        if (k >= 2) os << "^" << k;
    }
    return first ? "0" : os.str();
}

RunOutcome run_zeta(const Json& spec, const Overrides& o) {
    const VarietyPresentation pres = parse_variety(spec);
    const std::uint64_t p = json_prime(spec);
    ZetaOptions opt;
    opt.depth = o.depth ? *o.depth : json_small(spec, "depth", 0, 0, 12);
    if (o.precision) {
        opt.precision = *o.precision;
    } else if (spec.contains("precision")) {
        opt.precision = json_small(spec, "precision", 0, 1, 62);
    }
    std::tie(opt.D, opt.E) = bounds(spec, o, 4, 2);
    const ZetaReport z = zeta(pres, p, opt);

    Json res;
    res["variety"] = z.variety;
    res["p"] = str(z.p);
    res["dimension"] = pres.dim();
    res["depth"] = z.depth;
    res["bounds"] = {{"D", z.D}, {"E", z.E}};
    res["dims"] = z.dims;
    Json frob = Json::array();
    for (const auto& F : z.frobenius) {
        Json m = Json::array();
        for (const auto& row : F.F) {
            Json r = Json::array();
            for (const auto& x : row) r.push_back(x.to_string());
            m.push_back(r);
        }
        frob.push_back({{"degree", F.degree}, {"matrix", m}});
    }
    res["frobenius"] = frob;
    Json polys = Json::array();
    for (std::size_t i = 0; i < z.P.size(); ++i) {
        Json padic = Json::array();
        if (i < z.P_padic.size())
            for (const auto& x : z.P_padic[i]) padic.push_back(x.to_string());
        polys.push_back({{"degree", static_cast<int>(i)}, {"padic", padic}, {"integer", strings(z.P[i])}});
    }
    res["char_polys"] = polys;
    std::string text = "(" + format_integer_poly(z.numerator) + ")";
    if (z.denominator != std::vector<std::int64_t>{1}) text += "/(" + format_integer_poly(z.denominator) + ")";
    res["zeta"] = {{"numerator", strings(z.numerator)}, {"denominator", strings(z.denominator)}, {"text", text}};
    Json counts = Json::array();
    for (std::size_t m = 0; m < z.recovered.size(); ++m) {
        Json c;
        c["m"] = static_cast<int>(m + 1);
        c["recovered"] = str(z.recovered[m]);
        if (m < z.base_change.size()) c["trace_formula"] = str(z.base_change[m]);
        if (m < z.oracle.size()) c["brute_force"] = str(z.oracle[m]);
        counts.push_back(c);
    }
    res["counts"] = counts;
    res["lefschetz"] = {{"padic", z.lefschetz.to_string()},
                        {"rounded", z.lefschetz_rounded ? Json(str(*z.lefschetz_rounded)) : Json(nullptr)}};
    res["weil_check"] = z.weil_check ? Json(*z.weil_check) : Json(nullptr);

    Json ledger;
    ledger["working_precision"] = z.precision;
    ledger["required_precision"] = z.required_precision;
    ledger["auto_sized"] = z.auto_sized;
    ledger["attempts"] = z.attempts;
    ledger["series_terms"] = z.series_terms;
    Json loss = Json::array();
    for (const auto& F : z.frobenius) loss.push_back({{"degree", F.degree}, {"loss", F.loss}});
    ledger["frobenius_loss"] = loss;
    return {envelope("zeta", spec, res, ledger, z.pass), z.pass ? 0 : 1};
}

RunOutcome run_cohomology(const Json& spec, const Overrides& o) {
    const VarietyPresentation pres = parse_variety(spec);
    const std::uint64_t p = json_prime(spec);
    const int s = precision(spec, o, 6);
    const auto [D, E] = bounds(spec, o, 4, 2);
    const PrecisionPolicy pol(p, s, D, E);
    const Json& opts = section(spec, "cohomology");
    pres.check_smooth(p);

    bool pass = true;
    Json res;
    res["variety"] = pres.name();
    res["p"] = str(p);
    const StabilityReport st = stable_betti(pres, pol, 4, 2, true);
    res["dims"] = st.dims;
    res["stability"] = {{"bounds", {{"D", st.D}, {"E", st.E}}},
                        {"enlarged", {{"D", st.D2}, {"E", st.E2}}},
                        {"dims_enlarged", st.dims_enlarged},
                        {"stable", st.stable}};
    pass = pass && st.stable;
    if (!opts.contains("bases") || opts.at("bases").get<bool>()) {
        DeRhamComplex C(pres, p, s);
        Json bases = Json::array();
        for (int k = 0; k <= pres.dim(); ++k) {
            CohomologySpace H(C, k, D, E);
            Json b = Json::array();
            for (const auto& w : H.basis()) b.push_back(C.format(w));
            bases.push_back({{"degree", k}, {"basis", b}});
        }
        res["bases"] = bases;
    }
    if (opts.contains("homotopy") && opts.at("homotopy").get<bool>()) {
        const HomotopyReport h = homotopy_check(pres, pol);
        res["homotopy"] = {{"dims_X", h.dims_X}, {"dims_X_times_A1", h.dims_XA1}, {"pass", h.pass}};
        pass = pass && h.pass;
    }
    if (opts.contains("gysin")) {
        const Json& g = opts.at("gysin");
        GysinReport gr;
        if (g.is_object() && g.contains("points")) {
            gr = gysin_points(int_list(g.at("points"), "gysin points"), pol);
        } else if (g.is_object() && g.contains("axis") && g.at("axis").get<bool>()) {
            gr = gysin_axis(pol);
        } else {
            throw SchemaError("gysin must be {\"points\": [...]} or {\"axis\": true}");
        }
        res["gysin"] = {{"description", gr.description},
                        {"codim", gr.codim},
                        {"dims_X", gr.dims_X},
                        {"dims_U", gr.dims_U},
                        {"dims_Y", gr.dims_Y},
                        {"rank_restriction", gr.rank_restriction},
                        {"rank_residue", gr.rank_residue},
                        {"rank_gysin", gr.rank_gysin},
                        {"exact", gr.exact},
                        {"alternating_sum", gr.alternating_sum},
                        {"pass", gr.pass}};
        pass = pass && gr.pass;
    }
    Json ledger;
    ledger["precision"] = s;
    ledger["bounds"] = {{"D", D}, {"E", E}};
    return {envelope("cohomology", spec, res, ledger, pass), pass ? 0 : 1};
}

RunOutcome run_group(const Json& spec, const Overrides& o) {
    const Json& g = section(spec, "group");
    const std::uint64_t p = spec.is_object() && spec.contains("p") ? json_prime(spec) : json_prime(g, 5);
    int s = 4;
    if (o.precision) {
        s = *o.precision;
    } else if (g.contains("s")) {
        s = json_small(g, "s", 4, 2, 12);
    } else if (spec.is_object() && spec.contains("precision")) {
        s = json_small(spec, "precision", 4, 2, 12);
    }
    if (s < 2) throw SchemaError("group battery needs s >= 2");
    const int n = json_small(g, "n", 2, 0, 3);
    const int count = json_small(g, "count", 100, 1, 100000);
    const int deg = json_small(g, "degree", 2, 0, 6);
    std::uint64_t seed = 1;
    if (o.seed) {
        seed = *o.seed;
    } else if (spec.is_object() && spec.contains("seed")) {
        seed = static_cast<std::uint64_t>(json_int(spec, "seed"));
    }
    const BatteryResult b = group_battery(p, s, n, count, seed, deg);

    Json res;
    res["p"] = str(p);
    res["s"] = s;
    res["n"] = n;
    res["count"] = count;
    res["degree"] = deg;
    res["seed"] = str(seed);
    res["properties"] = battery_json(b);
    res["notes"] = b.notes;
    Json ledger;
    ledger["precision"] = s;
    return {envelope("group", spec, res, ledger, b.pass()), b.pass() ? 0 : 1};
}

RunOutcome run_localcoh(const Json& spec, const Overrides& o) {
    const Json& l = section(spec, "localcoh");
    const std::uint64_t p = json_prime(spec, 5);
    const int s = precision(spec, o, 3);
    const auto [D, E] = bounds(spec, o, 4, 4);
    const PrecisionPolicy pol(p, s, D, E);
    LocalSetup setup;
    setup.n = json_small(l, "n", 2, 1, 3);
    setup.A = json_small(l, "A", 3, 1, 6);
    if (l.contains("z")) {
        if (!l.at("z").is_array() || l.at("z").empty()) throw SchemaError("z must be a nonempty array of polynomials");
        for (const auto& f : l.at("z")) setup.z.push_back(parse_polynomial(f, pol, setup.n));
    } else {
        const int q = json_small(l, "q", setup.n, 1, setup.n);
        for (int i = 0; i < q; ++i) setup.z.push_back(TruncSeries::variable(pol, setup.n, i));
    }
    if (static_cast<int>(setup.z.size()) > setup.n) throw SchemaError("z has more entries than coordinates");
    if (l.contains("z_prime")) {
        if (!l.at("z_prime").is_array()) throw SchemaError("z_prime must be an array of polynomial lists");
        for (const auto& zp : l.at("z_prime")) {
            if (!zp.is_array() || zp.size() != setup.z.size()) throw SchemaError("each z_prime must have as many entries as z");
            std::vector<TruncSeries> v;
            for (const auto& f : zp) v.push_back(parse_polynomial(f, pol, setup.n));
            setup.z_prime.push_back(v);
        }
    }
    const BatteryResult b = localcoh_battery(setup, pol);

    Json res;
    res["p"] = str(p);
    res["n"] = setup.n;
    res["q"] = static_cast<int>(setup.z.size());
    Json z = Json::array();
    for (const auto& f : setup.z) z.push_back(polynomial_json(f));
    res["z"] = z;
    res["window"] = {{"D", D}, {"E", E}, {"weight", window_weight(pol)}};
    res["properties"] = battery_json(b);
    Json changes = Json::array();
    for (const auto& zp : setup.z_prime) {
        Json c;
        Json zj = Json::array();
        for (const auto& f : zp) zj.push_back(polynomial_json(f));
        c["z_prime"] = zj;
        try {
            const CoordinateChange cc = change_of_coordinates(setup.z, zp, pol);
            c["ideal_match"] = cc.ideal_match;
            c["det"] = polynomial_json(weight_reduce(cc.det, window_weight(pol)).rebound(D, E));
            c["equal"] = cc.equal;
        } catch (const DomainError& e) {
            c["error"] = e.what();
        }
        changes.push_back(c);
    }
    res["changes"] = changes;
    if (setup.z.size() <= 2 && setup.n <= 3) {
        const PurityReport pr = pure_dims(setup.z, pol);
        res["purity"] = {{"lengths", pr.lengths}, {"dims", pr.dims}, {"concentrated", pr.concentrated}};
    }
    res["notes"] = b.notes;
    Json ledger;
    ledger["precision"] = s;
    ledger["window_weight"] = window_weight(pol);
    return {envelope("localcoh", spec, res, ledger, b.pass()), b.pass() ? 0 : 1};
}

Json error_report(const std::string& command, const std::string& kind, const std::string& message) {
    Json r;
    r["report_version"] = kReportVersion;
    r["command"] = command;
    r["verdict"] = "ERROR";
    r["error"] = {{"kind", kind}, {"message", message}};
    return r;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace dagger
