#include "nutaxis/io.hpp"

#include "nutaxis/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nutaxis {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

// Reads one JSON object section, remembering which keys were consumed so the
// leftovers can be reported.
class Section {
public:
    Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) throw ConfigError(where() + " must be an object");
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    const json& raw(const std::string& key) {
        if (!doc_.contains(key)) throw ConfigError("missing key " + where(key));
        used_.insert(key);
        return doc_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
        return v.get<int>();
    }

    int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
        return v.get<std::string>();
    }

    bool boolean_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(where(key) + " must be a boolean");
        return v.get<bool>();
    }

    Section child(const std::string& key) { return Section(raw(key), path(key)); }

    void finish() const {
        for (auto it = doc_.begin(); it != doc_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key " + where(it.key()));
    }

    std::string path(const std::string& key = {}) const { return key.empty() ? path_ : path_ + "/" + key; }

    std::string where(const std::string& key = {}) const {
        const std::string p = path(key);
        return "'" + (p.empty() ? std::string("/") : p) + "'";
    }

private:
    const json& doc_;
    std::string path_;
    std::set<std::string> used_;
};

json profile_to_json(const InitialProfile& p) {
    if (p.kind == ProfileKind::constant) return {{"kind", "constant"}, {"value", p.base}};
    return {{"kind", "gaussian"}, {"base", p.base},     {"amp", p.amp},
            {"rate", p.rate},     {"center", p.center}, {"mirrored", p.mirrored}};
}

InitialProfile profile_from(Section s) {
    const std::string kind = s.string("kind");
    InitialProfile p;
    if (kind == "constant") {
        p = InitialProfile::constant(s.number("value"));
    } else if (kind == "gaussian") {
        p = InitialProfile::gaussian(s.number("base"), s.number("amp"), s.number("rate"), s.number("center"));
        p.mirrored = s.boolean_or("mirrored", false);
    } else {
        throw ConfigError("unknown profile kind '" + kind + "' at " + s.where("kind"));
    }
    s.finish();
    return p;
}

template <typename Fn>
auto wrap_invalid(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidArgument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

json to_json(const ScenarioConfig& c) {
    json geo;
    if (c.geometry.kind == GeometryKind::interval)
        geo = {{"kind", "interval"}, {"x_lo", c.geometry.x_lo}, {"x_hi", c.geometry.x_hi},
               {"n_cells", c.geometry.n_cells}};
    else
        geo = {{"kind", "radial"}, {"dim", c.geometry.dim}, {"radius", c.geometry.radius},
               {"n_cells", c.geometry.n_cells}};
    const ModelParams& p = c.params;
    const StepperConfig& s = c.stepper;
    return {
        {"name", c.name},
        {"geometry", geo},
        {"params",
         {{"D_u", p.D_u}, {"D_w", p.D_w}, {"chi", p.chi}, {"alpha", p.alpha}, {"beta", p.beta},
          {"gamma", p.gamma}, {"delta", p.delta}, {"eps_reg", p.eps_reg}}},
        {"initial",
         {{"u", profile_to_json(c.initial.u)}, {"v", profile_to_json(c.initial.v)},
          {"w", profile_to_json(c.initial.w)}}},
        {"t_end", c.t_end},
        {"output", {{"first", c.output.first}, {"factor", c.output.factor}}},
        {"stepper",
         {{"dt", s.dt}, {"dt_min", s.dt_min}, {"cfl_safety", s.cfl_safety},
          {"reaction_safety", s.reaction_safety}, {"positivity_floor", s.positivity_floor},
          {"max_retries", s.max_retries}, {"min_steps_per_segment", s.min_steps_per_segment},
          {"scheme", to_string(s.scheme)}, {"flux", to_string(s.flux)}}},
    };
}

ScenarioConfig config_from_json(const json& doc) {
    Section root(doc, "");
    ScenarioConfig c;
    if (root.has("name")) c.name = root.string("name");

    {
        Section g = root.child("geometry");
        const std::string kind = g.string("kind");
        if (kind == "interval") {
            c.geometry = Geometry::interval(g.number("x_lo"), g.number("x_hi"), g.integer("n_cells"));
        } else if (kind == "radial") {
            c.geometry = Geometry::ball(g.integer("dim"), g.number("radius"), g.integer("n_cells"));
        } else {
            throw ConfigError("unknown geometry kind '" + kind + "' at " + g.where("kind"));
        }
        g.finish();
    }
    {
        Section p = root.child("params");
        ModelParams& m = c.params;
        m.D_u = p.number("D_u");
        m.D_w = p.number("D_w");
        m.chi = p.number("chi");
        m.alpha = p.number("alpha");
        m.beta = p.number("beta");
        m.gamma = p.number("gamma");
        m.delta = p.number("delta");
        m.eps_reg = p.number_or("eps_reg", 0.0);
        p.finish();
    }
    {
        Section init = root.child("initial");
        c.initial.u = profile_from(init.child("u"));
        c.initial.v = profile_from(init.child("v"));
        c.initial.w = profile_from(init.child("w"));
        init.finish();
    }
    c.t_end = root.number("t_end");
    {
        Section o = root.child("output");
        c.output.first = o.number("first");
        c.output.factor = o.number("factor");
        o.finish();
    }
    if (root.has("stepper")) {
        Section s = root.child("stepper");
        StepperConfig& st = c.stepper;
        st.dt = s.number_or("dt", st.dt);
        st.dt_min = s.number_or("dt_min", st.dt_min);
        st.cfl_safety = s.number_or("cfl_safety", st.cfl_safety);
        st.reaction_safety = s.number_or("reaction_safety", st.reaction_safety);
        st.positivity_floor = s.number_or("positivity_floor", st.positivity_floor);
        st.max_retries = s.integer_or("max_retries", st.max_retries);
        st.min_steps_per_segment = s.integer_or("min_steps_per_segment", st.min_steps_per_segment);
        if (s.has("scheme"))
            st.scheme = wrap_invalid(s.where("scheme"), [&] { return time_scheme_from_string(s.string("scheme")); });
        if (s.has("flux"))
            st.flux = wrap_invalid(s.where("flux"), [&] { return flux_scheme_from_string(s.string("flux")); });
        s.finish();
    }
    root.finish();
    wrap_invalid("config", [&] {
        c.validate();
        return 0;
    });
    return c;
}

ScenarioConfig config_from_document(const json& doc) {
    if (!doc.is_object() || !doc.contains("preset")) return config_from_json(doc);
    Section s(doc, "");
    const std::string name = s.string("preset");
    const std::string variant = s.string("variant");
    ScenarioConfig c = preset(name, variant);
    if (s.has("n_cells")) c.geometry.n_cells = s.integer("n_cells");
    if (s.has("t_end")) c.t_end = s.number("t_end");
    if (s.has("dt")) c.stepper.dt = s.number("dt");
    if (s.has("name")) c.name = s.string("name");
    c.stepper.dt_min = std::min(c.stepper.dt_min, c.stepper.dt);
    s.finish();
    wrap_invalid("preset", [&] {
        c.validate();
        return 0;
    });
    return c;
}

json to_json(const DerivedConstants& c) {
    return {{"kappa", c.kappa},           {"kappa_cells", c.kappa_cells},
            {"a", c.a},                   {"b", c.b},
            {"M_star", c.M_star},         {"sigma_star", c.sigma_star},
            {"w0_max_cells", c.w0_max_cells}, {"jensen_c1", c.jensen_c1},
            {"v0_min", c.v0_min},         {"v0_max", c.v0_max},
            {"u0_mass", c.u0_mass},       {"w0_mass", c.w0_mass},
            {"w0_sq", c.w0_sq}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

ScenarioConfig read_config(const std::filesystem::path& path) {
    try {
        return config_from_document(read_json_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
    write_json_file(to_json(cfg), path);
}

void write_records(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    const auto& names = DiagnosticsRecord::field_names();
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
    out << '\n';
    for (const auto& r : records) {
        const auto vals = r.values();
        for (std::size_t k = 0; k < vals.size(); ++k) out << (k ? "," : "") << format_double(vals[k]);
        out << '\n';
    }
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::vector<DiagnosticsRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
    {
        std::string expected;
        for (const auto& n : DiagnosticsRecord::field_names()) expected += (expected.empty() ? "" : ",") + std::string(n);
        if (line != expected) throw ConfigError(path.string() + ":1: unexpected header");
    }
    std::vector<DiagnosticsRecord> out;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<double, DiagnosticsRecord::kFieldCount> vals{};
        std::stringstream ss(line);
        std::string cell;
        std::size_t k = 0;
        while (std::getline(ss, cell, ',')) {
            if (k >= vals.size()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": too many columns");
            try {
                std::size_t used = 0;
                vals[k] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            ++k;
        }
        if (k != vals.size()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": too few columns");
        out.push_back(DiagnosticsRecord::from_values(vals));
    }
    return out;
}

json make_manifest(const ScenarioResult& r) {
    json audits = json::array();
    for (const auto& c : r.audits.checks)
        audits.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"worst_slack", std::isfinite(c.worst_slack) ? json(c.worst_slack) : json(nullptr)},
                          {"worst_time", c.worst_time}});
    const Grid& g = r.grid;
    return {
        {"version", kVersion},
        {"config", to_json(r.config)},
        {"constants", to_json(r.constants)},
        {"grid",
         {{"kind", to_string(g.geometry.kind)}, {"n_cells", g.size()}, {"h", g.h},
          {"measure", g.total_measure()}, {"exact_measure", g.geometry.measure()}}},
        {"steps",
         {{"accepted", r.stats.accepted}, {"rejected", r.stats.rejected}, {"restarts", r.stats.restarts},
          {"w_fallbacks", r.stats.w_fallbacks}, {"min_dt", r.stats.min_dt}, {"max_dt", r.stats.max_dt}}},
        {"audits", audits},
        {"audits_passed", r.audits.passed()},
        {"initial_index", r.initial_index},
        {"final_index", r.records.empty() ? 0.0 : r.records.back().I},
        {"threads", 1},
        {"wall_seconds", r.wall_seconds},
    };
}

void write_manifest(const ScenarioResult& result, const std::filesystem::path& path) {
    write_json_file(make_manifest(result), path);
}

SweepSpec sweep_from_json(const json& doc) {
    Section root(doc, "");
    SweepSpec spec;
    spec.base = root.raw("base");
    if (root.has("mode")) {
        const std::string mode = root.string("mode");
        if (mode == "cartesian")
            spec.mode = SweepMode::cartesian;
        else if (mode == "zip")
            spec.mode = SweepMode::zip;
        else
            throw ConfigError("unknown sweep mode '" + mode + "'");
    }
    if (root.has("overrides")) {
        const json& list = root.raw("overrides");
        if (!list.is_array()) throw ConfigError("'/overrides' must be an array");
        for (std::size_t k = 0; k < list.size(); ++k) {
            Section o(list[k], "/overrides/" + std::to_string(k));
            SweepOverride ov;
            ov.path = o.string("path");
            const json& vals = o.raw("values");
            if (!vals.is_array()) throw ConfigError(o.where("values") + " must be an array");
            ov.values.assign(vals.begin(), vals.end());
            o.finish();
            spec.overrides.push_back(std::move(ov));
        }
    }
    root.finish();
    return spec;
}

void write_sweep_table(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << "run,label,status,M_star,sigma_star,final_I,final_sign,audits_passed,error\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        std::string err = r.error;
        for (char& ch : err)
            if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
        std::string label = r.label;
        for (char& ch : label)
            if (ch == ',') ch = ';';
        out << k << ',' << label << ',' << (r.ok ? "ok" : "failed") << ',' << format_double(r.M_star) << ','
            << format_double(r.sigma_star) << ',' << format_double(r.final_I) << ',' << r.final_sign << ','
            << (r.audits_passed ? 1 : 0) << ',' << err << '\n';
    }
}

}  // namespace nutaxis
