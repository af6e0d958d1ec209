#include "semilin/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "semilin/errors.hpp"

namespace semilin {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw validation_error("config error at " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) fail(where + "/" + item.key(), "unknown key");
}

double as_double(const json& obj, const std::string& where, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "/" + key, "expected a number");
    return v.get<double>();
}

double req_double(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    return as_double(obj, where, key, 0.0);
}

long as_long(const json& obj, const std::string& where, const char* key, long dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
    return v.get<long>();
}

std::string as_string(const json& obj, const std::string& where, const char* key,
                      const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "/" + key, "expected a string");
    return v.get<std::string>();
}

FunctionSpec fn_from_json(const json& obj, const std::string& where) {
    check_keys(obj, where, {"kind", "scale", "knots_x", "knots_y"});
    std::string kind = as_string(obj, where, "kind", "linear");
    if (kind == "custom-table") {
        if (!obj.contains("knots_x") || !obj.contains("knots_y"))
            fail(where, "custom-table needs knots_x and knots_y");
        std::vector<double> xs = obj.at("knots_x").get<std::vector<double>>();
        std::vector<double> ys = obj.at("knots_y").get<std::vector<double>>();
        return FunctionSpec::custom_table(std::move(xs), std::move(ys));
    }
    double scale = as_double(obj, where, "scale", 1.0);
    switch (fn_kind_from_name(kind)) {
        case FnKind::Linear: return FunctionSpec::linear(scale);
        case FnKind::ScaledSine: return FunctionSpec::scaled_sine(scale);
        case FnKind::ScaledTanh: return FunctionSpec::scaled_tanh(scale);
        case FnKind::SaturatingRamp: return FunctionSpec::saturating_ramp(scale);
        default: break;
    }
    fail(where, "unknown function kind " + kind);
}

json fn_to_json(const FunctionSpec& f) {
    json j;
    j["kind"] = f.kind_name();
    if (f.kind == FnKind::CustomTable) {
        j["knots_x"] = f.knots_x;
        j["knots_y"] = f.knots_y;
    } else {
        j["scale"] = f.scale;
    }
    return j;
}

NoiseSpec noise_from_json(const json& obj, const std::string& where) {
    check_keys(obj, where,
               {"kind", "gamma", "varsigma2", "varsigma2_schedule", "b", "b0"});
    NoiseSpec noise;
    noise.kind = noise_kind_from_name(as_string(obj, where, "kind", "iid-bounded"));
    if (obj.contains("gamma")) {
        const json& g = obj.at("gamma");
        check_keys(g, where + "/gamma", {"kind", "trunc"});
        noise.gamma.kind = gamma_kind_from_name(as_string(g, where + "/gamma", "kind", "uniform"));
        noise.gamma.trunc = as_double(g, where + "/gamma", "trunc", 6.0);
    }
    noise.varsigma2 = as_double(obj, where, "varsigma2", 1.0);
    if (obj.contains("varsigma2_schedule"))
        noise.varsigma2_schedule = obj.at("varsigma2_schedule").get<std::vector<double>>();
    if (obj.contains("b")) noise.b = fn_from_json(obj.at("b"), where + "/b");
    noise.b0 = as_double(obj, where, "b0", 1.0);
    return noise;
}

json noise_to_json(const NoiseSpec& noise) {
    json j;
    j["kind"] = noise.kind_name();
    j["gamma"] = {{"kind", noise.gamma.kind_name()}, {"trunc", noise.gamma.trunc}};
    j["varsigma2"] = noise.varsigma2;
    if (!noise.varsigma2_schedule.empty()) j["varsigma2_schedule"] = noise.varsigma2_schedule;
    j["b"] = fn_to_json(noise.b);
    j["b0"] = noise.b0;
    return j;
}

ModelSpec model_from_json(const json& obj, const std::string& where) {
    check_keys(obj, where, {"a", "f", "noise", "xi0", "xi0_halfwidth"});
    ModelSpec model;
    model.a = req_double(obj, where, "a");
    if (obj.contains("f")) model.f = fn_from_json(obj.at("f"), where + "/f");
    if (obj.contains("noise")) model.noise = noise_from_json(obj.at("noise"), where + "/noise");
    model.xi0 = as_double(obj, where, "xi0", 0.0);
    model.xi0_halfwidth = as_double(obj, where, "xi0_halfwidth", 0.0);
    try {
        model.validate();
    } catch (const validation_error& e) {
        fail(where, e.what());
    }
    return model;
}

json model_to_json(const ModelSpec& model) {
    json j;
    j["a"] = model.a;
    j["f"] = fn_to_json(model.f);
    j["noise"] = noise_to_json(model.noise);
    j["xi0"] = model.xi0;
    j["xi0_halfwidth"] = model.xi0_halfwidth;
    return j;
}

WeightScheme scheme_from_json(const json& v, const std::string& where) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "lse") return WeightScheme::lse();
        if (s == "optimal") return WeightScheme::optimal();
        fail(where, "unknown scheme name " + s);
    }
    check_keys(v, where, {"kind", "h", "label"});
    std::string kind = as_string(v, where, "kind", "custom");
    if (kind == "lse") return WeightScheme::lse();
    if (kind == "optimal") return WeightScheme::optimal();
    if (kind != "custom") fail(where, "unknown scheme kind " + kind);
    if (!v.contains("h")) fail(where, "custom scheme needs an 'h' function");
    FunctionSpec h = fn_from_json(v.at("h"), where + "/h");
    return WeightScheme::custom(std::move(h), as_string(v, where, "label", "custom"));
}

json scheme_to_json(const WeightScheme& s) {
    if (s.kind == SchemeKind::LSE) return json("lse");
    if (s.kind == SchemeKind::Optimal) return json("optimal");
    json j;
    j["kind"] = "custom";
    j["h"] = fn_to_json(s.custom_h);
    j["label"] = s.label;
    return j;
}

ContinuousRunSpec continuous_from_json(const json& obj, const std::string& where) {
    check_keys(obj, where, {"a", "f", "mdot", "xi0", "T", "dt", "h", "reps"});
    ContinuousRunSpec spec;
    spec.model.a = req_double(obj, where, "a");
    if (obj.contains("f")) spec.model.f = fn_from_json(obj.at("f"), where + "/f");
    if (obj.contains("mdot")) {
        const json& m = obj.at("mdot");
        check_keys(m, where + "/mdot", {"base", "amp", "freq"});
        spec.model.mdot.base = as_double(m, where + "/mdot", "base", 1.0);
        spec.model.mdot.amp = as_double(m, where + "/mdot", "amp", 0.0);
        spec.model.mdot.freq = as_double(m, where + "/mdot", "freq", 1.0);
    }
    spec.model.xi0 = as_double(obj, where, "xi0", 0.0);
    spec.T = as_double(obj, where, "T", 100.0);
    spec.dt = as_double(obj, where, "dt", 0.01);
    spec.h = as_string(obj, where, "h", "lse");
    if (spec.h != "lse" && spec.h != "optimal") fail(where + "/h", "expected 'lse' or 'optimal'");
    spec.reps = as_long(obj, where, "reps", 1);
    try {
        spec.model.validate();
    } catch (const validation_error& e) {
        fail(where, e.what());
    }
    return spec;
}

json continuous_to_json(const ContinuousRunSpec& spec) {
    json j;
    j["a"] = spec.model.a;
    j["f"] = fn_to_json(spec.model.f);
    j["mdot"] = {{"base", spec.model.mdot.base},
                 {"amp", spec.model.mdot.amp},
                 {"freq", spec.model.mdot.freq}};
    j["xi0"] = spec.model.xi0;
    j["T"] = spec.T;
    j["dt"] = spec.dt;
    j["h"] = spec.h;
    j["reps"] = spec.reps;
    return j;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + p.string());
    return out;
}

}  // namespace

RunMode run_mode_from_name(const std::string& name) {
    if (name == "simulate") return RunMode::Simulate;
    if (name == "estimate") return RunMode::Estimate;
    if (name == "monte-carlo") return RunMode::MonteCarlo;
    if (name == "compare") return RunMode::Compare;
    if (name == "continuous") return RunMode::Continuous;
    if (name == "diagnostics") return RunMode::Diagnostics;
    throw validation_error("unknown mode: " + name);
}

std::string run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Simulate: return "simulate";
        case RunMode::Estimate: return "estimate";
        case RunMode::MonteCarlo: return "monte-carlo";
        case RunMode::Compare: return "compare";
        case RunMode::Continuous: return "continuous";
        case RunMode::Diagnostics: return "diagnostics";
    }
    return "?";
}

ExperimentConfig RunConfig::experiment() const {
    ExperimentConfig cfg;
    cfg.model = model;
    cfg.schemes = schemes;
    cfg.n = n;
    cfg.reps = reps;
    cfg.time_grid = time_grid;
    cfg.master_seed = seed;
    cfg.burn_in = burn_in;
    return cfg;
}

void RunConfig::validate() const {
    if (format_version != 1) throw validation_error("unsupported format_version");
    model.validate();
    for (const auto& s : schemes) s.validate();
    if (n < 1) throw validation_error("n must be >= 1");
    if (reps < 1) throw validation_error("reps must be >= 1");
    if (mode == RunMode::MonteCarlo || mode == RunMode::Compare) experiment().validate();
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte offset; convert to a line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw validation_error("config syntax error at line " + std::to_string(line) + ": " +
                               e.what());
    }

    check_keys(root, "$",
               {"format_version", "mode", "model", "experiment", "continuous", "diagnostics",
                "seed", "output_dir", "series_file"});
    RunConfig cfg;
    cfg.format_version = static_cast<int>(as_long(root, "$", "format_version", 1));
    if (cfg.format_version != 1) fail("$/format_version", "only format_version 1 is supported");
    cfg.mode = run_mode_from_name(as_string(root, "$", "mode", "simulate"));
    if (root.contains("model")) cfg.model = model_from_json(root.at("model"), "$/model");
    if (root.contains("experiment")) {
        const json& e = root.at("experiment");
        check_keys(e, "$/experiment", {"n", "reps", "time_grid", "schemes", "burn_in"});
        cfg.n = as_long(e, "$/experiment", "n", cfg.n);
        cfg.reps = as_long(e, "$/experiment", "reps", cfg.reps);
        if (e.contains("time_grid")) cfg.time_grid = e.at("time_grid").get<std::vector<double>>();
        if (e.contains("schemes")) {
            cfg.schemes.clear();
            const json& arr = e.at("schemes");
            if (!arr.is_array()) fail("$/experiment/schemes", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i)
                cfg.schemes.push_back(
                    scheme_from_json(arr[i], "$/experiment/schemes/" + std::to_string(i)));
        }
        cfg.burn_in = as_long(e, "$/experiment", "burn_in", 0);
    }
    if (root.contains("continuous"))
        cfg.continuous = continuous_from_json(root.at("continuous"), "$/continuous");
    if (root.contains("diagnostics")) {
        const json& d = root.at("diagnostics");
        check_keys(d, "$/diagnostics", {"r_grid", "n_grid"});
        if (d.contains("r_grid")) cfg.diagnostics.r_grid = d.at("r_grid").get<std::vector<long>>();
        if (d.contains("n_grid")) cfg.diagnostics.n_grid = d.at("n_grid").get<std::vector<long>>();
    }
    cfg.seed = static_cast<std::uint64_t>(as_long(root, "$", "seed", 0));
    cfg.output_dir = as_string(root, "$", "output_dir", "out");
    cfg.series_file = as_string(root, "$", "series_file", "");
    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["format_version"] = cfg.format_version;
    root["mode"] = run_mode_name(cfg.mode);
    root["model"] = model_to_json(cfg.model);
    json e;
    e["n"] = cfg.n;
    e["reps"] = cfg.reps;
    e["time_grid"] = cfg.time_grid;
    json schemes = json::array();
    for (const auto& s : cfg.schemes) schemes.push_back(scheme_to_json(s));
    e["schemes"] = schemes;
    e["burn_in"] = cfg.burn_in;
    root["experiment"] = e;
    root["continuous"] = continuous_to_json(cfg.continuous);
    root["diagnostics"] = {{"r_grid", cfg.diagnostics.r_grid}, {"n_grid", cfg.diagnostics.n_grid}};
    root["seed"] = cfg.seed;
    // output_dir is a runtime destination, not part of the experiment
    // identity: the same run replayed into a different directory must
    // produce byte-identical config echoes and hashes
    root["series_file"] = cfg.series_file;
    return root.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) {
    // FNV-1a over the normalized serialization.
    std::string s = serialize_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

IngestedSeries ingest_series(const std::string& text) {
    IngestedSeries out;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    bool header_seen = false;
    bool has_sigma2 = false;
    long expected_k = 0;
    std::vector<double> xi, sigma2;

    auto parse_cell = [&](const std::string& cell, const char* what) {
        char* end = nullptr;
        const char* s = cell.c_str();
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw validation_error("series line " + std::to_string(lineno) + ": non-numeric " +
                                   what + " cell '" + cell + "'");
        return v;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string key = line.substr(1, colon - 1);
                std::string val = line.substr(colon + 1);
                auto trim = [](std::string& s) {
                    s.erase(0, s.find_first_not_of(" \t"));
                    s.erase(s.find_last_not_of(" \t") + 1);
                };
                trim(key);
                trim(val);
                if (key == "variance_fn") out.variance_fn = val;
            }
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            if (cells.size() == 2 && cells[0] == "k" && cells[1] == "xi")
                has_sigma2 = false;
            else if (cells.size() == 3 && cells[0] == "k" && cells[1] == "xi" &&
                     cells[2] == "sigma2")
                has_sigma2 = true;
            else
                throw validation_error("series line " + std::to_string(lineno) +
                                       ": header must be 'k,xi' or 'k,xi,sigma2'");
            header_seen = true;
            continue;
        }
        if (cells.size() != (has_sigma2 ? 3u : 2u))
            throw validation_error("series line " + std::to_string(lineno) +
                                   ": wrong number of columns");
        double kval = parse_cell(cells[0], "index");
        long k = static_cast<long>(kval);
        if (static_cast<double>(k) != kval || k != expected_k)
            throw validation_error("series line " + std::to_string(lineno) +
                                   ": indices must be contiguous from 0; expected k = " +
                                   std::to_string(expected_k));
        ++expected_k;
        xi.push_back(parse_cell(cells[1], "xi"));
        if (has_sigma2) {
            double s2 = parse_cell(cells[2], "sigma2");
            if (!(s2 > 0.0))
                throw validation_error("series line " + std::to_string(lineno) +
                                       ": sigma2 must be strictly positive");
            sigma2.push_back(s2);
        }
    }
    if (!header_seen) throw validation_error("series file has no header line");
    if (xi.size() < 2) throw validation_error("series needs at least two rows (xi_0 and xi_1)");

    out.path.xi = std::move(xi);
    out.has_sigma2 = has_sigma2;
    if (has_sigma2) {
        // Row k >= 1 carries sigma^2_k; the k = 0 cell is a placeholder.
        out.path.sigma2.assign(sigma2.begin() + 1, sigma2.end());
    }
    return out;
}

IngestedSeries ingest_series_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw io_error("cannot open series file: " + filename);
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_series(buf.str());
}

void write_series(const std::string& dir, const DiscretePath& path) {
    auto out = open_out(dir, "series.csv");
    out << "# semilin series v1\n";
    const bool have_s2 = static_cast<long>(path.sigma2.size()) == path.n();
    out << (have_s2 ? "k,xi,sigma2\n" : "k,xi\n");
    for (std::size_t k = 0; k < path.xi.size(); ++k) {
        out << k << ',' << fmt17(path.xi[k]);
        if (have_s2) {
            // k = 0 has no conditional variance; repeat sigma^2_1 so the
            // column stays positive and the file round-trips.
            std::size_t idx = k == 0 ? 0 : k - 1;
            out << ',' << fmt17(path.sigma2[idx]);
        }
        out << '\n';
    }
}

void write_estimates(const std::string& dir,
                     const std::vector<std::pair<std::string, EstimateResult>>& results) {
    auto out = open_out(dir, "estimates.csv");
    out << "scheme,n,a_hat,Q_n,G_n,V_n,denominator_magnitude\n";
    for (const auto& [name, r] : results)
        out << name << ',' << r.n << ',' << fmt17(r.a_hat) << ',' << fmt17(r.Q_n) << ','
            << fmt17(r.G_n) << ',' << fmt17(r.V_n) << ',' << fmt17(r.denominator_magnitude)
            << '\n';
}

void write_mc_summary(const std::string& dir, const McSummary& summary) {
    {
        auto out = open_out(dir, "deviations.csv");
        out << "scheme,t,mean,variance,d10,d20,d30,d40,d50,d60,d70,d80,d90\n";
        for (const auto& ss : summary.schemes)
            for (std::size_t ti = 0; ti < summary.time_grid.size(); ++ti) {
                const auto& st = ss.by_time[ti];
                out << ss.scheme << ',' << fmt17(summary.time_grid[ti]) << ',' << fmt17(st.mean)
                    << ',' << fmt17(st.variance);
                for (double d : st.deciles) out << ',' << fmt17(d);
                out << '\n';
            }
    }
    {
        auto out = open_out(dir, "schemes.csv");
        out << "scheme,vn_mean,vn_q25,vn_q75,degenerate\n";
        for (const auto& ss : summary.schemes)
            out << ss.scheme << ',' << fmt17(ss.vn_mean) << ',' << fmt17(ss.vn_q25) << ','
                << fmt17(ss.vn_q75) << ',' << ss.degenerate << '\n';
    }
    {
        // long format for external plotting
        auto out = open_out(dir, "long.csv");
        out << "scheme,t,statistic,value\n";
        for (const auto& ss : summary.schemes) {
            for (std::size_t ti = 0; ti < summary.time_grid.size(); ++ti) {
                const auto& st = ss.by_time[ti];
                std::string t = fmt17(summary.time_grid[ti]);
                out << ss.scheme << ',' << t << ",mean," << fmt17(st.mean) << '\n';
                out << ss.scheme << ',' << t << ",variance," << fmt17(st.variance) << '\n';
                for (int d = 1; d <= 9; ++d)
                    out << ss.scheme << ',' << t << ",d" << d * 10 << ','
                        << fmt17(st.deciles[static_cast<std::size_t>(d - 1)]) << '\n';
            }
            out << ss.scheme << ",1,vn_mean," << fmt17(ss.vn_mean) << '\n';
            out << ss.scheme << ",1,vn_q25," << fmt17(ss.vn_q25) << '\n';
            out << ss.scheme << ",1,vn_q75," << fmt17(ss.vn_q75) << '\n';
            out << ss.scheme << ",1,degenerate," << ss.degenerate << '\n';
        }
    }
}

void write_comparison(const std::string& dir, const std::vector<ComparisonRow>& rows) {
    auto out = open_out(dir, "comparison.csv");
    out << "scheme,dev_variance,vn_mean,predicted_V,degenerate\n";
    for (const auto& r : rows)
        out << r.scheme << ',' << fmt17(r.dev_variance) << ',' << fmt17(r.vn_mean) << ','
            << fmt17(r.predicted_V) << ',' << r.degenerate << '\n';
}

void write_diagnostics(const std::string& dir, const DiagnosticsTable& table) {
    {
        auto out = open_out(dir, "diagnostics_v.csv");
        out << "r,n,V\n";
        std::size_t idx = 0;
        for (long r : table.r_grid)
            for (long n : table.n_grid) out << r << ',' << n << ',' << fmt17(table.v_estimates[idx++]) << '\n';
    }
    {
        auto out = open_out(dir, "diagnostics_dispersion.csv");
        out << "n,q_stddev,g_stddev\n";
        for (std::size_t i = 0; i < table.n_grid.size(); ++i)
            out << table.n_grid[i] << ',' << fmt17(table.q_dispersion[i]) << ','
                << fmt17(table.g_dispersion[i]) << '\n';
    }
}

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<std::string>& files) {
    {
        auto out = open_out(dir, "config.json");
        out << serialize_config(cfg);
    }
    auto out = open_out(dir, "manifest.json");
    json m;
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    m["config_hash"] = hash;
    m["master_seed"] = cfg.seed;
    m["tool_version"] = kToolVersion;
    m["mode"] = run_mode_name(cfg.mode);
    json fl = json::array();
    fl.push_back("config.json");
    for (const auto& f : files) fl.push_back(f);
    m["files"] = fl;
    out << m.dump(2) << "\n";
}

}  // namespace semilin
