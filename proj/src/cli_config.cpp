#include <fstream>

#include <json.hpp>

#include "rmcurve/cli.hpp"
#include "rmcurve/errors.hpp"

namespace rmcurve::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
}

template <typename T>
T get_as(const json& j, const std::string& field) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        fail(field, "unexpected type");
    }
}

} // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }

    // summary.json echo: unwrap the resolved config
    if (doc.is_object() && doc.contains("config") && doc.contains("tool"))
        doc = doc.at("config");
    if (!doc.is_object()) fail("<root>", "config must be a JSON object");

    RunConfig cfg;

    if (!doc.contains("model") || !doc["model"].contains("endpoints"))
        fail("model.endpoints", "missing");
    const json& eps = doc["model"]["endpoints"];
    if (!eps.is_array() || eps.empty()) fail("model.endpoints", "must be a non-empty array");
    for (size_t i = 0; i < eps.size(); ++i) {
        std::string fld = "model.endpoints[" + std::to_string(i) + "]";
        const json& e = eps[i];
        if (!e.is_object() || !e.contains("a") || !e.contains("fraction"))
            fail(fld, "needs fields a and fraction");
        cfg.endpoints.push_back(get_as<double>(e["a"], fld + ".a"));
        const json& f = e["fraction"];
        if (!f.is_object() || !f.contains("num") || !f.contains("den"))
            fail(fld + ".fraction", "needs integer fields num and den");
        auto num = get_as<std::int64_t>(f["num"], fld + ".fraction.num");
        auto den = get_as<std::int64_t>(f["den"], fld + ".fraction.den");
        if (den <= 0 || num <= 0) fail(fld + ".fraction", "must be a positive rational");
        cfg.fractions.push_back(make_fraction(num, den));
    }
    if (!sums_to_one(cfg.fractions)) fail("model.endpoints", "fractions sum != 1");
    {
        std::vector<double> a = cfg.endpoints;
        std::sort(a.begin(), a.end());
        for (size_t i = 1; i < a.size(); ++i)
            if (a[i] == a[i - 1]) fail("model.endpoints", "duplicate eigenvalues");
    }

    if (doc.contains("time")) {
        const json& t = doc["time"];
        if (t.contains("t")) {
            cfg.t = get_as<double>(t["t"], "time.t");
            if (!(*cfg.t > 0.0 && *cfg.t < 1.0)) fail("time.t", "must lie in (0,1)");
        }
        if (t.contains("grid")) {
            auto grid = get_as<std::vector<double>>(t["grid"], "time.grid");
            for (double v : grid)
                if (!(v > 0.0 && v < 1.0)) fail("time.grid", "entries must lie in (0,1)");
            cfg.t_grid = std::move(grid);
        }
    }

    if (doc.contains("sampling")) {
        const json& s = doc["sampling"];
        if (s.contains("N")) cfg.n = get_as<int>(s["N"], "sampling.N");
        if (s.contains("draws")) cfg.draws = get_as<int>(s["draws"], "sampling.draws");
        if (s.contains("seed")) cfg.seed = get_as<std::uint64_t>(s["seed"], "sampling.seed");
        if (s.contains("bins")) cfg.bins = get_as<int>(s["bins"], "sampling.bins");
    }
    if (cfg.n < 1) fail("sampling.N", "must be positive");
    if (cfg.draws < 1) fail("sampling.draws", "must be positive");
    if (cfg.bins < 1) fail("sampling.bins", "must be positive");
    for (size_t i = 0; i < cfg.fractions.size(); ++i)
        if ((cfg.n * cfg.fractions[i].numerator()) % cfg.fractions[i].denominator() != 0)
            fail("sampling.N", "N=" + std::to_string(cfg.n) + " not multiple of " +
                                   std::to_string(cfg.fractions[i].denominator()));

    if (doc.contains("analysis")) {
        const json& a = doc["analysis"];
        if (a.contains("points_per_cut"))
            cfg.points_per_cut = get_as<int>(a["points_per_cut"], "analysis.points_per_cut");
        if (a.contains("bulk_window")) {
            auto w = get_as<std::vector<double>>(a["bulk_window"], "analysis.bulk_window");
            if (w.size() != 2 || !(w[0] < w[1]))
                fail("analysis.bulk_window", "must be [lo, hi] with lo < hi");
            cfg.bulk_window = std::make_pair(w[0], w[1]);
        }
        if (a.contains("edges"))
            cfg.edges = get_as<std::vector<int>>(a["edges"], "analysis.edges");
        if (a.contains("convention")) {
            auto c = get_as<std::string>(a["convention"], "analysis.convention");
            if (c == "paper")
                cfg.convention = evolution::ScaleConvention::Paper;
            else if (c == "sqrt")
                cfg.convention = evolution::ScaleConvention::Sqrt;
            else
                fail("analysis.convention", "must be \"paper\" or \"sqrt\"");
        }
    }
    if (cfg.points_per_cut < 2) fail("analysis.points_per_cut", "must be at least 2");

    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (o.contains("dir")) cfg.out_dir = get_as<std::string>(o["dir"], "output.dir");
        if (o.contains("formats")) {
            auto fs = get_as<std::vector<std::string>>(o["formats"], "output.formats");
            cfg.write_csv = cfg.write_json = false;
            for (const auto& f : fs) {
                if (f == "csv")
                    cfg.write_csv = true;
                else if (f == "json")
                    cfg.write_json = true;
                else
                    fail("output.formats", "unknown format \"" + f + "\"");
            }
        }
    }
    return cfg;
}

curve::CurveSpec spec_of(const RunConfig& config) {
    if (config.t) {
        auto bridge = evolution::validate_bridge(config.endpoints, config.fractions, config.n);
        return evolution::spec_at(bridge, *config.t);
    }
    return curve::validate_spec(config.endpoints, config.fractions);
}

} // namespace rmcurve::cli
