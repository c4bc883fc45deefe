#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rmcurve/cli.hpp"
#include "rmcurve/errors.hpp"
#include "rmcurve/mc.hpp"
#include "rmcurve/model_rh.hpp"

namespace rmcurve::cli {

using nlohmann::json;

namespace {

constexpr double kBulkKsThreshold = 0.02;   // KS vs Wigner surmise
constexpr double kEdgeMomentTol = 0.1;      // |moment - TW reference|
constexpr double kRhResidualTol = 1e-7;     // max ||M+ - M- j_S||
constexpr double kRhSlopeTol = 0.05;        // |slope + 1|
constexpr double kCriticalTimeTol = 1e-9;   // bisection width for evolve

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

json fraction_json(const Fraction& f) {
    return json{{"num", f.numerator()}, {"den", f.denominator()}};
}

json config_echo(const RunConfig& c) {
    json model = json::array();
    for (size_t i = 0; i < c.endpoints.size(); ++i)
        model.push_back(json{{"a", c.endpoints[i]}, {"fraction", fraction_json(c.fractions[i])}});
    json out{{"model", {{"endpoints", model}}},
             {"sampling",
              {{"N", c.n}, {"draws", c.draws}, {"seed", c.seed}, {"bins", c.bins}}},
             {"analysis",
              {{"points_per_cut", c.points_per_cut},
               {"convention",
                c.convention == evolution::ScaleConvention::Paper ? "paper" : "sqrt"}}},
             {"output", {{"dir", c.out_dir.string()}, {"formats", json::array()}}}};
    if (c.write_csv) out["output"]["formats"].push_back("csv");
    if (c.write_json) out["output"]["formats"].push_back("json");
    if (c.t) out["time"]["t"] = *c.t;
    if (c.t_grid) out["time"]["grid"] = *c.t_grid;
    if (c.bulk_window) out["analysis"]["bulk_window"] = {c.bulk_window->first, c.bulk_window->second};
    if (c.edges) out["analysis"]["edges"] = *c.edges;
    return out;
}

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::string command) : cfg_(cfg) {
        std::filesystem::create_directories(cfg.out_dir);
        summary_["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        summary_["command"] = std::move(command);
        summary_["config"] = config_echo(cfg);
        summary_["results"] = json::object();
        summary_["errors"] = json::array();
    }

    json& results() { return summary_["results"]; }

    // materialized defaults are echoed back into the config for reruns
    json& config_json() { return summary_["config"]; }

    void error(const std::string& code, const std::string& message) {
        summary_["errors"].push_back({{"code", code}, {"message", message}});
    }

    void csv(const std::string& name, const std::string& header,
             const std::vector<std::vector<double>>& rows) {
        if (!cfg_.write_csv) return;
        std::ofstream out(cfg_.out_dir / name, std::ios::binary);
        out << header << "\n";
        for (const auto& row : rows) {
            for (size_t j = 0; j < row.size(); ++j)
                out << (j ? "," : "") << fmt17(row[j]);
            out << "\n";
        }
    }

    void json_file(const std::string& name, const json& doc) {
        if (!cfg_.write_json) return;
        std::ofstream out(cfg_.out_dir / name, std::ios::binary);
        out << doc.dump(2) << "\n";
    }

    void finish() { // summary.json is always written
        std::ofstream out(cfg_.out_dir / "summary.json", std::ios::binary);
        out << summary_.dump(2) << "\n";
    }

private:
    const RunConfig& cfg_;
    json summary_;
};

int run_analyze(const RunConfig& cfg, Emitter& em) {
    auto spec = spec_of(cfg);
    auto bps = curve::branch_points(spec);
    auto cuts = curve::cut_structure(spec, bps);
    auto profile = curve::density_profile(spec, cfg.points_per_cut);

    std::vector<std::vector<double>> rows;
    for (size_t j = 0; j < profile.grid.size(); ++j)
        rows.push_back({profile.grid[j], profile.rho[j]});
    em.csv("density.csv", "x,rho", rows);

    json jc = json::array();
    for (const auto& c : cuts.cuts) {
        json crossings = json::array();
        for (double r : c.gamma_crossings) crossings.push_back(r);
        json sheets = json::array();
        for (const auto& s : c.sheets) sheets.push_back({s.cut, s.sub});
        jc.push_back({{"interval", {c.lo, c.hi}},
                      {"mass", c.mass},
                      {"sources", c.sources},
                      {"sheets", sheets},
                      {"gamma_crossings", crossings}});
    }
    json ypairs = json::array();
    for (const auto& [q, qc] : bps.y_pairs) ypairs.push_back({q.real(), q.imag()});
    json xpairs = json::array();
    for (const auto& [w, wc] : bps.x_pairs) xpairs.push_back({w.real(), w.imag()});
    em.results() = {{"k", spec.k()},
                    {"l", bps.l()},
                    {"cuts", jc},
                    {"support_endpoints", bps.x_real},
                    {"branch_points_y", bps.y_real},
                    {"complex_branch_points_y", ypairs},
                    {"complex_branch_points_x", xpairs},
                    {"edge_constants", cuts.edge_constants},
                    {"min_separation", bps.min_separation},
                    {"total_mass", profile.total_mass}};
    return 0;
}

int run_evolve(const RunConfig& cfg, Emitter& em) {
    auto bridge = evolution::validate_bridge(cfg.endpoints, cfg.fractions, cfg.n);
    auto grid = cfg.t_grid ? *cfg.t_grid : evolution::default_time_grid();
    em.config_json()["time"]["grid"] = grid;
    auto timeline = evolution::cut_count_timeline(bridge, grid);
    auto critical = evolution::critical_times(bridge, kCriticalTimeTol);

    std::vector<std::vector<double>> rows;
    for (size_t j = 0; j < timeline.times.size(); ++j)
        rows.push_back({timeline.times[j], static_cast<double>(timeline.cut_counts[j])});
    em.csv("timeline.csv", "t,l", rows);

    json jt{{"times", critical.times}, {"tolerance", kCriticalTimeTol}};
    json amb = json::array();
    for (const auto& b : critical.ambiguous)
        amb.push_back({{"lo", b.lo}, {"hi", b.hi}});
    jt["ambiguous_brackets"] = amb;
    em.json_file("critical_times.json", jt);

    json viol = json::array();
    for (auto [t0, t1] : timeline.monotonicity_violations) viol.push_back({t0, t1});
    em.results() = {{"grid_size", grid.size()},
                    {"cut_counts", timeline.cut_counts},
                    {"times", timeline.times},
                    {"degenerate_times", timeline.degenerate_times},
                    {"monotonicity_violations", viol},
                    {"critical_times", critical.times}};
    return 0;
}

int run_sample(const RunConfig& cfg, Emitter& em) {
    auto spec = spec_of(cfg);
    auto bps = curve::branch_points(spec);
    auto cuts = curve::cut_structure(spec, bps);
    auto sample = mc::sample_matrix(spec, cfg.n, cfg.seed, cfg.draws);

    double lo = bps.x_real.front() - 0.5, hi = bps.x_real.back() + 0.5;
    auto hist = mc::empirical_density(sample, cfg.bins, lo, hi);
    std::vector<std::vector<double>> rows;
    for (size_t b = 0; b + 1 < hist.edges.size(); ++b)
        rows.push_back({hist.edges[b], hist.edges[b + 1], hist.density[b]});
    em.csv("histogram.csv", "x_lo,x_hi,density", rows);

    double m1 = 0.0, m2 = 0.0;
    for (const auto& ev : sample.eigenvalues)
        for (double x : ev) {
            m1 += x;
            m2 += x * x;
        }
    double denom = static_cast<double>(sample.draws) * sample.n;
    m1 /= denom;
    m2 /= denom;
    double e1 = 0.0, e2 = 1.0;
    for (int i = 0; i < spec.k(); ++i) {
        e1 += frac_value(spec.eps[i]) * spec.a[i];
        e2 += frac_value(spec.eps[i]) * spec.a[i] * spec.a[i];
    }
    json occupancy = json::array();
    for (const auto& c : cuts.cuts) {
        std::size_t inside = 0;
        for (const auto& ev : sample.eigenvalues)
            for (double x : ev)
                if (x >= c.lo && x <= c.hi) ++inside;
        occupancy.push_back({{"interval", {c.lo, c.hi}},
                             {"mass", c.mass},
                             {"fraction", inside / denom}});
    }
    json moments{{"mean_trace", m1},
                 {"mean_trace_sq", m2},
                 {"expected_mean_trace", e1},
                 {"expected_mean_trace_sq", e2},
                 {"occupancy", occupancy}};
    em.json_file("moments.json", moments);
    em.results() = moments;
    em.results()["histogram_outside_count"] = hist.outside_count;
    return 0;
}

std::pair<double, double> resolved_bulk_window(const RunConfig& cfg,
                                               const curve::CutStructure& cuts) {
    if (cfg.bulk_window) return *cfg.bulk_window;
    // default: central half of the widest cut
    const curve::CutStructure::Cut* widest = &cuts.cuts.front();
    for (const auto& c : cuts.cuts)
        if (c.hi - c.lo > widest->hi - widest->lo) widest = &c;
    double len = widest->hi - widest->lo;
    return {widest->lo + 0.25 * len, widest->hi - 0.25 * len};
}

int run_verify_bulk(const RunConfig& cfg, Emitter& em) {
    auto spec = spec_of(cfg);
    auto bps = curve::branch_points(spec);
    auto cuts = curve::cut_structure(spec, bps);
    auto [wlo, whi] = resolved_bulk_window(cfg, cuts);
    em.config_json()["analysis"]["bulk_window"] = {wlo, whi};

    auto profile = curve::density_profile(spec, std::max(cfg.points_per_cut, 2000));
    auto sample = mc::sample_matrix(spec, cfg.n, cfg.seed, cfg.draws);
    auto positions = mc::unfold_positions(sample, profile, wlo, whi);
    auto spacings = mc::unfold(sample, profile, wlo, whi);
    auto stats = mc::bulk_statistics(spacings, positions);

    std::vector<std::vector<double>> rows;
    for (double s : spacings) rows.push_back({s});
    em.csv("spacings.csv", "spacing", rows);

    bool pass = stats.ks_bulk < kBulkKsThreshold;
    json two_point = json::array();
    for (auto [r, g] : stats.two_point) two_point.push_back({r, g});
    em.results() = {{"bulk_window", {wlo, whi}},
                    {"spacing_count", stats.spacing_count},
                    {"spacing_mean", stats.spacing_mean},
                    {"ks_bulk", stats.ks_bulk},
                    {"ks_threshold", kBulkKsThreshold},
                    {"two_point", two_point},
                    {"pass", pass}};
    if (!pass) {
        em.error("BULK_CHECK_FAILED", "spacing KS distance exceeds threshold");
        return 3;
    }
    return 0;
}

int run_verify_edge(const RunConfig& cfg, Emitter& em) {
    auto spec = spec_of(cfg);
    auto bps = curve::branch_points(spec);
    auto cuts = curve::cut_structure(spec, bps);
    auto ref = mc::tw_reference();
    auto sample = mc::sample_matrix(spec, cfg.n, cfg.seed, cfg.draws);

    std::vector<int> edges;
    if (cfg.edges)
        edges = *cfg.edges;
    else
        edges = {1, 2 * bps.l()}; // outermost edges by default
    em.config_json()["analysis"]["edges"] = edges;

    bool all_pass = true;
    json report = json::array();
    std::vector<std::vector<double>> rows;
    for (int e : edges) {
        if (e < 1 || e > 2 * bps.l()) throw ValidationError("edge index out of range");
        double z = bps.x_real[e - 1];
        double rho = cuts.edge_constants[e - 1];
        auto stats = mc::edge_statistics(sample, e, z, rho);
        bool pass = std::abs(stats.edge_mean - ref.mean) < kEdgeMomentTol &&
                    std::abs(stats.edge_var - ref.variance) < kEdgeMomentTol;
        all_pass = all_pass && pass;
        report.push_back({{"edge", e},
                          {"z", z},
                          {"rho", rho},
                          {"mean", stats.edge_mean},
                          {"variance", stats.edge_var},
                          {"reference_mean", ref.mean},
                          {"reference_variance", ref.variance},
                          {"tolerance", kEdgeMomentTol},
                          {"count", stats.edge_count},
                          {"pass", pass}});
        rows.push_back({static_cast<double>(e), stats.edge_mean, stats.edge_var,
                        static_cast<double>(stats.edge_count)});
    }
    em.csv("edge.csv", "edge,mean,variance,count", rows);
    em.results() = {{"edges", report},
                    {"reference", {{"mean", ref.mean},
                                   {"variance", ref.variance},
                                   {"oracle_n", ref.oracle_n},
                                   {"oracle_draws", ref.oracle_draws}}},
                    {"pass", all_pass}};
    if (!all_pass) {
        em.error("EDGE_CHECK_FAILED", "rescaled extreme moments outside tolerance");
        return 3;
    }
    return 0;
}

int run_rh_check(const RunConfig& cfg, Emitter& em) {
    auto spec = spec_of(cfg);
    auto report = rh::verify_model_rh(spec, std::min(cfg.points_per_cut, 100));
    bool pass = report.max_jump_residual < kRhResidualTol &&
                std::abs(report.decay_slope + 1.0) < kRhSlopeTol;
    json doc{{"max_jump_residual", report.max_jump_residual},
             {"per_cut_residual", report.per_cut_residual},
             {"decay_slope", report.decay_slope},
             {"points_per_cut", report.points_per_cut},
             {"residual_tolerance", kRhResidualTol},
             {"slope_tolerance", kRhSlopeTol},
             {"pass", pass}};
    em.json_file("rh_report.json", doc);
    em.results() = doc;
    if (!pass) {
        em.error("RH_CHECK_FAILED", "model RH residual or decay slope outside tolerance");
        return 3;
    }
    return 0;
}

} // namespace

int run(const std::string& command, const RunConfig& config) {
    Emitter em(config, command);
    int code = 0;
    try {
        if (command == "analyze")
            code = run_analyze(config, em);
        else if (command == "evolve")
            code = run_evolve(config, em);
        else if (command == "sample")
            code = run_sample(config, em);
        else if (command == "verify-bulk")
            code = run_verify_bulk(config, em);
        else if (command == "verify-edge")
            code = run_verify_edge(config, em);
        else if (command == "rh-check")
            code = run_rh_check(config, em);
        else {
            em.error("CONFIG", "unknown command: " + command);
            code = 1;
        }
    } catch (const DegenerateCurveError& e) {
        em.error(e.code(), e.what());
        code = 2;
    } catch (const UnsupportedError& e) {
        em.error(e.code(), e.what());
        code = 2;
    } catch (const NumericsError& e) {
        em.error(e.code(), e.what());
        code = 2;
    } catch (const ConfigError& e) {
        em.error(e.code(), e.what());
        code = 1;
    } catch (const ValidationError& e) {
        em.error(e.code(), e.what());
        code = 1;
    } catch (const std::exception& e) {
        em.error("INTERNAL", e.what());
        code = 2;
    }
    em.finish();
    return code;
}

} // namespace rmcurve::cli
