#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bilax/io.hpp"

namespace bilax::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
    std::string command;
    std::string model;
    std::optional<int> sites;
    std::string params;
    double dt = 1e-3;
    int steps = 10000;
    std::vector<double> mu_samples{0.3, 0.7, 1.1, 1.9, 2.3};
    std::uint64_t seed = 0;
    std::string output;
    std::string format;
};

/// Pass/fail limits used by `simulate`.
struct Tolerances {
    double h_drift = 1e-8;
    double casimir_drift = 1e-10;
    double zc_relative = 1e-12;
    double boundary_relative = 1e-12;
};

/// Resolved model with every parameter known.
struct ResolvedConfig {
    ModelFamily family;
    int sites;
    ParamAssignment params;
};

/// Applies the JSON document behind --params. It is either a bare params
/// object or {"model": ..., "N": ..., "params": {...}}; explicit flags win.
inline ResolvedConfig resolve(const RunConfig& cfg) {
    std::string model = cfg.model;
    std::optional<int> sites = cfg.sites;
    json params_obj = json::object();
    if (!cfg.params.empty()) {
        json doc = load_json_argument(cfg.params);
        if (!doc.is_object()) throw ConfigError("params document must be a JSON object");
        if (doc.contains("params") || doc.contains("model") || doc.contains("N")) {
            for (const auto& [k, v] : doc.items())
                if (k != "params" && k != "model" && k != "N") throw ConfigError("unknown config key '" + k + "'");
            if (doc.contains("model")) {
                if (!doc["model"].is_string()) throw ConfigError("model must be a string");
                if (model.empty()) model = doc["model"].get<std::string>();
            }
            if (doc.contains("N")) {
                if (!doc["N"].is_number_integer()) throw ConfigError("N must be an integer");
                if (!sites) sites = doc["N"].get<int>();
            }
            if (doc.contains("params")) params_obj = doc["params"];
        } else {
            params_obj = doc;
        }
    }
    if (model.empty()) throw ConfigError("--model is required (bcn or dn)");
    ModelFamily family = family_from_name(model);
    if (!sites) throw ConfigError("--N is required");
    int lo = family == ModelFamily::BCN ? 1 : 2;
    if (*sites < lo || *sites > kMaxSites)
        throw ConfigError("N must be in [" + std::to_string(lo) + ", " + std::to_string(kMaxSites) + "] for " + model);
    return {family, *sites, params_from_json(params_obj, family)};
}

inline void print_report_line(std::ostream& out, const RelationReport& r) {
    out << (r.holds ? "PASS " : "FAIL ") << r.relation;
    if (!r.holds) {
        out << "  (" << r.residual.size() << " nonzero entries; first " << r.residual.front().where << " = "
            << r.residual.front().value << ")";
    }
    out << "\n";
}

inline int cmd_verify(const RunConfig& cfg, const ResolvedConfig& rc, std::ostream& out) {
    ModelSpec m = build_model(rc.family, rc.sites, rc.params);
    auto reports = verify_model(m);
    bool ok = std::all_of(reports.begin(), reports.end(), [](const RelationReport& r) { return r.holds; });
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        out << json{{"model", family_name(rc.family)}, {"N", rc.sites}, {"all_hold", ok}, {"relations", arr}}.dump(2)
            << "\n";
    } else {
        for (const auto& r : reports) print_report_line(out, r);
        out << (ok ? "all relations hold\n" : "some relations FAIL\n");
    }
    return ok ? kOk : kCheckFailed;
}

inline int cmd_derive(const RunConfig& cfg, const ResolvedConfig& rc, std::ostream& out) {
    ModelSpec m = build_model(rc.family, rc.sites, rc.params);
    Derivation d = derive_model(m);
    bool ok = std::all_of(d.comparisons.begin(), d.comparisons.end(), [](const Comparison& c) { return c.matches; });
    if (cfg.format == "json") {
        json j = to_json(d);
        j["model"] = family_name(rc.family);
        j["N"] = rc.sites;
        j["matches_closed_form"] = ok;
        out << j.dump(2) << "\n";
    } else {
        out << "H = " << d.hamiltonian << "\n";
        for (std::size_t j = 0; j < d.m.size(); ++j) out << "M(" << j + 1 << ", mu) = " << d.m[j].to_string() << "\n";
        for (const auto& c : d.comparisons)
            out << (c.matches ? "MATCH " : "DIFFER ") << c.what << "  " << c.detail << "\n";
    }
    return ok ? kOk : kCheckFailed;
}

inline int cmd_simulate(const RunConfig& cfg, const ResolvedConfig& rc, std::ostream& out, std::ostream& err) {
    if (!(cfg.dt > 0)) throw ConfigError("--dt must be positive");
    if (cfg.steps < 1) throw ConfigError("--steps must be at least 1");
    if (cfg.mu_samples.empty()) throw ConfigError("--mu-samples must not be empty");
    for (double mu : cfg.mu_samples)
        if (!(std::abs(mu) > 1e-9)) throw ConfigError("--mu-samples must avoid 0");
    ModelSpec m = build_model(rc.family, rc.sites, rc.params);
    ModelSpec symbolic = build_model(rc.family, rc.sites);
    DiagnosticData d = diagnostic_data(m);
    VectorField f = vector_field(m, d.hamiltonian, FieldSource::Bracket);
    PhasePoint p0;
    try {
        p0 = random_initial_point(m, cfg.seed);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    Trajectory tr = integrate(f, p0, cfg.dt, cfg.steps);
    conserved_channels(d, f, tr);
    zero_curvature_residual(d, f, tr, cfg.mu_samples);
    if (rc.family == ModelFamily::DN) dn_boundary_channel(diagnostic_data(symbolic), f, tr);

    std::ostringstream body;
    if (cfg.format == "svg") {
        write_svg(body, tr, {"H_drift", "casimir_drift", "zc_residual"});
    } else if (cfg.format == "json") {
        json ch = json::object();
        for (const auto& [k, v] : tr.channels) ch[k] = *std::max_element(v.begin(), v.end());
        body << json{{"model", family_name(rc.family)}, {"N", rc.sites},   {"steps_done", tr.states.size() - 1},
                     {"truncated", tr.truncated},       {"error", tr.error}, {"max", ch}}
                    .dump(2)
             << "\n";
    } else {
        write_csv(body, m, tr);
    }
    if (cfg.output.empty()) {
        out << body.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) throw ConfigError("cannot write '" + cfg.output + "'");
        file << body.str();
    }

    Tolerances tol;
    auto peak = [&](const std::string& k) {
        const auto& v = tr.channels.at(k);
        return *std::max_element(v.begin(), v.end());
    };
    bool ok = !tr.truncated;
    std::ostream& log = cfg.output.empty() ? err : out;
    auto gate = [&](const std::string& k, double limit) {
        double v = peak(k);
        bool pass = v <= limit;
        ok = ok && pass;
        log << (pass ? "ok   " : "FAIL ") << k << " max " << format_double(v) << " (limit " << limit << ")\n";
    };
    if (tr.truncated)
        log << "FAIL trajectory truncated at t=" << format_double(tr.times.back()) << ": " << tr.error << "\n";
    gate("H_drift", tol.h_drift);
    gate("casimir_drift", tol.casimir_drift);
    gate("zc_relative", tol.zc_relative);
    gate("boundary_relative", tol.boundary_relative);
    for (const auto& [k, v] : tr.channels)
        if (k != "H_drift" && k != "casimir_drift" && k != "zc_relative" && k != "boundary_relative")
            log << "info " << k << " max " << format_double(*std::max_element(v.begin(), v.end())) << "\n";
    return ok ? kOk : kCheckFailed;
}

/// Full command line entry point; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"bilax: boundary Lax pairs for open Toda chains"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "bcn or dn")->check(CLI::IsMember({"bcn", "dn"}));
        sub->add_option("--N", cfg.sites, "number of sites");
        sub->add_option("--params", cfg.params, "params as inline JSON or a JSON file path");
        sub->add_option("--output", cfg.output, "output file (default stdout)");
    };
    CLI::App* verify = app.add_subcommand("verify", "exact checks of every structural relation");
    CLI::App* derive = app.add_subcommand("derive", "Hamiltonian and M(j, mu) from the double-row transfer matrix");
    CLI::App* simulate = app.add_subcommand("simulate", "integrate the flow and monitor invariants");
    for (auto* sub : {verify, derive, simulate}) add_common(sub);
    verify->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    derive->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    simulate->add_option("--format", cfg.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    simulate->add_option("--dt", cfg.dt, "time step")->capture_default_str();
    simulate->add_option("--steps", cfg.steps, "number of steps")->capture_default_str();
    simulate->add_option("--mu-samples", cfg.mu_samples, "spectral values for the zero-curvature residual")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "seed for the initial data")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    std::ostringstream captured;
    int code = kOk;
    try {
        thread_budget();
        ResolvedConfig rc = resolve(cfg);
        std::ostream& target = (cfg.command != "simulate" && !cfg.output.empty()) ? captured : out;
        if (cfg.command == "verify") code = cmd_verify(cfg, rc, target);
        else if (cfg.command == "derive") code = cmd_derive(cfg, rc, target);
        else code = cmd_simulate(cfg, rc, out, err);
        if (&target == &captured) {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file) throw ConfigError("cannot write '" + cfg.output + "'");
            file << captured.str();
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const StructuralError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return code;
}

}  // namespace bilax::cli
