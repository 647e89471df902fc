#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bilax/dynamics.hpp"
#include "bilax/suite.hpp"

namespace bilax {

using json = nlohmann::json;

/// Malformed configuration or parameter document.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Param param_from_name(const std::string& name) {
    for (int p = 0; p < kParamSlots; ++p)
        if (Generator::param(static_cast<Param>(p)).name() == name) return static_cast<Param>(p);
    throw ConfigError("unknown parameter '" + name + "'");
}

inline bool param_applies(ModelFamily f, Param p) {
    bool dn_only = p == Param::C0 || p == Param::C1;
    return f == ModelFamily::DN ? dn_only : !dn_only;
}

/// Integer, float (taken at its exact binary value), or a string "p/q" or "p".
inline Rational rational_from_json(const json& v, const std::string& name) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError("parameter '" + name + "' is not finite");
        return Rational(d);
    }
    if (v.is_string()) {
        Rational q;
        if (q.set_str(v.get<std::string>(), 10) != 0) throw ConfigError("parameter '" + name + "' is not a rational");
        if (q.get_den() == 0) throw ConfigError("parameter '" + name + "' has zero denominator");
        q.canonicalize();
        return q;
    }
    throw ConfigError("parameter '" + name + "' must be a number or a rational string");
}

inline ParamAssignment params_from_json(const json& obj, ModelFamily family) {
    if (!obj.is_object()) throw ConfigError("params must be a JSON object");
    ParamAssignment out;
    for (const auto& [key, value] : obj.items()) {
        Param p = param_from_name(key);
        if (!param_applies(family, p))
            throw ConfigError("parameter '" + key + "' does not belong to model " + family_name(family));
        out[p] = rational_from_json(value, key);
    }
    return out;
}

inline ModelFamily family_from_name(const std::string& s) {
    if (s == "bcn") return ModelFamily::BCN;
    if (s == "dn") return ModelFamily::DN;
    throw ConfigError("model must be bcn or dn, got '" + s + "'");
}

/// Parses inline JSON, or reads it from a file when the text is not JSON.
inline json load_json_argument(const std::string& arg) {
    std::string text = arg;
    auto first = arg.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
        std::ifstream in(arg);
        if (!in) throw ConfigError("cannot read params file '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

inline json to_json(const RelationReport& r) {
    json res = json::array();
    for (const auto& e : r.residual) res.push_back({{"where", e.where}, {"value", e.value.to_string()}});
    return {{"relation", r.relation}, {"holds", r.holds}, {"residual", res}};
}

inline json to_json(const SpectralMatrix& m) {
    json rows = json::array();
    for (const auto& row : m.to_strings()) rows.push_back(row);
    return rows;
}

inline json to_json(const Derivation& d) {
    json ms = json::array();
    for (std::size_t j = 0; j < d.m.size(); ++j) ms.push_back({{"j", j + 1}, {"M", to_json(d.m[j])}});
    json cmp = json::array();
    for (const auto& c : d.comparisons) cmp.push_back({{"what", c.what}, {"matches", c.matches}, {"detail", c.detail}});
    return {{"hamiltonian", d.hamiltonian.to_string()}, {"M", ms}, {"comparisons", cmp}};
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// t, state columns, H_drift, casimir_drift, zc_residual.
inline void write_csv(std::ostream& os, const ModelSpec& m, const Trajectory& tr) {
    os << "t";
    for (const auto& l : state_labels(m)) os << "," << l;
    os << ",H_drift,casimir_drift,zc_residual\n";
    const auto& h = tr.channels.at("H_drift");
    const auto& c = tr.channels.at("casimir_drift");
    const auto& z = tr.channels.at("zc_residual");
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        os << format_double(tr.times[i]);
        for (double v : tr.states[i].values) os << "," << format_double(v);
        os << "," << format_double(h[i]) << "," << format_double(c[i]) << "," << format_double(z[i]) << "\n";
    }
}

/// Line plot of log10 of the named channels against t.
inline void write_svg(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& names) {
    const double w = 800, hgt = 400, pad = 50;
    const std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    double tmax = tr.times.empty() ? 1 : std::max(tr.times.back(), 1e-300);
    double lo = 1e300, hi = -1e300;
    auto lg = [](double v) { return std::log10(std::max(std::abs(v), 1e-18)); };
    for (const auto& n : names)
        for (double v : tr.channels.at(n)) {
            lo = std::min(lo, lg(v));
            hi = std::max(hi, lg(v));
        }
    if (!(hi > lo)) {
        lo -= 1;
        hi += 1;
    }
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hgt << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << pad << "\" y=\"20\" font-size=\"12\">log10 |channel| vs t, range [" << format_double(lo)
       << ", " << format_double(hi) << "], t in [0, " << format_double(tmax) << "]</text>\n";
    for (std::size_t k = 0; k < names.size(); ++k) {
        const auto& ch = tr.channels.at(names[k]);
        std::size_t stride = std::max<std::size_t>(1, ch.size() / 2000);
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % colors.size()] << "\" points=\"";
        for (std::size_t i = 0; i < ch.size(); i += stride) {
            double x = pad + (w - 2 * pad) * tr.times[i] / tmax;
            double y = hgt - pad - (hgt - 2 * pad) * (lg(ch[i]) - lo) / (hi - lo);
            os << format_double(x) << "," << format_double(y) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << w - pad - 150 << "\" y=\"" << 40 + 15 * k << "\" font-size=\"12\" fill=\""
           << colors[k % colors.size()] << "\">" << names[k] << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace bilax
