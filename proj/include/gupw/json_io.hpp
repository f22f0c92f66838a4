#pragma once

#include <cmath>
#include <limits>

#include <json.hpp>

#include "gupw/oracle.hpp"
#include "gupw/witnesses.hpp"

namespace gupw {

using json = nlohmann::json;

namespace detail {

/// JSON has no inf/nan; those go out as strings so a report still round-trips.
inline json number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double read_number(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw InvalidArgument("expected a number, got '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace detail

/// Flat report object. Field names are stable; golden tests depend on them.
inline json to_json(const WitnessReport& r)
{
    json d = json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = detail::number(v);
    return json{{"criterion", to_string(r.criterion)},
                {"lhs", r.lhs},
                {"bound_hup", r.bound_hup},
                {"delta_gup", r.delta_gup},
                {"bound_gup", r.bound_gup},
                {"verdict", to_string(r.verdict)},
                {"verdict_gup", to_string(r.verdict_gup)},
                {"beta", r.beta},
                {"convention", to_string(r.convention)},
                {"moment_source", to_string(r.moments)},
                {"labels", r.labels},
                {"diagnostics", d}};
}

inline WitnessReport witness_report_from_json(const json& j)
{
    WitnessReport r;
    r.criterion = parse_criterion(j.at("criterion").get<std::string>());
    r.lhs = j.at("lhs").get<double>();
    r.bound_hup = j.at("bound_hup").get<double>();
    r.delta_gup = j.at("delta_gup").get<double>();
    r.bound_gup = j.at("bound_gup").get<double>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.verdict_gup = parse_verdict(j.at("verdict_gup").get<std::string>());
    r.beta = j.at("beta").get<double>();
    r.convention = parse_convention(j.at("convention").get<std::string>());
    r.moments = parse_moment_source(j.at("moment_source").get<std::string>());
    r.labels = j.at("labels").get<std::map<std::string, std::string>>();
    for (const auto& [k, v] : j.at("diagnostics").items()) r.diagnostics[k] = detail::read_number(v);
    return r;
}

/// `with_timing = false` drops elapsed_s, which is the only run-dependent field.
inline json to_json(const OracleReport& r, bool with_timing = true)
{
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"seed", f.seed}, {"parameters", f.parameters}, {"slack", detail::number(f.slack)}});
    json d = json::object();
    for (const auto& [k, v] : r.details) d[k] = detail::number(v);
    json j{{"suite", r.suite},
           {"n_samples", r.n_samples},
           {"min_slack", detail::number(r.min_slack)},
           {"tolerance", r.tolerance},
           {"passed", r.passed()},
           {"failures", failures},
           {"details", d}};
    if (with_timing) j["elapsed_s"] = r.elapsed_s;
    return j;
}

inline OracleReport oracle_report_from_json(const json& j)
{
    OracleReport r;
    r.suite = j.at("suite").get<std::string>();
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.min_slack = detail::read_number(j.at("min_slack"));
    r.tolerance = j.at("tolerance").get<double>();
    for (const auto& f : j.at("failures"))
        r.failures.push_back(
            {f.at("seed").get<std::uint64_t>(), f.at("parameters").get<std::string>(), detail::read_number(f.at("slack"))});
    for (const auto& [k, v] : j.at("details").items()) r.details[k] = detail::read_number(v);
    if (j.contains("elapsed_s")) r.elapsed_s = j.at("elapsed_s").get<double>();
    return r;
}

}  // namespace gupw
