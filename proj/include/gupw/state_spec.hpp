#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gupw/states.hpp"

namespace gupw {

/// Declarative description of a test state, as read from a JSON file.
///
///   {"product": [mode, ...]}
///   {"mixture": [{"weight": w, "product": [mode, ...]}, ...]}
///   {"tmsv": {"r": r}}
///   {"cv_ghz": {"r": r}}
///
/// mode = {"kind": "vacuum"} | {"kind": "fock", "n": 1}
///      | {"kind": "coherent", "alpha": 1.0 or [re, im]}
///      | {"kind": "squeezed", "r": 0.3, "phi": 0.0} | {"kind": "thermal", "nbar": 0.5}
///
/// A "cutoff" may appear at top level, inside tmsv/cv_ghz, or on a mode;
/// the innermost one wins. Unknown fields are rejected.
struct StateSpec {
    enum class Type { product, mixture, tmsv, cv_ghz };

    struct Mode {
        SingleModeSpec spec;
        std::optional<std::size_t> cutoff;
    };
    struct Term {
        double weight = 1.0;
        std::vector<Mode> modes;
    };

    Type type = Type::product;
    std::vector<Term> terms;  // product: exactly one term
    double r = 0.0;           // tmsv, cv_ghz
    std::optional<std::size_t> cutoff;

    std::size_t n_modes() const
    {
        switch (type) {
        case Type::tmsv: return 2;
        case Type::cv_ghz: return 3;
        default: return terms.empty() ? 0 : terms.front().modes.size();
        }
    }
};

/// Error in a state-spec document; `path` is a JSON pointer to the culprit.
class SpecError : public InvalidArgument {
public:
    SpecError(const std::string& path, const std::string& msg)
        : InvalidArgument("state spec " + (path.empty() ? std::string("/") : path) + ": " + msg), path_(path)
    {
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline constexpr std::size_t kDefaultCutoff = 40;

namespace detail {

using json = nlohmann::json;

inline void only_fields(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) throw SpecError(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw SpecError(path + "/" + k, "unknown field '" + k + "'");
}

inline double get_real(const json& j, const std::string& path, const char* key)
{
    if (!j.contains(key)) throw SpecError(path, std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw SpecError(path + "/" + key, "expected a number");
    return v.get<double>();
}

inline std::optional<std::size_t> get_cutoff(const json& j, const std::string& path)
{
    if (!j.contains("cutoff")) return std::nullopt;
    const auto& v = j.at("cutoff");
    if (!v.is_number_integer() || v.get<long long>() < 2) throw SpecError(path + "/cutoff", "expected an integer >= 2");
    return static_cast<std::size_t>(v.get<long long>());
}

inline StateSpec::Mode parse_mode(const json& j, const std::string& path)
{
    if (!j.is_object()) throw SpecError(path, "expected a mode object");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw SpecError(path + "/kind", "missing or non-string kind");
    const std::string kind = j.at("kind").get<std::string>();
    StateSpec::Mode m;
    if (kind == "vacuum") {
        only_fields(j, path, {"kind", "cutoff"});
        m.spec = SingleModeSpec::vacuum();
    } else if (kind == "fock") {
        only_fields(j, path, {"kind", "n", "cutoff"});
        if (!j.contains("n") || !j.at("n").is_number_integer() || j.at("n").get<long long>() < 0)
            throw SpecError(path + "/n", "expected an integer >= 0");
        m.spec = SingleModeSpec::fock_state(static_cast<int>(j.at("n").get<long long>()));
    } else if (kind == "coherent") {
        only_fields(j, path, {"kind", "alpha", "cutoff"});
        if (!j.contains("alpha")) throw SpecError(path, "missing field 'alpha'");
        const auto& a = j.at("alpha");
        if (a.is_number())
            m.spec = SingleModeSpec::coherent({a.get<double>(), 0.0});
        else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number())
            m.spec = SingleModeSpec::coherent({a[0].get<double>(), a[1].get<double>()});
        else
            throw SpecError(path + "/alpha", "expected a number or [re, im]");
    } else if (kind == "squeezed") {
        only_fields(j, path, {"kind", "r", "phi", "cutoff"});
        const double r = get_real(j, path, "r");
        if (r < 0.0) throw SpecError(path + "/r", "must be >= 0");
        m.spec = SingleModeSpec::squeezed(r, j.contains("phi") ? get_real(j, path, "phi") : 0.0);
    } else if (kind == "thermal") {
        only_fields(j, path, {"kind", "nbar", "cutoff"});
        const double nbar = get_real(j, path, "nbar");
        if (nbar < 0.0) throw SpecError(path + "/nbar", "must be >= 0");
        m.spec = SingleModeSpec::thermal(nbar);
    } else {
        throw SpecError(path + "/kind", "unknown kind '" + kind + "' (vacuum|fock|coherent|squeezed|thermal)");
    }
    m.cutoff = get_cutoff(j, path);
    return m;
}

inline std::vector<StateSpec::Mode> parse_modes(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) throw SpecError(path, "expected a nonempty array of modes");
    std::vector<StateSpec::Mode> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_mode(j[i], path + "/" + std::to_string(i)));
    return out;
}

}  // namespace detail

inline StateSpec parse_state_spec_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw SpecError("", "expected an object");
    detail::only_fields(j, "", {"product", "mixture", "tmsv", "cv_ghz", "cutoff"});
    int kinds = 0;
    for (const char* k : {"product", "mixture", "tmsv", "cv_ghz"}) kinds += j.contains(k) ? 1 : 0;
    if (kinds != 1) throw SpecError("", "exactly one of product, mixture, tmsv, cv_ghz is required");

    StateSpec s;
    s.cutoff = detail::get_cutoff(j, "");
    if (j.contains("product")) {
        s.type = StateSpec::Type::product;
        s.terms.push_back({1.0, detail::parse_modes(j.at("product"), "/product")});
    } else if (j.contains("mixture")) {
        s.type = StateSpec::Type::mixture;
        const auto& arr = j.at("mixture");
        if (!arr.is_array() || arr.empty()) throw SpecError("/mixture", "expected a nonempty array");
        double sum = 0.0;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "/mixture/" + std::to_string(i);
            detail::only_fields(arr[i], p, {"weight", "product"});
            StateSpec::Term t;
            t.weight = detail::get_real(arr[i], p, "weight");
            if (t.weight < 0.0) throw SpecError(p + "/weight", "must be >= 0");
            if (!arr[i].contains("product")) throw SpecError(p, "missing field 'product'");
            t.modes = detail::parse_modes(arr[i].at("product"), p + "/product");
            if (!s.terms.empty() && t.modes.size() != s.terms.front().modes.size())
                throw SpecError(p + "/product", "mode count differs from the first term");
            sum += t.weight;
            s.terms.push_back(std::move(t));
        }
        if (std::abs(sum - 1.0) > kNormTol) {
            std::ostringstream os;
            os << "mixture weights sum to " << sum << ", expected 1";
            throw SpecError("/mixture", os.str());
        }
    } else {
        const bool tmsv = j.contains("tmsv");
        const char* key = tmsv ? "tmsv" : "cv_ghz";
        const std::string p = std::string("/") + key;
        s.type = tmsv ? StateSpec::Type::tmsv : StateSpec::Type::cv_ghz;
        detail::only_fields(j.at(key), p, {"r", "cutoff"});
        s.r = detail::get_real(j.at(key), p, "r");
        if (s.r < 0.0) throw SpecError(p + "/r", "must be >= 0");
        if (auto c = detail::get_cutoff(j.at(key), p)) s.cutoff = c;
    }
    return s;
}

struct BuildOptions {
    /// Overrides every cutoff in the document (command-line flag / environment).
    std::optional<std::size_t> cutoff;
    /// Overrides r of a tmsv/cv_ghz document (r sweeps).
    std::optional<double> r;
};

/// Builds and validates the state. Mixtures carry their SeparableEnsemble.
inline QuantumState build_state(const StateSpec& spec, const BuildOptions& opt = {})
{
    const std::size_t doc_cutoff = spec.cutoff.value_or(kDefaultCutoff);
    auto cutoff_for = [&](const StateSpec::Mode& m) { return opt.cutoff ? *opt.cutoff : m.cutoff.value_or(doc_cutoff); };
    const std::string hint = "; try a larger cutoff";
    try {
        switch (spec.type) {
        case StateSpec::Type::tmsv:
            if (opt.r && *opt.r < 0.0) throw InvalidArgument("r must be >= 0");
            return two_mode_squeezed(opt.r.value_or(spec.r), opt.cutoff.value_or(doc_cutoff));
        case StateSpec::Type::cv_ghz:
            if (opt.r && *opt.r < 0.0) throw InvalidArgument("r must be >= 0");
            return cv_ghz(opt.r.value_or(spec.r), opt.cutoff.value_or(doc_cutoff));
        case StateSpec::Type::product: {
            std::vector<QuantumState> f;
            for (const auto& m : spec.terms.front().modes) f.push_back(single_mode_state(m.spec, cutoff_for(m)));
            return product_state(std::span<const QuantumState>(f));
        }
        case StateSpec::Type::mixture: {
            SeparableEnsemble e;
            for (const auto& t : spec.terms) {
                std::vector<QuantumState> f;
                std::vector<SingleModeSpec> ss;
                for (const auto& m : t.modes) {
                    f.push_back(single_mode_state(m.spec, cutoff_for(m)));
                    ss.push_back(m.spec);
                }
                e.weights.push_back(t.weight);
                e.components.push_back(std::move(f));
                e.specs.push_back(std::move(ss));
            }
            return mixture_state(e);
        }
        }
    } catch (const TruncationError& err) {
        throw TruncationError(std::string(err.what()) + hint);
    }
    throw InvalidArgument("build_state: unknown spec type");
}

inline StateSpec load_state_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open state spec '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("state spec '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_state_spec_json(j);
}

/// Reads, validates and builds the state described by the file at `path`.
inline QuantumState parse_state_spec(const std::string& path, const BuildOptions& opt = {})
{
    return build_state(load_state_spec(path), opt);
}

}  // namespace gupw
