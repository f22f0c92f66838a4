#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gupw/json_io.hpp"
#include "gupw/oracle.hpp"
#include "gupw/state_spec.hpp"
#include "gupw/witnesses.hpp"

namespace gupw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr double kHbarSI = 1.054571817e-34;  // J s
inline constexpr double kKimShihDeltaY = 0.16e-3;   // m

/// Bad command-line input; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs shared by `witness` and `sweep`.
struct EvalArgs {
    std::string state;
    std::string criterion = "duan";
    double a = 1.0;
    std::vector<double> h = {1.0, -1.0, 0.0};
    std::vector<double> g = {1.0, 1.0, 1.0};
    double beta = 0.0;
    std::string convention = "kempf";
    std::string moments = "canonical";
    std::optional<std::size_t> cutoff;
    std::string out;
    std::string format = "json";
};

struct SweepArgs {
    EvalArgs eval;
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    std::size_t steps = 0;
};

struct KimShihArgs {
    double delta_y = kKimShihDeltaY;
    double beta = 0.0;
    std::string out;
};

struct ValidateArgs {
    std::vector<std::string> suites;
    std::uint64_t seed = SuiteOptions{}.seed;
    std::optional<std::uint64_t> replay;
    std::string out;
    bool timing = true;
    unsigned jobs = 0;
};

namespace detail {

/// 12 significant digits, fixed layout, locale independent.
inline std::string csv_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("error writing '" + path + "'");
}

/// Everything needed to evaluate one criterion, checked before any heavy work.
struct Prepared {
    Criterion criterion;
    StateSpec spec;
    GupConfig config;
    std::optional<EprCoefficients> coeffs;
    BuildOptions build;
};

inline std::array<double, 3> triple(const std::vector<double>& v, const char* name)
{
    if (v.size() != 3) throw UsageError(std::string("--") + name + " needs three comma-separated values");
    return {v[0], v[1], v[2]};
}

inline Prepared prepare(const EvalArgs& args)
{
    Prepared p;
    try {
        p.criterion = parse_criterion(args.criterion);
        p.config.beta = args.beta;
        p.config.convention = parse_convention(args.convention);
        p.config.moments = parse_moment_source(args.moments);
        p.config.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    if (args.state.empty()) throw UsageError("--state is required");
    try {
        p.spec = load_state_spec(args.state);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    p.build.cutoff = args.cutoff;
    if (args.cutoff && *args.cutoff < 2) throw UsageError("--cutoff must be >= 2");

    const std::size_t n = p.spec.n_modes();
    const auto need = [&](std::size_t want) {
        if (n != want)
            throw UsageError(std::string(to_string(p.criterion)) + " needs a " + std::to_string(want) +
                             "-mode state, '" + args.state + "' has " + std::to_string(n));
    };
    try {
        switch (p.criterion) {
        case Criterion::duan:
            need(2);
            p.coeffs = EprCoefficients::bipartite(args.a);
            break;
        case Criterion::vanloock:
            need(3);
            p.coeffs = EprCoefficients::tripartite(triple(args.h, "h"), triple(args.g, "g"));
            break;
        case Criterion::rigolin_pairwise: need(2); break;
        case Criterion::rigolin_collective:
            if (n < 2) throw UsageError("rigolin_collective needs at least two modes");
            break;
        }
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return p;
}

inline WitnessReport evaluate(const Prepared& p, const QuantumState& st, const GupConfig& config,
                              const std::optional<EprCoefficients>& coeffs)
{
    switch (p.criterion) {
    case Criterion::duan: return duan_witness(st, *coeffs, config);
    case Criterion::vanloock: return vanloock_witness(st, *coeffs, config);
    case Criterion::rigolin_pairwise: return rigolin_pairwise(st, config);
    case Criterion::rigolin_collective: return rigolin_collective(st, config);
    }
    throw InvalidArgument("unknown criterion");
}

inline std::string summary_line(const WitnessReport& r)
{
    std::ostringstream os;
    os.precision(10);
    os << "lhs=" << r.lhs << " bound=" << r.bound_hup << " bound_gup=" << r.bound_gup
       << " verdict=" << to_string(r.verdict);
    return os.str();
}

inline std::string csv_header(const std::string& first)
{
    return first + ",lhs,bound_hup,delta_gup,bound_gup,verdict,verdict_gup\n";
}

inline std::string csv_row(double value, const WitnessReport& r)
{
    return csv_number(value) + "," + csv_number(r.lhs) + "," + csv_number(r.bound_hup) + "," +
           csv_number(r.delta_gup) + "," + csv_number(r.bound_gup) + "," + std::string(to_string(r.verdict)) + "," +
           std::string(to_string(r.verdict_gup)) + "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands. Each returns an exit code; UsageError propagates to `run`.

inline int cmd_witness(const EvalArgs& args, std::ostream& out)
{
    if (args.format != "json" && args.format != "csv") throw UsageError("--format must be json or csv");
    const detail::Prepared p = detail::prepare(args);
    const QuantumState st = build_state(p.spec, p.build);
    const WitnessReport r = detail::evaluate(p, st, p.config, p.coeffs);

    const std::string body = args.format == "json"
                                 ? to_json(r).dump(2) + "\n"
                                 : detail::csv_header("beta") + detail::csv_row(r.beta, r);
    if (!args.out.empty()) detail::write_text(args.out, body, out);
    else out << body;
    out << detail::summary_line(r) << "\n";
    return kExitOk;
}

/// Values from..to inclusive in `steps` equal increments.
inline std::vector<double> sweep_values(double from, double to, std::size_t steps)
{
    if (steps < 2) throw UsageError("--steps must be >= 2");
    if (!(from < to)) throw UsageError("sweep range needs from < to");
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i)
        v[i] = i + 1 == steps ? to : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return v;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out)
{
    if (args.eval.format != "csv" && args.eval.format != "json") throw UsageError("--format must be csv or json");
    const std::string& param = args.parameter;
    if (param != "beta" && param != "a" && param != "r") throw UsageError("--parameter must be beta, a or r");
    const std::vector<double> values = sweep_values(args.from, args.to, args.steps);
    detail::Prepared p = detail::prepare(args.eval);

    if (param == "beta") {
        if (args.from < 0.0 || args.to > kBetaCap) throw UsageError("beta sweep must stay within [0, 0.1]");
    } else if (param == "a") {
        if (p.criterion != Criterion::duan) throw UsageError("an a sweep needs --criterion duan");
        if (args.from <= 0.0) throw UsageError("a sweep needs a > 0");
    } else {
        if (p.spec.type != StateSpec::Type::tmsv && p.spec.type != StateSpec::Type::cv_ghz)
            throw UsageError("an r sweep needs a tmsv or cv_ghz state");
        if (args.from < 0.0) throw UsageError("r sweep needs r >= 0");
    }

    std::vector<WitnessReport> rows;
    if (param == "r") {
        for (double r : values) {
            BuildOptions b = p.build;
            b.r = r;
            rows.push_back(detail::evaluate(p, build_state(p.spec, b), p.config, p.coeffs));
        }
    } else {
        const QuantumState st = build_state(p.spec, p.build);
        for (double v : values) {
            GupConfig cfg = p.config;
            std::optional<EprCoefficients> c = p.coeffs;
            if (param == "beta") cfg.beta = v;
            else c = EprCoefficients::bipartite(v);
            rows.push_back(detail::evaluate(p, st, cfg, c));
        }
    }

    std::string body;
    if (args.eval.format == "csv") {
        body = detail::csv_header(param);
        for (std::size_t i = 0; i < rows.size(); ++i) body += detail::csv_row(values[i], rows[i]);
    } else {
        json arr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) arr.push_back({{param, values[i]}, {"report", to_json(rows[i])}});
        body = arr.dump(2) + "\n";
    }
    detail::write_text(args.eval.out, body, out);
    return kExitOk;
}

struct KimShihReport {
    double delta_y = 0.0;
    double beta = 0.0;
    double delta_p = 0.0;       // kg m / s
    double beta_delta_p2 = 0.0; // dimensionless
    double delta_gup = 0.0;     // J s
    bool no_disagreement = false;
    bool within_sanity_cap = true;

    std::string classification() const { return no_disagreement ? "no_disagreement" : "disagreement"; }
};

/// beta is in (kg m/s)^-2 so that beta (dP)^2 is dimensionless. It is not
/// capped here; `within_sanity_cap` records whether it is below 0.1.
inline KimShihReport kim_shih(double delta_y, double beta)
{
    if (!(delta_y > 0.0)) throw UsageError("--delta-y must be > 0");
    if (!(beta >= 0.0)) throw UsageError("--beta must be >= 0");
    KimShihReport r;
    r.delta_y = delta_y;
    r.beta = beta;
    r.delta_p = kHbarSI / (2.0 * delta_y);
    r.beta_delta_p2 = beta * r.delta_p * r.delta_p;
    r.delta_gup = 0.25 * kHbarSI * r.beta_delta_p2;
    // Relative slack so that beta = 1/(dP)^2 lands on the boundary despite rounding.
    r.no_disagreement = r.beta_delta_p2 >= 1.0 - 1e-12;
    r.within_sanity_cap = beta <= kBetaCap;
    return r;
}

inline json to_json(const KimShihReport& r)
{
    return json{{"delta_y_m", r.delta_y},
                {"hbar_J_s", kHbarSI},
                {"beta", r.beta},
                {"delta_p_kg_m_per_s", r.delta_p},
                {"beta_delta_p2", r.beta_delta_p2},
                {"delta_gup_J_s", r.delta_gup},
                {"bound_hup_J_s", 0.25 * kHbarSI},
                {"classification", r.classification()},
                {"within_sanity_cap", r.within_sanity_cap}};
}

inline int cmd_kim_shih(const KimShihArgs& args, std::ostream& out)
{
    const KimShihReport r = kim_shih(args.delta_y, args.beta);
    if (!args.out.empty()) detail::write_text(args.out, to_json(r).dump(2) + "\n", out);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "delta_y = %.6g m\n"
                  "delta_P = hbar/(2 delta_y) = %.11e kg m/s\n"
                  "beta (delta_P)^2 = %.11e (dimensionless)\n"
                  "Delta_GUP = (hbar/4) beta (delta_P)^2 = %.11e J s\n"
                  "classification = %s\n",
                  r.delta_y, r.delta_p, r.beta_delta_p2, r.delta_gup, r.classification().c_str());
    out << buf;
    if (!r.within_sanity_cap) out << "note: beta exceeds the 0.1 sanity cap\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

/// Suite names in report order.
inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {
        "duan_separable",    "vanloock_separable",      "duan_exhaustive_small", "duan_violation",
        "vanloock_violation", "gup_bound_growth",       "rigolin_universal",     "symmetric_case",
        "first_order_consistency", "paper_convention_gap", "hamiltonian"};
    return names;
}

/// Filter tokens: full suite names, or the short forms below.
inline std::vector<std::string> select_suites(const std::vector<std::string>& filter)
{
    static const std::map<std::string, std::string> alias = {
        {"duan", "duan_separable"},     {"vanloock", "vanloock_separable"}, {"exhaustive", "duan_exhaustive_small"},
        {"rigolin", "rigolin_universal"}, {"symmetric", "symmetric_case"},  {"first_order", "first_order_consistency"},
        {"paper_gap", "paper_convention_gap"}};
    if (filter.empty()) return suite_names();
    std::set<std::string> want;
    for (const auto& t : filter) {
        const auto it = alias.find(t);
        const std::string name = it != alias.end() ? it->second : t;
        if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
            throw UsageError("unknown suite '" + t + "'");
        want.insert(name);
    }
    std::vector<std::string> out;
    for (const auto& n : suite_names())
        if (want.count(n)) out.push_back(n);
    return out;
}

/// Suites that draw per-sample seeds and so accept --replay.
inline bool replayable(const std::string& name)
{
    return name == "duan_separable" || name == "vanloock_separable" || name == "rigolin_universal" ||
           name == "symmetric_case" || name == "first_order_consistency";
}

inline OracleReport run_suite(const std::string& name, std::uint64_t seed, std::optional<std::uint64_t> replay)
{
    SuiteOptions opt;
    opt.seed = seed;
    opt.replay = replay;
    const GupConfig beta_check(1e-3);
    if (name == "duan_separable") return separable_bound_sweep(Criterion::duan, SeparableSweepParams{}, beta_check, opt);
    if (name == "vanloock_separable") {
        SeparableSweepParams p;
        p.n_samples = 200;
        p.cutoff = 14;
        return separable_bound_sweep(Criterion::vanloock, p, beta_check, opt);
    }
    if (name == "duan_exhaustive_small") return duan_exhaustive_small();
    if (name == "duan_violation")
        return violation_search(Family::tmsv, {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}, EprCoefficients::bipartite(1.0),
                                beta_check);
    if (name == "vanloock_violation")
        return violation_search(Family::cv_ghz, {0.0, 0.4, 0.8},
                                EprCoefficients::tripartite({1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}), beta_check);
    if (name == "gup_bound_growth") return gup_bound_growth();
    if (name == "rigolin_universal") return rigolin_universal(500, 100, opt);
    if (name == "symmetric_case") return symmetric_case(100, 1e-3, opt);
    if (name == "first_order_consistency")
        return first_order_consistency(100, seed, {1e-4, 3e-4, 1e-3}, Convention::kempf, 40, replay);
    if (name == "paper_convention_gap") return paper_convention_gap();
    if (name == "hamiltonian") return hamiltonian_check();
    throw UsageError("unknown suite '" + name + "'");
}

/// Runs the selected suites (concurrently, up to `jobs`) and returns them in suite order.
inline std::vector<OracleReport> run_suites(const std::vector<std::string>& names, std::uint64_t seed,
                                            std::optional<std::uint64_t> replay, unsigned jobs)
{
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<OracleReport> out(names.size());
    std::size_t next = 0;
    while (next < names.size()) {
        std::vector<std::pair<std::size_t, std::future<OracleReport>>> batch;
        for (; next < names.size() && batch.size() < jobs; ++next) {
            const std::string name = names[next];
            const bool rp = replay && replayable(name);
            batch.emplace_back(next, std::async(std::launch::async, [name, seed, replay, rp] {
                                   return run_suite(name, seed, rp ? replay : std::nullopt);
                               }));
        }
        for (auto& [i, f] : batch) out[i] = f.get();
    }
    return out;
}

inline int cmd_validate(const ValidateArgs& args, std::ostream& out)
{
    std::vector<std::string> names = select_suites(args.suites);
    if (args.replay) {
        std::vector<std::string> keep;
        for (const auto& n : names)
            if (replayable(n)) keep.push_back(n);
        if (keep.empty()) throw UsageError("--replay needs a sampled suite in --suites");
        names = keep;
    }
    const std::vector<OracleReport> reports = run_suites(names, args.seed, args.replay, args.jobs);

    bool all = true;
    json arr = json::array();
    for (const auto& r : reports) {
        all = all && r.passed();
        arr.push_back(to_json(r, args.timing));
    }
    json doc{{"seed", args.seed}, {"passed", all}, {"suites", arr}};
    if (args.replay) doc["replay"] = *args.replay;
    if (!args.out.empty()) detail::write_text(args.out, doc.dump(2) + "\n", out);

    for (const auto& r : reports) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-26s %s  samples=%zu  min_slack=%.3e\n", r.suite.c_str(),
                      r.passed() ? "PASS" : "FAIL", r.n_samples, r.min_slack);
        out << buf;
        for (const auto& f : r.failures) {
            out << "  failure seed=" << f.seed << " slack=" << f.slack << " " << f.parameters << "\n";
            if (replayable(r.suite))
                out << "  replay: gupw validate --suites " << r.suite << " --seed " << args.seed << " --replay "
                    << f.seed << "\n";
        }
    }
    out << (all ? "all suites passed" : "validation FAILED") << "\n";
    return all ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// Argument parsing

namespace detail {

inline void add_eval_options(CLI::App* cmd, EvalArgs& a)
{
    // --h is a coefficient option here, so help is long-form only.
    cmd->set_help_flag("--help", "Print this help message and exit");
    cmd->add_option("--state", a.state, "State spec JSON file")->envname("GUPW_STATE");
    cmd->add_option("--criterion", a.criterion, "duan | vanloock | rigolin_pairwise | rigolin_collective")
        ->envname("GUPW_CRITERION")
        ->capture_default_str();
    cmd->add_option("--a", a.a, "Duan coefficient a")->envname("GUPW_A")->capture_default_str();
    cmd->add_option("--h", a.h, "van Loock position coefficients h1,h2,h3")->delimiter(',')->envname("GUPW_H");
    cmd->add_option("--g", a.g, "van Loock momentum coefficients g1,g2,g3")->delimiter(',')->envname("GUPW_G");
    cmd->add_option("--beta", a.beta, "GUP parameter (hbar = 1), at most 0.1")->envname("GUPW_BETA")->capture_default_str();
    cmd->add_option("--convention", a.convention, "paper | kempf")->envname("GUPW_CONVENTION")->capture_default_str();
    cmd->add_option("--moments", a.moments, "canonical | modified")->envname("GUPW_MOMENTS")->capture_default_str();
    cmd->add_option("--cutoff", a.cutoff, "Fock cutoff for every mode (overrides the spec)")->envname("GUPW_CUTOFF");
    cmd->add_option("--out", a.out, "Output file (default stdout)")->envname("GUPW_OUT");
}

}  // namespace detail

/// Full command line, argv[0] excluded. Returns the process exit code.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Variance entanglement witnesses with GUP corrections"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gupw 1.0.0");

    EvalArgs wargs;
    auto* witness = app.add_subcommand("witness", "Evaluate one criterion on a state");
    detail::add_eval_options(witness, wargs);
    witness->add_option("--format", wargs.format, "json | csv")->envname("GUPW_FORMAT")->capture_default_str();

    SweepArgs sargs;
    sargs.eval.format = "csv";
    auto* sweep = app.add_subcommand("sweep", "Sweep beta, a or r and write CSV");
    detail::add_eval_options(sweep, sargs.eval);
    sweep->add_option("--format", sargs.eval.format, "csv | json")->envname("GUPW_FORMAT")->capture_default_str();
    sweep->add_option("--parameter", sargs.parameter, "beta | a | r")->required();
    sweep->add_option("--from", sargs.from)->required();
    sweep->add_option("--to", sargs.to)->required();
    sweep->add_option("--steps", sargs.steps)->required();

    KimShihArgs kargs;
    auto* scenario = app.add_subcommand("scenario", "Physical-unit scenarios");
    scenario->require_subcommand(1);
    auto* kim = scenario->add_subcommand("kim-shih", "Two-particle Kim-Shih setup, delta_y = 0.16 mm");
    kim->add_option("--delta-y", kargs.delta_y, "Slit width in meters")->envname("GUPW_DELTA_Y")->capture_default_str();
    kim->add_option("--beta", kargs.beta, "GUP parameter in (kg m/s)^-2")->envname("GUPW_BETA")->capture_default_str();
    kim->add_option("--out", kargs.out, "JSON report file")->envname("GUPW_OUT");

    ValidateArgs vargs;
    auto* validate = app.add_subcommand("validate", "Run the oracle suites");
    validate->add_option("--suites", vargs.suites, "Comma-separated suite names")->delimiter(',')->envname("GUPW_SUITES");
    validate->add_option("--seed", vargs.seed, "Master seed")->envname("GUPW_SEED")->capture_default_str();
    validate->add_option("--replay", vargs.replay, "Rerun the single sample with this seed");
    validate->add_option("--out", vargs.out, "Combined JSON report")->envname("GUPW_OUT");
    validate->add_option("--jobs", vargs.jobs, "Suites run in parallel (0 = all cores)")->envname("GUPW_JOBS");
    bool no_timing = false;
    validate->add_flag("--no-timing", no_timing, "Omit elapsed_s from the report");

    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << "gupw 1.0.0\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    vargs.timing = !no_timing;

    try {
        if (*witness) return cmd_witness(wargs, out);
        if (*sweep) return cmd_sweep(sargs, out);
        if (*kim) return cmd_kim_shih(kargs, out);
        if (*validate) return cmd_validate(vargs, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    err << "error: no command\n";
    return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace gupw::cli
