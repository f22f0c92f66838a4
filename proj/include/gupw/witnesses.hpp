#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <variant>

#include "gupw/gup.hpp"
#include "gupw/moments.hpp"

namespace gupw {

enum class Criterion { rigolin_collective, rigolin_pairwise, duan, vanloock };

/// `bound_violated` is only produced by the Rigolin relations, which hold for
/// every state: a violation there is a numerical-inconsistency alarm, not an
/// entanglement detection.
enum class Verdict { detected_inseparable, not_detected, bound_violated };

inline std::string_view to_string(Criterion c)
{
    switch (c) {
    case Criterion::rigolin_collective: return "rigolin_collective";
    case Criterion::rigolin_pairwise: return "rigolin_pairwise";
    case Criterion::duan: return "duan";
    case Criterion::vanloock: return "vanloock";
    }
    return "?";
}

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::detected_inseparable: return "detected_inseparable";
    case Verdict::not_detected: return "not_detected";
    case Verdict::bound_violated: return "bound_violated";
    }
    return "?";
}

inline Criterion parse_criterion(std::string_view s)
{
    if (s == "rigolin_collective" || s == "rigolin") return Criterion::rigolin_collective;
    if (s == "rigolin_pairwise") return Criterion::rigolin_pairwise;
    if (s == "duan") return Criterion::duan;
    if (s == "vanloock") return Criterion::vanloock;
    throw InvalidArgument("unknown criterion '" + std::string(s) + "'");
}

inline Verdict parse_verdict(std::string_view s)
{
    if (s == "detected_inseparable") return Verdict::detected_inseparable;
    if (s == "not_detected") return Verdict::not_detected;
    if (s == "bound_violated") return Verdict::bound_violated;
    throw InvalidArgument("unknown verdict '" + std::string(s) + "'");
}

/// Detection requires lhs < bound - kStrictTol, so exact saturation is not a detection.
inline constexpr double kStrictTol = 1e-9;
/// |dQ1 - dQ2| and |dP1 - dP2| below this select the symmetric two-particle case.
inline constexpr double kSymmetricTol = 1e-6;

/// Coefficients of the EPR-like pair u = sum h_n x_n, v = sum g_n p_n.
class EprCoefficients {
public:
    struct Bipartite {
        double a;
    };
    struct Tripartite {
        std::array<double, 3> h;
        std::array<double, 3> g;
    };

    static EprCoefficients bipartite(double a)
    {
        if (a == 0.0 || !std::isfinite(a)) throw InvalidArgument("EprCoefficients: a must be a nonzero real number");
        return EprCoefficients(Bipartite{a});
    }

    static EprCoefficients tripartite(std::array<double, 3> h, std::array<double, 3> g)
    {
        bool any = false;
        for (std::size_t n = 0; n < 3; ++n) any = any || (h[n] * g[n] != 0.0);
        if (!any) throw InvalidArgument("EprCoefficients: every h_n g_n is zero, the bound would be vacuous");
        return EprCoefficients(Tripartite{h, g});
    }

    bool is_bipartite() const { return std::holds_alternative<Bipartite>(v_); }
    std::size_t n_modes() const { return is_bipartite() ? 2 : 3; }
    double a() const { return std::get<Bipartite>(v_).a; }
    const Tripartite& tripartite() const { return std::get<Tripartite>(v_); }

    /// Per-mode position coefficients: (|a|, 1/a) or h.
    std::vector<double> position_coefficients() const
    {
        if (is_bipartite()) return {std::abs(a()), 1.0 / a()};
        const auto& t = tripartite();
        return {t.h.begin(), t.h.end()};
    }

    /// Per-mode momentum coefficients: (|a|, -1/a) or g.
    ///
    /// The second sign is the one that makes u and v commute; with
    /// (|a|, +1/a) one has [u, v] = i(a^2 + 1/a^2) and the Robertson relation
    /// alone forces Var(u) + Var(v) >= a^2 + 1/a^2 for every state.
    std::vector<double> momentum_coefficients() const
    {
        if (is_bipartite()) return {std::abs(a()), -1.0 / a()};
        const auto& t = tripartite();
        return {t.g.begin(), t.g.end()};
    }

    /// Separable-state bound: a^2 + 1/a^2, or sum |h_n g_n|.
    double separable_bound() const
    {
        if (is_bipartite()) return a() * a() + 1.0 / (a() * a());
        const auto& t = tripartite();
        double s = 0.0;
        for (std::size_t n = 0; n < 3; ++n) s += std::abs(t.h[n] * t.g[n]);
        return s;
    }

    /// Per-mode weight of <p_n^2> in the GUP correction: (a^2, 1/a^2) or |h_n g_n|.
    std::vector<double> gup_weights() const
    {
        if (is_bipartite()) return {a() * a(), 1.0 / (a() * a())};
        const auto& t = tripartite();
        return {std::abs(t.h[0] * t.g[0]), std::abs(t.h[1] * t.g[1]), std::abs(t.h[2] * t.g[2])};
    }

private:
    explicit EprCoefficients(std::variant<Bipartite, Tripartite> v) : v_(std::move(v)) {}
    std::variant<Bipartite, Tripartite> v_;
};

/// Result of one criterion evaluation.
struct WitnessReport {
    Criterion criterion = Criterion::duan;
    double lhs = 0.0;
    double bound_hup = 0.0;
    double delta_gup = 0.0;
    double bound_gup = 0.0;
    Verdict verdict = Verdict::not_detected;
    Verdict verdict_gup = Verdict::not_detected;
    double beta = 0.0;
    Convention convention = Convention::kempf;
    MomentSource moments = MomentSource::canonical;
    std::map<std::string, double> diagnostics;
    std::map<std::string, std::string> labels;

    double slack() const { return lhs - bound_hup; }
    double slack_gup() const { return lhs - bound_gup; }

    friend bool operator==(const WitnessReport&, const WitnessReport&) = default;
};

struct EprOperators {
    Operator u;
    Operator v;
};

/// u = sum_n h_n x_n and v = sum_n g_n p_n as dense operators on `space`.
/// Bipartite: u = |a| x1 + x2/a, v = |a| p1 - p2/a.
inline EprOperators build_epr_operators(const FockSpace& space, const EprCoefficients& coeffs)
{
    if (space.n_modes() != coeffs.n_modes())
        throw InvalidArgument("build_epr_operators: coefficients are for " + std::to_string(coeffs.n_modes()) +
                              " modes, space has " + std::to_string(space.n_modes()));
    const auto hc = coeffs.position_coefficients();
    const auto gc = coeffs.momentum_coefficients();
    std::vector<Operator> xs, ps;
    for (std::size_t m = 0; m < space.n_modes(); ++m) {
        auto q = quadrature_pair(space, m);
        xs.push_back(std::move(q.x));
        ps.push_back(std::move(q.p));
    }
    return {linear_combination(hc, xs), linear_combination(gc, ps)};
}

namespace detail {

inline std::vector<Matrix> momentum_matrices(const FockSpace& space, const GupConfig& config)
{
    if (config.moments == MomentSource::canonical) return {};
    std::vector<Matrix> out;
    for (std::size_t m = 0; m < space.n_modes(); ++m)
        out.push_back(gup_momentum_matrix(momentum_matrix(space.cutoff(m)), config));
    return out;
}

inline WitnessReport start_report(Criterion c, const QuantumState& state, const GupConfig& config)
{
    WitnessReport r;
    r.criterion = c;
    r.beta = config.beta;
    r.convention = config.convention;
    r.moments = config.moments;
    r.diagnostics["tail_mass"] = state.tail_mass();
    for (std::size_t m = 0; m < state.space().n_modes(); ++m)
        r.diagnostics["cutoff_mode" + std::to_string(m + 1)] = static_cast<double>(state.space().cutoff(m));
    return r;
}

inline void record_moments(WitnessReport& r, const QuadratureMoments& mo)
{
    for (std::size_t m = 0; m < mo.n_modes; ++m) {
        const std::string k = std::to_string(m + 1);
        r.diagnostics["mean_p2_mode" + k] = mo.p_second(m);
        r.diagnostics["var_x_mode" + k] = mo.x_variance(m);
        r.diagnostics["var_p_mode" + k] = mo.p_variance(m);
    }
}

inline Verdict separability_verdict(double lhs, double bound)
{
    return lhs < bound - kStrictTol ? Verdict::detected_inseparable : Verdict::not_detected;
}

inline Verdict universal_verdict(double lhs, double bound)
{
    return lhs < bound - kStrictTol ? Verdict::bound_violated : Verdict::not_detected;
}

inline void check_modes(const QuantumState& state, std::size_t expected, const char* where)
{
    if (state.space().n_modes() != expected)
        throw InvalidArgument(std::string(where) + ": needs a " + std::to_string(expected) + "-mode state, got " +
                              std::to_string(state.space().n_modes()) + " modes");
}

inline Eigen::VectorXd spread(const std::vector<double>& per_mode, bool momentum)
{
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * per_mode.size()));
    for (std::size_t m = 0; m < per_mode.size(); ++m)
        c(static_cast<Eigen::Index>(momentum ? QuadratureMoments::p_index(m) : QuadratureMoments::x_index(m))) =
            per_mode[m];
    return c;
}

inline WitnessReport epr_witness(Criterion criterion, const QuantumState& state, const EprCoefficients& coeffs,
                                 const GupConfig& config, double tail_threshold)
{
    config.validate();
    state.require_tail_below(tail_threshold, to_string(criterion).data());
    const QuadratureMoments mo = quadrature_moments(state, momentum_matrices(state.space(), config));

    WitnessReport r = start_report(criterion, state, config);
    record_moments(r, mo);
    const double var_u = mo.variance(spread(coeffs.position_coefficients(), false));
    const double var_v = mo.variance(spread(coeffs.momentum_coefficients(), true));
    r.lhs = var_u + var_v;
    r.bound_hup = coeffs.separable_bound();

    // The separable decomposition is not needed: <p_n^2> is linear in rho, so
    // sum_i eta_i <p_n^2>_i equals the rho-level moment for every decomposition.
    const auto w = coeffs.gup_weights();
    double f = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) f += w[m] * mo.p_second(m);
    r.delta_gup = config.beta * f;
    r.bound_gup = r.bound_hup + r.delta_gup;
    r.verdict = separability_verdict(r.lhs, r.bound_hup);
    r.verdict_gup = separability_verdict(r.lhs, r.bound_gup);

    r.diagnostics["var_u"] = var_u;
    r.diagnostics["var_v"] = var_v;
    r.diagnostics["gup_moment_sum"] = f;
    if (coeffs.is_bipartite()) {
        r.diagnostics["a"] = coeffs.a();
        r.labels["delta_gup_form"] = "beta_times_f";
    } else {
        const auto& t = coeffs.tripartite();
        for (std::size_t n = 0; n < 3; ++n) {
            r.diagnostics["h" + std::to_string(n + 1)] = t.h[n];
            r.diagnostics["g" + std::to_string(n + 1)] = t.g[n];
        }
        r.labels["delta_gup_form"] = "beta_times_abs_hg_p2";
    }
    return r;
}

}  // namespace detail

/// Collective relation (dQ)^2 (dP)^2 >= N^2/4 for Q = sum x_i, P = sum p_i.
///
/// The GUP correction follows from [Q, P] = iN + i beta sum P_i^2 to first
/// order: (N/2) beta sum (dP_i)^2, which for N = 2 is beta[(dP1)^2 + (dP2)^2].
/// The right side with <P_i^2> in place of (dP_i)^2 is reported as
/// `rhs_with_second_moments`.
inline WitnessReport rigolin_collective(const QuantumState& state, const GupConfig& config,
                                        double tail_threshold = kTailThreshold)
{
    const std::size_t n = state.space().n_modes();
    if (n < 2) throw InvalidArgument("rigolin_collective: needs at least two modes");
    config.validate();
    state.require_tail_below(tail_threshold, "rigolin_collective");
    const QuadratureMoments mo = quadrature_moments(state, detail::momentum_matrices(state.space(), config));

    WitnessReport r = detail::start_report(Criterion::rigolin_collective, state, config);
    detail::record_moments(r, mo);
    const std::vector<double> ones(n, 1.0);
    const double var_q = mo.variance(detail::spread(ones, false));
    const double var_p = mo.variance(detail::spread(ones, true));
    double sum_var_p = 0.0, sum_p2 = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        sum_var_p += mo.p_variance(m);
        sum_p2 += mo.p_second(m);
    }
    const double nn = static_cast<double>(n);
    r.lhs = var_q * var_p;
    r.bound_hup = nn * nn / 4.0;
    r.delta_gup = 0.5 * nn * config.beta * sum_var_p;
    r.bound_gup = r.bound_hup + r.delta_gup;
    r.verdict = detail::universal_verdict(r.lhs, r.bound_hup);
    r.verdict_gup = detail::universal_verdict(r.lhs, r.bound_gup);
    r.diagnostics["var_Q"] = var_q;
    r.diagnostics["var_P"] = var_p;
    r.diagnostics["rhs_with_second_moments"] = r.bound_hup + 0.5 * nn * config.beta * sum_p2;
    r.diagnostics["rhs_with_variances"] = r.bound_gup;
    r.labels["delta_gup_form"] = "half_n_beta_sum_var_p";
    return r;
}

/// Pairwise relation [(dQ1)^2 + (dQ2)^2][(dP1)^2 + (dP2)^2] >= 1/4, GUP
/// correction (beta/4)[(dP1)^2 + (dP2)^2].
///
/// When dQ1 = dQ2 and dP1 = dP2 (within kSymmetricTol) the report also
/// carries the per-particle product dQ_i dP_i, its bound 1/4 + (beta/4)(dP_i)^2
/// and the HUP classification: "no_disagreement" iff beta (dP_i)^2 >= 1.
inline WitnessReport rigolin_pairwise(const QuantumState& state, const GupConfig& config,
                                      double tail_threshold = kTailThreshold)
{
    detail::check_modes(state, 2, "rigolin_pairwise");
    config.validate();
    state.require_tail_below(tail_threshold, "rigolin_pairwise");
    const QuadratureMoments mo = quadrature_moments(state, detail::momentum_matrices(state.space(), config));

    WitnessReport r = detail::start_report(Criterion::rigolin_pairwise, state, config);
    detail::record_moments(r, mo);
    const double vq1 = mo.x_variance(0), vq2 = mo.x_variance(1);
    const double vp1 = mo.p_variance(0), vp2 = mo.p_variance(1);
    r.lhs = (vq1 + vq2) * (vp1 + vp2);
    r.bound_hup = 0.25;
    r.delta_gup = 0.25 * config.beta * (vp1 + vp2);
    r.bound_gup = r.bound_hup + r.delta_gup;
    r.verdict = detail::universal_verdict(r.lhs, r.bound_hup);
    r.verdict_gup = detail::universal_verdict(r.lhs, r.bound_gup);
    r.labels["delta_gup_form"] = "quarter_beta_sum_var_p";

    const double dq1 = std::sqrt(vq1), dq2 = std::sqrt(vq2);
    const double dp1 = std::sqrt(vp1), dp2 = std::sqrt(vp2);
    const bool symmetric = std::abs(dq1 - dq2) <= kSymmetricTol && std::abs(dp1 - dp2) <= kSymmetricTol;
    r.labels["symmetric_case"] = symmetric ? "yes" : "no";
    if (symmetric) {
        const double product = dq1 * dp1;
        const double beta_dp2 = config.beta * vp1;
        const double delta = 0.25 * beta_dp2;
        r.diagnostics["per_particle_product"] = product;
        r.diagnostics["per_particle_bound_hup"] = 0.25;
        r.diagnostics["per_particle_delta_gup"] = delta;
        r.diagnostics["per_particle_bound_gup"] = 0.25 + delta;
        r.diagnostics["beta_var_p"] = beta_dp2;
        r.labels["hup_classification"] = beta_dp2 >= 1.0 ? "no_disagreement" : "disagreement";
    }
    return r;
}

/// Bipartite EPR criterion: separable states obey Var(u) + Var(v) >= a^2 + 1/a^2;
/// GUP correction beta [a^2 <p1^2> + <p2^2>/a^2].
inline WitnessReport duan_witness(const QuantumState& state, const EprCoefficients& coeffs, const GupConfig& config,
                                  double tail_threshold = kTailThreshold)
{
    detail::check_modes(state, 2, "duan_witness");
    if (!coeffs.is_bipartite()) throw InvalidArgument("duan_witness: needs bipartite coefficients (a)");
    return detail::epr_witness(Criterion::duan, state, coeffs, config, tail_threshold);
}

/// Fully-separable tripartite criterion: Var(u) + Var(v) >= sum |h_n g_n|;
/// GUP correction beta sum |h_n g_n| <p_n^2>.
inline WitnessReport vanloock_witness(const QuantumState& state, const EprCoefficients& coeffs, const GupConfig& config,
                                      double tail_threshold = kTailThreshold)
{
    detail::check_modes(state, 3, "vanloock_witness");
    if (coeffs.is_bipartite()) throw InvalidArgument("vanloock_witness: needs tripartite coefficients (h, g)");
    return detail::epr_witness(Criterion::vanloock, state, coeffs, config, tail_threshold);
}

}  // namespace gupw
