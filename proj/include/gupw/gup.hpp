#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "gupw/quantum_state.hpp"

namespace gupw {

/// Which coefficient multiplies p0^3 in the modified momentum P = p0 + beta' p0^3.
///
/// `paper`: beta' = beta, the representation x = x0, p = p0(1 + beta p0^2).
///          It gives [x, P] = i(1 + 3 beta p0^2), three times the GUP term.
/// `kempf`: beta' = beta/3, which reproduces [x, P] = i(1 + beta P^2) up to O(beta^2).
enum class Convention { paper, kempf };

/// Where the per-mode momentum statistics in witness bounds come from.
enum class MomentSource { canonical, modified };

inline constexpr double kBetaCap = 0.1;

inline std::string_view to_string(Convention c) { return c == Convention::paper ? "paper" : "kempf"; }
inline std::string_view to_string(MomentSource s) { return s == MomentSource::canonical ? "canonical" : "modified"; }

inline Convention parse_convention(std::string_view s)
{
    if (s == "paper") return Convention::paper;
    if (s == "kempf") return Convention::kempf;
    throw InvalidArgument("unknown convention '" + std::string(s) + "' (expected paper|kempf)");
}

inline MomentSource parse_moment_source(std::string_view s)
{
    if (s == "canonical") return MomentSource::canonical;
    if (s == "modified") return MomentSource::modified;
    throw InvalidArgument("unknown moment source '" + std::string(s) + "' (expected canonical|modified)");
}

/// GUP parameter beta (internal units, hbar = 1) plus representation choices.
struct GupConfig {
    double beta = 0.0;
    Convention convention = Convention::kempf;
    MomentSource moments = MomentSource::canonical;

    GupConfig() = default;
    GupConfig(double b, Convention c = Convention::kempf, MomentSource s = MomentSource::canonical)
        : beta(b), convention(c), moments(s)
    {
        validate();
    }

    void validate() const
    {
        if (!(beta >= 0.0)) throw InvalidArgument("GupConfig: beta must be >= 0, got " + std::to_string(beta));
        if (beta > kBetaCap)
            throw InvalidArgument("GupConfig: beta = " + std::to_string(beta) +
                                  " exceeds the first-order sanity cap 0.1");
    }

    /// Coefficient of p0^3 in the representation.
    double representation_coefficient() const { return convention == Convention::paper ? beta : beta / 3.0; }
};

/// P = p0 + beta' p0^3 on a single-mode matrix.
inline Matrix gup_momentum_matrix(const Matrix& p0, const GupConfig& config)
{
    const double c = config.representation_coefficient();
    if (c == 0.0) return p0;
    Matrix p = p0 + c * (p0 * p0 * p0);
    return 0.5 * (p + p.adjoint());
}

inline Operator gup_momentum(const Operator& p0, const GupConfig& config)
{
    if (!p0.hermitian()) throw InvalidArgument("gup_momentum: p0 must be Hermitian");
    config.validate();
    return Operator(p0.space(), gup_momentum_matrix(p0.matrix(), config), HermitianHint::yes);
}

/// |<[x, P]> - i(1 + beta <P^2>)| for `mode` of `state`: the state-level
/// deviation of the representation from the GUP commutator.
inline double commutator_residual(const FockSpace& space, std::size_t mode, const GupConfig& config,
                                  const QuantumState& state, double tail_threshold = kTailThreshold)
{
    require_same_space(space, state.space(), "commutator_residual");
    space.check_mode(mode);
    config.validate();
    state.require_tail_below(tail_threshold, "commutator_residual");
    const QuantumState single = space.n_modes() == 1 ? state : state.reduced({mode});
    const std::size_t d = space.cutoff(mode);
    const Matrix x = position_matrix(d);
    const Matrix p = gup_momentum_matrix(momentum_matrix(d), config);
    const cplx comm = expectation(single, Matrix(x * p - p * x));
    const double p2 = hermitian_expectation(single, Matrix(p * p));
    return std::abs(comm - cplx(0.0, 1.0 + config.beta * p2));
}

/// H = p0^2/(2m) + (beta/m) p0^4 + V. Uses beta itself, independent of the
/// representation convention.
inline Operator gup_hamiltonian(const Operator& p0, const Operator& potential, double mass, const GupConfig& config)
{
    if (!(mass > 0.0)) throw InvalidArgument("gup_hamiltonian: mass must be positive");
    require_same_space(p0.space(), potential.space(), "gup_hamiltonian");
    if (!p0.hermitian() || !potential.hermitian())
        throw InvalidArgument("gup_hamiltonian: p0 and potential must be Hermitian");
    config.validate();
    const Matrix p2 = p0.matrix() * p0.matrix();
    Matrix h = p2 / (2.0 * mass) + potential.matrix();
    if (config.beta != 0.0) h += (config.beta / mass) * (p2 * p2);
    h = 0.5 * (h + h.adjoint());
    return Operator(p0.space(), std::move(h), HermitianHint::yes);
}

/// First-order energy shift of oscillator level n from the (beta/m) p0^4 term:
/// (beta/m) (3/4)(2n^2 + 2n + 1)(m omega)^2, hbar = 1.
inline double sho_perturbative_shift(int n, double mass, double omega, const GupConfig& config)
{
    if (n < 0) throw InvalidArgument("sho_perturbative_shift: n must be >= 0");
    if (!(mass > 0.0) || !(omega > 0.0)) throw InvalidArgument("sho_perturbative_shift: mass and omega must be positive");
    const double nn = static_cast<double>(n);
    const double p4 = 0.75 * (2.0 * nn * nn + 2.0 * nn + 1.0) * (mass * omega) * (mass * omega);
    return config.beta / mass * p4;
}

}  // namespace gupw
