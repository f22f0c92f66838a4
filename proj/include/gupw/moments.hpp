#pragma once

#include <vector>

#include "gupw/quantum_state.hpp"

namespace gupw {

/// First and symmetrized second moments of the per-mode quadrature vector
/// r = (x_0, p_0, x_1, p_1, ...).
///
/// Moments are taken from one- and two-mode marginals, so the cost is
/// independent of how many other modes the state carries. The momentum of
/// each mode may be replaced by any Hermitian single-mode matrix (the GUP
/// momentum, for instance); positions are always canonical.
struct QuadratureMoments {
    std::size_t n_modes = 0;
    Eigen::VectorXd mean;    // <r_k>
    Eigen::MatrixXd second;  // <(r_k r_l + r_l r_k)/2>

    static std::size_t x_index(std::size_t mode) { return 2 * mode; }
    static std::size_t p_index(std::size_t mode) { return 2 * mode + 1; }

    double x_mean(std::size_t m) const { return mean(static_cast<Eigen::Index>(x_index(m))); }
    double p_mean(std::size_t m) const { return mean(static_cast<Eigen::Index>(p_index(m))); }
    double x_second(std::size_t m) const
    {
        const auto i = static_cast<Eigen::Index>(x_index(m));
        return second(i, i);
    }
    double p_second(std::size_t m) const
    {
        const auto i = static_cast<Eigen::Index>(p_index(m));
        return second(i, i);
    }
    double x_variance(std::size_t m) const { return clamp_variance(x_second(m) - x_mean(m) * x_mean(m)); }
    double p_variance(std::size_t m) const { return clamp_variance(p_second(m) - p_mean(m) * p_mean(m)); }

    Eigen::MatrixXd covariance() const { return second - mean * mean.transpose(); }

    /// Variance of sum_k c_k r_k.
    double variance(const Eigen::VectorXd& coeffs) const
    {
        if (coeffs.size() != mean.size()) throw InvalidArgument("QuadratureMoments::variance: wrong length");
        return clamp_variance(coeffs.dot(covariance() * coeffs));
    }
};

namespace detail {

/// tr(rho (A x B)) for a two-mode density matrix.
inline cplx two_mode_expectation(const Matrix& rho, const Matrix& a, const Matrix& b)
{
    const Matrix ab = kron(a, b);
    return rho.transpose().cwiseProduct(ab).sum();
}

inline double real_part_checked(cplx v)
{
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw NumericalError("quadrature moment has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

}  // namespace detail

/// Moments with momentum matrices `momenta[m]` (one D_m x D_m Hermitian
/// matrix per mode). An empty list selects the canonical p of every mode.
inline QuadratureMoments quadrature_moments(const QuantumState& state, const std::vector<Matrix>& momenta = {})
{
    const FockSpace& space = state.space();
    const std::size_t n = space.n_modes();
    if (!momenta.empty() && momenta.size() != n)
        throw InvalidArgument("quadrature_moments: need one momentum matrix per mode");

    std::vector<Matrix> xs(n), ps(n);
    for (std::size_t m = 0; m < n; ++m) {
        xs[m] = position_matrix(space.cutoff(m));
        ps[m] = momenta.empty() ? momentum_matrix(space.cutoff(m)) : momenta[m];
        if (ps[m].rows() != xs[m].rows()) throw InvalidArgument("quadrature_moments: momentum matrix size");
    }

    QuadratureMoments out;
    out.n_modes = n;
    out.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
    out.second = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));

    auto set = [&out](std::size_t i, std::size_t j, double v) {
        out.second(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        out.second(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    };

    for (std::size_t m = 0; m < n; ++m) {
        const QuantumState single = n == 1 ? state : state.reduced({m});
        const Matrix& x = xs[m];
        const Matrix& p = ps[m];
        const auto xi = QuadratureMoments::x_index(m);
        const auto pi = QuadratureMoments::p_index(m);
        out.mean(static_cast<Eigen::Index>(xi)) = hermitian_expectation(single, x);
        out.mean(static_cast<Eigen::Index>(pi)) = hermitian_expectation(single, p);
        set(xi, xi, hermitian_expectation(single, Matrix(x * x)));
        set(pi, pi, hermitian_expectation(single, Matrix(p * p)));
        set(xi, pi, hermitian_expectation(single, Matrix(0.5 * (x * p + p * x))));
    }

    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = m + 1; k < n; ++k) {
            const QuantumState pair = state.reduced({m, k});
            const Matrix rho = pair.density_matrix();
            const std::size_t rm[2] = {QuadratureMoments::x_index(m), QuadratureMoments::p_index(m)};
            const std::size_t rk[2] = {QuadratureMoments::x_index(k), QuadratureMoments::p_index(k)};
            const Matrix* om[2] = {&xs[m], &ps[m]};
            const Matrix* ok[2] = {&xs[k], &ps[k]};
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    set(rm[u], rk[v], detail::real_part_checked(detail::two_mode_expectation(rho, *om[u], *ok[v])));
        }
    }
    return out;
}

}  // namespace gupw
