#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gupw/fock_space.hpp"

namespace gupw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class HermitianHint { yes, no, unknown };

inline constexpr double kHermitianTol = 1e-12;

/// Largest entry of |M - M^dagger|.
inline double hermiticity_defect(const Matrix& m)
{
    if (m.rows() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Dense operator on a FockSpace.
class Operator {
public:
    Operator(FockSpace space, Matrix matrix, HermitianHint hint = HermitianHint::unknown)
        : space_(std::move(space)), matrix_(std::move(matrix)), hint_(hint)
    {
        const auto n = static_cast<Eigen::Index>(space_.total_dim());
        if (matrix_.rows() != n || matrix_.cols() != n)
            throw InvalidArgument("Operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                                  std::to_string(matrix_.cols()) + ", space dimension is " + std::to_string(n));
        if (hint_ == HermitianHint::yes && hermiticity_defect(matrix_) > kHermitianTol)
            throw InvalidArgument("Operator: tagged Hermitian but |M - M^dagger| = " +
                                  std::to_string(hermiticity_defect(matrix_)));
    }

    const FockSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    HermitianHint hint() const { return hint_; }
    bool hermitian() const { return hint_ == HermitianHint::yes; }

    cplx operator()(Eigen::Index row, Eigen::Index col) const { return matrix_(row, col); }

private:
    FockSpace space_;
    Matrix matrix_;
    HermitianHint hint_;
};

namespace detail {

inline HermitianHint sum_hint(HermitianHint a, HermitianHint b)
{
    return (a == HermitianHint::yes && b == HermitianHint::yes) ? HermitianHint::yes : HermitianHint::unknown;
}

inline HermitianHint scale_hint(HermitianHint a, cplx c)
{
    return (a == HermitianHint::yes && c.imag() == 0.0) ? HermitianHint::yes : HermitianHint::unknown;
}

}  // namespace detail

inline Operator identity(const FockSpace& space)
{
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    return Operator(space, Matrix::Identity(n, n), HermitianHint::yes);
}

inline Operator zero(const FockSpace& space)
{
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    return Operator(space, Matrix::Zero(n, n), HermitianHint::yes);
}

inline Operator operator+(const Operator& a, const Operator& b)
{
    require_same_space(a.space(), b.space(), "operator+");
    return Operator(a.space(), a.matrix() + b.matrix(), detail::sum_hint(a.hint(), b.hint()));
}

inline Operator operator-(const Operator& a, const Operator& b)
{
    require_same_space(a.space(), b.space(), "operator-");
    return Operator(a.space(), a.matrix() - b.matrix(), detail::sum_hint(a.hint(), b.hint()));
}

inline Operator operator*(cplx c, const Operator& a)
{
    return Operator(a.space(), c * a.matrix(), detail::scale_hint(a.hint(), c));
}

inline Operator operator*(double c, const Operator& a) { return cplx(c, 0.0) * a; }

/// Matrix product. The hint is dropped: AB is Hermitian only if A and B commute.
inline Operator operator*(const Operator& a, const Operator& b)
{
    require_same_space(a.space(), b.space(), "operator*");
    return Operator(a.space(), a.matrix() * b.matrix(), HermitianHint::unknown);
}

inline Operator adjoint(const Operator& a)
{
    return Operator(a.space(), a.matrix().adjoint(), a.hint());
}

/// a^k by repeated squaring; k = 0 gives the identity.
inline Operator power(const Operator& a, unsigned k)
{
    const auto n = a.matrix().rows();
    Matrix result = Matrix::Identity(n, n);
    Matrix base = a.matrix();
    while (k) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    // Powers of a Hermitian matrix are Hermitian; re-symmetrize away round-off.
    if (a.hermitian()) {
        Matrix sym = 0.5 * (result + result.adjoint());
        return Operator(a.space(), std::move(sym), HermitianHint::yes);
    }
    return Operator(a.space(), std::move(result), HermitianHint::unknown);
}

inline Operator commutator(const Operator& a, const Operator& b)
{
    require_same_space(a.space(), b.space(), "commutator");
    return Operator(a.space(), a.matrix() * b.matrix() - b.matrix() * a.matrix(), HermitianHint::unknown);
}

/// Linear combination sum_k c_k * ops_k with real coefficients (keeps the Hermitian tag).
inline Operator linear_combination(std::span<const double> coeffs, std::span<const Operator> ops)
{
    if (coeffs.size() != ops.size() || ops.empty())
        throw InvalidArgument("linear_combination: need matching, nonempty coefficient and operator lists");
    Matrix m = coeffs[0] * ops[0].matrix();
    HermitianHint hint = ops[0].hint();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        require_same_space(ops[0].space(), ops[k].space(), "linear_combination");
        m += coeffs[k] * ops[k].matrix();
        hint = detail::sum_hint(hint, ops[k].hint());
    }
    return Operator(ops[0].space(), std::move(m), hint);
}

// ---------------------------------------------------------------------------
// Single-mode matrices and their embedding

/// D x D annihilation matrix: a|n> = sqrt(n)|n-1>.
inline Matrix annihilation_matrix(std::size_t cutoff)
{
    const auto d = static_cast<Eigen::Index>(cutoff);
    Matrix a = Matrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// x = (a + a^dagger)/sqrt(2)
inline Matrix position_matrix(std::size_t cutoff)
{
    const Matrix a = annihilation_matrix(cutoff);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

/// p = i(a^dagger - a)/sqrt(2)
inline Matrix momentum_matrix(std::size_t cutoff)
{
    const Matrix a = annihilation_matrix(cutoff);
    return cplx(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0);
}

/// I x ... x local x ... x I with `local` acting on `mode`.
inline Matrix embed_matrix(const FockSpace& space, std::size_t mode, const Matrix& local)
{
    space.check_mode(mode);
    const auto d = static_cast<Eigen::Index>(space.cutoff(mode));
    if (local.rows() != d || local.cols() != d)
        throw InvalidArgument("embed: local operator does not match the mode cutoff");
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    const auto stride = static_cast<Eigen::Index>(space.stride(mode));
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const auto level = static_cast<Eigen::Index>(space.level(static_cast<std::size_t>(col), mode));
        const Eigen::Index base = col - level * stride;
        for (Eigen::Index row_level = 0; row_level < d; ++row_level) {
            const cplx v = local(row_level, level);
            if (v != cplx(0.0, 0.0)) out(base + row_level * stride, col) = v;
        }
    }
    return out;
}

inline Operator embed(const FockSpace& space, std::size_t mode, const Matrix& local,
                      HermitianHint hint = HermitianHint::unknown)
{
    return Operator(space, embed_matrix(space, mode, local), hint);
}

/// Annihilation operator of `mode`, identity on every other mode.
inline Operator ladder(const FockSpace& space, std::size_t mode)
{
    space.check_mode(mode);
    return embed(space, mode, annihilation_matrix(space.cutoff(mode)), HermitianHint::no);
}

inline Operator number_operator(const FockSpace& space, std::size_t mode)
{
    space.check_mode(mode);
    const Matrix a = annihilation_matrix(space.cutoff(mode));
    return embed(space, mode, a.adjoint() * a, HermitianHint::yes);
}

struct QuadraturePair {
    Operator x;
    Operator p;
};

/// Canonical pair x = (a + a^dagger)/sqrt(2), p = i(a^dagger - a)/sqrt(2) of `mode`.
/// In the truncated space [x, p] = i(I - D|D-1><D-1|).
inline QuadraturePair quadrature_pair(const FockSpace& space, std::size_t mode)
{
    space.check_mode(mode);
    const auto d = space.cutoff(mode);
    return {embed(space, mode, position_matrix(d), HermitianHint::yes),
            embed(space, mode, momentum_matrix(d), HermitianHint::yes)};
}

}  // namespace gupw
