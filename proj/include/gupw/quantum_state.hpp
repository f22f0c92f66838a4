#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gupw/operator.hpp"

namespace gupw {

struct SeparableEnsemble;

inline constexpr double kNormTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kVarianceClamp = 1e-10;
/// Default trust threshold for truncated-operator numerics.
inline constexpr double kTailThreshold = 1e-6;

/// How much checking a mixed-state constructor does. `full` adds an
/// eigenvalue test, which is O(dim^3); factories that assemble convex sums
/// of PSD tensor products use `structural`.
enum class Validation { full, structural };

/// Pure vector or density matrix on a FockSpace.
class QuantumState {
public:
    static QuantumState pure(FockSpace space, Vector psi)
    {
        QuantumState s(std::move(space));
        if (psi.size() != static_cast<Eigen::Index>(s.space_.total_dim()))
            throw InvalidArgument("QuantumState::pure: vector length does not match the space");
        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > kNormTol)
            throw InvalidArgument("QuantumState::pure: |psi| = " + std::to_string(norm) + ", expected 1");
        s.data_ = std::move(psi);
        s.tail_mass_ = s.compute_tail_mass();
        return s;
    }

    static QuantumState mixed(FockSpace space, Matrix rho, Validation validation = Validation::full)
    {
        QuantumState s(std::move(space));
        const auto n = static_cast<Eigen::Index>(s.space_.total_dim());
        if (rho.rows() != n || rho.cols() != n)
            throw InvalidArgument("QuantumState::mixed: density matrix does not match the space");
        const cplx tr = rho.trace();
        if (std::abs(tr.real() - 1.0) > kNormTol || std::abs(tr.imag()) > kNormTol)
            throw InvalidArgument("QuantumState::mixed: trace = " + std::to_string(tr.real()) + ", expected 1");
        if (hermiticity_defect(rho) > kHermitianTol)
            throw InvalidArgument("QuantumState::mixed: density matrix is not Hermitian");
        if (validation == Validation::full) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
            const double lmin = es.eigenvalues().minCoeff();
            if (lmin < -kPsdTol)
                throw InvalidArgument("QuantumState::mixed: smallest eigenvalue " + std::to_string(lmin));
        }
        s.data_ = std::move(rho);
        s.tail_mass_ = s.compute_tail_mass();
        return s;
    }

    /// Normalizes `psi` first; use for factory output.
    static QuantumState pure_normalized(FockSpace space, Vector psi)
    {
        const double norm = psi.norm();
        if (!(norm > 0.0)) throw InvalidArgument("QuantumState: zero vector");
        psi /= norm;
        return pure(std::move(space), std::move(psi));
    }

    const FockSpace& space() const { return space_; }
    bool is_pure() const { return std::holds_alternative<Vector>(data_); }
    const Vector& vector() const { return std::get<Vector>(data_); }
    const Matrix& density() const { return std::get<Matrix>(data_); }

    /// Density matrix regardless of representation (O(dim^2) for pure states).
    Matrix density_matrix() const
    {
        if (is_pure()) return vector() * vector().adjoint();
        return density();
    }

    /// Largest population, over modes, held in the top two Fock levels of a mode.
    double tail_mass() const { return tail_mass_; }

    /// Population of every basis state.
    Eigen::VectorXd populations() const
    {
        if (is_pure()) return vector().cwiseAbs2();
        return density().diagonal().real();
    }

    const std::shared_ptr<const SeparableEnsemble>& ensemble() const { return ensemble_; }
    QuantumState with_ensemble(std::shared_ptr<const SeparableEnsemble> e) const&
    {
        QuantumState s = *this;
        s.ensemble_ = std::move(e);
        return s;
    }
    QuantumState with_ensemble(std::shared_ptr<const SeparableEnsemble> e) &&
    {
        ensemble_ = std::move(e);
        return std::move(*this);
    }

    /// Throws TruncationError when tail_mass exceeds `threshold`.
    void require_tail_below(double threshold, const char* where) const
    {
        if (tail_mass_ > threshold)
            throw TruncationError(std::string(where) + ": tail mass " + std::to_string(tail_mass_) +
                                  " exceeds " + std::to_string(threshold) + " at cutoffs " + space_.describe() +
                                  "; increase the cutoff");
    }

    /// Reduced density matrix on `modes` (kept in the listed order).
    QuantumState reduced(std::span<const std::size_t> modes) const
    {
        const FockSpace sub = space_.subspace(modes);
        std::vector<bool> kept(space_.n_modes(), false);
        for (auto m : modes) {
            if (kept[m]) throw InvalidArgument("reduced: repeated mode");
            kept[m] = true;
        }
        const std::size_t dim = space_.total_dim();
        const std::size_t sub_dim = sub.total_dim();
        const std::size_t rest_dim = dim / sub_dim;

        // Map each full basis index to (kept index, traced index).
        std::vector<std::size_t> s_idx(dim), r_idx(dim);
        for (std::size_t b = 0; b < dim; ++b) {
            std::size_t s = 0, r = 0;
            for (auto m : modes) s = s * space_.cutoff(m) + space_.level(b, m);
            for (std::size_t m = 0; m < space_.n_modes(); ++m)
                if (!kept[m]) r = r * space_.cutoff(m) + space_.level(b, m);
            s_idx[b] = s;
            r_idx[b] = r;
        }

        const auto sd = static_cast<Eigen::Index>(sub_dim);
        const auto rd = static_cast<Eigen::Index>(rest_dim);
        Matrix red;
        if (is_pure()) {
            Matrix psi_mat = Matrix::Zero(sd, rd);
            const Vector& psi = vector();
            for (std::size_t b = 0; b < dim; ++b)
                psi_mat(static_cast<Eigen::Index>(s_idx[b]), static_cast<Eigen::Index>(r_idx[b])) =
                    psi(static_cast<Eigen::Index>(b));
            red = psi_mat * psi_mat.adjoint();
        } else {
            // Group full indices by traced index; rho_S[s, s'] = sum_r rho[(s,r), (s',r)].
            std::vector<std::vector<std::size_t>> groups(rest_dim);
            for (std::size_t b = 0; b < dim; ++b) groups[r_idx[b]].push_back(b);
            const Matrix& rho = density();
            red = Matrix::Zero(sd, sd);
            for (const auto& g : groups)
                for (auto bj : g)
                    for (auto bi : g)
                        red(static_cast<Eigen::Index>(s_idx[bi]), static_cast<Eigen::Index>(s_idx[bj])) +=
                            rho(static_cast<Eigen::Index>(bi), static_cast<Eigen::Index>(bj));
        }
        red = 0.5 * (red + red.adjoint());
        return QuantumState::mixed(sub, std::move(red), Validation::structural);
    }

    QuantumState reduced(std::initializer_list<std::size_t> modes) const
    {
        const std::vector<std::size_t> v(modes);
        return reduced(std::span<const std::size_t>(v));
    }

private:
    explicit QuantumState(FockSpace space) : space_(std::move(space)) {}

    double compute_tail_mass() const
    {
        const Eigen::VectorXd pop = populations();
        double worst = 0.0;
        for (std::size_t m = 0; m < space_.n_modes(); ++m) {
            const std::size_t d = space_.cutoff(m);
            double mass = 0.0;
            for (std::size_t b = 0; b < space_.total_dim(); ++b)
                if (space_.level(b, m) + 2 >= d) mass += pop(static_cast<Eigen::Index>(b));
            worst = std::max(worst, mass);
        }
        return worst;
    }

    FockSpace space_;
    std::variant<Vector, Matrix> data_;
    double tail_mass_ = 0.0;
    std::shared_ptr<const SeparableEnsemble> ensemble_;
};

// ---------------------------------------------------------------------------
// Expectation values

inline cplx expectation(const QuantumState& state, const Matrix& m)
{
    if (state.is_pure()) return state.vector().dot(m * state.vector());
    // tr(rho M) = sum_ij rho_ij M_ji
    return state.density().transpose().cwiseProduct(m).sum();
}

inline cplx expectation(const QuantumState& state, const Operator& op)
{
    require_same_space(state.space(), op.space(), "expectation");
    return expectation(state, op.matrix());
}

/// Real expectation of a Hermitian operator; the imaginary part must be round-off.
inline double hermitian_expectation(const QuantumState& state, const Matrix& m)
{
    const cplx v = expectation(state, m);
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw NumericalError("hermitian_expectation: imaginary part " + std::to_string(v.imag()));
    return v.real();
}

inline double hermitian_expectation(const QuantumState& state, const Operator& op)
{
    require_same_space(state.space(), op.space(), "hermitian_expectation");
    if (!op.hermitian()) throw InvalidArgument("hermitian_expectation: operator is not tagged Hermitian");
    return hermitian_expectation(state, op.matrix());
}

/// <M^2> - <M>^2, clamped to zero when round-off leaves it in (-1e-10, 0).
inline double clamp_variance(double v)
{
    if (v < 0.0) {
        if (v < -kVarianceClamp) throw NumericalError("variance is " + std::to_string(v));
        return 0.0;
    }
    return v;
}

inline double variance(const QuantumState& state, const Operator& op)
{
    require_same_space(state.space(), op.space(), "variance");
    if (!op.hermitian()) throw InvalidArgument("variance: operator must be Hermitian");
    const double mean = hermitian_expectation(state, op.matrix());
    double second;
    if (state.is_pure()) {
        second = (op.matrix() * state.vector()).squaredNorm();
    } else {
        const Matrix sq = op.matrix() * op.matrix();
        second = hermitian_expectation(state, sq);
    }
    return clamp_variance(second - mean * mean);
}

// ---------------------------------------------------------------------------
// Tensor products

inline FockSpace product_space(std::span<const QuantumState> factors)
{
    std::vector<std::size_t> cutoffs;
    for (const auto& f : factors)
        for (auto c : f.space().cutoffs()) cutoffs.push_back(c);
    return FockSpace(std::move(cutoffs));
}

/// Kronecker product of vectors/matrices in mode order.
inline Vector kron(const Vector& a, const Vector& b)
{
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Tensor product of states; pure if every factor is pure.
inline QuantumState tensor_product(std::span<const QuantumState> factors)
{
    if (factors.empty()) throw InvalidArgument("tensor_product: empty factor list");
    FockSpace space = product_space(factors);
    const bool all_pure = std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.is_pure(); });
    if (all_pure) {
        Vector v = factors[0].vector();
        for (std::size_t k = 1; k < factors.size(); ++k) v = kron(v, factors[k].vector());
        return QuantumState::pure_normalized(std::move(space), std::move(v));
    }
    Matrix r = factors[0].density_matrix();
    for (std::size_t k = 1; k < factors.size(); ++k) r = kron(r, factors[k].density_matrix());
    r = 0.5 * (r + r.adjoint());
    return QuantumState::mixed(std::move(space), std::move(r), Validation::structural);
}

}  // namespace gupw
