#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "gupw/quantum_state.hpp"
#include "gupw/rng.hpp"

namespace gupw {

enum class ModeKind { vacuum, fock, coherent, squeezed, thermal };

inline std::string_view to_string(ModeKind k)
{
    switch (k) {
    case ModeKind::vacuum: return "vacuum";
    case ModeKind::fock: return "fock";
    case ModeKind::coherent: return "coherent";
    case ModeKind::squeezed: return "squeezed";
    case ModeKind::thermal: return "thermal";
    }
    return "?";
}

/// Parameters of one single-mode state. Only the fields of `kind` are read.
struct SingleModeSpec {
    ModeKind kind = ModeKind::vacuum;
    int n = 0;             // fock
    cplx alpha{0.0, 0.0};  // coherent
    double r = 0.0;        // squeezed: S(r e^{i phi})|0>, phi = 0 squeezes x
    double phi = 0.0;
    double nbar = 0.0;     // thermal

    static SingleModeSpec vacuum() { return {}; }
    static SingleModeSpec fock_state(int n)
    {
        SingleModeSpec s;
        s.kind = ModeKind::fock;
        s.n = n;
        return s;
    }
    static SingleModeSpec coherent(cplx alpha)
    {
        SingleModeSpec s;
        s.kind = ModeKind::coherent;
        s.alpha = alpha;
        return s;
    }
    static SingleModeSpec squeezed(double r, double phi = 0.0)
    {
        SingleModeSpec s;
        s.kind = ModeKind::squeezed;
        s.r = r;
        s.phi = phi;
        return s;
    }
    static SingleModeSpec thermal(double nbar)
    {
        SingleModeSpec s;
        s.kind = ModeKind::thermal;
        s.nbar = nbar;
        return s;
    }

    friend bool operator==(const SingleModeSpec&, const SingleModeSpec&) = default;

    std::string describe() const
    {
        std::string s(to_string(kind));
        switch (kind) {
        case ModeKind::vacuum: break;
        case ModeKind::fock: s += "(n=" + std::to_string(n) + ")"; break;
        case ModeKind::coherent:
            s += "(alpha=" + std::to_string(alpha.real()) + (alpha.imag() < 0 ? "" : "+") +
                 std::to_string(alpha.imag()) + "i)";
            break;
        case ModeKind::squeezed: s += "(r=" + std::to_string(r) + ",phi=" + std::to_string(phi) + ")"; break;
        case ModeKind::thermal: s += "(nbar=" + std::to_string(nbar) + ")"; break;
        }
        return s;
    }
};

namespace detail {

inline void check_truncation(double dropped, double tail, double threshold, const std::string& what, std::size_t cutoff)
{
    if (dropped > threshold || tail > threshold)
        throw TruncationError("cutoff " + std::to_string(cutoff) + " too small for " + what + ": " +
                              std::to_string(std::max(dropped, tail)) + " of the population lies at or beyond " +
                              "the top levels (limit " + std::to_string(threshold) + ")");
}

}  // namespace detail

/// Zero-mean pure Gaussian state N exp(1/2 sum_kl B_kl a_k^dag a_l^dag)|0>.
///
/// B must be complex symmetric with operator norm < 1. Amplitudes come from
/// the exact recurrence sqrt(n_k + 1) psi(n + e_k) = sum_l B_kl sqrt(n_l) psi(n - e_l),
/// so truncation only drops levels at or above the cutoff; the dropped weight
/// is known in closed form from |N|^-2 = det(I - B^* B)^(-1/2).
inline QuantumState gaussian_pure_state(const Matrix& b, const std::vector<std::size_t>& cutoffs,
                                        double threshold = kTailThreshold, const std::string& what = "gaussian state")
{
    const auto n_modes = static_cast<std::size_t>(b.rows());
    if (b.rows() != b.cols() || n_modes != cutoffs.size())
        throw InvalidArgument("gaussian_pure_state: B must be square with one row per mode");
    if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-14)
        throw InvalidArgument("gaussian_pure_state: B must be symmetric");
    Eigen::JacobiSVD<Matrix> svd(b);
    if (svd.singularValues()(0) >= 1.0) throw InvalidArgument("gaussian_pure_state: |B| must be < 1");

    FockSpace space(cutoffs);
    const std::size_t dim = space.total_dim();
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(dim));
    psi(0) = 1.0;
    for (std::size_t idx = 1; idx < dim; ++idx) {
        const auto lv = space.multi_index(idx);
        std::size_t k = 0;
        while (lv[k] == 0) ++k;
        // Lower mode k by one, then psi(idx) = sum_l B_kl sqrt(m_l) psi(m - e_l) / sqrt(lv_k).
        const std::size_t m_idx = idx - space.stride(k);
        cplx acc = 0.0;
        for (std::size_t l = 0; l < n_modes; ++l) {
            const std::size_t ml = lv[l] - (l == k ? 1 : 0);
            if (ml == 0) continue;
            acc += b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * std::sqrt(static_cast<double>(ml)) *
                   psi(static_cast<Eigen::Index>(m_idx - space.stride(l)));
        }
        psi(static_cast<Eigen::Index>(idx)) = acc / std::sqrt(static_cast<double>(lv[k]));
    }

    const auto id = Matrix::Identity(b.rows(), b.cols());
    const double det = (id - b.conjugate() * b).determinant().real();
    const double full_norm2 = 1.0 / std::sqrt(det);
    const double kept = psi.squaredNorm() / full_norm2;
    QuantumState s = QuantumState::pure_normalized(space, std::move(psi));
    detail::check_truncation(1.0 - kept, s.tail_mass(), threshold, what, *std::min_element(cutoffs.begin(), cutoffs.end()));
    return s;
}

/// Single-mode library state. Thermal states are mixed, the rest pure.
/// Throws TruncationError when the cutoff leaves more than `threshold` of the
/// population at or beyond the top two levels.
inline QuantumState single_mode_state(const SingleModeSpec& spec, std::size_t cutoff, double threshold = kTailThreshold)
{
    FockSpace space({cutoff});
    const auto d = static_cast<Eigen::Index>(cutoff);
    switch (spec.kind) {
    case ModeKind::vacuum: {
        Vector v = Vector::Zero(d);
        v(0) = 1.0;
        QuantumState s = QuantumState::pure(space, std::move(v));
        detail::check_truncation(0.0, s.tail_mass(), threshold, "vacuum", cutoff);
        return s;
    }
    case ModeKind::fock: {
        if (spec.n < 0) throw InvalidArgument("fock state: n must be >= 0");
        if (static_cast<std::size_t>(spec.n) + 2 >= cutoff)
            throw TruncationError("cutoff " + std::to_string(cutoff) + " too small for " + spec.describe() +
                                  ": level n sits in the top two levels; need cutoff >= n + 3");
        Vector v = Vector::Zero(d);
        v(spec.n) = 1.0;
        return QuantumState::pure(space, std::move(v));
    }
    case ModeKind::coherent: {
        Vector v(d);
        const double a2 = std::norm(spec.alpha);
        v(0) = std::exp(-0.5 * a2);
        for (Eigen::Index n = 1; n < d; ++n) v(n) = v(n - 1) * spec.alpha / std::sqrt(static_cast<double>(n));
        const double kept = v.squaredNorm();
        QuantumState s = QuantumState::pure_normalized(space, std::move(v));
        detail::check_truncation(1.0 - kept, s.tail_mass(), threshold, spec.describe(), cutoff);
        return s;
    }
    case ModeKind::squeezed: {
        if (spec.r < 0.0) throw InvalidArgument("squeezed state: r must be >= 0");
        Matrix b(1, 1);
        b(0, 0) = -std::exp(cplx(0.0, spec.phi)) * std::tanh(spec.r);
        return gaussian_pure_state(b, {cutoff}, threshold, spec.describe());
    }
    case ModeKind::thermal: {
        if (spec.nbar < 0.0) throw InvalidArgument("thermal state: nbar must be >= 0");
        const double q = spec.nbar / (spec.nbar + 1.0);
        Matrix rho = Matrix::Zero(d, d);
        double pn = 1.0 / (spec.nbar + 1.0);
        double kept = 0.0;
        for (Eigen::Index n = 0; n < d; ++n) {
            rho(n, n) = pn;
            kept += pn;
            pn *= q;
        }
        rho /= kept;
        QuantumState s = QuantumState::mixed(space, std::move(rho), Validation::structural);
        detail::check_truncation(1.0 - kept, s.tail_mass(), threshold, spec.describe(), cutoff);
        return s;
    }
    }
    throw InvalidArgument("single_mode_state: unknown kind");
}

/// Tensor product of single-mode factors in mode order.
inline QuantumState product_state(std::span<const QuantumState> factors)
{
    if (factors.empty()) throw InvalidArgument("product_state: empty factor list");
    for (const auto& f : factors)
        if (f.space().n_modes() != 1) throw InvalidArgument("product_state: factors must be single-mode states");
    return tensor_product(factors);
}

inline QuantumState product_state(std::initializer_list<QuantumState> factors)
{
    const std::vector<QuantumState> v(factors);
    return product_state(std::span<const QuantumState>(v));
}

/// Explicit convex combination sum_i eta_i rho_i1 x ... x rho_iN.
struct SeparableEnsemble {
    std::vector<double> weights;
    std::vector<std::vector<QuantumState>> components;
    /// Parameters the factors were built from; empty when built from states directly.
    std::vector<std::vector<SingleModeSpec>> specs;

    std::size_t n_modes() const { return components.empty() ? 0 : components.front().size(); }

    void validate() const
    {
        if (weights.empty() || weights.size() != components.size())
            throw InvalidArgument("SeparableEnsemble: need one weight per component");
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw InvalidArgument("SeparableEnsemble: negative weight " + std::to_string(w));
            sum += w;
        }
        if (std::abs(sum - 1.0) > kNormTol)
            throw InvalidArgument("SeparableEnsemble: weights sum to " + std::to_string(sum) + ", expected 1");
        const auto& first = components.front();
        if (first.empty()) throw InvalidArgument("SeparableEnsemble: component without factors");
        for (const auto& c : components) {
            if (c.size() != first.size())
                throw InvalidArgument("SeparableEnsemble: components have different mode counts");
            for (std::size_t m = 0; m < c.size(); ++m) {
                if (c[m].space().n_modes() != 1)
                    throw InvalidArgument("SeparableEnsemble: factors must be single-mode states");
                if (!(c[m].space() == first[m].space()))
                    throw InvalidArgument("SeparableEnsemble: cutoff mismatch on mode " + std::to_string(m));
            }
        }
    }

    /// sum_i eta_i (rho_i1 x ... x rho_iN) as a dense matrix.
    Matrix assemble() const
    {
        validate();
        std::size_t dim = 1;
        for (const auto& f : components.front()) dim *= f.space().total_dim();
        const auto n = static_cast<Eigen::Index>(dim);
        Matrix rho = Matrix::Zero(n, n);
        for (std::size_t i = 0; i < components.size(); ++i) {
            const auto& c = components[i];
            if (std::all_of(c.begin(), c.end(), [](const auto& f) { return f.is_pure(); })) {
                Vector v = c[0].vector();
                for (std::size_t m = 1; m < c.size(); ++m) v = kron(v, c[m].vector());
                rho.noalias() += weights[i] * v * v.adjoint();
                continue;
            }
            // Kronecker product of all but the last factor, then add the last
            // factor block by block so no full-size temporary is formed.
            Matrix head = c[0].density_matrix();
            for (std::size_t m = 1; m + 1 < c.size(); ++m) head = kron(head, c[m].density_matrix());
            if (c.size() == 1) {
                rho += weights[i] * head;
                continue;
            }
            const Matrix last = c.back().density_matrix();
            const Eigen::Index d = last.rows();
            for (Eigen::Index col = 0; col < head.cols(); ++col)
                for (Eigen::Index row = 0; row < head.rows(); ++row) {
                    const cplx w = weights[i] * head(row, col);
                    if (w != cplx(0.0)) rho.block(row * d, col * d, d, d) += w * last;
                }
        }
        return rho;
    }
};

/// Mixed state of a separable ensemble; the state keeps a reference to the ensemble.
inline QuantumState mixture_state(const SeparableEnsemble& ensemble)
{
    Matrix rho = ensemble.assemble();
    std::vector<std::size_t> cutoffs;
    for (const auto& f : ensemble.components.front()) cutoffs.push_back(f.space().cutoff(0));
    QuantumState s = QuantumState::mixed(FockSpace(std::move(cutoffs)), std::move(rho), Validation::structural);
    return std::move(s).with_ensemble(std::make_shared<const SeparableEnsemble>(ensemble));
}

/// sum_n (-tanh r)^n / cosh r |n, n>, renormalized after truncation.
///
/// The phase is pinned so that x1 + x2 and p1 - p2 are the squeezed
/// combinations: Var(x1 + x2) = Var(p1 - p2) = e^{-2r}.
inline QuantumState two_mode_squeezed(double r, std::size_t cutoff, double threshold = kTailThreshold)
{
    if (r < 0.0) throw InvalidArgument("two_mode_squeezed: r must be >= 0");
    const double t = std::tanh(r);
    Matrix b = Matrix::Zero(2, 2);
    b(0, 1) = b(1, 0) = -t;
    return gaussian_pure_state(b, {cutoff, cutoff}, threshold, "tmsv(r=" + std::to_string(r) + ")");
}

/// Three-mode CV-GHZ-type state: the collective mode (a1+a2+a3)/sqrt(3) is
/// squeezed in momentum and the two orthogonal relative modes are squeezed in
/// position, all with strength r. Then Var(x_i - x_j) = e^{-2r} and
/// Var(p1 + p2 + p3) = (3/2) e^{-2r}.
inline QuantumState cv_ghz(double r, std::size_t cutoff, double threshold = kTailThreshold)
{
    if (r < 0.0) throw InvalidArgument("cv_ghz: r must be >= 0");
    const double t = std::tanh(r);
    Eigen::Matrix3d o;
    o << 1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0),
        1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0.0,
        1 / std::sqrt(6.0), 1 / std::sqrt(6.0), -2 / std::sqrt(6.0);
    const Eigen::Vector3d diag(t, -t, -t);
    Eigen::Matrix3d breal = o.transpose() * diag.asDiagonal() * o;
    breal = 0.5 * (breal + breal.transpose());
    const Matrix b = breal.cast<cplx>();
    return gaussian_pure_state(b, {cutoff, cutoff, cutoff}, threshold, "cv_ghz(r=" + std::to_string(r) + ")");
}

// ---------------------------------------------------------------------------
// Seeded random sampling

namespace detail {

/// Tail bound for sampled factors. Truncation shifts second moments by about
/// cutoff * tail, and sampled states may sit exactly on a separable bound, so
/// this has to stay well under the 1e-9 slack tolerance.
inline constexpr double kSamplerTail = 1e-12;

/// Draws a tail-safe single-mode spec. Parameters are capped at |alpha| <= 2,
/// r <= 1, nbar <= 2, n <= 4; a draw whose tail exceeds `threshold` at
/// `cutoff` is shrunk by 0.8 until it fits.
inline std::pair<SingleModeSpec, QuantumState> random_mode(Rng& rng, std::size_t cutoff,
                                                           double threshold = kSamplerTail)
{
    SingleModeSpec spec;
    switch (rng.below(4)) {
    case 0:
        spec = SingleModeSpec::coherent(std::polar(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi)));
        break;
    case 1: spec = SingleModeSpec::squeezed(rng.uniform(0.0, 1.0), rng.uniform(0.0, 2.0 * std::numbers::pi)); break;
    case 2: spec = SingleModeSpec::thermal(rng.uniform(0.0, 2.0)); break;
    default: {
        const auto top = static_cast<std::uint64_t>(std::min<std::size_t>(4, cutoff - 3));
        spec = SingleModeSpec::fock_state(static_cast<int>(rng.below(top + 1)));
        break;
    }
    }
    for (;;) {
        try {
            return {spec, single_mode_state(spec, cutoff, threshold)};
        } catch (const TruncationError&) {
            spec.alpha *= 0.8;
            spec.r *= 0.8;
            spec.nbar *= 0.8;
            if (spec.n > 0) --spec.n;
        }
    }
}

}  // namespace detail

/// Deterministic random separable ensemble: weights are a flat simplex draw,
/// factors random coherent/squeezed/thermal/Fock states.
inline SeparableEnsemble random_separable(std::uint64_t seed, std::size_t n_modes, std::size_t cutoff,
                                          std::size_t n_components)
{
    if (n_modes == 0) throw InvalidArgument("random_separable: n_modes must be >= 1");
    if (n_components == 0) throw InvalidArgument("random_separable: n_components must be >= 1");
    if (cutoff < 4) throw InvalidArgument("random_separable: cutoff must be >= 4");
    Rng rng(seed);
    SeparableEnsemble e;
    double sum = 0.0;
    for (std::size_t i = 0; i < n_components; ++i) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        e.weights.push_back(-std::log(u));
        sum += e.weights.back();
    }
    for (double& w : e.weights) w /= sum;
    for (std::size_t i = 0; i < n_components; ++i) {
        std::vector<QuantumState> factors;
        std::vector<SingleModeSpec> specs;
        for (std::size_t m = 0; m < n_modes; ++m) {
            auto [spec, state] = detail::random_mode(rng, cutoff);
            specs.push_back(spec);
            factors.push_back(std::move(state));
        }
        e.components.push_back(std::move(factors));
        e.specs.push_back(std::move(specs));
    }
    e.validate();
    return e;
}

/// Random pure state with Gaussian amplitudes on levels <= D - 3 of every
/// mode (zero tail mass). Generically entangled.
inline QuantumState random_pure_state(Rng& rng, const FockSpace& space)
{
    const std::size_t dim = space.total_dim();
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t b = 0; b < dim; ++b) {
        bool inside = true;
        for (std::size_t m = 0; m < space.n_modes(); ++m)
            if (space.level(b, m) + 3 > space.cutoff(m)) inside = false;
        if (inside) v(static_cast<Eigen::Index>(b)) = cplx(rng.normal(), rng.normal());
    }
    return QuantumState::pure_normalized(space, std::move(v));
}

/// Random zero-mean pure Gaussian state with entangling B (|B| <= max_norm).
inline QuantumState random_gaussian_state(Rng& rng, std::size_t n_modes, std::size_t cutoff, double max_norm)
{
    for (;;) {
        Matrix b(static_cast<Eigen::Index>(n_modes), static_cast<Eigen::Index>(n_modes));
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            for (Eigen::Index j = 0; j <= i; ++j) b(i, j) = b(j, i) = cplx(rng.normal(), rng.normal());
        Eigen::JacobiSVD<Matrix> svd(b);
        b *= rng.uniform(0.0, max_norm) / svd.singularValues()(0);
        try {
            return gaussian_pure_state(b, std::vector<std::size_t>(n_modes, cutoff));
        } catch (const TruncationError&) {
            max_norm *= 0.8;
        }
    }
}

}  // namespace gupw
