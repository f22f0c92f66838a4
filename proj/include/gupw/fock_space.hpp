#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gupw/errors.hpp"

namespace gupw {

/// Tensor product of single-mode truncated Fock spaces.
///
/// Mode m keeps levels 0..cutoff(m)-1. Basis index <-> multi-index is
/// row-major in mode order: mode 0 is the most significant digit, so for
/// cutoffs [D0, D1] the basis index of |n0, n1> is n0*D1 + n1.
class FockSpace {
public:
    FockSpace() = default;

    explicit FockSpace(std::vector<std::size_t> cutoffs) : cutoffs_(std::move(cutoffs))
    {
        if (cutoffs_.empty()) throw InvalidArgument("FockSpace: at least one mode is required");
        for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
            if (cutoffs_[m] < 2)
                throw InvalidArgument("FockSpace: cutoff of mode " + std::to_string(m) +
                                      " is " + std::to_string(cutoffs_[m]) + ", must be >= 2");
        }
        strides_.assign(cutoffs_.size(), 1);
        for (std::size_t m = cutoffs_.size() - 1; m > 0; --m) strides_[m - 1] = strides_[m] * cutoffs_[m];
        total_dim_ = strides_[0] * cutoffs_[0];
    }

    std::size_t n_modes() const { return cutoffs_.size(); }
    std::size_t cutoff(std::size_t mode) const { return cutoffs_.at(mode); }
    const std::vector<std::size_t>& cutoffs() const { return cutoffs_; }
    std::size_t total_dim() const { return total_dim_; }
    std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

    /// Occupation of `mode` in basis state `index`.
    std::size_t level(std::size_t index, std::size_t mode) const
    {
        return (index / strides_[mode]) % cutoffs_[mode];
    }

    std::vector<std::size_t> multi_index(std::size_t index) const
    {
        std::vector<std::size_t> n(cutoffs_.size());
        for (std::size_t m = 0; m < cutoffs_.size(); ++m) n[m] = level(index, m);
        return n;
    }

    std::size_t index(std::span<const std::size_t> levels) const
    {
        if (levels.size() != cutoffs_.size()) throw InvalidArgument("FockSpace::index: wrong number of levels");
        std::size_t idx = 0;
        for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
            if (levels[m] >= cutoffs_[m]) throw InvalidArgument("FockSpace::index: level above cutoff");
            idx += levels[m] * strides_[m];
        }
        return idx;
    }

    void check_mode(std::size_t mode) const
    {
        if (mode >= cutoffs_.size())
            throw InvalidArgument("mode " + std::to_string(mode) + " out of range for a " +
                                  std::to_string(cutoffs_.size()) + "-mode space");
    }

    /// Subspace made of the listed modes, in the listed order.
    FockSpace subspace(std::span<const std::size_t> modes) const
    {
        std::vector<std::size_t> c;
        c.reserve(modes.size());
        for (auto m : modes) {
            check_mode(m);
            c.push_back(cutoffs_[m]);
        }
        return FockSpace(std::move(c));
    }

    friend bool operator==(const FockSpace& a, const FockSpace& b) { return a.cutoffs_ == b.cutoffs_; }

    std::string describe() const
    {
        std::string s = "[";
        for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
            if (m) s += ",";
            s += std::to_string(cutoffs_[m]);
        }
        return s + "]";
    }

private:
    std::vector<std::size_t> cutoffs_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_ = 0;
};

inline FockSpace make_space(std::size_t n_modes, std::vector<std::size_t> cutoffs)
{
    if (n_modes == 0) throw InvalidArgument("make_space: zero modes");
    if (n_modes != cutoffs.size())
        throw InvalidArgument("make_space: n_modes=" + std::to_string(n_modes) + " but " +
                              std::to_string(cutoffs.size()) + " cutoffs given");
    return FockSpace(std::move(cutoffs));
}

inline void require_same_space(const FockSpace& a, const FockSpace& b, const char* where)
{
    if (!(a == b))
        throw InvalidArgument(std::string(where) + ": space mismatch " + a.describe() + " vs " + b.describe());
}

}  // namespace gupw
