/// @file penta_ldlt.hpp
/// @brief LDL^T factorisation of symmetric (not Hermitian) pentadiagonal systems.
///
/// Used for W + c K with c real (H^1 preconditioner, positive definite) and
/// c = i dt/2 (Crank-Nicolson, complex symmetric with positive Hermitian
/// part).  In both cases every leading minor is nonzero, so no pivoting is
/// needed.
#pragma once

#include <cmath>
#include <vector>

#include "css/radial_core.hpp"

namespace css {

template <typename T>
class SymmetricPentaLdlt {
public:
    SymmetricPentaLdlt() = default;

    /// Factorises diag(w) + c K.
    SymmetricPentaLdlt(const RealSamples& w, const SymmetricPenta& k, T c) {
        const std::size_t n = w.size();
        require(k.size() == n, "SymmetricPentaLdlt: size mismatch");
        d_.assign(n, T{});
        l1_.assign(n, T{});
        l2_.assign(n, T{});
        for (std::size_t j = 0; j < n; ++j) {
            T d = w[j] + c * k.d0[j];
            if (j >= 1) d -= l1_[j - 1] * l1_[j - 1] * d_[j - 1];
            if (j >= 2) d -= l2_[j - 2] * l2_[j - 2] * d_[j - 2];
            if (!(std::abs(d) > 0.0) || !std::isfinite(std::abs(d)))
                throw Error("SymmetricPentaLdlt: factorisation breakdown (internal invariant violated)");
            d_[j] = d;
            if (j + 1 < n) {
                T a1 = c * k.d1[j];
                if (j >= 1) a1 -= l2_[j - 1] * l1_[j - 1] * d_[j - 1];
                l1_[j] = a1 / d;
            }
            if (j + 2 < n) l2_[j] = c * k.d2[j] / d;
        }
    }

    std::size_t size() const { return d_.size(); }

    /// Solves A x = b in place.
    template <typename V>
    void solve_in_place(std::vector<V>& b) const {
        const std::size_t n = d_.size();
        require(b.size() == n, "SymmetricPentaLdlt::solve: length mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            if (j >= 1) b[j] -= l1_[j - 1] * b[j - 1];
            if (j >= 2) b[j] -= l2_[j - 2] * b[j - 2];
        }
        for (std::size_t j = 0; j < n; ++j) b[j] /= d_[j];
        for (std::size_t j = n; j-- > 0;) {
            if (j + 1 < n) b[j] -= l1_[j] * b[j + 1];
            if (j + 2 < n) b[j] -= l2_[j] * b[j + 2];
        }
    }

private:
    std::vector<T> d_, l1_, l2_;
};

}  // namespace css
