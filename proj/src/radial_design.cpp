/// @file radial_design.cpp
/// @brief One-time construction of the near-origin closures.
///
/// Both closures are dimensionless: they are designed once on a grid with
/// unit spacing and rescaled by powers of dr when a RadialGrid is built.
///
///  * OriginClosure: the interior stiffness is the second-order flux form
///    corrected by its leading h^2/12 truncation term, which is fourth
///    order away from r = 0 but inconsistent on the first rows.  The first
///    rows of K and the first quadrature weights are re-derived as the
///    minimum-norm change that makes -W^{-1}K exact on 1, r^2 and r^4.
///
///  * GaugeClosure: the prefix matrix T of the gauge potential is
///    1/2*I + strictly lower ones + an antisymmetric Euler-Maclaurin band.
///    Antisymmetry (T + T^T = all-ones) makes the transposed matrix an
///    equally accurate suffix rule.  The block touching r = 0 is chosen by
///    minimum-norm least squares so that prefix integrals of even
///    polynomials up to r^6 are reproduced.
#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "css/radial_core.hpp"

namespace css::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Finite-volume weights on a unit grid: quarter disc at the origin,
/// annuli elsewhere.
RealSamples unit_fv_weights(int n) {
    RealSamples w(static_cast<std::size_t>(n));
    w[0] = std::numbers::pi / 4.0;
    for (int j = 1; j < n; ++j) w[static_cast<std::size_t>(j)] = kTwoPi * j;
    return w;
}

/// Least-squares solution of C x = d closest to x0.
Eigen::VectorXd closest_solution(const Eigen::MatrixXd& c, const Eigen::VectorXd& d,
                                 const Eigen::VectorXd& x0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c);
    const Eigen::VectorXd rhs = d - c * x0;
    return x0 + cod.solve(rhs);
}

OriginClosure design_origin_closure() {
    constexpr int kRows = 4;       // modified leading rows
    constexpr int kBand = 2;       // pentadiagonal half bandwidth
    constexpr int kN = 48;         // design grid size (any size >> kRows works)
    const RealSamples w_fv = unit_fv_weights(kN);
    const SymmetricPenta base = unit_corrected_stiffness(kN, w_fv);

    struct Slot { int row, col; };
    std::vector<Slot> slots;
    for (int k = 0; k < kRows; ++k)
        for (int l = k; l <= k + kBand; ++l) slots.push_back({k, l});
    const int n_entries = static_cast<int>(slots.size());
    const int n_unknowns = n_entries + kRows;

    auto base_entry = [&](int k, int l) -> double {
        if (k > l) std::swap(k, l);
        const auto kk = static_cast<std::size_t>(k);
        if (l == k) return base.d0[kk];
        if (l == k + 1) return base.d1[kk];
        if (l == k + 2) return base.d2[kk];
        return 0.0;
    };
    auto slot_index = [&](int k, int l) -> int {
        if (k > l) std::swap(k, l);
        for (int s = 0; s < n_entries; ++s)
            if (slots[static_cast<std::size_t>(s)].row == k &&
                slots[static_cast<std::size_t>(s)].col == l) return s;
        return -1;
    };

    // Exactness on p = r^0, r^2, r^4:  sum_l K(k,l) p_l + W_k (Lap p)(r_k) = 0.
    const int degrees[3] = {0, 2, 4};
    const int n_rows = (kRows + kBand) * 3;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_rows, n_unknowns);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_rows);
    int row = 0;
    for (int k = 0; k < kRows + kBand; ++k) {
        for (int deg : degrees) {
            double known = 0.0;
            for (int l = std::max(0, k - kBand); l <= k + kBand; ++l) {
                const double p = std::pow(static_cast<double>(l), deg);
                const int s = slot_index(k, l);
                if (s >= 0) c(row, s) += p;
                else known += base_entry(k, l) * p;
            }
            const double r = static_cast<double>(k);
            const double lap = deg == 0 ? 0.0 : (deg == 2 ? 4.0 : 16.0 * r * r);
            if (k < kRows) c(row, n_entries + k) += lap;
            else known += w_fv[static_cast<std::size_t>(k)] * lap;
            d(row) = -known;
            ++row;
        }
    }
    Eigen::VectorXd x0(n_unknowns);
    for (int s = 0; s < n_entries; ++s)
        x0(s) = base_entry(slots[static_cast<std::size_t>(s)].row,
                           slots[static_cast<std::size_t>(s)].col);
    for (int k = 0; k < kRows; ++k) x0(n_entries + k) = w_fv[static_cast<std::size_t>(k)];
    const Eigen::VectorXd x = closest_solution(c, d, x0);

    OriginClosure out;
    out.rows = kRows;
    for (int s = 0; s < n_entries; ++s)
        out.entries.push_back({slots[static_cast<std::size_t>(s)].row,
                               slots[static_cast<std::size_t>(s)].col, x(s)});
    for (int k = 0; k < kRows; ++k) out.weight_factor.push_back(x(n_entries + k));
    return out;
}

/// Antisymmetric band t_1..t_3 such that
///   sum_{i<j} G_i + G_j/2 + sum_m t_m (G_{j+m} - G_{j-m})
/// is the integral up to index j with sixth-order Euler-Maclaurin accuracy.
std::vector<double> euler_maclaurin_band() {
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs(-1.0 / 12.0, 1.0 / 720.0, -1.0 / 30240.0);
    for (int k = 0; k < 3; ++k) {
        double fact = 1.0;
        for (int i = 2; i <= 2 * k + 1; ++i) fact *= i;
        for (int mm = 1; mm <= 3; ++mm)
            m(k, mm - 1) = 2.0 * std::pow(static_cast<double>(mm), 2 * k + 1) / fact;
    }
    const Eigen::Vector3d t = m.fullPivLu().solve(rhs);
    return {t(0), t(1), t(2)};
}

double band_entry(const std::vector<double>& band, int j, int k) {
    if (j == k) return 0.5;
    const int off = k - j;
    const int bw = static_cast<int>(band.size());
    if (off > 0) return off <= bw ? band[static_cast<std::size_t>(off - 1)] : 0.0;
    return -off <= bw ? 1.0 - band[static_cast<std::size_t>(-off - 1)] : 1.0;
}

GaugeClosure design_gauge_closure() {
    constexpr int kBlock = 12;     // indices 0..kBlock are free
    constexpr int kDegrees = 4;    // even polynomials r^0 .. r^6
    constexpr int kN = 64;

    GaugeClosure out;
    out.block = kBlock;
    out.band = euler_maclaurin_band();
    const int bw = static_cast<int>(out.band.size());

    // Unit-grid SBP weights.
    RealSamples w = unit_fv_weights(kN);
    const OriginClosure& oc = origin_closure();
    for (int j = 0; j < oc.rows; ++j)
        w[static_cast<std::size_t>(j)] = oc.weight_factor[static_cast<std::size_t>(j)];

    // Unknowns: T(j,k) for 0 <= j < k <= kBlock; T(k,j) = 1 - T(j,k).
    std::vector<std::pair<int, int>> upper;
    for (int j = 0; j <= kBlock; ++j)
        for (int k = j + 1; k <= kBlock; ++k) upper.emplace_back(j, k);
    auto index_of = [&](int j, int k) -> int {
        for (std::size_t s = 0; s < upper.size(); ++s)
            if (upper[s].first == j && upper[s].second == k) return static_cast<int>(s);
        return -1;
    };
    const int n_unknowns = static_cast<int>(upper.size());
    const int n_rows = (kBlock + bw + 1) * kDegrees;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_rows, n_unknowns);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_rows);
    int row = 0;
    for (int j = 0; j <= kBlock + bw; ++j) {
        for (int m = 0; m < kDegrees; ++m) {
            const double scale = std::pow(std::max(1.0, static_cast<double>(j)), 2 * m + 2);
            double known = 0.0;
            for (int i = 0; i < kN; ++i) {
                const double g = w[static_cast<std::size_t>(i)] *
                                 std::pow(static_cast<double>(i), 2 * m) / scale;
                const int s_up = j < i ? index_of(j, i) : -1;
                const int s_lo = i < j ? index_of(i, j) : -1;
                if (s_up >= 0) {
                    c(row, s_up) += g;
                } else if (s_lo >= 0) {
                    c(row, s_lo) -= g;
                    known += g;
                } else {
                    known += band_entry(out.band, j, i) * g;
                }
            }
            const double exact = kTwoPi * std::pow(static_cast<double>(j), 2 * m + 2) /
                                 (2.0 * m + 2.0) / scale;
            d(row) = exact - known;
            ++row;
        }
    }
    Eigen::VectorXd x0(n_unknowns);
    for (int s = 0; s < n_unknowns; ++s)
        x0(s) = band_entry(out.band, upper[static_cast<std::size_t>(s)].first,
                           upper[static_cast<std::size_t>(s)].second);
    const Eigen::VectorXd x = closest_solution(c, d, x0);

    out.t.assign(kBlock + 1, std::vector<double>(kBlock + 1, 0.5));
    for (int s = 0; s < n_unknowns; ++s) {
        const auto [j, k] = upper[static_cast<std::size_t>(s)];
        out.t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = x(s);
        out.t[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = 1.0 - x(s);
    }
    return out;
}

}  // namespace

SymmetricPenta unit_corrected_stiffness(int n, const RealSamples& weights) {
    const auto nn = static_cast<std::size_t>(n);
    // Face coefficients of the flux form (face j+1/2 between nodes j, j+1;
    // the last face couples to a zero ghost beyond r_max).
    RealSamples a_face(nn), b_face(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        const double rf = static_cast<double>(j) + 0.5;
        a_face[j] = kTwoPi * rf;
        b_face[j] = kTwoPi / rf;
    }
    // Tridiagonal A (= D^T diag(2 pi r_f) D) and B' (= D^T diag(2 pi / r_f) D).
    RealSamples a0(nn), a1(nn, 0.0), b0(nn), b1(nn, 0.0);
    for (std::size_t j = 0; j < nn; ++j) {
        a0[j] = a_face[j] + (j > 0 ? a_face[j - 1] : 0.0);
        b0[j] = b_face[j] + (j > 0 ? b_face[j - 1] : 0.0);
        if (j + 1 < nn) {
            a1[j] = -a_face[j];
            b1[j] = -b_face[j];
        }
    }
    // K = A + (A W^{-1} A - B') / 12.
    SymmetricPenta k;
    k.d0.assign(nn, 0.0);
    k.d1.assign(nn, 0.0);
    k.d2.assign(nn, 0.0);
    for (std::size_t j = 0; j < nn; ++j) {
        double awa0 = a0[j] * a0[j] / weights[j];
        if (j > 0) awa0 += a1[j - 1] * a1[j - 1] / weights[j - 1];
        if (j + 1 < nn) awa0 += a1[j] * a1[j] / weights[j + 1];
        k.d0[j] = a0[j] + (awa0 - b0[j]) / 12.0;
        if (j + 1 < nn) {
            const double awa1 = a0[j] * a1[j] / weights[j] + a1[j] * a0[j + 1] / weights[j + 1];
            k.d1[j] = a1[j] + (awa1 - b1[j]) / 12.0;
        }
        if (j + 2 < nn) k.d2[j] = (a1[j] * a1[j + 1] / weights[j + 1]) / 12.0;
    }
    return k;
}

const OriginClosure& origin_closure() {
    static const OriginClosure closure = design_origin_closure();
    return closure;
}

const GaugeClosure& gauge_closure() {
    static const GaugeClosure closure = design_gauge_closure();
    return closure;
}

}  // namespace css::detail
