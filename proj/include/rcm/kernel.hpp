#pragma once

// Adjacency functions phi: R^d -> [0,1], normalized to unit mass.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace rcm {

enum class KernelVariant { disk, gaussian, tabulated };

inline std::string to_string(KernelVariant v) {
    switch (v) {
        case KernelVariant::disk: return "disk";
        case KernelVariant::gaussian: return "gaussian";
        case KernelVariant::tabulated: return "tabulated";
    }
    return "unknown";
}

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// Surface area of the unit sphere S^{d-1}.
inline double unit_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

// Radius of the ball of unit volume.
inline double disk_radius(int d) {
    return std::pow(std::numbers::pi, -0.5) * std::pow(std::tgamma(d / 2.0 + 1.0), 1.0 / d);
}

namespace detail {

// Five-point Gauss-Legendre rule on [-1, 1].
inline constexpr double gl5_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
inline constexpr double gl5_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};

// Integral of f over [a, b] with `panels` Gauss-Legendre panels.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    double sum = 0.0;
    const double w = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * w;
        const double mid = lo + 0.5 * w;
        for (int q = 0; q < 5; ++q) sum += gl5_w[q] * f(mid + 0.5 * w * gl5_x[q]);
    }
    return 0.5 * w * sum;
}

}  // namespace detail

struct AdjacencyKernel {
    int d = 2;
    KernelVariant variant = KernelVariant::gaussian;
    double R = 0.0;      // disk radius
    double r_cut = 0.0;  // no edges beyond this distance
    std::vector<double> table_r;    // tabulated: increasing radii starting at 0
    std::vector<double> table_phi;  // tabulated: phi at table_r
};

// Radial profile; r >= 0.
inline double eval_radial(const AdjacencyKernel& k, double r) {
    switch (k.variant) {
        case KernelVariant::disk: return r <= k.R ? 1.0 : 0.0;
        case KernelVariant::gaussian:
            if (r > k.r_cut) return 0.0;
            return std::pow(2.0 * std::numbers::pi, -k.d / 2.0) * std::exp(-0.5 * r * r);
        case KernelVariant::tabulated: {
            const auto& tr = k.table_r;
            if (r > tr.back()) throw numeric_error("out of table range");
            auto it = std::upper_bound(tr.begin(), tr.end(), r);
            if (it == tr.end()) return k.table_phi.back();
            const size_t j = static_cast<size_t>(it - tr.begin());
            const double t = (r - tr[j - 1]) / (tr[j] - tr[j - 1]);
            return (1.0 - t) * k.table_phi[j - 1] + t * k.table_phi[j];
        }
    }
    return 0.0;
}

inline double eval_adjacency(const AdjacencyKernel& k, std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return eval_radial(k, std::sqrt(r2));
}

// Integral of a piecewise-linear radial profile over R^d.
inline double tabulated_normalization(int d, const std::vector<double>& r,
                                      const std::vector<double>& v) {
    double sum = 0.0;
    for (size_t j = 1; j < r.size(); ++j) {
        const double r0 = r[j - 1], r1 = r[j], v0 = v[j - 1], v1 = v[j];
        sum += detail::gauss_legendre(
            [&](double s) {
                const double t = (s - r0) / (r1 - r0);
                return std::pow(s, d - 1) * ((1.0 - t) * v0 + t * v1);
            },
            r0, r1, 1);
    }
    const double total = unit_sphere_area(d) * sum;
    if (!std::isfinite(total)) throw numeric_error("normalization failed");
    return total;
}

inline double kernel_normalization(const AdjacencyKernel& k) {
    double total = 0.0;
    switch (k.variant) {
        case KernelVariant::disk: total = unit_ball_volume(k.d) * std::pow(k.R, k.d); break;
        case KernelVariant::gaussian:
            total = unit_sphere_area(k.d) *
                    detail::gauss_legendre(
                        [&](double r) { return std::pow(r, k.d - 1) * eval_radial(k, r); }, 0.0,
                        k.r_cut, 400);
            break;
        case KernelVariant::tabulated: total = tabulated_normalization(k.d, k.table_r, k.table_phi); break;
    }
    if (!std::isfinite(total)) throw numeric_error("normalization failed");
    return total;
}

inline AdjacencyKernel make_disk(int d) {
    if (d < 1) throw config_error("dimension must be positive");
    AdjacencyKernel k;
    k.d = d;
    k.variant = KernelVariant::disk;
    k.R = disk_radius(d);
    k.r_cut = k.R;
    return k;
}

inline AdjacencyKernel make_gaussian(int d) {
    if (d < 1) throw config_error("dimension must be positive");
    AdjacencyKernel k;
    k.d = d;
    k.variant = KernelVariant::gaussian;
    // phi(r_cut) = 1e-12
    const double peak = std::pow(2.0 * std::numbers::pi, -d / 2.0);
    k.r_cut = std::sqrt(2.0 * std::log(peak / 1e-12));
    return k;
}

// Rejects tables that are not a valid, unit-mass probability profile.
inline AdjacencyKernel make_tabulated(int d, std::vector<double> r, std::vector<double> phi,
                                      double tolerance = 1e-6) {
    if (d < 1) throw config_error("dimension must be positive");
    if (r.size() < 2 || r.size() != phi.size()) throw config_error("tabulated kernel needs matching r/phi arrays of length >= 2");
    if (r.front() != 0.0) throw config_error("tabulated kernel table must start at r = 0");
    for (size_t j = 1; j < r.size(); ++j)
        if (!(r[j] > r[j - 1])) throw config_error("tabulated kernel radii must increase");
    for (double v : phi)
        if (!(v >= 0.0 && v <= 1.0)) throw config_error("tabulated kernel values must lie in [0,1]");
    const double mass = tabulated_normalization(d, r, phi);
    if (std::abs(mass - 1.0) > tolerance)
        throw config_error("tabulated kernel is not normalized (mass " + std::to_string(mass) + ")");
    AdjacencyKernel k;
    k.d = d;
    k.variant = KernelVariant::tabulated;
    k.r_cut = r.back();
    k.table_r = std::move(r);
    k.table_phi = std::move(phi);
    return k;
}

// Radial Fourier transform phi_hat(|k|) with the e^{+ik.x} convention.
inline double phi_hat(const AdjacencyKernel& k, double kk) {
    const int d = k.d;
    switch (k.variant) {
        case KernelVariant::gaussian: return std::exp(-0.5 * kk * kk);
        case KernelVariant::disk: {
            if (kk == 0.0) return 1.0;
            const double z = kk * k.R;
            return std::pow(2.0 * std::numbers::pi * k.R / kk, d / 2.0) * std::cyl_bessel_j(d / 2.0, z);
        }
        case KernelVariant::tabulated: {
            if (kk == 0.0) return kernel_normalization(k);
            // (2 pi)^{d/2} k^{1-d/2} int r^{d/2} J_{d/2-1}(kr) phi(r) dr
            const double nu = d / 2.0 - 1.0;
            const double integral = detail::gauss_legendre(
                [&](double r) {
                    return std::pow(r, d / 2.0) * std::cyl_bessel_j(nu, kk * r) * eval_radial(k, r);
                },
                0.0, k.r_cut, 2000);
            return std::pow(2.0 * std::numbers::pi, d / 2.0) * std::pow(kk, 1.0 - d / 2.0) * integral;
        }
    }
    return 0.0;
}

}  // namespace rcm
