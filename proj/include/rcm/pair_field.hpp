#pragma once

// Functions of two grid points F(x1, x2), stored as a 2d-dimensional grid
// with x1 as the slow coordinate. Convolutions act on each coordinate with
// its own (possibly contractible) edge spectrum.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace rcm {

inline constexpr size_t default_pair_budget = size_t{1} << 24;

inline void check_pair_budget(int d, int n, size_t budget) {
    const double cells = std::pow(double(n), 2.0 * d);
    if (cells > double(budget)) throw budget_error("grid too large for two-point diagram");
}

struct PairField {
    int d = 1;
    int n = 2;
    double h = 1.0;
    size_t N = 0;  // points per coordinate
    std::vector<double> v;

    PairField() = default;
    PairField(int d_, int n_, double h_, double fill = 0.0)
        : d(d_), n(n_), h(h_), N(ipow(static_cast<size_t>(n_), d_)), v(N * N, fill) {}
    explicit PairField(const GridField& like, double fill = 0.0) : PairField(like.d, like.n, like.h, fill) {}

    double& at(size_t i, size_t j) { return v[i * N + j]; }
    double at(size_t i, size_t j) const { return v[i * N + j]; }
    double cell() const { return std::pow(h, d); }
    double L() const { return n * h; }
};

namespace detail {

inline void pair_forward(std::vector<cplx>& c, const PairField& F) {
    c.assign(F.v.begin(), F.v.end());
    fft_detail::transform(c, 2 * F.d, F.n, +1);
    const double w = F.cell() * F.cell();
    for (auto& z : c) z *= w;
}

inline void pair_inverse(std::vector<cplx>& c, PairField& out) {
    fft_detail::transform(c, 2 * out.d, out.n, -1);
    const double w = 1.0 / std::pow(out.L(), 2 * out.d);
    for (size_t i = 0; i < c.size(); ++i) out.v[i] = c[i].real() * w;
}

}  // namespace detail

// out(x1, x2) = int int e1(x1 - y1) e2(x2 - y2) F(y1, y2) dy1 dy2
inline PairField conv2(const PairField& F, EdgeSpectrum e1, EdgeSpectrum e2) {
    std::vector<cplx> c;
    detail::pair_forward(c, F);
    for (size_t i = 0; i < F.N; ++i) {
        const cplx m1 = e1.at(i);
        for (size_t j = 0; j < F.N; ++j) c[i * F.N + j] *= m1 * e2.at(j);
    }
    PairField out(F.d, F.n, F.h);
    detail::pair_inverse(c, out);
    return out;
}

// out(x1, x2) = int g(z) e1(x1 - z) e2(x2 - z) dz
inline PairField diag_conv(const SpectralField& g, EdgeSpectrum e1, EdgeSpectrum e2) {
    PairField out(g.d, g.n, g.h);
    std::vector<cplx> c(out.N * out.N);
    for (size_t i = 0; i < out.N; ++i) {
        const cplx m1 = e1.at(i);
        for (size_t j = 0; j < out.N; ++j) c[i * out.N + j] = g.c[offset_index(i, j, g.d, g.n, +1)] * m1 * e2.at(j);
    }
    detail::pair_inverse(c, out);
    return out;
}

// F(x1, x2) *= g(x2 - x1)
inline void mul_diff(PairField& F, const GridField& g) {
    for (size_t i = 0; i < F.N; ++i)
        for (size_t j = 0; j < F.N; ++j) F.v[i * F.N + j] *= g.v[offset_index(j, i, F.d, F.n, -1)];
}

// F(x1, x2) *= g(x1 - s)
inline void mul_first(PairField& F, const GridField& g, size_t s = 0) {
    for (size_t i = 0; i < F.N; ++i) {
        const double w = g.v[offset_index(i, s, F.d, F.n, -1)];
        for (size_t j = 0; j < F.N; ++j) F.v[i * F.N + j] *= w;
    }
}

// F(x1, x2) *= g(x2 - s)
inline void mul_second(PairField& F, const GridField& g, size_t s = 0) {
    std::vector<double> w(F.N);
    for (size_t j = 0; j < F.N; ++j) w[j] = g.v[offset_index(j, s, F.d, F.n, -1)];
    for (size_t i = 0; i < F.N; ++i)
        for (size_t j = 0; j < F.N; ++j) F.v[i * F.N + j] *= w[j];
}

inline PairField swapped(const PairField& F) {
    PairField out(F.d, F.n, F.h);
    for (size_t i = 0; i < F.N; ++i)
        for (size_t j = 0; j < F.N; ++j) out.v[j * F.N + i] = F.v[i * F.N + j];
    return out;
}

inline double pair_integral(const PairField& F) {
    double s = 0.0;
    for (double x : F.v) s += x;
    return s * F.cell() * F.cell();
}

// max over x1 of || F(x1, .) ||_p, with the maximizing x1.
inline std::pair<double, size_t> row_norm_sup(const PairField& F, double p) {
    double best = -1.0;
    size_t arg = 0;
    for (size_t i = 0; i < F.N; ++i) {
        const double v = lp_norm(&F.v[i * F.N], F.N, p, F.cell());
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return {best, arg};
}

}  // namespace rcm
