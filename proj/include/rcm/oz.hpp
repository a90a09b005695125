#pragma once

// Ornstein-Zernike deconvolution (delta - J) * lambda tau = J on the grid,
// infrared checks, Sigma and the large-|x| prediction, and decay fits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "kernel.hpp"

namespace rcm {

struct KernelPair {
    GridField phi;
    GridField pi;  // zero unless supplied
    double lambda = 0.0;
    GridField J;
    double J_hat_zero = 0.0;
};

inline KernelPair form_J(const GridField& phi, const std::optional<GridField>& pi, double lambda,
                         double tolerance = 1e-9) {
    KernelPair kp;
    kp.phi = phi;
    kp.pi = pi ? *pi : GridField(phi.d, phi.n, phi.h);
    require_same_shape(phi, kp.pi);
    kp.lambda = lambda;
    kp.J = GridField(phi.d, phi.n, phi.h);
    double sum = 0.0;
    for (size_t i = 0; i < phi.size(); ++i) {
        kp.J.v[i] = lambda * (phi.v[i] + kp.pi.v[i]);
        sum += kp.J.v[i];
    }
    kp.J_hat_zero = sum * phi.cell();
    if (kp.J_hat_zero > 1.0 + tolerance) throw numeric_error("supercritical kernel");
    return kp;
}

struct InfraredReport {
    double K_IR = 0.0;
    std::vector<double> argmin_k;
    double J_hat_zero = 0.0;
    double threshold = 1e-3;
    bool pass = false;
};

// K_IR = min over nonzero grid k of (J_hat(0) - Re J_hat(k)) / (|k|^2 ^ 1).
inline InfraredReport infrared_check(const GridField& J, double threshold = 1e-3) {
    const SpectralField s = fft(J);
    InfraredReport rep;
    rep.threshold = threshold;
    rep.J_hat_zero = s.c[0].real();
    rep.K_IR = inf;
    const double dk = s.dk();
    size_t best = 0;
    for_each_point(J.d, J.n, [&](size_t i, const std::vector<int>& m) {
        if (i == 0) return;
        double k2 = 0.0;
        for (int a = 0; a < J.d; ++a) k2 += double(m[a]) * m[a];
        k2 *= dk * dk;
        const double ratio = (rep.J_hat_zero - s.c[i].real()) / std::min(k2, 1.0);
        if (ratio < rep.K_IR) {
            rep.K_IR = ratio;
            best = i;
        }
    });
    const auto m = multi_index(best, J.d, J.n);
    for (int a = 0; a < J.d; ++a) rep.argmin_k.push_back(m[a] * dk);
    rep.pass = rep.K_IR > threshold;
    return rep;
}

struct OzSolution {
    GridField lambda_tau;
    bool regularized = false;    // k = 0 mode replaced at criticality
    double residual_rel = 0.0;   // ||lambda tau - J*lambda tau - J||_2 / ||J||_2
};

// lambda tau = J + ifft(J_hat^2 / (1 - J_hat)).
inline OzSolution oz_deconvolve(const KernelPair& kp, double tolerance = 1e-9) {
    const GridField& J = kp.J;
    SpectralField s = fft(J);
    if (s.c[0].real() > 1.0 + tolerance) throw numeric_error("supercritical kernel");
    const bool critical = std::abs(1.0 - s.c[0].real()) <= tolerance;
    double smallest_k2 = inf;
    cplx smallest_mode = 0.0;
    for (size_t i = 1; i < s.size(); ++i)
        if (s.c[i].real() >= 1.0) throw numeric_error("non-invertible kernel");
    for_each_point(J.d, J.n, [&](size_t i, const std::vector<int>& m) {
        if (i == 0) return;
        const cplx jh = s.c[i];
        const cplx val = jh * jh / (1.0 - jh);
        if (critical) {
            double k2 = 0.0;
            for (int a = 0; a < J.d; ++a) k2 += double(m[a]) * m[a];
            if (k2 < smallest_k2) {
                smallest_k2 = k2;
                smallest_mode = val;
            }
        }
        s.c[i] = val;
    });
    const cplx j0 = s.c[0];
    s.c[0] = critical ? smallest_mode : j0 * j0 / (1.0 - j0);
    GridField corr = ifft(s);
    OzSolution sol;
    sol.regularized = critical;
    sol.lambda_tau = add(J, corr);
    // residual of the defining relation
    const GridField conv = convolve(J, sol.lambda_tau);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < J.size(); ++i) {
        const double r = sol.lambda_tau.v[i] - conv.v[i] - J.v[i];
        num += r * r;
        den += J.v[i] * J.v[i];
    }
    sol.residual_rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    return sol;
}

inline double a_d(int d) {
    if (d <= 2) throw numeric_error("a_d needs d >= 3");
    return std::tgamma((d - 2) / 2.0) / (2.0 * std::pow(std::numbers::pi, d / 2.0));
}

struct AsymptoticModel {
    int d = 3;
    double lambda_c = 1.0;
    std::vector<double> sigma;  // diagonal of Sigma
    double a_d = 0.0;
    bool reflection_symmetric = true;  // off-diagonal moments negligible

    // a_d / (lambda_c sqrt(det Sigma)) (x . Sigma^{-1} x)^{-(d-2)/2}
    double predict(const std::vector<double>& x) const {
        double det = 1.0, q = 0.0;
        for (int a = 0; a < d; ++a) {
            det *= sigma[a];
            q += x[a] * x[a] / sigma[a];
        }
        return a_d / (lambda_c * std::sqrt(det)) * std::pow(q, -(d - 2) / 2.0);
    }
};

inline AsymptoticModel sigma_and_prediction(const GridField& J, double lambda_c) {
    const MomentMatrix mm = moment_matrix(J);
    AsymptoticModel model;
    model.d = J.d;
    model.lambda_c = lambda_c;
    model.a_d = a_d(J.d);
    double diag_max = 0.0, off_max = 0.0;
    for (int a = 0; a < J.d; ++a) {
        model.sigma.push_back(mm(a, a));
        diag_max = std::max(diag_max, std::abs(mm(a, a)));
        for (int b = 0; b < J.d; ++b)
            if (a != b) off_max = std::max(off_max, std::abs(mm(a, b)));
    }
    for (double s : model.sigma)
        if (!(s > 0.0)) throw numeric_error("singular Sigma");
    model.reflection_symmetric = off_max <= 1e-9 * diag_max;
    return model;
}

struct FitResult {
    double exponent = 0.0;   // v ~ A |x|^{-exponent}
    double amplitude = 0.0;
    double r2 = 1.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    size_t points = 0;
};

// Least squares of log v against log r over r in [lo, hi].
inline FitResult fit_decay_exponent(const std::vector<std::pair<double, double>>& rv, double lo, double hi) {
    std::vector<double> X, Y;
    for (auto [r, v] : rv) {
        if (r < lo || r > hi) continue;
        if (!(v > 0.0)) throw numeric_error("nonpositive values in window");
        X.push_back(std::log(r));
        Y.push_back(std::log(v));
    }
    if (X.size() < 5) throw numeric_error("fewer than 5 points in fit window");
    const double n = static_cast<double>(X.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
        syy += (Y[i] - my) * (Y[i] - my);
    }
    if (!(sxx > 0.0)) throw numeric_error("fit window holds a single radius");
    const double slope = sxy / sxx;
    FitResult f;
    f.exponent = -slope;
    f.amplitude = std::exp(my - slope * mx);
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    f.window_lo = lo;
    f.window_hi = hi;
    f.points = X.size();
    return f;
}

// Radial profile (|x|, value) of a grid field, one entry per distinct radius.
inline std::vector<std::pair<double, double>> radial_samples(const GridField& f) {
    std::vector<std::pair<double, double>> out;
    const auto r2 = radius_squared(f.d, f.n, f.h);
    std::vector<std::pair<double, double>> all;
    for (size_t i = 0; i < f.size(); ++i) all.emplace_back(r2[i], f.v[i]);
    std::sort(all.begin(), all.end());
    for (size_t i = 0; i < all.size();) {
        size_t j = i;
        double s = 0.0;
        while (j < all.size() && all[j].first == all[i].first) s += all[j++].second;
        out.emplace_back(std::sqrt(all[i].first), s / double(j - i));
        i = j;
    }
    return out;
}

// Default fit window: excludes |x| < 3 h sqrt(d) and |x| > L/4.
inline std::pair<double, double> clip_fit_window(double lo, double hi, double h, int d, double L) {
    return {std::max(lo, 3.0 * h * std::sqrt(double(d))), std::min(hi, L / 4.0)};
}

struct RadialProfile {
    int d = 3;
    double L = 0.0;
    std::vector<double> r;
    std::vector<double> value;  // lambda tau(r)
    double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
};

// Isotropic solve through the Hankel transform
//   lambda tau(r) = J(r) + (2 pi)^{-d/2} r^{1-d/2} int F(k) J_{d/2-1}(kr) k^{d/2} dk,
// F = J_hat^2/(1 - J_hat), using midpoint nodes k_j = (j + 1/2) 2pi/L. For
// r < L the midpoint sum of the 1/k^2 part of F is exact, so at criticality
// the profile carries no constant torus offset.
inline RadialProfile oz_radial(const std::function<double(double)>& J_hat, const std::function<double(double)>& J_r,
                               int d, double L, int n, double tolerance = 1e-9) {
    if (d < 1 || n < 2 || !(L > 0.0)) throw config_error("invalid radial grid");
    if (J_hat(0.0) > 1.0 + tolerance) throw numeric_error("supercritical kernel");
    const double dk = 2.0 * std::numbers::pi / L;
    const double nu = d / 2.0 - 1.0;
    std::vector<double> k(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        k[j] = (j + 0.5) * dk;
        const double jh = J_hat(k[j]);
        if (jh >= 1.0) throw numeric_error("non-invertible kernel");
        w[j] = dk * jh * jh / (1.0 - jh) * std::pow(k[j], d / 2.0);
    }
    RadialProfile prof;
    prof.d = d;
    prof.L = L;
    const double pref = std::pow(2.0 * std::numbers::pi, -d / 2.0);
    const double dr = L / (2.0 * n);
    for (int i = 0; i < n; ++i) {
        const double r = i * dr;
        double s = 0.0;
        if (r == 0.0) {
            // J_nu(kr)(kr)^{-nu} -> 1/(2^nu Gamma(nu+1))
            const double lim = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
            for (int j = 0; j < n; ++j) s += w[j] * std::pow(k[j], nu) * lim;
        } else {
            for (int j = 0; j < n; ++j) s += w[j] * std::cyl_bessel_j(nu, k[j] * r);
            s *= std::pow(r, -nu);
        }
        prof.r.push_back(r);
        prof.value.push_back(J_r(r) + pref * s);
    }
    return prof;
}

}  // namespace rcm
