#pragma once

// Periodic uniform grids over the box [-L/2, L/2)^d with index 0 at the
// origin. Displacements use the minimal image; index i along an axis stands
// for the coordinate m*h with m = i for i <= n/2 and m = i - n otherwise.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "kernel.hpp"

namespace rcm {

using cplx = std::complex<double>;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline int signed_index(int i, int n) { return i <= n / 2 ? i : i - n; }

inline size_t ipow(size_t base, int e) {
    size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

struct GridField {
    int d = 1;
    int n = 2;
    double h = 1.0;
    std::vector<double> v;
    bool kernel = false;    // tagged probability kernel
    double raw_mass = 0.0;  // h^d * sum before renormalization

    GridField() = default;
    GridField(int d_, int n_, double h_) : d(d_), n(n_), h(h_), v(ipow(n_, d_), 0.0) {
        if (n_ < 2 || n_ % 2 != 0) throw config_error("grid size n must be even and >= 2");
        if (!(h_ > 0.0)) throw config_error("grid spacing must be positive");
    }

    size_t size() const { return v.size(); }
    double L() const { return n * h; }
    double cell() const { return std::pow(h, d); }
    double& operator[](size_t i) { return v[i]; }
    double operator[](size_t i) const { return v[i]; }
    bool same_shape(const GridField& o) const { return d == o.d && n == o.n && h == o.h; }
};

struct SpectralField {
    int d = 1;
    int n = 2;
    double h = 1.0;
    std::vector<cplx> c;

    size_t size() const { return c.size(); }
    double L() const { return n * h; }
    double dk() const { return 2.0 * std::numbers::pi / L(); }
};

inline void require_same_shape(const GridField& a, const GridField& b) {
    if (!a.same_shape(b)) throw config_error("grid shape mismatch");
}

// Calls fn(index, m) for every grid point, m being the signed multi-index.
template <class Fn>
void for_each_point(int d, int n, Fn&& fn) {
    std::vector<int> idx(static_cast<size_t>(d), 0), m(static_cast<size_t>(d), 0);
    const size_t total = ipow(static_cast<size_t>(n), d);
    for (size_t flat = 0; flat < total; ++flat) {
        for (int a = 0; a < d; ++a) m[a] = signed_index(idx[a], n);
        fn(flat, static_cast<const std::vector<int>&>(m));
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
        }
    }
}

// Squared minimal-image distance |x|^2 for every grid point.
inline std::vector<double> radius_squared(int d, int n, double h) {
    std::vector<double> r2(ipow(static_cast<size_t>(n), d));
    for_each_point(d, n, [&](size_t i, const std::vector<int>& m) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += double(m[a]) * m[a];
        r2[i] = s * h * h;
    });
    return r2;
}

// Flat index of the point whose multi-index is (a_i + sign*b_i) mod n.
inline size_t offset_index(size_t a, size_t b, int d, int n, int sign = 1) {
    size_t out = 0, stride = 1;
    for (int ax = 0; ax < d; ++ax) {
        const long ia = static_cast<long>(a % n), ib = static_cast<long>(b % n);
        long s = (ia + sign * ib) % n;
        if (s < 0) s += n;
        out += static_cast<size_t>(s) * stride;
        stride *= n;
        a /= n;
        b /= n;
    }
    return out;
}

// Flat index of the grid point nearest to x (coordinates wrapped to the torus).
inline size_t nearest_index(int d, int n, double h, const std::vector<double>& x) {
    size_t flat = 0;
    for (int a = 0; a < d; ++a) {
        long i = std::lround(x[a] / h) % n;
        if (i < 0) i += n;
        flat = flat * n + static_cast<size_t>(i);
    }
    return flat;
}

inline std::vector<int> multi_index(size_t flat, int d, int n) {
    std::vector<int> m(static_cast<size_t>(d));
    for (int a = d - 1; a >= 0; --a) {
        m[a] = signed_index(static_cast<int>(flat % n), n);
        flat /= n;
    }
    return m;
}

// Midpoint sampling of f on the grid of side L with n points per axis.
inline GridField discretize(const std::function<double(const double*)>& f, int d, double L, int n) {
    if (n % 2 != 0) throw config_error("grid size n must be even");
    GridField g(d, n, L / n);
    std::vector<double> x(static_cast<size_t>(d));
    for_each_point(d, n, [&](size_t i, const std::vector<int>& m) {
        for (int a = 0; a < d; ++a) x[a] = m[a] * g.h;
        g.v[i] = f(x.data());
    });
    return g;
}

// Samples the kernel and rescales it to unit discrete mass; the mass before
// rescaling is kept in raw_mass.
inline GridField discretize(const AdjacencyKernel& k, double L, int n) {
    GridField g = discretize(
        [&](const double* x) { return eval_adjacency(k, std::span<const double>(x, k.d)); }, k.d, L, n);
    double sum = 0.0;
    for (double x : g.v) sum += x;
    const double mass = sum * g.cell();
    if (!(mass > 0.0)) throw numeric_error("normalization failed");
    for (double& x : g.v) x /= mass;
    g.kernel = true;
    g.raw_mass = mass;
    return g;
}

// f_hat(k) = h^d sum_x f(x) e^{+ik.x}
inline SpectralField fft(const GridField& f) {
    SpectralField s{f.d, f.n, f.h, std::vector<cplx>(f.v.begin(), f.v.end())};
    fft_detail::transform(s.c, f.d, f.n, +1);
    const double w = f.cell();
    for (auto& z : s.c) z *= w;
    return s;
}

// f(x) = L^{-d} sum_k f_hat(k) e^{-ik.x}; the imaginary part is dropped.
inline GridField ifft(const SpectralField& s) {
    std::vector<cplx> c = s.c;
    fft_detail::transform(c, s.d, s.n, -1);
    GridField g(s.d, s.n, s.h);
    const double w = 1.0 / std::pow(s.L(), s.d);
    for (size_t i = 0; i < c.size(); ++i) g.v[i] = c[i].real() * w;
    return g;
}

inline GridField convolve(const GridField& f, const GridField& g) {
    require_same_shape(f, g);
    SpectralField a = fft(f);
    const SpectralField b = fft(g);
    for (size_t i = 0; i < a.c.size(); ++i) a.c[i] *= b.c[i];
    return ifft(a);
}

// Spectral multiplier of a possibly contractible edge: delta_coeff + g_hat(k).
struct EdgeSpectrum {
    const SpectralField* smooth = nullptr;
    double delta = 0.0;
    cplx at(size_t i) const { return smooth ? smooth->c[i] + delta : cplx(delta); }
};

// Convolution chain f * e_1 * ... * e_k with analytic delta parts.
inline GridField convolve_chain(const GridField& f, std::initializer_list<EdgeSpectrum> edges) {
    SpectralField a = fft(f);
    for (const auto& e : edges)
        for (size_t i = 0; i < a.c.size(); ++i) a.c[i] *= e.at(i);
    return ifft(a);
}

inline GridField scaled(GridField f, double c) {
    for (double& x : f.v) x *= c;
    f.kernel = false;
    return f;
}

inline GridField add(GridField a, const GridField& b, double cb = 1.0) {
    require_same_shape(a, b);
    for (size_t i = 0; i < a.v.size(); ++i) a.v[i] += cb * b.v[i];
    a.kernel = false;
    return a;
}

inline GridField multiply(GridField a, const GridField& b) {
    require_same_shape(a, b);
    for (size_t i = 0; i < a.v.size(); ++i) a.v[i] *= b.v[i];
    a.kernel = false;
    return a;
}

// |x|^a f(x)
inline GridField weighted(const GridField& f, double a) {
    if (a == 0.0) {
        GridField g = f;
        g.kernel = false;
        return g;
    }
    GridField g = f;
    g.kernel = false;
    const auto r2 = radius_squared(f.d, f.n, f.h);
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] *= std::pow(r2[i], 0.5 * a);
    return g;
}

// g(-x)
inline GridField reflected(const GridField& f) {
    GridField g = f;
    for (size_t i = 0; i < f.v.size(); ++i) g.v[offset_index(0, i, f.d, f.n, -1)] = f.v[i];
    return g;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Plain L^p norm of raw values with cell volume w (p may be inf).
inline double lp_norm(const double* v, size_t count, double p, double w) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (size_t i = 0; i < count; ++i) m = std::max(m, std::abs(v[i]));
        return m;
    }
    double s = 0.0;
    if (p == 1.0)
        for (size_t i = 0; i < count; ++i) s += std::abs(v[i]);
    else if (p == 2.0)
        for (size_t i = 0; i < count; ++i) s += v[i] * v[i];
    else
        for (size_t i = 0; i < count; ++i) s += std::pow(std::abs(v[i]), p);
    return std::pow(s * w, 1.0 / p);
}

struct NormResult {
    double value = 0.0;
    double tail_fraction = 0.0;  // share of the norm carried by |x| > L/4
};

// || |x|^a f ||_p with h^d quadrature.
inline NormResult weighted_norm_report(const GridField& f, double a, double p) {
    if (a < 0.0) throw config_error("moment order must be nonnegative");
    if (!(p >= 1.0)) throw config_error("norm exponent must be >= 1");
    const auto r2 = radius_squared(f.d, f.n, f.h);
    const double quarter2 = std::pow(f.L() / 4.0, 2);
    double total = 0.0, tail = 0.0;
    for (size_t i = 0; i < f.v.size(); ++i) {
        const double g = std::abs(f.v[i]) * (a == 0.0 ? 1.0 : std::pow(r2[i], 0.5 * a));
        const double c = std::isinf(p) ? g : (p == 1.0 ? g : std::pow(g, p));
        if (std::isinf(p)) {
            total = std::max(total, c);
            if (r2[i] > quarter2) tail = std::max(tail, c);
        } else {
            total += c;
            if (r2[i] > quarter2) tail += c;
        }
    }
    NormResult out;
    out.tail_fraction = total > 0.0 ? tail / total : 0.0;
    out.value = std::isinf(p) ? total : std::pow(total * f.cell(), 1.0 / p);
    return out;
}

inline double weighted_norm(const GridField& f, double a, double p) {
    return weighted_norm_report(f, a, p).value;
}

struct MomentMatrix {
    int d = 0;
    std::vector<double> m;      // row-major d x d, entries int x_i x_j f
    double odd_residual = 0.0;  // max |f(x) - f(-x)| / max |f|
    bool even = true;
    double operator()(int i, int j) const { return m[static_cast<size_t>(i) * d + j]; }
};

inline MomentMatrix moment_matrix(const GridField& f, double even_tolerance = 1e-9) {
    MomentMatrix out;
    out.d = f.d;
    out.m.assign(static_cast<size_t>(f.d) * f.d, 0.0);
    for_each_point(f.d, f.n, [&](size_t i, const std::vector<int>& m) {
        for (int a = 0; a < f.d; ++a)
            for (int b = 0; b < f.d; ++b)
                out.m[static_cast<size_t>(a) * f.d + b] += m[a] * f.h * m[b] * f.h * f.v[i];
    });
    for (double& x : out.m) x *= f.cell();
    const double scale = max_abs(f.v);
    double worst = 0.0;
    for (size_t i = 0; i < f.v.size(); ++i)
        worst = std::max(worst, std::abs(f.v[i] - f.v[offset_index(0, i, f.d, f.n, -1)]));
    out.odd_residual = scale > 0.0 ? worst / scale : 0.0;
    out.even = out.odd_residual <= even_tolerance;
    return out;
}

struct MomentPlan {
    double a = 0.0;
    int d = 0;
    bool l1_linf_regime = false;  // a <= 2: L^1 and L^inf bounds
    double p_star = std::numeric_limits<double>::quiet_NaN();
    double p_a = 1.0;
};

inline MomentPlan moment_plan(double a, int d) {
    if (a < 0.0 || a > d + 2.0) throw config_error("moment order outside [0, d+2]");
    MomentPlan plan;
    plan.a = a;
    plan.d = d;
    if (a <= 2.0) {
        plan.l1_linf_regime = true;
        return plan;
    }
    plan.p_star = double(d) / (double(d) - a + 2.0);
    plan.p_a = 0.5 * (1.0 + plan.p_star);
    return plan;
}

// ---- persistence ---------------------------------------------------------

namespace detail {

inline void put_u32(std::string& s, uint32_t x) {
    for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
}
inline void put_f64(std::string& s, double x) {
    const auto u = std::bit_cast<uint64_t>(x);
    for (int b = 0; b < 8; ++b) s.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
}
inline uint64_t get_le(const std::string& s, size_t pos, int bytes) {
    if (pos + bytes > s.size()) throw config_error("truncated RCMF file");
    uint64_t u = 0;
    for (int b = 0; b < bytes; ++b) u |= uint64_t(static_cast<unsigned char>(s[pos + b])) << (8 * b);
    return u;
}

// Writes to a sibling temporary and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw config_error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw config_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

inline constexpr uint32_t rcmf_version = 1;

inline std::string encode_rcmf(const GridField& f) {
    std::string s = "RCMF";
    detail::put_u32(s, rcmf_version);
    detail::put_u32(s, static_cast<uint32_t>(f.d));
    detail::put_u32(s, static_cast<uint32_t>(f.n));
    detail::put_f64(s, f.h);
    for (double x : f.v) detail::put_f64(s, x);
    return s;
}

inline GridField decode_rcmf(const std::string& s) {
    if (s.size() < 20 || s.compare(0, 4, "RCMF") != 0) throw config_error("not an RCMF file");
    const auto version = static_cast<uint32_t>(detail::get_le(s, 4, 4));
    if (version != rcmf_version) throw config_error("unsupported RCMF version");
    const int d = static_cast<int>(detail::get_le(s, 8, 4));
    const int n = static_cast<int>(detail::get_le(s, 12, 4));
    const double h = std::bit_cast<double>(detail::get_le(s, 16, 8));
    GridField f(d, n, h);
    if (s.size() != 24 + 8 * f.v.size()) throw config_error("RCMF size does not match header");
    for (size_t i = 0; i < f.v.size(); ++i) f.v[i] = std::bit_cast<double>(detail::get_le(s, 24 + 8 * i, 8));
    return f;
}

inline void write_rcmf(const std::filesystem::path& path, const GridField& f) {
    detail::write_atomic(path, encode_rcmf(f));
}

inline GridField read_rcmf(const std::filesystem::path& path) { return decode_rcmf(detail::read_file(path)); }

// CSV of the slice through the origin spanned by the first one or two axes.
inline std::string slice_csv(const GridField& f, int axes) {
    if (axes < 1 || axes > 2 || axes > f.d) throw config_error("slice must span 1 or 2 axes");
    std::ostringstream out;
    out.precision(17);
    out << (axes == 1 ? "x1,value\n" : "x1,x2,value\n");
    const size_t stride_last = ipow(static_cast<size_t>(f.n), f.d - 1);
    const size_t stride_second = f.d >= 2 ? ipow(static_cast<size_t>(f.n), f.d - 2) : 0;
    for (int i = 0; i < f.n; ++i) {
        const int mi = signed_index(i, f.n);
        if (axes == 1) {
            out << mi * f.h << ',' << f.v[i * stride_last] << '\n';
            continue;
        }
        for (int j = 0; j < f.n; ++j)
            out << mi * f.h << ',' << signed_index(j, f.n) * f.h << ','
                << f.v[i * stride_last + j * stride_second] << '\n';
    }
    return out.str();
}

}  // namespace rcm
