#pragma once

// Diagram catalogue on grid kernels. Contractible edges tau° = delta/lambda +
// tau never touch the grid as spikes: their delta part enters every
// convolution as a constant spectral coefficient, and every pointwise
// evaluation as an explicit extra term.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "pair_field.hpp"

namespace rcm {

inline constexpr double certification_slack = 1e-9;

inline bool certifies(double lhs, double rhs) { return lhs <= rhs * (1.0 + certification_slack); }

struct Certification {
    std::string case_id;
    std::string anchor;    // which displayed bound the line instantiates
    std::string lhs_name;
    std::string rhs_expr;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double a = 0.0, b = 0.0, p = 1.0, lambda = 0.0;
    int d = 0, n = 0;
    double L = 0.0;
    std::string kernel;
    double scan_resolution = 0.0;
};

struct DiagramReport {
    std::string name;
    double a = 0.0, b = 0.0, p = 1.0, lambda = 0.0;
    double value = 0.0;
    std::vector<double> sup_at;
    double scan_resolution = 0.0;
    std::vector<Certification> certs;
};

inline std::vector<double> coords_of(size_t flat, int d, int n, double h) {
    std::vector<double> x;
    for (int m : multi_index(flat, d, n)) x.push_back(m * h);
    return x;
}

// tau~ = phi + lambda phi * tau
inline GridField tilde_tau(const GridField& tau, const GridField& phi, double lambda) {
    GridField out = add(phi, scaled(convolve(phi, tau), lambda));
    out.kernel = false;
    return out;
}

struct WeightedEdge {
    GridField base;
    double a = 0.0;
    bool contractible = false;
};

inline double edge_sup(const WeightedEdge& e, double s) {
    if (e.contractible && e.a == 0.0) throw numeric_error("delta-divergent");
    return weighted_norm(e.base, e.a, s);
}

// ---- bubbles -------------------------------------------------------------

// || A(x) B(u + x) ||_{L^p_x} for already weighted fields.
inline double bubble_direct(const GridField& A, const GridField& B, double p, size_t u) {
    require_same_shape(A, B);
    std::vector<double> prod(A.size());
    for (size_t x = 0; x < A.size(); ++x) prod[x] = A.v[x] * B.v[offset_index(u, x, A.d, A.n, +1)];
    return lp_norm(prod.data(), prod.size(), p, A.cell());
}

inline double bubble_W(const WeightedEdge& t1, const WeightedEdge& t2, double p, size_t u) {
    if (t1.contractible || t2.contractible) throw config_error("bubble needs non-contractible edges");
    return bubble_direct(weighted(t1.base, t1.a), weighted(t2.base, t2.a), p, u);
}

struct SupResult {
    double value = 0.0;
    size_t arg = 0;
    double scan_resolution = 0.0;
};

inline SupResult max_entry(const GridField& f, double scale = 1.0) {
    SupResult r;
    r.value = -inf;
    for (size_t i = 0; i < f.size(); ++i)
        if (scale * f.v[i] > r.value) {
            r.value = scale * f.v[i];
            r.arg = i;
        }
    r.scan_resolution = f.h;
    return r;
}

// sup_u || A(x) B(u + x) ||_p. Exact over all offsets for p in {1, 2, inf};
// other p scan offsets whose coordinates are multiples of stride.
inline SupResult bubble_sup(const GridField& A, const GridField& B, double p, int stride = 1) {
    require_same_shape(A, B);
    if (p == 1.0 || p == 2.0) {
        GridField a = A, b = B;
        for (double& x : a.v) x = p == 1.0 ? std::abs(x) : x * x;
        for (double& x : b.v) x = p == 1.0 ? std::abs(x) : x * x;
        GridField c = convolve(reflected(a), b);
        if (p == 2.0)
            for (double& x : c.v) x = std::sqrt(std::max(0.0, x));
        return max_entry(c);
    }
    SupResult r;
    r.value = -inf;
    const int s = std::isinf(p) ? 1 : std::max(1, stride);
    for_each_point(A.d, A.n, [&](size_t u, const std::vector<int>& m) {
        for (int x : m)
            if (((x % s) + s) % s != 0) return;
        const double v = bubble_direct(A, B, p, u);
        if (v > r.value) {
            r.value = v;
            r.arg = u;
        }
    });
    r.scan_resolution = s * A.h;
    return r;
}

inline DiagramReport W_bar(const WeightedEdge& t1, const WeightedEdge& t2, double p, int stride = 1) {
    if (t1.contractible || t2.contractible) throw config_error("bubble needs non-contractible edges");
    const auto r = bubble_sup(weighted(t1.base, t1.a), weighted(t2.base, t2.a), p, stride);
    DiagramReport rep;
    rep.name = "W";
    rep.a = t1.a;
    rep.b = t2.a;
    rep.p = p;
    rep.value = r.value;
    rep.sup_at = coords_of(r.arg, t1.base.d, t1.base.n, t1.base.h);
    rep.scan_resolution = r.scan_resolution;
    return rep;
}

// ---- triangles, squares ----------------------------------------------------

struct TriangleReport {
    double T = 0.0;       // lambda^2 || tau^(b) * tau * tau ||_inf
    double B1_b0 = 0.0;   // lambda || tau^(b) * tau ||_inf
    double B1_00 = 0.0;   // lambda || tau * tau ||_inf
    double T_circ = 0.0;  // T + B1_b0 + B1_00
    double T_open = 0.0;  // lambda^2 || tau^(b) * tau * tau~ ||_inf (when tau~ given)
    std::vector<double> sup_at;
};

inline TriangleReport triangle_T(double b, const GridField& tau, double lambda,
                                 const std::optional<GridField>& tilde = std::nullopt) {
    const SpectralField t = fft(tau);
    TriangleReport r;
    const auto tri = max_entry(convolve_chain(weighted(tau, b), {{&t, 0.0}, {&t, 0.0}}), lambda * lambda);
    r.T = std::max(0.0, tri.value);
    r.sup_at = coords_of(tri.arg, tau.d, tau.n, tau.h);
    r.B1_b0 = std::max(0.0, lambda * max_abs(convolve(weighted(tau, b), tau).v));
    r.B1_00 = std::max(0.0, lambda * max_abs(convolve(tau, tau).v));
    r.T_circ = r.T + r.B1_b0 + r.B1_00;
    if (tilde) {
        const SpectralField tt = fft(*tilde);
        r.T_open = lambda * lambda * max_abs(convolve_chain(weighted(tau, b), {{&t, 0.0}, {&tt, 0.0}}).v);
    }
    return r;
}

inline double square_S(const GridField& tau, double lambda) {
    const SpectralField t = fft(tau);
    return lambda * lambda * lambda * max_abs(convolve_chain(tau, {{&t, 0.0}, {&t, 0.0}, {&t, 0.0}}).v);
}

// ---- Y and H -----------------------------------------------------------------

// Y(x, y) = lambda^3 int tau(z1) tau^(a)(z2 - z1) tau(z3 - z1) tau(z2 - z3)
//                      tau(x - z2) tau(y - z3) dz1 dz2 dz3
inline PairField Y_field(double a, const GridField& tau, double lambda, size_t budget = default_pair_budget) {
    check_pair_budget(tau.d, tau.n, budget);
    const SpectralField t = fft(tau), ta = fft(weighted(tau, a));
    PairField K = diag_conv(t, {&ta, 0.0}, {&t, 0.0});
    mul_diff(K, tau);
    PairField Y = conv2(K, {&t, 0.0}, {&t, 0.0});
    for (double& x : Y.v) x *= lambda * lambda * lambda;
    return Y;
}

inline double Y_diagram(double a, const GridField& tau, double lambda, size_t x, size_t y,
                        size_t budget = default_pair_budget) {
    return Y_field(a, tau, lambda, budget).at(x, y);
}

struct HReport {
    double a = 0.0, b = 0.0, lambda = 0.0;
    std::vector<double> ps;
    std::vector<double> value;  // sup over scanned (u, v), per p
    std::vector<size_t> arg_u, arg_v;
    double scan_resolution = 0.0;
};

// G_u(x, w) = lambda int Y(x, y) tau(y - u) tau^(b)(w - y) dy
inline PairField H_integrand(const PairField& Y, const GridField& tau, const SpectralField& tb, double lambda,
                             size_t u) {
    PairField Z = Y;
    mul_second(Z, tau, u);
    PairField G = conv2(Z, {nullptr, 1.0}, {&tb, 0.0});
    for (double& x : G.v) x *= lambda;
    return G;
}

// H_p(u, v) = || G_u(x, v + x) ||_{L^p_x}; u on a lattice of the given stride,
// v over the full grid.
inline HReport H_sup(double a, double b, const std::vector<double>& ps, const GridField& tau, double lambda,
                     int stride = 1, size_t budget = default_pair_budget) {
    const PairField Y = Y_field(a, tau, lambda, budget);
    const SpectralField tb = fft(weighted(tau, b));
    HReport rep;
    rep.a = a;
    rep.b = b;
    rep.lambda = lambda;
    rep.ps = ps;
    rep.value.assign(ps.size(), 0.0);
    rep.arg_u.assign(ps.size(), 0);
    rep.arg_v.assign(ps.size(), 0);
    rep.scan_resolution = std::max(1, stride) * tau.h;
    const size_t N = Y.N;
    std::vector<double> line(N);
    for_each_point(tau.d, tau.n, [&](size_t u, const std::vector<int>& m) {
        for (int x : m)
            if (((x % stride) + stride) % stride != 0) return;
        const PairField G = H_integrand(Y, tau, tb, lambda, u);
        for (size_t v = 0; v < N; ++v) {
            for (size_t x = 0; x < N; ++x) line[x] = G.at(x, offset_index(v, x, tau.d, tau.n, +1));
            for (size_t q = 0; q < ps.size(); ++q) {
                const double val = lp_norm(line.data(), N, ps[q], Y.cell());
                if (val > rep.value[q]) {
                    rep.value[q] = val;
                    rep.arg_u[q] = u;
                    rep.arg_v[q] = v;
                }
            }
        }
    });
    return rep;
}

inline double H_diagram(double a, double b, double p, const GridField& tau, double lambda, size_t u, size_t v,
                        size_t budget = default_pair_budget) {
    const PairField Y = Y_field(a, tau, lambda, budget);
    const PairField G = H_integrand(Y, tau, fft(weighted(tau, b)), lambda, u);
    std::vector<double> line(G.N);
    for (size_t x = 0; x < G.N; ++x) line[x] = G.at(x, offset_index(v, x, tau.d, tau.n, +1));
    return lp_norm(line.data(), line.size(), p, G.cell());
}

// ---- composites ----------------------------------------------------------------

struct UVReport {
    double triangle = 0.0;     // lambda^2 || tau*tau*tau ||_inf
    double triangle_oo = 0.0;  // triangle + lambda || tau*tau ||_inf + 1
    double U = 0.0;
    double V = 0.0;
    bool V_below_one = false;
};

inline UVReport composite_UV(const GridField& phi, const GridField& tau, double lambda) {
    const SpectralField t = fft(tau);
    UVReport r;
    r.triangle = lambda * lambda * max_abs(convolve_chain(tau, {{&t, 0.0}, {&t, 0.0}}).v);
    r.triangle_oo = r.triangle + lambda * max_abs(convolve(tau, tau).v) + 1.0;
    r.U = r.triangle * r.triangle_oo + r.triangle_oo * r.triangle_oo + lambda * weighted_norm(phi, 0.0, 1.0);
    r.V = 4.0 * std::sqrt(r.triangle * r.triangle_oo * r.U);
    r.V_below_one = r.V < 1.0;
    return r;
}

// ---- psi blocks ------------------------------------------------------------------

enum class PsiKind {
    psi0_1, psi0_2, psi0_3,
    psi_1, psi_2, psi_3, psi_4,
    psin_1, psin_2,
    psibar0_1, psibar0_2,
    psibar_1, psibar_2, psibar_3, psibar_4,
};

inline PsiKind parse_psi_kind(const std::string& s) {
    static const std::map<std::string, PsiKind> names = {
        {"psi0_1", PsiKind::psi0_1},       {"psi0_2", PsiKind::psi0_2},       {"psi0_3", PsiKind::psi0_3},
        {"psi_1", PsiKind::psi_1},         {"psi_2", PsiKind::psi_2},         {"psi_3", PsiKind::psi_3},
        {"psi_4", PsiKind::psi_4},         {"psin_1", PsiKind::psin_1},       {"psin_2", PsiKind::psin_2},
        {"psibar0_1", PsiKind::psibar0_1}, {"psibar0_2", PsiKind::psibar0_2}, {"psibar_1", PsiKind::psibar_1},
        {"psibar_2", PsiKind::psibar_2},   {"psibar_3", PsiKind::psibar_3},   {"psibar_4", PsiKind::psibar_4},
    };
    auto it = names.find(s);
    if (it == names.end()) throw config_error("unknown variant: " + s);
    return it->second;
}

// Value of a block at grid points. Delta factors cannot be sampled, so a
// block containing delta(w - s) reports its coefficient in delta1 when the
// constrained points coincide (delta2 for the doubly pinned block).
struct PsiValue {
    double smooth = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

inline size_t psi_arity(PsiKind k) {
    switch (k) {
        case PsiKind::psi0_1: case PsiKind::psi0_2: case PsiKind::psi0_3:
        case PsiKind::psibar0_1: case PsiKind::psibar0_2:
        case PsiKind::psin_1: case PsiKind::psin_2: return 3;
        default: return 4;
    }
}

// Points: psi0/psibar0 (w, u, s); psi/psibar (w, u, r, s); psin (x, r, s).
inline PsiValue psi_block(PsiKind kind, const GridField& tau, const GridField& phi, double lambda,
                          const std::vector<size_t>& pts) {
    if (pts.size() != psi_arity(kind)) throw config_error("wrong number of external points for block");
    const int d = tau.d, n = tau.n;
    const double w_cell = tau.cell(), li = 1.0 / lambda, l2 = lambda * lambda;
    auto T = [&](size_t a, size_t b) { return tau.v[offset_index(a, b, d, n, -1)]; };
    // (tau * P)(t) for P(z) = tau(z - p1) tau(z - p2)
    auto tri_leg = [&](size_t p1, size_t p2) {
        GridField P(d, n, tau.h);
        for (size_t z = 0; z < P.size(); ++z) P.v[z] = T(z, p1) * T(z, p2);
        return convolve(tau, P);
    };
    PsiValue out;
    switch (kind) {
        case PsiKind::psi0_1: {
            const size_t w = pts[0], u = pts[1], s = pts[2];
            out.smooth = T(u, s) * T(u, w) * T(w, s);
            break;
        }
        case PsiKind::psi0_2: {
            const size_t w = pts[0], u = pts[1], s = pts[2];
            if (w == s) {
                const GridField tt = convolve(tau, tau);
                out.delta1 = li * T(u, s) * lambda * tt.v[offset_index(u, s, d, n, -1)];
            }
            break;
        }
        case PsiKind::psi0_3: {
            const size_t w = pts[0], u = pts[1], s = pts[2];
            if (w == s) out.delta1 = li * phi.v[offset_index(u, s, d, n, -1)];
            break;
        }
        case PsiKind::psi_1: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            const GridField C = tri_leg(u, r);
            double sum = 0.0;
            for (size_t t = 0; t < C.size(); ++t) sum += T(t, w) * T(t, s) * C.v[t];
            out.smooth = T(w, u) * l2 * (sum * w_cell + li * T(s, w) * C.v[s]);
            break;
        }
        case PsiKind::psi_2: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            const GridField C = tri_leg(u, r);
            double sum = 0.0;
            for (size_t t = 0; t < C.size(); ++t) sum += T(u, t) * T(t, w) * C.v[t];
            const double I = sum * w_cell + li * T(u, w) * C.v[w];
            out.smooth = T(w, s) * l2 * I;
            if (w == s) out.delta1 = li * l2 * I;
            break;
        }
        case PsiKind::psi_3: case PsiKind::psibar_3: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            out.smooth = T(u, w) * T(w, s) * T(u, r);
            break;
        }
        case PsiKind::psi_4: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            if (w == s) out.delta1 = li * T(u, w) * T(u, r);
            break;
        }
        case PsiKind::psin_1: {
            const size_t x = pts[0], r = pts[1], s = pts[2];
            const GridField C = tri_leg(r, x);
            double sum = 0.0;
            for (size_t t = 0; t < C.size(); ++t) sum += T(t, s) * T(x, t) * C.v[t];
            out.smooth = l2 * (sum * w_cell + li * T(x, s) * C.v[s]);
            break;
        }
        case PsiKind::psin_2: {
            const size_t x = pts[0], r = pts[1], s = pts[2];
            out.smooth = T(x, s) * T(x, r);
            break;
        }
        case PsiKind::psibar0_1: {
            const size_t w = pts[0], u = pts[1], s = pts[2];
            out.smooth = T(w, s) * T(w, u) * T(u, s);
            break;
        }
        case PsiKind::psibar0_2: {
            const size_t w = pts[0], u = pts[1], s = pts[2];
            if (w == s && u == s) out.delta2 = li * li;
            break;
        }
        case PsiKind::psibar_1: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            const GridField D = tri_leg(s, w);
            double sum = 0.0;
            for (size_t z = 0; z < D.size(); ++z) sum += T(u, z) * T(z, r) * D.v[z];
            out.smooth = T(w, u) * l2 * (sum * w_cell + li * T(u, r) * D.v[r]);
            break;
        }
        case PsiKind::psibar_2: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            const GridField C = tri_leg(u, r);
            double S = 0.0, A1 = 0.0, A2 = 0.0;
            for (size_t t = 0; t < C.size(); ++t) {
                S += T(u, t) * T(t, w) * C.v[t];
                A1 += T(w, t) * T(t, u) * T(t, r);  // t plays z with t -> w contracted
                A2 += T(t, r) * T(u, t) * T(t, w);  // z -> r contracted
            }
            A1 *= T(u, w);
            A2 *= T(r, u);
            const double A3 = T(w, r) * T(r, u) * T(u, w);
            out.smooth = T(w, s) * l2 * (S * w_cell + li * A1 * w_cell + li * A2 * w_cell + li * li * A3);
            break;
        }
        case PsiKind::psibar_4: {
            const size_t w = pts[0], u = pts[1], r = pts[2], s = pts[3];
            if (u == r) out.delta1 = li * T(u, w) * T(w, s);
            break;
        }
    }
    return out;
}

// ---- block compositions ----------------------------------------------------------

enum class BlockSide { left, right };

// Integrated m-fold compositions, evaluated backwards: with h_0 = 1 and
// h_{j+1}(r, s) = lambda^2 int psi(w, u; r, s) h_j(w, u) dw du, the block
// value is lambda^2 <psi0(., .; 0), h_m>. Every h_j is smooth, so delta
// factors reduce to evaluations and constant spectral coefficients.
class BlockEngine {
public:
    BlockEngine(const GridField& tau, const GridField& phi, double lambda, size_t budget = default_pair_budget)
        : tau_(tau), phi_(phi), lambda_(lambda), t_(fft(tau)) {
        check_pair_budget(tau.d, tau.n, budget);
    }

    PairField apply_adjoint(const PairField& h, BlockSide side) const {
        const bool bar = side == BlockSide::right;
        const double l = lambda_, li = 1.0 / l;
        const EdgeSpectrum T{&t_, 0.0}, To{&t_, li}, D{nullptr, 1.0};
        PairField h3 = h;
        mul_diff(h3, tau_);  // h(w, u) tau(u - w)

        // psi_1 / psibar_1
        PairField Q = conv2(h3, T, T);
        mul_diff(Q, tau_);
        PairField R1 = swapped(conv2(Q, bar ? T : To, bar ? To : T));
        // psi_3 = psibar_3
        PairField R3 = swapped(conv2(h3, T, T));
        // psi_4 / psibar_4
        PairField R4 = swapped(bar ? conv2(h3, T, D) : conv2(h3, D, T));
        // psi_2 / psibar_2
        PairField R2 = second_family(h, bar);

        PairField out(h.d, h.n, h.h);
        const double l4 = l * l * l * l, l2 = l * l;
        for (size_t i = 0; i < out.v.size(); ++i)
            out.v[i] = l4 * R1.v[i] + l2 * R3.v[i] + l * R4.v[i] + l4 * R2.v[i];
        return out;
    }

    double pair_with_start(const PairField& h, BlockSide side) const {
        const double l = lambda_, li = 1.0 / l;
        const size_t N = h.N;
        const int d = tau_.d, n = tau_.n;
        double smooth = 0.0;
        for (size_t w = 0; w < N; ++w)
            for (size_t u = 0; u < N; ++u)
                smooth += tau_.v[u] * tau_.v[offset_index(u, w, d, n, -1)] * tau_.v[w] * h.at(w, u);
        smooth *= h.cell() * h.cell();
        double pinned = 0.0;
        if (side == BlockSide::left) {
            const GridField tt = convolve(tau_, tau_);
            for (size_t u = 0; u < N; ++u) pinned += (tau_.v[u] * l * tt.v[u] + phi_.v[u]) * h.at(0, u);
            pinned *= li * h.cell();
        } else {
            pinned = li * li * h.at(0, 0);
        }
        return l * l * (smooth + pinned);
    }

    double value(int m, BlockSide side) const {
        if (m < 0) throw config_error("segment count must be nonnegative");
        PairField h(tau_.d, tau_.n, tau_.h, 1.0);
        for (int j = 0; j < m; ++j) h = apply_adjoint(h, side);
        return pair_with_start(h, side);
    }

private:
    // lambda^{-4} times the psi_2 (psibar_2) adjoint, looping over u.
    PairField second_family(const PairField& h, bool bar) const {
        const double li = 1.0 / lambda_;
        const EdgeSpectrum T{&t_, 0.0}, To{&t_, li}, D{nullptr, 1.0};
        const int d = tau_.d, n = tau_.n;
        PairField acc(d, n, tau_.h);
        GridField hu(d, n, tau_.h);
        for (size_t u0 = 0; u0 < h.N; ++u0) {
            for (size_t w = 0; w < h.N; ++w) hu.v[w] = h.at(w, u0);
            const SpectralField hs = fft(hu);
            PairField X = diag_conv(hs, To, bar ? T : To);  // X(t, s)
            mul_first(X, tau_, u0);
            PairField A = conv2(X, T, D);  // A(z, s)
            mul_first(A, tau_, u0);
            for (size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += A.v[i];
        }
        for (double& x : acc.v) x *= h.cell();
        return conv2(acc, bar ? To : T, D);
    }

    GridField tau_, phi_;
    double lambda_;
    SpectralField t_;
};

inline DiagramReport block_composition(int m, BlockSide side, const GridField& tau, const GridField& phi,
                                       double lambda, size_t budget = default_pair_budget) {
    const BlockEngine engine(tau, phi, lambda, budget);
    const UVReport uv = composite_UV(phi, tau, lambda);
    DiagramReport rep;
    rep.name = side == BlockSide::left ? "left_block" : "right_block";
    rep.lambda = lambda;
    rep.a = m;
    rep.value = engine.value(m, side);
    Certification c;
    c.case_id = std::string("block.") + (side == BlockSide::left ? "left" : "right") + ".m" + std::to_string(m);
    c.anchor = "composition block bound";
    c.lhs_name = "lambda^2 int int block(a,b) da db";
    c.rhs_expr = side == BlockSide::left ? "3 U V^m" : "2 U V^m";
    c.lhs = rep.value;
    c.rhs = (side == BlockSide::left ? 3.0 : 2.0) * uv.U * std::pow(uv.V, m);
    c.holds = certifies(c.lhs, c.rhs);
    c.lambda = lambda;
    c.d = tau.d;
    c.n = tau.n;
    c.L = tau.L();
    c.scan_resolution = tau.h;
    rep.certs.push_back(c);
    return rep;
}

// ---- splitting of powers -------------------------------------------------------------

struct SplitResult {
    double worst_ratio = 0.0;  // max |x_N - x_0|^a / (N^a sum |x_j - x_{j-1}|^a)
    uint64_t trials = 0;
    uint64_t violations = 0;
};

inline SplitResult splitting_check(int d, double a, int max_segments, uint64_t trials, uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> segs(1, max_segments);
    std::vector<double> x;
    SplitResult out;
    out.trials = trials;
    for (uint64_t t = 0; t < trials; ++t) {
        const int N = segs(gen);
        x.assign(static_cast<size_t>((N + 1) * d), 0.0);
        for (double& c : x) c = g(gen);
        double sum = 0.0, end2 = 0.0;
        for (int j = 1; j <= N; ++j) {
            double s2 = 0.0;
            for (int k = 0; k < d; ++k) s2 += std::pow(x[j * d + k] - x[(j - 1) * d + k], 2);
            sum += std::pow(s2, a / 2.0);
        }
        for (int k = 0; k < d; ++k) end2 += std::pow(x[N * d + k] - x[k], 2);
        const double ratio = std::pow(end2, a / 2.0) / (std::pow(double(N), a) * sum);
        out.worst_ratio = std::max(out.worst_ratio, ratio);
        out.violations += !certifies(ratio, 1.0);
    }
    return out;
}

// tau_+ = lambda phi * tau
inline GridField tau_plus(const GridField& tau, const GridField& phi, double lambda) {
    return scaled(convolve(phi, tau), lambda);
}

}  // namespace rcm
