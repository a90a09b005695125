#pragma once

// Numerical certification of the diagrammatic inequality chains on desk-size
// grids. Every bound is instantiated at a fixed lambda: the lambda-sups of the
// rhs quantities are replaced by their values at that lambda, which is the
// quantity the proofs actually bound line by line.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "diagrams.hpp"
#include "kernel.hpp"
#include "oz.hpp"
#include "rng.hpp"

namespace rcm {

// Reference-model fields at one lambda: phi, tau from the OZ deconvolution
// with Pi = 0, tau~ built from them.
struct DeskContext {
    std::string kernel;
    double lambda = 0.0;
    GridField phi, tau, tilde;
    SpectralField t;

    DeskContext(std::string kernel_name, const GridField& phi_, const GridField& tau_, double lambda_)
        : kernel(std::move(kernel_name)), lambda(lambda_), phi(phi_), tau(tau_),
          tilde(tilde_tau(tau_, phi_, lambda_)), t(fft(tau_)) {}

    double E(double a) const { return weighted_norm(tilde, a, inf); }
    double W(double a, double b, double p) const {
        return bubble_sup(weighted(tilde, a), weighted(tilde, b), p).value;
    }
    double T(double b) const { return triangle_T(b, tau, lambda).T; }
    double B1(double b) const { return lambda * max_abs(convolve(weighted(tau, b), tau).v); }
    double T_circ(double b) const { return T(b) + B1(b) + B1(0.0); }
};

inline DeskContext make_desk_context(const AdjacencyKernel& k, double L, int n, double lambda) {
    const GridField phi = discretize(k, L, n);
    const OzSolution sol = oz_deconvolve(form_J(phi, std::nullopt, lambda));
    return DeskContext(to_string(k.variant), phi, scaled(sol.lambda_tau, 1.0 / lambda), lambda);
}

inline std::string fmt_num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

inline std::string p_label(double p) { return std::isinf(p) ? "inf" : fmt_num(p); }

inline Certification make_cert(const DeskContext& c, std::string id, std::string anchor, std::string lhs_name,
                               std::string rhs_expr, double lhs, double rhs, double a, double b, double p) {
    Certification out;
    out.case_id = std::move(id);
    out.anchor = std::move(anchor);
    out.lhs_name = std::move(lhs_name);
    out.rhs_expr = std::move(rhs_expr);
    out.lhs = lhs;
    out.rhs = rhs;
    out.holds = certifies(lhs, rhs);
    out.a = a;
    out.b = b;
    out.p = p;
    out.lambda = c.lambda;
    out.d = c.tau.d;
    out.n = c.tau.n;
    out.L = c.tau.L();
    out.kernel = c.kernel;
    out.scan_resolution = c.tau.h;
    return out;
}

// sup over lambda of a quantity sampled on a lambda grid in [lambda_c/2, lambda_c).
struct LambdaSup {
    std::vector<double> lambdas;
    std::vector<double> values;
    double sup = -inf;
};

inline LambdaSup sup_over_lambda_grid(const std::function<double(double)>& f, double lambda_c, int points = 5) {
    if (points < 5) throw config_error("lambda grid needs at least 5 points");
    LambdaSup out;
    for (int i = 0; i < points; ++i) {
        const double l = 0.5 * lambda_c * (1.0 + double(i) / points);
        out.lambdas.push_back(l);
        out.values.push_back(f(l));
        out.sup = std::max(out.sup, out.values.back());
    }
    return out;
}

// Measure of the unit ball to the power 1/p: the proof's c_{d,p}.
inline double ball_constant(int d, double p) {
    if (std::isinf(p)) return 1.0;
    return std::pow(unit_ball_volume(d), 1.0 / p);
}

// ---- special segment diagrams ------------------------------------------------------

inline const std::vector<std::string>& segment_case_ids() {
    static const std::vector<std::string> ids = {
        "segment.first.a",      "segment.first.b",     "segment.middle.psi4_bubble",
        "segment.middle.psi4_triangle", "segment.middle.martini", "segment.last.bubble",
        "segment.last.a",       "segment.last.a_flip", "segment.last.b",
        "segment.last.b_flip",  "segment.last.contracted",
    };
    return ids;
}

namespace detail {

// max over (v1, v2) of || f(x - v1) P_{v2}(x) ||_p, P_{v2}(x) = g(x) k(x - v2)
inline double two_offset_sup(const GridField& f, const GridField& g, const GridField& k, double p) {
    double best = 0.0;
    GridField P(g.d, g.n, g.h);
    for (size_t v2 = 0; v2 < g.size(); ++v2) {
        for (size_t x = 0; x < g.size(); ++x) P.v[x] = g.v[x] * k.v[offset_index(x, v2, g.d, g.n, -1)];
        // bubble_sup scans || P(x) f(u + x) ||_p; f is even so u = -v1 covers all v1
        best = std::max(best, bubble_sup(P, f, p).value);
    }
    return best;
}

}  // namespace detail

// One special-segment inequality with the distinguished external vertex at 0
// and the other scanned; A and B are the moment powers carried by the two
// marked edges.
inline Certification appendix_segment_bounds(const std::string& id, const DeskContext& c, double p, double A,
                                             double B) {
    const double l = c.lambda, li = 1.0 / l;
    const GridField TA = weighted(c.tau, A), TB = weighted(c.tau, B);
    const SpectralField tas = fft(TA), tbs = fft(TB);
    const EdgeSpectrum T{&c.t, 0.0}, To{&c.t, li}, D{nullptr, 1.0}, EA{&tas, 0.0}, EB{&tbs, 0.0};
    const auto pair_lhs = [&](PairField F, double scale) {
        for (double& x : F.v) x *= scale;
        return row_norm_sup(F, p).first;
    };
    const auto three_edge = [&](EdgeSpectrum e1, EdgeSpectrum e2, const GridField& diff, EdgeSpectrum last) {
        PairField G = diag_conv(c.t, e1, e2);
        mul_diff(G, diff);
        return pair_lhs(conv2(G, last, D), l * l);
    };
    const double E_A = c.E(A), E_B = c.E(B), B00 = c.B1(0.0);
    const std::string anchor = "special segment bound";
    const std::string tag = id + "." + c.kernel + ".lambda=" + fmt_num(l) + ".p=" + p_label(p);
    auto cert = [&](double lhs, double rhs, const std::string& lhs_name, const std::string& rhs_expr) {
        return make_cert(c, tag, anchor, lhs_name, rhs_expr, lhs, rhs, A, B, p);
    };

    if (id == "segment.first.a")
        return cert(three_edge(T, EA, TB, To), c.W(A, B, p) * (c.T(0.0) + B00),
                    "lambda^2 int int tauA(w-x) tauB(u-x) tau(u-w) tau°(v-u) tau(w)", "W(A,B) (T(0) + B1(0,0))");
    if (id == "segment.first.b")
        return cert(three_edge(EB, EA, c.tau, T), c.W(A, 0.0, p) * c.T(B),
                    "lambda^2 int int tauA(w-x) tau(u-x) tauB(u-w) tau(v-u) tau(w)", "W(A,0) T(B)");
    if (id == "segment.middle.psi4_bubble")
        return cert(detail::two_offset_sup(c.tau, TA, TB, p), max_abs(c.tau.v) * c.W(A, B, p),
                    "tau(x-v1) tauA(x) tauB(x-v2)", "||tau||_inf W(A,B)");
    if (id == "segment.middle.psi4_triangle") {
        const GridField bub = scaled(convolve(c.tau, c.tau), l);
        return cert(detail::two_offset_sup(TA, TB, bub, p), E_A * (li * c.T(B) + E_B * B00),
                    "tauA(x-v1) tauB(x) lambda (tau*tau)(x-v2)", "E(A) (T(B)/lambda + E(B) B1(0,0))");
    }
    if (id == "segment.middle.martini") {
        const HReport coarse = H_sup(A, B, {p}, c.tau, l, 2);
        const HReport full = H_sup(A, B, {p}, c.tau, l, 1);
        Certification out = cert(coarse.value[0], full.value[0], "H_p(A,B) on the stride-2 offset lattice", "H(A,B)");
        out.scan_resolution = coarse.scan_resolution;
        return out;
    }
    if (id == "segment.last.bubble")
        return cert(bubble_sup(TA, TB, p).value, c.W(A, B, p), "tauA(x-v) tauB(x)", "W(A,B)");
    if (id == "segment.last.a")
        return cert(three_edge(T, EB, TA, To), c.W(A, B, p) * c.T_circ(0.0),
                    "lambda^2 int int tau°(t-v) tau(z) tau(t-z) tauB(z-x) tauA(x-t)", "W(A,B) T°(0)");
    if (id == "segment.last.a_flip")
        return cert(three_edge(T, EA, TB, To), c.W(B, A, p) * c.T_circ(0.0),
                    "lambda^2 int int tau°(t-v) tau(z) tau(t-z) tauA(z-x) tauB(x-t)", "W(B,A) T°(0)");
    if (id == "segment.last.b") {
        PairField G = diag_conv(tbs, T, T);
        mul_diff(G, TA);
        return cert(pair_lhs(conv2(G, To, D), l * l), c.W(A, 0.0, p) * c.T_circ(B),
                    "lambda^2 int int tau°(t-v) tauB(z) tau(t-z) tau(z-x) tauA(x-t)", "W(A,0) T°(B)");
    }
    if (id == "segment.last.b_flip") {
        const EdgeSpectrum last{&tbs, B == 0.0 ? li : 0.0};
        return cert(three_edge(T, EA, c.tau, last), c.W(A, 0.0, p) * c.T_circ(B),
                    "lambda^2 int int tauB°(t-v) tau(z) tau(t-z) tauA(z-x) tau(x-t)", "W(A,0) T°(B)");
    }
    if (id == "segment.last.contracted") {
        PairField K = diag_conv(c.t, EA, T);
        mul_diff(K, TB);
        return cert(pair_lhs(K, l), E_A * (li * c.T(B) + E_B * B00),
                    "lambda tauB(x-v) int tau(z) tauA(v-z) tau(x-z)", "E(A) (T(B)/lambda + E(B) B1(0,0))");
    }
    throw config_error("unimplemented case id: " + id);
}

// ---- the remaining certified displays ----------------------------------------------

inline std::vector<Certification> certify_martini(const DeskContext& c, double a, double b) {
    const HReport H = H_sup(a, b, {inf}, c.tau, c.lambda);
    const double tau2 = weighted_norm(c.tau, 0.0, 2.0);
    const double rhs = c.lambda * c.lambda * tau2 * tau2 * c.E(a) * c.T(0.0) *
                       max_abs(convolve(weighted(c.tau, b), c.tau).v);
    const double rhs_w = c.lambda * c.lambda * tau2 * tau2 * c.E(a) * c.T(0.0) * c.W(b, 0.0, 1.0);
    const std::string tag = "." + c.kernel + ".lambda=" + fmt_num(c.lambda);
    std::vector<Certification> out;
    out.push_back(make_cert(c, "martini.H_inf" + tag, "martini sup-norm bound", "H_inf(a,b)",
                            "lambda^2 ||tau||_2^2 E(a) T(0) ||tau^(b)*tau||_inf", H.value[0], rhs, a, b, inf));
    out.push_back(make_cert(c, "martini.H_inf_via_W" + tag, "martini sup-norm bound", "H_inf(a,b)",
                            "lambda^2 ||tau||_2^2 E(a) T(0) W_1(b,0)", H.value[0], rhs_w, a, b, inf));
    const HReport H1 = H_sup(a, b, {1.0}, c.tau, c.lambda);
    const double S = square_S(c.tau, c.lambda);
    out.push_back(make_cert(c, "martini.H_1_square" + tag, "martini by edge, triangle and square", "H_1(a,b)",
                            "E(a) T(b) S / lambda", H1.value[0], c.E(a) * c.T(b) * S / c.lambda, a, b, 1.0));
    return out;
}

inline std::vector<Certification> certify_extra(const DeskContext& c, double a, double b,
                                                const std::vector<double>& ps) {
    std::vector<Certification> out;
    const std::string tag = "." + c.kernel + ".lambda=" + fmt_num(c.lambda);
    const double l = c.lambda;
    // tau~ <= ||phi||_inf + lambda ||phi||_1 ||tau||_inf inside the unit ball
    const double near = max_abs(c.phi.v) + l * weighted_norm(c.phi, 0.0, 1.0) * max_abs(c.tau.v);
    for (double p : ps) {
        out.push_back(make_cert(c, "extra.bubble_unweight" + tag + ".p=" + p_label(p), "bubble moment transfer",
                                "W_p(a,0)", "W_p(a,b) + c_{d,p} (||phi||_inf + lambda ||tau||_inf) E(a)",
                                c.W(a, 0.0, p), c.W(a, b, p) + ball_constant(c.tau.d, p) * near * c.E(a), a, b, p));
        const GridField tb = weighted(c.tau, b);
        const GridField bub = scaled(convolve(c.tau, c.tau), l);
        const double lhs = bubble_sup(tb, bub, p).value;
        out.push_back(make_cert(c, "extra.p_triangle" + tag + ".p=" + p_label(p), "p-triangle bound",
                                "sup_u ||tau^(b)(x) lambda (tau*tau)(u+x)||_p", "T(b)/lambda + E(b) B1(0,0)", lhs,
                                c.T(b) / l + c.E(b) * c.B1(0.0), a, b, p));
    }
    const SpectralField tb = fft(weighted(c.tau, b));
    const double lhs = l * max_abs(convolve(weighted(c.tau, b), c.tau).v);
    const double rhs = l * weighted_norm(c.tau, b, inf) * weighted_norm(c.phi, 0.0, 1.0) +
                       l * l * max_abs(convolve_chain(c.tau, {{&tb, 0.0}, {&c.t, 0.0}}).v);
    out.push_back(make_cert(c, "extra.contracted_bubble" + tag, "contracted bubble bound", "B1(b,0)",
                            "lambda ||tau^(b)||_inf ||phi||_1 + lambda^2 ||tau^(b)*tau*tau||_inf", lhs, rhs, a, b, inf));
    return out;
}

inline std::vector<Certification> certify_bubbles(const DeskContext& c, double a, double b) {
    std::vector<Certification> out;
    const std::string tag = "." + c.kernel + ".lambda=" + fmt_num(c.lambda);
    const GridField ta = weighted(c.tilde, a), tb = weighted(c.tilde, b);
    for (double th : {0.0, b})
        out.push_back(make_cert(c, "bubble.contracted_vs_W.theta=" + fmt_num(th) + tag, "contracted bubble vs W",
                                "B1(theta,0)", "lambda W_1(theta,0)", c.B1(th), c.lambda * c.W(th, 0.0, 1.0), th, 0.0,
                                1.0));
    out.push_back(make_cert(c, "bubble.W_inf" + tag, "bubble sup bound", "W_inf(a,b)", "E(a) E(b)", c.W(a, b, inf),
                            c.E(a) * c.E(b), a, b, inf));
    out.push_back(make_cert(c, "bubble.W_1_cauchy" + tag, "bubble Cauchy-Schwarz", "W_1(a,b)",
                            "||tau~^(a)||_2 ||tau~^(b)||_2", c.W(a, b, 1.0),
                            weighted_norm(ta, 0.0, 2.0) * weighted_norm(tb, 0.0, 2.0), a, b, 1.0));
    out.push_back(make_cert(c, "bubble.W_2_cauchy" + tag, "bubble Cauchy-Schwarz", "W_2(a,b)",
                            "||tau~^(a)||_4 ||tau~^(b)||_4", c.W(a, b, 2.0),
                            weighted_norm(ta, 0.0, 4.0) * weighted_norm(tb, 0.0, 4.0), a, b, 2.0));
    return out;
}

inline std::vector<Certification> certify_contracted_triangle(const DeskContext& c, double th) {
    std::vector<Certification> out;
    const std::string tag = ".theta=" + fmt_num(th) + "." + c.kernel + ".lambda=" + fmt_num(c.lambda);
    const double l = c.lambda, li = 1.0 / l;
    const GridField tth = weighted(c.tau, th);
    const SpectralField sth = fft(tth);
    const double Tc = c.T_circ(th);
    const double plain = l * l * max_abs(convolve_chain(tth, {{&c.t, 0.0}, {&c.t, 0.0}}).v);
    const double far = l * l * max_abs(convolve_chain(tth, {{&c.t, 0.0}, {&c.t, li}}).v);
    // contracting the weighted edge leaves a delta only when theta = 0
    const double own = l * l * max_abs(convolve_chain(c.tau, {{&sth, th == 0.0 ? li : 0.0}, {&c.t, 0.0}}).v);
    const std::string rhs = "T(theta) + B1(theta,0) + B1(0,0)";
    out.push_back(make_cert(c, "triangle.contracted.none" + tag, "contracted triangle", "T(theta)", rhs, plain, Tc,
                            th, 0.0, inf));
    out.push_back(make_cert(c, "triangle.contracted.plain_edge" + tag, "contracted triangle",
                            "lambda^2 ||tau^(theta)*tau*tau°||_inf", rhs, far, Tc, th, 0.0, inf));
    out.push_back(make_cert(c, "triangle.contracted.weighted_edge" + tag, "contracted triangle",
                            "lambda^2 ||tau^(theta)°*tau*tau||_inf", rhs, own, Tc, th, 0.0, inf));
    if (th == 0.0) {
        const double t2 = weighted_norm(c.tau, 0.0, 2.0);
        const double b00 = c.B1(0.0), ident = l * t2 * t2;
        out.push_back(make_cert(c, "triangle.B00_identity.upper" + tag, "contracted triangle", "B1(0,0)",
                                "lambda ||tau||_2^2", b00, ident, 0.0, 0.0, inf));
        out.push_back(make_cert(c, "triangle.B00_identity.lower" + tag, "contracted triangle", "lambda ||tau||_2^2",
                                "B1(0,0)", ident, b00, 0.0, 0.0, inf));
    }
    return out;
}

// Pi0 <= tau_+^2 / 2, weighted norms of which are controlled by W_p(0) / 2 <= W_p.
inline DiagramReport pi0_bound_and_split(const DeskContext& c, double a, double b, const std::vector<double>& ps) {
    DiagramReport rep;
    rep.name = "pi0";
    rep.a = a;
    rep.b = b;
    rep.lambda = c.lambda;
    const std::string tag = "." + c.kernel + ".lambda=" + fmt_num(c.lambda);
    const GridField tp = tau_plus(c.tau, c.phi, c.lambda);
    double excess = -inf;
    for (size_t i = 0; i < tp.size(); ++i) excess = std::max(excess, tp.v[i] - c.tilde.v[i]);
    rep.certs.push_back(make_cert(c, "pi0.tau_plus_below_tilde" + tag, "zeroth lace coefficient bound",
                                  "max(tau_+ - tau~)", "0", excess, 0.0, a, b, inf));
    GridField half_sq = tp;
    for (double& x : half_sq.v) x = 0.5 * x * x;
    for (double p : ps) {
        const double lhs = weighted_norm(half_sq, a + b, p);
        const double w0 = bubble_direct(weighted(c.tilde, a), weighted(c.tilde, b), p, 0);
        rep.certs.push_back(make_cert(c, "pi0.weighted_norm" + tag + ".p=" + p_label(p),
                                      "zeroth lace coefficient bound", "|| |x|^(a+b) tau_+^2 / 2 ||_p",
                                      "W_p(a,b)(0) / 2", lhs, 0.5 * w0, a, b, p));
        rep.certs.push_back(make_cert(c, "pi0.origin_vs_sup" + tag + ".p=" + p_label(p),
                                      "zeroth lace coefficient bound", "W_p(a,b)(0) / 2", "W_p(a,b)", 0.5 * w0,
                                      c.W(a, b, p), a, b, p));
        if (p == 1.0) rep.value = lhs;
    }
    return rep;
}

inline std::vector<Certification> certify_splitting(const DeskContext& c, uint64_t trials, uint64_t seed) {
    std::vector<Certification> out;
    for (int a = 1; a <= 3; ++a) {
        const SplitResult r = splitting_check(3, a, 6, trials, derive_seed(seed, 7, static_cast<uint64_t>(a)));
        Certification cert = make_cert(c, "split_power.a=" + std::to_string(a), "splitting of powers",
                                       "max |x_N-x_0|^a / (N^a sum |x_j-x_{j-1}|^a)", "1", r.worst_ratio, 1.0, a,
                                       0.0, inf);
        cert.d = 3;
        cert.lambda = 0.0;
        cert.kernel = "none";
        out.push_back(cert);
    }
    // collinear equally spaced chain: |x_N - x_0| = sum of steps, ratio 1/N
    for (int N = 1; N <= 6; ++N) {
        const double ratio = double(N) / (double(N) * N);
        Certification cert = make_cert(c, "split_power.collinear.N=" + std::to_string(N), "splitting of powers",
                                       "|x_N-x_0| / (N sum |x_j-x_{j-1}|)", "1", ratio, 1.0, 1.0, 0.0, inf);
        cert.d = 3;
        cert.lambda = 0.0;
        cert.kernel = "none";
        out.push_back(cert);
    }
    return out;
}

// ---- suite --------------------------------------------------------------------------------

inline std::vector<std::string> suite_categories() {
    return {"martini", "extra", "bubbles", "triangle", "pi0", "blocks", "segments", "splitting"};
}

struct SuiteOptions {
    std::vector<std::string> kernels{"gaussian", "disk"};
    std::vector<double> lambdas{0.3, 0.6, 0.9};
    std::vector<double> ps{1.0, 2.0, inf};
    int d = 2;
    int n = 16;
    double L = 8.0;
    double A = 1.0, B = 1.0;
    std::vector<int> block_m{0, 1};
    uint64_t split_trials = 100000;
    uint64_t seed = 1;
    // subset of suite_categories(); empty runs nothing
    std::vector<std::string> categories = suite_categories();
    bool self_test = false;
};

inline AdjacencyKernel kernel_by_name(const std::string& name, int d) {
    if (name == "gaussian") return make_gaussian(d);
    if (name == "disk") return make_disk(d);
    throw config_error("unknown kernel: " + name);
}

// Mutation harness: every lhs doubled, so tight lines must fail.
inline void apply_self_test(std::vector<Certification>& certs) {
    for (auto& c : certs) {
        c.lhs = c.lhs > 0.0 ? 2.0 * c.lhs : c.lhs + 1.0;
        c.holds = certifies(c.lhs, c.rhs);
        c.case_id = "self_test." + c.case_id;
    }
}

inline std::vector<Certification> run_desk_suite(const SuiteOptions& o) {
    for (const auto& cat : o.categories) {
        const auto known = suite_categories();
        if (std::find(known.begin(), known.end(), cat) == known.end())
            throw config_error("unknown certification category: " + cat);
    }
    auto has = [&](const char* cat) {
        return std::find(o.categories.begin(), o.categories.end(), cat) != o.categories.end();
    };
    std::vector<Certification> all;
    auto append = [&](std::vector<Certification> v) { all.insert(all.end(), v.begin(), v.end()); };
    bool split_done = false;
    const bool grid_work = std::any_of(o.categories.begin(), o.categories.end(),
                                       [](const std::string& c) { return c != "splitting"; });
    for (const auto& kname : o.kernels) {
        const AdjacencyKernel k = kernel_by_name(kname, o.d);
        for (double lam : o.lambdas) {
            if (!grid_work && split_done) break;
            const DeskContext c = make_desk_context(k, o.L, o.n, lam);
            if (has("martini")) append(certify_martini(c, o.A, o.B));
            if (has("extra")) append(certify_extra(c, o.A, o.B, o.ps));
            if (has("bubbles")) append(certify_bubbles(c, o.A, o.B));
            if (has("triangle")) {
                append(certify_contracted_triangle(c, 0.0));
                append(certify_contracted_triangle(c, o.B));
            }
            if (has("pi0")) append(pi0_bound_and_split(c, o.A, o.B, o.ps).certs);
            if (has("blocks"))
                for (int m : o.block_m)
                    for (BlockSide side : {BlockSide::left, BlockSide::right}) {
                        auto rep = block_composition(m, side, c.tau, c.phi, lam);
                        for (auto& cert : rep.certs) {
                            cert.case_id += "." + c.kernel + ".lambda=" + fmt_num(lam);
                            cert.kernel = c.kernel;
                        }
                        append(rep.certs);
                    }
            if (has("segments"))
                for (const auto& id : segment_case_ids())
                    for (double p : o.ps) all.push_back(appendix_segment_bounds(id, c, p, o.A, o.B));
            if (has("splitting") && !split_done && o.split_trials > 0) {
                append(certify_splitting(c, o.split_trials, o.seed));
                split_done = true;
            }
        }
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Certification& x, const Certification& y) { return x.case_id < y.case_id; });
    if (o.self_test) apply_self_test(all);
    return all;
}

}  // namespace rcm
