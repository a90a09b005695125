#include <rcm/diagrams.hpp>
#include <rcm/oz.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rcm;

namespace {
constexpr double pi = std::numbers::pi;

GridField random_even(int d, int n, double h, uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GridField f(d, n, h);
    for (double& x : f.v) x = u(gen);
    return scaled(add(f, reflected(f)), 0.5);
}

GridField gaussian_field(int d, double L, int n) { return discretize(make_gaussian(d), L, n); }

double T_of(const GridField& f, size_t a, size_t b) { return f.v[offset_index(a, b, f.d, f.n, -1)]; }

double Y_brute(double a, const GridField& tau, double lambda, size_t x, size_t y) {
    const GridField ta = weighted(tau, a);
    const size_t N = tau.size();
    double s = 0.0;
    for (size_t z1 = 0; z1 < N; ++z1)
        for (size_t z2 = 0; z2 < N; ++z2) {
            const double w12 = tau.v[z1] * T_of(ta, z2, z1) * T_of(tau, x, z2);
            if (w12 == 0.0) continue;
            for (size_t z3 = 0; z3 < N; ++z3) s += w12 * T_of(tau, z3, z1) * T_of(tau, z2, z3) * T_of(tau, y, z3);
        }
    return std::pow(lambda, 3) * s * std::pow(tau.cell(), 3);
}
}  // namespace

// ---- tau~ and edges ----------------------------------------------------------

TEST(TildeTau, Examples) {
    const auto phi = gaussian_field(2, 16.0, 32);
    const GridField zero(2, 32, phi.h);
    EXPECT_EQ(tilde_tau(zero, phi, 0.7).v, phi.v);
    EXPECT_EQ(tilde_tau(phi, phi, 0.0).v, phi.v);
    const auto t = tilde_tau(phi, phi, 1.0);
    const auto expect = add(phi, convolve(phi, phi));
    for (size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.v[i], expect.v[i], 1e-15);
}

TEST(EdgeSup, GaussianPeakAndWeightedMaximum) {
    // h = 1 puts the point (1, 1) at radius sqrt 2, where r^2 phi is maximal
    const auto phi = gaussian_field(2, 16.0, 16);
    // unit-mass renormalization on a grid this coarse shifts values by ~1e-8
    EXPECT_NEAR(edge_sup({phi, 0.0, false}, inf), 1.0 / (2 * pi), 1e-7);
    EXPECT_NEAR(edge_sup({phi, 2.0, false}, inf), 2.0 * std::exp(-1.0) / (2 * pi), 1e-7);
    EXPECT_NEAR(edge_sup({phi, 2.0, false}, inf), 0.11709, 1e-5);
    EXPECT_EQ(edge_sup({GridField(2, 16, 1.0), 2.0, false}, inf), 0.0);
}

TEST(EdgeSup, ContractibleUnweightedDiverges) {
    const auto phi = gaussian_field(2, 16.0, 16);
    try {
        edge_sup({phi, 0.0, true}, 1.0);
        FAIL();
    } catch (const numeric_error& e) {
        EXPECT_STREQ(e.what(), "delta-divergent");
    }
    EXPECT_NO_THROW(edge_sup({phi, 1.0, true}, 1.0));
}

// ---- bubbles -----------------------------------------------------------------------

TEST(Bubble, GaussianOpenBubbleAtOrigin) {
    const auto phi = gaussian_field(2, 16.0, 64);
    const WeightedEdge e{phi, 0.0, false};
    EXPECT_NEAR(bubble_W(e, e, 1.0, 0), 1.0 / (4 * pi), 1e-9);
    EXPECT_NEAR(W_bar(e, e, 1.0).value, 1.0 / (4 * pi), 1e-9);
}

TEST(Bubble, SupBoundedByEdgeProduct) {
    const auto tau = random_even(2, 8, 0.5, 3);
    const WeightedEdge a{tau, 1.0, false}, b{tau, 2.0, false};
    const double bound = edge_sup(a, inf) * edge_sup(b, inf);
    for (size_t u = 0; u < tau.size(); ++u) EXPECT_LE(bubble_W(a, b, inf, u), bound * (1 + 1e-12));
}

TEST(Bubble, HolderInterpolation) {
    for (uint64_t s = 0; s < 5; ++s) {
        const auto f = random_even(2, 8, 0.5, s), g = random_even(2, 8, 0.5, s + 10);
        const WeightedEdge a{f, 0.5, false}, b{g, 1.0, false};
        for (size_t u : {size_t{0}, size_t{5}, size_t{17}})
            EXPECT_LE(bubble_W(a, b, 2.0, u), std::sqrt(bubble_W(a, b, 1.0, u) * bubble_W(a, b, inf, u)) * (1 + 1e-12));
    }
}

TEST(Bubble, OneNormIsConvolution) {
    const auto f = random_even(2, 8, 0.5, 1), g = random_even(2, 8, 0.5, 2);
    const GridField c = convolve(reflected(f), g);
    for (size_t u = 0; u < f.size(); ++u) EXPECT_NEAR(bubble_direct(f, g, 1.0, u), c.v[u], 1e-12);
}

TEST(Bubble, FftSupEqualsDirectScan) {
    const auto f = random_even(2, 8, 0.5, 4), g = random_even(2, 8, 0.5, 5);
    for (double p : {1.0, 2.0, inf, 3.0}) {
        double best = 0.0;
        for (size_t u = 0; u < f.size(); ++u) best = std::max(best, bubble_direct(f, g, p, u));
        EXPECT_NEAR(bubble_sup(f, g, p).value, best, 1e-12 * best) << p;
    }
}

TEST(Bubble, CoarseScanReportsResolution) {
    const auto f = random_even(2, 8, 0.5, 6);
    const auto r = bubble_sup(f, f, 3.0, 2);
    EXPECT_EQ(r.scan_resolution, 1.0);
    EXPECT_LE(r.value, bubble_sup(f, f, 3.0, 1).value);
}

TEST(Bubble, RelabelingSymmetry) {
    const auto tau = gaussian_field(2, 8.0, 16);
    const WeightedEdge a{tau, 1.0, false}, b{tau, 2.0, false};
    for (double p : {1.0, 2.0, inf}) EXPECT_NEAR(W_bar(a, b, p).value, W_bar(b, a, p).value, 1e-12);
}

TEST(Bubble, ContractibleEdgesRejected) {
    const auto tau = gaussian_field(2, 8.0, 16);
    EXPECT_THROW(bubble_W({tau, 0.0, true}, {tau, 0.0, false}, 1.0, 0), config_error);
}

// ---- triangles and squares -----------------------------------------------------------

TEST(Triangle, ZeroField) { EXPECT_EQ(triangle_T(0.0, GridField(2, 16, 0.5), 1.0).T, 0.0); }

TEST(Triangle, GaussianVarianceAddition) {
    const auto phi = gaussian_field(2, 16.0, 64);
    const auto r = triangle_T(0.0, phi, 1.0);
    EXPECT_NEAR(r.T, 1.0 / (6 * pi), 1e-9);
    EXPECT_NEAR(r.T, 0.05305, 1e-5);
    EXPECT_NEAR(r.B1_00, 1.0 / (4 * pi), 1e-9);
}

TEST(Square, GaussianVarianceAddition) {
    const auto phi = gaussian_field(2, 16.0, 64);
    EXPECT_NEAR(square_S(phi, 1.0), 1.0 / (8 * pi), 1e-9);
    EXPECT_EQ(square_S(GridField(2, 16, 0.5), 1.0), 0.0);
}

TEST(Multilinearity, TriangleSquareBubbleY) {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> U(0.3, 2.5);
    const auto tau = random_even(2, 8, 0.5, 12);
    for (int rep = 0; rep < 3; ++rep) {
        const double c = U(gen);
        const auto ct = scaled(tau, c);
        EXPECT_NEAR(triangle_T(1.0, ct, 0.7).T, std::pow(c, 3) * triangle_T(1.0, tau, 0.7).T,
                    1e-12 * std::pow(c, 3) * triangle_T(1.0, tau, 0.7).T);
        EXPECT_NEAR(square_S(ct, 0.7), std::pow(c, 4) * square_S(tau, 0.7), 1e-12 * std::pow(c, 4) * square_S(tau, 0.7));
        EXPECT_NEAR(bubble_sup(ct, ct, 2.0).value, c * c * bubble_sup(tau, tau, 2.0).value,
                    1e-12 * c * c * bubble_sup(tau, tau, 2.0).value);
        const double y = Y_diagram(1.0, tau, 0.7, 3, 9), yc = Y_diagram(1.0, ct, 0.7, 3, 9);
        EXPECT_NEAR(yc, std::pow(c, 6) * y, 1e-10 * std::pow(c, 6) * y);
        const double h = H_diagram(1.0, 1.0, 2.0, tau, 0.7, 4, 7), hc = H_diagram(1.0, 1.0, 2.0, ct, 0.7, 4, 7);
        EXPECT_NEAR(hc, std::pow(c, 8) * h, 1e-10 * std::pow(c, 8) * h);
    }
}

TEST(Triangle, FftEqualsDirectSum) {
    const auto tau = random_even(2, 8, 0.5, 21);
    const double b = 1.5, lam = 0.8;
    const auto tb = weighted(tau, b);
    const size_t N = tau.size();
    double best = 0.0;
    for (size_t u = 0; u < N; ++u) {
        double s = 0.0;
        for (size_t y = 0; y < N; ++y)
            for (size_t z = 0; z < N; ++z) s += tb.v[y] * T_of(tau, z, y) * T_of(tau, u, z);
        best = std::max(best, lam * lam * s * tau.cell() * tau.cell());
    }
    EXPECT_NEAR(triangle_T(b, tau, lam).T, best, 1e-12 * best);
}

// ---- Y and H -----------------------------------------------------------------------------

TEST(YDiagram, FftEqualsNestedDirectSums) {
    const auto tau = random_even(2, 8, 0.5, 33);
    const PairField Y = Y_field(1.0, tau, 0.9);
    std::mt19937_64 gen(4);
    for (int k = 0; k < 20; ++k) {
        const size_t x = gen() % tau.size(), y = gen() % tau.size();
        const double brute = Y_brute(1.0, tau, 0.9, x, y);
        EXPECT_NEAR(Y.at(x, y), brute, 1e-9 * std::max(1.0, std::abs(brute)));
    }
}

TEST(YDiagram, ZeroField) { EXPECT_EQ(Y_diagram(1.0, GridField(2, 8, 0.5), 1.0, 0, 3), 0.0); }

TEST(HDiagram, MatchesDirectIntegral) {
    const auto tau = random_even(2, 8, 0.5, 44);
    const double lam = 0.6, b = 1.0;
    const PairField Y = Y_field(2.0, tau, lam);
    const auto tb = weighted(tau, b);
    const size_t N = tau.size();
    for (auto [u, v] : {std::pair<size_t, size_t>{0, 0}, {5, 9}, {27, 63}}) {
        for (double p : {1.0, 2.0, inf}) {
            std::vector<double> line(N);
            for (size_t x = 0; x < N; ++x) {
                const size_t w = offset_index(v, x, 2, 8, +1);
                double s = 0.0;
                for (size_t y = 0; y < N; ++y) s += Y.at(x, y) * T_of(tau, y, u) * T_of(tb, w, y);
                line[x] = lam * s * tau.cell();
            }
            const double direct = lp_norm(line.data(), N, p, tau.cell());
            EXPECT_NEAR(H_diagram(2.0, b, p, tau, lam, u, v), direct, 1e-10 * std::max(1.0, direct));
        }
    }
}

TEST(HDiagram, SupReportCoversAllOffsets) {
    const auto tau = random_even(2, 8, 0.5, 45);
    const auto rep = H_sup(1.0, 1.0, {1.0, inf}, tau, 0.5);
    EXPECT_EQ(rep.scan_resolution, 0.5);
    EXPECT_NEAR(rep.value[0], H_diagram(1.0, 1.0, 1.0, tau, 0.5, rep.arg_u[0], rep.arg_v[0]), 1e-12 * rep.value[0]);
    for (size_t u : {size_t{0}, size_t{13}})
        for (size_t v : {size_t{2}, size_t{40}}) EXPECT_LE(H_diagram(1.0, 1.0, inf, tau, 0.5, u, v), rep.value[1] * (1 + 1e-12));
}

TEST(HDiagram, BudgetExceeded) {
    try {
        Y_field(0.0, GridField(3, 32, 0.5), 1.0);
        FAIL();
    } catch (const budget_error& e) {
        EXPECT_STREQ(e.what(), "grid too large for two-point diagram");
    }
}

// ---- composites --------------------------------------------------------------------------

TEST(Composite, ZeroTau) {
    GridField phi(2, 16, 0.5);
    phi.v[0] = 1.0 / phi.cell();  // unit L1 mass
    const auto r = composite_UV(phi, GridField(2, 16, 0.5), 1.0);
    EXPECT_EQ(r.triangle, 0.0);
    EXPECT_EQ(r.triangle_oo, 1.0);
    EXPECT_NEAR(r.U, 2.0, 1e-15);
    EXPECT_EQ(r.V, 0.0);
    EXPECT_TRUE(r.V_below_one);
}

TEST(Composite, GaussianPlugIn) {
    const auto phi = gaussian_field(2, 16.0, 64);
    const double lam = 0.5;
    const auto r = composite_UV(phi, phi, lam);
    const double tri = 0.25 / (6 * pi);
    const double too = tri + 0.5 / (4 * pi) + 1.0;
    const double U = tri * too + too * too + 0.5;
    EXPECT_NEAR(r.triangle, tri, 1e-10);
    EXPECT_NEAR(r.triangle_oo, too, 1e-10);
    EXPECT_NEAR(r.U, U, 1e-9);
    EXPECT_NEAR(r.V, 4.0 * std::sqrt(tri * too * U), 1e-9);
}

TEST(Composite, TriangleScalesCubically) {
    const auto phi = gaussian_field(2, 16.0, 32);
    const auto tau = random_even(2, 32, 0.5, 5);
    const double c = 1.7;
    EXPECT_NEAR(composite_UV(phi, scaled(tau, c), 0.4).triangle, std::pow(c, 3) * composite_UV(phi, tau, 0.4).triangle,
                1e-12 * std::pow(c, 3) * composite_UV(phi, tau, 0.4).triangle);
}

// ---- psi blocks ---------------------------------------------------------------------------

TEST(Psi, DeltaBlockAtCoincidentPoints) {
    const auto phi = discretize(make_disk(2), 8.0, 32);
    const double lam = 0.8;
    const auto v = psi_block(PsiKind::psi0_3, phi, phi, lam, {5, 5, 5});
    EXPECT_NEAR(v.delta1, phi.v[0] / lam, 1e-15);
    EXPECT_DOUBLE_EQ(phi.v[0], 1.0 / phi.raw_mass);  // indicator at 0 after renormalization
    EXPECT_EQ(psi_block(PsiKind::psi0_3, phi, phi, lam, {5, 6, 7}).delta1, 0.0);
}

TEST(Psi, ProductBlockAtOrigin) {
    const auto phi = gaussian_field(2, 16.0, 32);
    const auto v = psi_block(PsiKind::psi0_1, phi, phi, 0.5, {0, 0, 0});
    EXPECT_NEAR(v.smooth, std::pow(2 * pi, -3.0), 1e-12);
}

TEST(Psi, ThirdBlocksCoincide) {
    const auto tau = random_even(2, 8, 0.5, 8);
    for (std::vector<size_t> pts : {std::vector<size_t>{1, 2, 3, 4}, {0, 9, 33, 63}})
        EXPECT_EQ(psi_block(PsiKind::psi_3, tau, tau, 0.5, pts).smooth,
                  psi_block(PsiKind::psibar_3, tau, tau, 0.5, pts).smooth);
}

TEST(Psi, FirstBlockMatchesDirectSum) {
    const auto tau = random_even(2, 4, 0.5, 81);
    const double lam = 0.7, li = 1 / lam, c = tau.cell();
    const size_t N = tau.size();
    const size_t w = 1, u = 6, r = 11, s = 14;
    double inner = 0.0;  // sum over t, z with the contracted t = s term
    for (size_t t = 0; t < N; ++t)
        for (size_t z = 0; z < N; ++z)
            inner += T_of(tau, t, w) * T_of(tau, t, s) * T_of(tau, z, t) * T_of(tau, u, z) * T_of(tau, z, r) * c * c;
    double contracted = 0.0;
    for (size_t z = 0; z < N; ++z) contracted += T_of(tau, z, s) * T_of(tau, u, z) * T_of(tau, z, r) * c;
    const double expect = T_of(tau, w, u) * lam * lam * (inner + li * T_of(tau, s, w) * contracted);
    EXPECT_NEAR(psi_block(PsiKind::psi_1, tau, tau, lam, {w, u, r, s}).smooth, expect, 1e-12 * expect);
}

TEST(Psi, UnknownVariantAndArity) {
    EXPECT_THROW(parse_psi_kind("psi_9"), config_error);
    EXPECT_EQ(parse_psi_kind("psibar_2"), PsiKind::psibar_2);
    const auto tau = random_even(2, 4, 0.5, 1);
    EXPECT_THROW(psi_block(PsiKind::psi_1, tau, tau, 0.5, {0, 1, 2}), config_error);
}

// ---- block compositions ---------------------------------------------------------------------

namespace {
// lambda^2 int psi(w, u; r, s) h(w, u) dw du from point evaluations; delta
// factors integrate out by pinning the constrained vertex.
PairField adjoint_by_points(const PairField& h, const GridField& tau, const GridField& phi, double lam, bool bar) {
    const size_t N = h.N;
    const double c = h.cell();
    PairField out(h.d, h.n, h.h);
    const std::vector<PsiKind> kinds = bar ? std::vector{PsiKind::psibar_1, PsiKind::psibar_2, PsiKind::psibar_3,
                                                         PsiKind::psibar_4}
                                           : std::vector{PsiKind::psi_1, PsiKind::psi_2, PsiKind::psi_3, PsiKind::psi_4};
    for (size_t r = 0; r < N; ++r)
        for (size_t s = 0; s < N; ++s) {
            double acc = 0.0;
            for (size_t w = 0; w < N; ++w)
                for (size_t u = 0; u < N; ++u)
                    for (PsiKind k : kinds) {
                        const auto v = psi_block(k, tau, phi, lam, {w, u, r, s});
                        acc += v.smooth * h.at(w, u) * c * c;
                        // delta(w - s) for psi, delta(u - r) for psibar_4
                        if (v.delta1 != 0.0) acc += v.delta1 * h.at(w, u) * c;
                    }
            out.at(r, s) = lam * lam * acc;
        }
    return out;
}

double pairing_by_points(const PairField& h, const GridField& tau, const GridField& phi, double lam, bool right) {
    const size_t N = h.N;
    const double c = h.cell();
    double acc = 0.0;
    const std::vector<PsiKind> kinds = right ? std::vector{PsiKind::psibar0_1, PsiKind::psibar0_2}
                                             : std::vector{PsiKind::psi0_1, PsiKind::psi0_2, PsiKind::psi0_3};
    for (size_t w = 0; w < N; ++w)
        for (size_t u = 0; u < N; ++u)
            for (PsiKind k : kinds) {
                const auto v = psi_block(k, tau, phi, lam, {w, u, 0});
                acc += v.smooth * h.at(w, u) * c * c + v.delta1 * h.at(w, u) * c + v.delta2 * h.at(w, u);
            }
    return lam * lam * acc;
}
}  // namespace

TEST(Blocks, AdjointMatchesPointEvaluations) {
    const auto tau = random_even(2, 4, 0.6, 90);
    const auto phi = random_even(2, 4, 0.6, 91);
    const double lam = 0.6;
    const BlockEngine engine(tau, phi, lam);
    const PairField one(2, 4, 0.6, 1.0);
    for (bool bar : {false, true}) {
        const PairField a = engine.apply_adjoint(one, bar ? BlockSide::right : BlockSide::left);
        const PairField b = adjoint_by_points(one, tau, phi, lam, bar);
        for (size_t i = 0; i < a.v.size(); ++i) ASSERT_NEAR(a.v[i], b.v[i], 1e-10 * std::abs(b.v[i])) << bar << " " << i;
        for (bool right : {false, true})
            EXPECT_NEAR(engine.pair_with_start(b, right ? BlockSide::right : BlockSide::left),
                        pairing_by_points(b, tau, phi, lam, right), 1e-10 * pairing_by_points(b, tau, phi, lam, right));
    }
}

TEST(Blocks, ZeroSegmentsClosedForm) {
    const auto phi = gaussian_field(2, 8.0, 16);
    const double lam = 0.5;
    const auto tau = scaled(oz_deconvolve(form_J(phi, std::nullopt, lam)).lambda_tau, 1 / lam);
    const SpectralField t = fft(tau);
    const double t3 = convolve_chain(tau, {{&t, 0.0}, {&t, 0.0}}).v[0];
    const BlockEngine e(tau, phi, lam);
    EXPECT_NEAR(e.value(0, BlockSide::left), 2 * lam * lam * t3 + lam * weighted_norm(phi, 0.0, 1.0), 1e-12);
    EXPECT_NEAR(e.value(0, BlockSide::right), lam * lam * t3 + 1.0, 1e-12);
}

TEST(Blocks, ZeroTauKeepsOnlyDeltaTerms) {
    const auto phi = gaussian_field(2, 8.0, 16);
    const GridField zero(2, 16, phi.h);
    const BlockEngine e(zero, phi, 0.4);
    EXPECT_NEAR(e.value(0, BlockSide::left), 0.4, 1e-12);
    EXPECT_NEAR(e.value(0, BlockSide::right), 1.0, 1e-15);
    EXPECT_EQ(e.value(1, BlockSide::left), 0.0);
}

TEST(Blocks, OneSegmentClosedForm) {
    const auto phi = gaussian_field(2, 8.0, 16);
    const double lam = 0.7, li = 1 / lam;
    const auto tau = scaled(oz_deconvolve(form_J(phi, std::nullopt, lam)).lambda_tau, 1 / lam);
    const auto conv = [](const GridField& a, const GridField& b) { return convolve(a, b); };
    const GridField tt = conv(tau, tau), t3 = conv(tt, tau);
    const GridField q = multiply(tau, t3), e = multiply(tau, tt);
    GridField g = add(scaled(conv(conv(tau, q), tau), lam * lam), conv(q, tau), lam);
    g = add(g, conv(e, tau));
    g = add(g, conv(conv(tau, e), tau), 2 * lam);
    g = add(g, conv(conv(tt, e), tau), lam * lam);
    g = add(g, t3);
    g = add(g, tt, li);
    const double smooth = conv(conv(multiply(g, tau), tau), tau).v[0];
    double ge = 0.0, gphi = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        ge += g.v[i] * e.v[i];
        gphi += g.v[i] * phi.v[i];
    }
    ge *= g.cell();
    gphi *= g.cell();
    const double l4 = std::pow(lam, 4);
    const BlockEngine engine(tau, phi, lam);
    EXPECT_NEAR(engine.value(1, BlockSide::left), l4 * (smooth + ge + li * gphi), 1e-10);
    EXPECT_NEAR(engine.value(1, BlockSide::right), l4 * (smooth + li * li * g.v[0]), 1e-10);
}

TEST(Blocks, CompositionReportCertifies) {
    const auto phi = gaussian_field(2, 8.0, 16);
    const double lam = 0.5;
    const auto tau = scaled(oz_deconvolve(form_J(phi, std::nullopt, lam)).lambda_tau, 1 / lam);
    for (int m : {0, 1})
        for (BlockSide side : {BlockSide::left, BlockSide::right}) {
            const auto rep = block_composition(m, side, tau, phi, lam);
            ASSERT_EQ(rep.certs.size(), 1u);
            EXPECT_TRUE(rep.certs[0].holds) << rep.certs[0].case_id;
            EXPECT_EQ(rep.certs[0].lhs, rep.value);
        }
    EXPECT_THROW(BlockEngine(tau, phi, lam).value(-1, BlockSide::left), config_error);
}

// ---- contraction consistency and splitting ----------------------------------------------------

TEST(Contraction, AnalyticDeltaMatchesNarrowGaussianLimit) {
    const auto f = gaussian_field(2, 16.0, 256);
    const SpectralField fs = fft(f);
    const double lam = 0.5;
    // lambda^2 || f * f * f° || with f° = delta / lambda + f
    const double analytic = lam * lam * max_abs(convolve_chain(f, {{&fs, 0.0}, {&fs, 1 / lam}}).v);
    double prev_err = inf;
    for (double width : {0.4, 0.2, 0.1}) {
        GridField g = discretize(
            [&](const double* x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2 * width * width)); }, 2, 16.0, 256);
        double mass = 0.0;
        for (double x : g.v) mass += x;
        g = scaled(g, 1.0 / (mass * g.cell() * lam));
        const auto spike = add(g, f);
        const double approx = lam * lam * max_abs(convolve(convolve(f, f), spike).v);
        const double err = std::abs(approx - analytic);
        EXPECT_LT(err, 0.05 * analytic * width / 0.1);
        EXPECT_LT(err, prev_err);
        prev_err = err;
    }
}

TEST(Splitting, RandomChains) {
    for (int a = 1; a <= 3; ++a) {
        const auto r = splitting_check(3, a, 6, 100000, 1000 + a);
        EXPECT_EQ(r.violations, 0u);
        EXPECT_LE(r.worst_ratio, 1.0);
        EXPECT_GT(r.worst_ratio, 0.0);
    }
}
