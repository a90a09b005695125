#include <rcm/model.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <queue>
#include <random>

using namespace rcm;

namespace {
constexpr double pi = std::numbers::pi;

// Gaussian (phi * phi)(x) in d = 2: variance-2 Gaussian density.
double gauss_conv2(double r) { return std::exp(-r * r / 4.0) / (4.0 * pi); }
}  // namespace

TEST(Poisson, ZeroIntensityIsEmpty) {
    EXPECT_TRUE(sample_poisson({2, 10.0}, 0.0, 123).empty());
}

TEST(Poisson, MeanCountMatches) {
    const BoxDomain dom{2, 10.0};
    double sum = 0.0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) sum += sample_poisson(dom, 1.0, derive_seed(99, 0, s)).size() / 2.0;
    const double mean = sum / seeds;
    // sd of the mean = sqrt(100 / 10000)
    EXPECT_NEAR(mean, 100.0, 3.0 * std::sqrt(100.0 / seeds));
}

TEST(Poisson, Deterministic) {
    const BoxDomain dom{3, 5.0};
    EXPECT_EQ(sample_poisson(dom, 2.0, 42), sample_poisson(dom, 2.0, 42));
}

TEST(Poisson, PointsInsideBox) {
    const BoxDomain dom{2, 7.0};
    for (double c : sample_poisson(dom, 3.0, 5)) {
        EXPECT_GE(c, 0.0);
        EXPECT_LT(c, 7.0);
    }
}

TEST(Poisson, BoxTooLarge) {
    try {
        sample_poisson({3, 1000.0}, 1.0, 1);
        FAIL();
    } catch (const budget_error& e) {
        EXPECT_STREQ(e.what(), "box too large");
    }
}

TEST(Poisson, ThinningKeepsSubset) {
    const BoxDomain dom{2, 10.0};
    const auto full = sample_poisson(dom, 2.0, 8);
    const auto thin = sample_poisson_thinned(dom, 1.0, 2.0, 8);
    EXPECT_LT(thin.size(), full.size());
    for (size_t i = 0; i < thin.size(); i += 2) {
        bool found = false;
        for (size_t j = 0; j < full.size() && !found; j += 2) found = thin[i] == full[j] && thin[i + 1] == full[j + 1];
        EXPECT_TRUE(found);
    }
}

TEST(Graph, FarPinnedPointsStaySeparate) {
    const auto k = make_gaussian(2);
    const BoxDomain dom{2, 40.0};
    const auto g = build_graph({1.0, 1.0, 1.0 + k.r_cut + 0.5, 1.0}, 2, k, dom, {1, 2});
    EXPECT_TRUE(g.edges.empty());
    UnionFind uf = g.partition;
    EXPECT_NE(uf.find(0), uf.find(1));
}

TEST(Graph, DiskCloseBecomesEdge) {
    const auto k = make_disk(2);
    const BoxDomain dom{2, 10.0};
    for (uint64_t s = 0; s < 50; ++s) {
        const auto g = build_graph({5.0, 5.0, 5.3, 5.1}, 2, k, dom, {s, s + 1});
        ASSERT_EQ(g.edges.size(), 1u);
    }
}

TEST(Graph, GaussianEdgeFrequencyAtZeroDistance) {
    const auto k = make_gaussian(2);
    const BoxDomain dom{2, 20.0};
    const int trials = 10000;
    int hits = 0;
    for (int s = 0; s < trials; ++s) hits += !build_graph({3.0, 3.0, 3.0, 3.0}, 2, k, dom, {1, derive_seed(5, 5, s)}).edges.empty();
    const double p = 1.0 / (2 * pi);
    EXPECT_NEAR(hits / double(trials), p, 3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(Graph, EdgeFrequencyMatchesPhi) {
    const auto k = make_gaussian(2);
    const BoxDomain dom{2, 20.0};
    const int trials = 20000;
    int hits = 0;
    for (int s = 0; s < trials; ++s) hits += !build_graph({3.0, 3.0, 4.2, 3.5}, 2, k, dom, {1, derive_seed(6, 6, s)}).edges.empty();
    const double p = eval_radial(k, std::hypot(1.2, 0.5));
    EXPECT_NEAR(hits / double(trials), p, 3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(Graph, EdgesUseMinimalImageAcrossBoundary) {
    const auto k = make_disk(2);
    const BoxDomain dom{2, 10.0};
    const auto g = build_graph({0.1, 5.0, 9.9, 5.0}, 2, k, dom, {1, 2});
    EXPECT_EQ(g.edges.size(), 1u);
}

TEST(Graph, EveryEdgeHasPositiveProbability) {
    const auto k = make_gaussian(2);
    const BoxDomain dom{2, 12.0};
    const auto pts = sample_poisson(dom, 1.5, 17);
    const auto g = build_graph(pts, 0, k, dom, {17, 18});
    for (auto [i, j] : g.edges) EXPECT_GT(eval_radial(k, std::sqrt(distance2(&pts[2 * i], &pts[2 * j], 2, dom.L))), 0.0);
}

TEST(Graph, EdgesIndependentOfEnumeration) {
    // cell list (large N) and brute force (small box) must agree pair by pair
    const auto k = make_gaussian(2);
    const BoxDomain dom{2, 30.0};
    const auto pts = sample_poisson(dom, 1.0, 3);
    const auto g = build_graph(pts, 0, k, dom, {3, 4});
    std::vector<std::pair<uint32_t, uint32_t>> brute;
    const size_t N = pts.size() / 2;
    for (size_t i = 0; i < N; ++i)
        for (size_t j = i + 1; j < N; ++j) {
            const double r2 = distance2(&pts[2 * i], &pts[2 * j], 2, dom.L);
            if (r2 <= k.r_cut * k.r_cut && edge_coin(k, i, j, r2, 4)) brute.emplace_back(i, j);
        }
    EXPECT_EQ(g.edges, brute);
}

TEST(UnionFind, MatchesBreadthFirstSearch) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + static_cast<int>(gen() % 12);
        std::vector<std::vector<int>> adj(n);
        UnionFind uf(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (gen() % 4 == 0) {
                    adj[i].push_back(j);
                    adj[j].push_back(i);
                    uf.unite(i, j);
                }
        std::vector<int> comp(n, -1);
        for (int s = 0; s < n; ++s) {
            if (comp[s] >= 0) continue;
            std::queue<int> q;
            q.push(s);
            comp[s] = s;
            while (!q.empty()) {
                const int v = q.front();
                q.pop();
                for (int w : adj[v])
                    if (comp[w] < 0) {
                        comp[w] = s;
                        q.push(w);
                    }
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ASSERT_EQ(comp[i] == comp[j], uf.find(i) == uf.find(j));
    }
}

TEST(TwoPoint, OriginIsOne) {
    const auto r = palm_two_point(make_gaussian(2), 0.5, {0.0, 0.0}, 10, {2, 10.0}, {1, 2});
    EXPECT_EQ(r.value, 1.0);
    EXPECT_EQ(r.std_error, 0.0);
}

TEST(TwoPoint, ZeroIntensityDiskIsIndicator) {
    const auto r = palm_two_point(make_disk(2), 0.0, {0.3, 0.0}, 100, {2, 8.0}, {1, 2});
    EXPECT_EQ(r.value, 1.0);
    const auto far = palm_two_point(make_disk(2), 0.0, {0.7, 0.0}, 100, {2, 8.0}, {1, 2});
    EXPECT_EQ(far.value, 0.0);
}

TEST(TwoPoint, DisplacementBeyondHalfBox) {
    try {
        palm_two_point(make_disk(2), 1.0, {5.0, 0.0}, 10, {2, 8.0}, {1, 2});
        FAIL();
    } catch (const numeric_error& e) {
        EXPECT_STREQ(e.what(), "displacement exceeds torus radius");
    }
}

TEST(TwoPoint, FirstOrderExpansionAtUnitDistance) {
    const auto k = make_gaussian(2);
    const double lam = 0.05;
    const auto r = palm_two_point(k, lam, {1.0, 0.0}, 40000, {2, 16.0}, {21, 22});
    const double first = eval_radial(k, 1.0) + lam * gauss_conv2(1.0);
    const double remainder = lam * lam / (6 * pi);
    EXPECT_NEAR(r.value, first, 3.0 * std::hypot(r.std_error, remainder));
}

TEST(TwoPoint, StandardErrorIsBinomial) {
    const auto r = palm_two_point(make_gaussian(2), 0.3, {0.5, 0.0}, 5000, {2, 12.0}, {5, 6});
    EXPECT_NEAR(r.std_error, std::sqrt(r.value * (1 - r.value) / 4999.0), 1e-12);
}

TEST(TwoPoint, MonotoneInLambdaWithCoupledClouds) {
    const auto k = make_gaussian(2);
    McOptions opt;
    opt.reference_lambda = 1.0;
    double prev = 0.0, prev_se = 0.0;
    for (double lam : {0.1, 0.4, 0.8}) {
        const auto r = palm_two_point(k, lam, {1.5, 0.0}, 4000, {2, 12.0}, {8, 9}, opt);
        EXPECT_GE(r.value + 3.0 * std::hypot(r.std_error, prev_se), prev);
        prev = r.value;
        prev_se = r.std_error;
    }
}

TEST(TwoPoint, LowerBoundAndSymmetry) {
    const auto k = make_gaussian(2);
    const BoxDomain dom{2, 12.0};
    for (double x : {0.5, 1.0, 2.0}) {
        const auto a = palm_two_point(k, 0.5, {x, 0.3}, 4000, dom, {3, 4});
        const auto b = palm_two_point(k, 0.5, {-x, -0.3}, 4000, dom, {13, 14});
        EXPECT_GE(a.value, eval_radial(k, std::hypot(x, 0.3)) - 3.0 * a.std_error);
        EXPECT_NEAR(a.value, b.value, 3.0 * std::hypot(a.std_error, b.std_error) + 1e-12);
    }
}

TEST(TwoPoint, ThreadCountDoesNotChangeResult) {
    const auto k = make_gaussian(2);
    McOptions one, many;
    many.threads = 8;
    const auto a = palm_two_point(k, 0.7, {1.0, 0.0}, 3000, {2, 10.0}, {1, 2}, one);
    const auto b = palm_two_point(k, 0.7, {1.0, 0.0}, 3000, {2, 10.0}, {1, 2}, many);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Susceptibility, ZeroIntensity) {
    const auto r = susceptibility(make_disk(2), 0.0, {2, 8.0}, 50, {1, 2});
    EXPECT_EQ(r.value, 1.0);
}

TEST(Susceptibility, SmallIntensityExpansion) {
    const double lam = 0.02;
    const auto r = susceptibility(make_disk(2), lam, {2, 8.0}, 40000, {31, 32});
    // 1 + lambda + O(lambda^2); the O(lambda^2) term is about lambda^2 * 1.6
    EXPECT_NEAR(r.value, 1.0 + lam, 3.0 * r.std_error + 2.0 * lam * lam);
}

TEST(Susceptibility, MonotoneDiskThreeDimensions) {
    double prev = 0.0, prev_se = 0.0;
    McOptions opt;
    opt.reference_lambda = 0.4;
    for (double lam : {0.1, 0.2, 0.4}) {
        const auto r = susceptibility(make_disk(3), lam, {3, 6.0}, 4000, {41, 42}, opt);
        EXPECT_GT(r.value + 3.0 * std::hypot(r.std_error, prev_se), prev);
        prev = r.value;
        prev_se = r.std_error;
    }
}

TEST(LambdaC, SubcriticalRangeHasNoTransition) {
    LambdaCOptions opt;
    opt.lambda_lo = 0.5;
    opt.lambda_hi = 1.0;
    opt.samples = 100;
    try {
        estimate_lambda_c(make_disk(2), {8.0, 16.0}, 0.1, {1, 2}, opt);
        FAIL();
    } catch (const numeric_error& e) {
        EXPECT_STREQ(e.what(), "no transition in range");
    }
}

TEST(LambdaC, UnitVolumeDiskTwoDimensions) {
    // unit-volume disk: critical mean degree 4.512 (1.436 is the unit-radius intensity)
    LambdaCOptions opt;
    opt.samples = 4000;
    const auto iv = estimate_lambda_c(make_disk(2), {8.0, 16.0}, 0.1, seeds_from_master(1), opt);
    EXPECT_LE(iv.hi - iv.lo, 0.1);
    EXPECT_LE(iv.lo, 4.512);
    EXPECT_GE(iv.hi, 4.512);
    EXPECT_GT(iv.lo, 1.0);  // mean-field lower bound
}

TEST(LambdaC, LadderNeedsTwoSizes) {
    EXPECT_THROW(estimate_lambda_c(make_disk(2), {8.0}, 0.1, {1, 2}), config_error);
}

TEST(Seeds, DeriveSeedSeparatesStreams) {
    EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 2, 0));
    EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 1, 1));
    EXPECT_EQ(pair_uniform(3, 9, 5), pair_uniform(9, 3, 5));
}
