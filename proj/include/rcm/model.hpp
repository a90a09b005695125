#pragma once

// Random connection model on a periodic box: Poisson sampling, cell-list
// graph construction, union-find clusters and Monte Carlo estimators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "rng.hpp"

namespace rcm {

struct BoxDomain {
    int d = 2;
    double L = 16.0;
    bool periodic = true;
};

struct Seeds {
    uint64_t point = 1;
    uint64_t edge = 2;
};

inline Seeds seeds_from_master(uint64_t master) { return {derive_seed(master, 11, 0), derive_seed(master, 12, 0)}; }

struct EstimateRecord {
    std::string quantity;
    double lambda = 0.0;
    std::vector<double> x;
    double value = 0.0;
    double std_error = 0.0;
    uint64_t n = 1;
    std::string config_digest;
};

inline constexpr double max_expected_points = 5e7;

class UnionFind {
public:
    explicit UnionFind(size_t n = 0) { reset(n); }
    void reset(size_t n) {
        parent_.resize(n);
        size_.assign(n, 1);
        std::iota(parent_.begin(), parent_.end(), 0u);
    }
    uint32_t find(uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }
    uint32_t component_size(uint32_t x) { return size_[find(x)]; }
    size_t size() const { return parent_.size(); }

private:
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> size_;
};

inline double minimal_image(double dx, double L) { return dx - L * std::nearbyint(dx / L); }

inline double distance2(const double* a, const double* b, int d, double L) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        const double t = minimal_image(a[k] - b[k], L);
        s += t * t;
    }
    return s;
}

// Poisson(lambda L^d) uniform points, flattened coordinates in [0, L)^d.
inline std::vector<double> sample_poisson(const BoxDomain& dom, double lambda, uint64_t seed) {
    if (lambda < 0.0 || !(dom.L > 0.0)) throw config_error("sample_poisson needs lambda >= 0 and L > 0");
    const double mean = lambda * std::pow(dom.L, dom.d);
    if (mean > max_expected_points) throw budget_error("box too large");
    std::vector<double> pts;
    if (mean == 0.0) return pts;
    std::mt19937_64 gen(seed);
    std::poisson_distribution<long long> count(mean);
    const long long N = count(gen);
    pts.resize(static_cast<size_t>(N) * dom.d);
    for (double& c : pts) c = unit_interval(gen()) * dom.L;
    return pts;
}

// Sample at intensity lambda_ref and keep each point with probability
// lambda/lambda_ref using a per-point mark. Clouds for different lambda that
// share the seed are nested, which couples estimators monotonically.
inline std::vector<double> sample_poisson_thinned(const BoxDomain& dom, double lambda, double lambda_ref,
                                                  uint64_t seed) {
    if (lambda_ref <= 0.0 || lambda >= lambda_ref) return sample_poisson(dom, lambda, seed);
    const auto full = sample_poisson(dom, lambda_ref, seed);
    const size_t N = full.size() / dom.d;
    const double keep = lambda / lambda_ref;
    const uint64_t mark_seed = derive_seed(seed, 7, 0);
    std::vector<double> pts;
    pts.reserve(full.size());
    for (size_t i = 0; i < N; ++i)
        if (unit_interval(mix64(mark_seed + i)) < keep)
            pts.insert(pts.end(), full.begin() + i * dom.d, full.begin() + (i + 1) * dom.d);
    return pts;
}

// Calls fn(i, j, r2) for every unordered pair with minimal-image distance
// <= r_cut. Uses a cell list when at least three cells fit per axis.
template <class Fn>
void for_each_close_pair(const std::vector<double>& pts, int d, double L, double r_cut, Fn&& fn) {
    const size_t N = pts.size() / d;
    const double rc2 = r_cut * r_cut;
    long m = static_cast<long>(std::floor(L / r_cut));
    // Keep the cell count proportional to the point count.
    while (m >= 3 && std::pow(double(m), d) > 8.0 * double(N) + 64.0) --m;
    if (m < 3 || N < 32) {
        for (size_t i = 0; i < N; ++i)
            for (size_t j = i + 1; j < N; ++j) {
                const double r2 = distance2(&pts[i * d], &pts[j * d], d, L);
                if (r2 <= rc2) fn(i, j, r2);
            }
        return;
    }
    const double cw = L / m;
    const size_t cells = static_cast<size_t>(std::pow(double(m), d) + 0.5);
    std::vector<uint32_t> cell_of(N), start(cells + 1, 0), order(N);
    for (size_t i = 0; i < N; ++i) {
        size_t c = 0;
        for (int a = 0; a < d; ++a) {
            long k = static_cast<long>(pts[i * d + a] / cw);
            k = std::clamp(k, 0L, m - 1);
            c = c * m + static_cast<size_t>(k);
        }
        cell_of[i] = static_cast<uint32_t>(c);
        ++start[c + 1];
    }
    for (size_t c = 0; c < cells; ++c) start[c + 1] += start[c];
    {
        std::vector<uint32_t> fill(start.begin(), start.end() - 1);
        for (size_t i = 0; i < N; ++i) order[fill[cell_of[i]]++] = static_cast<uint32_t>(i);
    }
    const size_t stencil = static_cast<size_t>(std::pow(3.0, d) + 0.5);
    std::vector<long> ci(static_cast<size_t>(d));
    for (size_t c = 0; c < cells; ++c) {
        size_t rem = c;
        for (int a = d - 1; a >= 0; --a) {
            ci[a] = static_cast<long>(rem % m);
            rem /= m;
        }
        for (size_t s = 0; s < stencil; ++s) {
            size_t srem = s, nb = 0;
            long digits[8] = {0};
            for (int a = d - 1; a >= 0; --a) {
                digits[a] = static_cast<long>(srem % 3) - 1;
                srem /= 3;
            }
            for (int a = 0; a < d; ++a) nb = nb * m + static_cast<size_t>(((ci[a] + digits[a]) % m + m) % m);
            for (uint32_t p = start[c]; p < start[c + 1]; ++p) {
                const uint32_t i = order[p];
                for (uint32_t q = start[nb]; q < start[nb + 1]; ++q) {
                    const uint32_t j = order[q];
                    if (j <= i) continue;
                    const double r2 = distance2(&pts[size_t(i) * d], &pts[size_t(j) * d], d, L);
                    if (r2 <= rc2) fn(i, j, r2);
                }
            }
        }
    }
}

// Decides whether {i, j} is an edge given squared distance r2.
inline bool edge_coin(const AdjacencyKernel& k, uint64_t i, uint64_t j, double r2, uint64_t edge_seed) {
    const double p = eval_radial(k, std::sqrt(r2));
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return pair_uniform(i, j, edge_seed) < p;
}

struct GraphSample {
    int d = 2;
    std::vector<double> points;  // flattened; pinned points come first
    std::vector<uint32_t> pinned;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    UnionFind partition;
    Seeds seeds;
    size_t size() const { return points.size() / d; }
};

inline GraphSample build_graph(std::vector<double> points, size_t n_pinned, const AdjacencyKernel& k,
                               const BoxDomain& dom, Seeds seeds) {
    if (k.d != dom.d) throw config_error("kernel and box dimensions differ");
    for (double c : points)
        if (!(c >= 0.0 && c < dom.L)) throw config_error("point outside the box");
    GraphSample g;
    g.d = dom.d;
    g.points = std::move(points);
    g.seeds = seeds;
    for (size_t i = 0; i < n_pinned; ++i) g.pinned.push_back(static_cast<uint32_t>(i));
    g.partition.reset(g.size());
    for_each_close_pair(g.points, dom.d, dom.L, k.r_cut, [&](size_t i, size_t j, double r2) {
        if (edge_coin(k, i, j, r2, seeds.edge)) {
            g.edges.emplace_back(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
            g.partition.unite(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
        }
    });
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

// Runs fn(begin, end, slot) over [0, n) split into contiguous blocks.
template <class Fn>
void parallel_blocks(uint64_t n, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        fn(uint64_t{0}, n, 0);
        return;
    }
    const uint64_t T = std::min<uint64_t>(static_cast<uint64_t>(threads), n);
    std::vector<std::thread> pool;
    for (uint64_t t = 0; t < T; ++t) {
        const uint64_t b = n * t / T, e = n * (t + 1) / T;
        pool.emplace_back([&fn, b, e, t] { fn(b, e, static_cast<int>(t)); });
    }
    for (auto& th : pool) th.join();
}

struct McOptions {
    int threads = 1;
    double reference_lambda = 0.0;  // > lambda: sample nested clouds (coupling)
};

inline double wrap_coordinate(double x, double L) {
    double y = std::fmod(x, L);
    if (y < 0.0) y += L;
    return y >= L ? 0.0 : y;
}

// Builds the Palm cloud of sample `index` with the given pinned points and
// returns its union-find partition.
inline void palm_partition(const AdjacencyKernel& k, double lambda, const BoxDomain& dom, Seeds seeds,
                           uint64_t index, const std::vector<double>& pinned, const McOptions& opt,
                           std::vector<double>& pts, UnionFind& uf) {
    const uint64_t pseed = derive_seed(seeds.point, 1, index);
    const uint64_t eseed = derive_seed(seeds.edge, 2, index);
    auto cloud = sample_poisson_thinned(dom, lambda, opt.reference_lambda, pseed);
    pts.assign(pinned.begin(), pinned.end());
    pts.insert(pts.end(), cloud.begin(), cloud.end());
    uf.reset(pts.size() / dom.d);
    for_each_close_pair(pts, dom.d, dom.L, k.r_cut, [&](size_t i, size_t j, double r2) {
        if (edge_coin(k, i, j, r2, eseed)) uf.unite(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
    });
}

inline void check_samples(uint64_t n) {
    if (n < 1) throw config_error("need at least one sample");
}

// P(0 <-> x) in the Palm graph with 0 and x inserted.
inline EstimateRecord palm_two_point(const AdjacencyKernel& k, double lambda, const std::vector<double>& x,
                                     uint64_t n_samples, const BoxDomain& dom, Seeds seeds,
                                     const McOptions& opt = {}) {
    check_samples(n_samples);
    if (static_cast<int>(x.size()) != dom.d || k.d != dom.d) throw config_error("displacement dimension mismatch");
    if (lambda < 0.0) throw config_error("lambda must be nonnegative");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    if (std::sqrt(r2) >= dom.L / 2.0) throw numeric_error("displacement exceeds torus radius");
    EstimateRecord rec;
    rec.quantity = "tau";
    rec.lambda = lambda;
    rec.x = x;
    rec.n = n_samples;
    if (r2 == 0.0) {
        rec.value = 1.0;
        return rec;
    }
    std::vector<double> pinned(static_cast<size_t>(2 * dom.d), 0.0);
    for (int a = 0; a < dom.d; ++a) pinned[dom.d + a] = wrap_coordinate(x[a], dom.L);
    std::vector<uint64_t> hits(static_cast<size_t>(std::max(1, opt.threads)), 0);
    parallel_blocks(n_samples, opt.threads, [&](uint64_t b, uint64_t e, int slot) {
        std::vector<double> pts;
        UnionFind uf;
        uint64_t local = 0;
        for (uint64_t i = b; i < e; ++i) {
            palm_partition(k, lambda, dom, seeds, i, pinned, opt, pts, uf);
            local += uf.find(0) == uf.find(1);
        }
        hits[slot] = local;
    });
    const uint64_t total = std::accumulate(hits.begin(), hits.end(), uint64_t{0});
    const double nn = static_cast<double>(n_samples);
    rec.value = total / nn;
    if (n_samples > 1) {
        const double var = (total - nn * rec.value * rec.value) / (nn - 1.0);
        rec.std_error = std::sqrt(std::max(0.0, var) / nn);
    }
    return rec;
}

// Expected size of the cluster of a point inserted at the origin.
inline EstimateRecord susceptibility(const AdjacencyKernel& k, double lambda, const BoxDomain& dom,
                                     uint64_t n_samples, Seeds seeds, const McOptions& opt = {}) {
    check_samples(n_samples);
    if (lambda < 0.0) throw config_error("lambda must be nonnegative");
    EstimateRecord rec;
    rec.quantity = "chi";
    rec.lambda = lambda;
    rec.n = n_samples;
    const std::vector<double> pinned(static_cast<size_t>(dom.d), 0.0);
    const size_t slots = static_cast<size_t>(std::max(1, opt.threads));
    std::vector<uint64_t> sum(slots, 0), sumsq(slots, 0);
    parallel_blocks(n_samples, opt.threads, [&](uint64_t b, uint64_t e, int slot) {
        std::vector<double> pts;
        UnionFind uf;
        uint64_t s = 0, s2 = 0;
        for (uint64_t i = b; i < e; ++i) {
            palm_partition(k, lambda, dom, seeds, i, pinned, opt, pts, uf);
            const uint64_t c = uf.component_size(0);
            s += c;
            s2 += c * c;
        }
        sum[slot] = s;
        sumsq[slot] = s2;
    });
    const double S = static_cast<double>(std::accumulate(sum.begin(), sum.end(), uint64_t{0}));
    const double S2 = static_cast<double>(std::accumulate(sumsq.begin(), sumsq.end(), uint64_t{0}));
    const double nn = static_cast<double>(n_samples);
    rec.value = S / nn;
    if (n_samples > 1) rec.std_error = std::sqrt(std::max(0.0, (S2 - S * S / nn) / (nn - 1.0)) / nn);
    return rec;
}

struct LargestClusterStats {
    double mean_fraction = 0.0;  // <f>, f = largest cluster size / point count
    double mean_square = 0.0;    // <f^2>
    // <f^2>/<f>^2: dimensionless, so finite-size curves cross near lambda_c
    double ratio() const { return mean_fraction > 0.0 ? mean_square / (mean_fraction * mean_fraction) : 0.0; }
};

inline LargestClusterStats largest_cluster_stats(const AdjacencyKernel& k, double lambda, const BoxDomain& dom,
                                                 uint64_t n_samples, Seeds seeds, const McOptions& opt = {}) {
    check_samples(n_samples);
    std::vector<double> per_sample(n_samples, 0.0);
    parallel_blocks(n_samples, opt.threads, [&](uint64_t b, uint64_t e, int) {
        std::vector<double> pts;
        UnionFind uf;
        for (uint64_t i = b; i < e; ++i) {
            palm_partition(k, lambda, dom, seeds, i, {}, opt, pts, uf);
            const size_t N = uf.size();
            uint32_t best = 0;
            for (size_t v = 0; v < N; ++v)
                if (uf.find(static_cast<uint32_t>(v)) == v)
                    best = std::max(best, uf.component_size(static_cast<uint32_t>(v)));
            per_sample[i] = N ? double(best) / double(N) : 0.0;
        }
    });
    LargestClusterStats st;
    for (double f : per_sample) {  // fixed order keeps the sum thread-independent
        st.mean_fraction += f;
        st.mean_square += f * f;
    }
    st.mean_fraction /= static_cast<double>(n_samples);
    st.mean_square /= static_cast<double>(n_samples);
    return st;
}

struct LambdaCOptions {
    double lambda_lo = 3.5;
    double lambda_hi = 5.5;
    uint64_t samples = 1000;
    int threads = 1;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    int evaluations = 0;
};

// Bisection on the crossing of the largest-cluster ratio <f^2>/<f>^2 for the
// smallest and largest box of the ladder. Below the transition the larger box
// fluctuates more; above it both ratios tend to 1 with the larger box first.
// Clouds are nested across lambda (common random numbers).
inline Interval estimate_lambda_c(const AdjacencyKernel& k, std::vector<double> ladder, double tolerance,
                                  Seeds seeds, const LambdaCOptions& opt = {}) {
    if (ladder.size() < 2) throw config_error("lambda-c needs at least two box sizes");
    if (!(tolerance > 0.0)) throw config_error("tolerance must be positive");
    if (!(opt.lambda_lo < opt.lambda_hi) || opt.lambda_lo < 0.0) throw config_error("invalid lambda range");
    std::sort(ladder.begin(), ladder.end());
    const BoxDomain small{k.d, ladder.front()}, large{k.d, ladder.back()};
    McOptions mc;
    mc.threads = opt.threads;
    mc.reference_lambda = opt.lambda_hi;
    Interval out;
    auto diff = [&](double lam) {
        ++out.evaluations;
        return largest_cluster_stats(k, lam, large, opt.samples, seeds, mc).ratio() -
               largest_cluster_stats(k, lam, small, opt.samples, seeds, mc).ratio();
    };
    double lo = opt.lambda_lo, hi = opt.lambda_hi;
    const double dlo = diff(lo), dhi = diff(hi);
    if (!(dlo > 0.0 && dhi < 0.0)) throw numeric_error("no transition in range");
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) > 0.0 ? lo : hi) = mid;
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

}  // namespace rcm
