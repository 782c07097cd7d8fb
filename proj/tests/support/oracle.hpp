#pragma once

// Brute-force reference computations written straight from the model
// definitions. Nothing here calls into the library's numerical code, so the
// tests compare two independent implementations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <gbppm/cohesion.hpp>
#include <gbppm/dataset.hpp>
#include <gbppm/partition.hpp>

namespace oracle {

using Labels = std::vector<std::size_t>;
using Rows = std::vector<std::vector<double>>;

inline Rows rows_of(const gbppm::Dataset& data) {
    Rows r(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) r[i].assign(data.row(i).begin(), data.row(i).end());
    return r;
}

inline std::vector<std::vector<std::size_t>> blocks_of(const Labels& c) {
    const std::size_t K = *std::max_element(c.begin(), c.end()) + 1;
    std::vector<std::vector<std::size_t>> b(K);
    for (std::size_t i = 0; i < c.size(); ++i) b[c[i]].push_back(i);
    return b;
}

inline double sq_dist(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
    return s;
}

inline double bernoulli_kl(double x, double mu) {
    double s = 0;
    if (x > 0) s += x * std::log(x / mu);
    if (x < 1) s += (1 - x) * std::log((1 - x) / (1 - mu));
    return s;
}

inline double lp_dissimilarity(const std::vector<double>& x, const std::vector<double>& y, double p, bool root) {
    double s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += std::pow(std::abs(x[j] - y[j]), p);
    return root ? std::pow(s, 1.0 / p) : s;
}

inline double block_loss(const Rows& x, const std::vector<std::size_t>& members, const gbppm::CohesionModel& m) {
    const std::size_t d = x[0].size();
    const double nk = static_cast<double>(members.size());
    double total = 0;
    if (m.kind == gbppm::CohesionKind::avg_dissimilarity) {
        const bool root = m.gamma == gbppm::GammaSpec::p_th_root;
        for (auto i : members) {
            double r = 0;
            for (auto j : members) r += lp_dissimilarity(x[i], x[j], m.p, root);
            total += r / nk;
        }
        return total;
    }
    std::vector<double> mean(d, 0.0);
    for (auto i : members)
        for (std::size_t j = 0; j < d; ++j) mean[j] += x[i][j] / nk;
    if (m.kind == gbppm::CohesionKind::bregman_sq_euclidean) {
        for (auto i : members) total += sq_dist(x[i], mean);
        return total;
    }
    for (auto& v : mean) v = nk / (nk + 1) * v + 0.5 / (nk + 1);
    for (auto i : members)
        for (std::size_t j = 0; j < d; ++j) total += bernoulli_kl(x[i][j], mean[j]);
    return total;
}

inline double loss(const Rows& x, const Labels& c, const gbppm::CohesionModel& m) {
    double total = 0;
    for (const auto& b : blocks_of(c)) total += block_loss(x, b, m);
    return total;
}

// Exponent weight of the loss in the Gibbs posterior: the pairwise form
// counts every pair twice.
inline double scale(const gbppm::CohesionModel& m) {
    return m.kind == gbppm::CohesionKind::avg_dissimilarity ? 0.5 : 1.0;
}

inline std::uint64_t stirling2(std::size_t n, std::size_t K) {
    std::vector<std::vector<std::uint64_t>> s(n + 1, std::vector<std::uint64_t>(K + 1, 0));
    s[0][0] = 1;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 1; k <= std::min(i, K); ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
    return s[n][K];
}

// Restricted growth strings with exactly K distinct values.
inline std::vector<Labels> partitions(std::size_t n, std::size_t K) {
    std::vector<Labels> out;
    Labels c(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            if (used == K) out.push_back(c);
            return;
        }
        if (used + (n - i) < K) return;
        for (std::size_t k = 0; k <= std::min(used, K - 1); ++k) {
            c[i] = k;
            self(self, i + 1, std::max(used, k + 1));
        }
    };
    rec(rec, 0, 0);
    return out;
}

inline Labels canonical(const Labels& c) {
    std::map<std::size_t, std::size_t> seen;
    Labels out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto it = seen.find(c[i]);
        if (it == seen.end()) it = seen.emplace(c[i], seen.size()).first;
        out[i] = it->second;
    }
    return out;
}

struct ExactPosterior {
    std::vector<Labels> support;
    std::vector<double> prob;
    std::vector<double> losses;

    std::size_t index_of(const Labels& canonical_labels) const {
        auto it = std::lower_bound(support.begin(), support.end(), canonical_labels);
        return static_cast<std::size_t>(it - support.begin());
    }
};

inline ExactPosterior exact_posterior(const Rows& x, std::size_t K, const gbppm::CohesionModel& m, double lambda) {
    ExactPosterior e;
    e.support = partitions(x.size(), K);
    std::sort(e.support.begin(), e.support.end());
    std::vector<double> logw;
    for (const auto& c : e.support) {
        e.losses.push_back(loss(x, c, m));
        logw.push_back(-lambda * scale(m) * e.losses.back());
    }
    const double mx = *std::max_element(logw.begin(), logw.end());
    double z = 0;
    for (double& w : logw) z += (w = std::exp(w - mx));
    for (double w : logw) e.prob.push_back(w / z);
    return e;
}

// Expected total-variation distance between p and the empirical frequencies
// of `draws` independent samples from it (normal approximation).
inline double expected_tv_noise(const std::vector<double>& p, double draws) {
    double s = 0;
    for (double q : p) s += std::sqrt(2.0 * q * (1 - q) / (M_PI * draws));
    return s / 2;
}

// Smallest lambda (on a geometric grid) whose exact posterior would show
// less than `target` total-variation noise at `effective_draws` samples.
// Near-flat posteriors over many partitions cannot be resolved by any
// finite chain, so the comparison is made where it is informative.
inline double calibrate_lambda(const Rows& x, std::size_t K, const gbppm::CohesionModel& m, double target,
                               double effective_draws, double lo = 1e-2, double hi = 1e3) {
    for (double lambda = lo; lambda <= hi; lambda *= 1.25) {
        if (expected_tv_noise(exact_posterior(x, K, m, lambda).prob, effective_draws) < target) return lambda;
    }
    return hi;
}

inline double tv(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return s / 2;
}

inline double entropy(const Labels& c) {
    std::map<std::size_t, double> count;
    for (auto l : c) count[l] += 1;
    double h = 0;
    const double n = static_cast<double>(c.size());
    for (auto& [k, v] : count) h -= v / n * std::log(v / n);
    return h;
}

// VI = 2 H(a, b) - H(a) - H(b), with the joint entropy from the contingency table.
inline double vi(const Labels& a, const Labels& b) {
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) joint[{a[i], b[i]}] += 1;
    double hab = 0;
    const double n = static_cast<double>(a.size());
    for (auto& [k, v] : joint) hab -= v / n * std::log(v / n);
    return 2 * hab - entropy(a) - entropy(b);
}

inline gbppm::Dataset gaussian_data(std::size_t n, std::size_t d, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> v(n * d);
    for (auto& x : v) x = z(rng);
    return gbppm::Dataset(std::move(v), n, d);
}

inline gbppm::Dataset binary_data(std::size_t n, std::size_t d, std::uint64_t seed, double p = 0.5) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution b(p);
    std::vector<double> v(n * d);
    for (auto& x : v) x = b(rng) ? 1.0 : 0.0;
    return gbppm::Dataset(std::move(v), n, d, gbppm::Domain::binary);
}

// Labels i mod K.
inline gbppm::Partition cyclic(std::size_t n, std::size_t K) {
    Labels c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i % K;
    return gbppm::Partition(c, K);
}

// Uniform labels with every block nonempty (rejection).
inline gbppm::Partition random_partition(std::size_t n, std::size_t K, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> u(0, K - 1);
    for (;;) {
        Labels c(n);
        std::vector<int> hit(K, 0);
        for (auto& l : c) hit[l = u(rng)] = 1;
        if (std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; })) return gbppm::Partition(c, K);
    }
}

}  // namespace oracle
