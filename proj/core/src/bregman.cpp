#include "gbppm/bregman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbppm/error.hpp"
#include "gbppm/loss.hpp"
#include "gbppm/numeric.hpp"

namespace gbppm {

namespace {

// x log(x / m) with 0 log 0 = 0.
double xlogx_over(double x, double m) { return x == 0.0 ? 0.0 : x * std::log(x / m); }

Centroids centroids_from_labels(const Dataset& data, std::span<const std::size_t> labels, std::size_t K,
                                bool adjusted) {
    const std::size_t d = data.d();
    Centroids c{std::vector<double>(K * d, 0.0), K, d, adjusted};
    std::vector<double> counts(K, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t k = labels[i];
        counts[k] += 1.0;
        for (std::size_t j = 0; j < d; ++j) c.means[k * d + j] += data(i, j);
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (counts[k] == 0.0) throw invariant_error("empty block " + std::to_string(k + 1));
        for (std::size_t j = 0; j < d; ++j) {
            double& m = c.means[k * d + j];
            m = adjusted ? adjusted_mean(m, counts[k]) : m / counts[k];
        }
    }
    return c;
}

// Centre of a block holding only x.
std::vector<double> singleton_centre(std::span<const double> x, bool adjusted) {
    std::vector<double> c(x.begin(), x.end());
    if (adjusted)
        for (double& v : c) v = adjusted_mean(v, 1.0);
    return c;
}

class KMeansRun {
  public:
    KMeansRun(const Dataset& data, const CohesionModel& model, std::size_t K)
        : data_(data), model_(model), K_(K), adjusted_(model.kind == CohesionKind::bregman_bernoulli_kl) {}

    std::vector<std::size_t> plus_plus_labels(std::uint64_t seed) {
        Rng rng = make_rng(seed);
        const std::size_t n = data_.n();
        std::vector<std::vector<double>> seeds;
        seeds.push_back(singleton_centre(data_.row(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)),
                                         adjusted_));
        std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
        while (seeds.size() < K_) {
            for (std::size_t i = 0; i < n; ++i) {
                nearest[i] = std::min(nearest[i], bregman_divergence(model_, data_.row(i), seeds.back()));
            }
            seeds.push_back(singleton_centre(data_.row(sample_categorical(nearest, rng)), adjusted_));
        }
        Centroids c{{}, K_, data_.d(), adjusted_};
        for (const auto& s : seeds) c.means.insert(c.means.end(), s.begin(), s.end());
        return assign(c);
    }

    // Nearest-centroid labels with empty-block repair.
    std::vector<std::size_t> assign(const Centroids& c) const {
        const std::size_t n = data_.n();
        std::vector<std::size_t> labels(n, 0);
        std::vector<double> cost(n, 0.0);
        std::vector<std::size_t> sizes(K_, 0);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < K_; ++k) {
                const double v = bregman_divergence(model_, data_.row(i), c.row(k));
                if (v < best) {
                    best = v;
                    labels[i] = k;
                }
            }
            cost[i] = best;
            ++sizes[labels[i]];
        }
        for (std::size_t e = 0; e < K_; ++e) {
            if (sizes[e] != 0) continue;
            // Move the worst-fitting point that is not alone in its block.
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[labels[i]] > 1 && (pick == n || cost[i] > cost[pick])) pick = i;
            }
            if (pick == n) throw degenerate_data_error("cannot refill an empty cluster");
            --sizes[labels[pick]];
            labels[pick] = e;
            sizes[e] = 1;
            cost[pick] = bregman_divergence(model_, data_.row(pick), singleton_centre(data_.row(pick), adjusted_));
        }
        return labels;
    }

    Centroids centroids(std::span<const std::size_t> labels) const {
        return centroids_from_labels(data_, labels, K_, adjusted_);
    }

    double loss_of(const std::vector<std::size_t>& labels) const {
        return loss(Partition(labels, K_), data_, model_);
    }

  private:
    const Dataset& data_;
    const CohesionModel& model_;
    std::size_t K_;
    bool adjusted_;
};

std::vector<std::size_t> random_labels(std::size_t n, std::size_t K, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> labels(n);
    std::uniform_int_distribution<std::size_t> pick(0, K - 1);
    for (std::size_t r = 0; r < n; ++r) labels[order[r]] = r < K ? r : pick(rng);
    return labels;
}

}  // namespace

double bregman_divergence(const CohesionModel& model, std::span<const double> x, std::span<const double> mu) {
    if (x.size() != mu.size()) throw argument_error("dimension mismatch");
    double s = 0.0;
    switch (model.kind) {
        case CohesionKind::bregman_sq_euclidean:
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double t = x[j] - mu[j];
                s += t * t;
            }
            return s;
        case CohesionKind::bregman_bernoulli_kl:
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (!(mu[j] > 0.0 && mu[j] < 1.0)) {
                    throw domain_error("domain error: Bernoulli KL divergence at a boundary mean " +
                                       std::to_string(mu[j]));
                }
                if (x[j] < 0.0 || x[j] > 1.0) throw domain_error("domain error: Bernoulli KL needs x in [0, 1]");
                s += xlogx_over(x[j], mu[j]) + xlogx_over(1.0 - x[j], 1.0 - mu[j]);
            }
            return s;
        case CohesionKind::avg_dissimilarity:
            break;
    }
    throw argument_error("average dissimilarity is not a Bregman divergence");
}

Centroids plain_centroids(const Dataset& data, const Partition& partition) {
    if (partition.n() != data.n()) throw argument_error("partition and dataset sizes differ");
    return centroids_from_labels(data, partition.labels(), partition.K(), false);
}

Centroids adjusted_centroids(const Dataset& data, const Partition& partition) {
    if (data.domain() != Domain::binary) throw domain_error("domain error: adjusted centroids need binary data");
    if (partition.n() != data.n()) throw argument_error("partition and dataset sizes differ");
    return centroids_from_labels(data, partition.labels(), partition.K(), true);
}

Centroids model_centroids(const Dataset& data, const Partition& partition, const CohesionModel& model) {
    return model.kind == CohesionKind::bregman_bernoulli_kl ? adjusted_centroids(data, partition)
                                                            : plain_centroids(data, partition);
}

MapResult bregman_kmeans(const Dataset& data, const CohesionModel& model, std::size_t K, const InitSpec& init,
                         std::size_t max_iter) {
    validate(model, data);
    if (!model.is_bregman()) throw argument_error("bregman_kmeans needs a Bregman cohesion");
    if (K < 1 || K > data.n()) throw argument_error("K must satisfy 1 <= K <= n");
    if (max_iter < 1) throw argument_error("max_iter must be >= 1");
    if (data.distinct_rows() < K) {
        throw degenerate_data_error("degenerate data: fewer distinct points than clusters");
    }

    KMeansRun run(data, model, K);
    std::vector<std::size_t> labels;
    switch (init.method) {
        case InitSpec::Method::plus_plus:
            labels = run.plus_plus_labels(init.seed);
            break;
        case InitSpec::Method::random_labels:
            labels = random_labels(data.n(), K, init.seed);
            break;
        case InitSpec::Method::explicit_labels:
            if (!init.labels || init.labels->n() != data.n() || init.labels->K() != K) {
                throw argument_error("explicit initial labels must cover n points with K blocks");
            }
            labels = init.labels->labels();
            break;
    }

    MapResult result{Partition(labels, K), {run.loss_of(labels)}, 0, false};
    while (result.iterations < max_iter) {
        auto next = run.assign(run.centroids(labels));
        ++result.iterations;
        if (next == labels) {
            result.converged = true;
            break;
        }
        labels = std::move(next);
        result.loss_trace.push_back(run.loss_of(labels));
    }
    result.partition = Partition(std::move(labels), K);
    return result;
}

}  // namespace gbppm
