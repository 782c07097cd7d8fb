#include "gbppm/dissim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "gbppm/error.hpp"
#include "gbppm/numeric.hpp"

namespace gbppm {

DissimMatrix::DissimMatrix(std::vector<double> values, std::size_t n, GammaSpec gamma, double p)
    : values_(std::move(values)), n_(n), gamma_(gamma), p_(p) {
    if (values_.size() != n_ * n_) throw argument_error("dissimilarity matrix must be n x n");
}

DissimMatrix DissimMatrix::scaled(double factor) const {
    auto v = values_;
    for (double& x : v) x *= factor;
    return DissimMatrix(std::move(v), n_, gamma_, p_);
}

DissimMatrix pairwise_matrix(const Dataset& data, const CohesionModel& model, std::size_t max_n) {
    if (model.kind != CohesionKind::avg_dissimilarity) {
        throw argument_error("pairwise_matrix needs an average-dissimilarity cohesion");
    }
    validate(model, data);
    const std::size_t n = data.n();
    if (n > max_n) {
        throw resource_error("n = " + std::to_string(n) + " exceeds the dissimilarity matrix cap " +
                             std::to_string(max_n));
    }
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = pair_dissimilarity(model, data.row(i), data.row(j));
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    return DissimMatrix(std::move(values), n, model.gamma, model.p);
}

namespace {

template <class T>
T to_little_endian(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        std::reverse(b, b + sizeof(T));
        std::memcpy(&v, b, sizeof(T));
        return v;
    }
}

}  // namespace

void save_dissim(const std::string& path, const DissimMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    const std::uint64_t n = to_little_endian<std::uint64_t>(m.n());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (double v : m.values()) {
        const double le = to_little_endian(v);
        out.write(reinterpret_cast<const char*>(&le), sizeof le);
    }
    if (!out) throw io_error("short write to " + path);
}

DissimMatrix load_dissim(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in) throw io_error(path + ": missing header");
    n = to_little_endian(n);
    if (n == 0 || n > (1ull << 20)) throw io_error(path + ": implausible matrix size");
    std::vector<double> values(n * n);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw io_error(path + ": truncated matrix");
    for (double& v : values) v = to_little_endian(v);
    return DissimMatrix(std::move(values), n);
}

ClusterCache::ClusterCache(const DissimMatrix& dissim, const Partition& partition)
    : dissim_(&dissim), labels_(partition.labels()), sizes_(partition.block_sizes()) {
    if (dissim.n() != partition.n()) throw argument_error("partition and dissimilarity matrix sizes differ");
    rebuild();
}

void ClusterCache::rebuild() {
    const std::size_t n = labels_.size();
    const std::size_t K = sizes_.size();
    std::fill(sizes_.begin(), sizes_.end(), 0);
    for (std::size_t l : labels_) ++sizes_[l];
    row_sums_.assign(n * K, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = dissim_->row(i);
        double* r = row_sums_.data() + i * K;
        for (std::size_t j = 0; j < n; ++j) r[labels_[j]] += row[j];
    }
    totals_.assign(K, 0.0);
    for (std::size_t i = 0; i < n; ++i) totals_[labels_[i]] += row_sums_[i * K + labels_[i]];
    for (std::size_t k = 0; k < K; ++k) totals_[k] /= static_cast<double>(sizes_[k]);
}

double ClusterCache::loss() const noexcept {
    double s = 0.0;
    for (double t : totals_) s += t;
    return s;
}

void ClusterCache::move(std::size_t i, std::size_t to) {
    const std::size_t from = labels_[i];
    if (from == to) return;
    if (sizes_[from] == 1) throw contract_error("cannot move the sole member of a block");
    const std::size_t K = sizes_.size();
    const double m_from = static_cast<double>(sizes_[from]);
    const double m_to = static_cast<double>(sizes_[to]);
    totals_[from] = (m_from * totals_[from] - 2.0 * row_sum(i, from)) / (m_from - 1.0);
    totals_[to] = (m_to * totals_[to] + 2.0 * row_sum(i, to)) / (m_to + 1.0);
    --sizes_[from];
    ++sizes_[to];
    labels_[i] = to;
    auto row = dissim_->row(i);
    for (std::size_t j = 0; j < labels_.size(); ++j) {
        row_sums_[j * K + from] -= row[j];
        row_sums_[j * K + to] += row[j];
    }
}

void ClusterCache::check_consistency(double rel_tol) const {
    const std::size_t n = labels_.size();
    const std::size_t K = sizes_.size();
    auto close = [rel_tol](double a, double b) { return std::abs(a - b) <= rel_tol * std::max(1.0, std::abs(b)); };
    std::vector<double> sums(K, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> fresh(K, 0.0);
        auto row = dissim_->row(i);
        for (std::size_t j = 0; j < n; ++j) fresh[labels_[j]] += row[j];
        for (std::size_t k = 0; k < K; ++k) {
            if (!close(row_sum(i, k), fresh[k])) {
                throw invariant_error("stale cluster cache: R(" + std::to_string(i) + "," + std::to_string(k) + ")");
            }
        }
        sums[labels_[i]] += row_sum(i, labels_[i]);
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (sizes_[k] == 0) throw invariant_error("empty block in cluster cache");
        if (!close(totals_[k], sums[k] / static_cast<double>(sizes_[k]))) {
            throw invariant_error("stale cluster cache: T(" + std::to_string(k) + ")");
        }
    }
}

double avg_dissimilarity(std::size_t i, std::size_t k, const ClusterCache& cache) {
    return cache.row_sum(i, k) / static_cast<double>(cache.size(k));
}

double reallocation_delta(std::size_t i, std::size_t k, const ClusterCache& cache) {
    const double r = cache.row_sum(i, k);
    const double size = static_cast<double>(cache.size(k));
    if (cache.label(i) == k) {
        if (cache.size(k) == 1) return 0.0;
        const double without = (size * cache.total(k) - 2.0 * r) / (size - 1.0);
        return (2.0 * r - without) / size;
    }
    return (2.0 * r - cache.total(k)) / (size + 1.0);
}

namespace {

std::size_t distinct_points(const DissimMatrix& m) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.n(); ++i) {
        bool duplicate = false;
        for (std::size_t j = 0; j < i && !duplicate; ++j) duplicate = m(i, j) == 0.0;
        if (!duplicate) ++count;
    }
    return count;
}

std::vector<std::size_t> seeded_labels(const DissimMatrix& m, std::size_t K, std::uint64_t seed) {
    const std::size_t n = m.n();
    Rng rng = make_rng(seed);
    std::vector<std::size_t> seeds{std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)};
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (seeds.size() < K) {
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], m(i, seeds.back()));
        seeds.push_back(sample_categorical(nearest, rng));
    }
    std::vector<std::size_t> labels(n, 0);
    std::vector<double> cost(n, 0.0);
    std::vector<std::size_t> sizes(K, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            if (m(i, seeds[k]) < best) {
                best = m(i, seeds[k]);
                labels[i] = k;
            }
        }
        cost[i] = best;
        ++sizes[labels[i]];
    }
    for (std::size_t e = 0; e < K; ++e) {
        if (sizes[e] != 0) continue;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (sizes[labels[i]] > 1 && (pick == n || cost[i] > cost[pick])) pick = i;
        }
        --sizes[labels[pick]];
        labels[pick] = e;
        sizes[e] = 1;
        cost[pick] = 0.0;
    }
    return labels;
}

std::vector<std::size_t> uniform_labels(std::size_t n, std::size_t K, std::uint64_t seed) {
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

MapResult k_dissimilarities(const DissimMatrix& dissim, std::size_t K, const InitSpec& init, std::size_t max_sweeps) {
    const std::size_t n = dissim.n();
    if (K < 1 || K > n) throw argument_error("K must satisfy 1 <= K <= n");
    if (max_sweeps < 1) throw argument_error("max_sweeps must be >= 1");
    if (distinct_points(dissim) < K) {
        throw degenerate_data_error("degenerate data: fewer distinct points than clusters");
    }

    std::vector<std::size_t> labels;
    switch (init.method) {
        case InitSpec::Method::plus_plus:
            labels = seeded_labels(dissim, K, init.seed);
            break;
        case InitSpec::Method::random_labels:
            labels = uniform_labels(n, K, init.seed);
            break;
        case InitSpec::Method::explicit_labels:
            if (!init.labels || init.labels->n() != n || init.labels->K() != K) {
                throw argument_error("explicit initial labels must cover n points with K blocks");
            }
            labels = init.labels->labels();
            break;
    }

    ClusterCache cache(dissim, Partition(labels, K));
    MapResult result{cache.partition(), {cache.loss()}, 0, false};
    while (result.iterations < max_sweeps) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t from = cache.label(i);
            if (cache.size(from) == 1) continue;
            const double removal = reallocation_delta(i, from, cache);
            std::size_t best = from;
            double best_change = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                if (k == from) continue;
                const double insertion = reallocation_delta(i, k, cache);
                const double change = insertion - removal;
                const double eps = 1e-12 * (1.0 + std::abs(insertion) + std::abs(removal));
                if (change < best_change - eps) {
                    best_change = change;
                    best = k;
                }
            }
            if (best != from) {
                cache.move(i, best);
                moved = true;
            }
        }
        ++result.iterations;
        if (!moved) {
            result.converged = true;
            break;
        }
        cache.rebuild();
        result.loss_trace.push_back(cache.loss());
    }
    result.partition = cache.partition();
    return result;
}

MapResult k_dissimilarities(const Dataset& data, const CohesionModel& model, std::size_t K, const InitSpec& init,
                            std::size_t max_sweeps) {
    const auto dissim = pairwise_matrix(data, model);
    return k_dissimilarities(dissim, K, init, max_sweeps);
}

}  // namespace gbppm
