#include "gbppm/uq.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "gbppm/block_stats.hpp"
#include "gbppm/bregman.hpp"
#include "gbppm/error.hpp"
#include "gbppm/numeric.hpp"

namespace gbppm {

CoClusteringMatrix::CoClusteringMatrix(std::vector<double> values, std::size_t n, std::size_t sample_count)
    : values_(std::move(values)), n_(n), sample_count_(sample_count) {
    if (values_.size() != n_ * n_) throw argument_error("co-clustering matrix must be n x n");
}

double CoClusteringMatrix::mean_abs_deviation(const CoClusteringMatrix& other) const {
    if (other.n_ != n_) throw argument_error("co-clustering matrices differ in size");
    if (n_ < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) s += std::abs((*this)(i, j) - other(i, j));
    return s / (0.5 * static_cast<double>(n_) * static_cast<double>(n_ - 1));
}

CoClusteringMatrix coclustering(std::span<const Partition> support, std::span<const double> weights) {
    if (support.empty()) throw argument_error("co-clustering needs at least one partition");
    if (weights.size() != support.size()) throw argument_error("one weight per partition is required");
    const std::size_t n = support.front().n();
    std::vector<double> v(n * n, 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < support.size(); ++t) {
        const auto& labels = support[t].labels();
        if (labels.size() != n) throw argument_error("partitions differ in size");
        const double w = weights[t];
        if (!(w >= 0.0)) throw argument_error("weights must be non-negative");
        if (w == 0.0) continue;
        total += w;
        for (std::size_t i = 0; i < n; ++i) {
            double* row = v.data() + i * n;
            const std::size_t li = labels[i];
            for (std::size_t j = i + 1; j < n; ++j)
                if (labels[j] == li) row[j] += w;
        }
    }
    if (!(total > 0.0)) throw argument_error("weights sum to zero");
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            v[i * n + j] /= total;
            v[j * n + i] = v[i * n + j];
        }
    }
    return CoClusteringMatrix(std::move(v), n, support.size());
}

CoClusteringMatrix coclustering(std::span<const Partition> samples) {
    const std::vector<double> w(samples.size(), 1.0);
    return coclustering(samples, w);
}

CoClusteringMatrix coclustering(const ChainSamples& samples) { return coclustering(samples.partitions); }

void write_coclustering_csv(std::ostream& out, const CoClusteringMatrix& s) {
    out << std::setprecision(10);
    for (std::size_t i = 0; i < s.n(); ++i) {
        for (std::size_t j = 0; j < s.n(); ++j) out << (j ? "," : "") << s(i, j);
        out << '\n';
    }
}

void write_coclustering_long(std::ostream& out, const CoClusteringMatrix& s) {
    out << "i,j,s\n" << std::setprecision(10);
    for (std::size_t i = 0; i < s.n(); ++i)
        for (std::size_t j = 0; j < s.n(); ++j) out << i + 1 << ',' << j + 1 << ',' << s(i, j) << '\n';
}

std::vector<std::size_t> medoids(const Partition& partition, const Dataset& data, const CohesionModel& model,
                                 const DissimMatrix* dissim) {
    validate(model, data);
    if (partition.n() != data.n()) throw argument_error("partition and dataset sizes differ");
    if (dissim != nullptr && dissim->n() != data.n()) throw argument_error("dissimilarity matrix size differs");
    const auto blocks = partition.blocks();
    std::vector<std::size_t> out(blocks.size());
    std::optional<Centroids> centres;
    if (model.is_bregman()) centres = model_centroids(data, partition, model);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i : blocks[k]) {
            double v = 0.0;
            if (centres) {
                v = bregman_divergence(model, data.row(i), centres->row(k));
            } else {
                for (std::size_t j : blocks[k])
                    v += dissim ? (*dissim)(i, j) : pair_dissimilarity(model, data.row(i), data.row(j));
            }
            if (v < best) {
                best = v;
                out[k] = i;
            }
        }
    }
    return out;
}

std::vector<double> misclassification(const CoClusteringMatrix& s, const Partition& estimate,
                                      std::span<const std::size_t> medoid_indices) {
    if (estimate.n() != s.n()) throw argument_error("estimate and co-clustering sizes differ");
    if (medoid_indices.size() != estimate.K()) throw argument_error("one medoid per block is required");
    std::vector<double> out(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) out[i] = 1.0 - s(i, medoid_indices[estimate[i]]);
    return out;
}

namespace {

std::vector<double> predictive_from_stats(std::span<const double> x_new, const BlockStats& stats, double lambda,
                                          const CohesionModel& model) {
    std::vector<double> w(stats.K());
    const double beta = lambda * posterior_scale(model);
    for (std::size_t k = 0; k < stats.K(); ++k) w[k] = -beta * stats.insertion_delta_point(x_new, k);
    normalize_log_weights(w);
    return w;
}

void check_new_point(std::span<const double> x_new, const Dataset& data) {
    if (x_new.size() != data.d()) throw argument_error("new observation has the wrong dimension");
    for (double v : x_new)
        if (!std::isfinite(v)) throw domain_error("domain error: non-finite value in the new observation");
}

// Assignment maximizing total overlap between the blocks of a and b (equal
// K). Returns perm with perm[block of a] = block of b.
std::vector<std::size_t> align_blocks(const Partition& a, const Partition& b) {
    const std::size_t K = a.K();
    std::vector<std::vector<double>> cost(K, std::vector<double>(K, 0.0));
    for (std::size_t i = 0; i < a.n(); ++i) cost[a[i]][b[i]] -= 1.0;

    // Hungarian method, 1-based potentials.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(K + 1, 0.0), v(K + 1, 0.0);
    std::vector<std::size_t> p(K + 1, 0), way(K + 1, 0);
    for (std::size_t r = 1; r <= K; ++r) {
        p[0] = r;
        std::size_t j0 = 0;
        std::vector<double> minv(K + 1, inf);
        std::vector<bool> used(K + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= K; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= K; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> perm(K);
    for (std::size_t j = 1; j <= K; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

}  // namespace

std::vector<double> predictive_allocation(std::span<const double> x_new, const Partition& reference, double lambda,
                                          const Dataset& data, const CohesionModel& model,
                                          const DissimMatrix* dissim) {
    if (!(lambda > 0.0)) throw argument_error("lambda must be positive");
    check_new_point(x_new, data);
    std::optional<DissimMatrix> own;
    if (model.kind == CohesionKind::avg_dissimilarity && dissim == nullptr) {
        own.emplace(pairwise_matrix(data, model));
        dissim = &*own;
    }
    const auto stats = make_block_stats(data, model, reference, dissim);
    return predictive_from_stats(x_new, *stats, lambda, model);
}

std::vector<double> predictive_allocation_averaged(std::span<const double> x_new, const ChainSamples& samples,
                                                   const Partition& reference, const Dataset& data,
                                                   const CohesionModel& model, const DissimMatrix* dissim) {
    if (samples.empty()) throw argument_error("no draws to average");
    check_new_point(x_new, data);
    std::optional<DissimMatrix> own;
    if (model.kind == CohesionKind::avg_dissimilarity && dissim == nullptr) {
        own.emplace(pairwise_matrix(data, model));
        dissim = &*own;
    }
    const std::size_t K = reference.K();
    std::vector<double> mean(K, 0.0);
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const auto& draw = samples.partitions[t];
        if (draw.K() != K || draw.n() != reference.n()) throw argument_error("draw does not match the reference");
        const auto stats = make_block_stats(data, model, draw, dissim);
        const auto w = predictive_from_stats(x_new, *stats, samples.lambdas[t], model);
        const auto perm = align_blocks(draw, reference);
        for (std::size_t k = 0; k < K; ++k) mean[perm[k]] += w[k];
    }
    for (double& m : mean) m /= static_cast<double>(samples.size());
    return mean;
}

double vi_distance(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw argument_error("partitions differ in size");
    const std::size_t n = a.n();
    if (n == 0) return 0.0;
    // Fixed argument order keeps the floating-point sum exactly symmetric.
    if (b.labels() < a.labels()) return vi_distance(b, a);
    std::vector<double> joint(a.K() * b.K(), 0.0);
    for (std::size_t i = 0; i < n; ++i) joint[a[i] * b.K() + b[i]] += 1.0;
    const double nn = static_cast<double>(n);
    double vi = 0.0;
    for (std::size_t k = 0; k < a.K(); ++k) {
        for (std::size_t l = 0; l < b.K(); ++l) {
            const double c = joint[k * b.K() + l];
            if (c == 0.0) continue;
            const double ak = static_cast<double>(a.block_size(k));
            const double bl = static_cast<double>(b.block_size(l));
            // H(a|b) + H(b|a) summed cell by cell.
            vi += c / nn * (std::log(bl / c) + std::log(ak / c));
        }
    }
    return std::max(0.0, vi);
}

double expected_vi_lower_bound(const Partition& candidate, const CoClusteringMatrix& s) {
    if (candidate.n() != s.n()) throw argument_error("candidate and co-clustering sizes differ");
    const std::size_t n = s.n();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        double shared = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += s(i, j);
            if (candidate[j] == candidate[i]) shared += s(i, j);
        }
        const double size = static_cast<double>(candidate.block_size(candidate[i]));
        total += std::log(size) + std::log(row) - 2.0 * std::log(shared);
    }
    return total / static_cast<double>(n);
}

namespace {

struct Distinct {
    std::vector<Partition> partitions;
    std::vector<double> counts;
};

Distinct distinct_partitions(std::span<const Partition> samples) {
    Distinct out;
    std::unordered_map<Partition, std::size_t, PartitionHash> index;
    for (const auto& p : samples) {
        auto [it, fresh] = index.try_emplace(p, out.partitions.size());
        if (fresh) {
            out.partitions.push_back(p);
            out.counts.push_back(0.0);
        }
        out.counts[it->second] += 1.0;
    }
    return out;
}

}  // namespace

Partition vi_point_estimate(std::span<const Partition> samples) {
    if (samples.empty()) throw argument_error("no draws");
    const auto s = coclustering(samples);
    const auto distinct = distinct_partitions(samples);
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < distinct.partitions.size(); ++c) {
        const double v = expected_vi_lower_bound(distinct.partitions[c], s);
        if (v < best_value) {
            best_value = v;
            best = c;
        }
    }
    return distinct.partitions[best];
}

Partition vi_point_estimate(const ChainSamples& samples) { return vi_point_estimate(samples.partitions); }

CredibleBall credible_ball(std::span<const Partition> samples, const Partition& estimate, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw argument_error("alpha must lie in (0, 1)");
    if (samples.empty()) throw argument_error("no draws");
    const auto distinct = distinct_partitions(samples);
    const std::size_t m = distinct.partitions.size();
    std::vector<double> dist(m);
    for (std::size_t c = 0; c < m; ++c) dist[c] = vi_distance(distinct.partitions[c], estimate);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

    const double total = static_cast<double>(samples.size());
    constexpr double tier_tol = 1e-12;
    CredibleBall ball{estimate, alpha, {}, {}, {}, {}, 0.0, 0.0};
    std::size_t r = 0;
    while (r < m && ball.coverage < 1.0 - alpha - 1e-12) {
        const double tier = dist[order[r]];
        while (r < m && dist[order[r]] <= tier + tier_tol) {
            const std::size_t c = order[r++];
            ball.members.push_back(distinct.partitions[c]);
            ball.member_mass.push_back(distinct.counts[c] / total);
            ball.member_distance.push_back(dist[c]);
            ball.coverage += distinct.counts[c] / total;
        }
        ball.radius = tier;
    }
    for (std::size_t c = 0; c < ball.members.size(); ++c) {
        if (ball.member_distance[c] >= ball.radius - tier_tol) ball.horizontal_bounds.push_back(ball.members[c]);
    }
    return ball;
}

CredibleBall credible_ball(const ChainSamples& samples, const Partition& estimate, double alpha) {
    return credible_ball(samples.partitions, estimate, alpha);
}

}  // namespace gbppm
