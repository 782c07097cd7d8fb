#include "gbppm/select.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>

#include "gbppm/block_stats.hpp"
#include "gbppm/bregman.hpp"
#include "gbppm/error.hpp"
#include "gbppm/numeric.hpp"

namespace gbppm {

namespace {

MapResult run_map(const Dataset& data, const CohesionModel& model, std::size_t K, const InitSpec& init,
                  std::size_t max_iter, const DissimMatrix* dissim) {
    if (model.is_bregman()) return bregman_kmeans(data, model, K, init, max_iter);
    return k_dissimilarities(*dissim, K, init, max_iter);
}

// Points to a usable matrix for average-dissimilarity models, building one
// into `own` when none was passed.
const DissimMatrix* ensure_dissim(const Dataset& data, const CohesionModel& model, const DissimMatrix* dissim,
                                  std::optional<DissimMatrix>& own) {
    if (model.is_bregman()) return dissim;
    if (dissim == nullptr) {
        own.emplace(pairwise_matrix(data, model));
        return &*own;
    }
    if (dissim->n() != data.n()) throw argument_error("dissimilarity matrix and dataset sizes differ");
    return dissim;
}

}  // namespace

MapResult fit_map(const Dataset& data, const CohesionModel& model, std::size_t K, const FitOptions& options,
                  const DissimMatrix* dissim) {
    validate(model, data);
    if (options.restarts < 1) throw argument_error("restarts must be >= 1");
    if (options.init == InitSpec::Method::explicit_labels) {
        throw argument_error("fit_map draws its own starts; use fit_map_from for explicit labels");
    }
    std::optional<DissimMatrix> own;
    dissim = ensure_dissim(data, model, dissim, own);
    std::optional<MapResult> best;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        const InitSpec init{options.init, split_seed(options.seed, r), std::nullopt};
        auto result = run_map(data, model, K, init, options.max_iter, dissim);
        if (!best || result.loss() < best->loss()) best = std::move(result);
    }
    return std::move(*best);
}

MapResult fit_map_from(const Dataset& data, const CohesionModel& model, const Partition& init, std::size_t max_iter,
                       const DissimMatrix* dissim) {
    validate(model, data);
    std::optional<DissimMatrix> own;
    dissim = ensure_dissim(data, model, dissim, own);
    return run_map(data, model, init.K(), InitSpec::from(init), max_iter, dissim);
}

namespace {

// The K-block partition with the point whose removal lowers the loss most
// moved into a new singleton block.
Partition split_worst(const Partition& p, const Dataset& data, const CohesionModel& model,
                      const DissimMatrix* dissim) {
    const auto stats = make_block_stats(data, model, p, dissim);
    std::size_t pick = p.n();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.n(); ++i) {
        if (p.block_size(p[i]) < 2) continue;
        const double r = stats->removal_delta(i);
        if (r > best) {
            best = r;
            pick = i;
        }
    }
    auto labels = p.labels();
    labels[pick] = p.K();
    return Partition(std::move(labels), p.K() + 1);
}

}  // namespace

std::vector<ElbowPoint> elbow_curve(const Dataset& data, const CohesionModel& model,
                                    const std::vector<std::size_t>& K_range, const FitOptions& options, bool nested,
                                    const DissimMatrix* dissim) {
    validate(model, data);
    std::optional<DissimMatrix> own;
    dissim = ensure_dissim(data, model, dissim, own);
    auto ks = K_range;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::vector<ElbowPoint> out;
    for (std::size_t K : ks) {
        auto result = fit_map(data, model, K, options, dissim);
        if (nested && !out.empty() && out.back().K + 1 == K) {
            auto split = fit_map_from(data, model, split_worst(out.back().partition, data, model, dissim),
                                      options.max_iter, dissim);
            if (split.loss() < result.loss()) result = std::move(split);
        }
        out.push_back({K, result.loss(), std::move(result.partition)});
    }
    return out;
}

double avg_silhouette(const Partition& partition, const DissimMatrix& dissim) {
    if (partition.K() < 2) throw argument_error("silhouette needs K >= 2");
    if (partition.n() != dissim.n()) throw argument_error("partition and dissimilarity matrix sizes differ");
    const std::size_t n = partition.n();
    const std::size_t K = partition.K();
    std::vector<double> sums(K);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = partition[i];
        if (partition.block_size(own) == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        auto row = dissim.row(i);
        for (std::size_t j = 0; j < n; ++j) sums[partition[j]] += row[j];
        const double a = sums[own] / static_cast<double>(partition.block_size(own) - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            if (k != own) b = std::min(b, sums[k] / static_cast<double>(partition.block_size(k)));
        }
        const double m = std::max(a, b);
        if (m > 0.0) total += (b - a) / m;
    }
    return total / static_cast<double>(n);
}

std::vector<SilhouettePoint> silhouette_curve(const Dataset& data, const CohesionModel& model,
                                              const std::vector<std::size_t>& K_range, const FitOptions& options,
                                              const DissimMatrix& dissim) {
    if (dissim.n() != data.n()) throw argument_error("dissimilarity matrix and dataset sizes differ");
    const DissimMatrix* fit_dissim = model.is_bregman() ? nullptr : &dissim;
    std::vector<SilhouettePoint> out;
    for (std::size_t K : K_range) {
        auto result = fit_map(data, model, K, options, fit_dissim);
        out.push_back({K, avg_silhouette(result.partition, dissim), std::move(result.partition)});
    }
    return out;
}

void write_k_csv(std::ostream& out, const std::vector<ElbowPoint>& curve) {
    out << "K,min_loss\n" << std::setprecision(17);
    for (const auto& p : curve) out << p.K << ',' << p.min_loss << '\n';
}

void write_k_csv(std::ostream& out, const std::vector<SilhouettePoint>& curve) {
    out << "K,silhouette\n" << std::setprecision(17);
    for (const auto& p : curve) out << p.K << ',' << p.silhouette << '\n';
}

}  // namespace gbppm
