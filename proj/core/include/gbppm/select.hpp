#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/dissim.hpp"
#include "gbppm/init.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

struct FitOptions {
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    std::size_t max_iter = 1000;
    InitSpec::Method init = InitSpec::Method::plus_plus;
};

// MAP partition for the model: Bregman k-means (adjusted for Bernoulli KL)
// or k-dissimilarities, best loss over restarts. Restart r draws its seed
// from stream r of options.seed.
MapResult fit_map(const Dataset& data, const CohesionModel& model, std::size_t K, const FitOptions& options,
                  const DissimMatrix* dissim = nullptr);

// Runs the model's MAP algorithm from the given starting partition.
MapResult fit_map_from(const Dataset& data, const CohesionModel& model, const Partition& init,
                       std::size_t max_iter = 1000, const DissimMatrix* dissim = nullptr);

struct ElbowPoint {
    std::size_t K;
    double min_loss;
    Partition partition;
};

// Best-of-restarts MAP loss for each K. With nested = true the search for
// K+1 also starts from the K solution with its worst-fitting point split
// off into a new block, which never has higher loss for squared Euclidean
// and average-dissimilarity cohesions.
std::vector<ElbowPoint> elbow_curve(const Dataset& data, const CohesionModel& model,
                                    const std::vector<std::size_t>& K_range, const FitOptions& options,
                                    bool nested = true, const DissimMatrix* dissim = nullptr);

// Mean silhouette (b_i - a_i) / max(a_i, b_i); singletons contribute 0.
// Throws argument_error for K < 2.
double avg_silhouette(const Partition& partition, const DissimMatrix& dissim);

struct SilhouettePoint {
    std::size_t K;
    double silhouette;
    Partition partition;
};

std::vector<SilhouettePoint> silhouette_curve(const Dataset& data, const CohesionModel& model,
                                              const std::vector<std::size_t>& K_range, const FitOptions& options,
                                              const DissimMatrix& dissim);

// "K,value" CSV with the given column name.
void write_k_csv(std::ostream& out, const std::vector<ElbowPoint>& curve);
void write_k_csv(std::ostream& out, const std::vector<SilhouettePoint>& curve);

}  // namespace gbppm
