#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/init.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

// K x d matrix of block centres.
struct Centroids {
    std::vector<double> means;
    std::size_t K = 0;
    std::size_t d = 0;
    bool adjusted = false;

    std::span<const double> row(std::size_t k) const { return {means.data() + k * d, d}; }
};

// D_phi(x; mu) = phi(x) - phi(mu) - <x - mu, grad phi(mu)>.
// For Bernoulli KL this is sum_j KL(x_j || mu_j) with 0 log 0 = 0; mu must be
// strictly inside (0,1)^d, otherwise domain_error.
double bregman_divergence(const CohesionModel& model, std::span<const double> x, std::span<const double> mu);

// Arithmetic block means.
Centroids plain_centroids(const Dataset& data, const Partition& partition);

// Firth-adjusted block means n_k/(n_k+1) xbar + 1/(2(n_k+1)), all strictly
// inside (0,1). Requires binary data.
Centroids adjusted_centroids(const Dataset& data, const Partition& partition);

// The centroids the model's loss is measured against: adjusted for
// Bernoulli KL, plain otherwise.
Centroids model_centroids(const Dataset& data, const Partition& partition, const CohesionModel& model);

// Adjusted mean of a block with the given size and per-coordinate sums.
inline double adjusted_mean(double sum, double size) { return (sum + 0.5) / (size + 1.0); }

// Lloyd-style alternation: assign every point to the nearest centroid
// (ties go to the lowest index), refill emptied blocks with the point
// farthest from its centroid, recompute centroids; stop when a full pass
// changes no assignment. Bernoulli KL uses adjusted centroids throughout.
MapResult bregman_kmeans(const Dataset& data, const CohesionModel& model, std::size_t K, const InitSpec& init,
                         std::size_t max_iter = 1000);

}  // namespace gbppm
