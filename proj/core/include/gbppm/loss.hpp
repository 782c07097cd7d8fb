#pragma once

#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

// Factorized clustering loss sum_k sum_{i in C_k} D(x_i; X_k).
//
// Bregman kinds use the block mean (squared Euclidean) or the adjusted
// block mean (Bernoulli KL); avg_dissimilarity uses the within-block mean of
// gamma(||x_i - x_i'||_p^p).
double loss(const Partition& partition, const Dataset& data, const CohesionModel& model);

// Loss contribution of a single block given its member indices.
double block_loss(std::span<const std::size_t> members, const Dataset& data, const CohesionModel& model);

// log pi(c | lambda, X) up to the constant uniform-prior term:
// -lambda * posterior_scale(model) * loss.
double log_posterior_unnormalized(const Partition& partition, double lambda, const Dataset& data,
                                  const CohesionModel& model);

}  // namespace gbppm
