#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/dissim.hpp"
#include "gbppm/gibbs.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

// s_ii' = P(c_i = c_i'), estimated as the fraction of draws that put i and
// i' together.
class CoClusteringMatrix {
  public:
    CoClusteringMatrix(std::vector<double> values, std::size_t n, std::size_t sample_count);

    std::size_t n() const noexcept { return n_; }
    std::size_t sample_count() const noexcept { return sample_count_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }

    // Mean |s_ii' - t_ii'| over pairs i < i'.
    double mean_abs_deviation(const CoClusteringMatrix& other) const;

  private:
    std::vector<double> values_;
    std::size_t n_;
    std::size_t sample_count_;
};

CoClusteringMatrix coclustering(std::span<const Partition> samples);
CoClusteringMatrix coclustering(const ChainSamples& samples);

// Exact co-clustering under a weighted set of partitions (weights need not
// be normalized).
CoClusteringMatrix coclustering(std::span<const Partition> support, std::span<const double> weights);

// Square matrix CSV and long-format "i,j,s" (1-based indices, every pair).
void write_coclustering_csv(std::ostream& out, const CoClusteringMatrix& s);
void write_coclustering_long(std::ostream& out, const CoClusteringMatrix& s);

// Index of the member of each block minimizing D(x_i; X_k); ties go to the
// lowest index. dissim is needed for avg_dissimilarity.
std::vector<std::size_t> medoids(const Partition& partition, const Dataset& data, const CohesionModel& model,
                                 const DissimMatrix* dissim = nullptr);

// 1 - s_{i, m(i)}, m(i) being the medoid of i's block in `estimate`.
std::vector<double> misclassification(const CoClusteringMatrix& s, const Partition& estimate,
                                      std::span<const std::size_t> medoid_indices);

// P(c_{n+1} = k | ...) proportional to exp{-lambda * scale * Delta_k}, Delta_k
// being the block-k loss increase from adding x_new. dissim is needed for
// avg_dissimilarity.
std::vector<double> predictive_allocation(std::span<const double> x_new, const Partition& reference, double lambda,
                                          const Dataset& data, const CohesionModel& model,
                                          const DissimMatrix* dissim = nullptr);

// Chain-averaged variant: mean of the per-draw predictive vectors, each
// draw using its own lambda. Draws must share one labelling of blocks, so
// they are first aligned to `reference` by maximal overlap.
std::vector<double> predictive_allocation_averaged(std::span<const double> x_new, const ChainSamples& samples,
                                                   const Partition& reference, const Dataset& data,
                                                   const CohesionModel& model, const DissimMatrix* dissim = nullptr);

// Variation of information H(a) + H(b) - 2 I(a, b), natural logarithms.
double vi_distance(const Partition& a, const Partition& b);

// Lower bound of the posterior expected VI of `candidate`, computed from S.
double expected_vi_lower_bound(const Partition& candidate, const CoClusteringMatrix& s);

// Distinct sampled partition minimizing expected_vi_lower_bound.
Partition vi_point_estimate(std::span<const Partition> samples);
Partition vi_point_estimate(const ChainSamples& samples);

struct CredibleBall {
    Partition point_estimate;
    double alpha;
    // Distinct sampled partitions inside the ball with their frequencies and
    // VI distance to the estimate, sorted by distance.
    std::vector<Partition> members;
    std::vector<double> member_mass;
    std::vector<double> member_distance;
    // Members at maximal VI from the estimate.
    std::vector<Partition> horizontal_bounds;
    double radius = 0.0;
    double coverage = 0.0;
};

// Adds distinct sampled partitions in increasing VI distance from the
// estimate (whole distance tiers at a time) until the empirical mass
// reaches 1 - alpha.
CredibleBall credible_ball(std::span<const Partition> samples, const Partition& estimate, double alpha);
CredibleBall credible_ball(const ChainSamples& samples, const Partition& estimate, double alpha);

}  // namespace gbppm
