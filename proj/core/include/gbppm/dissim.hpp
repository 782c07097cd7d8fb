#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/init.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

inline constexpr std::size_t default_dissim_cap = 20'000;

// Symmetric n x n matrix of gamma(||x_i - x_i'||_p^p) with zero diagonal.
class DissimMatrix {
  public:
    DissimMatrix(std::vector<double> values, std::size_t n, GammaSpec gamma = GammaSpec::identity, double p = 2.0);

    std::size_t n() const noexcept { return n_; }
    GammaSpec gamma() const noexcept { return gamma_; }
    double p() const noexcept { return p_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }
    const std::vector<double>& values() const noexcept { return values_; }

    DissimMatrix scaled(double factor) const;

  private:
    std::vector<double> values_;
    std::size_t n_;
    GammaSpec gamma_;
    double p_;
};

// Throws argument_error unless model is avg_dissimilarity with p >= 1, and
// resource_error when n exceeds max_n.
DissimMatrix pairwise_matrix(const Dataset& data, const CohesionModel& model, std::size_t max_n = default_dissim_cap);

// Binary cache: 8-byte little-endian n, then n*n row-major doubles.
void save_dissim(const std::string& path, const DissimMatrix& m);
DissimMatrix load_dissim(const std::string& path);

// Running sufficient statistics for average-dissimilarity cohesions.
//
// row_sum(i, k) = R_ik = sum_{i' in C_k} delta(i, i'), for every point and
// every block; total(k) = T_k = (1/n_k) sum_{i in C_k} R_ik is the block's
// loss. A move costs O(n).
class ClusterCache {
  public:
    ClusterCache(const DissimMatrix& dissim, const Partition& partition);

    std::size_t n() const noexcept { return labels_.size(); }
    std::size_t K() const noexcept { return sizes_.size(); }
    std::size_t label(std::size_t i) const noexcept { return labels_[i]; }
    std::size_t size(std::size_t k) const noexcept { return sizes_[k]; }
    double total(std::size_t k) const noexcept { return totals_[k]; }
    double row_sum(std::size_t i, std::size_t k) const noexcept { return row_sums_[i * K() + k]; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    const DissimMatrix& dissim() const noexcept { return *dissim_; }

    double loss() const noexcept;
    Partition partition() const { return Partition(labels_, K()); }

    // Moves point i into block `to`. The source block must keep a member.
    void move(std::size_t i, std::size_t to);

    // Recomputes everything from the matrix.
    void rebuild();

    // Throws invariant_error if T_k != (1/n_k) sum_{i in C_k} R_ik or R
    // disagrees with the matrix, at relative tolerance rel_tol.
    void check_consistency(double rel_tol = 1e-9) const;

  private:
    const DissimMatrix* dissim_;
    std::vector<std::size_t> labels_;
    std::vector<std::size_t> sizes_;
    std::vector<double> row_sums_;
    std::vector<double> totals_;
};

// D_gamma(x_i; X_k) = R_ik / n_k.
double avg_dissimilarity(std::size_t i, std::size_t k, const ClusterCache& cache);

// Loss of block k with i in it minus its loss without i, whether or not i
// currently belongs to k:
//   (2 / m) R_ik - (1 / m) T_{k,-i},   m = |C_k u {i}|.
double reallocation_delta(std::size_t i, std::size_t k, const ClusterCache& cache);

// Greedy single-point reallocation in ascending index order. A point moves
// only when that strictly lowers the loss; sole members of a block stay.
// Stops after a sweep with no move or max_sweeps sweeps.
MapResult k_dissimilarities(const DissimMatrix& dissim, std::size_t K, const InitSpec& init,
                            std::size_t max_sweeps = 1000);

MapResult k_dissimilarities(const Dataset& data, const CohesionModel& model, std::size_t K, const InitSpec& init,
                            std::size_t max_sweeps = 1000);

}  // namespace gbppm
