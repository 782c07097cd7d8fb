#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/dissim.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

// Per-block sufficient statistics supporting O(1)-ish loss differences for
// single-point moves. One implementation per cohesion kind:
//   squared Euclidean - block sums and sums of squares;
//   Bernoulli KL      - block sizes and per-coordinate counts of ones
//                       (exact integers, so no drift);
//   avg dissimilarity - a ClusterCache over a shared DissimMatrix.
class BlockStats {
  public:
    virtual ~BlockStats() = default;

    std::size_t n() const noexcept { return labels_.size(); }
    std::size_t K() const noexcept { return sizes_.size(); }
    std::size_t label(std::size_t i) const noexcept { return labels_[i]; }
    std::size_t size(std::size_t k) const noexcept { return sizes_[k]; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    Partition partition() const { return Partition(labels_, K()); }

    virtual double block_loss(std::size_t k) const = 0;
    double loss() const;

    // loss(C_k u {i}) - loss(C_k) for a point i outside block k.
    virtual double insertion_delta(std::size_t i, std::size_t k) const = 0;
    // loss(C_k) - loss(C_k \ {i}) for i's own block k.
    virtual double removal_delta(std::size_t i) const = 0;
    // Block-k loss change from inserting a new observation x.
    virtual double insertion_delta_point(std::span<const double> x, std::size_t k) const = 0;

    // Change in block k's loss attributable to i: removal_delta when i is in
    // k, insertion_delta otherwise.
    double delta(std::size_t i, std::size_t k) const {
        return labels_[i] == k ? removal_delta(i) : insertion_delta(i, k);
    }

    void move(std::size_t i, std::size_t to);

    // Recomputes all statistics from the current labels.
    virtual void rebuild() = 0;

  protected:
    BlockStats(std::vector<std::size_t> labels, std::size_t K);
    virtual void on_move(std::size_t i, std::size_t from, std::size_t to) = 0;

    std::vector<std::size_t> labels_;
    std::vector<std::size_t> sizes_;
};

// dissim is required (and must outlive the result) for avg_dissimilarity;
// it is ignored for the Bregman kinds. data must outlive the result.
std::unique_ptr<BlockStats> make_block_stats(const Dataset& data, const CohesionModel& model,
                                             const Partition& partition, const DissimMatrix* dissim = nullptr);

}  // namespace gbppm
