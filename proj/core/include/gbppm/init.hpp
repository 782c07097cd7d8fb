#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gbppm/partition.hpp"

namespace gbppm {

// How a MAP search is started.
struct InitSpec {
    enum class Method {
        plus_plus,      // k-means++ seeding with the model's own discrepancy
        random_labels,  // uniform labels, every block forced nonempty
        explicit_labels
    };

    Method method = Method::plus_plus;
    std::uint64_t seed = 0;
    std::optional<Partition> labels;

    static InitSpec plus_plus(std::uint64_t seed) { return {Method::plus_plus, seed, std::nullopt}; }
    static InitSpec random(std::uint64_t seed) { return {Method::random_labels, seed, std::nullopt}; }
    static InitSpec from(Partition p) { return {Method::explicit_labels, 0, std::move(p)}; }
};

// Result of a MAP search (k-means style or k-dissimilarities).
struct MapResult {
    Partition partition;
    // Loss of the starting partition followed by the loss after every pass.
    std::vector<double> loss_trace;
    std::size_t iterations = 0;
    bool converged = false;

    double loss() const { return loss_trace.back(); }
};

}  // namespace gbppm
