#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gbppm/dataset.hpp"
#include "gbppm/partition.hpp"
#include "gbppm/uq.hpp"

namespace gbppm {

struct MixtureSpec {
    enum class Family { gaussian, student_t };

    Family family = Family::gaussian;
    double df = 2.0;  // student_t only
    // K x d component locations, row-major.
    std::vector<double> centers = {-2, -2, -2, 2, 2, -2, 2, 2};
    std::size_t d = 2;
    // Isotropic (scale) variance; 0 puts every row on its centre.
    double sigma2 = 1.0;
    std::vector<std::size_t> sizes = {50, 50, 50, 50};

    std::size_t K() const noexcept { return sizes.size(); }
    std::size_t n() const;

    // Four clusters of 50 at (+-2, +-2), the default simulation layout.
    static MixtureSpec four_blobs(Family family, double sigma2, double df = 2.0);

    void validate() const;
};

struct GeneratedData {
    Dataset data;
    Partition labels;
};

// Block k occupies rows [sum sizes_<k, ...). Student-t rows are drawn as
// mu + sigma z / sqrt(w / df), z standard normal, w chi-square(df).
GeneratedData gen_mixture(const MixtureSpec& spec, std::uint64_t seed);

// Exact allocation probabilities p_ik proportional to the component density
// of x_i (equal weights), rows summing to 1.
std::vector<double> oracle_allocation(const Dataset& data, const MixtureSpec& spec);

struct OracleSummary {
    CoClusteringMatrix coclustering;
    std::vector<double> allocation;     // n x K
    std::vector<std::size_t> estimate;  // argmax_k p_ik, may leave a component empty
    // 1 - p_{i, estimate_i}.
    std::vector<double> misclassification;
};

// s_ii' = sum_k p_ik p_i'k (1 on the diagonal), since the oracle posterior
// factorizes over units.
OracleSummary oracle_coclustering(const Dataset& data, const MixtureSpec& spec);

}  // namespace gbppm
