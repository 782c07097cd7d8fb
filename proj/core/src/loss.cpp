#include "gbppm/loss.hpp"

#include <vector>

#include "gbppm/bregman.hpp"
#include "gbppm/error.hpp"

namespace gbppm {

double block_loss(std::span<const std::size_t> members, const Dataset& data, const CohesionModel& model) {
    if (members.empty()) throw invariant_error("empty block");
    const std::size_t d = data.d();
    const double nk = static_cast<double>(members.size());

    if (model.kind == CohesionKind::avg_dissimilarity) {
        double s = 0.0;
        for (std::size_t a : members)
            for (std::size_t b : members) s += pair_dissimilarity(model, data.row(a), data.row(b));
        return s / nk;
    }

    std::vector<double> centre(d, 0.0);
    for (std::size_t i : members)
        for (std::size_t j = 0; j < d; ++j) centre[j] += data(i, j);
    for (std::size_t j = 0; j < d; ++j) {
        centre[j] = model.kind == CohesionKind::bregman_bernoulli_kl ? adjusted_mean(centre[j], nk) : centre[j] / nk;
    }
    double s = 0.0;
    for (std::size_t i : members) s += bregman_divergence(model, data.row(i), centre);
    return s;
}

double loss(const Partition& partition, const Dataset& data, const CohesionModel& model) {
    validate(model, data);
    if (partition.n() != data.n()) throw argument_error("partition and dataset sizes differ");
    double total = 0.0;
    for (const auto& members : partition.blocks()) total += block_loss(members, data, model);
    return total;
}

double log_posterior_unnormalized(const Partition& partition, double lambda, const Dataset& data,
                                  const CohesionModel& model) {
    if (!(lambda > 0.0)) throw argument_error("lambda must be positive");
    return -lambda * posterior_scale(model) * loss(partition, data, model);
}

}  // namespace gbppm
