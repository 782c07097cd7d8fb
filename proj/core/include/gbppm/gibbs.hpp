#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gbppm/block_stats.hpp"
#include "gbppm/cohesion.hpp"
#include "gbppm/dataset.hpp"
#include "gbppm/dissim.hpp"
#include "gbppm/numeric.hpp"
#include "gbppm/partition.hpp"

namespace gbppm {

struct FixedLambda {
    double value = 1.0;
};

// lambda ~ Gamma(shape, rate) a priori (shape-rate convention), with the
// pseudo-likelihood contributing lambda^xi. Gamma(1, 0) is the flat prior.
// An unset xi means default_xi(model, n, d).
struct HierarchicalLambda {
    double shape = 1.0;
    double rate = 0.0;
    std::optional<double> xi;
};

struct GibbsConfig {
    std::variant<FixedLambda, HierarchicalLambda> lambda_mode = FixedLambda{};
    // Weight of the joint loss lambda * loss - xi log(lambda). 1 by default.
    double lambda_tilde = 1.0;
    // Total sweeps, burn-in included.
    std::size_t n_iterations = 6000;
    std::size_t n_burnin = 1000;
    std::size_t thin = 1;
    std::uint64_t rng_seed = 0;
    // Recompute the loss from scratch every this many sweeps (0 = never).
    std::size_t integrity_every = 1000;

    bool hierarchical() const noexcept { return std::holds_alternative<HierarchicalLambda>(lambda_mode); }

    // Throws config_error on invalid values.
    void validate() const;
};

// Mutable state of one chain. Owns its statistics and random stream; data,
// model and the dissimilarity matrix are borrowed read-only. Without a
// matrix, average-dissimilarity chains build a private one.
class ChainState {
  public:
    ChainState(const Dataset& data, const CohesionModel& model, const Partition& init, double lambda,
               std::uint64_t seed, const DissimMatrix* dissim = nullptr, double lambda_tilde = 1.0);

    const Dataset& data() const noexcept { return *data_; }
    const CohesionModel& model() const noexcept { return model_; }

    double lambda() const noexcept { return lambda_; }
    void set_lambda(double lambda);
    double lambda_tilde() const noexcept { return lambda_tilde_; }

    // Multiplier of the loss in the log full conditionals.
    double inverse_temperature() const noexcept { return lambda_ * lambda_tilde_ * posterior_scale(model_); }

    double loss() const { return stats_->loss(); }
    Partition partition() const { return stats_->partition(); }
    const BlockStats& stats() const noexcept { return *stats_; }
    BlockStats& stats() noexcept { return *stats_; }
    Rng& rng() noexcept { return rng_; }

    // Recomputes the loss from scratch and compares it with the cached value;
    // throws invariant_error if |cached - fresh| >= rel_tol * (1 + fresh).
    // Statistics are then rebuilt to shed accumulated rounding.
    void check_integrity(double rel_tol = 1e-8);

  private:
    const Dataset* data_;
    CohesionModel model_;
    std::unique_ptr<DissimMatrix> owned_dissim_;
    std::unique_ptr<BlockStats> stats_;
    double lambda_;
    double lambda_tilde_;
    Rng rng_;
};

// P(c_i = k | c_-i, lambda, X) for k = 0..K-1, proportional to
// exp{-lambda * lambda_tilde * scale * Delta_k}. Throws contract_error when i
// is the sole member of its block.
std::vector<double> full_conditional(std::size_t i, const ChainState& state);

// Resamples every non-singleton label once, in ascending order.
void gibbs_sweep(ChainState& state);

// Draws lambda | c, X ~ Gamma(shape + lambda_tilde * xi,
//                             rate + lambda_tilde * scale * loss).
// Requires hierarchical mode and a model other than Bernoulli KL.
double sample_lambda(ChainState& state, const GibbsConfig& config);

struct ChainMeta {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t K = 0;
    CohesionModel model;
    GibbsConfig config;
};

// Post-burn-in draws. losses are raw factorized losses (without the
// posterior scale). trace_* cover every sweep, burn-in included.
struct ChainSamples {
    std::vector<Partition> partitions;
    std::vector<double> lambdas;
    std::vector<double> losses;
    std::vector<double> trace_loss;
    std::vector<double> trace_lambda;
    ChainMeta meta;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return partitions.size(); }
    bool empty() const noexcept { return partitions.empty(); }
};

// Runs config.n_iterations sweeps from init, each followed by a lambda
// update in hierarchical mode, and keeps every thin-th post-burn-in state.
ChainSamples run_chain(const Dataset& data, const CohesionModel& model, const GibbsConfig& config,
                       const Partition& init, const DissimMatrix* dissim = nullptr);

}  // namespace gbppm
