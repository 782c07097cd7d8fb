#include "gbppm/gibbs.hpp"

#include <cmath>

#include "gbppm/error.hpp"

namespace gbppm {

void GibbsConfig::validate() const {
    if (const auto* fixed = std::get_if<FixedLambda>(&lambda_mode)) {
        if (!(fixed->value > 0.0) || !std::isfinite(fixed->value)) throw config_error("lambda must be positive");
    } else {
        const auto& h = std::get<HierarchicalLambda>(lambda_mode);
        if (!(h.shape > 0.0) || !std::isfinite(h.shape)) throw config_error("lambda prior shape must be positive");
        if (!(h.rate >= 0.0) || !std::isfinite(h.rate)) throw config_error("lambda prior rate must be non-negative");
        if (h.xi && (!(*h.xi >= 0.0) || !std::isfinite(*h.xi))) throw config_error("xi must be non-negative");
    }
    if (!(lambda_tilde > 0.0) || !std::isfinite(lambda_tilde)) throw config_error("lambda_tilde must be positive");
    if (n_iterations < 1) throw config_error("n_iterations must be >= 1");
    if (n_burnin > n_iterations) throw config_error("n_burnin must not exceed n_iterations");
    if (thin < 1) throw config_error("thin must be >= 1");
}

ChainState::ChainState(const Dataset& data, const CohesionModel& model, const Partition& init, double lambda,
                       std::uint64_t seed, const DissimMatrix* dissim, double lambda_tilde)
    : data_(&data), model_(model), lambda_tilde_(lambda_tilde), rng_(make_rng(seed)) {
    set_lambda(lambda);
    if (!(lambda_tilde > 0.0)) throw argument_error("lambda_tilde must be positive");
    if (model.kind == CohesionKind::avg_dissimilarity && dissim == nullptr) {
        owned_dissim_ = std::make_unique<DissimMatrix>(pairwise_matrix(data, model));
        dissim = owned_dissim_.get();
    }
    stats_ = make_block_stats(data, model, init, dissim);
}

void ChainState::set_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw argument_error("lambda must be positive and finite");
    lambda_ = lambda;
}

void ChainState::check_integrity(double rel_tol) {
    const double cached = stats_->loss();
    stats_->rebuild();
    const double fresh = stats_->loss();
    if (!(std::abs(cached - fresh) < rel_tol * (1.0 + std::abs(fresh)))) {
        throw invariant_error("cached loss " + std::to_string(cached) + " drifted from recomputed " +
                              std::to_string(fresh));
    }
}

namespace {

void conditional_log_weights(std::size_t i, const ChainState& state, std::vector<double>& out) {
    const BlockStats& s = state.stats();
    if (s.size(s.label(i)) == 1) throw contract_error("full conditional of the sole member of a block");
    const double beta = state.inverse_temperature();
    out.resize(s.K());
    for (std::size_t k = 0; k < s.K(); ++k) out[k] = -beta * s.delta(i, k);
}

}  // namespace

std::vector<double> full_conditional(std::size_t i, const ChainState& state) {
    std::vector<double> w;
    conditional_log_weights(i, state, w);
    normalize_log_weights(w);
    return w;
}

void gibbs_sweep(ChainState& state) {
    BlockStats& s = state.stats();
    std::vector<double> w;
    for (std::size_t i = 0; i < s.n(); ++i) {
        if (s.size(s.label(i)) == 1) continue;
        conditional_log_weights(i, state, w);
        s.move(i, sample_log_categorical(w, state.rng()));
    }
}

namespace {

struct GammaParams {
    double shape;
    double rate;
};

GammaParams lambda_conditional(const ChainState& state, const HierarchicalLambda& h) {
    const auto& data = state.data();
    const double xi = h.xi ? *h.xi : default_xi(state.model(), data.n(), data.d());
    const double t = state.lambda_tilde();
    return {h.shape + t * xi, h.rate + t * posterior_scale(state.model()) * state.loss()};
}

}  // namespace

double sample_lambda(ChainState& state, const GibbsConfig& config) {
    const auto* h = std::get_if<HierarchicalLambda>(&config.lambda_mode);
    if (h == nullptr) throw config_error("lambda is fixed; no update");
    if (state.model().kind == CohesionKind::bregman_bernoulli_kl) {
        throw config_error("the Bernoulli KL cohesion has lambda fixed at 1");
    }
    const auto g = lambda_conditional(state, *h);
    if (!(g.rate > 0.0)) {
        throw degenerate_data_error("degenerate data: zero loss and zero prior rate leave lambda improper");
    }
    const double lambda = sample_gamma(g.shape, g.rate, state.rng());
    state.set_lambda(lambda);
    return lambda;
}

ChainSamples run_chain(const Dataset& data, const CohesionModel& model, const GibbsConfig& config,
                       const Partition& init, const DissimMatrix* dissim) {
    config.validate();
    const auto* h = std::get_if<HierarchicalLambda>(&config.lambda_mode);
    if (h != nullptr && model.kind == CohesionKind::bregman_bernoulli_kl) {
        throw config_error("the Bernoulli KL cohesion has lambda fixed at 1; no hierarchical lambda");
    }
    if (init.n() != data.n()) throw argument_error("initial partition and dataset sizes differ");

    double lambda0 = 1.0;
    if (h == nullptr) lambda0 = std::get<FixedLambda>(config.lambda_mode).value;
    ChainState state(data, model, init, lambda0, config.rng_seed, dissim, config.lambda_tilde);
    if (h != nullptr) {
        // Start from the mean of lambda's conditional at the initial partition.
        const auto g = lambda_conditional(state, *h);
        if (!(g.rate > 0.0)) {
            throw degenerate_data_error("degenerate data: zero loss and zero prior rate leave lambda improper");
        }
        state.set_lambda(g.shape / g.rate);
    }

    ChainSamples out;
    out.meta = {data.n(), data.d(), init.K(), model, config};
    const std::size_t kept = (config.n_iterations - config.n_burnin + config.thin - 1) / config.thin;
    out.partitions.reserve(kept);
    out.trace_loss.reserve(config.n_iterations);
    out.trace_lambda.reserve(config.n_iterations);

    for (std::size_t t = 0; t < config.n_iterations; ++t) {
        gibbs_sweep(state);
        if (h != nullptr) sample_lambda(state, config);
        if (config.integrity_every > 0 && (t + 1) % config.integrity_every == 0) state.check_integrity();
        const double loss = state.loss();
        out.trace_loss.push_back(loss);
        out.trace_lambda.push_back(state.lambda());
        if (t >= config.n_burnin && (t - config.n_burnin) % config.thin == 0) {
            out.partitions.push_back(state.partition());
            out.lambdas.push_back(state.lambda());
            out.losses.push_back(loss);
        }
    }

    if (out.partitions.empty()) {
        out.warnings.push_back("burn-in covers every iteration; no draws were kept");
    }
    bool moved = false;
    for (std::size_t s = 1; s < out.partitions.size() && !moved; ++s) {
        moved = out.partitions[s].labels() != out.partitions[0].labels();
    }
    if (!moved && out.partitions.size() > 1) {
        out.warnings.push_back("the partition never changed after burn-in; lambda may be too large to mix");
    }
    return out;
}

}  // namespace gbppm
