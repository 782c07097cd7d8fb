#include "studies.hpp"

#include <algorithm>
#include <numeric>

#include <gbppm/error.hpp>
#include <gbppm/numeric.hpp>

namespace gbppm::studies {

namespace {

std::vector<std::size_t> k_range(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> ks;
    for (std::size_t k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
}

std::size_t best_k(const std::vector<SilhouettePoint>& curve) {
    std::size_t k = 0;
    double best = -2.0;
    for (const auto& p : curve) {
        if (p.silhouette > best) {
            best = p.silhouette;
            k = p.K;
        }
    }
    return k;
}

GibbsConfig flat_prior_config(std::size_t iterations, std::size_t burnin, std::uint64_t seed) {
    GibbsConfig config;
    config.lambda_mode = HierarchicalLambda{1.0, 0.0, std::nullopt};
    config.n_iterations = iterations;
    config.n_burnin = burnin;
    config.rng_seed = seed;
    return config;
}

}  // namespace

Sim1Result run_sim1(const Sim1Options& o) {
    auto generated = gen_mixture(MixtureSpec::four_blobs(MixtureSpec::Family::gaussian, o.sigma2), split_seed(o.seed, 1));
    const auto& data = generated.data;
    const auto model = CohesionModel::squared_euclidean();

    FitOptions fit;
    fit.restarts = o.restarts;
    fit.seed = split_seed(o.seed, 2);
    auto map = fit_map(data, model, 4, fit);

    auto chain = run_chain(data, model, flat_prior_config(o.iterations, o.burnin, split_seed(o.seed, 3)), map.partition);
    auto s = coclustering(chain);
    const auto spec = MixtureSpec::four_blobs(MixtureSpec::Family::gaussian, o.sigma2);
    auto oracle = oracle_coclustering(data, spec);
    const double mad = s.mean_abs_deviation(oracle.coclustering);
    auto ball = credible_ball(chain, map.partition, o.alpha);

    const auto med = medoids(map.partition, data, model);
    auto miss = misclassification(s, map.partition, med);
    auto oracle_miss = misclassification(oracle.coclustering, map.partition, med);
    const double lambda_mean =
        std::accumulate(chain.lambdas.begin(), chain.lambdas.end(), 0.0) / static_cast<double>(chain.lambdas.size());

    return {o.sigma2,        std::move(generated), std::move(map),  std::move(chain),       std::move(s),
            std::move(oracle), mad,                std::move(ball), std::move(miss), std::move(oracle_miss),
            lambda_mean};
}

Sim2Replicate run_sim2(const Sim2Options& o) {
    const auto spec = MixtureSpec::four_blobs(MixtureSpec::Family::student_t, 1.0, 2.0);
    const auto generated = gen_mixture(spec, split_seed(o.seed, 1));
    const auto& data = generated.data;
    const auto oracle = oracle_coclustering(data, spec);

    const auto sq_pairwise = CohesionModel::avg_dissimilarity(GammaSpec::identity, 2.0);
    const auto manhattan = CohesionModel::manhattan();
    const auto sq_dissim = pairwise_matrix(data, sq_pairwise);
    const auto l1_dissim = pairwise_matrix(data, manhattan);

    FitOptions fit;
    fit.restarts = o.restarts;
    fit.seed = split_seed(o.seed, 2);

    Sim2Replicate out{};
    {
        const auto map = fit_map(data, sq_pairwise, 4, fit, &sq_dissim);
        const auto chain = run_chain(data, CohesionModel::squared_euclidean(),
                                     flat_prior_config(o.iterations, o.burnin, split_seed(o.seed, 3)), map.partition);
        out.mad_sq_euclidean = coclustering(chain).mean_abs_deviation(oracle.coclustering);
    }
    {
        const auto map = fit_map(data, manhattan, 4, fit, &l1_dissim);
        const auto chain = run_chain(data, manhattan, flat_prior_config(o.iterations, o.burnin, split_seed(o.seed, 4)),
                                     map.partition, &l1_dissim);
        out.mad_manhattan = coclustering(chain).mean_abs_deviation(oracle.coclustering);
    }
    if (o.silhouette) {
        const auto ks = k_range(o.k_min, o.k_max);
        out.silhouette_sq_euclidean = silhouette_curve(data, sq_pairwise, ks, fit, sq_dissim);
        out.silhouette_manhattan = silhouette_curve(data, manhattan, ks, fit, l1_dissim);
        out.selected_k_sq_euclidean = best_k(out.silhouette_sq_euclidean);
        out.selected_k_manhattan = best_k(out.silhouette_manhattan);
    }
    return out;
}

CarcinomaResult run_carcinoma(const Dataset& data, const CarcinomaOptions& o) {
    if (data.domain() != Domain::binary) throw domain_error("domain error: ratings must be binary");
    const auto model = CohesionModel::bernoulli_kl();
    FitOptions fit;
    fit.restarts = o.restarts;
    fit.seed = split_seed(o.seed, 2);

    CarcinomaResult r{elbow_curve(data, model, k_range(1, std::min(o.elbow_max, data.n())), fit),
                      fit_map(data, model, o.K, fit),
                      {},
                      Partition({0}, 1),
                      {},
                      {}};

    GibbsConfig config;
    config.lambda_mode = FixedLambda{1.0};
    config.n_iterations = o.iterations;
    config.n_burnin = o.burnin;
    config.rng_seed = split_seed(o.seed, 3);
    r.chain = run_chain(data, model, config, r.map.partition);

    // Renumber blocks from mostly-zero to mostly-one ratings.
    const auto vi = vi_point_estimate(r.chain);
    const auto raw = adjusted_centroids(data, vi);
    std::vector<double> level(vi.K(), 0.0);
    for (std::size_t k = 0; k < vi.K(); ++k)
        for (std::size_t j = 0; j < raw.d; ++j) level[k] += raw.row(k)[j];
    std::vector<std::size_t> order(vi.K());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return level[a] < level[b]; });
    std::vector<std::size_t> rank(vi.K());
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
    auto labels = vi.labels();
    for (auto& l : labels) l = rank[l];
    r.vi_estimate = Partition(std::move(labels), vi.K());
    r.centroids = adjusted_centroids(data, r.vi_estimate);

    for (const auto& x : o.new_points) {
        r.predictive.push_back(predictive_allocation(x, r.vi_estimate, 1.0, data, model));
    }
    return r;
}

}  // namespace gbppm::studies
