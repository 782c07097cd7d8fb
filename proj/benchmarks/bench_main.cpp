#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <gbppm/bregman.hpp>
#include <gbppm/dissim.hpp>
#include <gbppm/gibbs.hpp>
#include <gbppm/sim.hpp>
#include <gbppm/uq.hpp>

using namespace gbppm;

namespace {

Dataset blobs(std::size_t per_block) {
    auto spec = MixtureSpec::four_blobs(MixtureSpec::Family::gaussian, 1.5);
    spec.sizes.assign(4, per_block);
    return gen_mixture(spec, 1).data;
}

Partition cyclic(std::size_t n, std::size_t K) {
    std::vector<std::size_t> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = i % K;
    return Partition(l, K);
}

void BM_GibbsSweepBregman(benchmark::State& state) {
    const auto x = blobs(static_cast<std::size_t>(state.range(0)) / 4);
    ChainState chain(x, CohesionModel::squared_euclidean(), cyclic(x.n(), 4), 1.0, 1);
    for (auto _ : state) gibbs_sweep(chain);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.n()));
}
BENCHMARK(BM_GibbsSweepBregman)->Arg(200)->Arg(2000);

void BM_GibbsSweepDissim(benchmark::State& state) {
    const auto x = blobs(static_cast<std::size_t>(state.range(0)) / 4);
    const auto m = pairwise_matrix(x, CohesionModel::manhattan());
    ChainState chain(x, CohesionModel::manhattan(), cyclic(x.n(), 4), 1.0, 1, &m);
    for (auto _ : state) gibbs_sweep(chain);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.n()));
}
BENCHMARK(BM_GibbsSweepDissim)->Arg(200)->Arg(2000);

void BM_KMeans(benchmark::State& state) {
    const auto x = blobs(static_cast<std::size_t>(state.range(0)) / 4);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(bregman_kmeans(x, CohesionModel::squared_euclidean(), 4, InitSpec::plus_plus(++seed)));
}
BENCHMARK(BM_KMeans)->Arg(200)->Arg(2000);

void BM_KDissimilarities(benchmark::State& state) {
    const auto x = blobs(static_cast<std::size_t>(state.range(0)) / 4);
    const auto m = pairwise_matrix(x, CohesionModel::manhattan());
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(k_dissimilarities(m, 4, InitSpec::plus_plus(++seed)));
}
BENCHMARK(BM_KDissimilarities)->Arg(200)->Arg(2000);

void BM_PairwiseMatrix(benchmark::State& state) {
    const auto x = blobs(static_cast<std::size_t>(state.range(0)) / 4);
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_matrix(x, CohesionModel::minkowski(1.5)));
}
BENCHMARK(BM_PairwiseMatrix)->Arg(200)->Arg(2000);

void BM_Coclustering(benchmark::State& state) {
    const auto x = blobs(50);
    GibbsConfig c;
    c.lambda_mode = FixedLambda{1.0};
    c.n_iterations = static_cast<std::size_t>(state.range(0)) + 100;
    c.n_burnin = 100;
    const auto chain = run_chain(x, CohesionModel::squared_euclidean(), c, cyclic(x.n(), 4));
    for (auto _ : state) benchmark::DoNotOptimize(coclustering(chain));
}
BENCHMARK(BM_Coclustering)->Arg(1000)->Arg(5000);

}  // namespace
BENCHMARK_MAIN();
