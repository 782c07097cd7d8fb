#include <doctest.h>

#include <cmath>

#include <gbppm/error.hpp>
#include <gbppm/gibbs.hpp>
#include <gbppm/sim.hpp>
#include <gbppm/uq.hpp>

#include "oracle.hpp"

using namespace gbppm;

namespace {

using Family = MixtureSpec::Family;

// Log density of component k up to a constant shared by all components.
double log_density(const MixtureSpec& spec, std::span<const double> x, std::size_t k) {
    double q = 0;
    for (std::size_t j = 0; j < spec.d; ++j) {
        const double r = x[j] - spec.centers[k * spec.d + j];
        q += r * r;
    }
    q /= spec.sigma2;
    if (spec.family == Family::gaussian) return -0.5 * q;
    return -0.5 * (spec.df + static_cast<double>(spec.d)) * std::log1p(q / spec.df);
}

}  // namespace

TEST_SUITE("generate") {
    TEST_CASE("default layout") {
        const auto spec = MixtureSpec::four_blobs(Family::gaussian, 1.5);
        CHECK(spec.n() == 200);
        CHECK(spec.K() == 4);
        const auto g = gen_mixture(spec, 1);
        CHECK(g.data.n() == 200);
        CHECK(g.data.d() == 2);
        CHECK(g.labels.block_sizes() == std::vector<std::size_t>{50, 50, 50, 50});
    }

    TEST_CASE("zero variance puts every row on its centre") {
        const auto spec = MixtureSpec::four_blobs(Family::gaussian, 0.0);
        const auto g = gen_mixture(spec, 2);
        for (std::size_t i = 0; i < 200; ++i) {
            const auto k = g.labels[i];
            CHECK(g.data(i, 0) == spec.centers[2 * k]);
            CHECK(g.data(i, 1) == spec.centers[2 * k + 1]);
        }
    }

    TEST_CASE("seeded output is reproducible") {
        for (auto f : {Family::gaussian, Family::student_t}) {
            const auto spec = MixtureSpec::four_blobs(f, 1.0);
            CHECK(gen_mixture(spec, 9).data.values() == gen_mixture(spec, 9).data.values());
            CHECK(gen_mixture(spec, 9).data.values() != gen_mixture(spec, 10).data.values());
        }
    }

    TEST_CASE("block means near the centres") {
        const auto spec = MixtureSpec::four_blobs(Family::gaussian, 1.5);
        const auto g = gen_mixture(spec, 3);
        for (std::size_t k = 0; k < 4; ++k) {
            for (std::size_t j = 0; j < 2; ++j) {
                double s = 0;
                for (std::size_t i = 0; i < 200; ++i)
                    if (g.labels[i] == k) s += g.data(i, j);
                CHECK(std::abs(s / 50 - spec.centers[2 * k + j]) < 3 * std::sqrt(1.5 / 50));
            }
        }
    }

    TEST_CASE("invalid specs") {
        auto spec = MixtureSpec::four_blobs(Family::gaussian, -1.0);
        CHECK_THROWS_AS(oracle_allocation(Dataset({0, 0}, 1, 2), MixtureSpec::four_blobs(Family::gaussian, 0.0)), argument_error);
        CHECK_THROWS_AS(gen_mixture(spec, 0), argument_error);
        spec = MixtureSpec::four_blobs(Family::student_t, 1.0, 0.0);
        CHECK_THROWS_AS(gen_mixture(spec, 0), argument_error);
        spec = MixtureSpec::four_blobs(Family::gaussian, 1.0);
        spec.centers.pop_back();
        CHECK_THROWS_AS(gen_mixture(spec, 0), argument_error);
    }
}

TEST_SUITE("oracle") {
    TEST_CASE("allocation probabilities follow the component densities") {
        for (auto f : {Family::gaussian, Family::student_t}) {
            const auto spec = MixtureSpec::four_blobs(f, 1.5);
            const auto g = gen_mixture(spec, 4);
            const auto p = oracle_allocation(g.data, spec);
            for (std::size_t i = 0; i < 200; ++i) {
                std::vector<double> w(4);
                for (std::size_t k = 0; k < 4; ++k) w[k] = log_density(spec, g.data.row(i), k);
                normalize_log_weights(w);
                double total = 0;
                for (std::size_t k = 0; k < 4; ++k) {
                    CHECK(p[i * 4 + k] == doctest::Approx(w[k]).epsilon(1e-10));
                    total += p[i * 4 + k];
                }
                CHECK(std::abs(total - 1) < 1e-12);
            }
        }
    }

    TEST_CASE("co-clustering is symmetric with a unit diagonal") {
        const auto spec = MixtureSpec::four_blobs(Family::student_t, 1.0);
        const auto o = oracle_coclustering(gen_mixture(spec, 5).data, spec);
        for (std::size_t i = 0; i < 200; ++i) {
            CHECK(o.coclustering(i, i) == 1.0);
            for (std::size_t j = 0; j < 200; ++j) {
                CHECK(o.coclustering(i, j) == o.coclustering(j, i));
                CHECK(o.coclustering(i, j) >= 0.0);
                CHECK(o.coclustering(i, j) <= 1.0 + 1e-12);
            }
        }
    }

    TEST_CASE("small variance gives an indicator matrix") {
        const auto spec = MixtureSpec::four_blobs(Family::gaussian, 1e-3);
        const auto g = gen_mixture(spec, 6);
        const auto o = oracle_coclustering(g.data, spec);
        for (std::size_t i = 0; i < 200; ++i)
            for (std::size_t j = 0; j < 200; ++j)
                CHECK(o.coclustering(i, j) == doctest::Approx(g.labels[i] == g.labels[j] ? 1.0 : 0.0));
    }

    TEST_CASE("a point at a centre beats every block member on the inner side") {
        // With equal spherical components the log odds against each rival are
        // linear in x, so moving from the centre towards the rivals can only
        // raise the misclassification probability. Members lying beyond the
        // centre, away from the rivals, may be more certain than the centre.
        auto spec = MixtureSpec::four_blobs(Family::gaussian, 1.5);
        auto g = gen_mixture(spec, 7);
        auto v = g.data.values();
        v[0] = spec.centers[0];
        v[1] = spec.centers[1];
        Dataset x(v, 200, 2);
        const auto o = oracle_coclustering(x, spec);
        std::size_t inner = 0, outward_better = 0;
        for (std::size_t i = 1; i < 50; ++i) {
            if (x(i, 0) >= -2 && x(i, 1) >= -2) {
                ++inner;
                CHECK(o.misclassification[i] >= o.misclassification[0]);
            } else if (x(i, 0) < -2 && x(i, 1) < -2) {
                outward_better += o.misclassification[i] < o.misclassification[0];
            }
        }
        CHECK(inner > 0);
        CHECK(outward_better > 0);
    }

    TEST_CASE("closed form agrees with an oracle Gibbs chain") {
        // The oracle posterior is a Gibbs posterior whose per-point loss is
        // the negative log density, so an independent sampler over labels is
        // exact: each label is drawn from its allocation probabilities.
        const auto spec = MixtureSpec::four_blobs(Family::gaussian, 3.0);
        auto small = spec;
        small.sizes = {5, 5, 5, 5};
        const auto g = gen_mixture(small, 8);
        const auto o = oracle_coclustering(g.data, small);
        auto rng = make_rng(8);
        std::vector<Partition> draws;
        const auto p = o.allocation;
        for (int t = 0; t < 40000; ++t) {
            std::vector<std::size_t> l(20);
            for (std::size_t i = 0; i < 20; ++i) {
                std::vector<double> w(p.begin() + i * 4, p.begin() + i * 4 + 4);
                l[i] = sample_categorical(w, rng);
            }
            draws.push_back(Partition::from_labels(canonical_labels(l)));
        }
        const auto s = coclustering(draws);
        for (std::size_t i = 0; i < 20; ++i)
            for (std::size_t j = 0; j < 20; ++j) CHECK(std::abs(s(i, j) - o.coclustering(i, j)) < 0.02);
    }
}
