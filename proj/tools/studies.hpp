#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gbppm/bregman.hpp>
#include <gbppm/gibbs.hpp>
#include <gbppm/init.hpp>
#include <gbppm/select.hpp>
#include <gbppm/sim.hpp>
#include <gbppm/uq.hpp>

namespace gbppm::studies {

// Four Gaussian blobs, squared-Euclidean GB-PPM with a flat prior on lambda,
// compared against the oracle posterior.
struct Sim1Options {
    double sigma2 = 1.5;
    std::uint64_t seed = 1;
    std::size_t iterations = 6000;
    std::size_t burnin = 1000;
    double alpha = 0.05;
    std::size_t restarts = 10;
};

struct Sim1Result {
    double sigma2;
    GeneratedData generated;
    MapResult map;
    ChainSamples chain;
    CoClusteringMatrix coclustering;
    OracleSummary oracle;
    double mean_abs_deviation;
    CredibleBall ball;
    std::vector<double> misclassification;
    std::vector<double> oracle_misclassification;
    double lambda_mean;
};

Sim1Result run_sim1(const Sim1Options& options);

// Student-t blobs: squared Euclidean against Manhattan.
struct Sim2Options {
    std::uint64_t seed = 1;
    std::size_t iterations = 6000;
    std::size_t burnin = 1000;
    std::size_t restarts = 10;
    std::size_t k_min = 2;
    std::size_t k_max = 8;
    bool silhouette = true;
};

struct Sim2Replicate {
    double mad_sq_euclidean;
    double mad_manhattan;
    std::vector<SilhouettePoint> silhouette_sq_euclidean;
    std::vector<SilhouettePoint> silhouette_manhattan;
    std::size_t selected_k_sq_euclidean = 0;
    std::size_t selected_k_manhattan = 0;
};

Sim2Replicate run_sim2(const Sim2Options& options);

// Binary ratings, Bernoulli-KL GB-PPM with lambda = 1.
struct CarcinomaOptions {
    std::uint64_t seed = 1;
    std::size_t K = 3;
    std::size_t iterations = 16000;
    std::size_t burnin = 1000;
    std::size_t restarts = 10;
    std::size_t elbow_max = 6;
    std::vector<std::vector<double>> new_points = {
        {0, 1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 1, 0, 0}, {1, 1, 1, 0, 1, 0, 1}};
};

struct CarcinomaResult {
    std::vector<ElbowPoint> elbow;
    MapResult map;
    ChainSamples chain;
    // Blocks renumbered by increasing mean adjusted centroid.
    Partition vi_estimate;
    Centroids centroids;
    std::vector<std::vector<double>> predictive;
};

CarcinomaResult run_carcinoma(const Dataset& data, const CarcinomaOptions& options);

}  // namespace gbppm::studies
