#pragma once

#include <string>

#include "gbppm/dataset.hpp"

namespace gbppm {

enum class CohesionKind { bregman_sq_euclidean, bregman_bernoulli_kl, avg_dissimilarity };

// Transform applied to ||x - y||_p^p before averaging.
enum class GammaSpec {
    identity,  // gamma(t) = t
    p_th_root  // gamma(t) = t^(1/p): the Minkowski distance
};

// The discrepancy family D(x_i; X_k). Only the three kinds above are
// supported; gamma and p are meaningful for avg_dissimilarity only.
struct CohesionModel {
    CohesionKind kind = CohesionKind::bregman_sq_euclidean;
    GammaSpec gamma = GammaSpec::identity;
    double p = 2.0;

    static CohesionModel squared_euclidean() { return {CohesionKind::bregman_sq_euclidean, GammaSpec::identity, 2.0}; }
    static CohesionModel bernoulli_kl() { return {CohesionKind::bregman_bernoulli_kl, GammaSpec::identity, 2.0}; }
    static CohesionModel avg_dissimilarity(GammaSpec gamma, double p) { return {CohesionKind::avg_dissimilarity, gamma, p}; }
    static CohesionModel minkowski(double p) { return avg_dissimilarity(GammaSpec::p_th_root, p); }
    static CohesionModel manhattan() { return minkowski(1.0); }

    bool is_bregman() const noexcept { return kind != CohesionKind::avg_dissimilarity; }

    friend bool operator==(const CohesionModel&, const CohesionModel&) = default;
};

// Throws argument_error for p < 1 and domain_error when the model does not
// accept the data (Bernoulli KL on non-binary data).
void validate(const CohesionModel& model);
void validate(const CohesionModel& model, const Dataset& data);

// Weight of the loss in the Gibbs posterior exponent: the posterior is
// proportional to exp{-lambda * posterior_scale * loss}. Average
// dissimilarity cohesions carry the 1/2 from the pairwise form.
double posterior_scale(const CohesionModel& model) noexcept;

// gamma(||x - y||_p^p).
double pair_dissimilarity(const CohesionModel& model, std::span<const double> x, std::span<const double> y);

// Default exponent xi of the lambda-power term: nd/2 for squared Euclidean,
// nd for Minkowski, nd/p for gamma = identity. Bernoulli KL has lambda fixed.
double default_xi(const CohesionModel& model, std::size_t n, std::size_t d);

std::string to_string(const CohesionModel& model);
std::string to_string(CohesionKind kind);
std::string to_string(GammaSpec gamma);

}  // namespace gbppm
