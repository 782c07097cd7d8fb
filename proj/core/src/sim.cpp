#include "gbppm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbppm/error.hpp"
#include "gbppm/numeric.hpp"

namespace gbppm {

std::size_t MixtureSpec::n() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }

MixtureSpec MixtureSpec::four_blobs(Family family, double sigma2, double df) {
    MixtureSpec s;
    s.family = family;
    s.sigma2 = sigma2;
    s.df = df;
    return s;
}

void MixtureSpec::validate() const {
    if (d < 1) throw argument_error("mixture dimension must be >= 1");
    if (sizes.empty()) throw argument_error("mixture needs at least one component");
    if (centers.size() != sizes.size() * d) throw argument_error("centers must hold K x d values");
    for (std::size_t s : sizes)
        if (s < 1) throw argument_error("component sizes must be >= 1");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw argument_error("sigma2 must be non-negative");
    if (family == Family::student_t && (!(df > 0.0) || !std::isfinite(df))) {
        throw argument_error("degrees of freedom must be positive");
    }
}

GeneratedData gen_mixture(const MixtureSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(spec.family == MixtureSpec::Family::student_t ? spec.df : 1.0);
    const double sigma = std::sqrt(spec.sigma2);
    const std::size_t d = spec.d;
    std::vector<double> values;
    values.reserve(spec.n() * d);
    std::vector<std::size_t> labels;
    labels.reserve(spec.n());
    for (std::size_t k = 0; k < spec.K(); ++k) {
        for (std::size_t r = 0; r < spec.sizes[k]; ++r) {
            double scale = sigma;
            if (spec.family == MixtureSpec::Family::student_t) scale /= std::sqrt(chi2(rng) / spec.df);
            for (std::size_t j = 0; j < d; ++j) values.push_back(spec.centers[k * d + j] + scale * normal(rng));
            labels.push_back(k);
        }
    }
    const std::size_t n = labels.size();
    return {Dataset(std::move(values), n, d), Partition(std::move(labels), spec.K())};
}

std::vector<double> oracle_allocation(const Dataset& data, const MixtureSpec& spec) {
    spec.validate();
    if (data.d() != spec.d) throw argument_error("dataset and mixture dimensions differ");
    if (!(spec.sigma2 > 0.0)) throw argument_error("oracle allocation needs sigma2 > 0");
    const std::size_t K = spec.K();
    const double d = static_cast<double>(spec.d);
    std::vector<double> out(data.n() * K);
    std::vector<double> logw(K);
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            double q = 0.0;
            for (std::size_t j = 0; j < spec.d; ++j) {
                const double t = data(i, j) - spec.centers[k * spec.d + j];
                q += t * t;
            }
            q /= spec.sigma2;
            logw[k] = spec.family == MixtureSpec::Family::gaussian ? -0.5 * q
                                                                   : -0.5 * (spec.df + d) * std::log1p(q / spec.df);
        }
        normalize_log_weights(logw);
        std::copy(logw.begin(), logw.end(), out.begin() + static_cast<std::ptrdiff_t>(i * K));
    }
    return out;
}

OracleSummary oracle_coclustering(const Dataset& data, const MixtureSpec& spec) {
    const std::size_t n = data.n();
    const std::size_t K = spec.K();
    auto p = oracle_allocation(data, spec);
    std::vector<double> s(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k < K; ++k) v += p[i * K + k] * p[j * K + k];
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    std::vector<std::size_t> estimate(n);
    std::vector<double> miss(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = p.begin() + static_cast<std::ptrdiff_t>(i * K);
        estimate[i] = static_cast<std::size_t>(std::max_element(row, row + static_cast<std::ptrdiff_t>(K)) - row);
        miss[i] = 1.0 - p[i * K + estimate[i]];
    }
    return {CoClusteringMatrix(std::move(s), n, 0), std::move(p), std::move(estimate), std::move(miss)};
}

}  // namespace gbppm
