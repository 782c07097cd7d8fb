#include "gbppm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbppm/error.hpp"

namespace gbppm {

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

void normalize_log_weights(std::span<double> log_w) {
    const double lse = log_sum_exp(log_w);
    if (!std::isfinite(lse)) throw invariant_error("log-weights have no finite maximum");
    for (double& x : log_w) x = std::exp(x - lse);
}

std::size_t sample_log_categorical(std::span<const double> log_w, Rng& rng) {
    const double m = *std::max_element(log_w.begin(), log_w.end());
    if (!std::isfinite(m)) throw invariant_error("log-weights have no finite maximum");
    double total = 0.0;
    for (double x : log_w) total += std::exp(x - m);
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    for (std::size_t k = 0; k < log_w.size(); ++k) {
        u -= std::exp(log_w[k] - m);
        if (u < 0.0) return k;
    }
    // Rounding left u marginally non-negative: return the last positive cell.
    for (std::size_t k = log_w.size(); k-- > 0;) {
        if (log_w[k] - m > -std::numeric_limits<double>::infinity()) return k;
    }
    return log_w.size() - 1;
}

std::size_t sample_categorical(std::span<const double> w, Rng& rng) {
    double total = 0.0;
    for (double x : w) total += x;
    if (!(total > 0.0)) throw invariant_error("categorical weights sum to zero");
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    for (std::size_t k = 0; k < w.size(); ++k) {
        u -= w[k];
        if (u < 0.0) return k;
    }
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] > 0.0) return k;
    }
    return w.size() - 1;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    // splitmix64 applied to seed + (stream + 1) * golden gamma.
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double sample_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
        throw argument_error("gamma draw needs positive finite shape and rate");
    }
    return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

}  // namespace gbppm
