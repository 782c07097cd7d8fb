#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gbppm {

using Rng = std::mt19937_64;

// log(sum_i exp(v_i)) with max subtraction. Returns -inf for an empty span
// or when every entry is -inf.
double log_sum_exp(std::span<const double> v);

// Turns log-weights into probabilities in place.
void normalize_log_weights(std::span<double> log_w);

// Draws an index with probability proportional to exp(log_w[k]).
std::size_t sample_log_categorical(std::span<const double> log_w, Rng& rng);

// Draws an index with probability proportional to w[k] >= 0.
std::size_t sample_categorical(std::span<const double> w, Rng& rng);

// Deterministic child seed for stream `stream` of master seed `seed`
// (splitmix64 over a counter), so parallel work is reproducible regardless
// of scheduling.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) { return Rng{split_seed(seed, stream)}; }

// Gamma(shape, rate) draw.
double sample_gamma(double shape, double rate, Rng& rng);

}  // namespace gbppm
