#pragma once

#include <iosfwd>
#include <string>

#include <gbppm/cohesion.hpp>

namespace gbppm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_runtime = 3;

// Entry point of the gbppm tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "sq-euclidean", "bernoulli-kl", "manhattan", "minkowski" (uses p) and
// "avg-dissimilarity" (uses gamma "identity" or "root", and p).
CohesionModel parse_model(const std::string& name, double p = 2.0, const std::string& gamma = "identity");
std::string model_name(const CohesionModel& model);

}  // namespace gbppm::cli
