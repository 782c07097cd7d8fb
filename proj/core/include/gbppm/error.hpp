#pragma once

#include <stdexcept>
#include <string>

namespace gbppm {

// Base of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad user-supplied argument (sizes, ranges, flags).
class argument_error : public error {
  public:
    using error::error;
};

// Data outside the domain a cohesion is defined on, e.g. non-binary rows
// for the Bernoulli KL model or a divergence evaluated at a boundary mean.
class domain_error : public error {
  public:
    using error::error;
};

// Invalid sampler / model configuration.
class config_error : public error {
  public:
    using error::error;
};

// A caller broke an operation's precondition, e.g. resampling the sole
// member of a block.
class contract_error : public error {
  public:
    using error::error;
};

// An internal invariant no longer holds (empty block, stale cache).
class invariant_error : public error {
  public:
    using error::error;
};

class overflow_error : public error {
  public:
    using error::error;
};

// A configured size/memory cap would be exceeded.
class resource_error : public error {
  public:
    using error::error;
};

// Data cannot support the requested number of clusters.
class degenerate_data_error : public error {
  public:
    using error::error;
};

class io_error : public error {
  public:
    using error::error;
};

}  // namespace gbppm
