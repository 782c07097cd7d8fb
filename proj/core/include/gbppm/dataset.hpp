#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gbppm {

enum class Domain { continuous, binary };

std::string to_string(Domain domain);
Domain domain_from_string(const std::string& name);

// Dense n x d matrix of observations, row-major. Immutable once built.
class Dataset {
  public:
    Dataset(std::vector<double> values, std::size_t n, std::size_t d, Domain domain = Domain::continuous);

    // Builds from a list of equally sized rows.
    static Dataset from_rows(const std::vector<std::vector<double>>& rows, Domain domain = Domain::continuous);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    Domain domain() const noexcept { return domain_; }

    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * d_, d_}; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * d_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }

    // Returns the dataset with rows reordered so that row i of the result is
    // row order[i] of this one.
    Dataset permuted(std::span<const std::size_t> order) const;

    // Number of distinct rows (exact comparison).
    std::size_t distinct_rows() const;

  private:
    std::vector<double> values_;
    std::size_t n_;
    std::size_t d_;
    Domain domain_;
};

// Reads a CSV of reals. A first line that does not parse as numbers is
// treated as a header. Binary domain is validated on load.
Dataset read_csv(std::istream& in, Domain domain = Domain::continuous);
Dataset load_csv(const std::string& path, Domain domain = Domain::continuous);

void write_csv(std::ostream& out, const Dataset& data, const std::vector<std::string>& header = {});
void save_csv(const std::string& path, const Dataset& data, const std::vector<std::string>& header = {});

}  // namespace gbppm
