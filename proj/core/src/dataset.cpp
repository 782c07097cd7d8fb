#include "gbppm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "gbppm/error.hpp"

namespace gbppm {

std::string to_string(Domain domain) { return domain == Domain::binary ? "binary" : "continuous"; }

Domain domain_from_string(const std::string& name) {
    if (name == "binary") return Domain::binary;
    if (name == "continuous") return Domain::continuous;
    throw argument_error("unknown data domain '" + name + "'");
}

Dataset::Dataset(std::vector<double> values, std::size_t n, std::size_t d, Domain domain)
    : values_(std::move(values)), n_(n), d_(d), domain_(domain) {
    if (n_ < 1 || d_ < 1) throw argument_error("dataset needs n >= 1 and d >= 1");
    if (values_.size() != n_ * d_) throw argument_error("dataset values do not match n x d");
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        const double v = values_[idx];
        if (!std::isfinite(v)) {
            throw argument_error("non-finite entry at row " + std::to_string(idx / d_ + 1));
        }
        if (domain_ == Domain::binary && v != 0.0 && v != 1.0) {
            throw domain_error("domain error: binary data has entry " + std::to_string(v) + " at row " +
                               std::to_string(idx / d_ + 1));
        }
    }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows, Domain domain) {
    if (rows.empty()) throw argument_error("dataset needs at least one row");
    const std::size_t d = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) throw argument_error("ragged rows");
        values.insert(values.end(), r.begin(), r.end());
    }
    return Dataset(std::move(values), rows.size(), d, domain);
}

Dataset Dataset::permuted(std::span<const std::size_t> order) const {
    if (order.size() != n_) throw argument_error("permutation length mismatch");
    std::vector<double> out;
    out.reserve(values_.size());
    for (std::size_t i : order) {
        auto r = row(i);
        out.insert(out.end(), r.begin(), r.end());
    }
    return Dataset(std::move(out), n_, d_, domain_);
}

std::size_t Dataset::distinct_rows() const {
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < n_; ++i) {
        auto r = row(i);
        seen.emplace(r.begin(), r.end());
    }
    return seen.size();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
        s.remove_suffix(1);
    return s;
}

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::string_view rest(line);
    while (true) {
        const auto comma = rest.find(',');
        auto field = trim(rest.substr(0, comma));
        double v = 0.0;
        // from_chars does not accept a leading '+'.
        if (!field.empty() && field.front() == '+') field.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) return false;
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return true;
}

}  // namespace

Dataset read_csv(std::istream& in, Domain domain) {
    std::vector<double> values;
    std::vector<double> row;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (!parse_row(line, row)) {
            if (n == 0 && line_no == 1) continue;  // header
            throw io_error("csv line " + std::to_string(line_no) + ": not a row of numbers");
        }
        if (n == 0) {
            d = row.size();
        } else if (row.size() != d) {
            throw io_error("csv line " + std::to_string(line_no) + ": expected " + std::to_string(d) + " columns");
        }
        values.insert(values.end(), row.begin(), row.end());
        ++n;
    }
    if (n == 0) throw io_error("csv contains no data rows");
    return Dataset(std::move(values), n, d, domain);
}

Dataset load_csv(const std::string& path, Domain domain) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return read_csv(in, domain);
}

void write_csv(std::ostream& out, const Dataset& data, const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
        out << '\n';
    }
    out << std::setprecision(17);
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.d(); ++j) out << (j ? "," : "") << data(i, j);
        out << '\n';
    }
}

void save_csv(const std::string& path, const Dataset& data, const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    write_csv(out, data, header);
}

}  // namespace gbppm
