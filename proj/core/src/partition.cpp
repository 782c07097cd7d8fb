#include "gbppm/partition.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gbppm/error.hpp"

namespace gbppm {

Partition::Partition(std::vector<std::size_t> labels, std::size_t K) : labels_(std::move(labels)), sizes_(K, 0) {
    if (K == 0) throw invariant_error("partition needs K >= 1");
    if (labels_.size() < K) throw invariant_error("partition has fewer points than blocks (n < K)");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= K) {
            throw invariant_error("label " + std::to_string(labels_[i] + 1) + " of point " + std::to_string(i + 1) +
                                  " exceeds K = " + std::to_string(K));
        }
        ++sizes_[labels_[i]];
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (sizes_[k] == 0) throw invariant_error("block " + std::to_string(k + 1) + " is empty");
    }
}

Partition Partition::from_labels(std::vector<std::size_t> labels) {
    if (labels.empty()) throw invariant_error("empty label vector");
    const std::size_t K = *std::max_element(labels.begin(), labels.end()) + 1;
    return Partition(std::move(labels), K);
}

Partition Partition::from_one_based(std::span<const long long> labels) {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (long long l : labels) {
        if (l < 1) throw invariant_error("labels are 1-based; got " + std::to_string(l));
        out.push_back(static_cast<std::size_t>(l - 1));
    }
    return from_labels(std::move(out));
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
    std::vector<std::vector<std::size_t>> out(K());
    for (std::size_t k = 0; k < K(); ++k) out[k].reserve(sizes_[k]);
    for (std::size_t i = 0; i < n(); ++i) out[labels_[i]].push_back(i);
    return out;
}

std::vector<std::size_t> canonical_labels(std::span<const std::size_t> labels) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> map;
    std::vector<std::size_t> out(labels.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t l = labels[i];
        if (l >= map.size()) map.resize(l + 1, unset);
        if (map[l] == unset) map[l] = next++;
        out[i] = map[l];
    }
    return out;
}

Partition Partition::canonical() const { return Partition(canonical_labels(labels_), K()); }

bool Partition::is_canonical() const noexcept {
    std::size_t next = 0;
    for (std::size_t l : labels_) {
        if (l > next) return false;
        if (l == next) ++next;
    }
    return true;
}

Partition Partition::permuted(std::span<const std::size_t> order) const {
    if (order.size() != n()) throw argument_error("permutation length mismatch");
    std::vector<std::size_t> out(n());
    for (std::size_t i = 0; i < n(); ++i) out[i] = labels_[order[i]];
    return Partition(std::move(out), K());
}

std::vector<long long> Partition::one_based() const {
    std::vector<long long> out(labels_.begin(), labels_.end());
    for (auto& l : out) ++l;
    return out;
}

bool operator==(const Partition& a, const Partition& b) {
    if (a.n() != b.n() || a.K() != b.K()) return false;
    // Same set partition iff the label correspondence is a bijection.
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> fwd(a.K(), unset), bwd(b.K(), unset);
    for (std::size_t i = 0; i < a.n(); ++i) {
        const std::size_t la = a[i], lb = b[i];
        if (fwd[la] == unset && bwd[lb] == unset) {
            fwd[la] = lb;
            bwd[lb] = la;
        } else if (fwd[la] != lb || bwd[lb] != la) {
            return false;
        }
    }
    return true;
}

std::size_t PartitionHash::operator()(const Partition& p) const noexcept {
    // FNV-1a over the canonical labels.
    std::size_t h = 1469598103934665603ull;
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> map(p.K(), unset);
    std::size_t next = 0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        auto& m = map[p[i]];
        if (m == unset) m = next++;
        h ^= m + 1;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_json(const Partition& p) { return nlohmann::json(p.one_based()).dump(); }

Partition partition_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("labels json: ") + e.what());
    }
    // Accept either a bare array or {"labels": [...]}.
    if (j.is_object() && j.contains("labels")) j = j.at("labels");
    if (!j.is_array()) throw io_error("labels json: expected an array of 1-based integers");
    std::vector<long long> labels;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw io_error("labels json: non-integer label");
        labels.push_back(v.get<long long>());
    }
    return Partition::from_one_based(labels);
}

void save_partition(const std::string& path, const Partition& p) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << to_json(p) << '\n';
}

Partition load_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return partition_from_json(ss.str());
}

}  // namespace gbppm
