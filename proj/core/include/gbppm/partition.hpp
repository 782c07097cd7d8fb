#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gbppm {

// A set partition of {0, ..., n-1} into exactly K nonempty blocks.
//
// Labels are stored 0-based in [0, K). Two partitions compare equal when they
// induce the same set partition, regardless of how blocks are numbered; the
// canonical labelling numbers blocks by first occurrence.
class Partition {
  public:
    // Throws invariant_error if a label is >= K or some block is empty.
    Partition(std::vector<std::size_t> labels, std::size_t K);

    // Infers K as max label + 1.
    static Partition from_labels(std::vector<std::size_t> labels);

    // From 1-based labels (the serialized form).
    static Partition from_one_based(std::span<const long long> labels);

    std::size_t n() const noexcept { return labels_.size(); }
    std::size_t K() const noexcept { return sizes_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return labels_[i]; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    const std::vector<std::size_t>& block_sizes() const noexcept { return sizes_; }
    std::size_t block_size(std::size_t k) const noexcept { return sizes_[k]; }

    // Members of every block, in ascending index order.
    std::vector<std::vector<std::size_t>> blocks() const;

    Partition canonical() const;
    bool is_canonical() const noexcept;

    // Returns the partition q with q[i] = this[order[i]].
    Partition permuted(std::span<const std::size_t> order) const;

    std::vector<long long> one_based() const;

    friend bool operator==(const Partition& a, const Partition& b);

  private:
    std::vector<std::size_t> labels_;
    std::vector<std::size_t> sizes_;
};

// First-occurrence relabelling of an arbitrary label vector.
std::vector<std::size_t> canonical_labels(std::span<const std::size_t> labels);

// Hash of the canonical labelling; consistent with operator==.
struct PartitionHash {
    std::size_t operator()(const Partition& p) const noexcept;
};

// JSON array of 1-based labels, e.g. [1,1,2].
std::string to_json(const Partition& p);
Partition partition_from_json(const std::string& text);

void save_partition(const std::string& path, const Partition& p);
Partition load_partition(const std::string& path);

}  // namespace gbppm
