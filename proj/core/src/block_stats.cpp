#include "gbppm/block_stats.hpp"

#include <algorithm>
#include <cmath>

#include "gbppm/error.hpp"

namespace gbppm {

BlockStats::BlockStats(std::vector<std::size_t> labels, std::size_t K) : labels_(std::move(labels)), sizes_(K, 0) {
    for (std::size_t l : labels_) ++sizes_[l];
}

double BlockStats::loss() const {
    double s = 0.0;
    for (std::size_t k = 0; k < K(); ++k) s += block_loss(k);
    return s;
}

void BlockStats::move(std::size_t i, std::size_t to) {
    const std::size_t from = labels_[i];
    if (from == to) return;
    if (sizes_[from] == 1) throw contract_error("cannot move the sole member of a block");
    on_move(i, from, to);
    --sizes_[from];
    ++sizes_[to];
    labels_[i] = to;
}

namespace {

class SqEuclideanStats final : public BlockStats {
  public:
    SqEuclideanStats(const Dataset& data, const Partition& p) : BlockStats(p.labels(), p.K()), data_(data) {
        rebuild();
    }

    double block_loss(std::size_t k) const override {
        const double* s = sums_.data() + k * d();
        double norm = 0.0;
        for (std::size_t j = 0; j < d(); ++j) norm += s[j] * s[j];
        return std::max(0.0, sumsq_[k] - norm / static_cast<double>(sizes_[k]));
    }

    double insertion_delta(std::size_t i, std::size_t k) const override {
        return insertion_delta_point(data_.row(i), k);
    }

    double removal_delta(std::size_t i) const override {
        const std::size_t k = labels_[i];
        const double m = static_cast<double>(sizes_[k]);
        if (sizes_[k] == 1) return 0.0;
        const double* s = sums_.data() + k * d();
        double dist = 0.0;
        for (std::size_t j = 0; j < d(); ++j) {
            const double t = data_(i, j) - (s[j] - data_(i, j)) / (m - 1.0);
            dist += t * t;
        }
        return (m - 1.0) / m * dist;
    }

    double insertion_delta_point(std::span<const double> x, std::size_t k) const override {
        const double m = static_cast<double>(sizes_[k]);
        const double* s = sums_.data() + k * d();
        double dist = 0.0;
        for (std::size_t j = 0; j < d(); ++j) {
            const double t = x[j] - s[j] / m;
            dist += t * t;
        }
        return m / (m + 1.0) * dist;
    }

    void rebuild() override {
        std::fill(sizes_.begin(), sizes_.end(), 0);
        sums_.assign(K() * d(), 0.0);
        sumsq_.assign(K(), 0.0);
        for (std::size_t i = 0; i < n(); ++i) {
            const std::size_t k = labels_[i];
            ++sizes_[k];
            for (std::size_t j = 0; j < d(); ++j) {
                sums_[k * d() + j] += data_(i, j);
                sumsq_[k] += data_(i, j) * data_(i, j);
            }
        }
    }

  protected:
    void on_move(std::size_t i, std::size_t from, std::size_t to) override {
        for (std::size_t j = 0; j < d(); ++j) {
            const double x = data_(i, j);
            sums_[from * d() + j] -= x;
            sums_[to * d() + j] += x;
            sumsq_[from] -= x * x;
            sumsq_[to] += x * x;
        }
    }

  private:
    std::size_t d() const noexcept { return data_.d(); }

    const Dataset& data_;
    std::vector<double> sums_;
    std::vector<double> sumsq_;
};

// Loss of a block of `size` binary values with `ones` ones, under the
// adjusted mean (ones + 1/2) / (size + 1).
double kl_block_term(double ones, double size) {
    if (size == 0.0) return 0.0;
    const double mu = (ones + 0.5) / (size + 1.0);
    return -(ones * std::log(mu) + (size - ones) * std::log1p(-mu));
}

// x log x + (1 - x) log(1 - x); zero for binary x.
double neg_entropy(double x) {
    double s = 0.0;
    if (x > 0.0) s += x * std::log(x);
    if (x < 1.0) s += (1.0 - x) * std::log1p(-x);
    return s;
}

class BernoulliKlStats final : public BlockStats {
  public:
    BernoulliKlStats(const Dataset& data, const Partition& p) : BlockStats(p.labels(), p.K()), data_(data) {
        rebuild();
    }

    double block_loss(std::size_t k) const override {
        const double m = static_cast<double>(sizes_[k]);
        double s = 0.0;
        for (std::size_t j = 0; j < d(); ++j) s += kl_block_term(ones(k, j), m);
        return s;
    }

    double insertion_delta(std::size_t i, std::size_t k) const override {
        return insertion_delta_point(data_.row(i), k);
    }

    double removal_delta(std::size_t i) const override {
        const std::size_t k = labels_[i];
        const double m = static_cast<double>(sizes_[k]);
        double s = 0.0;
        for (std::size_t j = 0; j < d(); ++j) {
            const double c = ones(k, j);
            s += kl_block_term(c, m) - kl_block_term(c - data_(i, j), m - 1.0);
        }
        return s;
    }

    double insertion_delta_point(std::span<const double> x, std::size_t k) const override {
        const double m = static_cast<double>(sizes_[k]);
        double s = 0.0;
        for (std::size_t j = 0; j < d(); ++j) {
            if (x[j] < 0.0 || x[j] > 1.0) throw domain_error("domain error: Bernoulli KL needs x in [0, 1]");
            const double c = ones(k, j);
            const double mu = (c + x[j] + 0.5) / (m + 2.0);
            const double with = -((c + x[j]) * std::log(mu) + (m + 1.0 - c - x[j]) * std::log1p(-mu));
            s += with + neg_entropy(x[j]) - kl_block_term(c, m);
        }
        return s;
    }

    void rebuild() override {
        std::fill(sizes_.begin(), sizes_.end(), 0);
        counts_.assign(K() * d(), 0);
        for (std::size_t i = 0; i < n(); ++i) {
            const std::size_t k = labels_[i];
            ++sizes_[k];
            for (std::size_t j = 0; j < d(); ++j) counts_[k * d() + j] += data_(i, j) != 0.0;
        }
    }

  protected:
    void on_move(std::size_t i, std::size_t from, std::size_t to) override {
        for (std::size_t j = 0; j < d(); ++j) {
            if (data_(i, j) != 0.0) {
                --counts_[from * d() + j];
                ++counts_[to * d() + j];
            }
        }
    }

  private:
    std::size_t d() const noexcept { return data_.d(); }
    double ones(std::size_t k, std::size_t j) const noexcept { return static_cast<double>(counts_[k * d() + j]); }

    const Dataset& data_;
    std::vector<std::size_t> counts_;
};

class DissimStats final : public BlockStats {
  public:
    DissimStats(const Dataset& data, const CohesionModel& model, const DissimMatrix& dissim, const Partition& p)
        : BlockStats(p.labels(), p.K()), data_(data), model_(model), cache_(dissim, p) {}

    double block_loss(std::size_t k) const override { return cache_.total(k); }

    double insertion_delta(std::size_t i, std::size_t k) const override { return reallocation_delta(i, k, cache_); }

    double removal_delta(std::size_t i) const override { return reallocation_delta(i, labels_[i], cache_); }

    double insertion_delta_point(std::span<const double> x, std::size_t k) const override {
        double r = 0.0;
        for (std::size_t i = 0; i < n(); ++i) {
            if (labels_[i] == k) r += pair_dissimilarity(model_, x, data_.row(i));
        }
        return (2.0 * r - cache_.total(k)) / (static_cast<double>(sizes_[k]) + 1.0);
    }

    void rebuild() override { cache_.rebuild(); }

  protected:
    void on_move(std::size_t i, std::size_t, std::size_t to) override { cache_.move(i, to); }

  private:
    const Dataset& data_;
    CohesionModel model_;
    ClusterCache cache_;
};

}  // namespace

std::unique_ptr<BlockStats> make_block_stats(const Dataset& data, const CohesionModel& model,
                                             const Partition& partition, const DissimMatrix* dissim) {
    validate(model, data);
    if (partition.n() != data.n()) throw argument_error("partition and dataset sizes differ");
    switch (model.kind) {
        case CohesionKind::bregman_sq_euclidean:
            return std::make_unique<SqEuclideanStats>(data, partition);
        case CohesionKind::bregman_bernoulli_kl:
            return std::make_unique<BernoulliKlStats>(data, partition);
        case CohesionKind::avg_dissimilarity:
            if (dissim == nullptr) throw argument_error("average dissimilarity needs a dissimilarity matrix");
            if (dissim->n() != data.n()) throw argument_error("dissimilarity matrix and dataset sizes differ");
            return std::make_unique<DissimStats>(data, model, *dissim, partition);
    }
    throw argument_error("unknown cohesion kind");
}

}  // namespace gbppm
