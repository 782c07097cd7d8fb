#include "gbppm/cohesion.hpp"

#include <cmath>
#include <sstream>

#include "gbppm/error.hpp"

namespace gbppm {

void validate(const CohesionModel& model) {
    if (model.kind == CohesionKind::avg_dissimilarity && !(model.p >= 1.0 && std::isfinite(model.p))) {
        throw argument_error("Lp dissimilarity needs p >= 1");
    }
}

void validate(const CohesionModel& model, const Dataset& data) {
    validate(model);
    if (model.kind == CohesionKind::bregman_bernoulli_kl && data.domain() != Domain::binary) {
        throw domain_error("domain error: the Bernoulli KL cohesion requires binary data");
    }
}

double posterior_scale(const CohesionModel& model) noexcept {
    return model.kind == CohesionKind::avg_dissimilarity ? 0.5 : 1.0;
}

double pair_dissimilarity(const CohesionModel& model, std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    if (model.p == 2.0) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double t = x[j] - y[j];
            s += t * t;
        }
    } else if (model.p == 1.0) {
        for (std::size_t j = 0; j < x.size(); ++j) s += std::abs(x[j] - y[j]);
    } else {
        for (std::size_t j = 0; j < x.size(); ++j) s += std::pow(std::abs(x[j] - y[j]), model.p);
    }
    if (model.gamma == GammaSpec::identity || model.p == 1.0) return s;
    return model.p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / model.p);
}

double default_xi(const CohesionModel& model, std::size_t n, std::size_t d) {
    const double nd = static_cast<double>(n) * static_cast<double>(d);
    switch (model.kind) {
        case CohesionKind::bregman_sq_euclidean:
            return nd / 2.0;
        case CohesionKind::avg_dissimilarity:
            return model.gamma == GammaSpec::p_th_root ? nd : nd / model.p;
        case CohesionKind::bregman_bernoulli_kl:
            break;
    }
    throw config_error("the Bernoulli KL cohesion has lambda fixed at 1; no hierarchical lambda");
}

std::string to_string(CohesionKind kind) {
    switch (kind) {
        case CohesionKind::bregman_sq_euclidean:
            return "bregman_sq_euclidean";
        case CohesionKind::bregman_bernoulli_kl:
            return "bregman_bernoulli_kl";
        case CohesionKind::avg_dissimilarity:
            return "avg_dissimilarity";
    }
    return "?";
}

std::string to_string(GammaSpec gamma) { return gamma == GammaSpec::identity ? "identity" : "p_th_root"; }

std::string to_string(const CohesionModel& model) {
    if (model.kind != CohesionKind::avg_dissimilarity) return to_string(model.kind);
    std::ostringstream os;
    os << "avg_dissimilarity(gamma=" << to_string(model.gamma) << ", p=" << model.p << ")";
    return os.str();
}

}  // namespace gbppm
