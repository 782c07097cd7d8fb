#include "gbppm/chain_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "gbppm/error.hpp"

namespace gbppm {

namespace {

using nlohmann::json;

json model_json(const CohesionModel& m) {
    return {{"kind", to_string(m.kind)}, {"gamma", to_string(m.gamma)}, {"p", m.p}};
}

CohesionModel model_from_json(const json& j) {
    CohesionModel m;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "bregman_sq_euclidean") {
        m.kind = CohesionKind::bregman_sq_euclidean;
    } else if (kind == "bregman_bernoulli_kl") {
        m.kind = CohesionKind::bregman_bernoulli_kl;
    } else if (kind == "avg_dissimilarity") {
        m.kind = CohesionKind::avg_dissimilarity;
    } else {
        throw io_error("chain: unknown cohesion kind '" + kind + "'");
    }
    const auto gamma = j.value("gamma", std::string("identity"));
    if (gamma == "identity") {
        m.gamma = GammaSpec::identity;
    } else if (gamma == "p_th_root") {
        m.gamma = GammaSpec::p_th_root;
    } else {
        throw io_error("chain: unknown gamma '" + gamma + "'");
    }
    m.p = j.value("p", 2.0);
    return m;
}

json config_json(const GibbsConfig& c) {
    json lambda;
    if (const auto* f = std::get_if<FixedLambda>(&c.lambda_mode)) {
        lambda = {{"mode", "fixed"}, {"value", f->value}};
    } else {
        const auto& h = std::get<HierarchicalLambda>(c.lambda_mode);
        lambda = {{"mode", "hierarchical"}, {"shape", h.shape}, {"rate", h.rate}};
        lambda["xi"] = h.xi ? json(*h.xi) : json(nullptr);
    }
    return {{"lambda", lambda},       {"lambda_tilde", c.lambda_tilde}, {"n_iterations", c.n_iterations},
            {"n_burnin", c.n_burnin}, {"thin", c.thin},                 {"rng_seed", c.rng_seed}};
}

GibbsConfig config_from_json(const json& j) {
    GibbsConfig c;
    const auto& l = j.at("lambda");
    if (l.at("mode").get<std::string>() == "fixed") {
        c.lambda_mode = FixedLambda{l.at("value").get<double>()};
    } else {
        HierarchicalLambda h{l.at("shape").get<double>(), l.at("rate").get<double>(), std::nullopt};
        if (l.contains("xi") && !l["xi"].is_null()) h.xi = l["xi"].get<double>();
        c.lambda_mode = h;
    }
    c.lambda_tilde = j.value("lambda_tilde", 1.0);
    c.n_iterations = j.at("n_iterations").get<std::size_t>();
    c.n_burnin = j.at("n_burnin").get<std::size_t>();
    c.thin = j.value("thin", std::size_t{1});
    c.rng_seed = j.value("rng_seed", std::uint64_t{0});
    return c;
}

}  // namespace

void write_chain(std::ostream& out, const ChainSamples& samples) {
    const auto& m = samples.meta;
    json meta = {{"type", "meta"},          {"schema", chain_schema_version}, {"n", m.n},
                 {"d", m.d},                {"K", m.K},                       {"model", model_json(m.model)},
                 {"config", config_json(m.config)}};
    if (!samples.warnings.empty()) meta["warnings"] = samples.warnings;
    out << meta.dump() << '\n';
    for (std::size_t t = 0; t < samples.size(); ++t) {
        json rec = {{"type", "sample"},
                    {"index", t},
                    {"labels", samples.partitions[t].one_based()},
                    {"lambda", samples.lambdas[t]},
                    {"loss", samples.losses[t]}};
        out << rec.dump() << '\n';
    }
    if (!out) throw io_error("chain: write failed");
}

void save_chain(const std::string& path, const ChainSamples& samples) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    write_chain(out, samples);
}

ChainSamples read_chain(std::istream& in) {
    ChainSamples s;
    std::string line;
    std::size_t line_no = 0;
    bool have_meta = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw io_error("chain line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            const auto type = j.at("type").get<std::string>();
            if (type == "meta") {
                const int schema = j.at("schema").get<int>();
                if (schema != chain_schema_version) {
                    throw io_error("chain: unsupported schema " + std::to_string(schema));
                }
                s.meta.n = j.at("n").get<std::size_t>();
                s.meta.d = j.at("d").get<std::size_t>();
                s.meta.K = j.at("K").get<std::size_t>();
                s.meta.model = model_from_json(j.at("model"));
                s.meta.config = config_from_json(j.at("config"));
                if (j.contains("warnings")) s.warnings = j["warnings"].get<std::vector<std::string>>();
                have_meta = true;
            } else if (type == "sample") {
                if (!have_meta) throw io_error("chain: sample before meta header");
                auto one = j.at("labels").get<std::vector<long long>>();
                if (one.size() != s.meta.n) throw io_error("chain line " + std::to_string(line_no) + ": wrong length");
                std::vector<std::size_t> labels(one.size());
                for (std::size_t i = 0; i < one.size(); ++i) {
                    if (one[i] < 1 || static_cast<std::size_t>(one[i]) > s.meta.K) {
                        throw io_error("chain line " + std::to_string(line_no) + ": label out of range");
                    }
                    labels[i] = static_cast<std::size_t>(one[i] - 1);
                }
                s.partitions.emplace_back(std::move(labels), s.meta.K);
                s.lambdas.push_back(j.at("lambda").get<double>());
                s.losses.push_back(j.at("loss").get<double>());
            } else {
                throw io_error("chain line " + std::to_string(line_no) + ": unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw io_error("chain line " + std::to_string(line_no) + ": " + e.what());
        } catch (const invariant_error& e) {
            throw io_error("chain line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_meta) throw io_error("chain: missing meta header");
    return s;
}

ChainSamples load_chain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return read_chain(in);
}

void write_trace_csv(std::ostream& out, const ChainSamples& samples) {
    out << "iteration,loss,lambda\n" << std::setprecision(17);
    for (std::size_t t = 0; t < samples.trace_loss.size(); ++t) {
        out << t + 1 << ',' << samples.trace_loss[t] << ',' << samples.trace_lambda[t] << '\n';
    }
}

}  // namespace gbppm
