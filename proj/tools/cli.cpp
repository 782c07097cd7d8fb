#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <gbppm/bregman.hpp>
#include <gbppm/chain_io.hpp>
#include <gbppm/dataset.hpp>
#include <gbppm/dissim.hpp>
#include <gbppm/error.hpp>
#include <gbppm/gibbs.hpp>
#include <gbppm/loss.hpp>
#include <gbppm/numeric.hpp>
#include <gbppm/select.hpp>
#include <gbppm/sim.hpp>
#include <gbppm/uq.hpp>

#include "studies.hpp"

namespace gbppm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int summary_schema_version = 1;

CohesionModel parse_model(const std::string& name, double p, const std::string& gamma) {
    if (name == "sq-euclidean") return CohesionModel::squared_euclidean();
    if (name == "bernoulli-kl") return CohesionModel::bernoulli_kl();
    if (name == "manhattan") return CohesionModel::manhattan();
    if (name == "minkowski") return CohesionModel::minkowski(p);
    if (name == "avg-dissimilarity") {
        if (gamma == "identity") return CohesionModel::avg_dissimilarity(GammaSpec::identity, p);
        if (gamma == "root") return CohesionModel::avg_dissimilarity(GammaSpec::p_th_root, p);
        throw argument_error("unknown gamma '" + gamma + "' (identity or root)");
    }
    throw argument_error("unknown model '" + name + "'");
}

std::string model_name(const CohesionModel& model) {
    switch (model.kind) {
        case CohesionKind::bregman_sq_euclidean:
            return "sq-euclidean";
        case CohesionKind::bregman_bernoulli_kl:
            return "bernoulli-kl";
        case CohesionKind::avg_dissimilarity:
            if (model.gamma == GammaSpec::p_th_root) return model.p == 1.0 ? "manhattan" : "minkowski";
            return "avg-dissimilarity";
    }
    return "?";
}

namespace {

const std::vector<std::string> model_names = {"sq-euclidean", "bernoulli-kl", "manhattan", "minkowski",
                                              "avg-dissimilarity"};

json model_json(const CohesionModel& m) {
    return {{"name", model_name(m)}, {"kind", to_string(m.kind)}, {"gamma", to_string(m.gamma)}, {"p", m.p}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    return out;
}

fs::path in_dir(const std::string& dir, const std::string& file, const std::string& name) {
    if (!file.empty()) return fs::path(file);
    return fs::path(dir) / name;
}

Domain domain_for(const CohesionModel& model) {
    return model.kind == CohesionKind::bregman_bernoulli_kl ? Domain::binary : Domain::continuous;
}

// Loads the matrix from `cache` when it exists, otherwise builds it and
// saves it there (if a path was given). Bregman models need none.
std::optional<DissimMatrix> dissim_for(const Dataset& data, const CohesionModel& model, const std::string& cache) {
    if (model.is_bregman()) return std::nullopt;
    if (!cache.empty() && fs::exists(cache)) {
        auto m = load_dissim(cache);
        if (m.n() != data.n()) throw argument_error("dissimilarity cache " + cache + " does not match the data size");
        return m;
    }
    auto m = pairwise_matrix(data, model);
    if (!cache.empty()) save_dissim(cache, m);
    return m;
}

const DissimMatrix* ptr(const std::optional<DissimMatrix>& m) { return m ? &*m : nullptr; }

struct ModelOptions {
    std::string model = "sq-euclidean";
    double p = 2.0;
    std::string gamma = "identity";

    void add(CLI::App* app) {
        app->add_option("--model", model, "Cohesion model")->check(CLI::IsMember(model_names))->capture_default_str();
        app->add_option("--p", p, "Exponent of the Lp norm (minkowski, avg-dissimilarity)")->capture_default_str();
        app->add_option("--gamma", gamma, "Transform for avg-dissimilarity")
            ->check(CLI::IsMember({"identity", "root"}))
            ->capture_default_str();
    }
    CohesionModel get() const { return parse_model(model, p, gamma); }
};

struct FitArgs {
    std::string data;
    ModelOptions model;
    std::size_t k = 0;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    std::size_t max_iter = 1000;
    std::string init = "plusplus";
    std::string out_dir = ".";
    std::string labels;
    std::string report;
    std::string dissim_cache;
};

struct SampleArgs {
    std::string data;
    ModelOptions model;
    std::size_t k = 0;
    std::string init;
    std::size_t restarts = 10;
    std::optional<double> lambda;
    bool hierarchical = false;
    double a = 1.0;
    double b = 0.0;
    std::optional<double> xi;
    double lambda_tilde = 1.0;
    std::size_t iterations = 6000;
    std::size_t burnin = 1000;
    std::size_t thin = 1;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string chain;
    std::string trace;
    std::string dissim_cache;
};

struct SummarizeArgs {
    std::string data;
    std::string chain;
    double alpha = 0.05;
    std::string estimate = "vi";
    std::string labels;
    std::string new_points;
    std::string predictive = "reference";
    std::string out_dir = ".";
    std::string summary;
    std::string coclustering;
    std::string coclustering_long;
    std::string dissim_cache;
};

struct ReproduceArgs {
    std::string study;
    std::string data;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::optional<std::size_t> iterations;
    std::optional<std::size_t> burnin;
    std::size_t replicates = 20;
    std::vector<double> sigma2 = {0.75, 1.5, 3.0};
    double alpha = 0.05;
    std::size_t restarts = 10;
};

struct GenerateArgs {
    std::string family = "gaussian";
    double sigma2 = 1.5;
    double df = 2.0;
    std::uint64_t seed = 0;
    std::string out = "data.csv";
    std::string labels;
};

struct SelectArgs {
    std::string data;
    ModelOptions model;
    std::string criterion = "elbow";
    std::size_t k_min = 1;
    std::size_t k_max = 8;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    std::string out;
};

json centres_json(const Partition& p, const Dataset& data, const CohesionModel& model, const DissimMatrix* dissim) {
    json j;
    const auto med = medoids(p, data, model, dissim);
    std::vector<std::size_t> one_based;
    for (auto m : med) one_based.push_back(m + 1);
    j["medoids"] = one_based;
    if (model.is_bregman()) {
        const auto c = model_centroids(data, p, model);
        json rows = json::array();
        for (std::size_t k = 0; k < c.K; ++k) {
            auto r = c.row(k);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        j["centroids"] = rows;
        j["centroids_adjusted"] = c.adjusted;
    }
    return j;
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
    const auto model = a.model.get();
    const auto data = load_csv(a.data, domain_for(model));
    const auto dissim = dissim_for(data, model, a.dissim_cache);
    if (a.k < 1) throw argument_error("--k must be >= 1");
    FitOptions options;
    options.restarts = a.restarts;
    options.seed = a.seed;
    options.max_iter = a.max_iter;
    options.init = a.init == "random" ? InitSpec::Method::random_labels : InitSpec::Method::plus_plus;
    const auto result = fit_map(data, model, a.k, options, ptr(dissim));

    fs::create_directories(a.out_dir);
    const auto labels_path = in_dir(a.out_dir, a.labels, "labels.json");
    save_partition(labels_path.string(), result.partition);

    json report = {{"schema_version", summary_schema_version},
                   {"command", "fit"},
                   {"model", model_json(model)},
                   {"n", data.n()},
                   {"d", data.d()},
                   {"K", a.k},
                   {"loss", result.loss()},
                   {"loss_trace", result.loss_trace},
                   {"iterations", result.iterations},
                   {"converged", result.converged},
                   {"restarts", a.restarts},
                   {"seed", a.seed},
                   {"block_sizes", result.partition.block_sizes()},
                   {"labels", result.partition.one_based()}};
    report.update(centres_json(result.partition, data, model, ptr(dissim)));
    write_json(in_dir(a.out_dir, a.report, "report.json"), report);
    out << "loss " << std::setprecision(10) << result.loss() << ", " << result.iterations << " iterations"
        << (result.converged ? "" : " (not converged)") << ", labels written to " << labels_path.string() << '\n';
    return exit_ok;
}

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
    const auto model = a.model.get();
    const auto data = load_csv(a.data, domain_for(model));
    const auto dissim = dissim_for(data, model, a.dissim_cache);

    std::optional<Partition> init;
    if (!a.init.empty()) {
        init = load_partition(a.init);
        if (a.k != 0 && init->K() != a.k) throw argument_error("--k disagrees with the blocks in --init");
    } else {
        if (a.k < 1) throw argument_error("either --k or --init is required");
        FitOptions options;
        options.restarts = a.restarts;
        options.seed = split_seed(a.seed, 1);
        init = fit_map(data, model, a.k, options, ptr(dissim)).partition;
    }

    GibbsConfig config;
    if (a.lambda && a.hierarchical) throw argument_error("--lambda and --hierarchical are exclusive");
    const bool hierarchical = a.hierarchical || (!a.lambda && model.kind != CohesionKind::bregman_bernoulli_kl);
    if (hierarchical) {
        config.lambda_mode = HierarchicalLambda{a.a, a.b, a.xi};
    } else {
        config.lambda_mode = FixedLambda{a.lambda.value_or(1.0)};
    }
    config.lambda_tilde = a.lambda_tilde;
    config.n_iterations = a.iterations;
    config.n_burnin = a.burnin;
    config.thin = a.thin;
    config.rng_seed = a.seed;
    const auto chain = run_chain(data, model, config, *init, ptr(dissim));

    fs::create_directories(a.out_dir);
    const auto chain_path = in_dir(a.out_dir, a.chain, "chain.ndjson");
    save_chain(chain_path.string(), chain);
    {
        auto trace = open_out(in_dir(a.out_dir, a.trace, "trace.csv"));
        write_trace_csv(trace, chain);
    }
    for (const auto& w : chain.warnings) err << "warning: " << w << '\n';
    out << chain.size() << " draws written to " << chain_path.string() << '\n';
    return exit_ok;
}

int cmd_summarize(const SummarizeArgs& a, std::ostream& out, std::ostream& err) {
    const auto chain = load_chain(a.chain);
    if (chain.empty()) throw argument_error("the chain holds no draws");
    const auto& model = chain.meta.model;
    const auto data = load_csv(a.data, domain_for(model));
    if (data.n() != chain.meta.n || data.d() != chain.meta.d) {
        throw argument_error("data shape does not match the chain header");
    }
    const auto dissim = dissim_for(data, model, a.dissim_cache);

    const auto s = coclustering(chain);
    if (a.estimate == "map" && a.labels.empty()) throw argument_error("--estimate map needs --labels");
    const Partition estimate = a.estimate == "map" ? load_partition(a.labels) : vi_point_estimate(chain);
    if (estimate.n() != data.n()) throw argument_error("estimate does not match the data size");
    const auto ball = credible_ball(chain, estimate, a.alpha);
    const auto med = medoids(estimate, data, model, ptr(dissim));
    const auto miss = misclassification(s, estimate, med);

    const double n_draws = static_cast<double>(chain.size());
    const double lambda_mean = std::accumulate(chain.lambdas.begin(), chain.lambdas.end(), 0.0) / n_draws;
    double lambda_var = 0.0;
    for (double l : chain.lambdas) lambda_var += (l - lambda_mean) * (l - lambda_mean);
    lambda_var /= std::max(1.0, n_draws - 1.0);
    const double loss_mean = std::accumulate(chain.losses.begin(), chain.losses.end(), 0.0) / n_draws;

    json bounds = json::array();
    for (const auto& h : ball.horizontal_bounds) bounds.push_back(h.one_based());
    std::vector<std::size_t> med_one;
    for (auto m : med) med_one.push_back(m + 1);

    json summary = {{"schema_version", summary_schema_version},
                    {"command", "summarize"},
                    {"model", model_json(model)},
                    {"n", data.n()},
                    {"K", chain.meta.K},
                    {"draws", chain.size()},
                    {"estimate", {{"kind", a.estimate}, {"labels", estimate.one_based()}}},
                    {"credible_ball",
                     {{"alpha", a.alpha},
                      {"radius", ball.radius},
                      {"coverage", ball.coverage},
                      {"distinct_members", ball.members.size()},
                      {"horizontal_bounds", bounds}}},
                    {"medoids", med_one},
                    {"misclassification", miss},
                    {"lambda", {{"mean", lambda_mean}, {"sd", std::sqrt(lambda_var)}}},
                    {"loss_mean", loss_mean},
                    {"warnings", chain.warnings}};

    if (!a.new_points.empty()) {
        const auto points = load_csv(a.new_points, domain_for(model));
        json pred = json::array();
        for (std::size_t i = 0; i < points.n(); ++i) {
            const auto x = points.row(i);
            const auto p = a.predictive == "averaged"
                               ? predictive_allocation_averaged(x, chain, estimate, data, model, ptr(dissim))
                               : predictive_allocation(x, estimate, lambda_mean, data, model, ptr(dissim));
            pred.push_back({{"x", std::vector<double>(x.begin(), x.end())}, {"probabilities", p}});
        }
        summary["predictive"] = {{"mode", a.predictive}, {"points", pred}};
    }

    fs::create_directories(a.out_dir);
    const auto summary_path = in_dir(a.out_dir, a.summary, "summary.json");
    write_json(summary_path, summary);
    {
        auto f = open_out(in_dir(a.out_dir, a.coclustering, "coclustering.csv"));
        write_coclustering_csv(f, s);
    }
    {
        auto f = open_out(in_dir(a.out_dir, a.coclustering_long, "coclustering_long.csv"));
        write_coclustering_long(f, s);
    }
    for (const auto& w : chain.warnings) err << "warning: " << w << '\n';
    out << "summary written to " << summary_path.string() << '\n';
    return exit_ok;
}

int reproduce_sim1(const ReproduceArgs& a, std::ostream& out) {
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    auto table = open_out(dir / "sim1_table.csv");
    table << "sigma2,mean_abs_deviation,vi_horizontal_bound_nats,vi_horizontal_bound_bits,lambda_mean\n"
          << std::setprecision(10);
    for (std::size_t i = 0; i < a.sigma2.size(); ++i) {
        studies::Sim1Options o;
        o.sigma2 = a.sigma2[i];
        o.seed = split_seed(a.seed, i);
        o.iterations = a.iterations.value_or(o.iterations);
        o.burnin = a.burnin.value_or(o.burnin);
        o.alpha = a.alpha;
        o.restarts = a.restarts;
        const auto r = studies::run_sim1(o);
        table << r.sigma2 << ',' << r.mean_abs_deviation << ',' << r.ball.radius << ','
              << r.ball.radius / std::log(2.0) << ',' << r.lambda_mean << '\n';

        std::ostringstream tag;
        tag << r.sigma2;
        save_csv((dir / ("sim1_data_" + tag.str() + ".csv")).string(), r.generated.data, {"x1", "x2"});
        auto miss = open_out(dir / ("sim1_misclassification_" + tag.str() + ".csv"));
        miss << "i,map_label,gbppm,oracle\n" << std::setprecision(10);
        for (std::size_t j = 0; j < r.misclassification.size(); ++j) {
            miss << j + 1 << ',' << r.map.partition[j] + 1 << ',' << r.misclassification[j] << ','
                 << r.oracle_misclassification[j] << '\n';
        }
        auto trace = open_out(dir / ("sim1_trace_" + tag.str() + ".csv"));
        write_trace_csv(trace, r.chain);
        out << "sigma2 " << r.sigma2 << ": mean |S - S_oracle| " << r.mean_abs_deviation << ", VI to horizontal bound "
            << r.ball.radius << " nats\n";
    }
    return exit_ok;
}

int reproduce_sim2(const ReproduceArgs& a, std::ostream& out) {
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    auto results = open_out(dir / "sim2_results.csv");
    auto sil = open_out(dir / "sim2_silhouette.csv");
    results << "replicate,method,metric,value\n" << std::setprecision(10);
    sil << "replicate,method,K,silhouette\n" << std::setprecision(10);
    std::size_t wins = 0;
    std::size_t picks_four = 0;
    for (std::size_t r = 0; r < a.replicates; ++r) {
        studies::Sim2Options o;
        o.seed = split_seed(a.seed, r);
        o.iterations = a.iterations.value_or(o.iterations);
        o.burnin = a.burnin.value_or(o.burnin);
        o.restarts = a.restarts;
        const auto rep = studies::run_sim2(o);
        results << r + 1 << ",sq-euclidean,mean_abs_deviation," << rep.mad_sq_euclidean << '\n'
                << r + 1 << ",manhattan,mean_abs_deviation," << rep.mad_manhattan << '\n'
                << r + 1 << ",sq-euclidean,selected_k," << rep.selected_k_sq_euclidean << '\n'
                << r + 1 << ",manhattan,selected_k," << rep.selected_k_manhattan << '\n';
        for (const auto& p : rep.silhouette_sq_euclidean) sil << r + 1 << ",sq-euclidean," << p.K << ',' << p.silhouette << '\n';
        for (const auto& p : rep.silhouette_manhattan) sil << r + 1 << ",manhattan," << p.K << ',' << p.silhouette << '\n';
        wins += rep.mad_manhattan < rep.mad_sq_euclidean;
        picks_four += rep.selected_k_manhattan == 4;
    }
    out << "manhattan closer to the oracle in " << wins << '/' << a.replicates << " replicates; silhouette picks K=4 in "
        << picks_four << '/' << a.replicates << '\n';
    return exit_ok;
}

int reproduce_carcinoma(const ReproduceArgs& a, std::ostream& out) {
    if (a.data.empty()) {
        throw argument_error(
            "external dataset required: pass --data with the 118 x 7 binary ratings CSV (it is not bundled)");
    }
    const auto data = load_csv(a.data, Domain::binary);
    studies::CarcinomaOptions o;
    o.seed = a.seed;
    o.iterations = a.iterations.value_or(o.iterations);
    o.burnin = a.burnin.value_or(o.burnin);
    o.restarts = a.restarts;
    const auto r = studies::run_carcinoma(data, o);

    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    {
        auto f = open_out(dir / "carcinoma_elbow.csv");
        write_k_csv(f, r.elbow);
    }
    {
        auto f = open_out(dir / "carcinoma_centroids.csv");
        f << "cluster";
        for (std::size_t j = 0; j < r.centroids.d; ++j) f << ",x" << j + 1;
        f << '\n' << std::setprecision(6);
        for (std::size_t k = 0; k < r.centroids.K; ++k) {
            f << k + 1;
            for (double v : r.centroids.row(k)) f << ',' << v;
            f << '\n';
        }
    }
    {
        auto f = open_out(dir / "carcinoma_predictive.csv");
        f << "point";
        for (std::size_t k = 0; k < r.centroids.K; ++k) f << ",cluster" << k + 1;
        f << '\n' << std::setprecision(6);
        for (std::size_t i = 0; i < r.predictive.size(); ++i) {
            f << i + 1;
            for (double v : r.predictive[i]) f << ',' << v;
            f << '\n';
        }
    }
    save_partition((dir / "carcinoma_vi_labels.json").string(), r.vi_estimate);
    out << "carcinoma: MAP loss " << r.map.loss() << ", " << r.chain.size() << " draws, outputs in " << dir.string()
        << '\n';
    return exit_ok;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    const auto family = a.family == "student-t" ? MixtureSpec::Family::student_t : MixtureSpec::Family::gaussian;
    const auto g = gen_mixture(MixtureSpec::four_blobs(family, a.sigma2, a.df), a.seed);
    save_csv(a.out, g.data, {"x1", "x2"});
    if (!a.labels.empty()) save_partition(a.labels, g.labels);
    out << g.data.n() << " rows written to " << a.out << '\n';
    return exit_ok;
}

int cmd_select(const SelectArgs& a, std::ostream& out) {
    const auto model = a.model.get();
    const auto data = load_csv(a.data, domain_for(model));
    if (a.k_min < 1 || a.k_max < a.k_min || a.k_max > data.n()) throw argument_error("invalid K range");
    std::vector<std::size_t> ks;
    for (std::size_t k = a.k_min; k <= a.k_max; ++k) ks.push_back(k);
    FitOptions options;
    options.restarts = a.restarts;
    options.seed = a.seed;

    std::ostringstream csv;
    if (a.criterion == "silhouette") {
        if (a.k_min < 2) throw argument_error("silhouette needs K >= 2");
        const auto geometry = model.is_bregman() ? CohesionModel::avg_dissimilarity(GammaSpec::identity, 2.0) : model;
        if (model.kind == CohesionKind::bregman_bernoulli_kl) {
            throw argument_error("silhouette is defined here for continuous models only");
        }
        const auto dissim = pairwise_matrix(data, geometry);
        write_k_csv(csv, silhouette_curve(data, model, ks, options, dissim));
    } else {
        write_k_csv(csv, elbow_curve(data, model, ks, options));
    }
    if (a.out.empty()) {
        out << csv.str();
    } else {
        auto f = open_out(a.out);
        f << csv.str();
    }
    return exit_ok;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const argument_error*>(&e) || dynamic_cast<const domain_error*>(&e) ||
        dynamic_cast<const config_error*>(&e)) {
        return exit_usage;
    }
    return exit_runtime;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized Bayes product partition models: MAP clustering and Gibbs-posterior uncertainty",
                 "gbppm"};
    app.set_config("--config", "", "Read options from a TOML/INI file (command-line flags take precedence)");
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Minimize the loss for a fixed K and write labels and a report");
    fit_cmd->add_option("data", fit.data, "CSV file of observations")->required()->check(CLI::ExistingFile);
    fit.model.add(fit_cmd);
    fit_cmd->add_option("--k", fit.k, "Number of clusters")->required();
    fit_cmd->add_option("--restarts", fit.restarts, "Random restarts; the best loss is kept")->capture_default_str();
    fit_cmd->add_option("--seed", fit.seed, "Master random seed")->capture_default_str();
    fit_cmd->add_option("--max-iter", fit.max_iter, "Iteration cap per restart")->capture_default_str();
    fit_cmd->add_option("--init", fit.init, "Seeding")->check(CLI::IsMember({"plusplus", "random"}))->capture_default_str();
    fit_cmd->add_option("--out-dir", fit.out_dir, "Directory for outputs")->capture_default_str();
    fit_cmd->add_option("--labels", fit.labels, "Labels JSON path (default <out-dir>/labels.json)");
    fit_cmd->add_option("--report", fit.report, "Report JSON path (default <out-dir>/report.json)");
    fit_cmd->add_option("--dissim-cache", fit.dissim_cache, "Binary dissimilarity matrix cache file");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "Run the Gibbs sampler and write the chain and loss trace");
    sample_cmd->add_option("data", sample.data, "CSV file of observations")->required()->check(CLI::ExistingFile);
    sample.model.add(sample_cmd);
    sample_cmd->add_option("--k", sample.k, "Number of clusters (needed without --init)");
    sample_cmd->add_option("--init", sample.init, "Starting labels JSON, e.g. from fit")->check(CLI::ExistingFile);
    sample_cmd->add_option("--restarts", sample.restarts, "Restarts of the starting fit")->capture_default_str();
    sample_cmd->add_option("--lambda", sample.lambda, "Fixed lambda (default: hierarchical, or 1 for bernoulli-kl)");
    sample_cmd->add_flag("--hierarchical", sample.hierarchical, "Sample lambda from its Gamma full conditional");
    sample_cmd->add_option("--a", sample.a, "Gamma prior shape of lambda")->capture_default_str();
    sample_cmd->add_option("--b", sample.b, "Gamma prior rate of lambda (0 with a = 1 is flat)")->capture_default_str();
    sample_cmd->add_option("--xi", sample.xi, "Exponent of the lambda power term (default by model)");
    sample_cmd->add_option("--lambda-tilde", sample.lambda_tilde, "Loss weight in the joint model")->capture_default_str();
    sample_cmd->add_option("--iterations", sample.iterations, "Total sweeps including burn-in")->capture_default_str();
    sample_cmd->add_option("--burnin", sample.burnin, "Discarded sweeps")->capture_default_str();
    sample_cmd->add_option("--thin", sample.thin, "Keep every thin-th draw")->capture_default_str();
    sample_cmd->add_option("--seed", sample.seed, "Master random seed")->capture_default_str();
    sample_cmd->add_option("--out-dir", sample.out_dir, "Directory for outputs")->capture_default_str();
    sample_cmd->add_option("--chain", sample.chain, "Chain path (default <out-dir>/chain.ndjson)");
    sample_cmd->add_option("--trace", sample.trace, "Trace CSV path (default <out-dir>/trace.csv)");
    sample_cmd->add_option("--dissim-cache", sample.dissim_cache, "Binary dissimilarity matrix cache file");

    SummarizeArgs summarize;
    auto* summarize_cmd = app.add_subcommand("summarize", "Posterior summaries from a stored chain");
    summarize_cmd->add_option("data", summarize.data, "CSV file of observations")->required()->check(CLI::ExistingFile);
    summarize_cmd->add_option("--chain", summarize.chain, "Chain file from sample")->required()->check(CLI::ExistingFile);
    summarize_cmd->add_option("--alpha", summarize.alpha, "Credible ball level")->capture_default_str();
    summarize_cmd->add_option("--estimate", summarize.estimate, "Point estimate")
        ->check(CLI::IsMember({"vi", "map"}))
        ->capture_default_str();
    summarize_cmd->add_option("--labels", summarize.labels, "Labels JSON of the MAP estimate")->check(CLI::ExistingFile);
    summarize_cmd->add_option("--new-points", summarize.new_points, "CSV of new observations for predictive allocation")
        ->check(CLI::ExistingFile);
    summarize_cmd->add_option("--predictive", summarize.predictive, "Condition on the estimate or average the chain")
        ->check(CLI::IsMember({"reference", "averaged"}))
        ->capture_default_str();
    summarize_cmd->add_option("--out-dir", summarize.out_dir, "Directory for outputs")->capture_default_str();
    summarize_cmd->add_option("--summary", summarize.summary, "Summary JSON path");
    summarize_cmd->add_option("--coclustering", summarize.coclustering, "Co-clustering matrix CSV path");
    summarize_cmd->add_option("--coclustering-long", summarize.coclustering_long, "Long-format co-clustering CSV path");
    summarize_cmd->add_option("--dissim-cache", summarize.dissim_cache, "Binary dissimilarity matrix cache file");

    ReproduceArgs reproduce;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "Run one of the simulation or data studies end to end");
    reproduce_cmd->add_option("study", reproduce.study, "sim1, sim2 or carcinoma")
        ->required()
        ->check(CLI::IsMember({"sim1", "sim2", "carcinoma"}));
    reproduce_cmd->add_option("--data", reproduce.data, "Ratings CSV for the carcinoma study")->check(CLI::ExistingFile);
    reproduce_cmd->add_option("--seed", reproduce.seed, "Master random seed")->capture_default_str();
    reproduce_cmd->add_option("--out-dir", reproduce.out_dir, "Directory for outputs")->capture_default_str();
    reproduce_cmd->add_option("--iterations", reproduce.iterations, "Total sweeps per chain");
    reproduce_cmd->add_option("--burnin", reproduce.burnin, "Discarded sweeps per chain");
    reproduce_cmd->add_option("--replicates", reproduce.replicates, "Replicates for sim2")->capture_default_str();
    reproduce_cmd->add_option("--sigma2", reproduce.sigma2, "Variances for sim1")->capture_default_str();
    reproduce_cmd->add_option("--alpha", reproduce.alpha, "Credible ball level")->capture_default_str();
    reproduce_cmd->add_option("--restarts", reproduce.restarts, "Restarts of each MAP fit")->capture_default_str();

    GenerateArgs generate;
    auto* generate_cmd = app.add_subcommand("generate", "Write a four-blob simulated dataset");
    generate_cmd->add_option("--family", generate.family, "Component family")
        ->check(CLI::IsMember({"gaussian", "student-t"}))
        ->capture_default_str();
    generate_cmd->add_option("--sigma2", generate.sigma2, "Component (scale) variance")->capture_default_str();
    generate_cmd->add_option("--df", generate.df, "Student-t degrees of freedom")->capture_default_str();
    generate_cmd->add_option("--seed", generate.seed, "Random seed")->capture_default_str();
    generate_cmd->add_option("--out", generate.out, "Data CSV path")->capture_default_str();
    generate_cmd->add_option("--labels", generate.labels, "Generating labels JSON path");

    SelectArgs select;
    auto* select_cmd = app.add_subcommand("select", "Elbow or silhouette curve over a K range");
    select_cmd->add_option("data", select.data, "CSV file of observations")->required()->check(CLI::ExistingFile);
    select.model.add(select_cmd);
    select_cmd->add_option("--criterion", select.criterion, "Curve to compute")
        ->check(CLI::IsMember({"elbow", "silhouette"}))
        ->capture_default_str();
    select_cmd->add_option("--k-min", select.k_min, "Smallest K")->capture_default_str();
    select_cmd->add_option("--k-max", select.k_max, "Largest K")->capture_default_str();
    select_cmd->add_option("--restarts", select.restarts, "Restarts per K")->capture_default_str();
    select_cmd->add_option("--seed", select.seed, "Master random seed")->capture_default_str();
    select_cmd->add_option("--out", select.out, "CSV path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out);
        if (*sample_cmd) return cmd_sample(sample, out, err);
        if (*summarize_cmd) return cmd_summarize(summarize, out, err);
        if (*reproduce_cmd) {
            if (reproduce.study == "sim1") return reproduce_sim1(reproduce, out);
            if (reproduce.study == "sim2") return reproduce_sim2(reproduce, out);
            return reproduce_carcinoma(reproduce, out);
        }
        if (*generate_cmd) return cmd_generate(generate, out);
        if (*select_cmd) return cmd_select(select, out);
    } catch (const gbppm::error& e) {
        err << "gbppm: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "gbppm: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}

}  // namespace gbppm::cli
