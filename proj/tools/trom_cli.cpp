// SPDX-License-Identifier: MIT
// Command-line driver: snapshot generation, offline compression, online
// queries, studies and estimate checks. Writes CSV tables and a JSON
// manifest with SHA-256 hashes of every input and output file.
#include "trom/experiment.hpp"
#include "trom/linalg.hpp"
#include "trom/reduced.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace trom;

namespace {

constexpr int kCsvSchema = 1;

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = " ") {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        if constexpr (std::is_floating_point_v<T>)
            os << num(v[i]);
        else
            os << v[i];
    }
    return os.str();
}

class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw FormatError("cannot write " + path.string());
        write(header);
    }
    void write(const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) out_ << (i ? "," : "") << row[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

class Manifest {
public:
    Manifest(std::string command, const ExperimentConfig& cfg) {
        doc_ = {{"tool", "trom_cli"}, {"csv_schema", kCsvSchema}, {"command", std::move(command)},
                {"config", cfg.to_json()}, {"inputs", Json::array()}, {"outputs", Json::array()},
                {"summary", Json::object()}};
    }
    void input(const fs::path& p) { doc_["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}}); }
    void output(const fs::path& p) { doc_["outputs"].push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}}); }
    Json& summary() { return doc_["summary"]; }
    void save(const fs::path& dir, const std::string& name) const {
        std::ofstream out(dir / name);
        out << doc_.dump(2) << '\n';
    }

private:
    Json doc_;
};

std::vector<Index> ranks_of(const Decomposition& d) {
    if (const auto* tt = std::get_if<TTDecomposition>(&d)) return tt->ranks();
    if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) return tk->ranks();
    return {std::get<CPDecomposition>(d).rank};
}

double achieved_error(const Decomposition& d) {
    if (const auto* tt = std::get_if<TTDecomposition>(&d)) return tt->error_estimate;
    if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) return tk->error_bound;
    return std::get<CPDecomposition>(d).relative_error;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

/// Options shared by every subcommand.
struct Common {
    std::string config_path;
    std::string preset_name;
    std::string out;
    std::string format;
    std::string eps;
    std::string cp_rank;
    std::string n_phi;
    std::string n_psi;
    std::string mode;
    std::string alpha;
    Index p = 0;
    Index count = 0;
    long long seed = -1;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON experiment config");
        app->add_option("--preset", preset_name, "named config (tiny, burgers-desk, burgers-full, allen-cahn-desk, allen-cahn-full)");
        app->add_option("--out", out, "output directory");
        app->add_option("--format", format, "TT, HOSVD or CP");
        app->add_option("--eps", eps, "comma-separated compression accuracies");
        app->add_option("--cp-rank", cp_rank, "comma-separated CP ranks");
        app->add_option("--n-phi", n_phi, "comma-separated local u-space dimensions");
        app->add_option("--n-psi", n_psi, "comma-separated local f-space dimensions");
        app->add_option("--mode", mode, "local-ls or local-deim");
        app->add_option("--alpha", alpha, "query parameters, comma-separated; ';' separates vectors");
        app->add_option("--p", p, "interpolation order");
        app->add_option("--count", count, "number of random queries");
        app->add_option("--seed", seed, "random seed");
    }

    ExperimentConfig load() const {
        Json j = Json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw FormatError("cannot read config " + config_path);
            j = Json::parse(in);
        }
        if (!preset_name.empty()) j["preset"] = preset_name;
        if (!j.contains("preset") && !j.contains("problem")) j["preset"] = "burgers-desk";
        if (!format.empty()) j["format"] = format;
        if (!eps.empty()) j["eps"] = parse_list(eps);
        if (!cp_rank.empty()) j["cp_rank"] = to_index(parse_list(cp_rank));
        if (!n_phi.empty()) j["n_phi"] = to_index(parse_list(n_phi));
        if (!n_psi.empty()) j["n_psi"] = to_index(parse_list(n_psi));
        if (!mode.empty()) j["mode"] = mode;
        if (p > 0) j["p"] = p;
        if (count > 0) {
            j["query_count"] = count;
            j["alphas"] = Json::array();
        }
        if (seed >= 0) j["seed"] = seed;
        if (!alpha.empty()) {
            Json list = Json::array();
            std::stringstream ss(alpha);
            std::string one;
            while (std::getline(ss, one, ';')) list.push_back(parse_list(one));
            j["alphas"] = list;
        }
        if (!out.empty()) j["out"] = out;
        return ExperimentConfig::from_json(j);
    }

    static std::vector<Index> to_index(const std::vector<double>& v) {
        std::vector<Index> out;
        for (double x : v) out.push_back(static_cast<Index>(x));
        return out;
    }
};

fs::path prepare(const ExperimentConfig& cfg) {
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------- sample

void cmd_sample(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    const auto model = make_model(cfg.problem);
    const ParameterGrid grid = cfg.parameter_grid();
    const auto t0 = std::chrono::steady_clock::now();
    const SnapshotSet s = sample_snapshots(*model, grid);
    const double secs = seconds_since(t0);
    const fs::path file = dir / "snapshots.trpk";
    save_container(file, to_container(s));

    Manifest m("sample", cfg);
    m.output(file);
    m.summary() = {{"dims", s.phi.dims()}, {"grid_shape", grid.shape()}, {"M", model->size()}, {"N", model->steps()},
                   {"dt", s.dt}, {"seconds", secs}};
    m.save(dir, "manifest_sample.json");
    std::cout << "snapshots " << join(s.phi.dims(), "x") << " -> " << file.string() << "\n";
}

// --------------------------------------------------------------- offline

fs::path artifact_path(const fs::path& dir, const ExperimentConfig& cfg, TromFormat f, double eps, Index rank, bool single) {
    if (single) return dir / "artifact.trpk";
    const std::string tag = f == TromFormat::CP ? "rank" + std::to_string(rank) : "eps" + num(eps);
    return dir / ("artifact_" + cfg.format + "_" + tag + ".trpk");
}

void cmd_offline(const ExperimentConfig& cfg, const std::string& snapshots_path) {
    const fs::path dir = prepare(cfg);
    const fs::path in = snapshots_path.empty() ? dir / "snapshots.trpk" : fs::path(snapshots_path);
    const SnapshotSet s = snapshots_from_container(load_container(in));
    const auto model = make_model(s.model_config);
    const TromFormat f = parse_format(cfg.format);

    std::vector<std::pair<double, Index>> runs;
    if (f == TromFormat::CP)
        for (Index r : cfg.cp_rank) runs.emplace_back(0.0, r);
    else
        for (double e : cfg.eps) runs.emplace_back(e, 0);

    Manifest m("offline", cfg);
    m.input(in);
    const fs::path csv_path = dir / "offline.csv";
    {
        Csv csv(csv_path, {"format", "eps", "cp_rank", "phi_ranks", "psi_ranks", "cf_phi", "cf_psi", "cf_combined",
                           "phi_error", "psi_error", "offline_seconds", "lossless", "artifact"});
        for (const auto& [eps, rank] : runs) {
            const auto t0 = std::chrono::steady_clock::now();
            OfflineArtifact art = trom_offline(s.phi, s.psi, s.grid, cfg.offline_options(eps, rank), model->affine_terms());
            const double secs = seconds_since(t0);
            art.model_config = s.model_config;
            const fs::path file = artifact_path(dir, cfg, f, eps, rank, runs.size() == 1);
            save_container(file, to_container(art));
            m.output(file);
            csv.write({cfg.format, num(eps), std::to_string(rank), join(ranks_of(art.phi.decomposition)),
                       join(ranks_of(art.psi.decomposition)), num(compression_factor(art.phi, art.dims)),
                       num(compression_factor(art.psi, art.dims)), num(combined_compression_factor(art)),
                       num(achieved_error(art.phi.decomposition)), num(achieved_error(art.psi.decomposition)), num(secs),
                       f != TromFormat::CP && eps == 0.0 ? "1" : "0", file.filename().string()});
            std::cout << cfg.format << " eps=" << num(eps) << " ranks [" << join(ranks_of(art.phi.decomposition))
                      << "] / [" << join(ranks_of(art.psi.decomposition)) << "] CF " << num(compression_factor(art.phi, art.dims))
                      << " / " << num(compression_factor(art.psi, art.dims)) << "\n";
        }
    }
    m.output(csv_path);
    m.save(dir, "manifest_offline.json");
}

// ----------------------------------------------------------------- query

void cmd_query(const ExperimentConfig& cfg, const std::string& artifact_path_arg, const std::string& pod_snapshots) {
    const fs::path dir = prepare(cfg);
    const fs::path in = artifact_path_arg.empty() ? dir / "artifact.trpk" : fs::path(artifact_path_arg);
    const OfflineArtifact art = artifact_from_container(load_container(in));
    const auto model = make_model(art.model_config);
    const HyperMode mode = parse_mode(cfg.mode);

    Manifest m("query", cfg);
    m.input(in);
    std::optional<SnapshotSet> snaps;
    if (!pod_snapshots.empty()) {
        snaps = snapshots_from_container(load_container(pod_snapshots));
        m.input(pod_snapshots);
    }

    const fs::path csv_path = dir / "query.csv";
    Csv csv(csv_path, {"alpha", "format", "eps", "n_phi", "n_psi", "mode", "l2l2_error", "l2h1_ratio", "basis_seconds",
                       "system_seconds", "solve_seconds", "local_sigma_phi", "local_sigma_psi", "pod_l2l2_error",
                       "trajectory"});
    const auto alphas = cfg.queries();
    Index counter = 0;
    for (const auto& alpha : alphas) {
        const Trajectory ref = model->solve(alpha);
        for (Index np : cfg.n_phi)
            for (Index nq : cfg.n_psi) {
                const auto t0 = std::chrono::steady_clock::now();
                LocalRom local = local_bases(art, alpha, std::min(np, max_local_dim(art.phi)), std::min(nq, max_local_dim(art.psi)));
                const double t_basis = seconds_since(t0);
                const auto t1 = std::chrono::steady_clock::now();
                build_reduced_system(art, local, mode, model->affine_coefficients(alpha));
                const double t_system = seconds_since(t1);
                const auto t2 = std::chrono::steady_clock::now();
                const ReducedSolution sol = trom_solve(art, local, *model, ref.u0);
                const double t_solve = seconds_since(t2);
                const double l2 = relative_l2l2(sol.u, ref.u);
                const H1Integrals h1 = h1_integrals(*model, sol.u, ref.u, std::min(cfg.t_from, model->dt() * static_cast<double>(model->steps() - 1)));
                std::string pod_err;
                if (snaps) {
                    const PodRom pod = pod_offline(snaps->phi, snaps->psi, local.un.cols(), local.yn.cols(), model->affine_terms());
                    pod_err = num(relative_l2l2(pod_solve(pod, *model, alpha, ref.u0).u, ref.u));
                }
                const fs::path traj = dir / ("trajectory_" + std::to_string(counter++) + ".tnsr");
                save_tensor(traj, DenseTensor::from_matrix(sol.u));
                m.output(traj);
                const Index show = 10;
                csv.write({join(alpha), format_name(art.options.format), num(art.options.eps), std::to_string(local.un.cols()),
                           std::to_string(local.yn.cols()), mode_name(mode), num(l2), num(h1.error / h1.reference),
                           num(t_basis), num(t_system), num(t_solve),
                           join(std::vector<double>(local.sigma_phi.data(), local.sigma_phi.data() + std::min(show, local.sigma_phi.size()))),
                           join(std::vector<double>(local.sigma_psi.data(), local.sigma_psi.data() + std::min(show, local.sigma_psi.size()))),
                           pod_err, traj.filename().string()});
                std::cout << "alpha " << format_params(alpha) << " n=(" << local.un.cols() << "," << local.yn.cols()
                          << ") L2L2 " << num(l2) << (pod_err.empty() ? "" : " POD " + pod_err) << "\n";
            }
    }
    m.output(csv_path);
    m.save(dir, "manifest_query.json");
}

// ----------------------------------------------------------------- study

void cmd_study(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    const auto model = make_model(cfg.problem);
    const ParameterGrid grid = cfg.parameter_grid();
    const SnapshotSet s = sample_snapshots(*model, grid);
    const TromFormat f = parse_format(cfg.format);
    Manifest m("study", cfg);

    // (a) ranks and compression factors, (d) effective rank vs truncated SVD.
    const Svd pod_phi = left_svd(unfold_mode1(s.phi));
    const Svd pod_psi = left_svd(unfold_mode1(s.psi));
    {
        Csv a(dir / "compression.csv", {"format", "eps", "cp_rank", "phi_ranks", "psi_ranks", "cf_phi", "cf_psi", "cf_combined",
                                         "phi_error", "psi_error"});
        Csv d(dir / "effective_rank.csv", {"tensor", "format", "eps", "cp_rank", "effective_rank", "lrtd_error", "svd_error"});
        std::vector<std::pair<double, Index>> runs;
        if (f == TromFormat::CP)
            for (Index r : cfg.cp_rank) runs.emplace_back(0.0, r);
        else
            for (double e : cfg.eps) runs.emplace_back(e, 0);
        for (const auto& [eps, rank] : runs) {
            const OfflineArtifact art = trom_offline(s.phi, s.psi, grid, cfg.offline_options(eps, rank), model->affine_terms());
            const double ephi = relative_error(art.phi.decomposition, s.phi);
            const double epsi = relative_error(art.psi.decomposition, s.psi);
            a.write({cfg.format, num(eps), std::to_string(rank), join(ranks_of(art.phi.decomposition)),
                     join(ranks_of(art.psi.decomposition)), num(compression_factor(art.phi, art.dims)),
                     num(compression_factor(art.psi, art.dims)), num(combined_compression_factor(art)), num(ephi), num(epsi)});
            const Index rphi = effective_rank(art.phi.decomposition);
            const Index rpsi = effective_rank(art.psi.decomposition);
            d.write({"phi", cfg.format, num(eps), std::to_string(rank), std::to_string(rphi), num(ephi), num(svd_tail_error(pod_phi.s, rphi))});
            d.write({"psi", cfg.format, num(eps), std::to_string(rank), std::to_string(rpsi), num(epsi), num(svd_tail_error(pod_psi.s, rpsi))});
        }
    }
    m.output(dir / "compression.csv");
    m.output(dir / "effective_rank.csv");

    // (b) out-of-sample error under grid refinement.
    if (!cfg.refinement.empty()) {
        std::vector<ParameterGrid> grids;
        for (const auto& shape : cfg.refinement) grids.push_back(cfg.grid_with_shape(shape));
        QuerySettings q;
        q.n_phi = cfg.n_phi.front();
        q.n_psi = cfg.n_psi.front();
        q.mode = parse_mode(cfg.mode);
        q.t_from = cfg.t_from;
        const auto alphas = random_parameters(grid, cfg.refinement_queries, cfg.seed);
        const auto rows = refinement_study(*model, grids, cfg.offline_options(cfg.study_eps, cfg.cp_rank.front()), q, alphas);
        Csv b(dir / "refinement.csv", {"grid", "eps", "n_phi", "n_psi", "queries", "mean_ratio", "max_ratio", "mean_l2l2",
                                       "phi_ranks", "psi_ranks", "offline_seconds", "online_seconds"});
        for (const auto& r : rows)
            b.write({join(r.shape, "x"), num(cfg.study_eps), std::to_string(q.n_phi), std::to_string(q.n_psi),
                     std::to_string(alphas.size()), num(r.mean_ratio), num(r.max_ratio), num(r.mean_l2), join(r.phi_ranks),
                     join(r.psi_ranks), num(r.offline_seconds), num(r.online_seconds)});
        m.output(dir / "refinement.csv");
    }

    // (c) singular values of the f-snapshot matrix vs the local matrices.
    {
        const OfflineArtifact art = trom_offline(s.phi, s.psi, grid, cfg.offline_options(cfg.spectrum_eps, cfg.cp_rank.front()), {});
        Csv c(dir / "singular_values.csv", {"series", "alpha", "n", "sigma", "scaled_sigma"});
        auto emit = [&](const std::string& series, const std::string& alpha, const Vector& sv) {
            const Index count = std::min(cfg.singular_value_count, sv.size());
            for (Index n = 0; n < count; ++n) c.write({series, alpha, std::to_string(n + 1), num(sv(n)), num(sv(n) / sv(0))});
        };
        emit("psi_pod", "", pod_psi.s);
        emit("phi_pod", "", pod_phi.s);
        for (const auto& alpha : random_parameters(grid, cfg.singular_value_queries, cfg.seed + 1)) {
            const auto w = interp_weights(grid, alpha, art.options.p);
            emit("psi_local", join(alpha), thin_svd(scaled_core_matrix(art.psi, w), false).s);
            emit("phi_local", join(alpha), thin_svd(scaled_core_matrix(art.phi, w), false).s);
        }
    }
    m.output(dir / "singular_values.csv");
    m.summary() = {{"dims", s.phi.dims()}};
    m.save(dir, "manifest_study.json");
    std::cout << "study tables written to " << dir.string() << "\n";
}

// ---------------------------------------------------------------- verify

void cmd_verify(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    const auto model = make_model(cfg.problem);
    const ParameterGrid grid = cfg.parameter_grid();
    const auto alphas = cfg.queries();

    // Interpolation remainders on every refinement grid not finer than the
    // main grid, fitted as c * delta^rate and evaluated on the main grid.
    std::vector<ParameterGrid> grids;
    for (const auto& shape : cfg.refinement) {
        bool coarser = true;
        for (std::size_t i = 0; i < shape.size(); ++i) coarser = coarser && shape[i] <= grid.shape()[i];
        if (coarser && shape != grid.shape()) grids.push_back(cfg.grid_with_shape(shape));
    }
    grids.push_back(grid);
    std::vector<SnapshotSet> sets;
    for (const auto& g : grids) sets.push_back(sample_snapshots(*model, g));

    std::vector<double> fitted;
    Csv rem(dir / "remainders.csv", {"alpha", "grid", "spacing", "remainder", "fit_rate", "fit_at_main_grid"});
    if (grids.size() >= 3) {
        for (const auto& alpha : alphas) {
            const Trajectory tr = model->solve(alpha);
            std::vector<double> delta, rho;
            for (std::size_t g = 0; g < grids.size(); ++g) {
                delta.push_back(grid_spacing(grids[g]));
                rho.push_back(interpolation_remainder(sets[g].psi, grids[g], cfg.p, alpha, tr.f));
            }
            const PowerFit fit = fit_power_law(delta, rho);
            fitted.push_back(fit.at(delta.back()));
            for (std::size_t g = 0; g < grids.size(); ++g)
                rem.write({join(alpha), join(grids[g].shape(), "x"), num(delta[g]), num(rho[g]), num(fit.rate), num(fitted.back())});
        }
    }

    const OfflineArtifact art = trom_offline(sets.back().phi, sets.back().psi, grid, cfg.offline_options(cfg.study_eps, cfg.cp_rank.front()), {});
    const auto rows = verify_estimates(art, sets.back(), *model, alphas, cfg.verify_n, fitted);
    Csv out(dir / "estimates.csv", {"alpha", "n", "lhs", "c_star", "weight_norm", "eps_term", "compression_term", "tail",
                                    "remainder", "remainder_fit", "bound", "ratio", "violated", "phi_lhs", "phi_bound"});
    Index violations = 0;
    for (const auto& r : rows) {
        violations += r.violated ? 1 : 0;
        out.write({join(r.alpha), std::to_string(r.n), num(r.lhs), num(r.c_star), num(r.weight_norm), num(r.eps_term),
                   num(r.compression_term), num(r.tail), num(r.remainder), r.remainder_fit ? num(*r.remainder_fit) : "",
                   num(r.bound), num(r.ratio), r.violated ? "1" : "0", num(r.phi_lhs), num(r.phi_bound)});
    }
    Manifest m("verify", cfg);
    m.output(dir / "remainders.csv");
    m.output(dir / "estimates.csv");
    m.summary() = {{"rows", rows.size()}, {"violations", violations}};
    m.save(dir, "manifest_verify.json");
    std::cout << rows.size() << " estimate rows, " << violations << " violations\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensorial reduced-order models: sampling, compression, online queries and studies"};
    app.require_subcommand(1);

    Common sample_opts, offline_opts, query_opts, study_opts, verify_opts;
    std::string snapshots_path, artifact, pod_snapshots;

    auto* sample = app.add_subcommand("sample", "run the full-order model on the training grid");
    sample_opts.attach(sample);
    auto* offline = app.add_subcommand("offline", "compress snapshot tensors into an online artifact");
    offline_opts.attach(offline);
    offline->add_option("--snapshots", snapshots_path, "snapshot file (default <out>/snapshots.trpk)");
    auto* query = app.add_subcommand("query", "solve the local reduced model at given parameters");
    query_opts.attach(query);
    query->add_option("--artifact", artifact, "artifact file (default <out>/artifact.trpk)");
    query->add_option("--pod-snapshots", pod_snapshots, "also run POD-DEIM built from these snapshots");
    auto* study = app.add_subcommand("study", "compression, refinement and singular-value tables");
    study_opts.attach(study);
    auto* verify = app.add_subcommand("verify", "check the representation and interpolation estimates");
    verify_opts.attach(verify);

    CLI11_PARSE(app, argc, argv);
    try {
        if (sample->parsed()) cmd_sample(sample_opts.load());
        if (offline->parsed()) cmd_offline(offline_opts.load(), snapshots_path);
        if (query->parsed()) cmd_query(query_opts.load(), artifact, pod_snapshots);
        if (study->parsed()) cmd_study(study_opts.load());
        if (verify->parsed()) cmd_verify(verify_opts.load());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
