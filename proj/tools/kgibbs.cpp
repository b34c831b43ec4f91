// kgibbs: configuration-driven experiment harness for the SGHMC laboratory.
//
// Subcommands: constants, sample, scaling, optimize, blr. Each takes a flat
// key=value config file ('#' comments). Exit codes: 0 success, 2 config
// error, 3 numerical divergence (partial outputs are still written).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kinetic_gibbs/chain.hpp"
#include "kinetic_gibbs/config.hpp"
#include "kinetic_gibbs/constants.hpp"
#include "kinetic_gibbs/diagnostics.hpp"
#include "kinetic_gibbs/models.hpp"
#include "kinetic_gibbs/ou.hpp"
#include "kinetic_gibbs/probes.hpp"
#include "kinetic_gibbs/wasserstein.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

kg::Vec read_vec(kg::Config& cfg, const std::string& key, int dim, double fallback) {
    if (!cfg.has(key)) return kg::Vec::Constant(dim, fallback);
    const auto vals = cfg.get_double_list(key);
    if (static_cast<int>(vals.size()) == 1) return kg::Vec::Constant(dim, vals[0]);
    if (static_cast<int>(vals.size()) != dim)
        throw kg::ConfigError("key " + key + ": expected 1 or " + std::to_string(dim) +
                              " values");
    kg::Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = vals[static_cast<std::size_t>(i)];
    return v;
}

struct ModelSpec {
    kg::GradientModel model;
    std::string name;
};

ModelSpec build_model(kg::Config& cfg) {
    const std::string name = cfg.get_string("model");
    ModelSpec spec;
    spec.name = name;
    if (name == "quadratic" || name == "gaussian_location") {
        const int dim = static_cast<int>(cfg.get_int("dim", 1));
        const kg::Vec mu = read_vec(cfg, "mu", dim, 0.0);
        // "quadratic" is the exact-gradient special case (point-mass data)
        const double sd = cfg.get_double("data_sd", name == "quadratic" ? 0.0 : 1.0);
        spec.model = kg::gaussian_location_model(mu, sd);
    } else if (name == "mixture") {
        const int dim = static_cast<int>(cfg.get_int("dim", 1));
        const kg::Vec mode = read_vec(cfg, "mode", dim, 1.0);
        spec.model = kg::mixture_prior_model(mode);
    } else if (name == "blr") {
        kg::BLRDataset ds;
        if (cfg.has("dataset")) {
            ds = kg::blr_load_csv(cfg.get_string("dataset"));
        } else {
            const int M = static_cast<int>(cfg.get_int("blr_M"));
            const int d = static_cast<int>(cfg.get_int("blr_d"));
            const kg::Vec tt = read_vec(cfg, "theta_true", d, 1.0);
            ds = kg::blr_synthetic_data(M, d, tt,
                                        static_cast<std::uint64_t>(cfg.get_int("data_seed", 1)));
        }
        ds.minibatch = static_cast<int>(cfg.get_int("K", ds.size()));
        const kg::Vec mode = read_vec(cfg, "prior_mode", ds.dim(), 1.0);
        spec.model = kg::blr_model(ds, mode);
    } else {
        throw kg::ConfigError("unknown model: " + name);
    }
    return spec;
}

kg::SamplerConfig build_sampler(kg::Config& cfg) {
    kg::SamplerConfig sc;
    sc.eta = cfg.get_double("eta");
    sc.gamma = cfg.get_double("gamma", 2.0);
    sc.beta = cfg.get_double("beta", 1.0);
    sc.steps = static_cast<std::size_t>(cfg.get_int("steps"));
    sc.master_seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    sc.burn_in = static_cast<std::size_t>(cfg.get_int("burn_in", sc.steps / 10));
    sc.thin = static_cast<std::size_t>(
        cfg.get_int("thin", std::max<long long>(1, static_cast<long long>(sc.steps) / 10000)));
    sc.noise_enabled = cfg.get_bool("noise", true);
    sc.validate();
    return sc;
}

kg::InitialDist build_init(kg::Config& cfg, int dim) {
    kg::InitialDist init;
    const std::string kind = cfg.get_string("init", "point");
    init.theta0 = read_vec(cfg, "theta0", dim, 0.0);
    init.v0 = read_vec(cfg, "v0", dim, 0.0);
    if (kind == "gaussian") {
        init.kind = kg::InitialDist::Kind::gaussian;
        init.sd_theta = cfg.get_double("init_sd_theta", 1.0);
        init.sd_v = cfg.get_double("init_sd_v", 1.0);
    } else if (kind != "point") {
        throw kg::ConfigError("key init: expected point or gaussian");
    }
    return init;
}

// ProblemParams from config keys named after the theory's symbols. Presence of
// "a" marks the block as supplied.
kg::ProblemParams build_params(kg::Config& cfg, double gamma, double beta, double d) {
    kg::ProblemParams p;
    p.L1 = cfg.get_double("L1", 1.0);
    p.L2 = cfg.get_double("L2", 1.0);
    p.rho = cfg.get_double("rho", 0.0);
    p.C_rho = cfg.get_double("C_rho", 1.0);
    p.H0 = cfg.get_double("H0", 1.0);
    p.h0 = cfg.get_double("h0", 1.0);
    p.u0 = cfg.get_double("u0", 0.0);
    p.L1_bar = cfg.get_double("L1_bar", p.L1);
    p.a = cfg.get_double("a");
    p.b = cfg.get_double("b", 1.0);
    p.gamma = gamma;
    p.beta = beta;
    p.d = d;
    p.sigma_Z = cfg.get_double("sigma_Z", 1.0);
    p.m0 = cfg.get_double("m0", 0.0);
    p.alpha = cfg.get_double("alpha", 1.0);
    if (cfg.has("W_rho0")) p.W_rho0 = cfg.get_double("W_rho0");
    if (cfg.has("C2_star")) p.C2_star = cfg.get_double("C2_star");
    if (cfg.has("c_LS")) p.c_LS = cfg.get_double("c_LS");
    if (cfg.has("L1_prime")) p.L1_prime = cfg.get_double("L1_prime");
    if (cfg.has("B1")) p.B1 = cfg.get_double("B1");
    if (cfg.has("M")) p.M = cfg.get_double("M");
    p.validate();
    return p;
}

std::string out_path(kg::Config& cfg, const std::string& file) {
    const std::string dir = cfg.get_string("out_dir", ".");
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / file).string();
}

void warn_eta(const kg::ProblemParams& p, double eta) {
    const double emax = kg::eta_max(p);
    if (eta > emax)
        std::cerr << "warning: eta = " << eta << " exceeds theoretical eta_max = " << emax
                  << "\n";
}

int cmd_constants(const std::string& config_path) {
    auto cfg = kg::Config::from_file(config_path);
    const double gamma = cfg.get_double("gamma", 2.0);
    const double beta = cfg.get_double("beta", 1.0);
    const double d = cfg.get_double("d", 1.0);
    const double eta = cfg.get_double("eta", 0.01);
    const auto p = build_params(cfg, gamma, beta, d);
    const std::string out = out_path(cfg, "constants.csv");
    cfg.finish();
    const auto rep = kg::evaluate_all(p, eta);
    kg::save_report_csv(rep, out);
    std::printf("eta_max = %.12g\n", rep.value("eta_max"));
    std::printf("gibbs_gap = %.12g\n", rep.value("gibbs_gap"));
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

void write_reports(const kg::EnsembleResult& ens, const kg::ProblemParams& p, double eta,
                   const std::string& moments_path) {
    const auto la = kg::lambda_ac(p);
    const auto series = kg::track_moments(ens, p.beta, p.gamma, la.lambda);
    kg::save_moment_series_csv(series, moments_path);
    const auto k = kg::k_constants(p, la.lambda, la.A_c);
    const auto kb = kg::kbar_and_d(p, la.lambda, la.A_c);
    const auto mb = kg::moment_bounds(p, la.lambda, la.A_c);
    const double EV0 = p.initial_lyapunov();
    const double vsq_bound = EV0 * EV0 + 2.0 * kb.D / (p.gamma * la.lambda);
    const auto bounds =
        kg::check_moment_bounds(series, mb.C_theta, mb.C_v, mb.C_zeta, vsq_bound);
    for (const auto& c : bounds.checks)
        std::printf("bound %-8s %-7s bound=%.6g worst_z=%.3f\n", c.name.c_str(),
                    c.skipped ? "skipped" : (c.pass ? "pass" : "FAIL"), c.bound, c.worst_z);
    if (!bounds.warning.empty()) std::printf("warning: %s\n", bounds.warning.c_str());
    bool drift_possible = series.n_chains >= 30 && series.size() >= 2;
    for (std::size_t i = 0; i + 1 < series.iters.size() && drift_possible; ++i)
        if (series.iters[i + 1] - series.iters[i] != 1) drift_possible = false;
    if (drift_possible) {
        const auto drift = kg::check_drift(series, p.gamma, la.lambda, eta, k.K3);
        std::printf("drift %s violations=%zu budget=%zu\n", drift.pass ? "pass" : "FAIL",
                    drift.violations, drift.budget);
    } else {
        std::printf("drift skipped (needs >= 30 chains and thin = 1)\n");
    }
}

int cmd_sample(const std::string& config_path) {
    auto cfg = kg::Config::from_file(config_path);
    auto spec = build_model(cfg);
    auto sc = build_sampler(cfg);
    auto init = build_init(cfg, spec.model.dim);
    const std::size_t n_chains = static_cast<std::size_t>(cfg.get_int("n_chains", 1));
    std::optional<kg::ProblemParams> params;
    if (cfg.has("a"))
        params = build_params(cfg, sc.gamma, sc.beta, static_cast<double>(spec.model.dim));
    const std::string moments_path = out_path(cfg, "moments.csv");
    const std::string cloud_path = out_path(cfg, "terminal.csv");
    cfg.finish();
    if (params) warn_eta(*params, sc.eta);

    kg::EnsembleResult ens;
    int rc = 0;
    try {
        ens = kg::run_ensemble(spec.model, sc, n_chains, init);
    } catch (const kg::EnsembleDivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        ens = e.partial_result;
        rc = kExitDivergence;
    }
    if (ens.n_chains > 0) {
        kg::save_cloud_csv(ens.terminal, cloud_path);
        if (spec.model.has_potential()) {
            if (params) {
                write_reports(ens, *params, sc.eta, moments_path);
            } else {
                // lambda = 1/4 fallback for the Lyapunov-based columns
                const auto series = kg::track_moments(ens, sc.beta, sc.gamma, 0.25);
                kg::save_moment_series_csv(series, moments_path);
            }
        }
        std::printf("wrote %s and %s (%zu chains)\n", moments_path.c_str(), cloud_path.c_str(),
                    ens.n_chains);
    }
    return rc;
}

int cmd_scaling(const std::string& config_path) {
    auto cfg = kg::Config::from_file(config_path);
    auto etas = cfg.get_double_list("eta_list");
    std::sort(etas.begin(), etas.end(), std::greater<>());
    const double T = cfg.get_double("physical_time", 2000.0);
    const double gamma = cfg.get_double("gamma", 2.0);
    const double beta = cfg.get_double("beta", 1.0);
    const int dim = static_cast<int>(cfg.get_int("dim", 1));
    const std::size_t n_chains = static_cast<std::size_t>(cfg.get_int("n_chains", 200));
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    auto init = build_init(cfg, dim);
    const std::string csv_path = out_path(cfg, "scaling.csv");
    const std::string plot_path = out_path(cfg, "scaling.gnuplot");

    // Closed-form quadratic target (kappa = 1), or a user-supplied reference.
    kg::EmpiricalCloud reference;
    if (cfg.has("reference"))
        reference = kg::load_cloud_csv(cfg.get_string("reference"));
    else
        reference = kg::sample_extended_quadratic(1.0, beta, dim, static_cast<int>(n_chains),
                                                  kg::splitmix64(seed ^ 0x9e3779b9ull));
    cfg.finish();
    const auto target = kg::quadratic_target_moments(1.0, beta, dim);
    auto model = kg::gaussian_location_model(kg::Vec::Zero(dim), 0.0);

    std::ofstream csv(csv_path);
    csv.precision(17);
    csv << "eta,w2_moment,w2_assign,mc_se\n";
    int rc = 0;
    for (double eta : etas) {
        kg::SamplerConfig sc;
        sc.eta = eta;
        sc.gamma = gamma;
        sc.beta = beta;
        sc.steps = static_cast<std::size_t>(std::llround(T / eta));
        sc.master_seed = seed;
        sc.burn_in = sc.steps; // terminal-state comparison only
        sc.thin = 1;
        kg::EnsembleResult ens;
        try {
            ens = kg::run_ensemble(model, sc, n_chains, init);
        } catch (const kg::EnsembleDivergenceError& e) {
            std::cerr << "error at eta = " << eta << ": " << e.what() << "\n";
            rc = kExitDivergence;
            continue;
        }
        const auto& cloud = ens.terminal;
        const double w2m = kg::w2_gaussian(kg::fit_gaussian(cloud), target);
        const double w2a = kg::w2_assignment(cloud, reference).w2;
        // block estimate of the Monte Carlo error of w2_moment
        const int B = 4;
        const int per = static_cast<int>(cloud.points.rows()) / B;
        std::vector<double> block;
        for (int b = 0; b < B && per >= 2; ++b) {
            kg::EmpiricalCloud part;
            part.points = cloud.points.middleRows(b * per, per);
            block.push_back(kg::w2_gaussian(kg::fit_gaussian(part), target));
        }
        double mc_se = 0;
        if (block.size() >= 2) {
            double mean = 0;
            for (double v : block) mean += v;
            mean /= static_cast<double>(block.size());
            double ss = 0;
            for (double v : block) ss += (v - mean) * (v - mean);
            mc_se = std::sqrt(ss / (block.size() * (block.size() - 1.0)));
        }
        csv << eta << "," << w2m << "," << w2a << "," << mc_se << "\n";
        std::printf("eta=%.6g w2_moment=%.6g w2_assign=%.6g mc_se=%.3g\n", eta, w2m, w2a,
                    mc_se);
    }
    csv.close();
    std::ofstream plot(plot_path);
    plot << "set logscale xy\n"
            "set xlabel 'eta'\n"
            "set ylabel 'W2 error'\n"
            "set datafile separator ','\n"
            "set key left top\n"
            "plot '" << csv_path << "' every ::1 using 1:2 with linespoints title 'moment', \\\n"
            "     '" << csv_path << "' every ::1 using 1:3 with linespoints title 'assignment'\n";
    std::printf("wrote %s and %s\n", csv_path.c_str(), plot_path.c_str());
    return rc;
}

// 1-d golden-section minimization of f on [lo, hi] to xtol.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > xtol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    return f(0.5 * (lo + hi));
}

double model_u_star(const ModelSpec& spec, kg::Config& cfg) {
    if (spec.name == "mixture") {
        // by symmetry the minimizer lies on span{mode}
        const int dim = spec.model.dim;
        const kg::Vec mode = read_vec(cfg, "mode", dim, 1.0);
        const double mn = mode.norm();
        if (mn == 0) return spec.model.potential(kg::Vec::Zero(dim));
        const kg::Vec dir = mode / mn;
        auto f = [&](double t) { return spec.model.potential(t * dir); };
        return golden_min(f, -1.0, mn + 2.0, 1e-10);
    }
    return 0.0; // quadratic: U(mu) = 0
}

int cmd_optimize(const std::string& config_path) {
    auto cfg = kg::Config::from_file(config_path);
    auto spec = build_model(cfg);
    if (!spec.model.has_potential())
        throw kg::ConfigError("optimize: model must expose a potential");
    auto sc = build_sampler(cfg);
    auto init = build_init(cfg, spec.model.dim);
    const std::size_t n_chains = static_cast<std::size_t>(cfg.get_int("n_chains", 100));
    std::optional<kg::ProblemParams> params;
    if (cfg.has("a"))
        params = build_params(cfg, sc.gamma, sc.beta, static_cast<double>(spec.model.dim));
    const double u_star = model_u_star(spec, cfg);
    const std::string csv_path = out_path(cfg, "suboptimality.csv");
    cfg.finish();
    if (params) warn_eta(*params, sc.eta);

    kg::EnsembleResult ens;
    int rc = 0;
    try {
        ens = kg::run_ensemble(spec.model, sc, n_chains, init);
    } catch (const kg::EnsembleDivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        ens = e.partial_result;
        rc = kExitDivergence;
    }
    if (ens.n_chains == 0) return rc;

    std::ofstream csv(csv_path);
    csv.precision(17);
    csv << "k,subopt,se,bound\n";
    double last_subopt = 0, last_se = 0;
    for (std::size_t r = 0; r < ens.n_records(); ++r) {
        double mean = 0;
        for (std::size_t c = 0; c < ens.n_chains; ++c) mean += ens.at(ens.u, r, c);
        mean = mean / static_cast<double>(ens.n_chains) - u_star;
        double ss = 0;
        for (std::size_t c = 0; c < ens.n_chains; ++c) {
            const double dev = ens.at(ens.u, r, c) - u_star - mean;
            ss += dev * dev;
        }
        const double se = ens.n_chains > 1
                              ? std::sqrt(ss / (static_cast<double>(ens.n_chains) *
                                                (ens.n_chains - 1.0)))
                              : 0.0;
        double bound = std::numeric_limits<double>::quiet_NaN();
        if (params) {
            const auto ob =
                kg::optimization_bound(*params, sc.eta, static_cast<double>(ens.iters[r]));
            bound = ob.total;
        }
        csv << ens.iters[r] << "," << mean << "," << se << "," << bound << "\n";
        last_subopt = mean;
        last_se = se;
    }
    std::printf("terminal suboptimality = %.6g (se %.3g), U_star = %.12g\n", last_subopt,
                last_se, u_star);
    std::printf("wrote %s\n", csv_path.c_str());
    return rc;
}

int cmd_blr(const std::string& config_path) {
    auto cfg = kg::Config::from_file(config_path);
    if (cfg.has("model") && cfg.get_string("model") != "blr")
        throw kg::ConfigError("blr subcommand requires model = blr");
    kg::BLRDataset ds;
    int test_M = 0;
    kg::Vec theta_true;
    const std::uint64_t data_seed = static_cast<std::uint64_t>(cfg.get_int("data_seed", 1));
    if (cfg.has("dataset")) {
        ds = kg::blr_load_csv(cfg.get_string("dataset"));
    } else {
        const int M = static_cast<int>(cfg.get_int("blr_M"));
        const int d = static_cast<int>(cfg.get_int("blr_d"));
        theta_true = read_vec(cfg, "theta_true", d, 1.0);
        ds = kg::blr_synthetic_data(M, d, theta_true, data_seed);
        test_M = static_cast<int>(cfg.get_int("test_M", M / 4));
    }
    ds.minibatch = static_cast<int>(cfg.get_int("K", ds.size()));
    const kg::Vec mode = read_vec(cfg, "prior_mode", ds.dim(), 1.0);
    auto model = kg::blr_model(ds, mode);
    auto sc = build_sampler(cfg);
    auto init = build_init(cfg, model.dim);
    const std::size_t n_chains = static_cast<std::size_t>(cfg.get_int("n_chains", 4));
    const std::string csv_path = out_path(cfg, "posterior.csv");
    cfg.finish();

    // unbiasedness report: exhaustive when the tuple space is small
    kg::UnbiasednessReport unb;
    kg::Rng probe_rng(data_seed ^ 0xabcdefull);
    kg::Vec theta_probe(model.dim);
    for (int i = 0; i < model.dim; ++i) theta_probe(i) = probe_rng.normal();
    const double tuples = std::pow(static_cast<double>(ds.size()), ds.minibatch);
    if (tuples <= 4096)
        unb = kg::check_unbiasedness_exhaustive(model, theta_probe);
    else
        unb = kg::check_unbiasedness_monte_carlo(model, theta_probe, 20000, data_seed);

    // posterior mean over recorded states, pooled across chains
    kg::Vec posterior_mean = kg::Vec::Zero(model.dim);
    std::size_t total_records = 0;
    int rc = 0;
    for (std::size_t c = 0; c < n_chains; ++c) {
        kg::SamplerConfig scc = sc;
        scc.chain_id = c;
        kg::Rng init_rng(sc.master_seed, c);
        try {
            const auto res = kg::run_chain(model, scc, init.draw(init_rng));
            for (const auto& st : res.trajectory) posterior_mean += st.theta;
            total_records += res.trajectory.size();
        } catch (const kg::DivergenceError& e) {
            std::cerr << "error: " << e.what() << "\n";
            rc = kExitDivergence;
        }
    }
    if (total_records == 0) return rc == 0 ? kExitDivergence : rc;
    posterior_mean /= static_cast<double>(total_records);

    // held-out accuracy of the posterior-mean classifier (synthetic data only)
    double accuracy = std::numeric_limits<double>::quiet_NaN();
    if (test_M > 0) {
        const auto test =
            kg::blr_synthetic_data(test_M, ds.dim(), theta_true, data_seed ^ 0x5eedull);
        int correct = 0;
        for (int i = 0; i < test.size(); ++i) {
            const int pred = kg::sigmoid(test.z.row(i).dot(posterior_mean)) >= 0.5 ? 1 : 0;
            if (pred == test.y[i]) ++correct;
        }
        accuracy = static_cast<double>(correct) / test.size();
    }

    std::ofstream csv(csv_path);
    csv.precision(17);
    csv << "name,value\n";
    csv << "accuracy," << accuracy << "\n";
    csv << "unbiasedness_deviation," << unb.max_abs_deviation << "\n";
    csv << "unbiasedness_pass," << (unb.pass ? 1 : 0) << "\n";
    csv << "unbiasedness_exhaustive," << (unb.exhaustive ? 1 : 0) << "\n";
    for (int i = 0; i < model.dim; ++i)
        csv << "posterior_mean_" << (i + 1) << "," << posterior_mean(i) << "\n";
    std::printf("accuracy = %.4f, unbiasedness deviation = %.3g (%s)\n", accuracy,
                unb.max_abs_deviation, unb.exhaustive ? "exhaustive" : "monte carlo");
    std::printf("wrote %s\n", csv_path.c_str());
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "kgibbs: SGHMC sampling/optimization laboratory.\n"
        "Config files are flat key=value text with '#' comments; unknown keys are rejected.\n"
        "Exit codes: 0 success, 2 config error, 3 numerical divergence."};
    app.require_subcommand(1);

    std::string config_path;
    auto add = [&](const char* name, const char* desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("config", config_path, "key=value config file")->required();
        return sub;
    };
    auto* c_const = add("constants",
                        "Evaluate every explicit constant.\n"
                        "Writes constants.csv: name,value,log10_value,formula_ref");
    auto* c_sample = add("sample",
                         "Run an SGHMC ensemble.\n"
                         "Writes moments.csv: k,m2,m2_se,th2,th2_se,v2,v2_se,vsq,vsq_se\n"
                         "and terminal.csv: one (theta..., v...) point per row");
    auto* c_scaling = add("scaling",
                          "Terminal W2 error vs step size at fixed physical time.\n"
                          "Writes scaling.csv: eta,w2_moment,w2_assign,mc_se and a gnuplot "
                          "script");
    auto* c_opt = add("optimize",
                      "Track mean suboptimality E U(theta_k) - U_star.\n"
                      "Writes suboptimality.csv: k,subopt,se,bound");
    auto* c_blr = add("blr",
                      "Bayesian logistic regression posterior sampling.\n"
                      "Writes posterior.csv: name,value (accuracy, unbiasedness report, "
                      "posterior mean)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (c_const->parsed()) return cmd_constants(config_path);
        if (c_sample->parsed()) return cmd_sample(config_path);
        if (c_scaling->parsed()) return cmd_scaling(config_path);
        if (c_opt->parsed()) return cmd_optimize(config_path);
        if (c_blr->parsed()) return cmd_blr(config_path);
    } catch (const kg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        // dataset / IO problems surface as config errors per the CLI contract
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
