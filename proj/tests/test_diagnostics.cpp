#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kinetic_gibbs/diagnostics.hpp"
#include "kinetic_gibbs/models.hpp"
#include "kinetic_gibbs/ou.hpp"

namespace {

kg::Vec v1(double x) { return kg::Vec::Constant(1, x); }

// synthetic series with the given m2 values and constant se
kg::MomentSeries synthetic_series(const std::vector<double>& m2, double se) {
    kg::MomentSeries s;
    s.n_chains = 100;
    for (std::size_t k = 0; k < m2.size(); ++k) {
        s.iters.push_back(k);
        s.m2.push_back(m2[k]);
        s.m2_se.push_back(se);
        s.th2.push_back(0);
        s.th2_se.push_back(se);
        s.v2.push_back(0);
        s.v2_se.push_back(se);
        s.vsq.push_back(0);
        s.vsq_se.push_back(se);
    }
    return s;
}

} // namespace

TEST_CASE("lyapunov_value closed-form examples") {
    // V(0, 0) = beta u0
    const double u0 = 0.3;
    CHECK(kg::lyapunov_value(kg::Vec::Zero(2), kg::Vec::Zero(2), 2.0, 3.0, 0.2, u0) ==
          doctest::Approx(2.0 * u0).epsilon(1e-14));

    // theta = 0: beta u0 + (beta/2) |v|^2
    kg::Vec v(2);
    v << 1.0, 2.0;
    CHECK(kg::lyapunov_value(kg::Vec::Zero(2), v, 2.0, 3.0, 0.2, u0) ==
          doctest::Approx(2.0 * u0 + 1.0 * v.squaredNorm()).epsilon(1e-12));

    // beta=1, gamma=2, lambda=0.2, U=theta^2/2, theta=1, v=2 -> 5.3
    CHECK(kg::lyapunov_value(v1(1.0), v1(2.0), 1.0, 2.0, 0.2, 0.5) ==
          doctest::Approx(5.3).epsilon(1e-12));

    CHECK_THROWS(kg::lyapunov_value(v1(0.0), v1(0.0), 1.0, 2.0, 0.3, 0.0)); // lambda > 1/4
}

TEST_CASE("lyapunov lower bounds hold on random states") {
    kg::Rng rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        const double beta = 0.5 + rng.uniform() * 3.0;
        const double gamma = 0.5 + rng.uniform() * 4.0;
        const double lambda = 0.01 + rng.uniform() * 0.24;
        kg::Vec th(3), v(3);
        for (int i = 0; i < 3; ++i) {
            th(i) = 5.0 * rng.normal();
            v(i) = 5.0 * rng.normal();
        }
        const double U = 0.4 * th.squaredNorm(); // any U >= 0
        const double V = kg::lyapunov_value(th, v, beta, gamma, lambda, U);
        CHECK(V >= 0.125 * (1 - 2 * lambda) * beta * gamma * gamma * th.squaredNorm() - 1e-9);
        CHECK(V >= 0.25 * beta * (1 - 2 * lambda) * v.squaredNorm() - 1e-9);
        CHECK(V >= 0.0);
    }
}

TEST_CASE("lyapunov_from_scalars matches lyapunov_value") {
    kg::Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        kg::Vec th(2), v(2);
        for (int i = 0; i < 2; ++i) {
            th(i) = rng.normal();
            v(i) = rng.normal();
        }
        const double direct = kg::lyapunov_value(th, v, 1.5, 2.5, 0.2, 0.7);
        const double scalar = kg::lyapunov_from_scalars(th.squaredNorm(), v.squaredNorm(),
                                                        th.dot(v), 0.7, 1.5, 2.5, 0.2);
        CHECK(direct == doctest::Approx(scalar).epsilon(1e-12));
    }
}

TEST_CASE("track_moments: single deterministic chain gives exact values") {
    auto model = kg::gaussian_location_model(kg::Vec::Zero(1), 0.0);
    kg::SamplerConfig cfg;
    cfg.eta = 0.05;
    cfg.gamma = 2.0;
    cfg.beta = 1.0;
    cfg.steps = 50;
    cfg.noise_enabled = false;
    cfg.thin = 1;
    kg::InitialDist init;
    init.theta0 = v1(1.0);
    init.v0 = v1(0.5);
    const auto ens = kg::run_ensemble(model, cfg, 1, init);
    const auto series = kg::track_moments(ens, cfg.beta, cfg.gamma, 0.2);

    // replay the deterministic recursion
    kg::ChainState s{v1(1.0), v1(0.5)};
    for (std::size_t r = 0; r < series.size(); ++r) {
        const double V = kg::lyapunov_value(s.theta, s.v, cfg.beta, cfg.gamma, 0.2,
                                            model.potential(s.theta));
        CHECK(series.m2[r] == doctest::Approx(V / cfg.beta).epsilon(1e-12));
        CHECK(series.th2[r] == doctest::Approx(s.theta.squaredNorm()).epsilon(1e-12));
        CHECK(series.vsq[r] == doctest::Approx(V * V).epsilon(1e-12));
        s = kg::sghmc_step(s, model.full_gradient(s.theta), v1(0.0), cfg);
    }
}

TEST_CASE("track_moments: ballistic chain mean|theta_k|^2 exact") {
    // zero gradient, gamma ~ 0, noise off: theta_k = theta0 + k eta v0
    kg::GradientModel m;
    m.dim = 1;
    m.data_dim = 1;
    m.potential = [](const kg::Vec&) { return 0.0; };
    m.stochastic_gradient = [](const kg::Vec&, const kg::Vec&) { return kg::Vec::Zero(1); };
    m.sample_data = [](kg::Rng&) { return kg::Vec::Zero(1); };
    kg::SamplerConfig cfg;
    cfg.eta = 0.1;
    cfg.gamma = 1e-300;
    cfg.beta = 1.0;
    cfg.steps = 20;
    cfg.noise_enabled = false;
    cfg.thin = 1;
    kg::InitialDist init;
    init.theta0 = v1(0.5);
    init.v0 = v1(1.0);
    const auto ens = kg::run_ensemble(m, cfg, 3, init);
    for (std::size_t r = 0; r < ens.n_records(); ++r) {
        const double k = static_cast<double>(ens.iters[r]);
        const double want = std::pow(0.5 + k * 0.1 * 1.0, 2);
        CHECK(ens.at(ens.theta2, r, 0) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("track_moments: quadratic ensemble matches the OU oracle within 4 se") {
    auto model = kg::gaussian_location_model(kg::Vec::Zero(1), 0.0);
    kg::SamplerConfig cfg;
    cfg.eta = 0.005;
    cfg.gamma = 2.0;
    cfg.beta = 1.0;
    cfg.steps = 300;
    cfg.thin = 1;
    cfg.master_seed = 8;
    kg::InitialDist init;
    init.theta0 = v1(1.0);
    init.v0 = v1(0.0);
    const auto ens = kg::run_ensemble(model, cfg, 1500, init);
    const auto series = kg::track_moments(ens, cfg.beta, cfg.gamma, 0.2);

    kg::GaussianMoments start;
    start.mean = kg::Vec::Zero(2);
    start.mean(0) = 1.0;
    start.cov = Eigen::MatrixXd::Zero(2, 2);
    for (std::size_t r : {50ul, 150ul, 300ul}) {
        const auto oracle =
            kg::exact_ou_moments(1.0, cfg.gamma, cfg.beta, ens.iters[r] * cfg.eta, start);
        const double want_th2 = oracle.cov(0, 0) + oracle.mean(0) * oracle.mean(0);
        const double want_v2 = oracle.cov(1, 1) + oracle.mean(1) * oracle.mean(1);
        CHECK(std::abs(series.th2[r] - want_th2) < 4.0 * series.th2_se[r] + 10.0 * cfg.eta);
        CHECK(std::abs(series.v2[r] - want_v2) < 4.0 * series.v2_se[r] + 10.0 * cfg.eta);
    }
}

TEST_CASE("check_drift on synthetic series") {
    const double gamma = 2.0, lambda = 0.2, eta = 1e-3, K3 = 3.4;
    const double rho = 1.0 - 0.5 * gamma * lambda * eta;

    // exact recursion: zero violations at any z > 0
    std::vector<double> exact{5.0};
    for (int k = 0; k < 50; ++k) exact.push_back(rho * exact.back() + 2.0 * K3 * eta);
    auto s = synthetic_series(exact, 0.01);
    auto rep = kg::check_drift(s, gamma, lambda, eta, K3, 0.5);
    CHECK(rep.violations == 0);
    CHECK(rep.pass);

    // one residual at +10 se: exactly one violation
    auto bumped = exact;
    bumped[25] += 10.0 * 0.01;
    // the bump perturbs residuals k=24 (up) and k=25 (down); only k=24 violates
    auto s2 = synthetic_series(bumped, 0.01);
    auto rep2 = kg::check_drift(s2, gamma, lambda, eta, K3, 4.0);
    CHECK(rep2.violations == 1);

    // series too short
    auto s3 = synthetic_series({1.0}, 0.01);
    CHECK_THROWS(kg::check_drift(s3, gamma, lambda, eta, K3));

    // too few chains
    auto s4 = synthetic_series(exact, 0.01);
    s4.n_chains = 10;
    CHECK_THROWS(kg::check_drift(s4, gamma, lambda, eta, K3));
}

TEST_CASE("check_drift passes on a real quadratic run under the lemma's hypotheses") {
    // P0-compatible gaussian-location model: point-mass data at 0, d = 1
    auto model = kg::gaussian_location_model(kg::Vec::Zero(1), 0.0);
    kg::SamplerConfig cfg;
    cfg.eta = 1e-6;
    cfg.gamma = 2.0;
    cfg.beta = 1.0;
    cfg.steps = 3000;
    cfg.thin = 1;
    cfg.master_seed = 41;
    kg::InitialDist init;
    init.theta0 = v1(0.0);
    init.v0 = v1(0.0);
    const auto ens = kg::run_ensemble(model, cfg, 200, init);
    const auto series = kg::track_moments(ens, cfg.beta, cfg.gamma, 0.2);
    const auto rep = kg::check_drift(series, cfg.gamma, 0.2, cfg.eta, 3.4, 4.0);
    CHECK(rep.pass);
}

TEST_CASE("check_moment_bounds") {
    // degenerate chain at the origin with u0 = 0: all estimates zero, pass
    auto zero = synthetic_series(std::vector<double>(10, 0.0), 0.0);
    for (auto& v : zero.th2_se) v = 0.0;
    auto rep = kg::check_moment_bounds(zero, 1.0, 1.0, 2.0, 10.0);
    CHECK(rep.pass);

    // series exceeding C_theta by 10 se fails with the named bound
    auto bad = synthetic_series(std::vector<double>(10, 0.0), 0.01);
    bad.th2.assign(10, 5.0 + 10.0 * 0.01);
    auto rep2 = kg::check_moment_bounds(bad, 5.0, 100.0, 200.0, 1e6);
    CHECK(!rep2.pass);
    bool named = false;
    for (const auto& c : rep2.checks)
        if (c.name == "C_theta" && !c.pass) named = true;
    CHECK(named);

    // missing V^2 column: skipped with warning
    auto no_vsq = synthetic_series(std::vector<double>(5, 0.0), 0.01);
    no_vsq.vsq.clear();
    no_vsq.vsq_se.clear();
    auto rep3 = kg::check_moment_bounds(no_vsq, 1.0, 1.0, 2.0, 10.0);
    CHECK(!rep3.warning.empty());
    CHECK(rep3.checks.back().skipped);
}

TEST_CASE("moment series CSV schema") {
    auto s = synthetic_series({1.0, 2.0, 3.0}, 0.1);
    const std::string path = "diag_series_test.csv";
    kg::save_moment_series_csv(s, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,m2,m2_se,th2,th2_se,v2,v2_se,vsq,vsq_se");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    std::remove(path.c_str());
}
