#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kinetic_gibbs/models.hpp"
#include "kinetic_gibbs/rng.hpp"

namespace kg {

struct UnbiasednessReport {
    double max_abs_deviation = 0.0; // |mean_H - h(theta)|_inf
    double tolerance = 0.0;
    bool pass = false;
    bool exhaustive = false;
};

// Checks E[H(theta, X)] = h(theta), either by exhaustive enumeration of the
// data law or by Monte Carlo with a CLT-scale tolerance (4 sigma / sqrt(N),
// sigma estimated per coordinate).
inline UnbiasednessReport check_unbiasedness_exhaustive(const GradientModel& model,
                                                        const Vec& theta) {
    if (!model.has_full_gradient())
        throw std::runtime_error("check_unbiasedness: model does not expose h");
    if (!model.enumerate_data)
        throw std::runtime_error("check_unbiasedness: data law is not enumerable");
    Vec mean = Vec::Zero(model.dim);
    for (const auto& [x, p] : model.enumerate_data())
        mean += p * model.stochastic_gradient(theta, x);
    UnbiasednessReport rep;
    rep.exhaustive = true;
    rep.max_abs_deviation = (mean - model.full_gradient(theta)).cwiseAbs().maxCoeff();
    rep.tolerance = 1e-10;
    rep.pass = rep.max_abs_deviation < rep.tolerance;
    return rep;
}

inline UnbiasednessReport check_unbiasedness_monte_carlo(const GradientModel& model,
                                                         const Vec& theta, int n_draws,
                                                         std::uint64_t seed = 0) {
    if (!model.has_full_gradient())
        throw std::runtime_error("check_unbiasedness: model does not expose h");
    if (n_draws < 2) throw std::invalid_argument("check_unbiasedness: need n_draws >= 2");
    Rng rng(seed);
    Vec sum = Vec::Zero(model.dim);
    Vec sum_sq = Vec::Zero(model.dim);
    for (int i = 0; i < n_draws; ++i) {
        const Vec g = model.stochastic_gradient(theta, model.sample_data(rng));
        sum += g;
        sum_sq += g.cwiseProduct(g);
    }
    const Vec mean = sum / n_draws;
    const Vec var = (sum_sq / n_draws - mean.cwiseProduct(mean)).cwiseMax(0.0);
    const Vec dev = (mean - model.full_gradient(theta)).cwiseAbs();
    UnbiasednessReport rep;
    rep.max_abs_deviation = dev.maxCoeff();
    rep.pass = true;
    rep.tolerance = 0.0;
    for (int i = 0; i < model.dim; ++i) {
        const double tol = 4.0 * std::sqrt(var(i) / n_draws) + 1e-12;
        rep.tolerance = std::max(rep.tolerance, tol);
        if (dev(i) > tol) rep.pass = false;
    }
    return rep;
}

struct DissipativityReport {
    double worst_stochastic_margin = 0.0; // min of <H(theta,x),theta> - (a_w|theta|^2 - b_w(x))
    double worst_full_margin = 0.0;       // min of <h(theta),theta> - (a|theta|^2 - b)
    bool pass = false;                     // both margins nonnegative
};

namespace detail {

// Probe grid: radii log-spaced, directions uniform on the sphere.
inline std::vector<Vec> probe_grid(int dim, const std::vector<double>& radii,
                                   int n_directions, Rng& rng) {
    std::vector<Vec> pts;
    pts.reserve(radii.size() * static_cast<std::size_t>(n_directions));
    for (int k = 0; k < n_directions; ++k) {
        Vec dir(dim);
        do {
            for (int i = 0; i < dim; ++i) dir(i) = rng.normal();
        } while (dir.norm() < 1e-12);
        dir.normalize();
        for (double r : radii) pts.push_back(r * dir);
    }
    return pts;
}

inline std::vector<double> default_radii() {
    std::vector<double> radii;
    for (int i = 0; i <= 20; ++i) radii.push_back(std::pow(10.0, -3.0 + 5.0 * i / 20.0));
    return radii;
}

} // namespace detail

// Worst margins of the dissipativity inequalities over a radius grid times
// data draws. A negative margin falsifies the declared constants; it is
// reported, not thrown.
inline DissipativityReport probe_dissipativity(const GradientModel& model,
                                               const std::vector<double>& radii,
                                               int n_data_draws, int n_directions = 1000,
                                               std::uint64_t seed = 0) {
    Rng rng(seed);
    const auto grid = detail::probe_grid(model.dim, radii, n_directions, rng);
    std::vector<Vec> draws;
    for (int i = 0; i < n_data_draws; ++i) draws.push_back(model.sample_data(rng));

    DissipativityReport rep;
    rep.worst_stochastic_margin = std::numeric_limits<double>::infinity();
    rep.worst_full_margin = std::numeric_limits<double>::infinity();
    const double a_w = model.witness_a > 0 ? model.witness_a : model.a;
    for (const Vec& th : grid) {
        const double th2 = th.squaredNorm();
        for (const Vec& x : draws) {
            const double b_w = model.witness_b ? model.witness_b(x) : model.b;
            const double margin =
                model.stochastic_gradient(th, x).dot(th) - (a_w * th2 - b_w);
            rep.worst_stochastic_margin = std::min(rep.worst_stochastic_margin, margin);
        }
        if (model.has_full_gradient()) {
            const double margin =
                model.full_gradient(th).dot(th) - (model.a * th2 - model.b);
            rep.worst_full_margin = std::min(rep.worst_full_margin, margin);
        }
    }
    if (!model.has_full_gradient()) rep.worst_full_margin = 0.0;
    rep.pass = rep.worst_stochastic_margin >= 0.0 && rep.worst_full_margin >= 0.0;
    return rep;
}

inline DissipativityReport probe_dissipativity(const GradientModel& model,
                                               int n_data_draws = 16,
                                               std::uint64_t seed = 0) {
    return probe_dissipativity(model, detail::default_radii(), n_data_draws, 1000, seed);
}

struct LipschitzReport {
    double max_theta_ratio = 0.0; // |H(t,x)-H(t',x)| / ((1+|x|)^rho |t-t'|)
    double max_data_ratio = 0.0;  // |H(t,x)-H(t,x')| / ((1+|x|+|x'|)^rho (1+|t|) |x-x'|)
    bool pass = false;
};

// Samples random pairs and reports the largest observed Lipschitz ratios
// against the declared L1, L2. Degenerate pairs are excluded.
inline LipschitzReport probe_lipschitz(const GradientModel& model, int n_pairs,
                                       int n_data_draws, std::uint64_t seed = 0) {
    if (n_pairs < 1) throw std::invalid_argument("probe_lipschitz: n_pairs must be >= 1");
    Rng rng(seed);
    LipschitzReport rep;
    const double scale = 3.0;
    for (int p = 0; p < n_pairs; ++p) {
        Vec th1(model.dim), th2(model.dim);
        for (int i = 0; i < model.dim; ++i) {
            th1(i) = scale * rng.normal();
            th2(i) = scale * rng.normal();
        }
        if ((th1 - th2).norm() < 1e-12) continue;
        for (int q = 0; q < n_data_draws; ++q) {
            const Vec x = model.sample_data(rng);
            const Vec x2 = model.sample_data(rng);
            const double denom_th =
                std::pow(1.0 + x.norm(), model.rho) * (th1 - th2).norm();
            rep.max_theta_ratio = std::max(
                rep.max_theta_ratio,
                (model.stochastic_gradient(th1, x) - model.stochastic_gradient(th2, x)).norm() /
                    denom_th);
            if ((x - x2).norm() >= 1e-12) {
                const double denom_x = std::pow(1.0 + x.norm() + x2.norm(), model.rho) *
                                       (1.0 + th1.norm()) * (x - x2).norm();
                rep.max_data_ratio = std::max(
                    rep.max_data_ratio,
                    (model.stochastic_gradient(th1, x) - model.stochastic_gradient(th1, x2))
                            .norm() /
                        denom_x);
            }
        }
    }
    rep.pass = rep.max_theta_ratio <= model.L1 * (1.0 + 1e-9) &&
               rep.max_data_ratio <= model.L2 * (1.0 + 1e-9);
    return rep;
}

} // namespace kg
