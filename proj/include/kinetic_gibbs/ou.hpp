#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <stdexcept>

#include "kinetic_gibbs/rng.hpp"
#include "kinetic_gibbs/wasserstein.hpp"

namespace kg {

// Joint (theta, v) moments, ordered (theta_1..theta_d, v_1..v_d).
using GaussianMomentsPair = GaussianMoments;

// Exact Gaussian propagation of the linear underdamped dynamics for the
// quadratic potential U = kappa |theta|^2 / 2:
//   d theta = v dt,   d v = (-gamma v - kappa theta) dt + sqrt(2 gamma / beta) dB.
// With drift A and diffusion Q = diag(0, 2 gamma / beta I), the stationary
// covariance S = diag((beta kappa)^{-1} I, beta^{-1} I) solves
// A S + S A' + Q = 0, so
//   mean(t) = e^{At} mean(0),   cov(t) = S + e^{At} (cov(0) - S) e^{A't}.
inline GaussianMomentsPair exact_ou_moments(double kappa, double gamma, double beta,
                                            double t, const GaussianMomentsPair& start) {
    if (kappa <= 0) throw std::invalid_argument("exact_ou_moments: kappa must be > 0");
    if (t < 0) throw std::invalid_argument("exact_ou_moments: t must be >= 0");
    const int d2 = start.dim();
    if (d2 % 2 != 0 || start.cov.rows() != d2 || start.cov.cols() != d2)
        throw std::invalid_argument("exact_ou_moments: malformed moment pair");
    const int d = d2 / 2;

    Eigen::MatrixXd drift = Eigen::MatrixXd::Zero(d2, d2);
    drift.topRightCorner(d, d).setIdentity();
    drift.bottomLeftCorner(d, d) = -kappa * Eigen::MatrixXd::Identity(d, d);
    drift.bottomRightCorner(d, d) = -gamma * Eigen::MatrixXd::Identity(d, d);

    Eigen::MatrixXd stat = Eigen::MatrixXd::Zero(d2, d2);
    stat.topLeftCorner(d, d) = (1.0 / (beta * kappa)) * Eigen::MatrixXd::Identity(d, d);
    stat.bottomRightCorner(d, d) = (1.0 / beta) * Eigen::MatrixXd::Identity(d, d);

    const Eigen::MatrixXd expm = (drift * t).exp();
    GaussianMomentsPair out;
    out.mean = expm * start.mean;
    out.cov = stat + expm * (start.cov - stat) * expm.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

// i.i.d. draws from the extended Gibbs target of the quadratic potential:
// theta ~ Normal(0, (beta kappa)^{-1} I), v ~ Normal(0, beta^{-1} I).
inline EmpiricalCloud sample_extended_quadratic(double kappa, double beta, int d,
                                                int n, std::uint64_t seed) {
    if (kappa <= 0) throw std::invalid_argument("sample_extended_quadratic: kappa must be > 0");
    if (n < 1) throw std::invalid_argument("sample_extended_quadratic: n must be >= 1");
    const double sd_theta = 1.0 / std::sqrt(beta * kappa);
    const double sd_v = 1.0 / std::sqrt(beta);
    Rng rng(seed);
    EmpiricalCloud c;
    c.points.resize(n, 2 * d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) c.points(i, j) = sd_theta * rng.normal();
        for (int j = 0; j < d; ++j) c.points(i, d + j) = sd_v * rng.normal();
    }
    return c;
}

// Exact extended-target moments for the quadratic potential.
inline GaussianMomentsPair quadratic_target_moments(double kappa, double beta, int d) {
    GaussianMomentsPair g;
    g.mean = Eigen::VectorXd::Zero(2 * d);
    g.cov = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    g.cov.topLeftCorner(d, d) = (1.0 / (beta * kappa)) * Eigen::MatrixXd::Identity(d, d);
    g.cov.bottomRightCorner(d, d) = (1.0 / beta) * Eigen::MatrixXd::Identity(d, d);
    return g;
}

} // namespace kg
