#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kinetic_gibbs/rng.hpp"

namespace kg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A potential with stochastic gradient oracle H(theta, x), data sampler and
// declared smoothness/dissipativity constants. Immutable after construction;
// data sampling uses the caller's RNG stream, so models are safe to share
// across chains.
struct GradientModel {
    int dim = 0;      // parameter dimension d
    int data_dim = 0; // dimension of one data sample x

    std::function<double(const Vec&)> potential;                  // U(theta), optional
    std::function<Vec(const Vec&)> full_gradient;                 // h(theta), optional
    std::function<Vec(const Vec&, const Vec&)> stochastic_gradient; // H(theta, x)
    std::function<Vec(Rng&)> sample_data;                         // X ~ data law

    // Enumerable data law (value, probability) pairs; null when the law is
    // continuous. Used by the exhaustive unbiasedness checker.
    std::function<std::vector<std::pair<Vec, double>>()> enumerate_data;

    // Declared assumption constants.
    double L1 = 0, L2 = 0, rho = 0; // local Lipschitz constants and growth exponent
    double a = 0, b = 0;            // dissipativity aggregates
    double H0 = 0;                  // |H(0,0)|
    double h0 = 0;                  // |h(0)|
    double u0 = 0;                  // U(0) after the nonnegativity shift

    // Optional per-sample dissipativity witness: <H(theta,x),theta> >=
    // witness_a |theta|^2 - witness_b(x). Defaults to the aggregate (a, b).
    double witness_a = 0;
    std::function<double(const Vec&)> witness_b;

    bool has_potential() const { return static_cast<bool>(potential); }
    bool has_full_gradient() const { return static_cast<bool>(full_gradient); }
};

// H(theta, x) = theta - x with X ~ Normal(mu_x, data_sd^2 I). The simplest
// model satisfying all assumptions with rho = 0; h(theta) = theta - mu_x and
// U(theta) = |theta - mu_x|^2 / 2. data_sd = 0 gives point-mass data, i.e. an
// exact-gradient quadratic model.
inline GradientModel gaussian_location_model(const Vec& mu_x, double data_sd = 1.0) {
    if (data_sd < 0) throw std::invalid_argument("gaussian_location_model: data_sd >= 0");
    GradientModel m;
    const int d = static_cast<int>(mu_x.size());
    m.dim = d;
    m.data_dim = d;
    Vec mu = mu_x;
    m.potential = [mu](const Vec& th) { return 0.5 * (th - mu).squaredNorm(); };
    m.full_gradient = [mu](const Vec& th) -> Vec { return th - mu; };
    m.stochastic_gradient = [](const Vec& th, const Vec& x) -> Vec { return th - x; };
    m.sample_data = [mu, d, data_sd](Rng& rng) -> Vec {
        Vec x(d);
        for (int i = 0; i < d; ++i) x(i) = mu(i) + data_sd * rng.normal();
        return x;
    };
    if (data_sd == 0.0)
        m.enumerate_data = [mu]() {
            return std::vector<std::pair<Vec, double>>{{mu, 1.0}};
        };
    m.L1 = 1.0;
    m.L2 = 1.0;
    m.rho = 0.0;
    // <theta - x, theta> >= |theta|^2/2 - |x|^2/2 (Young)
    m.a = 0.5;
    m.b = 0.5 * (static_cast<double>(d) * data_sd * data_sd + mu.squaredNorm()); // E|X|^2 / 2
    m.witness_a = 0.5;
    m.witness_b = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
    m.H0 = 0.0; // |H(0,0)| = 0
    m.h0 = mu.norm();
    m.u0 = 0.5 * mu.squaredNorm();
    return m;
}

// Deterministic two-mode Gaussian-mixture prior potential
//   f0(theta) = (|theta|^2 + |m|^2)/2 - log cosh(<m, theta>),
// gradient theta - m tanh(<m, theta>). Nonconvex for |m| >= 1; f0 >= 0 with
// f0(0) = |m|^2/2.
inline GradientModel mixture_prior_model(const Vec& mode) {
    GradientModel mdl;
    const int d = static_cast<int>(mode.size());
    mdl.dim = d;
    mdl.data_dim = 1;
    Vec m = mode;
    mdl.potential = [m](const Vec& th) {
        const double s = m.dot(th);
        // log cosh computed through |s| to avoid overflow for large s
        const double logcosh = std::abs(s) + std::log1p(std::exp(-2.0 * std::abs(s))) - std::log(2.0);
        return 0.5 * (th.squaredNorm() + m.squaredNorm()) - logcosh;
    };
    mdl.full_gradient = [m](const Vec& th) -> Vec { return th - m * std::tanh(m.dot(th)); };
    mdl.stochastic_gradient = [m](const Vec& th, const Vec&) -> Vec {
        return th - m * std::tanh(m.dot(th));
    };
    mdl.sample_data = [](Rng&) -> Vec { return Vec::Zero(1); };
    mdl.enumerate_data = []() {
        return std::vector<std::pair<Vec, double>>{{Vec::Zero(1), 1.0}};
    };
    const double m2 = m.squaredNorm();
    mdl.L1 = 1.0 + m2; // sup |Hessian f0| <= 1 + |m|^2
    mdl.L2 = 0.0;      // H does not depend on x
    mdl.rho = 0.0;
    // <grad f0, theta> = |theta|^2 - <m,theta> tanh<m,theta> >= |theta|^2 - |m||theta|
    mdl.a = 0.5;
    mdl.b = 0.5 * m2;
    mdl.witness_a = 0.5;
    mdl.witness_b = [m2](const Vec&) { return 0.5 * m2; };
    mdl.H0 = 0.0;
    mdl.h0 = 0.0;
    mdl.u0 = 0.5 * m2;
    return mdl;
}

// Bayesian logistic regression dataset: features z_i, binary labels y_i.
struct BLRDataset {
    Mat z;               // M x d
    std::vector<int> y;  // labels in {0,1}
    int minibatch = 1;   // K

    int size() const { return static_cast<int>(z.rows()); }
    int dim() const { return static_cast<int>(z.cols()); }
};

inline double sigmoid(double t) {
    return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

// Synthetic data: z_i ~ Normal(0, I_d), y_i ~ Bernoulli(sigmoid(z_i' theta_true)).
inline BLRDataset blr_synthetic_data(int M, int d, const Vec& theta_true,
                                     std::uint64_t seed, int minibatch = 1) {
    if (M < 1) throw std::invalid_argument("blr_synthetic_data: M must be >= 1");
    BLRDataset ds;
    ds.z.resize(M, d);
    ds.y.resize(M);
    ds.minibatch = minibatch;
    Rng rng(seed);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < d; ++j) ds.z(i, j) = rng.normal();
        const double p = sigmoid(ds.z.row(i).dot(theta_true));
        ds.y[i] = rng.uniform() < p ? 1 : 0;
    }
    return ds;
}

// CSV with header z_1..z_d,y.
inline BLRDataset blr_load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset: " + path);
    int d = -1;
    std::vector<double> zbuf;
    std::vector<int> ybuf;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw std::runtime_error("malformed dataset row: " + line);
        if (d < 0) d = static_cast<int>(row.size()) - 1;
        if (static_cast<int>(row.size()) != d + 1)
            throw std::runtime_error("inconsistent column count in: " + path);
        const double yv = row.back();
        if (yv != 0.0 && yv != 1.0) throw std::runtime_error("non-binary label in: " + path);
        ybuf.push_back(static_cast<int>(yv));
        row.pop_back();
        zbuf.insert(zbuf.end(), row.begin(), row.end());
    }
    const int M = static_cast<int>(ybuf.size());
    if (M == 0) throw std::runtime_error("dataset has no rows: " + path);
    BLRDataset ds;
    ds.z.resize(M, d);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < d; ++j) ds.z(i, j) = zbuf[static_cast<std::size_t>(i) * d + j];
    ds.y = std::move(ybuf);
    return ds;
}

inline void blr_save_csv(const BLRDataset& ds, const std::string& path) {
    std::ofstream out(path);
    for (int j = 0; j < ds.dim(); ++j) out << "z_" << (j + 1) << ",";
    out << "y\n";
    for (int i = 0; i < ds.size(); ++i) {
        for (int j = 0; j < ds.dim(); ++j) out << ds.z(i, j) << ",";
        out << ds.y[i] << "\n";
    }
}

// Posterior model for Bayesian logistic regression with the mixture prior.
// Minibatches of size K are drawn uniformly WITH replacement, so the data
// process is i.i.d. across steps. A data sample x encodes the K indices.
inline GradientModel blr_model(const BLRDataset& ds, const Vec& prior_mode) {
    if (ds.size() == 0) throw std::invalid_argument("blr_model: empty dataset");
    if (ds.minibatch < 1 || ds.minibatch > ds.size())
        throw std::invalid_argument("blr_model: need 1 <= K <= M");
    GradientModel mdl;
    const int d = ds.dim();
    const int M = ds.size();
    const int K = ds.minibatch;
    mdl.dim = d;
    mdl.data_dim = K;
    Mat z = ds.z;
    std::vector<int> y = ds.y;
    Vec m = prior_mode;

    auto prior_grad = [m](const Vec& th) -> Vec { return th - m * std::tanh(m.dot(th)); };
    auto prior_pot = [m](const Vec& th) {
        const double s = m.dot(th);
        const double logcosh = std::abs(s) + std::log1p(std::exp(-2.0 * std::abs(s))) - std::log(2.0);
        return 0.5 * (th.squaredNorm() + m.squaredNorm()) - logcosh;
    };

    mdl.potential = [z, y, prior_pot, M](const Vec& th) {
        double u = prior_pot(th);
        for (int i = 0; i < M; ++i) {
            const double t = z.row(i).dot(th);
            // log(1 + e^t) - y t, computed stably; nonnegative for y in {0,1}
            const double softplus = t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
            u += softplus - y[i] * t;
        }
        return u;
    };
    mdl.full_gradient = [z, y, prior_grad, M](const Vec& th) -> Vec {
        Vec g = prior_grad(th);
        for (int i = 0; i < M; ++i)
            g += (sigmoid(z.row(i).dot(th)) - y[i]) * z.row(i).transpose();
        return g;
    };
    mdl.stochastic_gradient = [z, y, prior_grad, M, K](const Vec& th, const Vec& x) -> Vec {
        Vec g = prior_grad(th);
        Vec lik = Vec::Zero(th.size());
        for (int k = 0; k < K; ++k) {
            const int i = static_cast<int>(x(k));
            lik += (sigmoid(z.row(i).dot(th)) - y[i]) * z.row(i).transpose();
        }
        g += (static_cast<double>(M) / K) * lik;
        return g;
    };
    if (K == M) {
        // Full-batch case: the minibatch is the whole dataset and H == h.
        mdl.sample_data = [M](Rng&) -> Vec {
            Vec x(M);
            for (int i = 0; i < M; ++i) x(i) = i;
            return x;
        };
        mdl.enumerate_data = [M]() {
            Vec x(M);
            for (int i = 0; i < M; ++i) x(i) = i;
            return std::vector<std::pair<Vec, double>>{{x, 1.0}};
        };
    } else {
        mdl.sample_data = [M, K](Rng& rng) -> Vec {
            Vec x(K);
            for (int k = 0; k < K; ++k) x(k) = static_cast<double>(rng.uniform_index(M));
            return x;
        };
        // Exhaustive law: all M^K with-replacement index tuples, uniform.
        mdl.enumerate_data = [M, K]() {
            std::vector<std::pair<Vec, double>> out;
            const double p = std::pow(static_cast<double>(M), -K);
            std::vector<int> idx(K, 0);
            while (true) {
                Vec x(K);
                for (int k = 0; k < K; ++k) x(k) = idx[k];
                out.emplace_back(x, p);
                int k = K - 1;
                while (k >= 0 && ++idx[k] == M) idx[k--] = 0;
                if (k < 0) break;
            }
            return out;
        };
    }

    double zmax2 = 0.0;
    for (int i = 0; i < M; ++i) zmax2 = std::max(zmax2, z.row(i).squaredNorm());
    const double m2 = m.squaredNorm();
    // Conservative declared constants: sigmoid slope <= 1/4, minibatch scale M/K.
    mdl.L1 = 1.0 + m2 + 0.25 * M * zmax2;
    // x is an index tuple with integer entries, so |x - x'| >= 1 whenever the
    // minibatches differ; 2 M max|z| then dominates any gradient change.
    mdl.L2 = 2.0 * M * std::sqrt(zmax2);
    mdl.rho = 0.0;
    // <H, theta> >= |theta|^2/2 - |m|^2/2 - M sqrt(zmax2) |theta|
    //            >= |theta|^2/4 - (|m|^2/2 + M^2 zmax2)
    mdl.a = 0.25;
    mdl.b = 0.5 * m2 + static_cast<double>(M) * M * zmax2;
    mdl.witness_a = mdl.a;
    const double bconst = mdl.b;
    mdl.witness_b = [bconst](const Vec&) { return bconst; };
    {
        Vec zero = Vec::Zero(d);
        Vec x0 = Vec::Zero(K);
        mdl.H0 = mdl.stochastic_gradient(zero, x0).norm();
        mdl.h0 = mdl.full_gradient(zero).norm();
        mdl.u0 = mdl.potential(zero);
    }
    return mdl;
}

} // namespace kg
