#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kinetic_gibbs/models.hpp"
#include "kinetic_gibbs/rng.hpp"
#include "kinetic_gibbs/wasserstein.hpp"

namespace kg {

// Position and momentum of one chain.
struct ChainState {
    Vec theta;
    Vec v;

    int dim() const { return static_cast<int>(theta.size()); }
    bool finite() const { return theta.allFinite() && v.allFinite(); }
};

struct SamplerConfig {
    double eta = 0.01;   // step size
    double gamma = 2.0;  // friction
    double beta = 1.0;   // inverse temperature
    std::size_t steps = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t chain_id = 0;
    std::size_t burn_in = 0;
    std::size_t thin = 1;
    bool noise_enabled = true;

    void validate() const {
        if (eta <= 0) throw std::invalid_argument("eta must be > 0");
        if (gamma <= 0) throw std::invalid_argument("gamma must be > 0");
        if (beta <= 0) throw std::invalid_argument("beta must be > 0");
        if (thin < 1) throw std::invalid_argument("thin must be >= 1");
        if (burn_in > steps) throw std::invalid_argument("burn_in must be <= steps");
    }
};

// |theta| or |v| beyond this, or any non-finite entry, counts as divergence.
inline constexpr double kDivergenceRadius = 1e12;

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t iteration, std::uint64_t chain_id)
        : std::runtime_error("chain " + std::to_string(chain_id) +
                             " diverged at iteration " + std::to_string(iteration)),
          iteration(iteration), chain_id(chain_id) {}
    std::size_t iteration;
    std::uint64_t chain_id;
};

// One SGHMC update with the gradient sample and noise already drawn:
//   v' = v - eta (gamma v + H(theta, X)) + sqrt(2 gamma eta / beta) xi
//   theta' = theta + eta v
// Simultaneous semantics: theta' uses the OLD v, v' the OLD theta's gradient.
inline ChainState sghmc_step(const ChainState& state, const Vec& grad_sample,
                             const Vec& noise, const SamplerConfig& cfg) {
    const double noise_scale = std::sqrt(2.0 * cfg.gamma * cfg.eta / cfg.beta);
    ChainState next;
    next.v = state.v - cfg.eta * (cfg.gamma * state.v + grad_sample) + noise_scale * noise;
    next.theta = state.theta + cfg.eta * state.v;
    return next;
}

namespace detail {

inline bool state_ok(const ChainState& s) {
    return s.finite() && s.theta.norm() <= kDivergenceRadius && s.v.norm() <= kDivergenceRadius;
}

} // namespace detail

struct ChainResult {
    std::vector<ChainState> trajectory; // every thin-th post-burn-in state
    ChainState final_state;
    double mean_theta2 = 0.0; // running E|theta|^2 over recorded states
    double mean_v2 = 0.0;
};

// Iterates sghmc_step, drawing one fresh data sample per step.
inline ChainResult run_chain(const GradientModel& model, const SamplerConfig& cfg,
                             const ChainState& initial) {
    cfg.validate();
    if (model.dim != initial.dim())
        throw std::invalid_argument("model/initial dimension mismatch");
    Rng rng(cfg.master_seed, cfg.chain_id);
    const int d = model.dim;

    ChainResult res;
    ChainState s = initial;
    if (!detail::state_ok(s)) throw DivergenceError(0, cfg.chain_id);

    auto record = [&](const ChainState& st) {
        res.trajectory.push_back(st);
        res.mean_theta2 += st.theta.squaredNorm();
        res.mean_v2 += st.v.squaredNorm();
    };
    if (cfg.burn_in == 0) record(s);

    Vec noise = Vec::Zero(d);
    for (std::size_t n = 0; n < cfg.steps; ++n) {
        const Vec x = model.sample_data(rng);
        const Vec grad = model.stochastic_gradient(s.theta, x);
        if (cfg.noise_enabled)
            for (int i = 0; i < d; ++i) noise(i) = rng.normal();
        s = sghmc_step(s, grad, noise, cfg);
        if (!detail::state_ok(s)) throw DivergenceError(n + 1, cfg.chain_id);
        const std::size_t k = n + 1;
        if (k >= cfg.burn_in && (k - cfg.burn_in) % cfg.thin == 0) record(s);
    }
    if (!res.trajectory.empty()) {
        res.mean_theta2 /= static_cast<double>(res.trajectory.size());
        res.mean_v2 /= static_cast<double>(res.trajectory.size());
    }
    res.final_state = s;
    return res;
}

// How the ensemble draws chain starting points.
struct InitialDist {
    enum class Kind { point, gaussian } kind = Kind::point;
    Vec theta0;         // point mass location / Gaussian mean
    Vec v0;
    double sd_theta = 0.0; // isotropic std devs for the Gaussian case
    double sd_v = 0.0;

    ChainState draw(Rng& rng) const {
        ChainState s{theta0, v0};
        if (kind == Kind::gaussian) {
            for (int i = 0; i < s.theta.size(); ++i) s.theta(i) += sd_theta * rng.normal();
            for (int i = 0; i < s.v.size(); ++i) s.v(i) += sd_v * rng.normal();
        }
        return s;
    }
};

// Cross-chain scalar records at each recorded iteration, flattened as
// [record * n_chains + chain]. U entries are present only when the model
// exposes a potential.
struct EnsembleResult {
    std::size_t n_chains = 0;
    int dim = 0;
    std::vector<std::size_t> iters;
    std::vector<double> theta2;   // |theta_k|^2 per chain
    std::vector<double> v2;       // |v_k|^2 per chain
    std::vector<double> theta_v;  // <theta_k, v_k> per chain
    std::vector<double> u;        // U(theta_k) per chain, may be empty
    EmpiricalCloud terminal;      // n_chains x 2d, columns (theta..., v...)

    bool has_potential() const { return !u.empty(); }
    std::size_t n_records() const { return iters.size(); }
    double at(const std::vector<double>& field, std::size_t rec, std::size_t chain) const {
        return field[rec * n_chains + chain];
    }
};

class EnsembleDivergenceError : public std::runtime_error {
public:
    EnsembleDivergenceError(std::vector<std::uint64_t> failed, EnsembleResult partial)
        : std::runtime_error("ensemble divergence in " + std::to_string(failed.size()) +
                             " chain(s), first id " + std::to_string(failed.front())),
          failed_chains(std::move(failed)), partial_result(std::move(partial)) {}
    std::vector<std::uint64_t> failed_chains;
    EnsembleResult partial_result; // records from surviving chains only
};

inline unsigned ensemble_thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("KINETIC_GIBBS_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

// Runs n_chains independent chains; chain k uses the noise stream derived
// from (master_seed, base chain_id + k). Results are merged in chain order,
// so the output is deterministic regardless of the thread count.
inline EnsembleResult run_ensemble(const GradientModel& model, const SamplerConfig& cfg,
                                   std::size_t n_chains, const InitialDist& init) {
    cfg.validate();
    if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
    const int d = model.dim;
    const bool track_u = model.has_potential();

    // Recorded iterations are fixed by (steps, burn_in, thin).
    std::vector<std::size_t> iters;
    if (cfg.burn_in == 0) iters.push_back(0);
    for (std::size_t k = 1; k <= cfg.steps; ++k)
        if (k >= cfg.burn_in && (k - cfg.burn_in) % cfg.thin == 0) iters.push_back(k);
    const std::size_t R = iters.size();

    struct PerChain {
        std::vector<double> theta2, v2, theta_v, u;
        ChainState final_state;
        bool diverged = false;
        std::size_t div_iter = 0;
    };
    std::vector<PerChain> per(n_chains);

    auto run_one = [&](std::size_t k) {
        PerChain& pc = per[k];
        pc.theta2.reserve(R);
        Rng rng(cfg.master_seed, cfg.chain_id + k);
        ChainState s = init.draw(rng);
        auto record = [&](const ChainState& st) {
            pc.theta2.push_back(st.theta.squaredNorm());
            pc.v2.push_back(st.v.squaredNorm());
            pc.theta_v.push_back(st.theta.dot(st.v));
            if (track_u) pc.u.push_back(model.potential(st.theta));
        };
        if (!detail::state_ok(s)) {
            pc.diverged = true;
            return;
        }
        if (cfg.burn_in == 0) record(s);
        Vec noise = Vec::Zero(d);
        for (std::size_t n = 0; n < cfg.steps; ++n) {
            const Vec x = model.sample_data(rng);
            const Vec grad = model.stochastic_gradient(s.theta, x);
            if (cfg.noise_enabled)
                for (int i = 0; i < d; ++i) noise(i) = rng.normal();
            s = sghmc_step(s, grad, noise, cfg);
            if (!detail::state_ok(s)) {
                pc.diverged = true;
                pc.div_iter = n + 1;
                return;
            }
            const std::size_t kk = n + 1;
            if (kk >= cfg.burn_in && (kk - cfg.burn_in) % cfg.thin == 0) record(s);
        }
        pc.final_state = s;
    };

    const unsigned n_threads = std::min<std::size_t>(ensemble_thread_count(), n_chains);
    if (n_threads <= 1) {
        for (std::size_t k = 0; k < n_chains; ++k) run_one(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n_chains; k = next++) run_one(k);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<std::uint64_t> failed;
    std::vector<std::size_t> alive;
    for (std::size_t k = 0; k < n_chains; ++k)
        (per[k].diverged ? static_cast<void>(failed.push_back(cfg.chain_id + k))
                         : static_cast<void>(alive.push_back(k)));

    EnsembleResult res;
    res.n_chains = alive.size();
    res.dim = d;
    res.iters = iters;
    res.theta2.resize(R * alive.size());
    res.v2.resize(R * alive.size());
    res.theta_v.resize(R * alive.size());
    if (track_u) res.u.resize(R * alive.size());
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t j = 0; j < alive.size(); ++j) {
            const PerChain& pc = per[alive[j]];
            res.theta2[r * alive.size() + j] = pc.theta2[r];
            res.v2[r * alive.size() + j] = pc.v2[r];
            res.theta_v[r * alive.size() + j] = pc.theta_v[r];
            if (track_u) res.u[r * alive.size() + j] = pc.u[r];
        }
    res.terminal.points.resize(static_cast<int>(alive.size()), 2 * d);
    for (std::size_t j = 0; j < alive.size(); ++j) {
        res.terminal.points.row(static_cast<int>(j)).head(d) = per[alive[j]].final_state.theta;
        res.terminal.points.row(static_cast<int>(j)).tail(d) = per[alive[j]].final_state.v;
    }
    if (!failed.empty()) throw EnsembleDivergenceError(std::move(failed), std::move(res));
    return res;
}

} // namespace kg
