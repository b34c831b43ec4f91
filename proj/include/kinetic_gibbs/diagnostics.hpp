#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinetic_gibbs/chain.hpp"

namespace kg {

// V(theta, v) = beta U + (beta/4) g^2 (|theta + v/g|^2 + |v/g|^2 - lam |theta|^2).
// Controls the chain's second moments; lam <= 1/4 keeps it a norm-like quantity.
inline double lyapunov_value(const Vec& theta, const Vec& v, double beta, double gamma,
                             double lambda, double U_of_theta) {
    if (lambda <= 0 || lambda > 0.25)
        throw std::invalid_argument("lyapunov_value: lambda must be in (0, 1/4]");
    const double q = (theta + v / gamma).squaredNorm() + v.squaredNorm() / (gamma * gamma) -
                     lambda * theta.squaredNorm();
    return beta * U_of_theta + 0.25 * beta * gamma * gamma * q;
}

// Same quadratic form from the scalar summaries |theta|^2, |v|^2, <theta,v>.
inline double lyapunov_from_scalars(double th2, double v2, double thv, double u, double beta,
                                    double gamma, double lambda) {
    const double q = th2 + 2.0 * thv / gamma + 2.0 * v2 / (gamma * gamma) - lambda * th2;
    return beta * u + 0.25 * beta * gamma * gamma * q;
}

struct MomentSeries {
    std::vector<std::size_t> iters;
    std::vector<double> m2, m2_se;   // M2(k) = mean V / beta
    std::vector<double> th2, th2_se; // mean |theta|^2
    std::vector<double> v2, v2_se;   // mean |v|^2
    std::vector<double> vsq, vsq_se; // mean V^2 (empty when the model lacks U)
    std::size_t n_chains = 0;

    bool has_vsq() const { return !vsq.empty(); }
    std::size_t size() const { return iters.size(); }
};

namespace detail {

struct MeanSe {
    double mean = 0, se = 0;
};

inline MeanSe mean_se(const std::vector<double>& vals) {
    MeanSe r;
    const std::size_t n = vals.size();
    for (double v : vals) r.mean += v;
    r.mean /= static_cast<double>(n);
    if (n > 1) {
        double ss = 0;
        for (double v : vals) ss += (v - r.mean) * (v - r.mean);
        r.se = std::sqrt(ss / (static_cast<double>(n) * (n - 1.0)));
    }
    return r;
}

} // namespace detail

// Cross-chain means and standard errors of |theta|^2, |v|^2, V/beta and V^2
// at every recorded iteration. V^2 is tracked only when U values are present.
inline MomentSeries track_moments(const EnsembleResult& ens, double beta, double gamma,
                                  double lambda) {
    if (ens.n_chains == 0) throw std::invalid_argument("track_moments: empty ensemble");
    if (!ens.has_potential())
        throw std::invalid_argument("track_moments: ensemble lacks potential values");
    MomentSeries s;
    s.iters = ens.iters;
    s.n_chains = ens.n_chains;
    const std::size_t R = ens.n_records(), C = ens.n_chains;
    std::vector<double> lv(C), lv2(C), th(C), vv(C);
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t c = 0; c < C; ++c) {
            const double V = lyapunov_from_scalars(ens.at(ens.theta2, r, c), ens.at(ens.v2, r, c),
                                                   ens.at(ens.theta_v, r, c), ens.at(ens.u, r, c),
                                                   beta, gamma, lambda);
            lv[c] = V / beta;
            lv2[c] = V * V;
            th[c] = ens.at(ens.theta2, r, c);
            vv[c] = ens.at(ens.v2, r, c);
        }
        const auto a = detail::mean_se(lv);
        const auto b = detail::mean_se(lv2);
        const auto t = detail::mean_se(th);
        const auto v = detail::mean_se(vv);
        s.m2.push_back(a.mean);
        s.m2_se.push_back(a.se);
        s.vsq.push_back(b.mean);
        s.vsq_se.push_back(b.se);
        s.th2.push_back(t.mean);
        s.th2_se.push_back(t.se);
        s.v2.push_back(v.mean);
        s.v2_se.push_back(v.se);
    }
    return s;
}

struct DriftReport {
    std::vector<double> residual;    // r(k) = M2(k+1) - (1 - g lam eta/2) M2(k) - 2 K3 eta
    std::vector<double> residual_se; // conservatively propagated
    std::size_t violations = 0;      // r(k) > z * se(k)
    std::size_t budget = 0;          // binomial false-positive allowance at z
    double z = 4.0;
    bool pass = false;
};

// Statistical test of the one-step drift inequality. Each residual should be
// <= 0 in expectation; a point violates when its estimate exceeds z standard
// errors. The pass budget covers the multiple-testing false-positive rate.
inline DriftReport check_drift(const MomentSeries& series, double gamma, double lambda,
                               double eta, double K3, double z = 4.0) {
    if (series.size() < 2) throw std::invalid_argument("check_drift: series too short");
    if (series.n_chains < 30)
        throw std::invalid_argument("check_drift: need >= 30 chains for CLT validity");
    DriftReport rep;
    rep.z = z;
    const double contraction = 1.0 - 0.5 * gamma * lambda * eta;
    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        // recorded iterations must be consecutive for the one-step inequality
        const std::size_t gap = series.iters[k + 1] - series.iters[k];
        if (gap != 1)
            throw std::invalid_argument("check_drift: series must record every iteration");
        const double r = series.m2[k + 1] - contraction * series.m2[k] - 2.0 * K3 * eta;
        const double se = std::sqrt(series.m2_se[k + 1] * series.m2_se[k + 1] +
                                    contraction * contraction * series.m2_se[k] * series.m2_se[k]);
        rep.residual.push_back(r);
        rep.residual_se.push_back(se);
        if (r > z * se) ++rep.violations;
    }
    // one-sided tail of Normal(0,1) beyond z
    const double p = 0.5 * std::erfc(z / std::sqrt(2.0));
    const double n = static_cast<double>(rep.residual.size());
    rep.budget = static_cast<std::size_t>(std::ceil(n * p + 4.0 * std::sqrt(n * p) + 1e-9));
    rep.pass = rep.violations <= rep.budget;
    return rep;
}

struct BoundCheck {
    std::string name;
    double bound = 0;
    double worst_z = 0; // max over k of (estimate - bound)/se
    bool pass = false;
    bool skipped = false;
};

struct MomentBoundReport {
    std::vector<BoundCheck> checks;
    bool pass = false;
    std::string warning;
};

// Verifies the uniform-in-k moment bounds against the series: E|theta_k|^2
// <= C_theta, E|v_k|^2 <= C_v, E V_k / beta <= C_zeta-scale bound via M2, and
// E V_k^2 <= E V_0^2 + 2D/(g lam). Pass per bound iff the worst standardized
// exceedance stays below z.
inline MomentBoundReport check_moment_bounds(const MomentSeries& series, double C_theta,
                                             double C_v, double C_zeta, double Vsq_bound,
                                             double z = 4.0) {
    if (series.size() == 0) throw std::invalid_argument("check_moment_bounds: empty series");
    MomentBoundReport rep;
    auto run = [&](const std::string& name, const std::vector<double>& est,
                   const std::vector<double>& se, double bound) {
        BoundCheck c;
        c.name = name;
        c.bound = bound;
        c.worst_z = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < est.size(); ++k) {
            const double s = se[k] > 0 ? se[k] : 1e-300;
            c.worst_z = std::max(c.worst_z, (est[k] - bound) / s);
        }
        c.pass = c.worst_z <= z;
        rep.checks.push_back(c);
    };
    run("C_theta", series.th2, series.th2_se, C_theta);
    run("C_v", series.v2, series.v2_se, C_v);
    run("C_zeta", series.th2, series.th2_se, C_zeta); // zeta dominates theta's bound
    if (series.has_vsq()) {
        run("Vsq", series.vsq, series.vsq_se, Vsq_bound);
    } else {
        BoundCheck c;
        c.name = "Vsq";
        c.bound = Vsq_bound;
        c.skipped = true;
        c.pass = true;
        rep.checks.push_back(c);
        rep.warning = "model lacks closed-form U; V^2 bound skipped";
    }
    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

// MomentSeries CSV: k, m2, m2_se, th2, th2_se, v2, v2_se, vsq, vsq_se.
inline void save_moment_series_csv(const MomentSeries& s, const std::string& path) {
    std::ofstream out(path);
    out.precision(17);
    out << "k,m2,m2_se,th2,th2_se,v2,v2_se,vsq,vsq_se\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << s.iters[i] << "," << s.m2[i] << "," << s.m2_se[i] << "," << s.th2[i] << ","
            << s.th2_se[i] << "," << s.v2[i] << "," << s.v2_se[i] << ",";
        if (s.has_vsq())
            out << s.vsq[i] << "," << s.vsq_se[i];
        else
            out << "nan,nan";
        out << "\n";
    }
}

} // namespace kg
