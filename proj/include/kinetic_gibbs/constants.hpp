#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kg {

// Full symbol table feeding the explicit constant formulas. All fields are
// plain numbers; consistency between them (e.g. C_rho actually being the
// moment of the data law) is the caller's duty.
struct ProblemParams {
    double L1 = 1, L2 = 1;   // local Lipschitz constants
    double rho = 0;          // growth exponent >= 0
    double C_rho = 1;        // E[(1+|X0|)^{4(rho+1)}]
    double H0 = 1;           // |H(0,0)|
    double h0 = 1;           // |h(0)|
    double u0 = 0;           // U(0) >= 0
    double L1_bar = 1;       // L1 E[(1+|X0|)^rho]
    double a = 1, b = 1;     // dissipativity constants
    double gamma = 2;        // friction
    double beta = 1;         // inverse temperature
    double d = 1;            // dimension
    double sigma_Z = 1;      // E[(1+|X0|+|E X0|)^{2 rho} |X0 - E X0|^2]
    double m0 = 0;           // initial Lyapunov moment, normalized: E V(theta0,v0) = m0 * beta
    double alpha = 1;        // free coupling parameter > 0

    // Optional inputs; NaN marks "not supplied".
    double W_rho0 = std::numeric_limits<double>::quiet_NaN(); // W_rho(mu0, pi_beta)
    double C2_star = std::numeric_limits<double>::quiet_NaN(); // external, no closed form
    double c_LS = std::numeric_limits<double>::quiet_NaN();   // log-Sobolev constant
    double L1_prime = std::numeric_limits<double>::quiet_NaN();
    double B1 = std::numeric_limits<double>::quiet_NaN();
    double M = std::numeric_limits<double>::quiet_NaN(); // dataset size

    void validate() const {
        if (L1 <= 0 || C_rho < 1 || L1_bar <= 0 || a <= 0 || b <= 0 || gamma <= 0 ||
            beta <= 0 || d < 1 || rho < 0 || u0 < 0 || alpha <= 0 || L2 < 0 ||
            sigma_Z < 0 || m0 < 0)
            throw std::invalid_argument("ProblemParams: invalid field");
    }
    double initial_lyapunov() const { return m0 * beta; } // E V(theta0, v0)
};

struct ReportEntry {
    std::string name;
    double value = 0;
    double log10_value = 0; // finite even when value overflows
    std::string formula_ref;
    bool flagged = false; // overflow or suspected-typo note in formula_ref
};

struct ConstantsReport {
    std::vector<ReportEntry> entries;

    void add(const std::string& name, double value, const std::string& formula,
             bool flagged = false, double log10_override = std::numeric_limits<double>::quiet_NaN()) {
        ReportEntry e;
        e.name = name;
        e.value = value;
        e.log10_value = std::isnan(log10_override)
                            ? (value > 0 ? std::log10(value)
                                         : -std::numeric_limits<double>::infinity())
                            : log10_override;
        e.formula_ref = formula;
        e.flagged = flagged || std::isinf(value);
        entries.push_back(e);
    }
    const ReportEntry& get(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return e;
        throw std::out_of_range("no report entry named " + name);
    }
    double value(const std::string& name) const { return get(name).value; }
    bool has(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return true;
        return false;
    }
};

struct LambdaAc {
    double lambda = 0;
    double A_c = 0;
};

// lambda = min{1/4, a / (L1_bar + 2 L1_bar b + gamma^2/2)},
// A_c = (beta/2)(b + 2 lambda u0 + 2 lambda L1_bar b).
inline LambdaAc lambda_ac(const ProblemParams& p) {
    p.validate();
    LambdaAc out;
    out.lambda = std::min(0.25, p.a / (p.L1_bar + 2.0 * p.L1_bar * p.b + 0.5 * p.gamma * p.gamma));
    out.A_c = 0.5 * p.beta * (p.b + 2.0 * out.lambda * p.u0 + 2.0 * out.lambda * p.L1_bar * p.b);
    return out;
}

struct KConstants {
    double L1_tilde = 0, C1_tilde = 0, K1 = 0, K2 = 0, K3 = 0;
};

inline KConstants k_constants(const ProblemParams& p, double lambda, double A_c) {
    if (lambda >= 0.5) throw std::invalid_argument("k_constants: lambda must be < 1/2");
    KConstants k;
    const double g = p.gamma;
    k.L1_tilde = 2.0 * p.L1 * p.L1 * p.C_rho;
    k.C1_tilde = 4.0 * p.L2 * p.L2 * p.C_rho + 4.0 * p.H0 * p.H0;
    const double one8 = 0.125 * (1.0 - 2.0 * lambda);
    const double one16 = 0.0625 * (1.0 - 2.0 * lambda) * g * g;
    k.K1 = std::max(
        (0.5 * p.L1 * p.C_rho + 0.25 * g * g - 0.25 * g * g * lambda + 0.25 * g) / one8,
        (0.5 * k.L1_tilde + 0.5 * g * p.L1 * p.C_rho * p.C_rho) / one16);
    k.K2 = 0.5 * (k.C1_tilde + g * p.h0 * p.h0);
    k.K3 = (A_c + p.d) * g / p.beta;
    return k;
}

struct KbarD {
    double K1_tilde = 0;
    double c_tilde[12] = {0};  // index 1..11
    double c_hat[6] = {0};     // index 1..5
    double K2_tilde = 0, K_bar = 0, D = 0;
};

inline KbarD kbar_and_d(const ProblemParams& p, double lambda, double A_c) {
    if (lambda >= 0.5) throw std::invalid_argument("kbar_and_d: lambda must be < 1/2");
    KbarD r;
    const double g = p.gamma, L1 = p.L1, L2 = p.L2, Cr = p.C_rho, H0 = p.H0, h0 = p.h0,
                 d = p.d, beta = p.beta;
    const double one8 = 0.125 * (1.0 - 2.0 * lambda);
    const double one16 = 0.0625 * (1.0 - 2.0 * lambda) * g * g;
    r.K1_tilde =
        std::max((0.5 * L1 * Cr + 0.25 * g * g - 0.25 * g * g * lambda) / one8,
                 L1 * L1 * Cr / one16);
    r.c_tilde[1] = g * A_c + g * d;
    r.c_hat[1] = 2.0 * L2 * Cr + 2.0 * H0 * H0; // as printed: L2 unsquared
    r.c_tilde[2] = 6.0 * g * g * A_c * A_c;
    r.c_tilde[3] = 9.0 * g * g / 8.0 +
                   18.0 * (g + 2.0) * (g + 2.0) *
                       (std::pow(L1, 4) * std::pow(Cr, 4) + std::pow(L1, 4) * Cr);
    r.c_hat[3] = 18.0 * std::pow(L1, 4) * Cr;
    r.c_tilde[4] = 6.0 * std::pow(1.0 + lambda * g - g, 2) / 4.0;
    r.c_hat[4] = 6.0 * std::pow(0.5 * L1 * Cr + 0.25 * g + 0.5, 2);
    r.c_tilde[5] = (g + 2.0) * (g + 2.0) *
                   (30.0 * std::pow(h0, 4) + 120.0 * std::pow(L2, 4) +
                    120.0 * std::pow(H0, 4) + 30.0 * std::pow(L2, 4) * Cr +
                    30.0 * std::pow(H0, 4));
    r.c_hat[5] = 48.0 * (std::pow(L2, 4) + std::pow(H0, 4)); // L2 substituted for undefined L4
    r.c_tilde[6] = g * g * d * (d + 2.0);
    r.c_tilde[7] = std::max(10.0 * g * d / (0.125 * (1.0 - 2.0 * lambda)),
                            2.0 * g * d * (6.0 * L1 * L1 * Cr + 3.0 * g * g + 9.0 * L1 * L1 * Cr) /
                                one16);
    r.c_tilde[8] = 30.0 * g * d * L2 * L2 * Cr + 30.0 * g * d * H0 * H0;
    const double q128 = (1.0 / 128.0) * std::pow(1.0 - 2.0 * lambda, 2) * std::pow(g, 4);
    const double q32 = (1.0 / 32.0) * std::pow(1.0 - 2.0 * lambda, 2);
    r.c_tilde[9] = std::max((r.c_tilde[3] + r.c_hat[3]) / q128, (r.c_hat[4] + r.c_tilde[4]) / q32);
    r.c_tilde[10] = 2.0 * r.c_tilde[1] + r.c_tilde[7];
    r.c_tilde[11] = p.initial_lyapunov() + 4.0 * (A_c + d) / (g * lambda);
    r.K2_tilde = r.K1_tilde + r.c_tilde[9];
    r.K_bar = 2.0 * r.K2_tilde;
    r.D = r.c_tilde[10] * r.c_tilde[11] + 2.0 * r.c_hat[1] * beta + r.c_tilde[2] +
          (r.c_hat[5] + r.c_tilde[5]) * beta * beta + r.c_tilde[6] + r.c_tilde[8] * beta;
    return r;
}

// eta_max = min{1, 2/(gamma lambda), gamma lambda/(2 K1), K3/K2, gamma lambda/(2 K_bar)}.
inline double eta_max(const ProblemParams& p) {
    const auto la = lambda_ac(p);
    const auto k = k_constants(p, la.lambda, la.A_c);
    const auto kb = kbar_and_d(p, la.lambda, la.A_c);
    const double gl = p.gamma * la.lambda;
    return std::min({1.0, 2.0 / gl, gl / (2.0 * k.K1), k.K3 / k.K2, gl / (2.0 * kb.K_bar)});
}

struct MomentBounds {
    double C_theta_c = 0, C_v_c = 0; // continuous-time
    double C_theta = 0, C_v = 0;     // discrete-time, uniform in k
    double C_zeta = 0;               // auxiliary process
};

inline MomentBounds moment_bounds(const ProblemParams& p, double lambda, double A_c) {
    if (lambda >= 0.5) throw std::invalid_argument("moment_bounds: lambda must be < 1/2");
    MomentBounds mb;
    const double v0 = p.initial_lyapunov();
    const double den_theta = 0.125 * (1.0 - 2.0 * lambda) * p.beta * p.gamma * p.gamma;
    const double den_v = 0.25 * (1.0 - 2.0 * lambda) * p.beta;
    mb.C_theta_c = (v0 + (p.d + A_c) / lambda) / den_theta;
    mb.C_v_c = (v0 + (p.d + A_c) / lambda) / den_v;
    mb.C_theta = (v0 + 4.0 * (A_c + p.d) / lambda) / den_theta;
    mb.C_v = (v0 + 4.0 * (A_c + p.d) / lambda) / den_v;
    mb.C_zeta = (v0 + 8.0 * (p.d + A_c) / lambda) / den_theta;
    return mb;
}

struct SigmaConstants {
    double sigma_H = 0;
    double sigma_V = 0; // eta-dependent
};

inline SigmaConstants sigma_constants(const ProblemParams& p, double C_zeta, double C_theta,
                                      double C_v, double eta) {
    if (eta <= 0) throw std::invalid_argument("sigma_constants: eta must be > 0");
    SigmaConstants s;
    s.sigma_H = 8.0 * p.L2 * p.L2 * p.sigma_Z * (1.0 + C_zeta);
    const double L1_tilde = 2.0 * p.L1 * p.L1 * p.C_rho;
    const double C1_tilde = 4.0 * p.L2 * p.L2 * p.C_rho + 4.0 * p.H0 * p.H0;
    s.sigma_V = 4.0 * eta * p.gamma * p.gamma * C_v + 4.0 * eta * (L1_tilde * C_theta + C1_tilde) +
                4.0 * p.gamma * p.d / p.beta;
    return s;
}

struct EberleConstants {
    double Lambda = 0, R1 = 0;
    double c_dot = 0, C_dot = 0;          // may be 0 / inf when overflowed
    double log_c_dot = 0, log_C_dot = 0;  // natural logs, always finite
};

// Contraction constants of the underdamped semigroup; computed in log space
// because Lambda grows linearly in d and C_dot like e^Lambda.
inline EberleConstants eberle_constants(const ProblemParams& p, double lambda, double A_c) {
    if (p.alpha <= 0) throw std::invalid_argument("eberle_constants: alpha must be > 0");
    if (lambda >= 0.5) throw std::invalid_argument("eberle_constants: lambda must be < 1/2");
    EberleConstants e;
    const double al = p.alpha, g = p.gamma;
    const double poly = 1.0 + 2.0 * al + 2.0 * al * al;
    e.Lambda = 2.4 * poly * (p.d + A_c) * p.L1_bar /
               (p.beta * g * g * lambda * (1.0 - 2.0 * lambda));
    e.R1 = std::sqrt(8.0 * e.Lambda / p.L1_bar);

    const double base = std::log(p.L1_bar) - std::log(p.beta) - 2.0 * std::log(g);
    const double l1 = std::log(lambda) + base;
    const double l2 = 0.5 * std::log(e.Lambda) - e.Lambda + base;
    const double l3 = 0.5 * std::log(e.Lambda) - e.Lambda;
    e.log_c_dot = std::log(g / 384.0) + std::min({l1, l2, l3});
    e.c_dot = std::exp(e.log_c_dot);

    const double log_arg = std::log(4.0 * poly * (p.d + A_c)) - std::log(g) - e.log_c_dot -
                           std::log(std::min(1.0, e.R1)) - std::log(p.beta);
    e.log_C_dot = std::log(2.0) + 2.0 + e.Lambda + 2.0 * std::log(1.0 + g) -
                  2.0 * std::log(std::min(1.0, al)) + std::max(0.0, log_arg);
    e.C_dot = std::exp(e.log_C_dot);
    return e;
}

struct Theorem1Constants {
    double c1 = 0;
    double C1_1_star = 0, C1_2_star = 0, C1_star = 0;
    double C3_star = std::numeric_limits<double>::quiet_NaN(); // needs W_rho0
    double C4_star = 0;
    double log_C3_star = std::numeric_limits<double>::quiet_NaN();
};

inline Theorem1Constants theorem1_constants(const ProblemParams& p, double eta) {
    if (eta <= 0 || eta > 1)
        throw std::invalid_argument("theorem1_constants: eta must be in (0, 1]");
    const auto la = lambda_ac(p);
    const auto mb = moment_bounds(p, la.lambda, la.A_c);
    const auto sg = sigma_constants(p, mb.C_zeta, mb.C_theta, mb.C_v, eta);
    const auto eb = eberle_constants(p, la.lambda, la.A_c);
    Theorem1Constants t;
    const double g2 = p.gamma * p.gamma;
    t.c1 = std::exp(4.0 * g2);
    // log-space: c1 alone overflows for gamma >~ 6.6
    const double log_c11 = 0.5 * (4.0 * p.L1 * p.L1 * p.C_rho + std::log(4.0) + 4.0 * g2 +
                                  std::log(sg.sigma_V + sg.sigma_H + eta * sg.sigma_H));
    t.C1_1_star = std::exp(log_c11);
    t.C1_2_star = std::exp(0.5 * (2.0 * g2 + std::log(sg.sigma_H * (1.0 + eta))));
    t.C1_star = t.C1_1_star + t.C1_2_star;
    t.C4_star = 0.5 * eb.c_dot;
    if (!std::isnan(p.W_rho0)) {
        if (p.W_rho0 == 0.0) {
            t.C3_star = 0.0;
            t.log_C3_star = -std::numeric_limits<double>::infinity();
        } else {
            t.log_C3_star = 0.5 * (eb.log_C_dot + std::log(p.W_rho0));
            t.C3_star = std::exp(t.log_C3_star);
        }
    }
    return t;
}

// (d / 2 beta) log(e L1_bar / a (b beta / d + 1)): excess of E U under the
// Gibbs measure over the global minimum.
inline double gibbs_gap(const ProblemParams& p) {
    p.validate();
    return 0.5 * p.d / p.beta *
           std::log(std::exp(1.0) * p.L1_bar / p.a * (p.b * p.beta / p.d + 1.0));
}

struct OptimizationBound {
    double multiplier = 0; // C_m L1_bar + h0
    double addend_sqrt_eta = 0;
    double addend_quarter_eta = std::numeric_limits<double>::quiet_NaN(); // needs C2_star
    double addend_exp = std::numeric_limits<double>::quiet_NaN();         // needs W_rho0
    double addend_gibbs = 0;
    double total = 0; // sum of available addends
};

inline OptimizationBound optimization_bound(const ProblemParams& p, double eta, double n) {
    const auto la = lambda_ac(p);
    const auto mb = moment_bounds(p, la.lambda, la.A_c);
    const auto t1 = theorem1_constants(p, eta);
    OptimizationBound ob;
    const double C_m = std::max(mb.C_theta_c, mb.C_theta);
    ob.multiplier = C_m * p.L1_bar + p.h0;
    ob.addend_sqrt_eta = t1.C1_star * ob.multiplier * std::sqrt(eta);
    ob.addend_gibbs = gibbs_gap(p);
    ob.total = ob.addend_sqrt_eta + ob.addend_gibbs;
    if (!std::isnan(p.C2_star)) {
        ob.addend_quarter_eta = p.C2_star * ob.multiplier * std::pow(eta, 0.25);
        ob.total += ob.addend_quarter_eta;
    }
    if (!std::isnan(t1.C3_star)) {
        ob.addend_exp = t1.C3_star * ob.multiplier * std::exp(-t1.C4_star * eta * n);
        ob.total += ob.addend_exp;
    }
    return ob;
}

struct GeneralizationBound {
    double B1 = 0; // decaying sampling part
    double B2 = 0; // dataset-size part
    double B3 = 0; // Gibbs gap
    double total = 0;
};

inline GeneralizationBound generalization_bound(const ProblemParams& p, double eta, double n) {
    if (std::isnan(p.c_LS) || std::isnan(p.L1_prime) || std::isnan(p.B1) || std::isnan(p.M))
        throw std::invalid_argument("generalization_bound: needs c_LS, L1_prime, B1, M");
    const auto ob = optimization_bound(p, eta, n);
    GeneralizationBound gb;
    gb.B1 = ob.total - ob.addend_gibbs; // same rates as the optimization decomposition
    gb.B2 = 4.0 * p.beta * p.c_LS / p.M * (p.L1_prime / p.a * (p.b + p.d / p.beta) + p.B1);
    gb.B3 = gibbs_gap(p);
    gb.total = gb.B1 + gb.B2 + gb.B3;
    return gb;
}

// Evaluates every constant at the supplied step size and assembles the report.
inline ConstantsReport evaluate_all(const ProblemParams& p, double eta) {
    const auto la = lambda_ac(p);
    const auto k = k_constants(p, la.lambda, la.A_c);
    const auto kb = kbar_and_d(p, la.lambda, la.A_c);
    const auto mb = moment_bounds(p, la.lambda, la.A_c);
    const auto sg = sigma_constants(p, mb.C_zeta, mb.C_theta, mb.C_v, eta);
    const auto eb = eberle_constants(p, la.lambda, la.A_c);
    const auto t1 = theorem1_constants(p, eta);
    const double emax = eta_max(p);

    ConstantsReport rep;
    rep.add("lambda", la.lambda, "min{1/4, a/(L1b + 2 L1b b + g^2/2)}  [app B.6]");
    rep.add("A_c", la.A_c, "(beta/2)(b + 2 lam u0 + 2 lam L1b b)  [app B.6]");
    rep.add("L1_tilde", k.L1_tilde, "2 L1^2 C_rho  [app C.1]");
    rep.add("C1_tilde", k.C1_tilde, "4 L2^2 C_rho + 4 H0^2  [app C.1]");
    rep.add("K1", k.K1, "max over theta/v prefactors  [app C.1]");
    rep.add("K2", k.K2, "(C1_tilde + g h0^2)/2  [app C.1]");
    rep.add("K3", k.K3, "(A_c + d) g / beta  [app C.1]");
    rep.add("K1_tilde", kb.K1_tilde, "max over theta/v prefactors  [app C.3]");
    for (int i = 1; i <= 11; ++i)
        rep.add("c_tilde_" + std::to_string(i), kb.c_tilde[i],
                "app C.3" + std::string(i == 11 ? " (uses caller m0)" : ""));
    for (int i = 1; i <= 5; ++i) {
        if (i == 2) continue; // no c_hat_2 in the proof
        const bool typo = (i == 1 || i == 5);
        rep.add("c_hat_" + std::to_string(i), kb.c_hat[i],
                std::string("app C.3") +
                    (i == 1 ? " (L2 unsquared as printed; suspected typo)"
                     : i == 5 ? " (L2 substituted for undefined L4; suspected typo)"
                              : ""),
                typo);
    }
    rep.add("K2_tilde", kb.K2_tilde, "K1_tilde + c_tilde_9  [app C.3]");
    rep.add("K_bar", kb.K_bar, "2 K2_tilde  [app C.3]");
    rep.add("D", kb.D, "c10 c11 + 2 ch1 beta + c2 + (ch5+c5) beta^2 + c6 + c8 beta  [app C.3]");
    rep.add("eta_max", emax, "min{1, 2/(g lam), g lam/(2 K1), K3/K2, g lam/(2 K_bar)}  [sec 2]");
    rep.add("C_theta_c", mb.C_theta_c, "(E V0 + (d+A_c)/lam) / ((1/8)(1-2lam) beta g^2)  [lem 3.1]");
    rep.add("C_v_c", mb.C_v_c, "(E V0 + (d+A_c)/lam) / ((1/4)(1-2lam) beta)  [lem 3.1]");
    rep.add("C_theta", mb.C_theta, "(E V0 + 4(A_c+d)/lam) / ((1/8)(1-2lam) beta g^2)  [lem 3.2]");
    rep.add("C_v", mb.C_v, "(E V0 + 4(A_c+d)/lam) / ((1/4)(1-2lam) beta)  [lem 3.2]");
    rep.add("C_zeta", mb.C_zeta, "(E V0 + 8(d+A_c)/lam) / ((1/8)(1-2lam) beta g^2)  [lem 3.3]");
    rep.add("sigma_H", sg.sigma_H, "8 L2^2 sigma_Z (1 + C_zeta)  [lem B.3]");
    rep.add("sigma_V", sg.sigma_V, "4 eta g^2 C_v + 4 eta (L1t C_theta + C1t) + 4 g d/beta  [lem B.4]");
    rep.add("Lambda", eb.Lambda, "(12/5)(1+2a+2a^2)(d+A_c) L1b / (beta g^2 lam (1-2lam))  [app A]");
    rep.add("R1", eb.R1, "sqrt(8 Lambda / L1b)  [app A]");
    rep.add("c_dot", eb.c_dot, "(g/384) min{...}  [app A]", false,
            eb.log_c_dot / std::log(10.0));
    rep.add("C_dot", eb.C_dot, "2 e^{2+Lambda} ... max{...}  [app A]", std::isinf(eb.C_dot),
            eb.log_C_dot / std::log(10.0));
    rep.add("c1", t1.c1, "exp(4 g^2)  [app D.1]");
    rep.add("C1_1_star", t1.C1_1_star,
            "sqrt(exp(4 L1^2 C_rho)(4 c1 sV + 4 c1 sH + 4 c1 eta sH))  [app D.1]");
    rep.add("C1_2_star", t1.C1_2_star, "sqrt(exp(2 g^2) sH (1+eta))  [app D.1]");
    rep.add("C1_star", t1.C1_star, "C1_1_star + C1_2_star  [app D.1]");
    if (!std::isnan(t1.C3_star))
        rep.add("C3_star", t1.C3_star, "sqrt(C_dot W_rho0)  [thm 4.3]",
                std::isinf(t1.C3_star), t1.log_C3_star / std::log(10.0));
    rep.add("C4_star", t1.C4_star, "c_dot / 2  [thm 4.3]", false,
            (eb.log_c_dot - std::log(2.0)) / std::log(10.0));
    const double C_m = std::max(mb.C_theta_c, mb.C_theta);
    rep.add("C_m", C_m, "max(C_theta_c, C_theta)  [prop 5.1]");
    const double mult = C_m * p.L1_bar + p.h0;
    rep.add("C1_bar_star", t1.C1_star * mult, "C1_star (C_m L1b + h0)  [prop 5.1]");
    if (!std::isnan(p.C2_star))
        rep.add("C2_bar_star", p.C2_star * mult, "C2_star (C_m L1b + h0)  [prop 5.1]");
    if (!std::isnan(t1.C3_star))
        rep.add("C3_bar_star", t1.C3_star * mult, "C3_star (C_m L1b + h0)  [prop 5.1]",
                std::isinf(t1.C3_star));
    rep.add("gibbs_gap", gibbs_gap(p), "(d/2beta) log(e L1b/a (b beta/d + 1))  [prop 5.2]");
    if (!std::isnan(p.c_LS) && !std::isnan(p.L1_prime) && !std::isnan(p.B1) && !std::isnan(p.M)) {
        // gen_bound reported at n = 1/eta^2 as a representative horizon
        const auto gb = generalization_bound(p, eta, 1.0 / (eta * eta));
        rep.add("gen_bound_B2", gb.B2, "(4 beta c_LS / M)(L1'/a (b + d/beta) + B1)  [prop 6.2]");
        rep.add("gen_bound", gb.total, "B1 + B2 + B3  [cor 6.3]");
    }
    return rep;
}

// Report serialization: CSV with columns name, value, log10_value, formula_ref.
inline void save_report_csv(const ConstantsReport& rep, const std::string& path) {
    std::ofstream out(path);
    out.precision(17);
    out << "name,value,log10_value,formula_ref\n";
    for (const auto& e : rep.entries) {
        std::string formula = e.formula_ref;
        for (auto& c : formula)
            if (c == ',') c = ';';
        out << e.name << "," << e.value << "," << e.log10_value << "," << formula << "\n";
    }
}

} // namespace kg
