#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kg {

// Moment summary of a Gaussian law.
struct GaussianMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov; // symmetric PSD

    int dim() const { return static_cast<int>(mean.size()); }
};

// Uniformly weighted point cloud, one sample per row.
struct EmpiricalCloud {
    Eigen::MatrixXd points; // n x k

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

namespace detail {

// PSD square root via symmetric eigendecomposition, eigenvalues clipped at 0.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

} // namespace detail

// Closed-form W2 between Gaussians:
//   W2^2 = |m1-m2|^2 + tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}).
inline double w2_gaussian(const GaussianMoments& g1, const GaussianMoments& g2) {
    if (g1.dim() != g2.dim()) throw std::invalid_argument("w2_gaussian: dimension mismatch");
    const Eigen::MatrixXd r1 = detail::psd_sqrt(0.5 * (g1.cov + g1.cov.transpose()));
    const Eigen::MatrixXd cross = detail::psd_sqrt(r1 * (0.5 * (g2.cov + g2.cov.transpose())) * r1);
    double sq = (g1.mean - g2.mean).squaredNorm() + g1.cov.trace() + g2.cov.trace() -
                2.0 * cross.trace();
    return std::sqrt(std::max(0.0, sq));
}

// Exact linear assignment by the Jonker-Volgenant shortest augmenting path
// algorithm, O(n^3). cost is n x n; returns the minimizing column for each row.
inline std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, n), way(n + 1, 0); // p[j]: row matched to column j
    for (int i = 0; i < n; ++i) {
        p[n] = i;
        int j0 = n;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = -1;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }
    std::vector<int> match(n);
    for (int j = 0; j < n; ++j)
        if (p[j] < n) match[p[j]] = j;
    return match;
}

struct AssignmentResult {
    double w2 = 0.0;
    std::vector<int> permutation; // row i of c1 matched to permutation[i] of c2
};

// Exact W2 between equal-size uniform clouds: min over permutations of the
// mean squared pairing cost, realized by exact linear assignment.
inline AssignmentResult w2_assignment(const EmpiricalCloud& c1, const EmpiricalCloud& c2) {
    if (c1.size() != c2.size()) throw std::invalid_argument("w2_assignment: unequal cloud sizes");
    if (c1.dim() != c2.dim()) throw std::invalid_argument("w2_assignment: dimension mismatch");
    const int n = c1.size();
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost(i, j) = (c1.points.row(i) - c2.points.row(j)).squaredNorm();
    AssignmentResult res;
    res.permutation = solve_assignment(cost);
    // summing the matched costs in sorted order makes the value independent
    // of the argument order, so w2_assignment(a, b) == w2_assignment(b, a)
    std::vector<double> matched(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) matched[static_cast<std::size_t>(i)] = cost(i, res.permutation[i]);
    std::sort(matched.begin(), matched.end());
    double total = 0.0;
    for (double c : matched) total += c;
    res.w2 = std::sqrt(total / n);
    return res;
}

// Sample mean and POPULATION covariance (divide by n), symmetrized.
inline GaussianMoments fit_gaussian(const EmpiricalCloud& c) {
    if (c.size() < 1) throw std::invalid_argument("fit_gaussian: empty cloud");
    GaussianMoments g;
    g.mean = c.points.colwise().mean();
    Eigen::MatrixXd centered = c.points.rowwise() - g.mean.transpose();
    g.cov = (centered.transpose() * centered) / static_cast<double>(c.size());
    g.cov = 0.5 * (g.cov + g.cov.transpose()).eval();
    return g;
}

// Cloud file format: CSV, one point per row, no header.
inline void save_cloud_csv(const EmpiricalCloud& c, const std::string& path) {
    std::ofstream out(path);
    out.precision(17);
    for (int i = 0; i < c.size(); ++i) {
        for (int j = 0; j < c.dim(); ++j) {
            if (j) out << ",";
            out << c.points(i, j);
        }
        out << "\n";
    }
}

inline EmpiricalCloud load_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cloud: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("cloud has no rows: " + path);
    EmpiricalCloud c;
    c.points.resize(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < c.size(); ++i) {
        if (rows[i].size() != static_cast<std::size_t>(c.dim()))
            throw std::runtime_error("ragged cloud file: " + path);
        for (int j = 0; j < c.dim(); ++j) c.points(i, j) = rows[i][j];
    }
    return c;
}

} // namespace kg
