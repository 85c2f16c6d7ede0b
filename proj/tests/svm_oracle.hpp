#pragma once

// Small SVM fixtures and an exhaustive dual solver for them.
//
// Every alpha is either 0, C or free. For each of the 3^n assignments the free
// alphas and the bias solve y_i f(x_i) = 1 (free i) plus sum y_i alpha_i = 0.
// Feasible solutions are dual-feasible points, the optimum is one of them, and
// the dual is concave, so the best feasible objective is the optimum.

#include "advrec/svm.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace svm_oracle {

struct Fixture {
    std::string name;
    advrec::Matrix x;
    std::vector<int> y;
    double C;
    double gamma;
};

inline std::vector<Fixture> fixtures()
{
    return {
        {"two_points", {{0.0, 0.0}, {1.0, 1.0}}, {+1, -1}, 1.0, 0.5},
        {"xor", {{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {-1, -1, +1, +1}, 10.0, 1.0},
        {"six_points", {{0.0, 0.0}, {0.4, 0.9}, {1.0, 0.2}, {2.0, 2.0}, {1.6, 2.5}, {0.9, 0.8}}, {+1, +1, +1, -1, -1, -1}, 2.0,
            0.7},
        {"overlap", {{0.0}, {0.3}, {0.5}, {0.6}, {0.9}, {1.2}, {0.55}, {0.2}}, {+1, +1, -1, +1, -1, -1, -1, +1}, 1.0, 2.0},
    };
}

// Dense Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][c]) < 1e-12) {
            return std::nullopt;
        }
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) {
                continue;
            }
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        b[i] /= a[i][i];
    }
    return b;
}

struct Optimum {
    std::vector<double> alpha;
    double objective{-std::numeric_limits<double>::infinity()};
};

inline Optimum brute_force_dual(const Fixture& f)
{
    const std::size_t n = f.x.size();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            q[i][j] = f.y[i] * f.y[j] * advrec::rbf_kernel(f.x[i], f.x[j], f.gamma);
        }
    }
    Optimum best;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) {
        combos *= 3;
    }
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<int> state(n); // 0: at zero, 1: at C, 2: free
        std::size_t c = code;
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(c % 3);
            c /= 3;
            if (state[i] == 2) {
                free.push_back(i);
            }
        }
        std::vector<double> alpha(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 1) {
                alpha[i] = f.C;
            }
        }
        if (!free.empty()) {
            // Unknowns: alpha over free, then b.
            const std::size_t m = free.size() + 1;
            std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
            std::vector<double> rhs(m, 0.0);
            for (std::size_t r = 0; r < free.size(); ++r) {
                const std::size_t i = free[r];
                double fixed = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (state[j] == 1) {
                        fixed += q[i][j] * f.C;
                    }
                }
                for (std::size_t k = 0; k < free.size(); ++k) {
                    a[r][k] = q[i][free[k]];
                }
                a[r][free.size()] = f.y[i];
                rhs[r] = 1.0 - fixed;
            }
            double fixed_sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (state[j] == 1) {
                    fixed_sum += f.y[j] * f.C;
                }
            }
            for (std::size_t k = 0; k < free.size(); ++k) {
                a[free.size()][k] = f.y[free[k]];
            }
            rhs[free.size()] = -fixed_sum;
            const auto sol = solve(a, rhs);
            if (!sol) {
                continue;
            }
            bool ok = true;
            for (std::size_t k = 0; k < free.size(); ++k) {
                const double v = (*sol)[k];
                if (v < -1e-12 || v > f.C + 1e-12) {
                    ok = false;
                }
                alpha[free[k]] = v;
            }
            if (!ok) {
                continue;
            }
        }
        double eq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            eq += f.y[i] * alpha[i];
        }
        if (std::abs(eq) > 1e-9) {
            continue;
        }
        const double obj = advrec::dual_objective(f.x, f.y, alpha, f.gamma);
        if (obj > best.objective) {
            best = {alpha, obj};
        }
    }
    return best;
}

} // namespace svm_oracle
