#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmca/dictionary.hpp"
#include "sbmca/errors.hpp"
#include "sbmca/types.hpp"

namespace sbmca {

struct LassoOptions {
    int max_iters = 500;   // coordinate-descent sweeps per column
    double tol = 1e-7;     // relative objective change
    double kkt_tol = 1e-5; // max subgradient violation required at exit
};

struct LassoDiagnostics {
    bool converged = true;     // every column converged
    int max_sweeps = 0;        // worst column
    double objective = 0.0;    // summed over columns, at exit
};

// d x q coefficient matrix, tied to the dictionary it indexes.
struct SparseCode {
    Matrix coeffs;
    std::string dict_id;
};

inline double soft_threshold(double v, double tau) {
    if (v > tau) return v - tau;
    if (v < -tau) return v + tau;
    return 0.0;
}

namespace detail {

// Minimizes ||x - D a||^2 + lambda*||a||_1 by cyclic coordinate descent on
// the Gram form. gram = D^T D, corr = D^T x. `a` is the warm start and
// output. Sweeps alternate between the full index set and the current
// support; convergence is declared on a full sweep.
inline bool lasso_column(const Matrix& gram, const Vector& corr, double x_sq,
                         double lambda, const LassoOptions& opts, Vector& a,
                         double& objective, int& sweeps) {
    const Index d = gram.cols();
    Vector g = gram * a; // g = G a, maintained incrementally
    const double tau = lambda / 2.0;

    auto sweep = [&](bool full) {
        for (Index k = 0; k < d; ++k) {
            const double old = a(k);
            if (!full && old == 0.0) continue;
            const double gkk = gram(k, k);
            const double rho = corr(k) - g(k) + gkk * old;
            const double next = soft_threshold(rho, tau) / gkk;
            if (next != old) {
                g.noalias() += gram.col(k) * (next - old);
                a(k) = next;
            }
        }
    };
    auto current_objective = [&]() {
        return x_sq - 2.0 * a.dot(corr) + a.dot(g) + lambda * a.lpNorm<1>();
    };
    auto kkt_violation = [&]() {
        double worst = 0.0;
        for (Index k = 0; k < d; ++k) {
            const double grad = 2.0 * (g(k) - corr(k));
            const double v = (a(k) != 0.0)
                                 ? std::abs(grad + lambda * (a(k) > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(grad) - lambda);
            worst = std::max(worst, v);
        }
        return worst;
    };

    double prev = x_sq + lambda * a.lpNorm<1>() - 2.0 * a.dot(corr) + a.dot(g);
    bool full_next = true;
    int since_full = 0;
    for (sweeps = 1; sweeps <= opts.max_iters; ++sweeps) {
        sweep(full_next);
        since_full = full_next ? 0 : since_full + 1;
        const double obj = current_objective();
        const bool small_change =
            std::abs(prev - obj) <= opts.tol * std::max(1.0, std::abs(prev));
        if (small_change && full_next && kkt_violation() <= opts.kkt_tol) {
            objective = obj;
            return true;
        }
        // restricted sweeps while moving fast, full sweep once settled; a
        // periodic forced full sweep keeps ill-conditioned supports from
        // crawling without ever re-selecting atoms
        full_next = small_change || since_full >= 4;
        prev = obj;
    }
    sweeps = opts.max_iters;
    objective = prev;
    return false;
}

} // namespace detail

// Column-wise LASSO: per column j, min ||x_j - D a_j||^2 + lambda*||a_j||_1.
// Accepts an optional warm start with the same shape as the result.
inline SparseCode lasso(const Dictionary& D, const Matrix& X, double lambda,
                        const LassoOptions& opts = {},
                        const Matrix* warm_start = nullptr,
                        LassoDiagnostics* diag = nullptr) {
    if (D.size() < 1) throw std::invalid_argument("lasso: empty dictionary");
    if (X.rows() != D.rows()) throw std::invalid_argument("lasso: row mismatch");
    if (lambda <= 0.0) throw std::invalid_argument("lasso: lambda must be positive");
    if (!D.atoms.allFinite() || !X.allFinite())
        throw std::invalid_argument("lasso: non-finite input");
    if (opts.max_iters < 1 || opts.tol <= 0.0)
        throw std::invalid_argument("lasso: invalid options");

    const Index d = D.size(), q = X.cols();
    SparseCode A;
    A.dict_id = D.id;
    if (warm_start != nullptr) {
        if (warm_start->rows() != d || warm_start->cols() != q)
            throw std::invalid_argument("lasso: warm start shape mismatch");
        A.coeffs = *warm_start;
    } else {
        A.coeffs = Matrix::Zero(d, q);
    }

    const Matrix gram = D.atoms.transpose() * D.atoms;
    const Matrix corr = D.atoms.transpose() * X;

    LassoDiagnostics local;
    for (Index j = 0; j < q; ++j) {
        Vector a = A.coeffs.col(j);
        double obj = 0.0;
        int sweeps = 0;
        const bool ok = detail::lasso_column(gram, corr.col(j),
                                             X.col(j).squaredNorm(), lambda,
                                             opts, a, obj, sweeps);
        A.coeffs.col(j) = a;
        local.converged = local.converged && ok;
        local.max_sweeps = std::max(local.max_sweeps, sweeps);
        local.objective += obj;
    }
    if (diag != nullptr) *diag = local;
    return A;
}

// Single greedy step: picks the atom with the largest |<d_k, x>| (ties to
// the lowest index) and returns its projection coefficient. Zero input
// yields the zero vector.
inline Vector omp_one_step(const Dictionary& D, const Vector& x) {
    if (x.size() != D.rows()) throw std::invalid_argument("omp_one_step: size mismatch");
    if (!x.allFinite() || !D.atoms.allFinite())
        throw std::invalid_argument("omp_one_step: non-finite input");

    Vector a = Vector::Zero(D.size());
    if (x.isZero(0.0)) return a;
    const Vector corr = D.atoms.transpose() * x;
    Index best = 0;
    double best_abs = -1.0;
    for (Index k = 0; k < corr.size(); ++k) {
        const double c = std::abs(corr(k));
        if (c > best_abs) {
            best_abs = c;
            best = k;
        }
    }
    a(best) = corr(best);
    return a;
}

} // namespace sbmca
