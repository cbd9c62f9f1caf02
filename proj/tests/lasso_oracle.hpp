#pragma once

// Independent LASSO oracle for small instances: exhaustive enumeration of
// supports and sign patterns, solving the stationarity system per pattern
// and keeping the sign-consistent candidate with the lowest objective (the
// global minimizer solves its own pattern's system, so it is always among
// the candidates). Deliberately shares no code with the coordinate-descent
// solver it checks.

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Minimizes ||x - D a||^2 + lambda*||a||_1 over a.
inline Vector lasso_column(const Matrix& D, const Vector& x, double lambda) {
    const Index d = D.cols();
    Vector best = Vector::Zero(d);
    double best_obj = x.squaredNorm();

    auto consider = [&](const Vector& a) {
        const double obj = (x - D * a).squaredNorm() + lambda * a.lpNorm<1>();
        if (obj < best_obj) {
            best_obj = obj;
            best = a;
        }
    };

    const Index max_support = std::min<Index>(d, D.rows());
    std::vector<Index> support;
    // enumerate subsets via bitmask
    for (unsigned long mask = 1; mask < (1ul << d); ++mask) {
        support.clear();
        for (Index k = 0; k < d; ++k)
            if (mask & (1ul << k)) support.push_back(k);
        if (static_cast<Index>(support.size()) > max_support) continue;

        const Index s = static_cast<Index>(support.size());
        Matrix Ds(D.rows(), s);
        for (Index i = 0; i < s; ++i) Ds.col(i) = D.col(support[static_cast<std::size_t>(i)]);
        const Matrix gram = Ds.transpose() * Ds;
        const Vector corr = Ds.transpose() * x;

        for (unsigned long signs = 0; signs < (1ul << s); ++signs) {
            Vector sign_vec(s);
            for (Index i = 0; i < s; ++i)
                sign_vec(i) = (signs & (1ul << i)) ? -1.0 : 1.0;
            const Vector rhs = corr - (lambda / 2.0) * sign_vec;
            const Vector as = gram.fullPivLu().solve(rhs);
            bool sign_ok = true;
            for (Index i = 0; i < s; ++i)
                if (as(i) * sign_vec(i) <= 0.0) { sign_ok = false; break; }
            if (!sign_ok) continue;
            Vector a = Vector::Zero(d);
            for (Index i = 0; i < s; ++i) a(support[static_cast<std::size_t>(i)]) = as(i);
            consider(a);
        }
    }
    return best;
}

inline Matrix lasso(const Matrix& D, const Matrix& X, double lambda) {
    Matrix A(D.cols(), X.cols());
    for (Index j = 0; j < X.cols(); ++j)
        A.col(j) = lasso_column(D, X.col(j), lambda);
    return A;
}

// Worst KKT residual of a candidate solution, for direct assertions.
inline double kkt_residual(const Matrix& D, const Matrix& X, double lambda,
                           const Matrix& A) {
    double worst = 0.0;
    for (Index j = 0; j < X.cols(); ++j) {
        const Vector grad = 2.0 * D.transpose() * (D * A.col(j) - X.col(j));
        for (Index k = 0; k < D.cols(); ++k) {
            const double a = A(k, j);
            const double r = (a != 0.0)
                                 ? std::abs(grad(k) + lambda * (a > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(grad(k)) - lambda);
            worst = std::max(worst, r);
        }
    }
    return worst;
}

} // namespace oracle
