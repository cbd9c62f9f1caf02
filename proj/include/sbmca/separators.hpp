#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "sbmca/blocking.hpp"
#include "sbmca/dictionary.hpp"
#include "sbmca/dictlearn.hpp"
#include "sbmca/errors.hpp"
#include "sbmca/solvers.hpp"
#include "sbmca/types.hpp"

namespace sbmca {

enum class SbmcaInit { LassoD1, McaDctOmp };

inline std::string to_string(SbmcaInit init) {
    return init == SbmcaInit::LassoD1 ? "lasso-d1" : "mca-dct-omp";
}

struct SbmcaParams {
    double lambda1 = 0.1;
    double lambda2 = 0.1;
    double lambda3 = 0.1;
    DictLearnOptions dict_opts;
    int max_outer_iters = 10;
    double outer_tol = 1e-4;
    SbmcaInit init = SbmcaInit::McaDctOmp;
    LassoOptions lasso;
};

struct SeparationResult {
    BlockMatrix Xp_hat, Xu_hat;
    SparseCode A1_hat, A2_hat;
    std::optional<Dictionary> D2_hat; // absent for fixed-dictionary baselines
    std::vector<std::pair<std::string, double>> objective_trace;
    int outer_iters = 0;
    bool converged = false;
    double wall_time = 0.0; // seconds
};

namespace detail {

inline void check_finite_stage(const Matrix& M, const std::string& stage) {
    if (!M.allFinite()) throw NumericError(stage, "non-finite values");
}

inline BlockMatrix with_data(const BlockMatrix& like, Matrix data) {
    BlockMatrix B = like;
    B.data = std::move(data);
    return B;
}

} // namespace detail

// Fixed-dictionary MCA: one LASSO against the concatenated dictionary
// [D1 D2], codes split into the D1 and D2 parts.
inline SeparationResult mca_separate(const BlockMatrix& X, const Dictionary& D1,
                                     const Dictionary& D2, double lambda,
                                     const LassoOptions& opts = {}) {
    if (X.rows() != D1.rows() || X.rows() != D2.rows())
        throw std::invalid_argument("mca_separate: row mismatch");
    const auto start = std::chrono::steady_clock::now();

    const Dictionary joint = concat(D1, D2);
    LassoDiagnostics diag;
    SparseCode A = lasso(joint, X.data, lambda, opts, nullptr, &diag);
    detail::check_finite_stage(A.coeffs, "mca-lasso");

    SeparationResult res;
    res.A1_hat = {A.coeffs.topRows(D1.size()), D1.id};
    res.A2_hat = {A.coeffs.bottomRows(D2.size()), D2.id};
    res.Xp_hat = detail::with_data(X, D1.atoms * res.A1_hat.coeffs);
    res.Xu_hat = detail::with_data(X, D2.atoms * res.A2_hat.coeffs);
    res.objective_trace.emplace_back("mca", diag.objective);
    res.outer_iters = 1;
    res.converged = diag.converged;
    res.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start).count();
    return res;
}

// Semi-blind MCA: initialize A1, then alternate a dictionary-learning stage
// on the residual X - D1*A1 with a joint coefficient update against
// [D1 D2]. Convergence on the relative change of
// f = ||X - D1 A1 - D2 A2||_F^2 + lambda3*(||A1||_1 + ||A2||_1).
inline SeparationResult sbmca_separate(const BlockMatrix& X, const Dictionary& D1,
                                       const SbmcaParams& params) {
    if (X.rows() != D1.rows())
        throw std::invalid_argument("sbmca_separate: row mismatch");
    if (params.lambda1 <= 0 || params.lambda2 <= 0 || params.lambda3 <= 0)
        throw std::invalid_argument("sbmca_separate: lambdas must be positive");
    if (params.max_outer_iters < 1 || params.outer_tol <= 0)
        throw std::invalid_argument("sbmca_separate: invalid iteration controls");
    const auto start = std::chrono::steady_clock::now();

    const Index d = D1.size();
    const Index ell = params.dict_opts.num_atoms;
    const Index q = X.cols();

    SeparationResult res;

    if (X.data.isZero(0.0)) {
        res.A1_hat = {Matrix::Zero(d, q), D1.id};
        res.A2_hat = {Matrix::Zero(ell, q), "learned"};
        res.D2_hat = init_atoms(Matrix::Zero(X.rows(), q), ell, params.dict_opts.seed);
        res.Xp_hat = detail::with_data(X, Matrix::Zero(X.rows(), q));
        res.Xu_hat = detail::with_data(X, Matrix::Zero(X.rows(), q));
        res.outer_iters = 1;
        res.converged = true;
        return res;
    }

    // --- initialization of A1 ---
    Matrix A1;
    if (params.init == SbmcaInit::LassoD1) {
        SparseCode c = lasso(D1, X.data, params.lambda1, params.lasso);
        A1 = c.coeffs;
    } else {
        // MCA with the DCT dictionary, then one OMP step per column of the
        // X_p estimate against D1 (one component per column)
        const Dictionary dct = dct_dictionary(X.rows());
        SeparationResult mca = mca_separate(X, D1, dct, params.lambda1, params.lasso);
        A1 = Matrix::Zero(d, q);
        for (Index j = 0; j < q; ++j)
            A1.col(j) = omp_one_step(D1, mca.Xp_hat.data.col(j));
    }
    detail::check_finite_stage(A1, "init");

    // --- outer alternation ---
    Matrix A2 = Matrix::Zero(ell, q);
    Dictionary D2;
    double prev_f = std::numeric_limits<double>::infinity();
    DictLearnOptions dl = params.dict_opts;
    dl.lambda2 = params.lambda2;

    int iter = 0;
    for (iter = 1; iter <= params.max_outer_iters; ++iter) {
        // dictionary learning on the residual
        DictLearnResult learned = learn_dictionary(X.data - D1.atoms * A1, dl);
        D2 = std::move(learned.dict);
        A2 = std::move(learned.code.coeffs);
        detail::check_finite_stage(D2.atoms, "dictionary-learning");
        res.objective_trace.emplace_back(
            "dictlearn", learned.objective.empty() ? 0.0 : learned.objective.back());

        // joint coefficient update, warm-started from the current codes
        const Dictionary joint = concat(D1, D2);
        Matrix warm(d + ell, q);
        warm.topRows(d) = A1;
        warm.bottomRows(ell) = A2;
        SparseCode A = lasso(joint, X.data, params.lambda3, params.lasso, &warm);
        detail::check_finite_stage(A.coeffs, "coefficient-update");
        A1 = A.coeffs.topRows(d);
        A2 = A.coeffs.bottomRows(ell);

        const double f = (X.data - D1.atoms * A1 - D2.atoms * A2).squaredNorm() +
                         params.lambda3 * (A1.lpNorm<1>() + A2.lpNorm<1>());
        res.objective_trace.emplace_back("coeff-update", f);
        if (!std::isfinite(f)) throw NumericError("coeff-update", "objective diverged");
        if (std::isfinite(prev_f) &&
            std::abs(prev_f - f) <= params.outer_tol * std::max(1.0, std::abs(prev_f))) {
            res.converged = true;
            break;
        }
        prev_f = f;
    }
    res.outer_iters = std::min(iter, params.max_outer_iters);

    res.A1_hat = {A1, D1.id};
    res.A2_hat = {A2, D2.id};
    res.D2_hat = std::move(D2);
    res.Xp_hat = detail::with_data(X, D1.atoms * res.A1_hat.coeffs);
    res.Xu_hat = detail::with_data(X, res.D2_hat->atoms * res.A2_hat.coeffs);
    res.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start).count();
    return res;
}

// Best rank-r Frobenius approximation via the truncated SVD.
inline BlockMatrix truncated_svd_denoise(const BlockMatrix& X, Index r) {
    const Index max_rank = std::min(X.rows(), X.cols());
    if (r < 1 || r > max_rank)
        throw std::invalid_argument("truncated_svd_denoise: rank out of range");
    Eigen::BDCSVD<Matrix> svd(X.data, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix approx = svd.matrixU().leftCols(r) *
                          svd.singularValues().head(r).asDiagonal() *
                          svd.matrixV().leftCols(r).transpose();
    return detail::with_data(X, approx);
}

} // namespace sbmca
