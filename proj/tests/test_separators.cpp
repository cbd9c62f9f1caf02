#include <random>

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/SVD>

#include "sbmca/blocking.hpp"
#include "sbmca/separators.hpp"

#include "lasso_oracle.hpp"

using namespace sbmca;

namespace {

Dictionary random_dictionary(Index m, Index d, std::mt19937_64& rng, const char* id) {
    std::normal_distribution<double> g;
    Dictionary D;
    D.id = id;
    D.atoms.resize(m, d);
    for (Index k = 0; k < d; ++k) {
        for (Index i = 0; i < m; ++i) D.atoms(i, k) = g(rng);
        D.atoms.col(k).normalize();
        D.labels.push_back(std::string(id) + "-" + std::to_string(k));
    }
    return D;
}

BlockMatrix wrap(const Matrix& M) {
    BlockMatrix B;
    B.data = M;
    B.block_len = M.rows();
    B.orig_len = M.rows() * M.cols();
    B.pad = 0;
    return B;
}

} // namespace

TEST_CASE("mca_separate splits disjoint orthonormal supports exactly") {
    // X = D1 a + D2 b with D1, D2 pieces of one orthonormal basis, so the
    // combined dictionary has zero coherence across the split
    const Index m = 16;
    Dictionary full = dct_dictionary(m);
    Dictionary D1, D2;
    D1.id = "half1";
    D2.id = "half2";
    D1.atoms = full.atoms.leftCols(8);
    D2.atoms = full.atoms.rightCols(8);
    for (int k = 0; k < 8; ++k) {
        D1.labels.push_back("a" + std::to_string(k));
        D2.labels.push_back("b" + std::to_string(k));
    }

    Matrix A1 = Matrix::Zero(8, 3), A2 = Matrix::Zero(8, 3);
    A1(1, 0) = 2.0;
    A1(4, 1) = -1.5;
    A2(2, 1) = 1.0;
    A2(7, 2) = 3.0;
    Matrix X = D1.atoms * A1 + D2.atoms * A2;

    LassoOptions opts;
    opts.tol = 1e-13;
    opts.kkt_tol = 1e-9;
    SeparationResult res = mca_separate(wrap(X), D1, D2, 1e-6, opts);
    CHECK((res.Xp_hat.data - D1.atoms * A1).norm() < 1e-6);
    CHECK((res.Xu_hat.data - D2.atoms * A2).norm() < 1e-6);
}

TEST_CASE("mca_separate with huge lambda returns zero estimates") {
    std::mt19937_64 rng(2);
    Dictionary D1 = random_dictionary(10, 6, rng, "d1");
    Dictionary D2 = random_dictionary(10, 6, rng, "d2");
    std::normal_distribution<double> g;
    Matrix X(10, 4);
    for (Index j = 0; j < 4; ++j)
        for (Index i = 0; i < 10; ++i) X(i, j) = g(rng);

    SeparationResult res = mca_separate(wrap(X), D1, D2, 1e6);
    CHECK(res.A1_hat.coeffs.isZero(0.0));
    CHECK(res.A2_hat.coeffs.isZero(0.0));
    CHECK(res.Xp_hat.data.isZero(0.0));
    CHECK(res.Xu_hat.data.isZero(0.0));
}

TEST_CASE("mca_separate agrees with the joint-dictionary oracle") {
    std::mt19937_64 rng(3);
    Dictionary D1 = random_dictionary(6, 4, rng, "d1");
    Dictionary D2 = random_dictionary(6, 4, rng, "d2");
    std::normal_distribution<double> g;
    Matrix X(6, 2);
    for (Index j = 0; j < 2; ++j)
        for (Index i = 0; i < 6; ++i) X(i, j) = g(rng);

    LassoOptions opts;
    opts.tol = 1e-13;
    opts.kkt_tol = 1e-9;
    opts.max_iters = 5000;
    SeparationResult res = mca_separate(wrap(X), D1, D2, 0.2, opts);

    Matrix joint(6, 8);
    joint << D1.atoms, D2.atoms;
    Matrix A_star = oracle::lasso(joint, X, 0.2);
    Matrix A(8, 2);
    A.topRows(4) = res.A1_hat.coeffs;
    A.bottomRows(4) = res.A2_hat.coeffs;
    CHECK((A - A_star).norm() <= 1e-5);
}

TEST_CASE("sbmca_separate returns everything to the known component on clean data") {
    std::mt19937_64 rng(5);
    const Index m = 20, d = 10, q = 40;
    Dictionary D1 = random_dictionary(m, d, rng, "d1");
    std::uniform_int_distribution<Index> pick(0, d - 1);
    std::uniform_real_distribution<double> mag(1.0, 2.0);
    Matrix A_star = Matrix::Zero(d, q);
    for (Index j = 0; j < q; ++j) A_star(pick(rng), j) = mag(rng);
    Matrix X = D1.atoms * A_star;

    SbmcaParams params;
    params.lambda1 = params.lambda2 = params.lambda3 = 1e-3;
    params.dict_opts.num_atoms = 4;
    params.dict_opts.seed = 1;
    params.init = SbmcaInit::LassoD1;
    SeparationResult res = sbmca_separate(wrap(X), D1, params);

    CHECK((res.Xp_hat.data - X).norm() / X.norm() <= 1e-2);
    CHECK(res.Xu_hat.data.norm() / X.norm() <= 1e-2);
}

TEST_CASE("sbmca_separate on zero input converges immediately") {
    std::mt19937_64 rng(6);
    Dictionary D1 = random_dictionary(8, 4, rng, "d1");
    SbmcaParams params;
    params.dict_opts.num_atoms = 3;
    SeparationResult res = sbmca_separate(wrap(Matrix::Zero(8, 5)), D1, params);
    CHECK(res.converged);
    CHECK(res.outer_iters == 1);
    CHECK(res.Xp_hat.data.isZero(0.0));
    CHECK(res.Xu_hat.data.isZero(0.0));
}

TEST_CASE("sbmca_separate reconstruction consistency and trace") {
    std::mt19937_64 rng(7);
    Dictionary D1 = random_dictionary(12, 6, rng, "d1");
    std::normal_distribution<double> g;
    Matrix X(12, 10);
    for (Index j = 0; j < 10; ++j)
        for (Index i = 0; i < 12; ++i) X(i, j) = g(rng);

    SbmcaParams params;
    params.lambda1 = params.lambda2 = params.lambda3 = 0.1;
    params.dict_opts.num_atoms = 3;
    params.dict_opts.seed = 2;
    params.init = SbmcaInit::LassoD1;
    SeparationResult res = sbmca_separate(wrap(X), D1, params);

    REQUIRE(res.D2_hat.has_value());
    CHECK((res.Xp_hat.data - D1.atoms * res.A1_hat.coeffs).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((res.Xu_hat.data - res.D2_hat->atoms * res.A2_hat.coeffs).lpNorm<Eigen::Infinity>() <= 1e-12);

    // lambda2 == lambda3: the coefficient-update f values are non-increasing
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [stage, value] : res.objective_trace) {
        CHECK(std::isfinite(value));
        if (stage == "coeff-update") {
            CHECK(value <= prev + 1e-9);
            prev = value;
        }
    }
}

TEST_CASE("sbmca_separate validates arguments") {
    std::mt19937_64 rng(8);
    Dictionary D1 = random_dictionary(8, 4, rng, "d1");
    SbmcaParams params;
    CHECK_THROWS_AS(sbmca_separate(wrap(Matrix::Zero(9, 3)), D1, params),
                    std::invalid_argument);
    params.lambda1 = -1.0;
    CHECK_THROWS_AS(sbmca_separate(wrap(Matrix::Zero(8, 3)), D1, params),
                    std::invalid_argument);
}

TEST_CASE("truncated_svd_denoise") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;

    SECTION("rank-one input passes through at r=1") {
        Vector u(6), v(5);
        for (Index i = 0; i < 6; ++i) u(i) = g(rng);
        for (Index i = 0; i < 5; ++i) v(i) = g(rng);
        BlockMatrix X = wrap(u * v.transpose());
        BlockMatrix Y = truncated_svd_denoise(X, 1);
        CHECK((Y.data - X.data).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
    SECTION("full rank reproduces the input") {
        Matrix M(4, 6);
        for (Index j = 0; j < 6; ++j)
            for (Index i = 0; i < 4; ++i) M(i, j) = g(rng);
        BlockMatrix Y = truncated_svd_denoise(wrap(M), 4);
        CHECK((Y.data - M).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
    SECTION("error equals the tail singular value energy") {
        Matrix M(6, 5);
        for (Index j = 0; j < 5; ++j)
            for (Index i = 0; i < 6; ++i) M(i, j) = g(rng);
        BlockMatrix Y = truncated_svd_denoise(wrap(M), 2);
        Eigen::BDCSVD<Matrix> svd(M);
        const Vector s = svd.singularValues();
        const double tail = std::sqrt(s.tail(s.size() - 2).squaredNorm());
        CHECK((M - Y.data).norm() == Catch::Approx(tail).margin(1e-8));
    }
    SECTION("rank out of range throws") {
        BlockMatrix X = wrap(Matrix::Zero(4, 4));
        CHECK_THROWS_AS(truncated_svd_denoise(X, 0), std::invalid_argument);
        CHECK_THROWS_AS(truncated_svd_denoise(X, 5), std::invalid_argument);
    }
}
