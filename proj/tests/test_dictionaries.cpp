#include <cstdio>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "sbmca/dictionary.hpp"
#include "sbmca/solvers.hpp"

using namespace sbmca;

TEST_CASE("pulse dictionary enumerates prototype x shift combinations") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<Vector> protos(2, Vector(12));
    for (auto& p : protos)
        for (Index i = 0; i < 12; ++i) p(i) = g(rng);
    std::vector<long> shifts;
    for (long s = -4; s <= 4; ++s) shifts.push_back(s);

    Dictionary D = build_pulse_dictionary(protos, shifts);
    REQUIRE(D.size() == 18);
    for (Index k = 0; k < D.size(); ++k)
        CHECK(D.atoms.col(k).norm() == Catch::Approx(1.0).margin(1e-10));

    SECTION("zero shift column equals the normalized prototype") {
        // prototype 0, shift 0 is column index 4 (shift order -4..4)
        CHECK((D.atoms.col(4) - protos[0] / protos[0].norm()).norm() < 1e-14);
        CHECK(D.labels[4] == "proto0:shift0");
    }
    SECTION("shift by s then -s round-trips") {
        Vector once = detail::circular_shift(protos[0], 3);
        Vector back = detail::circular_shift(once, -3);
        CHECK((back - protos[0]).norm() == 0.0);
    }
}

TEST_CASE("pulse dictionary rejects bad inputs") {
    std::vector<Vector> protos{Vector::Zero(8)};
    CHECK_THROWS_AS(build_pulse_dictionary(protos, {0}), std::invalid_argument);
    std::vector<Vector> ok{Vector::Ones(8)};
    CHECK_THROWS_AS(build_pulse_dictionary(ok, {0, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(build_pulse_dictionary({}, {0}), std::invalid_argument);
}

TEST_CASE("dct dictionary closed forms") {
    Dictionary one = dct_dictionary(1);
    CHECK(one.atoms(0, 0) == Catch::Approx(1.0));

    Dictionary two = dct_dictionary(2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(two.atoms(0, 0) == Catch::Approx(inv_sqrt2));
    CHECK(two.atoms(1, 0) == Catch::Approx(inv_sqrt2));
    CHECK(two.atoms(0, 1) == Catch::Approx(inv_sqrt2));
    CHECK(two.atoms(1, 1) == Catch::Approx(-inv_sqrt2));
}

TEST_CASE("dct dictionary is orthonormal") {
    for (Index m : {8, 64, 400, 1024}) {
        Dictionary D = dct_dictionary(m);
        Matrix gram = D.atoms.transpose() * D.atoms;
        CHECK((gram - Matrix::Identity(m, m)).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}

TEST_CASE("identity dictionary") {
    Dictionary D = identity_dictionary(3);
    CHECK(D.atoms == Matrix::Identity(3, 3));
    for (Index k = 0; k < 3; ++k) CHECK(D.atoms.col(k).norm() == 1.0);

    SECTION("lasso against identity reduces to entrywise soft-thresholding") {
        std::mt19937_64 rng(4);
        std::normal_distribution<double> g;
        Matrix X(3, 5);
        for (Index j = 0; j < 5; ++j)
            for (Index i = 0; i < 3; ++i) X(i, j) = g(rng);
        const double lambda = 0.4;
        SparseCode A = lasso(D, X, lambda);
        for (Index j = 0; j < 5; ++j)
            for (Index i = 0; i < 3; ++i)
                CHECK(A.coeffs(i, j) ==
                      Catch::Approx(soft_threshold(X(i, j), lambda / 2.0)).margin(1e-12));
    }
}

TEST_CASE("dictionary save/load round-trips bit-exactly") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    std::vector<Vector> protos(2, Vector(16));
    for (auto& p : protos)
        for (Index i = 0; i < 16; ++i) p(i) = g(rng);
    Dictionary D = build_pulse_dictionary(protos, {-2, 0, 2});

    const std::string path = "test_dict_roundtrip.dict";
    save_dictionary(D, path);
    Dictionary back = load_dictionary(path);
    std::remove(path.c_str());

    CHECK(back.id == D.id);
    CHECK(back.labels == D.labels);
    REQUIRE(back.atoms.rows() == D.atoms.rows());
    REQUIRE(back.atoms.cols() == D.atoms.cols());
    CHECK(back.atoms == D.atoms); // bit-identical
}
