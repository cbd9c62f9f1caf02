#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "sbmca/blocking.hpp"
#include "sbmca/metrics.hpp"

using namespace sbmca;

TEST_CASE("reconstruction_snr") {
    Vector ref(4);
    ref << 0.5, -0.5, 0.5, -0.5; // unit norm

    SECTION("perfect estimate is flagged exact") {
        SnrValue s = reconstruction_snr(ref, ref);
        CHECK(s.exact);
        CHECK(std::isinf(s.db));
    }
    SECTION("zero estimate gives 0 dB") {
        SnrValue s = reconstruction_snr(ref, Vector::Zero(4));
        CHECK(s.db == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("error norm 0.1 on a unit reference gives 20 dB") {
        Vector e = Vector::Zero(4);
        e(2) = 0.1;
        SnrValue s = reconstruction_snr(ref, ref + e);
        CHECK(s.db == Catch::Approx(20.0).margin(1e-10));
    }
    SECTION("invariant under joint scaling") {
        Vector est = ref * 0.9;
        const double a = reconstruction_snr(ref, est).db;
        const double b = reconstruction_snr((ref * 7.0).eval(), (est * 7.0).eval()).db;
        CHECK(a == Catch::Approx(b).margin(1e-12));
    }
    SECTION("zero reference throws") {
        CHECK_THROWS_AS(reconstruction_snr(Vector::Zero(4), ref), std::invalid_argument);
    }
}

TEST_CASE("per_block_errors") {
    Vector x(6);
    x << 1, 2, 2, 4, 0, 0; // block 3 (last when m=2) is zero
    BlockMatrix Ref = blockify(x, 2);

    SECTION("exact estimate gives zeros, zero-ref blocks flagged") {
        int zeros = 0;
        Vector e = per_block_errors(Ref, Ref, &zeros);
        CHECK(zeros == 1);
        CHECK(e(0) == 0.0);
        CHECK(e(1) == 0.0);
        CHECK(e(2) == kZeroBlockSentinel);
    }
    SECTION("zero estimate gives ones on nonzero blocks") {
        BlockMatrix Est = Ref;
        Est.data.setZero();
        Vector e = per_block_errors(Ref, Est);
        CHECK(e(0) == Catch::Approx(1.0));
        CHECK(e(1) == Catch::Approx(1.0));
    }
    SECTION("joint scaling leaves errors unchanged") {
        BlockMatrix Est = Ref;
        Est.data *= 0.8;
        Vector e1 = per_block_errors(Ref, Est);
        BlockMatrix Ref2 = Ref, Est2 = Est;
        Ref2.data *= -3.0;
        Est2.data *= -3.0;
        Vector e2 = per_block_errors(Ref2, Est2);
        for (Index j = 0; j < 2; ++j) CHECK(e1(j) == Catch::Approx(e2(j)).margin(1e-14));
    }
    SECTION("shape mismatch throws") {
        BlockMatrix other = blockify(Vector::Ones(4), 2);
        CHECK_THROWS_AS(per_block_errors(Ref, other), std::invalid_argument);
    }
}

TEST_CASE("histogram") {
    SECTION("basic binning") {
        Vector v(3);
        v << 0.1, 0.5, 0.9;
        auto bins = histogram(v, 2, 0.0, 1.0);
        REQUIRE(bins.size() == 2);
        CHECK(bins[0].count == 1);
        CHECK(bins[1].count == 2);
    }
    SECTION("empty input gives all zeros") {
        auto bins = histogram(Vector(), 4, 0.0, 1.0);
        for (const auto& b : bins) CHECK(b.count == 0);
    }
    SECTION("out-of-range values are clamped and counts conserved") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1.0, 3.0);
        Vector v(500);
        for (Index i = 0; i < 500; ++i) v(i) = u(rng);
        auto bins = histogram(v, 13, 0.0, 1.5);
        long total = 0;
        for (const auto& b : bins) total += b.count;
        CHECK(total == 500);
    }
    SECTION("bad arguments throw") {
        CHECK_THROWS_AS(histogram(Vector(), 0, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(histogram(Vector(), 3, 1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("default lambda grid spans the requested decades") {
    auto grid = default_lambda_grid(2.0, 7);
    REQUIRE_FALSE(grid.empty());
    CHECK(grid.front() == Catch::Approx(2.0 * 1e-3));
    CHECK(grid.back() == Catch::Approx(2.0 * 1e1).epsilon(1e-6));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
    CHECK_THROWS_AS(default_lambda_grid(0.0), std::invalid_argument);
}
