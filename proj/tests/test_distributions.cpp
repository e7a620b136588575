#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "linkmerge/rng.hpp"
#include "linkmerge/step_cdf.hpp"

using namespace linkmerge;
using Catch::Approx;

TEST_CASE("empirical_cdf counts below-or-equal mass") {
    const auto f = empirical_cdf({1.0, 2.0, 3.0});
    CHECK(f(1.0) == Approx(1.0 / 3.0));
    CHECK(f(2.5) == Approx(2.0 / 3.0));
    CHECK(f(3.0) == 1.0);
    CHECK(f(0.999) == 0.0);
}

TEST_CASE("empirical_cdf of a single point is a unit step") {
    const auto f = empirical_cdf({5.0});
    CHECK(f(4.999) == 0.0);
    CHECK(f(5.0) == 1.0);
    CHECK(f(100.0) == 1.0);
}

TEST_CASE("empirical_cdf merges ties into one jump") {
    const auto f = empirical_cdf({2.0, 2.0, 2.0, 7.0});
    REQUIRE(f.grid().size() == 2);
    CHECK(f(2.0) == Approx(0.75));
    CHECK(f(7.0) == 1.0);
}

TEST_CASE("empirical_cdf rejects bad input") {
    CHECK_THROWS_WITH(empirical_cdf({}), "empty sample");
    CHECK_THROWS_WITH(empirical_cdf({1.0, std::nan("")}), "non-finite sample");
    CHECK_THROWS_AS(empirical_cdf({1.0, std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}

TEST_CASE("empirical_cdf tracks the analytic uniform CDF") {
    // oracle: sup distance to the true U([-5,5]) CDF, brute-forced at the
    // sample points, stays well inside the DKW scale for n = 1000
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Rng rng(seed, "x");
        std::vector<double> xs(1000);
        for (auto& x : xs) x = rng.uniform(-5.0, 5.0);
        const double ks =
            test_helpers::ks_against(xs, [](double x) { return test_helpers::uniform_cdf(x, -5.0, 5.0); });
        CHECK(ks < 0.1);
    }
}

TEST_CASE("pseudo_inverse picks the smallest grid point reaching the level") {
    const auto f = empirical_cdf({1.0, 2.0, 3.0});
    CHECK(pseudo_inverse(f, 0.5) == 2.0);
    CHECK(pseudo_inverse(f, 1.0) == 3.0);
    CHECK(pseudo_inverse(f, 0.0) == 1.0);
    CHECK_THROWS_WITH(pseudo_inverse(f, 1.5), "quantile level out of range");
    CHECK_THROWS_AS(pseudo_inverse(f, -0.1), std::invalid_argument);
}

TEST_CASE("pseudo_inverse is a Galois connection and monotone") {
    Rng rng(77, "prop");
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.next_u64() % 40;
        std::vector<double> xs(n);
        for (auto& x : xs) x = std::round(rng.uniform(-10.0, 10.0) * 4.0) / 4.0; // force ties
        const auto f = empirical_cdf(xs);
        for (double x : f.grid())
            CHECK(f.quantile(f(x)) <= x);
        double prev = f.quantile(0.0);
        for (double p = 0.05; p <= 1.0; p += 0.05) {
            const double q = f.quantile(p);
            CHECK(q >= prev);
            prev = q;
        }
    }
}

TEST_CASE("quantile confidence set: brute-forced lambda brackets the quantile") {
    // With G = U(0,1): G^{-1}(p) = p. For each run, lambda is the realized
    // sup |ecdf - G|; the ECDF quantile must land in [eps-lambda, eps+lambda].
    Rng rng(2025, "lemma2");
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 20 + rng.next_u64() % 300;
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.next_double();
        const double lambda =
            test_helpers::ks_against(xs, [](double x) { return test_helpers::uniform_cdf(x, 0.0, 1.0); });
        const auto g_hat = empirical_cdf(xs);
        for (double eps = 0.02; eps < 1.0; eps += 0.02) {
            const double q = g_hat.quantile(eps);
            CHECK(q >= std::max(eps - lambda, 0.0) - 1e-12);
            CHECK(q <= std::min(eps + lambda, 1.0) + 1e-12);
        }
    }
}

TEST_CASE("phi_bound evaluates the Bernstein-style formula") {
    // delta = 2/e makes log(2/delta) = 1: phi = 1/10 + 16/100
    CHECK(phi_bound(2.0 / std::exp(1.0), 100) == Approx(0.26).epsilon(1e-12));
    CHECK(phi_bound(0.05, 4) < phi_bound(0.05, 1));
    double prev = phi_bound(0.1, 10);
    for (std::size_t m : {100u, 1000u, 10000u}) {
        const double cur = phi_bound(0.1, m);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(phi_bound(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(phi_bound(1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(phi_bound(0.5, 0), std::invalid_argument);
}

TEST_CASE("StepCdf validates its invariants") {
    CHECK_THROWS_AS(StepCdf({1.0, 1.0}, {0.5, 1.0}, CdfKind::empirical),
                    std::invalid_argument); // grid not strictly increasing
    CHECK_THROWS_AS(StepCdf({1.0, 2.0}, {0.8, 0.5}, CdfKind::empirical),
                    std::invalid_argument); // values decreasing
    CHECK_THROWS_AS(StepCdf({1.0, 2.0}, {0.5, 0.9}, CdfKind::empirical),
                    std::invalid_argument); // empirical must end at 1
    CHECK_NOTHROW(StepCdf({1.0, 2.0}, {0.5, 0.9}, CdfKind::deconvolved));
}

TEST_CASE("Rng substreams are independent and deterministic") {
    Rng a(42, "x");
    Rng b(42, "x");
    Rng c(42, "y");
    std::vector<double> va, vb, vc;
    for (int i = 0; i < 16; ++i) {
        va.push_back(a.next_double());
        vb.push_back(b.next_double());
        vc.push_back(c.next_double());
    }
    CHECK(va == vb);
    CHECK(va != vc);
}

TEST_CASE("Rng normal and gamma have the right first moments") {
    Rng rng(7, "moments");
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum2 / n == Approx(1.0).margin(0.02));

    double gsum = 0.0;
    for (int i = 0; i < n; ++i) gsum += rng.gamma(2.0);
    CHECK(gsum / n == Approx(2.0).margin(0.03));
}
