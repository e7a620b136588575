#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "linkmerge/simlab.hpp"

using namespace linkmerge;
using Catch::Approx;

TEST_CASE("simulate: identity with no noise pushes the uniform law through") {
    SimConfig sc;
    sc.m = sc.n = 500;
    sc.h_family = HFamily::identity;
    sc.x_lo = 0.0;
    sc.x_hi = 1.0;
    sc.noise_true = NoiseSpec::dirac();
    sc.seed = 4;
    const auto data = simulate(sc);
    const auto u01 = [](double x) { return test_helpers::uniform_cdf(x, 0.0, 1.0); };
    CHECK(test_helpers::ks_against(data.dx.values, u01) < 0.1);
    CHECK(test_helpers::ks_against(data.dy.values, u01) < 0.1);
}

TEST_CASE("simulate: power_abs output stays inside the attainable range") {
    SimConfig sc;
    sc.m = sc.n = 2000;
    sc.h_family = HFamily::power_abs;
    sc.noise_true = NoiseSpec::uniform(0.5);
    sc.seed = 9;
    const auto data = simulate(sc);
    for (double y : data.dy.values) {
        CHECK(y >= -6.25 - 0.5);
        CHECK(y <= 6.25 + 0.5);
    }
}

TEST_CASE("simulate is bit-deterministic in the seed") {
    SimConfig sc;
    sc.seed = 1234;
    const auto a = simulate(sc);
    const auto b = simulate(sc);
    CHECK(a.dx.values == b.dx.values);
    CHECK(a.dy.values == b.dy.values);
    sc.seed = 1235;
    const auto c = simulate(sc);
    CHECK(a.dy.values != c.dy.values);
}

TEST_CASE("x and y draws come from independent substreams") {
    SimConfig sc;
    sc.seed = 77;
    sc.m = 100;
    sc.n = 250;
    const auto base = simulate(sc);
    sc.m = 5000; // changing m must not perturb the y stream
    const auto wider = simulate(sc);
    CHECK(base.dy.values == wider.dy.values);
    for (std::size_t i = 0; i < base.dx.values.size(); ++i)
        CHECK(base.dx.values[i] == wider.dx.values[i]);
}

TEST_CASE("disc_flat has a flat stretch and jumps, and stays monotone") {
    SimConfig sc;
    sc.h_family = HFamily::disc_flat;
    const auto h = sc.h_fn();
    CHECK(h(-1.0) == -1.0);
    CHECK(h(0.5) == 0.5);
    CHECK(h(1.9) == 0.5);
    CHECK(h(2.0) == 3.0);
    double prev = h(-5.0);
    for (double x = -5.0; x <= 5.0; x += 0.01) {
        CHECK(h(x) >= prev);
        prev = h(x);
    }
}

TEST_CASE("custom table links interpolate monotonically") {
    SimConfig sc;
    sc.h_family = HFamily::custom;
    sc.custom_table = {{0.0, 0.0}, {1.0, 2.0}, {2.0, 2.5}};
    const auto h = sc.h_fn();
    CHECK(h(0.5) == Approx(1.0));
    CHECK(h(1.5) == Approx(2.25));
    CHECK(h(-3.0) == 0.0);
    CHECK(h(9.0) == 2.5);
}

TEST_CASE("evaluate: exact fits score zero, offsets square") {
    LinkEstimate est;
    est.u_grid = {0.0, 1.0};
    est.h_hat = {0.0, 1.0};
    const auto zero = evaluate(est, {{0.25, 0.25}, {0.75, 0.75}});
    CHECK(zero.mse == 0.0);
    CHECK(zero.risk == 0.0);

    const auto off = evaluate(est, {{0.5, 2.5}});
    CHECK(off.mse == Approx(4.0));
    CHECK(off.risk == Approx(2.0));

    const auto two = evaluate(est, {{0.2, 0.3}, {0.8, 0.7}});
    CHECK(two.mse == Approx(0.01).epsilon(1e-12));
    CHECK(two.n_holdout == 2);

    CHECK_THROWS_WITH(evaluate(est, {}), "empty holdout");
}

TEST_CASE("evaluate is permutation-invariant and risk^2 = mse") {
    Rng rng(3, "eval");
    LinkEstimate est;
    est.u_grid = DeconvConfig::linspace(0.0, 1.0, 11);
    for (double u : est.u_grid) est.h_hat.push_back(u * u);
    std::vector<std::pair<double, double>> holdout;
    for (int i = 0; i < 50; ++i)
        holdout.emplace_back(rng.next_double(), rng.next_double());
    const auto a = evaluate(est, holdout);
    std::reverse(holdout.begin(), holdout.end());
    const auto b = evaluate(est, holdout);
    CHECK(a.mse == Approx(b.mse).epsilon(1e-15));
    CHECK(a.risk * a.risk == Approx(a.mse).epsilon(1e-12));
}

TEST_CASE("single repetition, no noise, identity: grid MSE is tiny at n=1000") {
    SimConfig sc;
    sc.m = sc.n = 1000;
    sc.h_family = HFamily::identity;
    sc.x_lo = 0.0;
    sc.x_hi = 1.0;
    sc.noise_true = NoiseSpec::dirac();
    sc.noise_deconv = NoiseSpec::dirac();
    sc.seed = 11;
    const auto cells = run_grid_experiment({{1000, 1000}}, {NoiseSpec::dirac()},
                                           HFamily::identity, 1, 11);
    // identity over U(-5,5) by default x law; rebuild with the right law
    GroupMap gm;
    const auto data = simulate(sc);
    gm.groups[""] = Group{data.dx.values, data.dy.values};
    const auto fit = match_merge(gm, NoiseSpec::dirac(), {}, 0.05);
    const double mse = grid_mse(fit.estimates.front(), sc.h_fn(), sc.x_lo, sc.x_hi);
    CHECK(mse < 0.05);
    CHECK(cells.front().failures == 0);
}

TEST_CASE("experiment grid improves with sample size") {
    const auto noise = NoiseSpec::gaussian(std::sqrt(0.1));
    const auto cells = run_grid_experiment({{100, 100}, {1000, 1000}}, {noise},
                                           HFamily::power_abs, 10, 515);
    REQUIRE(cells.size() == 2);
    CHECK(cells[1].median_mse < cells[0].median_mse);
    CHECK(cells[0].failures == 0);
    CHECK(cells[1].failures == 0);
}

TEST_CASE("misspecified run with equal noises reports identical columns") {
    SimConfig sc;
    sc.m = sc.n = 300;
    sc.h_family = HFamily::power_abs;
    sc.noise_true = NoiseSpec::gaussian(0.5);
    sc.noise_deconv = NoiseSpec::gaussian(0.5);
    sc.seed = 2;
    const auto report = run_misspecified(sc, 5);
    CHECK(report.median_mse_correct == report.median_mse_wrong);
    CHECK(report.iqr_mse_correct == report.iqr_mse_wrong);
}

TEST_CASE("over-deconvolving a clean signal hurts") {
    // truth is noise-free; deconvolving with N(0,1) sharpens artificially
    SimConfig sc;
    sc.m = sc.n = 800;
    sc.h_family = HFamily::identity;
    sc.x_lo = 0.0;
    sc.x_hi = 1.0;
    sc.noise_true = NoiseSpec::dirac();
    sc.noise_deconv = NoiseSpec::gaussian(1.0);
    sc.seed = 8;
    const auto report = run_misspecified(sc, 5);
    CHECK(report.median_mse_wrong > report.median_mse_correct);
}

TEST_CASE("wrong-noise fits stay monotone and finite") {
    SimConfig sc;
    sc.m = sc.n = 500;
    sc.h_family = HFamily::power_abs;
    sc.noise_true = NoiseSpec::gaussian(std::sqrt(0.1));
    sc.seed = 21;
    const auto data = simulate(sc);
    GroupMap gm;
    gm.groups[""] = Group{data.dx.values, data.dy.values};
    for (const auto& wrong :
         {NoiseSpec::uniform(0.5), NoiseSpec::gaussian(1.0),
          NoiseSpec::scaled_student(0.1, 4.0)}) {
        const auto fit = match_merge(gm, wrong, {}, 0.05);
        REQUIRE(fit.failures.empty());
        const auto& est = fit.estimates.front();
        for (std::size_t i = 0; i < est.h_hat.size(); ++i) {
            CHECK(std::isfinite(est.h_hat[i]));
            if (i > 0) CHECK(est.h_hat[i] >= est.h_hat[i - 1]);
        }
    }
}
