#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "linkmerge/deconvolution.hpp"
#include "linkmerge/rng.hpp"

using namespace linkmerge;
using Catch::Approx;

TEST_CASE("empirical_char_fn on point masses") {
    const std::vector<double> t_grid{-2.0, -0.5, 0.0, 0.5, 2.0};
    const auto at_zero = empirical_char_fn({0.0, 0.0, 0.0}, t_grid);
    for (const auto& v : at_zero) {
        CHECK(v.real() == Approx(1.0));
        CHECK(v.imag() == Approx(0.0).margin(1e-15));
    }
    const double c = 1.7;
    const auto single = empirical_char_fn({c}, t_grid);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        CHECK(single[j].real() == Approx(std::cos(t_grid[j] * c)));
        CHECK(single[j].imag() == Approx(std::sin(t_grid[j] * c)));
    }
    CHECK_THROWS_WITH(empirical_char_fn({}, t_grid), "empty sample");
}

TEST_CASE("empirical_char_fn approaches the gaussian CF") {
    Rng rng(5, "cf");
    std::vector<double> xs(100000);
    for (auto& x : xs) x = rng.normal();
    const auto v = empirical_char_fn(xs, {1.0});
    CHECK(std::abs(v[0] - std::complex<double>(std::exp(-0.5), 0.0)) < 0.02);
}

namespace {

DeconvConfig cell_resolving_config(const std::vector<double>& ys, std::size_t n_x,
                                   std::size_t n_freq) {
    auto sorted = ys;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front(), hi = sorted.back();
    const double pad = 0.05 * (hi - lo);
    DeconvConfig cfg;
    cfg.tau = 0.0;
    cfg.x_grid = DeconvConfig::linspace(lo - pad, hi + pad, n_x);
    const double cell = (cfg.x_grid.back() - cfg.x_grid.front()) / double(n_x - 1);
    cfg.freq_max = M_PI / cell;
    cfg.n_freq = n_freq;
    return cfg;
}

} // namespace

TEST_CASE("dirac deconvolution with tau=0 reproduces the ECDF on the grid") {
    Rng rng(81, "dirac-eq");
    for (int rep = 0; rep < 8; ++rep) {
        std::vector<double> ys(300);
        for (auto& y : ys) y = rng.uniform(-1.0, 3.0);
        const auto cfg = cell_resolving_config(ys, 129, 512);
        const auto dec = deconvolve(ys, NoiseSpec::dirac(), cfg);
        const auto ecdf = empirical_cdf(ys);
        const double cell = dec.cdf.max_cell();
        double sup = 0.0;
        for (std::size_t i = 0; i < dec.cdf.size(); ++i)
            sup = std::max(sup, std::abs(dec.cdf.values()[i] - ecdf(dec.cdf.grid()[i])));
        CHECK(sup <= cell);
    }
}

TEST_CASE("quantile-matching baseline: dirac chain tracks the pure ECDF chain") {
    Rng rng(82, "chain");
    std::vector<double> ys(400);
    for (auto& y : ys) y = 2.0 * rng.normal();
    const auto cfg = cell_resolving_config(ys, 257, 2048);
    const auto dec = deconvolve(ys, NoiseSpec::dirac(), cfg);
    const auto ecdf = empirical_cdf(ys);
    const double cell = dec.cdf.max_cell();
    // at the ECDF's own jump levels the two quantile chains must agree
    for (std::size_t k = 1; k <= 400; k += 7) {
        const double p = static_cast<double>(k) / 400.0;
        CHECK(std::abs(dec.cdf.quantile(p) - ecdf.quantile(p)) <= 2.0 * cell);
    }
}

TEST_CASE("gaussian deconvolution recovers a uniform signal") {
    // forward-convolution oracle: Y = X' + eps with X' ~ U(-1,1), eps ~ N(0,0.5);
    // the deconvolved CDF must approach the analytic uniform CDF
    Rng xr(7, "oracle");
    Rng nr(7, "noise");
    const auto noise = NoiseSpec::gaussian(0.5);
    const std::size_t n = 10000;
    const auto eps = noise.sample(n, nr);
    std::vector<double> ys(n);
    for (std::size_t j = 0; j < n; ++j) ys[j] = xr.uniform(-1.0, 1.0) + eps[j];

    const auto dec = deconvolve(ys, noise, {});
    const double sup = test_helpers::sup_vs_truth(
        dec.cdf, [](double x) { return test_helpers::uniform_cdf(x, -1.0, 1.0); });
    CHECK(sup < 0.1);

    // symmetric signal and symmetric noise: the estimated median sits at 0
    CHECK(dec.cdf(0.0) == Approx(0.5).margin(0.05));
}

TEST_CASE("deconvolve rejects a grid that misses data") {
    DeconvConfig cfg;
    cfg.x_grid = DeconvConfig::linspace(0.0, 1.0, 64);
    CHECK_THROWS_WITH(deconvolve({0.5, 2.0}, NoiseSpec::dirac(), cfg),
                      "grid does not cover sample range");
}

TEST_CASE("deconvolve output satisfies CDF invariants under fuzzing") {
    Rng rng(314, "fuzz");
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 2 + rng.next_u64() % 60;
        std::vector<double> ys(n);
        const int kind = rep % 5;
        for (auto& y : ys) {
            switch (kind) {
                case 0: y = rng.uniform(-1e-4, 1e-4); break;       // nearly degenerate
                case 1: y = std::floor(rng.uniform(0.0, 4.0)); break; // heavy ties
                case 2: y = std::exp(3.0 * rng.normal()); break;      // wild scale
                case 3: y = rng.uniform(-1000.0, 1000.0); break;
                default: y = rng.normal(); break;
            }
        }
        NoiseSpec noise = NoiseSpec::dirac();
        switch (rng.next_u64() % 4) {
            case 0: noise = NoiseSpec::gaussian(rng.uniform(0.01, 3.0)); break;
            case 1: noise = NoiseSpec::uniform(rng.uniform(0.01, 3.0)); break;
            case 2: noise = NoiseSpec::scaled_student(rng.uniform(0.01, 1.0), 4.0); break;
            default: break;
        }
        DeconvConfig cfg;
        cfg.tau = rep % 3 == 0 ? std::optional<double>(rng.uniform(0.0, 1.5))
                               : std::nullopt;
        const auto dec = deconvolve(ys, noise, cfg);
        const auto& vals = dec.cdf.values();
        REQUIRE(!vals.empty());
        CHECK(vals.back() == 1.0);
        double prev = 0.0;
        for (double v : vals) {
            CHECK(v >= prev);
            CHECK(v <= 1.0);
            prev = v;
        }
        double prev_x = -std::numeric_limits<double>::infinity();
        for (double x : dec.cdf.grid()) {
            CHECK(std::isfinite(x));
            CHECK(x > prev_x);
            prev_x = x;
        }
    }
}

TEST_CASE("deconvolved mass stays near 1 on well-posed inputs") {
    Rng rng(99, "mass");
    std::vector<double> ys(2000);
    const auto noise = NoiseSpec::gaussian(0.3);
    Rng nr(99, "noise");
    const auto eps = noise.sample(ys.size(), nr);
    for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = rng.uniform(0.0, 2.0) + eps[j];
    const auto dec = deconvolve(ys, noise, {});
    CHECK(dec.raw_mass == Approx(1.0).margin(0.05));
}

TEST_CASE("more data brings the deconvolved CDF closer to the truth") {
    // median Kolmogorov error to the true N(0,1) signal over seeded runs
    const auto noise = NoiseSpec::uniform(0.5);
    auto run = [&](std::size_t n, std::uint64_t seed) {
        Rng xr(seed, "x");
        Rng nr(seed, "noise");
        const auto eps = noise.sample(n, nr);
        std::vector<double> ys(n);
        for (std::size_t j = 0; j < n; ++j) ys[j] = xr.normal() + eps[j];
        const auto dec = deconvolve(ys, noise, {});
        return test_helpers::sup_vs_truth(dec.cdf, [](double x) {
            return 0.5 * std::erfc(-x / std::sqrt(2.0));
        });
    };
    std::vector<double> small, large;
    for (std::uint64_t s = 0; s < 20; ++s) {
        small.push_back(run(150, 1000 + s));
        large.push_back(run(3000, 2000 + s));
    }
    CHECK(test_helpers::median(large) < test_helpers::median(small));
}

TEST_CASE("noise_advantage: candidate equal to truth always holds") {
    const auto t_grid = DeconvConfig::linspace(0.1, 3.0, 30);
    const auto noise = NoiseSpec::gaussian(1.0);
    const auto report = noise_advantage(noise, noise, t_grid);
    CHECK(report.evaluated == t_grid.size());
    CHECK(report.fraction == 1.0);
}

TEST_CASE("noise_advantage: dirac candidate holds with equality") {
    const auto t_grid = DeconvConfig::linspace(0.1, 3.0, 30);
    const auto report =
        noise_advantage(NoiseSpec::dirac(), NoiseSpec::gaussian(0.8), t_grid);
    CHECK(report.fraction == 1.0);
}

TEST_CASE("noise_advantage: close gaussians satisfy the condition everywhere") {
    // analytic check: with f = e^{-t^2/2}, f* = e^{-0.72 t^2},
    // |1/f - 1/f*| = e^{0.72 t^2} - e^{0.5 t^2} < e^{0.72 t^2} - 1 = |1 - 1/f*|
    // for every t in the grid, so the satisfied fraction is exactly 1.
    const auto t_grid = DeconvConfig::linspace(0.1, 3.0, 30);
    const auto report = noise_advantage(NoiseSpec::gaussian(1.0),
                                        NoiseSpec::gaussian(1.2), t_grid);
    CHECK(report.evaluated == 30);
    CHECK(report.skipped == 0);
    CHECK(report.fraction == 1.0);
}

TEST_CASE("noise_advantage skips frequencies where a CF vanishes") {
    // uniform(1) CF vanishes at t = pi
    const std::vector<double> t_grid{M_PI, 1.0};
    const auto report =
        noise_advantage(NoiseSpec::uniform(1.0), NoiseSpec::gaussian(1.0), t_grid);
    CHECK(report.skipped == 1);
    CHECK(report.evaluated == 1);
}

TEST_CASE("psi_rate shapes") {
    CHECK(psi_rate(NoiseSpec::dirac(), 100, 0.05, 1.0) == 0.0);
    for (const auto& noise :
         {NoiseSpec::gaussian(1.0), NoiseSpec::uniform(0.5),
          NoiseSpec::scaled_student(0.1, 4.0)}) {
        CHECK(psi_rate(noise, 10000, 0.05, 1.0) < psi_rate(noise, 100, 0.05, 1.0));
    }
    // gaussian: log decay means the n=100 -> n=10^4 gain is mild compared to
    // the polynomial families
    const double g1 = psi_rate(NoiseSpec::gaussian(1.0), 100, 0.1, 1.0);
    const double g2 = psi_rate(NoiseSpec::gaussian(1.0), 10000, 0.1, 1.0);
    const double u1 = psi_rate(NoiseSpec::uniform(1.0), 100, 0.1, 1.0);
    const double u2 = psi_rate(NoiseSpec::uniform(1.0), 10000, 0.1, 1.0);
    CHECK(g1 / g2 < u1 / u2);
    CHECK(g1 == Approx(std::pow(std::log(100.0 / 0.1), -1.0)).epsilon(1e-12));
}
