#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "rfp/simulate.hpp"
#include "rfp/strategy.hpp"

using namespace rfp;

namespace {

CrraPreference make_pref(double kappa, double g, double f) {
    CrraPreference p;
    p.kappa = kappa;
    p.g = PiecewiseConstant(g);
    p.f = PiecewiseConstant(f);
    return p;
}

}  // namespace

TEST_CASE("normal draws are pure functions of (seed, path, step)") {
    CHECK(normal_draw(42, 3, 7) == normal_draw(42, 3, 7));
    CHECK(normal_draw(42, 3, 7) != normal_draw(43, 3, 7));
    CHECK(normal_draw(42, 3, 7) != normal_draw(42, 4, 7));
    CHECK(normal_draw(42, 3, 7) != normal_draw(42, 3, 8));

    // First two sample moments over a large block.
    const std::size_t n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = normal_draw(7, i, 0);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("simulation is deterministic and bit-identical across runs") {
    const SimConfig cfg{1.0, 8, 64, 42, 1.0, 1.0};
    const CrraPreference pref = make_pref(0.4, 0.1, -0.016);
    const PathBundle a = simulate_paths(cfg, 0.05, 0.2, 0.01, 0.5, pref);
    const PathBundle b = simulate_paths(cfg, 0.05, 0.2, 0.01, 0.5, pref);
    CHECK(a.asset == b.asset);
    CHECK(a.wealth == b.wealth);
    CHECK(a.log_scale == b.log_scale);
    CHECK(a.performance == b.performance);
}

TEST_CASE("exact stepping keeps asset and wealth strictly positive") {
    const SimConfig cfg{1.0, 16, 200, 5, 2.0, 3.0};
    const CrraPreference pref = make_pref(0.3, -0.2, 0.01);
    const PathBundle b = simulate_paths(cfg, -0.1, 0.6, 0.0, -2.0, pref);
    for (double v : b.asset) CHECK(v > 0.0);
    for (double v : b.wealth) CHECK(v > 0.0);
    for (double v : b.performance) CHECK(v > 0.0);
}

TEST_CASE("zero fraction freezes wealth; zero g freezes the stochastic scale") {
    const SimConfig cfg{1.0, 8, 16, 9, 1.5, 1.0};
    const CrraPreference pref = make_pref(0.4, 0.0, 0.0);
    const PathBundle b = simulate_paths(cfg, 0.05, 0.2, 0.01, 0.0, pref);
    for (int i = 0; i < b.n_paths; ++i)
        for (int j = 0; j <= b.n_steps; ++j) {
            CHECK(b.at(b.wealth, i, j) == doctest::Approx(1.5).epsilon(1e-15));
            CHECK(b.at(b.log_scale, i, j) == 0.0);
        }
}

TEST_CASE("vanishing volatility gives the deterministic growth path") {
    const SimConfig cfg{2.0, 10, 4, 3, 1.0, 1.0};
    const CrraPreference pref = make_pref(0.4, 0.1, -0.016);
    const double mu = 0.05, r = 0.01, pi = 0.7;
    const PathBundle b = simulate_paths(cfg, mu, 1e-8, r, pi, pref);
    for (int i = 0; i < b.n_paths; ++i) {
        CHECK(b.at(b.asset, i, b.n_steps) == doctest::Approx(std::exp(mu * 2.0)).epsilon(1e-6));
        CHECK(b.at(b.wealth, i, b.n_steps) ==
              doctest::Approx(std::exp((mu - r) * pi * 2.0)).epsilon(1e-6));
    }
}

TEST_CASE("terminal asset mean matches the lognormal moment") {
    const SimConfig cfg{1.0, 4, 20000, 11, 1.0, 1.0};
    const CrraPreference pref = make_pref(0.4, 0.1, 0.0);
    const double mu = 0.07, sigma = 0.25;
    const PathBundle b = simulate_paths(cfg, mu, sigma, 0.01, 0.3, pref);
    std::vector<double> terminal(cfg.n_paths);
    for (int i = 0; i < cfg.n_paths; ++i) terminal[i] = b.at(b.asset, i, cfg.n_steps);
    const double mean = pairwise_sum(terminal.data(), terminal.size()) / cfg.n_paths;
    double var = 0.0;
    for (double v : terminal) var += (v - mean) * (v - mean);
    var /= cfg.n_paths - 1;
    const double se = std::sqrt(var / cfg.n_paths);
    CHECK(std::abs(mean - std::exp(mu)) < 4.0 * se);
}

TEST_CASE("terminal performance mean matches the analytic exponent") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> upi(-1.5, 1.5), umu(-0.1, 0.1), us(0.1, 0.4),
        uk(0.1, 0.9), ug(-0.3, 0.3), uf(-0.05, 0.05);
    for (int rep = 0; rep < 5; ++rep) {
        const double pi = upi(rng), mu = umu(rng), sigma = us(rng), kappa = uk(rng),
                     g = ug(rng), f = uf(rng), r = 0.01;
        const SimConfig cfg{1.0, 4, 20000, static_cast<std::uint64_t>(100 + rep), 1.0, 1.0};
        const CrraPreference pref = make_pref(kappa, g, f);
        const PathBundle b = simulate_paths(cfg, mu, sigma, r, pi, pref);
        std::vector<double> ratio(cfg.n_paths);
        const double u0 = b.at(b.performance, 0, 0);
        for (int i = 0; i < cfg.n_paths; ++i)
            ratio[i] = b.at(b.performance, i, cfg.n_steps) / u0;
        const double mean = pairwise_sum(ratio.data(), ratio.size()) / cfg.n_paths;
        double var = 0.0;
        for (double v : ratio) var += (v - mean) * (v - mean);
        var /= cfg.n_paths - 1;
        const double se = std::sqrt(var / cfg.n_paths);
        const double lambda =
            analytic_performance_exponent(pi, mu, sigma * sigma, r, kappa, g, f);
        CHECK(std::abs(mean - std::exp(lambda)) < 4.0 * se + 1e-12);
    }
}

TEST_CASE("one normal increment drives asset, wealth, and scale") {
    const SimConfig cfg{1.0, 8, 32, 13, 1.0, 1.0};
    const double mu = 0.05, sigma = 0.2, r = 0.01, pi = 0.8, g = 0.1, f = -0.016;
    const CrraPreference pref = make_pref(0.4, g, f);
    const PathBundle b = simulate_paths(cfg, mu, sigma, r, pi, pref);
    const double dt = 1.0 / 8.0, sq = std::sqrt(dt);
    for (int i = 0; i < b.n_paths; ++i)
        for (int j = 0; j < b.n_steps; ++j) {
            // Recover the increment from the asset path ...
            const double xi = (std::log(b.at(b.asset, i, j + 1) / b.at(b.asset, i, j)) -
                               (mu - 0.5 * sigma * sigma) * dt) /
                              (sigma * sq);
            CHECK(xi == doctest::Approx(normal_draw(cfg.seed, i, j)).epsilon(1e-9));
            // ... and verify it reproduces wealth and scale exactly.
            const double dlx = ((mu - r) * pi - 0.5 * pi * pi * sigma * sigma) * dt +
                               pi * sigma * sq * xi;
            CHECK(std::log(b.at(b.wealth, i, j + 1) / b.at(b.wealth, i, j)) ==
                  doctest::Approx(dlx).epsilon(1e-9));
            const double da = f * dt + g * sigma * sq * xi;
            CHECK(b.at(b.log_scale, i, j + 1) - b.at(b.log_scale, i, j) ==
                  doctest::Approx(da).epsilon(1e-9));
        }
}

TEST_CASE("exact stepping has no discretization bias in the step count") {
    // With vanishing noise the terminal state must not depend on n_steps.
    const CrraPreference pref = make_pref(0.4, 0.1, -0.016);
    double previous = 0.0;
    bool first = true;
    for (int n_steps : {1, 10, 1000}) {
        const SimConfig cfg{1.5, n_steps, 1, 17, 1.0, 1.0};
        const PathBundle b = simulate_paths(cfg, 0.06, 1e-10, 0.01, 0.9, pref);
        const double terminal = b.at(b.wealth, 0, n_steps);
        if (!first) CHECK(terminal == doctest::Approx(previous).epsilon(1e-7));
        previous = terminal;
        first = false;
    }
}

TEST_CASE("euler stepping can drive wealth nonpositive, flagged as NaN") {
    const SimConfig cfg{1.0, 1, 200, 19, 1.0, 1.0};
    const CrraPreference pref = make_pref(0.4, 0.1, -0.016);
    const PathBundle b = simulate_paths(cfg, 0.05, 0.6, 0.01, 50.0, pref, Stepping::Euler);
    bool any_nan = false;
    for (int i = 0; i < b.n_paths; ++i)
        if (std::isnan(b.at(b.performance, i, 1))) any_nan = true;
    CHECK(any_nan);
}

TEST_CASE("analytic exponent quadratic fall-off around the optimum") {
    const WorstCase wc = worst_case_structured({0.02, 0.1, 0.5, 0.02, 0.12}, 0.4, 0.1, 0.0);
    const double f = drift_coefficient_f(AmbiguityMode::Structured, wc, 0.4, 0.1, 0.0);
    const StrategyResult st = optimal_fraction(wc, 0.4, 0.1, 0.0);

    CHECK(std::abs(analytic_performance_exponent(st.pi_star, wc.mu_star, wc.sigma_sq_star, 0.0,
                                                 0.4, 0.1, f)) < 1e-12);
    // lambda(pi) = -kappa (1-kappa) sigma^2 (pi - pi*)^2 / 2 when f closes
    // the construction.
    const double d = 0.2 * st.pi_star;
    const double expected = -0.5 * 0.4 * 0.6 * wc.sigma_sq_star * d * d;
    CHECK(analytic_performance_exponent(st.pi_star + d, wc.mu_star, wc.sigma_sq_star, 0.0, 0.4,
                                        0.1, f) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(analytic_performance_exponent(st.pi_star - d, wc.mu_star, wc.sigma_sq_star, 0.0, 0.4,
                                        0.1, f) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("martingale test verdicts") {
    const WorstCase wc = worst_case_structured({0.02, 0.1, 0.5, 0.02, 0.12}, 0.4, 0.1, 0.0);
    const double f = drift_coefficient_f(AmbiguityMode::Structured, wc, 0.4, 0.1, 0.0);
    const StrategyResult st = optimal_fraction(wc, 0.4, 0.1, 0.0);
    const CrraPreference pref = make_pref(0.4, 0.1, f);
    const SimConfig cfg{1.0, 16, 20000, 1, 1.0, 1.0};

    MartingaleReport rep = martingale_test(cfg, st.pi_star, wc, pref, 0.0);
    CHECK(std::abs(rep.analytic_exponent) < 1e-12);
    CHECK(std::abs(rep.mc_mean_ratio - 1.0) < 3.0 * rep.mc_std_error);
    CHECK(rep.verdict == Verdict::Martingale);

    rep = martingale_test(cfg, 1.2 * st.pi_star, wc, pref, 0.0);
    CHECK(rep.analytic_exponent < 0.0);
    CHECK(rep.verdict == Verdict::Supermartingale);

    rep = martingale_test(cfg, 0.8 * st.pi_star, wc, pref, 0.0);
    CHECK(rep.verdict == Verdict::Supermartingale);

    // A drift coefficient that fails the constraint is rejected up front.
    const CrraPreference bad = make_pref(0.4, 0.1, f + 1e-3);
    CHECK_THROWS_AS(martingale_test(cfg, st.pi_star, wc, bad, 0.0), std::invalid_argument);
}

TEST_CASE("pairwise sum matches extended-precision accumulation") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> data(100001);
    for (double& v : data) v = u(rng);
    const double ps = pairwise_sum(data.data(), data.size());
    long double ref = 0.0L;
    for (double v : data) ref += v;
    CHECK(ps == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
}

TEST_CASE("simulation input validation") {
    const CrraPreference pref = make_pref(0.4, 0.1, -0.016);
    CrraPreference no_f = pref;
    no_f.f.reset();
    const SimConfig cfg{1.0, 4, 8, 1, 1.0, 1.0};
    CHECK_THROWS_AS(simulate_paths(cfg, 0.05, 0.2, 0.01, 0.5, no_f), std::invalid_argument);
    CHECK_THROWS_AS(simulate_paths(cfg, 0.05, 0.0, 0.01, 0.5, pref), std::invalid_argument);
    CHECK_THROWS_AS(simulate_paths({0.0, 4, 8, 1, 1.0, 1.0}, 0.05, 0.2, 0.01, 0.5, pref),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_paths({1.0, 0, 8, 1, 1.0, 1.0}, 0.05, 0.2, 0.01, 0.5, pref),
                    std::invalid_argument);
}
