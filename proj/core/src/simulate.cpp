#include "rfp/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rfp/strategy.hpp"

namespace rfp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double normal_draw(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const std::uint64_t s = splitmix64(seed + splitmix64(path + splitmix64(step + 1)));
    const std::uint64_t r1 = splitmix64(s);
    const std::uint64_t r2 = splitmix64(r1 + 0x632BE59BD9B4E019ULL);
    // 53-bit uniforms strictly inside (0,1) keep the log finite.
    const double u1 = (static_cast<double>(r1 >> 11) + 0.5) * 0x1p-53;
    const double u2 = (static_cast<double>(r2 >> 11) + 0.5) * 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

PathBundle simulate_paths(const SimConfig& cfg, double mu, double sigma, double r, double pi,
                          const CrraPreference& pref, Stepping stepping) {
    cfg.validate();
    pref.validate();
    if (!(sigma > 0.0)) throw std::invalid_argument("simulate_paths: sigma must be > 0");
    if (!pref.has_f())
        throw std::invalid_argument("simulate_paths: preference drift coefficient f not set");

    const int cols = cfg.n_steps + 1;
    const double dt = cfg.horizon / cfg.n_steps;
    const double sqrt_dt = std::sqrt(dt);

    PathBundle b;
    b.n_paths = cfg.n_paths;
    b.n_steps = cfg.n_steps;
    b.time_grid.resize(cols);
    for (int j = 0; j < cols; ++j) b.time_grid[j] = j * dt;
    const std::size_t total = static_cast<std::size_t>(cfg.n_paths) * cols;
    b.asset.resize(total);
    b.wealth.resize(total);
    b.log_scale.resize(total);
    b.performance.resize(total);

    for (int i = 0; i < cfg.n_paths; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * cols;
        double s = cfg.s0;
        double x = cfg.x0;
        double alpha = pref.log_scale_init;
        b.asset[row] = s;
        b.wealth[row] = x;
        b.log_scale[row] = alpha;
        b.performance[row] = crra_utility(x, alpha, pref.kappa).u;
        for (int j = 0; j < cfg.n_steps; ++j) {
            const double t = b.time_grid[j];
            const double g_t = pref.g.at(t);
            const double f_t = pref.f->at(t);
            const double xi = normal_draw(cfg.seed, static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(j));
            if (stepping == Stepping::Exact) {
                s *= std::exp((mu - 0.5 * sigma * sigma) * dt + sigma * sqrt_dt * xi);
                x *= std::exp(((mu - r) * pi - 0.5 * pi * pi * sigma * sigma) * dt +
                              pi * sigma * sqrt_dt * xi);
            } else {
                s *= 1.0 + mu * dt + sigma * sqrt_dt * xi;
                x *= 1.0 + (mu - r) * pi * dt + pi * sigma * sqrt_dt * xi;
            }
            alpha += f_t * dt + g_t * sigma * sqrt_dt * xi;
            b.asset[row + j + 1] = s;
            b.wealth[row + j + 1] = x;
            b.log_scale[row + j + 1] = alpha;
            b.performance[row + j + 1] =
                x > 0.0 ? crra_utility(x, alpha, pref.kappa).u
                        : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return b;
}

double analytic_performance_exponent(double pi, double mu, double sigma_sq, double r,
                                     double kappa, double g_t, double f_t) {
    // Lognormal moment route: log U(t+h)/U(t) is Gaussian with mean A h and
    // variance B^2 h, so the expected ratio is exp((A + B^2/2) h).
    const double drift = f_t + kappa * ((mu - r) * pi - 0.5 * pi * pi * sigma_sq);
    const double vol = (g_t + kappa * pi);
    const double lambda = drift + 0.5 * vol * vol * sigma_sq;
    const double direct = log_drift_rate(pi, mu, sigma_sq, r, kappa, g_t, f_t);
    if (std::abs(lambda - direct) > 1e-12 * std::max(1.0, std::abs(direct)))
        throw std::logic_error("analytic_performance_exponent: moment/drift mismatch");
    return lambda;
}

MartingaleReport martingale_test(const SimConfig& cfg, double pi, const WorstCase& worst,
                                 const CrraPreference& pref, double r, Stepping stepping) {
    cfg.validate();
    pref.validate();
    if (!pref.has_f())
        throw std::invalid_argument("martingale_test: preference drift coefficient f not set");

    // The drift coefficient must close the construction at the worst case.
    const StrategyResult opt = optimal_fraction(worst, pref.kappa, pref.g.at(0.0), r);
    const double residual = constraint_residual(worst, opt.pi_star, pref.kappa,
                                                pref.g.at(0.0), pref.f->at(0.0), r);
    if (std::abs(residual) > 1e-9)
        throw std::invalid_argument("martingale_test: inconsistent f, constraint residual = " +
                                    std::to_string(residual));

    const double mu = worst.mu_star;
    const double sigma = std::sqrt(worst.sigma_sq_star);
    const double sigma_sq = worst.sigma_sq_star;
    const double dt = cfg.horizon / cfg.n_steps;
    const double sqrt_dt = std::sqrt(dt);

    double exponent = 0.0;
    for (int j = 0; j < cfg.n_steps; ++j) {
        const double t = j * dt;
        exponent += analytic_performance_exponent(pi, mu, sigma_sq, r, pref.kappa,
                                                  pref.g.at(t), pref.f->at(t)) * dt;
    }

    std::vector<double> ratios(static_cast<std::size_t>(cfg.n_paths));
    for (int i = 0; i < cfg.n_paths; ++i) {
        double log_ratio = 0.0;
        double x = cfg.x0;  // Euler wealth path when requested
        bool euler_dead = false;
        for (int j = 0; j < cfg.n_steps; ++j) {
            const double t = j * dt;
            const double g_t = pref.g.at(t);
            const double f_t = pref.f->at(t);
            const double xi = normal_draw(cfg.seed, static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(j));
            if (stepping == Stepping::Exact) {
                log_ratio += (f_t + pref.kappa * ((mu - r) * pi - 0.5 * pi * pi * sigma_sq)) * dt +
                             (g_t + pref.kappa * pi) * sigma * sqrt_dt * xi;
            } else {
                const double next = x * (1.0 + (mu - r) * pi * dt + pi * sigma * sqrt_dt * xi);
                if (!(next > 0.0)) {
                    euler_dead = true;
                    break;
                }
                log_ratio += f_t * dt + g_t * sigma * sqrt_dt * xi +
                             pref.kappa * std::log(next / x);
                x = next;
            }
        }
        ratios[static_cast<std::size_t>(i)] = euler_dead ? 0.0 : std::exp(log_ratio);
    }

    const double n = static_cast<double>(cfg.n_paths);
    const double mean = pairwise_sum(ratios.data(), ratios.size()) / n;
    std::vector<double> sq(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double d = ratios[i] - mean;
        sq[i] = d * d;
    }
    const double var = cfg.n_paths > 1 ? pairwise_sum(sq.data(), sq.size()) / (n - 1.0) : 0.0;
    const double se = std::sqrt(var / n);

    MartingaleReport rep;
    rep.analytic_exponent = exponent;
    rep.mc_mean_ratio = mean;
    rep.mc_std_error = se;
    if (std::abs(exponent) < 1e-12 && std::abs(mean - 1.0) < 3.0 * se)
        rep.verdict = Verdict::Martingale;
    else if (exponent < 0.0 && mean < 1.0 + 3.0 * se)
        rep.verdict = Verdict::Supermartingale;
    else
        rep.verdict = Verdict::Violated;
    return rep;
}

}  // namespace rfp
