#include "rfp/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rfp {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

Premiums premiums_at(double mu, double sigma_sq, double r, double g_t) {
    return premiums(mu, std::sqrt(sigma_sq), r, g_t);
}

// Unconstrained maximizer of the drift rate in pi at fixed (mu, sigma^2).
double closed_form_pi(double mu, double sigma_sq, double r, double kappa, double g_t) {
    return (g_t * sigma_sq + (mu - r)) / ((1.0 - kappa) * sigma_sq);
}

// sup over pi of the drift rate at fixed theta, excluding nothing: f_t enters
// additively.
double sup_pi_value(double mu, double sigma_sq, double r, double kappa, double g_t,
                    double f_t) {
    const double num = g_t * sigma_sq + (mu - r);
    return f_t + 0.5 * g_t * g_t * sigma_sq +
           kappa * num * num / (2.0 * (1.0 - kappa) * sigma_sq);
}

}  // namespace

WorstCase worst_case_mean_return(const MeanReturnInterval& spec, double g_t, double r) {
    validate(spec);
    const double sigma_sq = spec.sigma * spec.sigma;
    const double mu_interior = r - g_t * sigma_sq;

    WorstCase wc;
    if (spec.mu_hi < mu_interior) {
        wc.mu_star = spec.mu_hi;
        wc.branch = Branch::UpperBound;
    } else if (spec.mu_lo <= mu_interior && mu_interior <= spec.mu_hi) {
        wc.mu_star = mu_interior;
        wc.branch = Branch::Interior;
    } else {
        wc.mu_star = spec.mu_lo;
        wc.branch = Branch::LowerBound;
    }
    wc.sigma_sq_star = sigma_sq;
    wc.premiums_at_star = premiums_at(wc.mu_star, sigma_sq, r, g_t);
    return wc;
}

WorstCase worst_case_volatility(const VolatilityInterval& spec, double g_t, double kappa,
                                double r) {
    validate(spec);
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("worst_case_volatility: kappa must be in (0,1)");

    const double excess = spec.mu - r;
    const double g_sq = g_t * g_t;
    const double k_excess_sq = kappa * excess * excess;

    WorstCase wc;
    if (excess == 0.0 && g_t == 0.0) {
        // h(theta) vanishes identically; every sigma^2 is optimal.
        wc.sigma_sq_star = spec.sigma_sq_hi;
        wc.branch = Branch::UpperBound;
        wc.degenerate = true;
    } else if (g_sq * spec.sigma_sq_lo * spec.sigma_sq_lo >= k_excess_sq) {
        wc.sigma_sq_star = spec.sigma_sq_lo;
        wc.branch = Branch::LowerBound;
    } else if (g_sq * spec.sigma_sq_hi * spec.sigma_sq_hi <= k_excess_sq) {
        wc.sigma_sq_star = spec.sigma_sq_hi;
        wc.branch = Branch::UpperBound;
    } else {
        wc.sigma_sq_star = clamp(std::abs(excess) * std::sqrt(kappa) / std::abs(g_t),
                                 spec.sigma_sq_lo, spec.sigma_sq_hi);
        wc.branch = Branch::Interior;
    }
    wc.mu_star = spec.mu;
    wc.premiums_at_star = premiums_at(wc.mu_star, wc.sigma_sq_star, r, g_t);
    return wc;
}

// The published linear coefficient reads kappa*g + g^2*sigma0_sq/2 + kappa/(2*coupling);
// expanding the structured objective gives coupling/2 instead of sigma0_sq/2 on the
// g^2 term, and only the expanded form satisfies the decomposition identity and
// reproduces the published interior optima. The expanded form is the default;
// paper_form = true reproduces the printed one.
StructuredCoefficients structured_coefficients(const StructuredAmbiguity& spec, double kappa,
                                               double g_t, bool paper_form) {
    validate(spec);
    if (spec.coupling == 0.0)
        throw std::invalid_argument(
            "structured_coefficients: coupling == 0 reduces to mean-return ambiguity");

    const double alpha = spec.coupling;
    StructuredCoefficients co;
    co.a = paper_form ? kappa * g_t + 0.5 * g_t * g_t * spec.sigma0_sq + kappa / (2.0 * alpha)
                      : kappa * g_t + 0.5 * alpha * g_t * g_t + kappa / (2.0 * alpha);
    const double dev = spec.mu0 - spec.sigma0_sq / alpha;
    co.b = kappa * dev * dev;
    co.c = kappa * spec.mu0 * g_t + 0.5 * spec.sigma0_sq * g_t * g_t +
           kappa * spec.sigma0_sq / (2.0 * alpha * alpha) +
           kappa * (alpha * spec.mu0 - spec.sigma0_sq) / (alpha * alpha);
    return co;
}

double structured_objective(const StructuredAmbiguity& spec, double kappa, double g_t, double z,
                            bool paper_form) {
    const StructuredCoefficients co = structured_coefficients(spec, kappa, g_t, paper_form);
    const double w = spec.sigma0_sq + spec.coupling * z;
    return (co.a * z + co.b / (2.0 * w) + co.c) / (kappa - 1.0);
}

double structured_objective_second_derivative(const StructuredAmbiguity& spec, double kappa,
                                              double g_t, double z, bool paper_form) {
    const StructuredCoefficients co = structured_coefficients(spec, kappa, g_t, paper_form);
    const double w = spec.sigma0_sq + spec.coupling * z;
    return spec.coupling * spec.coupling * co.b / ((kappa - 1.0) * w * w * w);
}

WorstCase worst_case_structured(const StructuredAmbiguity& spec, double kappa, double g_t,
                                double r, bool paper_form) {
    validate(spec);
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("worst_case_structured: kappa must be in (0,1)");

    if (spec.coupling == 0.0) {
        // Pure drift ambiguity with fixed volatility sigma0.
        MeanReturnInterval reduced{r + spec.mu0 + spec.z_lo, r + spec.mu0 + spec.z_hi,
                                   std::sqrt(spec.sigma0_sq)};
        WorstCase wc = worst_case_mean_return(reduced, g_t, r);
        wc.z_star = wc.mu_star - r - spec.mu0;
        return wc;
    }

    const double alpha = spec.coupling;
    const StructuredCoefficients co = structured_coefficients(spec, kappa, g_t, paper_form);

    auto fhat = [&](double z) {
        const double w = spec.sigma0_sq + alpha * z;
        return (co.a * z + co.b / (2.0 * w) + co.c) / (kappa - 1.0);
    };

    double z_star;
    Branch branch;
    bool solved = false;

    if (co.b > 0.0 && co.a != 0.0) {
        const double w_sq = alpha * co.b / (2.0 * co.a);
        if (w_sq > 0.0) {
            // The admissible stationary point has sigma0_sq + coupling*z > 0.
            const double z_tilde = (std::sqrt(w_sq) - spec.sigma0_sq) / alpha;
            if (spec.z_lo < z_tilde && z_tilde < spec.z_hi) {
                z_star = z_tilde;
                branch = Branch::Interior;
                solved = true;
            }
        }
    }
    if (!solved) {
        // Concave (b > 0) or affine (b == 0) objective: compare endpoints,
        // ties broken toward z_lo.
        if (fhat(spec.z_hi) > fhat(spec.z_lo)) {
            z_star = spec.z_hi;
            branch = Branch::UpperBound;
        } else {
            z_star = spec.z_lo;
            branch = Branch::LowerBound;
        }
    }

    WorstCase wc;
    wc.z_star = z_star;
    wc.mu_star = r + spec.mu0 + z_star;
    wc.sigma_sq_star = spec.sigma0_sq + alpha * z_star;
    wc.branch = branch;
    wc.premiums_at_star = premiums_at(wc.mu_star, wc.sigma_sq_star, r, g_t);
    return wc;
}

WorstCase solve_worst_case(const AmbiguitySpec& spec, double kappa, double g_t, double r,
                           bool paper_form) {
    if (const auto* m = std::get_if<MeanReturnInterval>(&spec))
        return worst_case_mean_return(*m, g_t, r);
    if (const auto* v = std::get_if<VolatilityInterval>(&spec))
        return worst_case_volatility(*v, g_t, kappa, r);
    if (const auto* s = std::get_if<StructuredAmbiguity>(&spec))
        return worst_case_structured(*s, kappa, g_t, r, paper_form);

    // Rectangle: no closed form; fall back to the grid oracle with a bracket
    // wide enough to contain the per-corner optimal fractions.
    const auto& rect = std::get<RectangleAmbiguity>(spec);
    validate(rect);
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (double mu : {rect.mu_lo, rect.mu_hi})
        for (double ssq : {rect.sigma_sq_lo, rect.sigma_sq_hi}) {
            const double p = closed_form_pi(mu, ssq, r, kappa, g_t);
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    const double pad = 0.5 * (hi - lo) + 1.0;
    return grid_minimax_oracle(spec, kappa, g_t, r, 2000, lo - pad, hi + pad).worst;
}

std::vector<ThetaSample> sample_theta(const AmbiguitySpec& spec, double r, int n) {
    validate(spec);
    if (n < 2) throw std::invalid_argument("sample_theta: need at least 2 points per axis");

    auto linspace_at = [n](double lo, double hi, int i) {
        return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    };

    std::vector<ThetaSample> grid;
    if (const auto* m = std::get_if<MeanReturnInterval>(&spec)) {
        const double ssq = m->sigma * m->sigma;
        grid.reserve(n);
        for (int i = 0; i < n; ++i)
            grid.push_back({linspace_at(m->mu_lo, m->mu_hi, i), ssq, std::nullopt});
    } else if (const auto* v = std::get_if<VolatilityInterval>(&spec)) {
        grid.reserve(n);
        for (int i = 0; i < n; ++i)
            grid.push_back({v->mu, linspace_at(v->sigma_sq_lo, v->sigma_sq_hi, i), std::nullopt});
    } else if (const auto* s = std::get_if<StructuredAmbiguity>(&spec)) {
        grid.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double z = linspace_at(s->z_lo, s->z_hi, i);
            grid.push_back({r + s->mu0 + z, s->sigma0_sq + s->coupling * z, z});
        }
    } else {
        const auto& rect = std::get<RectangleAmbiguity>(spec);
        grid.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                grid.push_back({linspace_at(rect.mu_lo, rect.mu_hi, i),
                                linspace_at(rect.sigma_sq_lo, rect.sigma_sq_hi, j),
                                std::nullopt});
    }
    return grid;
}

GridMinimaxResult grid_minimax_oracle(const AmbiguitySpec& spec, double kappa, double g_t,
                                      double r, int theta_resolution, double pi_lo,
                                      double pi_hi, double f_t) {
    if (theta_resolution < 2)
        throw std::invalid_argument("grid_minimax_oracle: theta_resolution must be >= 2");
    if (!(pi_lo < pi_hi))
        throw std::invalid_argument("grid_minimax_oracle: empty pi bracket");

    const int n = theta_resolution;
    const std::vector<ThetaSample> grid = sample_theta(spec, r, n);
    if (grid.empty()) throw std::invalid_argument("grid_minimax_oracle: empty grid");

    // inf-sup: closed-form inner maximization over pi at each grid theta,
    // deterministic argmin (first index wins ties).
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = sup_pi_value(grid[i].mu, grid[i].sigma_sq, r, kappa, g_t, f_t);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const ThetaSample& star = grid[best];

    // sup-inf: pi grid against the extreme points of the ambiguity set; the
    // drift rate is affine in (mu, sigma^2), so the inner infimum over a
    // convex Theta is attained at an extreme point.
    std::vector<ThetaSample> extremes;
    if (std::holds_alternative<RectangleAmbiguity>(spec)) {
        const auto& rect = std::get<RectangleAmbiguity>(spec);
        for (double mu : {rect.mu_lo, rect.mu_hi})
            for (double ssq : {rect.sigma_sq_lo, rect.sigma_sq_hi})
                extremes.push_back({mu, ssq, std::nullopt});
    } else {
        extremes.push_back(grid.front());
        extremes.push_back(grid.back());
    }
    double value_sup_inf = std::numeric_limits<double>::lowest();
    for (int i = 0; i < n; ++i) {
        const double pi = pi_lo + (pi_hi - pi_lo) * static_cast<double>(i) / (n - 1);
        double inner = std::numeric_limits<double>::max();
        for (const auto& th : extremes)
            inner = std::min(inner, log_drift_rate(pi, th.mu, th.sigma_sq, r, kappa, g_t, f_t));
        value_sup_inf = std::max(value_sup_inf, inner);
    }

    GridMinimaxResult res;
    res.pi_star = closed_form_pi(star.mu, star.sigma_sq, r, kappa, g_t);
    res.worst.mu_star = star.mu;
    res.worst.sigma_sq_star = star.sigma_sq;
    res.worst.z_star = star.z;
    res.worst.branch = best == 0                  ? Branch::LowerBound
                       : best == grid.size() - 1 ? Branch::UpperBound
                                                 : Branch::Interior;
    res.worst.premiums_at_star = premiums_at(star.mu, star.sigma_sq, r, g_t);
    res.value_inf_sup = best_value;
    res.value_sup_inf = value_sup_inf;
    res.value = best_value;
    return res;
}

double constraint_residual(const WorstCase& worst, double pi_star, double kappa, double g_t,
                           double f_t, double r) {
    return log_drift_rate(pi_star, worst.mu_star, worst.sigma_sq_star, r, kappa, g_t, f_t);
}

bool matches_known_erratum(const StructuredAmbiguity& spec, double kappa, double g_t) {
    auto near = [](double x, double y) { return std::abs(x - y) < 1e-9; };
    return near(spec.z_lo, -0.15) && near(spec.z_hi, -0.08) && near(spec.coupling, 0.5) &&
           near(spec.mu0, 0.02) && near(spec.sigma0_sq, 0.1) && near(kappa, 0.4) &&
           near(g_t, 0.1);
}

}  // namespace rfp
