#include "rfp/strategy.hpp"

#include <cmath>

namespace rfp {

Direction classify_direction(const Premiums& p) {
    if (p.total > kFlatThreshold) return Direction::Long;
    if (p.total < -kFlatThreshold) return Direction::Short;
    return Direction::Flat;
}

StrategyResult optimal_fraction(const WorstCase& worst, double kappa, double g_t, double r) {
    if (!(worst.sigma_sq_star > 0.0))
        throw std::domain_error("optimal_fraction: sigma_sq_star must be > 0");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("optimal_fraction: kappa must be in (0,1)");

    StrategyResult res;
    res.myopic = (worst.mu_star - r) / ((1.0 - kappa) * worst.sigma_sq_star);
    res.hedging = g_t / (1.0 - kappa);
    res.pi_star = res.myopic + res.hedging;
    res.total_premium = worst.premiums_at_star.total;
    res.direction = classify_direction(worst.premiums_at_star);
    return res;
}

double general_feedback_strategy(double u_x, double u_xx, double eta_x, double mu,
                                 double sigma_sq, double r, double x) {
    if (!(u_xx < 0.0))
        throw std::domain_error("general_feedback_strategy: u_xx must be < 0 (concavity)");
    if (!(x > 0.0)) throw std::domain_error("general_feedback_strategy: x must be > 0");
    if (!(sigma_sq > 0.0))
        throw std::domain_error("general_feedback_strategy: sigma_sq must be > 0");
    return -(eta_x * sigma_sq + (mu - r) * u_x) / (x * sigma_sq * u_xx);
}

double drift_coefficient_f(AmbiguityMode mode, const WorstCase& worst, double kappa,
                           double g_t, double r) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("drift_coefficient_f: kappa must be in (0,1)");
    if (!(worst.sigma_sq_star > 0.0))
        throw std::domain_error("drift_coefficient_f: sigma_sq_star must be > 0");
    // A structured worst case carries its z; the point modes must not.
    if (mode == AmbiguityMode::Structured && !worst.z_star)
        throw std::invalid_argument("drift_coefficient_f: structured mode requires z_star");
    if ((mode == AmbiguityMode::NoAmbiguity || mode == AmbiguityMode::MeanReturn ||
         mode == AmbiguityMode::Volatility) &&
        worst.z_star)
        throw std::invalid_argument("drift_coefficient_f: z_star set for a non-structured mode");

    const double excess = worst.mu_star - r;
    const double ssq = worst.sigma_sq_star;
    return g_t * g_t * ssq / (2.0 * (kappa - 1.0)) +
           kappa / (kappa - 1.0) * (0.5 * excess * excess / ssq + excess * g_t);
}

}  // namespace rfp
