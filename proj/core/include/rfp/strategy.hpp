#pragma once

#include "rfp/model.hpp"
#include "rfp/worst_case.hpp"

// Optimal investment fraction with its myopic/hedging decomposition, the
// trading direction, and the drift coefficient f(t) that closes the
// performance-process construction for each ambiguity mode.

namespace rfp {

enum class Direction { Long, Flat, Short };

// Deadband on the total risk premium below which the position is Flat.
inline constexpr double kFlatThreshold = 1e-12;

struct StrategyResult {
    double pi_star;  // fraction of wealth in the risky asset
    double myopic;
    double hedging;
    Direction direction;
    double total_premium;
};

Direction classify_direction(const Premiums& p);

// pi* = (g sigma*^2 + (mu* - r)) / ((1 - kappa) sigma*^2), split into the
// myopic part (mu* - r)/((1 - kappa) sigma*^2) and the hedging part
// g/(1 - kappa).
StrategyResult optimal_fraction(const WorstCase& worst, double kappa, double g_t, double r);

// Feedback form for a general (not necessarily CRRA) performance flow:
//   -(eta_x sigma^2 + (mu - r) u_x) / (x sigma^2 u_xx).
double general_feedback_strategy(double u_x, double u_xx, double eta_x, double mu,
                                 double sigma_sq, double r, double x);

enum class AmbiguityMode { NoAmbiguity, MeanReturn, Volatility, Structured };

// Drift coefficient of the preference process evaluated at the worst case:
//   f = g^2 sigma*^2 / (2 (kappa-1))
//     + kappa/(kappa-1) * [ (mu*-r)^2 / (2 sigma*^2) + (mu*-r) g ].
// Zeroes both the constraint residual and the optimal drift rate.
double drift_coefficient_f(AmbiguityMode mode, const WorstCase& worst, double kappa,
                           double g_t, double r);

}  // namespace rfp
