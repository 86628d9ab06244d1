#pragma once

#include <optional>

#include "rfp/model.hpp"

// Closed-form worst-case belief selectors for the three ambiguity settings,
// a generic grid minimax oracle, and the characteristic-constraint residual.

namespace rfp {

enum class Branch { LowerBound, Interior, UpperBound };

struct WorstCase {
    double mu_star;
    double sigma_sq_star;
    std::optional<double> z_star;  // structured variant only
    Branch branch;
    Premiums premiums_at_star;
    // Set when every point of the ambiguity set is optimal (mu == r with
    // g == 0 under volatility ambiguity); the upper bound is returned.
    bool degenerate = false;
};

// Coefficients of the structured objective
//   f_hat(z) = [a z + b / (2 (sigma0_sq + coupling z)) + c] / (kappa - 1).
struct StructuredCoefficients {
    double a;
    double b;  // kappa (mu0 - sigma0_sq/coupling)^2 >= 0
    double c;
};

// Worst-case mean return over [mu_lo, mu_hi] with fixed sigma. The interior
// value r - g sigma^2 zeroes the total risk premium; boundary equality is
// classified as Interior.
WorstCase worst_case_mean_return(const MeanReturnInterval& spec, double g_t, double r);

// Worst-case squared volatility over [sigma_sq_lo, sigma_sq_hi] with fixed mu.
WorstCase worst_case_volatility(const VolatilityInterval& spec, double g_t, double kappa,
                                double r);

// paper_form selects the published variant of the linear coefficient
// (see structured_coefficients in worst_case.cpp for the discrepancy).
StructuredCoefficients structured_coefficients(const StructuredAmbiguity& spec, double kappa,
                                               double g_t, bool paper_form = false);

WorstCase worst_case_structured(const StructuredAmbiguity& spec, double kappa, double g_t,
                                double r, bool paper_form = false);

// Dispatches to the closed-form selector for the three analytic variants;
// the rectangle variant is resolved through the grid oracle.
WorstCase solve_worst_case(const AmbiguitySpec& spec, double kappa, double g_t, double r,
                           bool paper_form = false);

// Objective value and curvature of the structured maximization, exposed for
// plot data and concavity checks.
double structured_objective(const StructuredAmbiguity& spec, double kappa, double g_t, double z,
                            bool paper_form = false);
double structured_objective_second_derivative(const StructuredAmbiguity& spec, double kappa,
                                              double g_t, double z, bool paper_form = false);

struct ThetaSample {
    double mu;
    double sigma_sq;
    std::optional<double> z;
};

// Uniform discretization of the ambiguity set, endpoints included; n points
// per axis (so n^2 samples for the rectangle variant).
std::vector<ThetaSample> sample_theta(const AmbiguitySpec& spec, double r, int n);

struct GridMinimaxResult {
    double pi_star;
    WorstCase worst;
    double value;          // inf-sup value; ~0 when f_t is consistent
    double value_sup_inf;  // max over the pi grid of the inner theta-minimum
    double value_inf_sup;  // min over the theta grid of the closed-form pi-maximum
};

// Brute-force saddle search over a discretized ambiguity set. The inner
// sup over pi is closed form (quadratic); sup-inf and inf-sup are computed
// separately so a failed exchange shows up as a gap between the two values.
GridMinimaxResult grid_minimax_oracle(const AmbiguitySpec& spec, double kappa, double g_t,
                                      double r, int theta_resolution, double pi_lo,
                                      double pi_hi, double f_t = 0.0);

// CRRA instance of the characteristic constraint: the drift rate at the
// solved point. Consistent (f, mu*, sigma*, pi*) gives |residual| < 1e-12.
double constraint_residual(const WorstCase& worst, double pi_star, double kappa, double g_t,
                           double f_t, double r);

// True for the one published structured scenario whose reported optimal
// fraction disagrees with the strategy formula (see worst_case.cpp).
bool matches_known_erratum(const StructuredAmbiguity& spec, double kappa, double g_t);

}  // namespace rfp
