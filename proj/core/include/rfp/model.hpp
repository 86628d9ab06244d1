#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

// Domain types and pointwise quantities for a one-asset market with a
// CRRA-type forward performance process: utility derivatives, risk
// premiums, and the drift rate of the performance process along a
// controlled wealth path.

namespace rfp {

struct MarketParams {
    double risk_free_rate = 0.0;
    double spot_price = 1.0;
    double initial_wealth = 1.0;

    void validate() const {
        if (!(spot_price > 0.0))
            throw std::invalid_argument("MarketParams: spot_price must be > 0");
        if (!(initial_wealth > 0.0))
            throw std::invalid_argument("MarketParams: initial_wealth must be > 0");
    }
};

// Ambiguity set variants. Intervals are closed; the structured variant
// couples return and volatility through a single parameter z:
//   sigma^2 = sigma0_sq + coupling * z,   mu - r = mu0 + z,  z in [z_lo, z_hi].
struct MeanReturnInterval {
    double mu_lo;
    double mu_hi;
    double sigma;  // fixed volatility
};

struct VolatilityInterval {
    double sigma_sq_lo;
    double sigma_sq_hi;
    double mu;  // fixed mean return
};

struct StructuredAmbiguity {
    double mu0;
    double sigma0_sq;
    double coupling;  // sign determines whether return and volatility move together
    double z_lo;
    double z_hi;
};

// Generic rectangle, used by the grid minimax oracle.
struct RectangleAmbiguity {
    double mu_lo;
    double mu_hi;
    double sigma_sq_lo;
    double sigma_sq_hi;
};

using AmbiguitySpec =
    std::variant<MeanReturnInterval, VolatilityInterval, StructuredAmbiguity, RectangleAmbiguity>;

// Throws std::invalid_argument on a malformed set. For the structured
// variant this enforces sigma0_sq + coupling*z > 0 over the whole z range.
void validate(const MeanReturnInterval& s);
void validate(const VolatilityInterval& s);
void validate(const StructuredAmbiguity& s);
void validate(const RectangleAmbiguity& s);
void validate(const AmbiguitySpec& s);

// Piecewise-constant right-continuous function of time on [0, inf).
// knots[0] must be 0; values[i] applies on [knots[i], knots[i+1]).
class PiecewiseConstant {
  public:
    PiecewiseConstant() : knots_{0.0}, values_{0.0} {}
    explicit PiecewiseConstant(double constant) : knots_{0.0}, values_{constant} {}
    PiecewiseConstant(std::vector<double> knots, std::vector<double> values);

    double at(double t) const;
    std::size_t segments() const { return values_.size(); }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

// CRRA preference with exponent kappa in (0,1). The drift coefficient f
// is derived by the strategy module, never set directly by users.
struct CrraPreference {
    double kappa;
    PiecewiseConstant g;
    std::optional<PiecewiseConstant> f;
    double log_scale_init = 0.0;  // alpha(0), fixed at 0

    void validate() const {
        if (!(kappa > 0.0 && kappa < 1.0))
            throw std::invalid_argument("CrraPreference: kappa must be in (0,1)");
        if (log_scale_init != 0.0)
            throw std::invalid_argument("CrraPreference: log_scale_init must be 0");
    }
    bool has_f() const { return f.has_value(); }
};

struct Premiums {
    double market;   // (mu - r) / sigma
    double utility;  // g * sigma
    double total;    // market + utility
    std::optional<double> relative;  // g * sigma^2 / (mu - r); absent when mu == r
};

// Local characteristics of the performance flow evaluated pointwise.
struct Characteristics {
    double beta;
    double delta;
    double gamma;
    double eta;
};

struct CrraUtilityValue {
    double u;
    double u_x;
    double u_xx;
};

// u(x) = exp(log_scale) * x^kappa / kappa with first and second wealth
// derivatives. Requires x > 0.
CrraUtilityValue crra_utility(double x, double log_scale, double kappa);

// -u_x / u_xx = x / (1 - kappa); independent of log_scale.
double risk_tolerance(double x, double kappa);

Premiums premiums(double mu, double sigma, double r, double g_t);

// Drift rate lambda of U(t, X_t^pi), normalized by U > 0:
//   lambda = f + g^2 sigma^2 / 2 + kappa (mu - r) pi
//          + kappa g pi sigma^2 + kappa (kappa - 1) pi^2 sigma^2 / 2.
double log_drift_rate(double pi, double mu, double sigma_sq, double r, double kappa,
                      double g_t, double f_t);

// Characteristics of the CRRA flow at (x, log_scale):
// beta = U f, gamma = U g^2 / 2, delta = 0, eta = U g.
Characteristics crra_characteristics(double x, double log_scale, double kappa, double g_t,
                                     double f_t);

}  // namespace rfp
