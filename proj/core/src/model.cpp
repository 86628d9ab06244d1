#include "rfp/model.hpp"

#include <algorithm>
#include <cmath>

namespace rfp {

void validate(const MeanReturnInterval& s) {
    if (!(s.mu_lo <= s.mu_hi))
        throw std::invalid_argument("MeanReturnInterval: mu_lo must be <= mu_hi");
    if (!(s.sigma > 0.0))
        throw std::invalid_argument("MeanReturnInterval: sigma must be > 0");
}

void validate(const VolatilityInterval& s) {
    if (!(s.sigma_sq_lo > 0.0))
        throw std::invalid_argument("VolatilityInterval: sigma_sq_lo must be > 0");
    if (!(s.sigma_sq_lo <= s.sigma_sq_hi))
        throw std::invalid_argument("VolatilityInterval: sigma_sq_lo must be <= sigma_sq_hi");
}

void validate(const StructuredAmbiguity& s) {
    if (!(s.z_lo <= s.z_hi))
        throw std::invalid_argument("StructuredAmbiguity: z_lo must be <= z_hi");
    if (!(s.sigma0_sq > 0.0))
        throw std::invalid_argument("StructuredAmbiguity: sigma0_sq must be > 0");
    // sigma^2 = sigma0_sq + coupling*z is affine in z, so checking the
    // endpoints covers the whole interval.
    if (!(s.sigma0_sq + s.coupling * s.z_lo > 0.0) ||
        !(s.sigma0_sq + s.coupling * s.z_hi > 0.0))
        throw std::invalid_argument(
            "StructuredAmbiguity: sigma0_sq + coupling*z must be > 0 on [z_lo, z_hi]");
}

void validate(const RectangleAmbiguity& s) {
    if (!(s.mu_lo <= s.mu_hi))
        throw std::invalid_argument("RectangleAmbiguity: mu_lo must be <= mu_hi");
    if (!(s.sigma_sq_lo > 0.0))
        throw std::invalid_argument("RectangleAmbiguity: sigma_sq_lo must be > 0");
    if (!(s.sigma_sq_lo <= s.sigma_sq_hi))
        throw std::invalid_argument("RectangleAmbiguity: sigma_sq_lo must be <= sigma_sq_hi");
}

void validate(const AmbiguitySpec& s) {
    std::visit([](const auto& v) { validate(v); }, s);
}

PiecewiseConstant::PiecewiseConstant(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.empty() || knots_.size() != values_.size())
        throw std::invalid_argument("PiecewiseConstant: knots/values size mismatch");
    if (knots_.front() != 0.0)
        throw std::invalid_argument("PiecewiseConstant: first knot must be 0");
    if (!std::is_sorted(knots_.begin(), knots_.end()))
        throw std::invalid_argument("PiecewiseConstant: knots must be ascending");
}

double PiecewiseConstant::at(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t idx = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    return values_[idx];
}

CrraUtilityValue crra_utility(double x, double log_scale, double kappa) {
    if (!(x > 0.0)) throw std::domain_error("crra_utility: x must be > 0");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("crra_utility: kappa must be in (0,1)");
    const double scale = std::exp(log_scale);
    const double xk = std::pow(x, kappa);
    return {scale * xk / kappa, scale * xk / x, (kappa - 1.0) * scale * xk / (x * x)};
}

double risk_tolerance(double x, double kappa) {
    if (!(x > 0.0)) throw std::domain_error("risk_tolerance: x must be > 0");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("risk_tolerance: kappa must be in (0,1)");
    return x / (1.0 - kappa);
}

Premiums premiums(double mu, double sigma, double r, double g_t) {
    if (!(sigma > 0.0)) throw std::domain_error("premiums: sigma must be > 0");
    Premiums p;
    p.market = (mu - r) / sigma;
    p.utility = g_t * sigma;
    p.total = p.market + p.utility;
    if (mu != r) p.relative = g_t * sigma * sigma / (mu - r);
    return p;
}

double log_drift_rate(double pi, double mu, double sigma_sq, double r, double kappa,
                      double g_t, double f_t) {
    if (!(sigma_sq > 0.0)) throw std::domain_error("log_drift_rate: sigma_sq must be > 0");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("log_drift_rate: kappa must be in (0,1)");
    return f_t + 0.5 * g_t * g_t * sigma_sq + kappa * (mu - r) * pi +
           kappa * g_t * pi * sigma_sq + 0.5 * kappa * (kappa - 1.0) * pi * pi * sigma_sq;
}

Characteristics crra_characteristics(double x, double log_scale, double kappa, double g_t,
                                     double f_t) {
    const double u = crra_utility(x, log_scale, kappa).u;
    return {u * f_t, 0.0, 0.5 * u * g_t * g_t, u * g_t};
}

}  // namespace rfp
