#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "rfp/model.hpp"
#include "rfp/simulate.hpp"

// Flat key-value scenario files with dotted section prefixes, e.g.
//
//   market.r = 0.0
//   preference.kappa = 0.4
//   preference.g = 0.1              # or segments "0:0.1, 1:0.2"
//   ambiguity.kind = structured
//   ambiguity.mu0 = 0.02
//   ...
//   simulation.horizon = 1.0        # optional block
//
// Parse failures carry the offending line and key.

namespace rfp {

class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(int line, std::string key, const std::string& message)
        : std::runtime_error("scenario:" + std::to_string(line) + ": key '" + key + "': " +
                             message),
          line_(line),
          key_(std::move(key)) {}

    int line() const { return line_; }
    const std::string& key() const { return key_; }

  private:
    int line_;
    std::string key_;
};

struct Scenario {
    MarketParams market;
    CrraPreference preference;  // f left unset; populated by the solver
    AmbiguitySpec ambiguity;
    std::optional<SimConfig> simulation;
    std::optional<double> f_override;        // override.f, for verification demos
    std::optional<double> mu_star_override;  // override.mu_star
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);  // throws on I/O failure

}  // namespace rfp
