// Command-line front end: worst-case beliefs, optimal fractions, table and
// curve reproduction, path simulation, and verification reports.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 I/O error.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfp/model.hpp"
#include "rfp/scenario.hpp"
#include "rfp/simulate.hpp"
#include "rfp/strategy.hpp"
#include "rfp/worst_case.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

std::string fmt4(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << v;
    return ss.str();
}

std::string full(double v) {
    std::ostringstream ss;
    ss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return ss.str();
}

const char* branch_name(rfp::Branch b) {
    switch (b) {
        case rfp::Branch::LowerBound: return "LowerBound";
        case rfp::Branch::Interior: return "Interior";
        case rfp::Branch::UpperBound: return "UpperBound";
    }
    return "?";
}

const char* direction_name(rfp::Direction d) {
    switch (d) {
        case rfp::Direction::Long: return "Long";
        case rfp::Direction::Flat: return "Flat";
        case rfp::Direction::Short: return "Short";
    }
    return "?";
}

const char* verdict_name(rfp::Verdict v) {
    switch (v) {
        case rfp::Verdict::Martingale: return "Martingale";
        case rfp::Verdict::Supermartingale: return "Supermartingale";
        case rfp::Verdict::Violated: return "Violated";
    }
    return "?";
}

rfp::AmbiguityMode mode_of(const rfp::AmbiguitySpec& spec) {
    if (std::holds_alternative<rfp::MeanReturnInterval>(spec)) return rfp::AmbiguityMode::MeanReturn;
    if (std::holds_alternative<rfp::VolatilityInterval>(spec)) return rfp::AmbiguityMode::Volatility;
    if (std::holds_alternative<rfp::StructuredAmbiguity>(spec)) return rfp::AmbiguityMode::Structured;
    return rfp::AmbiguityMode::NoAmbiguity;  // rectangle: solved pointwise
}

struct Solved {
    rfp::WorstCase worst;
    rfp::StrategyResult strategy;
    double f;
    double g0;
    rfp::AmbiguityMode mode;
    bool erratum;
};

Solved solve_scenario(const rfp::Scenario& sc, bool paper_a) {
    Solved out;
    out.g0 = sc.preference.g.at(0.0);
    const double r = sc.market.risk_free_rate;
    out.mode = mode_of(sc.ambiguity);
    out.worst = rfp::solve_worst_case(sc.ambiguity, sc.preference.kappa, out.g0, r, paper_a);
    if (sc.mu_star_override) {
        out.worst.mu_star = *sc.mu_star_override;
        out.worst.premiums_at_star =
            rfp::premiums(out.worst.mu_star, std::sqrt(out.worst.sigma_sq_star), r, out.g0);
    }
    out.f = rfp::drift_coefficient_f(out.mode, out.worst, sc.preference.kappa, out.g0, r);
    if (sc.f_override) out.f = *sc.f_override;
    out.strategy = rfp::optimal_fraction(out.worst, sc.preference.kappa, out.g0, r);
    const auto* structured = std::get_if<rfp::StructuredAmbiguity>(&sc.ambiguity);
    out.erratum =
        structured && rfp::matches_known_erratum(*structured, sc.preference.kappa, out.g0);
    return out;
}

json worst_case_json(const Solved& s) {
    json j;
    j["mu_star"] = s.worst.mu_star;
    j["sigma_sq_star"] = s.worst.sigma_sq_star;
    if (s.worst.z_star) j["z_star"] = *s.worst.z_star;
    j["branch"] = branch_name(s.worst.branch);
    j["degenerate"] = s.worst.degenerate;
    j["premiums"]["market"] = s.worst.premiums_at_star.market;
    j["premiums"]["utility"] = s.worst.premiums_at_star.utility;
    j["premiums"]["total"] = s.worst.premiums_at_star.total;
    if (s.worst.premiums_at_star.relative)
        j["premiums"]["relative"] = *s.worst.premiums_at_star.relative;
    j["erratum"] = s.erratum;
    return j;
}

json strategy_json(const Solved& s) {
    json j;
    j["pi_star"] = s.strategy.pi_star;
    j["myopic"] = s.strategy.myopic;
    j["hedging"] = s.strategy.hedging;
    j["direction"] = direction_name(s.strategy.direction);
    j["total_premium"] = s.strategy.total_premium;
    j["f"] = s.f;
    return j;
}

void print_erratum_warning(std::ostream& os, const Solved& s) {
    if (!s.erratum) return;
    os << "warning: the published optimal fraction for this scenario is -0.0795, which is\n"
          "inconsistent with the strategy formula at z* = -0.08 (sigma*^2 = 0.06); the\n"
          "derived value " << fmt4(s.strategy.pi_star) << " is reported instead.\n";
}

std::ostream& open_out(std::ofstream& file, const std::string& out_path) {
    if (out_path.empty()) return std::cout;
    file.open(out_path);
    if (!file) throw std::ios_base::failure("cannot open output file: " + out_path);
    return file;
}

int cmd_worst_case(const std::string& scenario_path, bool as_json, bool paper_a) {
    const rfp::Scenario sc = rfp::parse_scenario_file(scenario_path);
    const Solved s = solve_scenario(sc, paper_a);
    if (as_json) {
        std::cout << worst_case_json(s).dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "mu_star        = " << fmt4(s.worst.mu_star) << "\n";
    std::cout << "sigma_sq_star  = " << fmt4(s.worst.sigma_sq_star) << "\n";
    if (s.worst.z_star) std::cout << "z_star         = " << fmt4(*s.worst.z_star) << "\n";
    std::cout << "branch         = " << branch_name(s.worst.branch) << "\n";
    if (s.worst.degenerate) std::cout << "degenerate     = true\n";
    std::cout << "premium.market = " << fmt4(s.worst.premiums_at_star.market) << "\n";
    std::cout << "premium.utility= " << fmt4(s.worst.premiums_at_star.utility) << "\n";
    std::cout << "premium.total  = " << fmt4(s.worst.premiums_at_star.total) << "\n";
    if (s.worst.premiums_at_star.relative)
        std::cout << "premium.rel    = " << fmt4(*s.worst.premiums_at_star.relative) << "\n";
    print_erratum_warning(std::cout, s);
    return kExitOk;
}

int cmd_strategy(const std::string& scenario_path, bool as_json, bool paper_a) {
    const rfp::Scenario sc = rfp::parse_scenario_file(scenario_path);
    const Solved s = solve_scenario(sc, paper_a);
    if (as_json) {
        std::cout << strategy_json(s).dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "pi_star       = " << fmt4(s.strategy.pi_star) << "\n";
    std::cout << "myopic        = " << fmt4(s.strategy.myopic) << "\n";
    std::cout << "hedging       = " << fmt4(s.strategy.hedging) << "\n";
    std::cout << "direction     = " << direction_name(s.strategy.direction) << "\n";
    std::cout << "total_premium = " << fmt4(s.strategy.total_premium) << "\n";
    std::cout << "f             = " << fmt4(s.f) << "\n";
    print_erratum_warning(std::cout, s);
    return kExitOk;
}

int cmd_table(const std::string& out_path, bool paper_a) {
    // Default structured scenarios: kappa = 0.4, mu0 = 0.02, sigma0^2 = 0.1,
    // g = 0.1, r = 0 (only mu - r is determined, so r is a display choice).
    const double kappa = 0.4, mu0 = 0.02, sigma0_sq = 0.1, g = 0.1, r = 0.0;
    struct Row {
        double z1, z2, coupling;
    };
    const Row rows[] = {{-0.15, -0.08, 0.5}, {-0.08, 0.07, 0.5},  {0.02, 0.12, 0.5},
                        {-0.15, -0.08, -0.5}, {-0.08, 0.07, -0.5}, {0.02, 0.12, -0.5}};

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    os << "z1,z2,coupling,z_star,mu_star_minus_r,sigma_sq_star,pi_star,premium_sign,erratum_flag\n";
    for (const Row& row : rows) {
        const rfp::StructuredAmbiguity spec{mu0, sigma0_sq, row.coupling, row.z1, row.z2};
        const rfp::WorstCase wc = rfp::worst_case_structured(spec, kappa, g, r, paper_a);
        const rfp::StrategyResult st = rfp::optimal_fraction(wc, kappa, g, r);
        const bool erratum = rfp::matches_known_erratum(spec, kappa, g);
        os << full(row.z1) << ',' << full(row.z2) << ',' << full(row.coupling) << ','
           << full(*wc.z_star) << ',' << full(wc.mu_star - r) << ',' << full(wc.sigma_sq_star)
           << ',' << full(st.pi_star) << ',' << (st.total_premium >= 0 ? '+' : '-') << ','
           << (erratum ? "true" : "false") << "\n";
    }
    return kExitOk;
}

int cmd_curve(const std::string& scenario_path, int grid, const std::string& out_path,
              bool paper_a) {
    const rfp::Scenario sc = rfp::parse_scenario_file(scenario_path);
    const auto* spec = std::get_if<rfp::StructuredAmbiguity>(&sc.ambiguity);
    if (!spec) {
        std::cerr << "error: curve requires a structured ambiguity scenario\n";
        return kExitInput;
    }
    const double g0 = sc.preference.g.at(0.0);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    os << "z,f_hat,f_hat_second_derivative\n";
    for (int i = 0; i < grid; ++i) {
        const double z =
            spec->z_lo + (spec->z_hi - spec->z_lo) * static_cast<double>(i) / (grid - 1);
        os << full(z) << ','
           << full(rfp::structured_objective(*spec, sc.preference.kappa, g0, z, paper_a)) << ','
           << full(rfp::structured_objective_second_derivative(*spec, sc.preference.kappa, g0, z,
                                                               paper_a))
           << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path, bool as_json,
                 bool euler, double pi_scale, bool paper_a) {
    const rfp::Scenario sc = rfp::parse_scenario_file(scenario_path);
    if (!sc.simulation) {
        std::cerr << "error: scenario has no simulation block\n";
        return kExitInput;
    }
    Solved s = solve_scenario(sc, paper_a);

    rfp::CrraPreference pref = sc.preference;
    pref.f = rfp::PiecewiseConstant(s.f);
    const double pi = s.strategy.pi_star * pi_scale;
    const auto stepping = euler ? rfp::Stepping::Euler : rfp::Stepping::Exact;

    if (!out_path.empty()) {
        const rfp::PathBundle paths =
            rfp::simulate_paths(*sc.simulation, s.worst.mu_star,
                                std::sqrt(s.worst.sigma_sq_star), sc.market.risk_free_rate, pi,
                                pref, stepping);
        std::ofstream file;
        std::ostream& os = open_out(file, out_path);
        os << "path_id,t,S,X,alpha,U\n";
        for (int i = 0; i < paths.n_paths; ++i)
            for (int j = 0; j <= paths.n_steps; ++j)
                os << i << ',' << full(paths.time_grid[j]) << ',' << full(paths.at(paths.asset, i, j))
                   << ',' << full(paths.at(paths.wealth, i, j)) << ','
                   << full(paths.at(paths.log_scale, i, j)) << ','
                   << full(paths.at(paths.performance, i, j)) << "\n";
    }

    const rfp::MartingaleReport rep =
        rfp::martingale_test(*sc.simulation, pi, s.worst, pref, sc.market.risk_free_rate, stepping);
    if (as_json) {
        json j;
        j["analytic_exponent"] = rep.analytic_exponent;
        j["mc_mean_ratio"] = rep.mc_mean_ratio;
        j["mc_std_error"] = rep.mc_std_error;
        j["verdict"] = verdict_name(rep.verdict);
        j["pi"] = pi;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "pi                = " << fmt4(pi) << "\n";
        std::cout << "analytic_exponent = " << fmt4(rep.analytic_exponent) << "\n";
        std::cout << "mc_mean_ratio     = " << fmt4(rep.mc_mean_ratio) << "\n";
        std::cout << "mc_std_error      = " << full(rep.mc_std_error) << "\n";
        std::cout << "verdict           = " << verdict_name(rep.verdict) << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& scenario_path, int grid, bool as_json, bool paper_a) {
    const rfp::Scenario sc = rfp::parse_scenario_file(scenario_path);
    const Solved s = solve_scenario(sc, paper_a);
    const double r = sc.market.risk_free_rate;
    const double kappa = sc.preference.kappa;
    bool all_ok = true;
    json checks = json::array();

    auto record = [&](const std::string& name, bool ok, const std::string& detail) {
        all_ok = all_ok && ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
    };

    // 1. Characteristic-constraint residual at the solved point.
    const double residual =
        rfp::constraint_residual(s.worst, s.strategy.pi_star, kappa, s.g0, s.f, r);
    record("constraint_residual", std::abs(residual) < 1e-12, "residual = " + full(residual));

    // 2. Grid minimax cross-check.
    const double half = std::abs(s.strategy.pi_star) + 1.0;
    const rfp::GridMinimaxResult gm =
        rfp::grid_minimax_oracle(sc.ambiguity, kappa, s.g0, r, grid,
                                 s.strategy.pi_star - half, s.strategy.pi_star + half, s.f);
    {
        bool ok = std::abs(gm.value) < 1e-6;
        // The grid optimizer must sit within one grid step of the closed form.
        const auto samples = rfp::sample_theta(sc.ambiguity, r, 2);
        double mu_span = 0.0, ssq_span = 0.0;
        for (const auto& th : samples) {
            mu_span = std::max(mu_span, std::abs(th.mu - samples.front().mu));
            ssq_span = std::max(ssq_span, std::abs(th.sigma_sq - samples.front().sigma_sq));
        }
        ok = ok && std::abs(gm.worst.mu_star - s.worst.mu_star) <= mu_span / (grid - 1) + 1e-12;
        ok = ok &&
             std::abs(gm.worst.sigma_sq_star - s.worst.sigma_sq_star) <= ssq_span / (grid - 1) + 1e-12;
        record("grid_minimax", ok,
               "value = " + full(gm.value) + ", grid mu* = " + full(gm.worst.mu_star) +
                   ", grid sigma*^2 = " + full(gm.worst.sigma_sq_star));
    }

    // 3. Saddle-sign sweep.
    {
        const int sweep_n = 500;
        double min_at_pi_star = std::numeric_limits<double>::max();
        for (const auto& th : rfp::sample_theta(sc.ambiguity, r, sweep_n))
            min_at_pi_star = std::min(min_at_pi_star,
                                      rfp::log_drift_rate(s.strategy.pi_star, th.mu, th.sigma_sq,
                                                          r, kappa, s.g0, s.f));
        double max_inner = std::numeric_limits<double>::lowest();
        const auto thetas = rfp::sample_theta(sc.ambiguity, r, sweep_n);
        for (int i = 0; i < sweep_n; ++i) {
            const double pi = s.strategy.pi_star - half +
                              2.0 * half * static_cast<double>(i) / (sweep_n - 1);
            double inner = std::numeric_limits<double>::max();
            for (const auto& th : thetas)
                inner = std::min(inner,
                                 rfp::log_drift_rate(pi, th.mu, th.sigma_sq, r, kappa, s.g0, s.f));
            max_inner = std::max(max_inner, inner);
        }
        const bool ok = min_at_pi_star >= -1e-12 && max_inner <= 1e-12;
        record("saddle_signs", ok,
               "min_theta lambda(pi*, theta) = " + full(min_at_pi_star) +
                   ", max_pi inf_theta lambda = " + full(max_inner));
    }

    // 4. Monte Carlo martingale check, when a simulation block is present.
    if (sc.simulation) {
        rfp::CrraPreference pref = sc.preference;
        pref.f = rfp::PiecewiseConstant(s.f);
        try {
            const rfp::MartingaleReport rep =
                rfp::martingale_test(*sc.simulation, s.strategy.pi_star, s.worst, pref, r);
            record("martingale", rep.verdict == rfp::Verdict::Martingale,
                   std::string("verdict = ") + verdict_name(rep.verdict) + ", mean ratio = " +
                       full(rep.mc_mean_ratio) + " +- " + full(rep.mc_std_error));
        } catch (const std::invalid_argument& ex) {
            record("martingale", false, ex.what());
        }
    }

    if (as_json) {
        json j;
        j["checks"] = checks;
        j["ok"] = all_ok;
        std::cout << j.dump(2) << "\n";
    }
    return all_ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust forward-performance worst-case beliefs and optimal fractions"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    bool as_json = false, paper_a = false, euler = false;
    int grid = 2000;
    int curve_grid = 201;
    double pi_scale = 1.0;

    auto* wc = app.add_subcommand("worst-case", "Worst-case belief for a scenario");
    wc->add_option("--scenario", scenario_path, "Scenario file")->required();
    wc->add_flag("--json", as_json, "Emit JSON");
    wc->add_flag("--paper-a", paper_a, "Use the published linear coefficient");

    auto* st = app.add_subcommand("strategy", "Optimal fraction for a scenario");
    st->add_option("--scenario", scenario_path, "Scenario file")->required();
    st->add_flag("--json", as_json, "Emit JSON");
    st->add_flag("--paper-a", paper_a, "Use the published linear coefficient");

    auto* tb = app.add_subcommand("table", "Regenerate the default structured-scenario table");
    tb->add_option("--out", out_path, "CSV output path (default stdout)");
    tb->add_flag("--paper-a", paper_a, "Use the published linear coefficient");

    auto* cv = app.add_subcommand("curve", "Structured objective curve as CSV");
    cv->add_option("--scenario", scenario_path, "Scenario file")->required();
    cv->add_option("--grid", curve_grid, "Number of curve points");
    cv->add_option("--out", out_path, "CSV output path (default stdout)");
    cv->add_flag("--paper-a", paper_a, "Use the published linear coefficient");

    auto* sim = app.add_subcommand("simulate", "Simulate paths and run the martingale test");
    sim->add_option("--scenario", scenario_path, "Scenario file")->required();
    sim->add_option("--out", out_path, "Path CSV output file");
    sim->add_flag("--json", as_json, "Emit JSON report");
    sim->add_flag("--euler", euler, "Euler stepping instead of exact lognormal");
    sim->add_option("--pi-scale", pi_scale, "Scale applied to the optimal fraction");
    sim->add_flag("--paper-a", paper_a, "Use the published linear coefficient");

    auto* vf = app.add_subcommand("verify", "Run all optimality checks for a scenario");
    vf->add_option("--scenario", scenario_path, "Scenario file")->required();
    vf->add_option("--grid", grid, "Grid oracle resolution");
    vf->add_flag("--json", as_json, "Emit JSON report");
    vf->add_flag("--paper-a", paper_a, "Use the published linear coefficient");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (wc->parsed()) return cmd_worst_case(scenario_path, as_json, paper_a);
        if (st->parsed()) return cmd_strategy(scenario_path, as_json, paper_a);
        if (tb->parsed()) return cmd_table(out_path, paper_a);
        if (cv->parsed()) return cmd_curve(scenario_path, curve_grid, out_path, paper_a);
        if (sim->parsed())
            return cmd_simulate(scenario_path, out_path, as_json, euler, pi_scale, paper_a);
        if (vf->parsed()) return cmd_verify(scenario_path, grid, as_json, paper_a);
    } catch (const rfp::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    }
    return kExitOk;
}
