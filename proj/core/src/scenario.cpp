#include "rfp/scenario.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace rfp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct RawEntry {
    std::string value;
    int line;
    bool used = false;
};

double parse_number(const std::string& key, const RawEntry& e) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        throw ScenarioError(e.line, key, "not a number: '" + e.value + "'");
    }
    if (pos != e.value.size())
        throw ScenarioError(e.line, key, "trailing characters in number: '" + e.value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const RawEntry& e) {
    std::size_t pos = 0;
    unsigned long long v;
    try {
        v = std::stoull(e.value, &pos);
    } catch (const std::exception&) {
        throw ScenarioError(e.line, key, "not an unsigned integer: '" + e.value + "'");
    }
    if (pos != e.value.size())
        throw ScenarioError(e.line, key, "trailing characters in integer: '" + e.value + "'");
    return v;
}

int parse_int(const std::string& key, const RawEntry& e) {
    const double v = parse_number(key, e);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ScenarioError(e.line, key, "expected an integer, got '" + e.value + "'");
    return i;
}

// Scalar value or "t0:v0, t1:v1, ..." segment list with t0 == 0.
PiecewiseConstant parse_piecewise(const std::string& key, const RawEntry& e) {
    if (e.value.find(':') == std::string::npos)
        return PiecewiseConstant(parse_number(key, e));
    std::vector<double> knots, values;
    std::stringstream ss(e.value);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        const std::size_t colon = part.find(':');
        if (colon == std::string::npos)
            throw ScenarioError(e.line, key, "segment '" + part + "' is not 't:value'");
        try {
            knots.push_back(std::stod(part.substr(0, colon)));
            values.push_back(std::stod(part.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ScenarioError(e.line, key, "bad segment '" + part + "'");
        }
    }
    try {
        return PiecewiseConstant(std::move(knots), std::move(values));
    } catch (const std::exception& ex) {
        throw ScenarioError(e.line, key, ex.what());
    }
}

class EntryMap {
  public:
    explicit EntryMap(std::map<std::string, RawEntry>&& entries) : entries_(std::move(entries)) {}

    const RawEntry* find(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    const RawEntry& require(const std::string& key) {
        const RawEntry* e = find(key);
        if (!e) throw ScenarioError(0, key, "required key missing");
        return *e;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.used) throw ScenarioError(entry.line, key, "unknown key");
    }

  private:
    std::map<std::string, RawEntry> entries_;
};

AmbiguitySpec parse_ambiguity(EntryMap& m) {
    const RawEntry& kind_entry = m.require("ambiguity.kind");
    const std::string kind = trim(kind_entry.value);
    auto num = [&](const char* key) { return parse_number(key, m.require(key)); };
    try {
        if (kind == "mean_return") {
            MeanReturnInterval s{num("ambiguity.mu_lo"), num("ambiguity.mu_hi"),
                                 num("ambiguity.sigma")};
            validate(s);
            return s;
        }
        if (kind == "volatility") {
            VolatilityInterval s{num("ambiguity.sigma_sq_lo"), num("ambiguity.sigma_sq_hi"),
                                 num("ambiguity.mu")};
            validate(s);
            return s;
        }
        if (kind == "structured") {
            StructuredAmbiguity s{num("ambiguity.mu0"), num("ambiguity.sigma0_sq"),
                                  num("ambiguity.coupling"), num("ambiguity.z_lo"),
                                  num("ambiguity.z_hi")};
            validate(s);
            return s;
        }
        if (kind == "rectangle") {
            RectangleAmbiguity s{num("ambiguity.mu_lo"), num("ambiguity.mu_hi"),
                                 num("ambiguity.sigma_sq_lo"), num("ambiguity.sigma_sq_hi")};
            validate(s);
            return s;
        }
    } catch (const std::invalid_argument& ex) {
        throw ScenarioError(kind_entry.line, "ambiguity", ex.what());
    }
    throw ScenarioError(kind_entry.line, "ambiguity.kind",
                        "unknown kind '" + kind +
                            "' (expected mean_return, volatility, structured, rectangle)");
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    std::map<std::string, RawEntry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(lineno, line, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ScenarioError(lineno, key, "empty key");
        if (entries.count(key))
            throw ScenarioError(lineno, key, "duplicate key (first at line " +
                                                 std::to_string(entries[key].line) + ")");
        entries[key] = RawEntry{value, lineno};
    }

    EntryMap m(std::move(entries));
    Scenario sc;

    if (const RawEntry* e = m.find("market.r")) sc.market.risk_free_rate = parse_number("market.r", *e);
    if (const RawEntry* e = m.find("market.s0")) sc.market.spot_price = parse_number("market.s0", *e);
    if (const RawEntry* e = m.find("market.x0")) sc.market.initial_wealth = parse_number("market.x0", *e);
    try {
        sc.market.validate();
    } catch (const std::invalid_argument& ex) {
        throw ScenarioError(0, "market", ex.what());
    }

    sc.preference.kappa = parse_number("preference.kappa", m.require("preference.kappa"));
    sc.preference.g = parse_piecewise("preference.g", m.require("preference.g"));
    try {
        sc.preference.validate();
    } catch (const std::invalid_argument& ex) {
        throw ScenarioError(0, "preference", ex.what());
    }

    sc.ambiguity = parse_ambiguity(m);

    if (m.has("simulation.horizon")) {
        SimConfig cfg;
        cfg.horizon = parse_number("simulation.horizon", m.require("simulation.horizon"));
        cfg.n_steps = m.has("simulation.n_steps")
                          ? parse_int("simulation.n_steps", m.require("simulation.n_steps"))
                          : 16;
        cfg.n_paths = m.has("simulation.n_paths")
                          ? parse_int("simulation.n_paths", m.require("simulation.n_paths"))
                          : 100000;
        cfg.seed = m.has("simulation.seed")
                       ? parse_u64("simulation.seed", m.require("simulation.seed"))
                       : 1;
        cfg.x0 = sc.market.initial_wealth;
        cfg.s0 = sc.market.spot_price;
        try {
            cfg.validate();
        } catch (const std::invalid_argument& ex) {
            throw ScenarioError(0, "simulation", ex.what());
        }
        sc.simulation = cfg;
    }

    if (const RawEntry* e = m.find("override.f")) sc.f_override = parse_number("override.f", *e);
    if (const RawEntry* e = m.find("override.mu_star"))
        sc.mu_star_override = parse_number("override.mu_star", *e);

    m.reject_unused();
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

}  // namespace rfp
