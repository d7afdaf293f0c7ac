#include "vpbgk/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "vpbgk/errors.hpp"

namespace vpbgk {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an unsigned integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Scenario parse_scenario(const std::string& v) {
    if (v == "sod2d") return Scenario::Sod2D;
    if (v == "kelvin-helmholtz") return Scenario::KelvinHelmholtz;
    if (v == "custom") return Scenario::Custom;
    throw ConfigError("config key 'scenario': unknown scenario '" + v + "'");
}

ControlMethod parse_method(const std::string& v) {
    if (v == "pointwise-limit") return ControlMethod::PointwiseLimit;
    if (v == "pointwise-discrete") return ControlMethod::PointwiseDiscrete;
    if (v == "cellwise") return ControlMethod::Cellwise;
    if (v == "fixed") return ControlMethod::Fixed;
    throw ConfigError("config key 'control.method': unknown method '" + v + "'");
}

StatOperatorKind parse_operator(const std::string& v) {
    if (v == "worst-case") return StatOperatorKind::WorstCase;
    if (v == "expectation") return StatOperatorKind::Expectation;
    throw ConfigError("config key 'control.operator': unknown operator '" + v + "'");
}

SodTempProfile parse_temp_profile(const std::string& v) {
    if (v == "base") return SodTempProfile::Base;
    if (v == "high10") return SodTempProfile::High10;
    if (v == "high50") return SodTempProfile::High50;
    if (v == "high100") return SodTempProfile::High100;
    throw ConfigError("config key 'sod.temp_profile': unknown profile '" + v + "'");
}

// Scenario-dependent defaults. Everything else keeps the struct initializers.
void apply_scenario_defaults(ScenarioConfig& c) {
    switch (c.scenario) {
    case Scenario::Sod2D:
        c.domain = {0.0, 1.5, 0.0, 1.5};
        c.h = 0.05;
        c.t_final = 2.0;
        c.band = {0.0, 0.234, 1.476, 1.5};
        c.control.y_target = 0.75;
        c.control.max_field = 50.0;
        break;
    case Scenario::KelvinHelmholtz:
        c.domain = {0.0, 40.0, -5.0, 5.0};
        c.h = 0.5;
        c.t_final = 250.0;
        c.band = {-5.0, -4.8, 4.8, 5.0};
        c.control.y_target = 0.0;
        c.control.max_field = 100.0;
        c.control.fixed_b = 1.2;
        break;
    case Scenario::Custom:
        break;
    }
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"scenario", [](ScenarioConfig& c, const std::string&, const std::string& v) {
             c.scenario = parse_scenario(v);
             apply_scenario_defaults(c);
         }},
        {"n_particles", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.n_particles = parse_long(k, v); }},
        {"h", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.h = parse_double(k, v); }},
        {"t_final", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.t_final = parse_double(k, v); }},
        {"seed", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
        {"threads", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.threads = static_cast<unsigned>(parse_long(k, v)); }},

        {"domain.x_min", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.domain.x_min = parse_double(k, v); }},
        {"domain.x_max", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.domain.x_max = parse_double(k, v); }},
        {"domain.y_min", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.domain.y_min = parse_double(k, v); }},
        {"domain.y_max", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.domain.y_max = parse_double(k, v); }},

        {"mesh.mx", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.mx = static_cast<int>(parse_long(k, v)); }},
        {"mesh.my", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.my = static_cast<int>(parse_long(k, v)); }},

        {"collision.nu", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.collision.nu = parse_double(k, v); }},
        {"collision.conserve_cell_moments", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.collision.conserve_cell_moments = parse_bool(k, v); }},

        {"control.method", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.control.method = parse_method(v); }},
        {"control.operator", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.control.op = parse_operator(v); }},
        {"control.alpha_x", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.alpha_x = parse_double(k, v); }},
        {"control.beta_x", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.beta_x = parse_double(k, v); }},
        {"control.alpha_v", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.alpha_v = parse_double(k, v); }},
        {"control.beta_v", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.beta_v = parse_double(k, v); }},
        {"control.gamma", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.gamma = parse_double(k, v); }},
        {"control.max_field", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.max_field = parse_double(k, v); }},
        {"control.y_target", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.y_target = parse_double(k, v); }},
        {"control.n_cells", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.n_cells = static_cast<int>(parse_long(k, v)); }},
        {"control.fixed_b", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.fixed_b = parse_double(k, v); }},
        {"control.cellwise_limit_form", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.cellwise_limit_form = parse_bool(k, v); }},
        {"control.clamp_particles", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.control.clamp_particles = parse_bool(k, v); }},

        {"collocation.n_z", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.n_z = static_cast<int>(parse_long(k, v)); }},
        {"collocation.fixed_z", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.fixed_z = parse_double(k, v); }},

        {"boundary_band.lower_min", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.band.lower_min = parse_double(k, v); }},
        {"boundary_band.lower_max", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.band.lower_max = parse_double(k, v); }},
        {"boundary_band.upper_min", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.band.upper_min = parse_double(k, v); }},
        {"boundary_band.upper_max", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.band.upper_max = parse_double(k, v); }},

        {"sod.temp_profile", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.sod.temp_profile = parse_temp_profile(v); }},

        {"kh.k0", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.kh.k0 = parse_double(k, v); }},
        {"kh.eps0", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.kh.eps0 = parse_double(k, v); }},
        {"kh.eps1", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.kh.eps1 = parse_double(k, v); }},
        {"kh.ux", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.kh.ux = parse_double(k, v); }},

        {"custom.t0", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.custom.t0 = parse_double(k, v); }},
        {"custom.t_slope", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.custom.t_slope = parse_double(k, v); }},
        {"custom.ux", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.custom.ux = parse_double(k, v); }},
        {"custom.uy", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.custom.uy = parse_double(k, v); }},
        {"custom.density", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.custom.density = parse_double(k, v); }},

        {"output.dir", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.output.dir = v; }},
        {"output.snapshot_times", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.output.snapshot_times.clear();
             for (const auto& s : split_list(v)) c.output.snapshot_times.push_back(parse_double(k, s));
         }},
        {"output.write_snapshots", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.output.write_snapshots = parse_bool(k, v); }},
        {"output.write_moments", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.output.write_moments = parse_bool(k, v); }},

        {"sweep.members", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.sweep.members.clear();
             for (const auto& s : split_list(v)) c.sweep.members.push_back(static_cast<int>(parse_long(k, s)));
         }},
        {"sweep.ref", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.sweep.ref = static_cast<int>(parse_long(k, v)); }},
        {"sweep.t_final", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.sweep.t_final = parse_double(k, v); }},

        {"compare.variants", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.compare.variants = split_list(v); }},
    };
    return table;
}

void apply_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key: '" + key + "'");
    it->second(cfg, key, value);
}

} // namespace

std::map<std::string, std::string> parse_ini(const std::string& text) {
    std::map<std::string, std::string> out;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        out[section.empty() ? key : section + "." + key] = value;
    }
    return out;
}

ScenarioConfig config_from_entries(const std::map<std::string, std::string>& entries,
                                   const std::vector<std::string>& overrides) {
    ScenarioConfig cfg;
    // Scenario first so its defaults do not clobber explicit file values.
    if (auto it = entries.find("scenario"); it != entries.end())
        apply_entry(cfg, "scenario", it->second);
    else
        apply_scenario_defaults(cfg);
    for (const auto& [key, value] : entries) {
        if (key == "scenario") continue;
        apply_entry(cfg, key, value);
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "': expected key=value");
        apply_entry(cfg, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_entries(parse_ini(buf.str()), overrides);
}

long ScenarioConfig::step_count() const {
    return std::max(1L, std::lround(t_final / h));
}

void ScenarioConfig::validate() const {
    domain.validate();
    if (n_particles < 1) throw ConfigError("n_particles >= 1 required");
    if (!(h > 0.0)) throw ConfigError("h > 0 required");
    if (!(t_final >= h)) throw ConfigError("t_final >= h required");
    if (mx < 2 || my < 2) throw ConfigError("mesh: mx, my >= 2 required");
    if (collision.nu < 0.0) throw ConfigError("collision.nu >= 0 required");
    if (!(control.gamma > 0.0)) throw ConfigError("control.gamma > 0 required");
    if (!(control.max_field > 0.0)) throw ConfigError("control.max_field > 0 required");
    if (control.n_cells < 1) throw ConfigError("control.n_cells >= 1 required");
    if (control.alpha_x < 0.0 || control.alpha_v < 0.0 || control.beta_x < 0.0 || control.beta_v < 0.0)
        throw ConfigError("control weights must be nonnegative");
    if (n_z < 1) throw ConfigError("collocation.n_z >= 1 required");
    if (fixed_z) {
        if (n_z != 1) throw ConfigError("collocation.fixed_z requires n_z = 1");
        if (*fixed_z < 0.0 || *fixed_z > 1.0)
            throw ConfigError("collocation.fixed_z must lie in [0,1]");
    }
    if (band.lower_max < band.lower_min || band.upper_max < band.upper_min)
        throw ConfigError("boundary_band: max < min");
    if (scenario == Scenario::KelvinHelmholtz && std::abs(kh.eps0) >= 1.0)
        throw ConfigError("kh.eps0 must satisfy |eps0| < 1 (density positivity)");
    if (scenario == Scenario::Custom && !(custom.density > 0.0))
        throw ConfigError("custom.density > 0 required");
}

const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::Sod2D: return "sod2d";
    case Scenario::KelvinHelmholtz: return "kelvin-helmholtz";
    case Scenario::Custom: return "custom";
    }
    return "?";
}

const char* to_string(ControlMethod m) {
    switch (m) {
    case ControlMethod::PointwiseLimit: return "pointwise-limit";
    case ControlMethod::PointwiseDiscrete: return "pointwise-discrete";
    case ControlMethod::Cellwise: return "cellwise";
    case ControlMethod::Fixed: return "fixed";
    }
    return "?";
}

const char* to_string(StatOperatorKind k) {
    switch (k) {
    case StatOperatorKind::Expectation: return "expectation";
    case StatOperatorKind::WorstCase: return "worst-case";
    }
    return "?";
}

const char* to_string(SodTempProfile p) {
    switch (p) {
    case SodTempProfile::Base: return "base";
    case SodTempProfile::High10: return "high10";
    case SodTempProfile::High50: return "high50";
    case SodTempProfile::High100: return "high100";
    }
    return "?";
}

std::string to_ini(const ScenarioConfig& c) {
    std::ostringstream os;
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "scenario = " << to_string(c.scenario) << "\n";
    os << "n_particles = " << c.n_particles << "\n";
    os << "h = " << num(c.h) << "\n";
    os << "t_final = " << num(c.t_final) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "threads = " << c.threads << "\n";
    os << "\n[domain]\n";
    os << "x_min = " << num(c.domain.x_min) << "\nx_max = " << num(c.domain.x_max) << "\n";
    os << "y_min = " << num(c.domain.y_min) << "\ny_max = " << num(c.domain.y_max) << "\n";
    os << "\n[mesh]\nmx = " << c.mx << "\nmy = " << c.my << "\n";
    os << "\n[collision]\nnu = " << num(c.collision.nu) << "\n";
    os << "conserve_cell_moments = " << (c.collision.conserve_cell_moments ? "true" : "false") << "\n";
    os << "\n[control]\n";
    os << "method = " << to_string(c.control.method) << "\n";
    os << "operator = " << to_string(c.control.op) << "\n";
    os << "alpha_x = " << num(c.control.alpha_x) << "\nbeta_x = " << num(c.control.beta_x) << "\n";
    os << "alpha_v = " << num(c.control.alpha_v) << "\nbeta_v = " << num(c.control.beta_v) << "\n";
    os << "gamma = " << num(c.control.gamma) << "\n";
    os << "max_field = " << num(c.control.max_field) << "\n";
    os << "y_target = " << num(c.control.y_target) << "\n";
    os << "n_cells = " << c.control.n_cells << "\n";
    os << "fixed_b = " << num(c.control.fixed_b) << "\n";
    os << "cellwise_limit_form = " << (c.control.cellwise_limit_form ? "true" : "false") << "\n";
    os << "clamp_particles = " << (c.control.clamp_particles ? "true" : "false") << "\n";
    os << "\n[collocation]\nn_z = " << c.n_z << "\n";
    if (c.fixed_z) os << "fixed_z = " << num(*c.fixed_z) << "\n";
    os << "\n[boundary_band]\n";
    os << "lower_min = " << num(c.band.lower_min) << "\nlower_max = " << num(c.band.lower_max) << "\n";
    os << "upper_min = " << num(c.band.upper_min) << "\nupper_max = " << num(c.band.upper_max) << "\n";
    if (c.scenario == Scenario::Sod2D)
        os << "\n[sod]\ntemp_profile = " << to_string(c.sod.temp_profile) << "\n";
    if (c.scenario == Scenario::KelvinHelmholtz) {
        os << "\n[kh]\nk0 = " << num(c.kh.k0) << "\neps0 = " << num(c.kh.eps0)
           << "\neps1 = " << num(c.kh.eps1) << "\nux = " << num(c.kh.ux) << "\n";
    }
    if (c.scenario == Scenario::Custom) {
        os << "\n[custom]\nt0 = " << num(c.custom.t0) << "\nt_slope = " << num(c.custom.t_slope)
           << "\nux = " << num(c.custom.ux) << "\nuy = " << num(c.custom.uy)
           << "\ndensity = " << num(c.custom.density) << "\n";
    }
    os << "\n[output]\ndir = " << c.output.dir << "\n";
    os << "write_snapshots = " << (c.output.write_snapshots ? "true" : "false") << "\n";
    os << "write_moments = " << (c.output.write_moments ? "true" : "false") << "\n";
    if (!c.output.snapshot_times.empty()) {
        os << "snapshot_times = ";
        for (std::size_t i = 0; i < c.output.snapshot_times.size(); ++i)
            os << (i ? "," : "") << num(c.output.snapshot_times[i]);
        os << "\n";
    }
    return os.str();
}

} // namespace vpbgk
