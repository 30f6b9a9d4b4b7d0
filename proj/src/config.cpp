#include "moist/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace moist {

namespace {

struct Entry {
  ConfigKeyInfo info;
  std::function<std::string(const Config&)> get;
  std::function<void(Config&, const std::string&)> set;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("expected a number, got '" + v + "'");
  return x;
}

template <class Int = long long>
Int parse_integer(const std::string& v) {
  Int x = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty item in list '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

template <class Ref>
Entry real(std::string section, std::string key, std::string unit, std::string prov, std::string desc, Ref ref) {
  return {{std::move(section), std::move(key), std::move(unit), std::move(prov), std::move(desc)},
          [ref](const Config& c) { return format_double(ref(const_cast<Config&>(c))); },
          [ref](Config& c, const std::string& v) { ref(c) = parse_double(v); }};
}

template <class Ref>
Entry integer(std::string section, std::string key, std::string unit, std::string prov, std::string desc, Ref ref) {
  return {{std::move(section), std::move(key), std::move(unit), std::move(prov), std::move(desc)},
          [ref](const Config& c) { return std::to_string(ref(const_cast<Config&>(c))); },
          [ref](Config& c, const std::string& v) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            ref(c) = parse_integer<T>(v);
          }};
}

template <class Ref>
Entry boolean(std::string section, std::string key, std::string prov, std::string desc, Ref ref) {
  return {{std::move(section), std::move(key), "-", std::move(prov), std::move(desc)},
          [ref](const Config& c) { return std::string(ref(const_cast<Config&>(c)) ? "true" : "false"); },
          [ref](Config& c, const std::string& v) { ref(c) = parse_bool(v); }};
}

template <class Ref>
Entry int_list(std::string section, std::string key, std::string prov, std::string desc, Ref ref) {
  return {{std::move(section), std::move(key), "-", std::move(prov), std::move(desc)},
          [ref](const Config& c) {
            std::string s;
            for (int x : ref(const_cast<Config&>(c))) s += (s.empty() ? "" : ", ") + std::to_string(x);
            return s;
          },
          [ref](Config& c, const std::string& v) {
            std::vector<int> out;
            for (const auto& item : split_list(v)) out.push_back(static_cast<int>(parse_integer(item)));
            ref(c) = out;
          }};
}

template <class Ref>
Entry real_list(std::string section, std::string key, std::string prov, std::string desc, Ref ref) {
  return {{std::move(section), std::move(key), "-", std::move(prov), std::move(desc)},
          [ref](const Config& c) {
            std::string s;
            for (double x : ref(const_cast<Config&>(c))) s += (s.empty() ? "" : ", ") + format_double(x);
            return s;
          },
          [ref](Config& c, const std::string& v) {
            std::vector<double> out;
            for (const auto& item : split_list(v)) out.push_back(parse_double(item));
            ref(c) = out;
          }};
}

template <class E, class Ref>
Entry enumeration(std::string section, std::string key, std::string prov, std::string desc,
                  std::vector<std::pair<std::string, E>> names, Ref ref) {
  std::string choices;
  for (const auto& [n, e] : names) choices += (choices.empty() ? "" : "|") + n;
  return {{std::move(section), std::move(key), choices, std::move(prov), std::move(desc)},
          [ref, names](const Config& c) {
            for (const auto& [n, e] : names)
              if (e == ref(const_cast<Config&>(c))) return n;
            return std::string("?");
          },
          [ref, names, choices](Config& c, const std::string& v) {
            for (const auto& [n, e] : names) {
              if (n == v) {
                ref(c) = e;
                return;
              }
            }
            throw ConfigError("expected one of " + choices + ", got '" + v + "'");
          }};
}

std::vector<Entry> build_table() {
  std::vector<Entry> t;
  const std::string A = "artifact", L = "literature", P = "given";
  // grid
  t.push_back(real("grid", "Lx", "length", A, "horizontal extent in x", [](Config& c) -> double& { return c.sim.Lx; }));
  t.push_back(real("grid", "Ly", "length", A, "horizontal extent in y", [](Config& c) -> double& { return c.sim.Ly; }));
  t.push_back(real("grid", "p1", "Pa", A, "top pressure (Gamma1)", [](Config& c) -> double& { return c.sim.p1; }));
  t.push_back(real("grid", "p0", "Pa", A, "bottom pressure (Gamma0)", [](Config& c) -> double& { return c.sim.p0; }));
  t.push_back(integer("grid", "nx", "cells", A, "cells in x", [](Config& c) -> int& { return c.sim.nx; }));
  t.push_back(integer("grid", "ny", "cells", A, "cells in y", [](Config& c) -> int& { return c.sim.ny; }));
  t.push_back(integer("grid", "nz", "cells", A, "cells in p", [](Config& c) -> int& { return c.sim.nz; }));
  // physics
  t.push_back(real("physics", "R", "J/(kg K)", L, "gas constant of dry air", [](Config& c) -> double& { return c.sim.params.R; }));
  t.push_back(real("physics", "R_v", "J/(kg K)", L, "gas constant of water vapor", [](Config& c) -> double& { return c.sim.params.R_v; }));
  t.push_back(real("physics", "c_p", "J/(kg K)", L, "heat capacity at constant pressure", [](Config& c) -> double& { return c.sim.params.c_p; }));
  t.push_back(real("physics", "L_latent", "J/kg", L, "latent heat of vaporization", [](Config& c) -> double& { return c.sim.params.L_latent; }));
  t.push_back(real("physics", "g", "m/s^2", L, "gravitational acceleration", [](Config& c) -> double& { return c.sim.params.g; }));
  t.push_back(real("physics", "T0_ref", "K", P, "reference temperature of the saturation law", [](Config& c) -> double& { return c.sim.params.T0_ref; }));
  t.push_back(real("physics", "es0", "Pa", L, "saturation vapor pressure at T0_ref", [](Config& c) -> double& { return c.sim.params.es0; }));
  t.push_back(real("physics", "p0_pt", "Pa", L, "reference pressure of potential temperature", [](Config& c) -> double& { return c.sim.params.p0_pt; }));
  t.push_back(real("physics", "Tbar_top", "K", A, "background temperature at p1", [](Config& c) -> double& { return c.sim.Tbar_top; }));
  t.push_back(real("physics", "Tbar_bottom", "K", A, "background temperature at p0", [](Config& c) -> double& { return c.sim.Tbar_bottom; }));
  // closures
  t.push_back(real("closures", "T_floor", "K", A, "cold cutoff: e_s = q_vs = 0 at and below", [](Config& c) -> double& { return c.sim.params.T_floor; }));
  t.push_back(real("closures", "T_hi_valid", "K", A, "upper end of the trusted saturation-law range", [](Config& c) -> double& { return c.sim.params.T_hi_valid; }));
  t.push_back(real("closures", "qvs_cap", "kg/kg", A, "upper bound of q_vs", [](Config& c) -> double& { return c.sim.params.qvs_cap; }));
  t.push_back(real("closures", "sat_frac_max", "-", A, "e_s / p beyond which q_vs returns the cap", [](Config& c) -> double& { return c.sim.params.sat_frac_max; }));
  t.push_back(real("closures", "V_sed", "K/s", A, "sedimentation constant; positive moves rain toward p0", [](Config& c) -> double& { return c.sim.params.V_sed; }));
  t.push_back(real("closures", "C_ev", "1/(K s)", A, "evaporation rate constant", [](Config& c) -> double& { return c.sim.params.C_ev; }));
  t.push_back(real("closures", "C_cd", "1/s", A, "condensation rate constant", [](Config& c) -> double& { return c.sim.params.C_cd; }));
  t.push_back(real("closures", "C_cn", "1/s", A, "nucleation rate constant", [](Config& c) -> double& { return c.sim.params.C_cn; }));
  t.push_back(real("closures", "C_ac", "1/s", A, "autoconversion rate constant", [](Config& c) -> double& { return c.sim.params.C_ac; }));
  t.push_back(real("closures", "C_cr", "1/s", A, "collection rate constant", [](Config& c) -> double& { return c.sim.params.C_cr; }));
  t.push_back(real("closures", "beta_ev", "-", A, "evaporation exponent in (0, 1]", [](Config& c) -> double& { return c.sim.params.beta_ev; }));
  t.push_back(real("closures", "q_ac_star", "kg/kg", A, "autoconversion threshold", [](Config& c) -> double& { return c.sim.params.q_ac_star; }));
  for (Var v : kAllVars) {
    const int j = idx(v);
    const std::string n = var_name(v);
    t.push_back(real("closures", "mu_" + n, "length^2/s", A, "horizontal diffusivity of " + n,
                     [j](Config& c) -> double& { return c.sim.params.mu[j]; }));
    t.push_back(real("closures", "nu_" + n, "m^2/s", A, "vertical diffusivity of " + n,
                     [j](Config& c) -> double& { return c.sim.params.nu[j]; }));
  }
  // boundary
  for (Var v : kAllVars) {
    const int j = idx(v);
    const std::string s = std::string("boundary.") + var_name(v);
    t.push_back(real(s, "alpha0", "1/Pa", A, "Robin coefficient on Gamma0", [j](Config& c) -> double& { return c.sim.boundary[j].alpha0; }));
    t.push_back(real(s, "b0", "field units", A, "boundary data on Gamma0", [j](Config& c) -> double& { return c.sim.boundary[j].b0; }));
    t.push_back(real(s, "alpha_ll", "1/length", A, "Robin coefficient on the lateral boundary", [j](Config& c) -> double& { return c.sim.boundary[j].alpha_ll; }));
    t.push_back(real(s, "b_ll", "field units", A, "boundary data on the lateral boundary", [j](Config& c) -> double& { return c.sim.boundary[j].b_ll; }));
  }
  // velocity
  t.push_back(enumeration<VelocityKind>("velocity", "kind", A, "prescribed velocity field",
                                        {{"none", VelocityKind::None}, {"convection_cell", VelocityKind::ConvectionCell}},
                                        [](Config& c) -> VelocityKind& { return c.sim.velocity.kind; }));
  t.push_back(real("velocity", "amplitude", "Pa length/s", A, "streamfunction amplitude (unused if target_cfl > 0)",
                   [](Config& c) -> double& { return c.sim.velocity.amplitude; }));
  t.push_back(real("velocity", "target_cfl", "-", A, "scale the cell to this CFL number at dt",
                   [](Config& c) -> double& { return c.sim.velocity.target_cfl; }));
  // time
  t.push_back(real("time", "dt", "s", A, "time step", [](Config& c) -> double& { return c.sim.dt; }));
  t.push_back(real("time", "t_end", "s", A, "final time, a multiple of dt", [](Config& c) -> double& { return c.sim.t_end; }));
  t.push_back(real("time", "picard_tol", "-", A, "summed RMS change per Picard iterate", [](Config& c) -> double& { return c.sim.picard_tol; }));
  t.push_back(integer("time", "picard_max", "-", A, "Picard iteration cap", [](Config& c) -> int& { return c.sim.picard_max; }));
  t.push_back(enumeration<ThermoMode>("time", "mode", A, "prognostic thermodynamic variable",
                                      {{"theta", ThermoMode::Theta}, {"temperature", ThermoMode::Temperature}},
                                      [](Config& c) -> ThermoMode& { return c.sim.mode; }));
  t.push_back(enumeration<ClampPolicy>("time", "clamp", A, "negative moisture handling",
                                       {{"monitor", ClampPolicy::Monitor}, {"clamp", ClampPolicy::Clamp}},
                                       [](Config& c) -> ClampPolicy& { return c.sim.clamp; }));
  t.push_back(real("time", "solver_tol", "-", A, "relative residual of the linear solves", [](Config& c) -> double& { return c.sim.solver_tol; }));
  t.push_back(integer("time", "solver_max_iter", "-", A, "linear solver cap; 0 means 10 x cells",
                      [](Config& c) -> int& { return c.sim.solver_max_iter; }));
  // output and monitors
  t.push_back(integer("output", "snapshot_every", "steps", A, "snapshot cadence; 0 disables",
                      [](Config& c) -> int& { return c.sim.snapshot_every; }));
  t.push_back(real("output", "nonneg_tol", "field units", A, "allowed undershoot below zero", [](Config& c) -> double& { return c.sim.nonneg_tol; }));
  t.push_back(real("output", "qv_tol", "kg/kg", A, "allowed overshoot above q_v_star", [](Config& c) -> double& { return c.sim.qv_tol; }));
  t.push_back(real("output", "qc_envelope", "kg/kg", A, "generous upper envelope for q_c", [](Config& c) -> double& { return c.sim.qc_envelope; }));
  t.push_back(real("output", "qr_envelope", "kg/kg", A, "generous upper envelope for q_r", [](Config& c) -> double& { return c.sim.qr_envelope; }));
  t.push_back(real("output", "T_envelope_lo", "K", A, "lower envelope for T", [](Config& c) -> double& { return c.sim.T_envelope_lo; }));
  t.push_back(real("output", "T_envelope_hi", "K", A, "upper envelope for T", [](Config& c) -> double& { return c.sim.T_envelope_hi; }));
  // initial data
  t.push_back(integer("initial", "seed", "-", A, "generator seed of the initial data",
                      [](Config& c) -> std::uint64_t& { return c.sim.initial.seed; }));
  t.push_back(real("initial", "T_offset", "K", A, "added to the background profile", [](Config& c) -> double& { return c.sim.initial.T_offset; }));
  t.push_back(real("initial", "T_spread", "K", A, "uniform random amplitude of T", [](Config& c) -> double& { return c.sim.initial.T_spread; }));
  t.push_back(boolean("initial", "qv_relative", A, "qv base and spread are fractions of q_vs",
                      [](Config& c) -> bool& { return c.sim.initial.qv_relative; }));
  t.push_back(real("initial", "qv_base", "kg/kg or -", A, "qv base value", [](Config& c) -> double& { return c.sim.initial.qv_base; }));
  t.push_back(real("initial", "qv_spread", "kg/kg or -", A, "qv random amplitude", [](Config& c) -> double& { return c.sim.initial.qv_spread; }));
  t.push_back(real("initial", "qc_base", "kg/kg", A, "qc base value", [](Config& c) -> double& { return c.sim.initial.qc_base; }));
  t.push_back(real("initial", "qc_spread", "kg/kg", A, "qc random amplitude", [](Config& c) -> double& { return c.sim.initial.qc_spread; }));
  t.push_back(real("initial", "qr_base", "kg/kg", A, "qr base value", [](Config& c) -> double& { return c.sim.initial.qr_base; }));
  t.push_back(real("initial", "qr_spread", "kg/kg", A, "qr random amplitude", [](Config& c) -> double& { return c.sim.initial.qr_spread; }));
  t.push_back(boolean("initial", "uniform_enthalpy", A, "start from uniform H = T - (L/c_p)(qc + qr)",
                      [](Config& c) -> bool& { return c.sim.initial.uniform_enthalpy; }));
  // rothe battery
  t.push_back(integer("battery", "problems", "-", A, "number of random problems", [](Config& c) -> int& { return c.battery.problems; }));
  t.push_back(integer("battery", "n", "cells", A, "cells per axis of the unit cube", [](Config& c) -> int& { return c.battery.n; }));
  t.push_back(integer("battery", "N", "steps", A, "Rothe steps", [](Config& c) -> int& { return c.battery.N; }));
  t.push_back(real("battery", "horizon", "-", A, "final time", [](Config& c) -> double& { return c.battery.horizon; }));
  t.push_back(real("battery", "a_lo", "-", A, "lower bound of a (lambda)", [](Config& c) -> double& { return c.battery.a_lo; }));
  t.push_back(real("battery", "a_hi", "-", A, "upper bound of a", [](Config& c) -> double& { return c.battery.a_hi; }));
  t.push_back(real("battery", "b_hi", "-", A, "upper bound of b", [](Config& c) -> double& { return c.battery.b_hi; }));
  t.push_back(real("battery", "robin_hi", "-", A, "upper bound of alpha and beta", [](Config& c) -> double& { return c.battery.robin_hi; }));
  t.push_back(integer("battery", "seed", "-", A, "seed of problem 0; problem k uses seed + k",
                      [](Config& c) -> std::uint64_t& { return c.battery.seed; }));
  t.push_back(real("battery", "rel_tol", "-", A, "allowed negative slack relative to the right-hand side",
                   [](Config& c) -> double& { return c.battery.rel_tol; }));
  // mms
  t.push_back(int_list("mms", "sizes", A, "spatial ladder, cells per axis", [](Config& c) -> std::vector<int>& { return c.mms.sizes; }));
  t.push_back(integer("mms", "parabolic_N", "steps", A, "Rothe steps of the spatial parabolic ladder",
                      [](Config& c) -> int& { return c.mms.parabolic_N; }));
  t.push_back(real("mms", "horizon", "-", A, "final time", [](Config& c) -> double& { return c.mms.horizon; }));
  t.push_back(integer("mms", "temporal_n", "cells", A, "grid of the temporal ladder", [](Config& c) -> int& { return c.mms.temporal_n; }));
  t.push_back(int_list("mms", "temporal_steps", A, "step counts of the temporal ladder",
                       [](Config& c) -> std::vector<int>& { return c.mms.temporal_steps; }));
  t.push_back(real("mms", "spatial_order_min", "-", A, "required spatial order", [](Config& c) -> double& { return c.mms.spatial_order_min; }));
  t.push_back(real("mms", "temporal_order_min", "-", A, "required temporal order", [](Config& c) -> double& { return c.mms.temporal_order_min; }));
  // two-run experiment
  t.push_back(real_list("two_run", "eps", A, "perturbation sizes", [](Config& c) -> std::vector<double>& { return c.two_run.eps; }));
  t.push_back(integer("two_run", "seed", "-", A, "seed of the perturbation direction",
                      [](Config& c) -> std::uint64_t& { return c.two_run.seed; }));
  t.push_back(real("two_run", "pert_T", "K", A, "temperature scale of the perturbation", [](Config& c) -> double& { return c.two_run.pert_T; }));
  t.push_back(real("two_run", "pert_q", "kg/kg", A, "moisture scale of the perturbation", [](Config& c) -> double& { return c.two_run.pert_q; }));
  t.push_back(real("two_run", "agreement_tol", "-", A, "allowed relative spread of the amplification factors",
                   [](Config& c) -> double& { return c.two_run.agreement_tol; }));
  return t;
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = build_table();
  return t;
}

}  // namespace

const std::vector<ConfigKeyInfo>& config_keys() {
  static const std::vector<ConfigKeyInfo> keys = [] {
    std::vector<ConfigKeyInfo> k;
    for (const Entry& e : table()) k.push_back(e.info);
    return k;
  }();
  return keys;
}

Config parse_config(const std::string& text) {
  std::map<std::pair<std::string, std::string>, const Entry*> index;
  std::set<std::string> sections;
  for (const Entry& e : table()) {
    index[{e.info.section, e.info.key}] = &e;
    sections.insert(e.info.section);
  }
  Config c;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!sections.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    const auto hash = value.find('#');
    if (hash != std::string::npos) value = trim(value.substr(0, hash));
    if (section.empty()) throw ConfigError(where + "key '" + key + "' outside a section");
    const auto it = index.find({section, key});
    if (it == index.end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert({section, key}).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->second->set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + "[" + section + "] " + key + ": " + e.what());
    }
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Config& c) {
  std::ostringstream os;
  std::string section;
  for (const Entry& e : table()) {
    if (e.info.section != section) {
      if (!section.empty()) os << '\n';
      section = e.info.section;
      os << '[' << section << "]\n";
    }
    os << "# " << e.info.description << " [" << e.info.unit << "] (" << e.info.provenance << ")\n";
    os << e.info.key << " = " << e.get(c) << '\n';
  }
  return os.str();
}

}  // namespace moist
