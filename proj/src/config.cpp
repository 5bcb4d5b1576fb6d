#include "satsec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "satsec/errors.hpp"

namespace satsec {
namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so leftovers can
// be reported as unknown.
class StrictObject {
 public:
  StrictObject(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(field(key), "must be finite");
    }
  }

  void count(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) {
        fail(field(key), "expected a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail(field(key), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const json& v, const std::string& field, std::size_t arity) {
  if (!v.is_array() || (arity != 0 && v.size() != arity)) {
    StrictObject::fail(field, arity == 0 ? "expected an array of numbers"
                                         : "expected an array of " + std::to_string(arity) +
                                               " numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) StrictObject::fail(field, "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

GroundPosition position(const json& v, const std::string& field) {
  const auto xy = number_list(v, field, 2);
  return {xy[0], xy[1]};
}

json position_json(GroundPosition p) { return json::array({p.x_km, p.y_km}); }

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) StrictObject::fail(field, what);
}

std::string rain_name(RainPolicy p) { return p == RainPolicy::kSampled ? "sampled" : "nominal"; }

std::string lipschitz_name(LipschitzMode m) {
  return m == LipschitzMode::kAnalytic ? "analytic" : "safeguarded";
}

SweepVariable parse_sweep_variable(const std::string& text) {
  if (text == "none") return SweepVariable::kNone;
  if (text == "power_dbmw") return SweepVariable::kPower;
  if (text == "region_edge_km") return SweepVariable::kRegionEdge;
  if (text == "grid_density") return SweepVariable::kGridDensity;
  StrictObject::fail("sweep.variable",
                     "expected none, power_dbmw, region_edge_km or grid_density");
}

void read_solver(const json& node, SolverSettings& s) {
  StrictObject o(node, "scenario.solver");
  o.number("rho_per_watt", s.rho_per_watt);
  o.number("epsilon", s.epsilon);
  o.number("delta", s.delta);
  o.integer("max_outer", s.max_outer);
  o.integer("max_inner", s.max_inner);
  std::string mode = lipschitz_name(s.lipschitz_mode);
  o.string("lipschitz_mode", mode);
  if (mode == "analytic") {
    s.lipschitz_mode = LipschitzMode::kAnalytic;
  } else if (mode == "safeguarded") {
    s.lipschitz_mode = LipschitzMode::kSafeguarded;
  } else {
    StrictObject::fail(o.field("lipschitz_mode"), "expected analytic or safeguarded");
  }
  o.finish();
}

void read_scenario(const json& node, ScenarioConfig& c) {
  StrictObject o(node, "scenario");
  o.number("altitude_km", c.altitude_km);
  if (const json* v = o.find("beam_centers_km")) {
    require(v->is_array(), o.field("beam_centers_km"), "expected an array of [x, y]");
    c.beam_centers_km.clear();
    for (const auto& e : *v) c.beam_centers_km.push_back(position(e, o.field("beam_centers_km")));
  }
  if (const json* v = o.find("antenna_offsets_m")) {
    require(v->is_array(), o.field("antenna_offsets_m"), "expected an array of [x, y, z]");
    c.antenna_offsets_m.clear();
    for (const auto& e : *v) {
      const auto xyz = number_list(e, o.field("antenna_offsets_m"), 3);
      c.antenna_offsets_m.push_back({xyz[0], xyz[1], xyz[2]});
    }
  }
  o.number("carrier_hz", c.carrier_hz);
  o.number("b_max_dbi", c.b_max_dbi);
  o.number("phi_3db_deg", c.phi_3db_deg);
  o.number("g_max_db", c.g_max_db);
  o.number("rain_mu_db", c.rain_mu_db);
  o.number("rain_sigma_db", c.rain_sigma_db);
  o.number("noise_bandwidth_hz", c.noise_bandwidth_hz);
  o.number("noise_temperature_k", c.noise_temperature_k);
  o.number("eve_noise_bandwidth_hz", c.eve_noise_bandwidth_hz);
  o.number("eve_noise_temperature_k", c.eve_noise_temperature_k);
  if (const json* v = o.find("lu_position_km")) c.lu_position_km = position(*v, o.field("lu_position_km"));
  o.number("lu_mispointing_deg", c.lu_mispointing_deg);
  o.number("eve_mispointing_deg", c.eve_mispointing_deg);
  if (const json* v = o.find("eve_regions")) {
    require(v->is_array(), o.field("eve_regions"), "expected an array of regions");
    c.eve_regions.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = o.field("eve_regions") + "[" + std::to_string(i) + "]";
      StrictObject r((*v)[i], path);
      RegionSpec spec;
      const json* center = r.find("center_km");
      require(center != nullptr, r.field("center_km"), "required");
      spec.center = position(*center, r.field("center_km"));
      r.number("edge_km", spec.edge_km);
      r.finish();
      c.eve_regions.push_back(spec);
    }
  }
  o.number("power_dbmw", c.power_dbmw);
  o.number("gamma_th", c.gamma_th);
  o.boolean("gamma_th_in_db", c.gamma_th_in_db);
  o.number("beta", c.beta);
  o.count("grid_m1", c.grid_m1);
  o.count("grid_m2", c.grid_m2);
  o.boolean("grid_inclusive", c.grid_inclusive);
  o.count("validation_density", c.validation_density);
  std::string rain = rain_name(c.eve_rain);
  o.string("eve_rain_policy", rain);
  if (rain == "nominal") {
    c.eve_rain = RainPolicy::kNominal;
  } else if (rain == "sampled") {
    c.eve_rain = RainPolicy::kSampled;
  } else {
    StrictObject::fail(o.field("eve_rain_policy"), "expected nominal or sampled");
  }
  o.boolean("lu_rain_sampled", c.lu_rain_sampled);
  if (const json* v = o.find("solver")) read_solver(*v, c.solver);
  o.finish();
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

SatelliteGeometry ScenarioConfig::satellite() const {
  SatelliteGeometry sat;
  sat.altitude_km = altitude_km;
  sat.beam_centers = beam_centers_km;
  for (const auto& o : antenna_offsets_m) sat.antenna_offsets_m.emplace_back(o[0], o[1], o[2]);
  return sat;
}

LinkBudgetParams ScenarioConfig::link_budget() const {
  LinkBudgetParams p;
  p.carrier_hz = carrier_hz;
  p.b_max = db_to_linear(b_max_dbi);
  p.phi_3db_rad = deg_to_rad(phi_3db_deg);
  p.g_max_db = g_max_db;
  p.rain_mu_db = rain_mu_db;
  p.rain_sigma_db = rain_sigma_db;
  p.noise_bandwidth_hz = noise_bandwidth_hz;
  p.noise_temperature_k = noise_temperature_k;
  return p;
}

LinkBudgetParams ScenarioConfig::eve_link_budget() const {
  LinkBudgetParams p = link_budget();
  p.noise_bandwidth_hz = eve_noise_bandwidth_hz;
  p.noise_temperature_k = eve_noise_temperature_k;
  return p;
}

std::vector<EveRegion> ScenarioConfig::regions() const {
  std::vector<EveRegion> out;
  for (const auto& r : eve_regions) out.push_back(EveRegion::centered(r.center, r.edge_km));
  return out;
}

double ScenarioConfig::power_w() const { return std::pow(10.0, power_dbmw / 10.0) * 1e-3; }

double ScenarioConfig::gamma_th_linear() const {
  return gamma_th_in_db ? db_to_linear(gamma_th) : gamma_th;
}

SolverParams ScenarioConfig::solver_params() const {
  SolverParams p;
  p.rho = solver.rho_per_watt * power_w();
  p.epsilon = solver.epsilon;
  p.delta = solver.delta;
  p.max_outer = solver.max_outer;
  p.max_inner = solver.max_inner;
  p.lipschitz_mode = solver.lipschitz_mode;
  return p;
}

void ScenarioConfig::validate() const {
  const std::string s = "scenario.";
  require(altitude_km > 0.0, s + "altitude_km", "must be > 0");
  require(!beam_centers_km.empty(), s + "beam_centers_km", "need at least one beam");
  require(antenna_offsets_m.size() == beam_centers_km.size(), s + "antenna_offsets_m",
          "need one offset per beam center");
  for (const auto& c : beam_centers_km) {
    require(std::abs(c.x_km) <= 10000.0 && std::abs(c.y_km) <= 10000.0, s + "beam_centers_km",
            "coordinates must lie within +/-10000 km");
  }
  require(carrier_hz > 0.0, s + "carrier_hz", "must be > 0");
  require(phi_3db_deg > 0.0 && phi_3db_deg < 90.0, s + "phi_3db_deg", "must lie in (0, 90)");
  require(g_max_db > 0.0, s + "g_max_db", "must be > 0");
  require(rain_sigma_db >= 0.0, s + "rain_sigma_db", "must be >= 0");
  require(noise_bandwidth_hz > 0.0, s + "noise_bandwidth_hz", "must be > 0");
  require(noise_temperature_k > 0.0, s + "noise_temperature_k", "must be > 0");
  require(eve_noise_bandwidth_hz > 0.0, s + "eve_noise_bandwidth_hz", "must be > 0");
  require(eve_noise_temperature_k > 0.0, s + "eve_noise_temperature_k", "must be > 0");
  require(std::abs(lu_position_km.x_km) <= 10000.0 && std::abs(lu_position_km.y_km) <= 10000.0,
          s + "lu_position_km", "coordinates must lie within +/-10000 km");
  require(lu_mispointing_deg >= 0.0 && lu_mispointing_deg <= 180.0, s + "lu_mispointing_deg",
          "must lie in [0, 180]");
  require(eve_mispointing_deg >= 0.0 && eve_mispointing_deg <= 180.0, s + "eve_mispointing_deg",
          "must lie in [0, 180]");
  require(!eve_regions.empty(), s + "eve_regions", "need at least one eavesdropper region");
  for (const auto& r : eve_regions) {
    require(r.edge_km >= 0.0, s + "eve_regions.edge_km", "must be >= 0");
    require(std::abs(r.center.x_km) + 0.5 * r.edge_km <= 10000.0 &&
                std::abs(r.center.y_km) + 0.5 * r.edge_km <= 10000.0,
            s + "eve_regions.center_km", "region must lie within +/-10000 km");
  }
  require(gamma_th_in_db || gamma_th >= 0.0, s + "gamma_th", "must be >= 0");
  require(beta > 0.0, s + "beta", "must be > 0");
  require(grid_m1 >= 1, s + "grid_m1", "must be >= 1");
  require(grid_m2 >= 1, s + "grid_m2", "must be >= 1");
  require(validation_density >= 1, s + "validation_density", "must be >= 1");
  const std::string v = s + "solver.";
  require(solver.rho_per_watt > 0.0, v + "rho_per_watt", "must be > 0");
  require(solver.epsilon > 0.0, v + "epsilon", "must be > 0");
  require(solver.delta > 0.0, v + "delta", "must be > 0");
  require(solver.max_outer >= 1, v + "max_outer", "must be >= 1");
  require(solver.max_inner >= 1, v + "max_inner", "must be >= 1");
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  const SatelliteGeometry sat = SatelliteGeometry::hexagonal(7, 250.0, 1.0);
  c.beam_centers_km = sat.beam_centers;
  for (const auto& o : sat.antenna_offsets_m) c.antenna_offsets_m.push_back({o.x(), o.y(), o.z()});
  c.lu_position_km = {0.0, 0.0};
  c.eve_regions = {
      // 250 km from the LU, 120 degrees apart, between neighbouring beams
      {{216.5, 125.0}, 100.0},
      {{-216.5, 125.0}, 100.0},
      {{0.0, -250.0}, 100.0},
  };
  return c;
}

void ExperimentSpec::validate() const {
  scenario.validate();
  require(!schemes.empty(), "schemes", "need at least one scheme");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    for (std::size_t j = i + 1; j < schemes.size(); ++j) {
      require(schemes[i] != schemes[j], "schemes", "duplicate scheme");
    }
  }
  if (sweep.variable == SweepVariable::kNone) {
    require(sweep.values.empty(), "sweep.values", "must be empty when variable is none");
  } else {
    require(!sweep.values.empty(), "sweep.values", "need at least one value");
    for (std::size_t i = 1; i < sweep.values.size(); ++i) {
      require(sweep.values[i] > sweep.values[i - 1], "sweep.values", "must be strictly increasing");
    }
    for (double value : sweep.values) {
      require(std::isfinite(value), "sweep.values", "must be finite");
      if (sweep.variable == SweepVariable::kRegionEdge) {
        require(value >= 0.0, "sweep.values", "region edges must be >= 0");
      }
      if (sweep.variable == SweepVariable::kGridDensity) {
        require(value >= 1.0 && value == std::floor(value), "sweep.values",
                "grid densities must be positive integers");
      }
    }
  }
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kRobust: return "robust";
    case Scheme::kMrt: return "mrt";
    case Scheme::kNonRobust: return "nonrobust";
  }
  return "?";
}

std::string to_string(EveMode mode) { return mode == EveMode::kCoordinated ? "ce" : "ue"; }

std::string to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kNone: return "none";
    case SweepVariable::kPower: return "power_dbmw";
    case SweepVariable::kRegionEdge: return "region_edge_km";
    case SweepVariable::kGridDensity: return "grid_density";
  }
  return "?";
}

Scheme parse_scheme(const std::string& text) {
  if (text == "robust") return Scheme::kRobust;
  if (text == "mrt") return Scheme::kMrt;
  if (text == "nonrobust") return Scheme::kNonRobust;
  throw ConfigError("config field 'schemes': unknown scheme '" + text + "'");
}

EveMode parse_mode(const std::string& text) {
  if (text == "ue") return EveMode::kUncoordinated;
  if (text == "ce") return EveMode::kCoordinated;
  throw ConfigError("config field 'mode': expected ue or ce, got '" + text + "'");
}

ExperimentSpec parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(line_of_offset(text, e.byte)) +
                      ": " + e.what());
  }

  ExperimentSpec spec;
  StrictObject o(root, "");
  if (const json* v = o.find("seed")) {
    require(v->is_number_unsigned() || (v->is_number_integer() && v->get<long long>() >= 0),
            "seed", "expected a non-negative integer");
    spec.seed = v->get<std::uint64_t>();
  }
  std::string mode = to_string(spec.mode);
  o.string("mode", mode);
  spec.mode = parse_mode(mode);
  if (const json* v = o.find("schemes")) {
    require(v->is_array(), "schemes", "expected an array of scheme names");
    spec.schemes.clear();
    for (const auto& e : *v) {
      require(e.is_string(), "schemes", "expected scheme names");
      spec.schemes.push_back(parse_scheme(e.get<std::string>()));
    }
  }
  if (const json* v = o.find("sweep")) {
    StrictObject s(*v, "sweep");
    std::string variable = "none";
    s.string("variable", variable);
    spec.sweep.variable = parse_sweep_variable(variable);
    if (const json* values = s.find("values")) spec.sweep.values = number_list(*values, "sweep.values", 0);
    s.finish();
  }
  o.string("output_dir", spec.output_dir);
  o.boolean("record_timing", spec.record_timing);
  if (const json* v = o.find("scenario")) read_scenario(*v, spec.scenario);
  o.finish();

  spec.validate();
  return spec;
}

ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_config(const ExperimentSpec& spec) {
  const ScenarioConfig& c = spec.scenario;
  json centers = json::array();
  for (const auto& p : c.beam_centers_km) centers.push_back(position_json(p));
  json offsets = json::array();
  for (const auto& o : c.antenna_offsets_m) offsets.push_back(json::array({o[0], o[1], o[2]}));
  json regions = json::array();
  for (const auto& r : c.eve_regions) {
    regions.push_back({{"center_km", position_json(r.center)}, {"edge_km", r.edge_km}});
  }
  json schemes = json::array();
  for (Scheme s : spec.schemes) schemes.push_back(to_string(s));

  json root = {
      {"seed", spec.seed},
      {"mode", to_string(spec.mode)},
      {"schemes", schemes},
      {"sweep", {{"variable", to_string(spec.sweep.variable)}, {"values", spec.sweep.values}}},
      {"output_dir", spec.output_dir},
      {"record_timing", spec.record_timing},
      {"scenario",
       {
           {"altitude_km", c.altitude_km},
           {"beam_centers_km", centers},
           {"antenna_offsets_m", offsets},
           {"carrier_hz", c.carrier_hz},
           {"b_max_dbi", c.b_max_dbi},
           {"phi_3db_deg", c.phi_3db_deg},
           {"g_max_db", c.g_max_db},
           {"rain_mu_db", c.rain_mu_db},
           {"rain_sigma_db", c.rain_sigma_db},
           {"noise_bandwidth_hz", c.noise_bandwidth_hz},
           {"noise_temperature_k", c.noise_temperature_k},
           {"eve_noise_bandwidth_hz", c.eve_noise_bandwidth_hz},
           {"eve_noise_temperature_k", c.eve_noise_temperature_k},
           {"lu_position_km", position_json(c.lu_position_km)},
           {"lu_mispointing_deg", c.lu_mispointing_deg},
           {"eve_mispointing_deg", c.eve_mispointing_deg},
           {"eve_regions", regions},
           {"power_dbmw", c.power_dbmw},
           {"gamma_th", c.gamma_th},
           {"gamma_th_in_db", c.gamma_th_in_db},
           {"beta", c.beta},
           {"grid_m1", c.grid_m1},
           {"grid_m2", c.grid_m2},
           {"grid_inclusive", c.grid_inclusive},
           {"validation_density", c.validation_density},
           {"eve_rain_policy", rain_name(c.eve_rain)},
           {"lu_rain_sampled", c.lu_rain_sampled},
           {"solver",
            {
                {"rho_per_watt", c.solver.rho_per_watt},
                {"epsilon", c.solver.epsilon},
                {"delta", c.solver.delta},
                {"max_outer", c.solver.max_outer},
                {"max_inner", c.solver.max_inner},
                {"lipschitz_mode", lipschitz_name(c.solver.lipschitz_mode)},
            }},
       }},
  };
  return root.dump(2) + "\n";
}

}  // namespace satsec
