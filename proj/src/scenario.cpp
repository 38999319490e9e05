#include "pdrsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pdrsim/io.hpp"
#include "pdrsim/rng.hpp"

namespace pdrsim {

namespace {

constexpr double kKmPerDegLat = 6371.0 * 0.017453292519943295;

GeoPoint disc_point(const ScenarioConfig& cfg, rng::Stream& s) {
  double r = cfg.disc_radius_km * std::sqrt(s.next_unit());
  double theta = 6.283185307179586477 * s.next_unit();
  double dx_km = r * std::cos(theta);
  double dy_km = r * std::sin(theta);
  if (cfg.frame == Frame::LocalPlaneKm)
    return {cfg.center_x + dx_km, cfg.center_y + dy_km, Frame::LocalPlaneKm};
  // small-offset equirectangular mapping around the center; adequate for
  // synthesized county placements
  double lat = cfg.center_y + dy_km / kKmPerDegLat;
  double lon = cfg.center_x + dx_km / (kKmPerDegLat * std::cos(cfg.center_y * 0.017453292519943295));
  return {lon, lat, Frame::WGS84};
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ScenarioConfig default_toy_config() {
  ScenarioConfig cfg;
  cfg.schedule = default_physical_schedule().knots;
  return cfg;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["name"] = cfg.name;
  j["frame"] = cfg.frame == Frame::LocalPlaneKm ? "local_km" : "wgs84";
  j["geometry"] = {{"type", "disc"},
                   {"radius_km", cfg.disc_radius_km},
                   {"center", {cfg.center_x, cfg.center_y}}};
  j["population"] = cfg.population;
  j["n_pois"] = cfg.n_pois;
  j["sd_params"] = {{"set", cfg.sd_set}, {"n_bar", cfg.n_bar}, {"per_node_n", cfg.per_node_n}};
  j["logit_regime"] = cfg.regime == Regime::Urban ? "urban" : "rural";
  j["radius_home_km"] = cfg.radius_home_km;
  j["radius_poi_km"] = cfg.radius_poi_km;
  auto knots = nlohmann::json::array();
  for (const auto& k : cfg.schedule) knots.push_back({k.t, k.q_p});
  j["schedule"] = knots;
  j["initial"] = {{"q_s0", cfg.q_s0},
                  {"returned0", cfg.returned0},
                  {"returned_agents", cfg.returned_agents}};
  j["agents"] = {{"q_house", cfg.q_house}, {"q_income", cfg.q_income}};
  j["seed"] = cfg.seed;
  j["horizon"] = cfg.horizon;
  j["locations"] = cfg.locations_file.empty() ? nlohmann::json() : nlohmann::json(cfg.locations_file);
  j["synthetic_locations"] = cfg.synthetic_locations;
  return j;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg = default_toy_config();
  try {
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("frame")) {
      auto f = j.at("frame").get<std::string>();
      if (f == "local_km")
        cfg.frame = Frame::LocalPlaneKm;
      else if (f == "wgs84")
        cfg.frame = Frame::WGS84;
      else
        throw ConfigError("config: unknown frame '" + f + "'");
    }
    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      if (g.contains("type") && g.at("type").get<std::string>() != "disc")
        throw ConfigError("config: unknown geometry.type");
      if (g.contains("radius_km")) cfg.disc_radius_km = g.at("radius_km").get<double>();
      if (g.contains("center")) {
        cfg.center_x = g.at("center").at(0).get<double>();
        cfg.center_y = g.at("center").at(1).get<double>();
      }
    }
    if (j.contains("population")) cfg.population = j.at("population").get<int>();
    if (j.contains("n_pois")) cfg.n_pois = j.at("n_pois").get<int>();
    if (j.contains("sd_params")) {
      const auto& s = j.at("sd_params");
      if (s.contains("set")) cfg.sd_set = s.at("set").get<std::string>();
      if (s.contains("n_bar")) cfg.n_bar = s.at("n_bar").get<double>();
      if (s.contains("per_node_n")) cfg.per_node_n = s.at("per_node_n").get<bool>();
    }
    if (j.contains("logit_regime")) {
      auto r = j.at("logit_regime").get<std::string>();
      if (r == "urban")
        cfg.regime = Regime::Urban;
      else if (r == "rural")
        cfg.regime = Regime::Rural;
      else
        throw ConfigError("config: unknown logit_regime '" + r + "'");
    }
    if (j.contains("radius_home_km")) cfg.radius_home_km = j.at("radius_home_km").get<double>();
    if (j.contains("radius_poi_km")) cfg.radius_poi_km = j.at("radius_poi_km").get<double>();
    if (j.contains("schedule")) {
      cfg.schedule.clear();
      for (const auto& k : j.at("schedule"))
        cfg.schedule.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
    }
    if (j.contains("initial")) {
      const auto& ini = j.at("initial");
      if (ini.contains("q_s0")) cfg.q_s0 = ini.at("q_s0").get<double>();
      if (ini.contains("returned0")) cfg.returned0 = ini.at("returned0").get<double>();
      if (ini.contains("returned_agents"))
        cfg.returned_agents = ini.at("returned_agents").get<std::vector<int>>();
    }
    if (j.contains("agents")) {
      const auto& a = j.at("agents");
      if (a.contains("q_house")) cfg.q_house = a.at("q_house").get<double>();
      if (a.contains("q_income")) cfg.q_income = a.at("q_income").get<double>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<int>();
    if (j.contains("locations") && !j.at("locations").is_null())
      cfg.locations_file = j.at("locations").get<std::string>();
    if (j.contains("synthetic_locations"))
      cfg.synthetic_locations = j.at("synthetic_locations").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.population < 1) throw ConfigError("config: population must be >= 1");
  if (cfg.n_pois < 1) throw ConfigError("config: n_pois must be >= 1");
  if (cfg.horizon < 0) throw ConfigError("config: horizon must be >= 0");
  if (cfg.sd_set != "harris" && cfg.sd_set != "other_counties")
    throw ConfigError("config: sd_params.set must be harris or other_counties");
  if (cfg.q_s0 < 0.0 || cfg.q_s0 > 1.0) throw ConfigError("config: initial.q_s0 outside [0,1]");
  if (cfg.returned0 < 0.0 || cfg.returned0 > 1.0)
    throw ConfigError("config: initial.returned0 outside [0,1]");
  return cfg;
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not key=value");
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  nlohmann::json* node = &j;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (!node->is_object() || !node->contains(key))
      throw ConfigError("override references unknown config key '" + path + "'");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? nlohmann::json(value) : parsed;
}

std::uint64_t config_hash(const nlohmann::json& j) {
  return rng::fnv1a(j.dump());
}

Scenario build_scenario(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  if (cfg.schedule.empty()) cfg.schedule = default_physical_schedule().knots;
  if (cfg.schedule.front().t != 0.0)
    throw ConfigError("config: schedule must start at t=0");
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    if (i > 0 && cfg.schedule[i].t <= cfg.schedule[i - 1].t)
      throw ConfigError("config: schedule times must be strictly increasing");
    if (cfg.schedule[i].q_p < 0.0 || cfg.schedule[i].q_p > 1.0)
      throw ConfigError("config: schedule q_p outside [0,1]");
  }
  for (int id : cfg.returned_agents)
    if (id < 0 || id >= cfg.population)
      throw ConfigError("config: initial.returned_agents id out of range");

  std::vector<GeoPoint> homes, pois;
  GeoPoint physical{cfg.center_x, cfg.center_y, cfg.frame};
  if (!cfg.locations_file.empty()) {
    parse_locations_csv(cfg.locations_file, cfg.frame, homes, pois, physical);
    if (static_cast<int>(homes.size()) != cfg.population)
      throw ValidationError("locations file has " + std::to_string(homes.size()) +
                            " homes, config expects " + std::to_string(cfg.population));
    if (static_cast<int>(pois.size()) != cfg.n_pois)
      throw ValidationError("locations file has " + std::to_string(pois.size()) +
                            " POIs, config expects " + std::to_string(cfg.n_pois));
  } else {
    homes.reserve(cfg.population);
    for (int i = 0; i < cfg.population; ++i) {
      auto s = rng::stream(cfg.seed, rng::StreamClass::PlaceHome, static_cast<std::uint64_t>(i));
      homes.push_back(disc_point(cfg, s));
    }
    pois.reserve(cfg.n_pois);
    for (int i = 0; i < cfg.n_pois; ++i) {
      auto s = rng::stream(cfg.seed, rng::StreamClass::PlacePoi, static_cast<std::uint64_t>(i));
      pois.push_back(disc_point(cfg, s));
    }
  }

  Scenario sc;
  sc.cfg = cfg;
  sc.net = build_network(std::move(homes), std::move(pois), physical, cfg.radius_home_km,
                         cfg.radius_poi_km);
  sc.sd = cfg.sd_set == "harris" ? harris_sd(cfg.n_bar) : other_counties_sd(cfg.n_bar);
  sc.schedule.knots = cfg.schedule;
  return sc;
}

Scenario generate_toy(int population, std::uint64_t seed) {
  ScenarioConfig cfg = default_toy_config();
  cfg.population = population;
  cfg.seed = seed;
  return build_scenario(cfg);
}

const std::vector<CountyDescriptor>& county_table() {
  static const std::vector<CountyDescriptor> table = {
      {"Harris", 4731145, 3362.00, 35497, 66995, 139.1, -95.37, 29.76},
      {"Fort Bend", 822779, 1158.15, 8947, 8947, 107.7, -95.77, 29.53},
      {"Brazoria", 372031, 331.02, 1616, 4834, 79.9, -95.43, 29.17},
      {"Galveston", 350682, 1121.52, 1814, 5330, 78.5, -94.90, 29.38},
      {"Jefferson", 256526, 354.92, 1704, 4407, 70.2, -94.15, 29.85},
  };
  return table;
}

const CountyDescriptor& county_by_name(const std::string& name) {
  std::string want = lower(name);
  std::erase(want, ' ');
  for (const auto& c : county_table()) {
    std::string have = lower(c.name);
    std::erase(have, ' ');
    if (have == want) return c;
  }
  throw NotFoundError("unknown county '" + name + "'");
}

ScenarioConfig county_config(const std::string& name) {
  const auto& c = county_by_name(name);
  ScenarioConfig cfg = default_toy_config();
  cfg.name = lower(c.name);
  std::erase(cfg.name, ' ');
  cfg.frame = Frame::WGS84;
  cfg.center_x = c.center_lon;
  cfg.center_y = c.center_lat;
  // density is people per 1 km-radius circle, so population/density such
  // circles tile the county: R = sqrt(population/density) km
  cfg.disc_radius_km = std::sqrt(static_cast<double>(c.population) / c.density);
  cfg.population = c.homes;
  cfg.n_pois = c.pois;
  cfg.n_bar = c.n_bar;
  if (cfg.name == "harris") {
    cfg.sd_set = "harris";
    cfg.regime = Regime::Urban;
  } else {
    cfg.sd_set = "other_counties";
    cfg.regime = Regime::Rural;
  }
  return cfg;
}

std::string locations_csv(const MultilayerNetwork& net) {
  std::string out = "node_id,layer,x_or_lon,y_or_lat\n";
  for (std::size_t i = 0; i < net.homes.size(); ++i)
    out += std::to_string(i) + ",h," + io::fmt_double(net.homes[i].x) + "," +
           io::fmt_double(net.homes[i].y) + "\n";
  for (std::size_t i = 0; i < net.pois.size(); ++i)
    out += std::to_string(i) + ",s," + io::fmt_double(net.pois[i].x) + "," +
           io::fmt_double(net.pois[i].y) + "\n";
  out += "0,p," + io::fmt_double(net.physical.x) + "," + io::fmt_double(net.physical.y) + "\n";
  return out;
}

void parse_locations_csv(const std::filesystem::path& path, Frame frame,
                         std::vector<GeoPoint>& homes, std::vector<GeoPoint>& pois,
                         GeoPoint& physical) {
  auto rows = io::read_csv(path);
  if (rows.empty() || rows[0] != std::vector<std::string>{"node_id", "layer", "x_or_lon", "y_or_lat"})
    throw ValidationError(path.string() + ": missing or wrong header");
  homes.clear();
  pois.clear();
  int physical_count = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto bad = [&](const std::string& why) {
      return ValidationError(path.string() + " row " + std::to_string(r + 1) + ": " + why);
    };
    if (row.size() != 4) throw bad("expected 4 columns, got " + std::to_string(row.size()));
    long long id;
    double x, y;
    try {
      id = io::parse_int(row[0]);
      x = io::parse_double(row[2]);
      y = io::parse_double(row[3]);
    } catch (const ValidationError& e) {
      throw bad(e.what());
    }
    GeoPoint pt{x, y, frame};
    if (frame == Frame::WGS84 && (y < -90.0 || y > 90.0 || x < -180.0 || x > 180.0))
      throw bad("coordinates outside WGS84 bounds");
    if (row[1] == "h") {
      if (id != static_cast<long long>(homes.size())) throw bad("non-contiguous home node_id");
      homes.push_back(pt);
    } else if (row[1] == "s") {
      if (id != static_cast<long long>(pois.size())) throw bad("non-contiguous social node_id");
      pois.push_back(pt);
    } else if (row[1] == "p") {
      if (++physical_count > 1) throw bad("more than one physical node");
      physical = pt;
    } else {
      throw bad("layer must be h, s or p");
    }
  }
  if (physical_count != 1) throw ValidationError(path.string() + ": exactly one physical row required");
}

}  // namespace pdrsim
