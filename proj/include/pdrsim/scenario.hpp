#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdrsim/decision.hpp"
#include "pdrsim/dynamics.hpp"
#include "pdrsim/network.hpp"

namespace pdrsim {

// Serializable scenario description. Defaults are the synthetic toy setup:
// 1 km disc, 17 POIs, other-counties SD parameters with per-POI degrees,
// rural logit regime. q_s0/returned0 and the physical schedule are synthetic
// (the source recovery series is not public) and config-overridable.
struct ScenarioConfig {
  std::string name = "toy";
  Frame frame = Frame::LocalPlaneKm;
  double disc_radius_km = 1.0;
  double center_x = 0.0;  // lon in WGS84
  double center_y = 0.0;  // lat in WGS84
  int population = 1000;
  int n_pois = 17;
  std::string sd_set = "other_counties";  // "harris" | "other_counties"
  double n_bar = 78.5;                    // mean-field n when per_node_n is off
  bool per_node_n = true;
  Regime regime = Regime::Rural;
  double radius_home_km = 1.609;
  double radius_poi_km = 1.609;
  std::vector<PhysicalSchedule::Knot> schedule;  // default_physical_schedule() when empty
  double q_s0 = 0.62;
  double returned0 = 0.78;
  std::vector<int> returned_agents;  // explicit day-0 returned set; overrides returned0
  double q_house = 1.0;
  double q_income = 60000.0;  // dollars
  std::uint64_t seed = 42;
  int horizon = 61;
  std::string locations_file;  // load instead of generating when set
  bool synthetic_locations = true;
};

ScenarioConfig default_toy_config();

nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);

// apply "dotted.path=value" to a config JSON; the path must already exist
void apply_override(nlohmann::json& j, const std::string& assignment);

// stable content hash over the canonical JSON dump
std::uint64_t config_hash(const nlohmann::json& j);

struct Scenario {
  ScenarioConfig cfg;
  MultilayerNetwork net;
  SDParams sd;  // n = cfg.n_bar
  PhysicalSchedule schedule;
};

// deterministic in (cfg, cfg.seed); generates placements unless
// cfg.locations_file is set
Scenario build_scenario(const ScenarioConfig& cfg);

// toy instance for sweep cells: default config with this population and seed
Scenario generate_toy(int population, std::uint64_t seed);

struct CountyDescriptor {
  std::string name;
  long long population;
  double density;  // people per 1 km-radius circle
  int homes;
  int pois;
  double n_bar;
  // approximate county-seat coordinates, synthetic (used only to center
  // synthesized placements)
  double center_lon;
  double center_lat;
};

const std::vector<CountyDescriptor>& county_table();
const CountyDescriptor& county_by_name(const std::string& name);  // case-insensitive

// scenario config for a county: synthesized WGS84 disc of radius
// sqrt(population/density) km, Harris -> urban regime + Harris SD,
// others -> rural + other-counties SD with the county's own n-bar
ScenarioConfig county_config(const std::string& name);

// locations CSV: header node_id,layer,x_or_lon,y_or_lat with layer in {h,s,p}
std::string locations_csv(const MultilayerNetwork& net);
void parse_locations_csv(const std::filesystem::path& path, Frame frame,
                         std::vector<GeoPoint>& homes, std::vector<GeoPoint>& pois,
                         GeoPoint& physical);

}  // namespace pdrsim
