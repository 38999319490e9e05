#pragma once

#include <cstdint>
#include <vector>

#include "pdrsim/geometry.hpp"

namespace pdrsim {

enum class Layer { Home, Social, Physical };

struct NodeId {
  Layer layer;
  int index;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

// intra-layer: a < b; inter-layer: a = home index, b = other-layer index
struct Edge {
  int a;
  int b;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// undirected proximity edges (i,j), i<j, iff distance <= radius; no self-loops
std::vector<Edge> build_intra_edges(const std::vector<GeoPoint>& nodes, double radius_km);

// home j linked to every node of the other layer within radius; a Physical
// other layer is linked to every home regardless of distance (its recovery
// value is county-level, so its exposure is county-level)
std::vector<Edge> build_inter_edges(const std::vector<GeoPoint>& homes,
                                    const std::vector<GeoPoint>& others,
                                    Layer other_layer, double radius_km);

// Static three-layer topology. Home-home adjacency is intentionally not
// materialized (toy instances are near-dense); consumers use home_degree,
// the per-home POI lists, and radius queries against home_index.
struct MultilayerNetwork {
  std::vector<GeoPoint> homes;
  std::vector<GeoPoint> pois;
  GeoPoint physical;  // exactly one physical node, self-linked
  double radius_home_km = 0.0;
  double radius_poi_km = 0.0;

  RadiusIndex home_index;                       // built over homes
  RadiusIndex poi_index;                        // built over pois
  std::vector<std::vector<std::int32_t>> home_pois;  // POIs in range, ascending
  std::vector<std::int32_t> home_degree;        // home-layer neighbors
  std::vector<std::int32_t> poi_degree;         // N_j, POI-layer neighbors
};

MultilayerNetwork build_network(std::vector<GeoPoint> homes, std::vector<GeoPoint> pois,
                                GeoPoint physical, double radius_home_km, double radius_poi_km);

// sorted, deduplicated adjacency of `node` within `layer`
std::vector<NodeId> neighbors(const MultilayerNetwork& net, NodeId node, Layer layer);

}  // namespace pdrsim
