#include "pdrsim/network.hpp"

#include <algorithm>
#include <string>

namespace pdrsim {

std::vector<Edge> build_intra_edges(const std::vector<GeoPoint>& nodes, double radius_km) {
  if (radius_km <= 0.0) throw ValidationError("build_intra_edges: radius must be positive");
  std::vector<Edge> edges;
  if (nodes.empty()) return edges;
  RadiusIndex index(nodes, radius_km);
  std::vector<int> hits;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    index.query(nodes[i], radius_km, hits);
    for (int j : hits)
      if (j > i) edges.push_back({i, j});
  }
  return edges;  // ascending (a,b) because i ascends and hits are sorted
}

std::vector<Edge> build_inter_edges(const std::vector<GeoPoint>& homes,
                                    const std::vector<GeoPoint>& others,
                                    Layer other_layer, double radius_km) {
  if (radius_km <= 0.0) throw ValidationError("build_inter_edges: radius must be positive");
  std::vector<Edge> edges;
  if (homes.empty() || others.empty()) return edges;
  if (other_layer == Layer::Physical) {
    for (int i = 0; i < static_cast<int>(homes.size()); ++i)
      for (int j = 0; j < static_cast<int>(others.size()); ++j) edges.push_back({i, j});
    return edges;
  }
  RadiusIndex index(others, radius_km);
  std::vector<int> hits;
  for (int i = 0; i < static_cast<int>(homes.size()); ++i) {
    index.query(homes[i], radius_km, hits);
    for (int j : hits) edges.push_back({i, j});
  }
  return edges;
}

MultilayerNetwork build_network(std::vector<GeoPoint> homes, std::vector<GeoPoint> pois,
                                GeoPoint physical, double radius_home_km, double radius_poi_km) {
  if (homes.empty()) throw ValidationError("build_network: no home nodes");
  if (pois.empty()) throw ValidationError("build_network: no social nodes");
  MultilayerNetwork net;
  net.homes = std::move(homes);
  net.pois = std::move(pois);
  net.physical = physical;
  net.radius_home_km = radius_home_km;
  net.radius_poi_km = radius_poi_km;

  double rmax = std::max(radius_home_km, radius_poi_km);
  net.home_index = RadiusIndex(net.homes, rmax);
  net.poi_index = RadiusIndex(net.pois, rmax);

  int nh = static_cast<int>(net.homes.size());
  int np = static_cast<int>(net.pois.size());
  net.home_degree.assign(nh, 0);
  net.home_pois.resize(nh);
  std::vector<int> hits;
  for (int i = 0; i < nh; ++i) {
    net.home_index.query(net.homes[i], radius_home_km, hits);
    net.home_degree[i] = static_cast<std::int32_t>(hits.size()) - 1;  // exclude self
    net.poi_index.query(net.homes[i], radius_poi_km, hits);
    net.home_pois[i].assign(hits.begin(), hits.end());
  }
  net.poi_degree.assign(np, 0);
  for (int j = 0; j < np; ++j) {
    net.poi_index.query(net.pois[j], radius_poi_km, hits);
    net.poi_degree[j] = static_cast<std::int32_t>(hits.size()) - 1;
  }
  return net;
}

std::vector<NodeId> neighbors(const MultilayerNetwork& net, NodeId node, Layer layer) {
  int nh = static_cast<int>(net.homes.size());
  int np = static_cast<int>(net.pois.size());
  auto check = [&](int count) {
    if (node.index < 0 || node.index >= count)
      throw NotFoundError("neighbors: unknown node index " + std::to_string(node.index));
  };
  std::vector<NodeId> out;
  std::vector<int> hits;
  switch (node.layer) {
    case Layer::Home:
      check(nh);
      if (layer == Layer::Home) {
        net.home_index.query(net.homes[node.index], net.radius_home_km, hits);
        for (int j : hits)
          if (j != node.index) out.push_back({Layer::Home, j});
      } else if (layer == Layer::Social) {
        for (int j : net.home_pois[node.index]) out.push_back({Layer::Social, j});
      } else {
        out.push_back({Layer::Physical, 0});  // county-level coverage: always linked
      }
      break;
    case Layer::Social:
      check(np);
      if (layer == Layer::Social) {
        net.poi_index.query(net.pois[node.index], net.radius_poi_km, hits);
        for (int j : hits)
          if (j != node.index) out.push_back({Layer::Social, j});
      } else if (layer == Layer::Home) {
        net.home_index.query(net.pois[node.index], net.radius_poi_km, hits);
        for (int j : hits) out.push_back({Layer::Home, j});
      }
      break;
    case Layer::Physical:
      check(1);
      if (layer == Layer::Home) {
        for (int j = 0; j < nh; ++j) out.push_back({Layer::Home, j});
      } else if (layer == Layer::Physical) {
        out.push_back({Layer::Physical, 0});  // the recursive self-link
      }
      break;
  }
  return out;
}

}  // namespace pdrsim
