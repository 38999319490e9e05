#pragma once

#include <cstdint>
#include <vector>

#include "pdrsim/errors.hpp"

namespace pdrsim {

enum class Frame { LocalPlaneKm, WGS84 };

// LocalPlaneKm: (x, y) in km. WGS84: (lon, lat) in degrees.
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;
  Frame frame = Frame::LocalPlaneKm;
};

// Euclidean in the local plane, great-circle (haversine, R=6371 km) on WGS84.
// Mixed frames are a caller bug, not a data condition.
double distance_km(const GeoPoint& a, const GeoPoint& b);

// Uniform-grid index for fixed-radius neighbor queries. WGS84 points are
// bucketed on an equirectangular projection with cells sized so that a query
// ball never spans more than the 3x3 cell neighborhood; every candidate is
// verified with the exact metric, so results match brute force exactly.
class RadiusIndex {
 public:
  RadiusIndex() = default;
  // radius_km is the maximum radius later queries may use
  RadiusIndex(const std::vector<GeoPoint>& pts, double radius_km);

  // ids of points with distance <= radius_km from center, ascending,
  // appended to out (out is cleared first); radius_km must not exceed the
  // build radius
  void query(const GeoPoint& center, double radius_km, std::vector<int>& out) const;

  double build_radius_km() const { return radius_; }
  std::size_t size() const { return pts_.size(); }
  const GeoPoint& point(int i) const { return pts_[i]; }

 private:
  std::int64_t cell_key(double cx, double cy) const;

  std::vector<GeoPoint> pts_;
  double radius_ = 0.0;
  double inv_cell_x_ = 0.0, inv_cell_y_ = 0.0;
  // cells sorted by key; each maps to a contiguous id range in order_
  std::vector<std::int64_t> keys_;
  std::vector<std::uint32_t> starts_;  // size keys_.size()+1
  std::vector<std::int32_t> order_;
};

}  // namespace pdrsim
