#include "pdrsim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pdrsim {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 0.017453292519943295;
// meridian arc length of one degree on the R=6371 sphere
constexpr double kKmPerDegLat = kEarthRadiusKm * kDegToRad;

double haversine_km(double lon1, double lat1, double lon2, double lat2) {
  double phi1 = lat1 * kDegToRad, phi2 = lat2 * kDegToRad;
  double dphi = (lat2 - lat1) * kDegToRad * 0.5;
  double dlam = (lon2 - lon1) * kDegToRad * 0.5;
  double a = std::sin(dphi) * std::sin(dphi) +
             std::cos(phi1) * std::cos(phi2) * std::sin(dlam) * std::sin(dlam);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace

double distance_km(const GeoPoint& a, const GeoPoint& b) {
  if (a.frame != b.frame) throw FrameMismatchError("distance_km: points in different frames");
  if (a.frame == Frame::LocalPlaneKm) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
  }
  return haversine_km(a.x, a.y, b.x, b.y);
}

std::int64_t RadiusIndex::cell_key(double cx, double cy) const {
  auto gx = static_cast<std::int64_t>(std::floor(cx * inv_cell_x_));
  auto gy = static_cast<std::int64_t>(std::floor(cy * inv_cell_y_));
  return (gx << 32) ^ (gy & 0xffffffffll);
}

RadiusIndex::RadiusIndex(const std::vector<GeoPoint>& pts, double radius_km) : pts_(pts), radius_(radius_km) {
  if (radius_km <= 0.0) throw ValidationError("RadiusIndex: radius must be positive");
  if (pts_.empty()) {
    inv_cell_x_ = inv_cell_y_ = 1.0;
    starts_ = {0};
    return;
  }
  if (pts_[0].frame == Frame::LocalPlaneKm) {
    inv_cell_x_ = inv_cell_y_ = 1.0 / radius_km;
  } else {
    // cell edge >= the largest coordinate delta a radius ball can produce,
    // so 3x3 cells always cover the ball
    double max_abs_lat = 0.0;
    for (const auto& p : pts_) max_abs_lat = std::max(max_abs_lat, std::abs(p.y));
    max_abs_lat += radius_km / kKmPerDegLat;  // query centers may sit off the data
    double cos_min = std::max(0.01, std::cos(std::min(89.0, max_abs_lat) * kDegToRad));
    inv_cell_y_ = kKmPerDegLat / radius_km;
    inv_cell_x_ = kKmPerDegLat * cos_min / radius_km;
  }

  std::vector<std::pair<std::int64_t, std::int32_t>> tagged(pts_.size());
  for (std::size_t i = 0; i < pts_.size(); ++i)
    tagged[i] = {cell_key(pts_[i].x, pts_[i].y), static_cast<std::int32_t>(i)};
  std::sort(tagged.begin(), tagged.end());

  order_.resize(tagged.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    order_[i] = tagged[i].second;
    if (i == 0 || tagged[i].first != tagged[i - 1].first) {
      keys_.push_back(tagged[i].first);
      starts_.push_back(static_cast<std::uint32_t>(i));
    }
  }
  starts_.push_back(static_cast<std::uint32_t>(tagged.size()));
}

void RadiusIndex::query(const GeoPoint& center, double radius_km, std::vector<int>& out) const {
  out.clear();
  if (pts_.empty()) return;
  if (radius_km > radius_ * (1.0 + 1e-12))
    throw ValidationError("RadiusIndex: query radius exceeds build radius");
  auto gx = static_cast<std::int64_t>(std::floor(center.x * inv_cell_x_));
  auto gy = static_cast<std::int64_t>(std::floor(center.y * inv_cell_y_));
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      std::int64_t key = ((gx + dx) << 32) ^ ((gy + dy) & 0xffffffffll);
      auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
      if (it == keys_.end() || *it != key) continue;
      std::size_t ci = static_cast<std::size_t>(it - keys_.begin());
      for (std::uint32_t k = starts_[ci]; k < starts_[ci + 1]; ++k) {
        int id = order_[k];
        if (distance_km(center, pts_[id]) <= radius_km) out.push_back(id);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace pdrsim
