#include "imitate/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imitate {

Mask::Mask(std::string class_label, std::vector<Pixel> points)
    : class_label_(std::move(class_label)), points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("mask '" + class_label_ + "' has no points");
  std::vector<Pixel> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("mask '" + class_label_ + "' contains duplicate points");
  }
}

std::vector<Vec2> Mask::as_cloud() const {
  std::vector<Vec2> cloud;
  cloud.reserve(points_.size());
  for (const Pixel& p : points_) cloud.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return cloud;
}

std::vector<std::string> DetectedScene::classes() const {
  std::vector<std::string> out;
  out.reserve(masks.size());
  for (const Mask& m : masks) out.push_back(m.class_label());
  return out;
}

void Calibration::check() const {
  if (!(scale > 0.0)) throw std::invalid_argument("calibration scale must be positive");
  if (image_width <= 0 || image_height <= 0) throw std::invalid_argument("calibration image size must be positive");
}

double wrap_axis_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  double t = std::fmod(theta, pi);
  if (t < 0.0) t += pi;
  if (t >= pi) t -= pi;
  return t;
}

Vec2 centroid(std::span<const Vec2> cloud) {
  if (cloud.empty()) throw std::invalid_argument("centroid of an empty point set");
  double sx = 0.0, sy = 0.0;
  for (const Vec2& p : cloud) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(cloud.size());
  return {sx / n, sy / n};
}

Vec2 centroid(const Mask& mask) { return centroid(mask.as_cloud()); }

Covariance2 covariance(std::span<const Vec2> cloud) {
  const Vec2 c = centroid(cloud);
  Covariance2 cov;
  for (const Vec2& p : cloud) {
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    cov.xx += dx * dx;
    cov.yy += dy * dy;
    cov.xy += dx * dy;
  }
  const auto n = static_cast<double>(cloud.size());
  cov.xx /= n;
  cov.yy /= n;
  cov.xy /= n;
  return cov;
}

PrincipalAxis principal_angle(std::span<const Vec2> cloud) {
  if (cloud.size() < 2) return {0.0, true};

  const Covariance2 cov = covariance(cloud);
  const double mean = 0.5 * (cov.xx + cov.yy);
  const double half_diff = 0.5 * (cov.xx - cov.yy);
  const double radius = std::hypot(half_diff, cov.xy);
  const double lambda_max = mean + radius;
  const double lambda_min = mean - radius;
  if (!(lambda_max > 0.0) || lambda_max < (1.0 + kIsotropyEpsilon) * lambda_min) return {0.0, true};

  return {wrap_axis_angle(0.5 * std::atan2(2.0 * cov.xy, cov.xx - cov.yy)), false};
}

PrincipalAxis principal_angle(const Mask& mask) { return principal_angle(mask.as_cloud()); }

ObjectPose estimate_pose(const Mask& mask) {
  const auto cloud = mask.as_cloud();
  const Vec2 c = centroid(cloud);
  const PrincipalAxis axis = principal_angle(cloud);
  return {c.x, c.y, axis.theta, mask.class_label(), axis.degenerate};
}

std::vector<ObjectPose> estimate_poses(const DetectedScene& scene) {
  std::vector<ObjectPose> poses;
  poses.reserve(scene.masks.size());
  for (const Mask& m : scene.masks) poses.push_back(estimate_pose(m));
  return poses;
}

ObjectPose to_world(const ObjectPose& pose, const Calibration& cal) {
  ObjectPose out = pose;
  out.x = cal.origin_x + cal.scale * pose.x;
  out.y = cal.origin_y + cal.scale * pose.y;
  return out;
}

}  // namespace imitate
