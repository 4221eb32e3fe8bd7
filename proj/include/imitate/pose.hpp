#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace imitate {

struct Pixel {
  int x = 0;
  int y = 0;
  auto operator<=>(const Pixel&) const = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// One detected object instance: its category and the pixels covering it.
/// Points are unique and non-empty.
class Mask {
 public:
  Mask(std::string class_label, std::vector<Pixel> points);

  const std::string& class_label() const { return class_label_; }
  std::span<const Pixel> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  std::vector<Vec2> as_cloud() const;

 private:
  std::string class_label_;
  std::vector<Pixel> points_;
};

/// Detector output: class labels and masks, index-aligned.
struct DetectedScene {
  std::vector<Mask> masks;

  std::vector<std::string> classes() const;
};

/// Planar pose (x, y, theta, class). theta is the principal axis orientation
/// in [0, pi) measured from the horizontal axis; degenerate masks get theta 0.
struct ObjectPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  std::string c;
  bool degenerate = false;

  bool operator==(const ObjectPose&) const = default;
};

/// Overhead camera to workspace mapping (scale and offset only).
struct Calibration {
  double scale = 1.0;  // meters per pixel
  double origin_x = 0.0;
  double origin_y = 0.0;
  int image_width = 600;
  int image_height = 600;

  void check() const;
};

/// Eigenvalue ratio below 1 + kIsotropyEpsilon marks a mask as degenerate.
inline constexpr double kIsotropyEpsilon = 0.05;

struct PrincipalAxis {
  double theta = 0.0;
  bool degenerate = false;
};

/// Population covariance of a point cloud: (cxx, cyy, cxy).
struct Covariance2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
};

Vec2 centroid(std::span<const Vec2> cloud);
Vec2 centroid(const Mask& mask);

Covariance2 covariance(std::span<const Vec2> cloud);

/// theta = atan2(2 cxy, cxx - cyy) / 2, wrapped into [0, pi). Fewer than two
/// points, or a near-isotropic covariance, gives {0, degenerate}.
PrincipalAxis principal_angle(std::span<const Vec2> cloud);
PrincipalAxis principal_angle(const Mask& mask);

ObjectPose estimate_pose(const Mask& mask);
std::vector<ObjectPose> estimate_poses(const DetectedScene& scene);

ObjectPose to_world(const ObjectPose& pose, const Calibration& cal);

/// Wraps any angle into [0, pi).
double wrap_axis_angle(double theta);

}  // namespace imitate
