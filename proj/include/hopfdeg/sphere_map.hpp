#pragma once

#include "hopfdeg/core.hpp"

#include <json.hpp>

#include <functional>
#include <optional>

namespace hopfdeg {

// A map from S^m (embedded in R^{m+1}) to R^l, optionally tagged as
// sphere-valued. Immutable after construction; evaluation is pure.
class SphereMap {
 public:
  using Eval = std::function<Vec(const Vec&)>;
  // Piecewise-smooth maps report which smooth piece a point lies in, so that
  // finite-difference stencils never straddle a junction.
  using Region = std::function<int(const Vec&)>;

  SphereMap() = default;
  SphereMap(int source_dim, int target_dim, bool sphere_valued, Eval eval,
            nlohmann::json descriptor);

  int source_dim() const { return m_; }
  int target_dim() const { return l_; }
  bool sphere_valued() const { return sphere_valued_; }
  bool valid() const { return static_cast<bool>(eval_); }

  Vec operator()(const Vec& p) const { return eval_(p); }

  const Region& region() const { return region_; }
  SphereMap& set_region(Region r) {
    region_ = std::move(r);
    return *this;
  }

  // Geodesic radius of a ball around the south pole on which f is constant.
  std::optional<double> pole_constant_radius() const { return pole_radius_; }
  SphereMap& set_pole_constant_radius(double r) {
    pole_radius_ = r;
    return *this;
  }

  // A geodesic ball B(center, radius) on which f is constant, when the family
  // knows one away from the south pole.
  struct ConstantBall {
    Vec center;
    double radius = 0.0;
  };
  const std::optional<ConstantBall>& constant_ball() const { return constant_ball_; }
  SphereMap& set_constant_ball(const Vec& center, double radius) {
    constant_ball_ = ConstantBall{center, radius};
    return *this;
  }

  // Upper bound on the pointwise differential norm, when the family knows it.
  std::optional<double> lipschitz_hint() const { return lip_hint_; }
  SphereMap& set_lipschitz_hint(double v) {
    lip_hint_ = v;
    return *this;
  }

  const nlohmann::json& descriptor() const { return descriptor_; }
  SphereMap& set_descriptor(nlohmann::json d) {
    descriptor_ = std::move(d);
    return *this;
  }

  Vec south_pole() const;

 private:
  int m_ = 0;
  int l_ = 0;
  bool sphere_valued_ = false;
  Eval eval_;
  Region region_;
  std::optional<double> pole_radius_;
  std::optional<ConstantBall> constant_ball_;
  std::optional<double> lip_hint_;
  nlohmann::json descriptor_;
};

// A map R^m -> R^l. Either compactly supported (constant far_value outside
// support_radius) or periodic with the given period on every axis.
class EuclideanMap {
 public:
  using Eval = std::function<Vec(const Vec&)>;

  EuclideanMap() = default;
  EuclideanMap(int dim, int target_dim, Eval eval, nlohmann::json descriptor)
      : m_(dim), l_(target_dim), eval_(std::move(eval)), descriptor_(std::move(descriptor)) {}

  int dim() const { return m_; }
  int target_dim() const { return l_; }
  Vec operator()(const Vec& x) const { return eval_(x); }

  std::optional<double> support_radius;
  std::optional<Vec> far_value;
  std::optional<double> period;

  const nlohmann::json& descriptor() const { return descriptor_; }

 private:
  int m_ = 0;
  int l_ = 0;
  Eval eval_;
  nlohmann::json descriptor_;
};

}  // namespace hopfdeg
