#pragma once

#include "uavinspect/geometry.hpp"
#include "uavinspect/vec3.hpp"

namespace uavinspect {

struct AgentKinematics {
  Vec3 p;  // position, m
  Vec3 v;  // velocity, m/s
};

struct StepParams {
  double dt = 0.05;     // s, at most kMaxDt
  double u_max = 20.0;  // m/s^2, per-axis saturation

  static constexpr double kMaxDt = 0.1;
  void validate() const;
};

/// What the integrator had to do beyond the plain update.
struct StepReport {
  AgentKinematics next;
  bool saturated = false;  // some axis of u was clipped to +-u_max
  bool clamped = false;    // the position hit a region face
};

/// Semi-implicit Euler for p' = v, v' = u with per-axis input saturation.
/// Positions leaving the region are clamped to its faces and the velocity
/// component along the contact axis is zeroed. Throws InvariantError on
/// non-finite input.
StepReport step_detailed(const AgentKinematics& state, const Vec3& u, const StepParams& params,
                         const InspectionRegion& region);

inline AgentKinematics step(const AgentKinematics& state, const Vec3& u,
                            const StepParams& params, const InspectionRegion& region) {
  return step_detailed(state, u, params, region).next;
}

Vec3 saturate(const Vec3& u, double u_max);

}  // namespace uavinspect
