#include "uavinspect/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "uavinspect/errors.hpp"

namespace uavinspect {

void StepParams::validate() const {
  if (!(dt > 0.0) || !(dt <= kMaxDt)) throw InvariantError("dt must lie in (0, 0.1] s");
  if (!(u_max > 0.0) || !std::isfinite(u_max)) throw InvariantError("u_max must be positive");
}

Vec3 saturate(const Vec3& u, double u_max) {
  return {std::clamp(u.x, -u_max, u_max), std::clamp(u.y, -u_max, u_max),
          std::clamp(u.z, -u_max, u_max)};
}

StepReport step_detailed(const AgentKinematics& state, const Vec3& u, const StepParams& params,
                         const InspectionRegion& region) {
  if (!is_finite(state.p) || !is_finite(state.v) || !is_finite(u)) {
    throw InvariantError("non-finite state or control input");
  }
  StepReport report;
  const Vec3 applied = saturate(u, params.u_max);
  report.saturated = !(applied == u);

  Vec3 v = state.v + applied * params.dt;
  Vec3 p = state.p + v * params.dt;
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = region.min[axis];
    const double hi = region.max[axis];
    if (p[axis] < lo || p[axis] > hi) {
      p[axis] = std::clamp(p[axis], lo, hi);
      v[axis] = 0.0;
      report.clamped = true;
    }
  }
  report.next = {p, v};
  return report;
}

}  // namespace uavinspect
