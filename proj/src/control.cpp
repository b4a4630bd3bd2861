#include "uavinspect/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "uavinspect/errors.hpp"

namespace uavinspect {

void Gains::validate() const {
  for (double value : {k_p, k_d, mu_o, d_o, r, eps}) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InvariantError("all gains must be finite and positive");
    }
  }
}

Vec3 u_centroid(const AgentKinematics& state, const MassCentroid& mc, const Gains& g) {
  if (!mc.valid) return -g.k_d * state.v;
  return g.k_p * mc.mass * (mc.centroid - state.p) - g.k_d * state.v;
}

Vec3 u_avoid(const Vec3& p, std::span<const Vec3> targets, const Gains& g) {
  Vec3 u;
  for (std::size_t l = 0; l < targets.size(); ++l) {
    const Vec3 away = p - targets[l];
    const double d = norm(away);
    if (d < kSingularDistance) {
      throw SafetyError("agent reached target " + std::to_string(l) +
                        " (distance " + std::to_string(d) + " m)");
    }
    if (d <= g.d_o) u += g.mu_o * (1.0 / d - 1.0 / g.d_o) / (d * d) * away;
  }
  return u;
}

double repulsive_potential(const Vec3& p, std::span<const Vec3> targets, const Gains& g) {
  double total = 0.0;
  for (const Vec3& t : targets) {
    const double d = distance(p, t);
    if (d <= g.d_o) {
      const double gap = 1.0 / d - 1.0 / g.d_o;
      total += 0.5 * g.eps * gap * gap;
    }
  }
  return total;
}

StatusVector update_inspection(const Vec3& p, std::span<const Vec3> projected,
                               const StatusVector& status, const Gains& g) {
  if (projected.size() != status.size()) {
    throw InvariantError("status vector length differs from the number of projected targets");
  }
  StatusVector out = status;
  for (std::size_t l = 0; l < out.size(); ++l) {
    if (out[l] && unreliability(projected[l], p) <= g.r) out[l] = 0;
  }
  return out;
}

StatusVector merge_status(const StatusVector& a, const StatusVector& b) {
  if (a.size() != b.size()) throw InvariantError("cannot merge status vectors of different length");
  StatusVector out(a.size());
  std::transform(a.begin(), a.end(), b.begin(), out.begin(),
                 [](std::uint8_t x, std::uint8_t y) { return std::min(x, y); });
  return out;
}

std::size_t popcount(const StatusVector& status) {
  return static_cast<std::size_t>(std::count_if(status.begin(), status.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

double lyapunov_from_cost(double cost, std::span<const AgentKinematics> states,
                          std::span<const Vec3> targets, const Gains& g) {
  double total = g.k_p * cost;
  for (const AgentKinematics& s : states) {
    total += 0.5 * squared_norm(s.v) + repulsive_potential(s.p, targets, g);
  }
  return total;
}

double lyapunov(std::span<const AgentKinematics> states, const DensityField& field,
                const QuadratureGrid& grid, std::span<const Vec3> targets, const Gains& g) {
  std::vector<Vec3> positions;
  positions.reserve(states.size());
  for (const AgentKinematics& s : states) positions.push_back(s.p);
  return lyapunov_from_cost(cost_H(positions, field, grid), states, targets, g);
}

}  // namespace uavinspect
