#pragma once

#include <span>

#include "uavinspect/dynamics.hpp"
#include "uavinspect/field.hpp"
#include "uavinspect/vec3.hpp"

namespace uavinspect {

struct Gains {
  double k_p = 0.32;
  double k_d = 0.86;
  double mu_o = 1000.0;  // avoidance gain
  double d_o = 12.0;     // m, repulsion radius around each raw target
  double r = 10.0;       // m^2, inspection threshold on 0.5 |q_bar - p|^2
  double eps = 1000.0;   // potential gain seen by the Lyapunov monitor

  void validate() const;
  friend bool operator==(const Gains&, const Gains&) = default;
};

/// Agents closer than this to a raw target are considered collided.
inline constexpr double kSingularDistance = 1e-6;

/// PD pull towards the cell centroid: k_p M (C - p) - k_d v.
/// Pure damping -k_d v for an empty cell.
Vec3 u_centroid(const AgentKinematics& state, const MassCentroid& mc, const Gains& g);

/// Negative gradient of the repulsive potential of every target within d_o.
/// Throws SafetyError when p is within kSingularDistance of a target.
Vec3 u_avoid(const Vec3& p, std::span<const Vec3> targets, const Gains& g);

inline Vec3 total_control(const Vec3& u_c, const Vec3& u_o) { return u_c + u_o; }

/// sum_l [d_l <= d_o] 0.5 eps (1/d_l - 1/d_o)^2
double repulsive_potential(const Vec3& p, std::span<const Vec3> targets, const Gains& g);

/// Clears every bit whose projected point satisfies 0.5 |q_bar - p|^2 <= r.
StatusVector update_inspection(const Vec3& p, std::span<const Vec3> projected,
                               const StatusVector& status, const Gains& g);

/// Elementwise minimum: inspected anywhere means inspected. Throws on length mismatch.
StatusVector merge_status(const StatusVector& a, const StatusVector& b);

std::size_t popcount(const StatusVector& status);

/// Energy-like monitor k_p H + sum 0.5 |v|^2 + sum U_o.
double lyapunov(std::span<const AgentKinematics> states, const DensityField& field,
                const QuadratureGrid& grid, std::span<const Vec3> targets, const Gains& g);

/// Same monitor with the coverage cost H already integrated.
double lyapunov_from_cost(double cost, std::span<const AgentKinematics> states,
                          std::span<const Vec3> targets, const Gains& g);

}  // namespace uavinspect
