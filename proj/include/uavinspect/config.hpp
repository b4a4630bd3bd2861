#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavinspect/geometry.hpp"
#include "uavinspect/sim.hpp"

namespace uavinspect {

/// Plain-text `key = value` scenario files.
///
/// Keys (units):
///   mesh               path to the `v`/`f` mesh, relative to the config file
///   region_min         x y z, m
///   region_max         x y z, m
///   initial_positions  x y z; x y z; ... (one triple per agent), m
///   agents             agent count; optional, must match initial_positions
///   d_proj             m, outward projection distance          (default 15)
///   k_p, k_d           PD gains                                 (0.32, 0.86)
///   mu_o               avoidance gain                           (1000)
///   d_o                m, repulsion radius                      (12)
///   r                  m^2, inspection threshold                (10)
///   eps                Lyapunov potential gain                  (= mu_o)
///   alpha, beta        density height, 1/m^2 width              (1, 0.0075)
///   dt                 s, integration step, (0, 0.1]            (0.05)
///   t_max              s, simulated time limit                  (300)
///   grid_h             m, quadrature resolution                 (2)
///   u_max              m/s^2, per-axis input bound              (20)
///   log, summary       output paths, relative to the config file
/// `#` starts a comment. Unknown keys are rejected.
///
/// Overrides have the same `key=value` form and replace file values before
/// interpretation. Errors are reported as ParseError naming the key.
Scenario parse_config(std::istream& in, const std::vector<std::string>& overrides = {},
                      const std::filesystem::path& base_dir = {});

Scenario load_config(const std::filesystem::path& path,
                     const std::vector<std::string>& overrides = {});

/// Writes every field; parse_config(emit_config(s)) == s for absolute or
/// base-relative paths.
void emit_config(std::ostream& out, const Scenario& scenario,
                 const std::filesystem::path& base_dir = {});

/// The evaluation setup: region 180 x 180 x 40 m, a 156 x 78 x 26 m
/// open box (walls and roof) centered on the ground, 5 agents.
struct PaperScenario {
  TriangleMesh mesh;
  Scenario scenario;
};

inline constexpr std::size_t kPaperTargetCount = 132;

/// Subdivision counts of the open box whose vertices plus facets equal
/// `target_count`. Throws DegeneracyError when no subdivision fits.
struct BoxSubdivision {
  std::size_t along_x = 0;
  std::size_t along_y = 0;
  std::size_t along_z = 0;
};
BoxSubdivision solve_box_subdivision(std::size_t target_count, const Vec3& size);

/// Open box mesh (no floor) spanning [lo, hi].
TriangleMesh make_open_box(const Vec3& lo, const Vec3& hi, const BoxSubdivision& cuts);

PaperScenario make_paper_scenario();

/// Writes object.obj and scenario.cfg into `dir` and returns the config path.
std::filesystem::path write_paper_scenario(const std::filesystem::path& dir);

}  // namespace uavinspect
