#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavinspect/control.hpp"
#include "uavinspect/dynamics.hpp"
#include "uavinspect/field.hpp"
#include "uavinspect/geometry.hpp"

namespace uavinspect {

/// Everything needed to reproduce one mission.
struct Scenario {
  InspectionRegion region;
  std::filesystem::path mesh_path;
  double d_proj = 15.0;  // m
  std::vector<Vec3> initial_positions;
  Gains gains;
  double alpha = 1.0;
  double beta = 0.0075;  // 1/m^2
  double dt = 0.05;      // s
  double t_max = 300.0;  // s
  double grid_h = 2.0;   // m
  double u_max = 20.0;   // m/s^2
  std::filesystem::path log_path;
  std::filesystem::path summary_path;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// What an agent hears from a neighbor at the start of a round.
struct RoundMessage {
  std::size_t sender = 0;
  Vec3 position;
  StatusVector status;
};

struct AgentRecord {
  Vec3 p;
  Vec3 v;
  Vec3 uc;
  Vec3 uo;
  Vec3 centroid;
  double mass = 0.0;
  std::vector<std::size_t> neighbors;
};

/// State of the team at one tick plus the controls computed from it.
struct RoundRecord {
  std::size_t round = 0;
  double t = 0.0;
  std::vector<AgentRecord> agents;
  StatusVector status;  // global: minimum over all agents' vectors
  std::size_t status_popcount = 0;
  double lyapunov = 0.0;
  std::size_t facets_done = 0;

  // Not serialized; used to qualify the Lyapunov monitor.
  bool saturated = false;       // the step leaving this round clipped some input
  bool clamped = false;         // the step leaving this round hit a region face
  bool uniform_status = false;  // every agent used the global status this round
};

enum class Outcome { Success, Timeout, SafetyAbort };

std::string to_string(Outcome outcome);

struct RunSummary {
  Outcome outcome = Outcome::Timeout;
  double completion_time_s = 0.0;  // time of the last round
  std::size_t rounds = 0;
  double min_pairwise_dist_m = 0.0;  // +inf for a single agent
  double min_target_dist_m = 0.0;
  std::string message;

  bool success() const { return outcome == Outcome::Success; }
};

struct SimLog {
  std::vector<RoundRecord> rounds;
  RunSummary summary;
};

struct RunOptions {
  unsigned workers = 1;
  /// When set, each round is written here as one line as soon as it is final.
  std::ostream* log_stream = nullptr;
  /// Starting status of every agent; all ones when empty.
  std::optional<StatusVector> initial_status;
  /// Keep records in SimLog::rounds (disable for long runs that only stream).
  bool keep_records = true;
};

/// A flag per facet: 1 once its three vertices and its center are inspected.
std::vector<std::uint8_t> facet_status(const StatusVector& status,
                                       const std::vector<std::array<std::size_t, 4>>& members);

/// Throws InvariantError if the scenario is inconsistent with the target set.
void validate_scenario(const Scenario& scenario, const TriangleMesh& mesh,
                       const TargetSet& targets);

/// Runs synchronous rounds until every target is inspected or t_max elapses.
/// Safety violations end the run with Outcome::SafetyAbort.
SimLog run(const Scenario& scenario, const TriangleMesh& mesh, const RunOptions& options = {});
SimLog run(const Scenario& scenario, const RunOptions& options = {});

/// One JSON object on one line, fixed field names.
void write_round(std::ostream& out, const RoundRecord& record);
void write_summary(std::ostream& out, const RunSummary& summary);

}  // namespace uavinspect
