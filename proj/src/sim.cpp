#include "uavinspect/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "uavinspect/errors.hpp"

namespace uavinspect {

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Success:
      return "success";
    case Outcome::Timeout:
      return "timeout";
    case Outcome::SafetyAbort:
      return "safety_abort";
  }
  return "unknown";
}

std::vector<std::uint8_t> facet_status(const StatusVector& status,
                                       const std::vector<std::array<std::size_t, 4>>& members) {
  std::vector<std::uint8_t> done(members.size(), 0);
  for (std::size_t f = 0; f < members.size(); ++f) {
    bool all = true;
    for (std::size_t l : members[f]) {
      if (l >= status.size()) throw InvariantError("facet member index out of range");
      all = all && status[l] == 0;
    }
    done[f] = all ? 1 : 0;
  }
  return done;
}

void validate_scenario(const Scenario& scenario, const TriangleMesh& mesh,
                       const TargetSet& targets) {
  scenario.region.validate();
  scenario.gains.validate();
  StepParams{scenario.dt, scenario.u_max}.validate();
  if (!(scenario.t_max >= 0.0)) throw InvariantError("t_max must be non-negative");
  if (scenario.initial_positions.empty()) throw InvariantError("at least one agent is required");
  check_fits_region(mesh, targets, scenario.region);

  const auto& start = scenario.initial_positions;
  for (std::size_t i = 0; i < start.size(); ++i) {
    const std::string who = "agent " + std::to_string(i + 1);
    if (!is_finite(start[i]) || !scenario.region.contains(start[i])) {
      throw InvariantError(who + " starts outside the inspection region");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (start[i] == start[j]) {
        throw InvariantError(who + " starts on top of agent " + std::to_string(j + 1));
      }
    }
    for (std::size_t l = 0; l < targets.size(); ++l) {
      if (distance(start[i], targets.targets[l]) <= scenario.gains.d_o) {
        throw InvariantError(who + " starts within d_o of target " + std::to_string(l));
      }
    }
  }
}

namespace {

StatusVector fold_merge(StatusVector own, const std::vector<RoundMessage>& inbox) {
  for (const RoundMessage& msg : inbox) own = merge_status(own, msg.status);
  return own;
}

}  // namespace

SimLog run(const Scenario& scenario, const TriangleMesh& mesh, const RunOptions& options) {
  const TargetSet targets = build_target_set(mesh, scenario.d_proj);
  validate_scenario(scenario, mesh, targets);

  const std::size_t n = scenario.initial_positions.size();
  const Gains& gains = scenario.gains;
  const StepParams step_params{scenario.dt, scenario.u_max};
  const QuadratureGrid grid(scenario.region, scenario.grid_h);
  const MixtureQuadrature quad(grid, targets.projected, scenario.alpha, scenario.beta);
  const unsigned workers = std::max(1u, options.workers);

  std::vector<AgentKinematics> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i] = {scenario.initial_positions[i], {}};

  StatusVector initial(targets.size(), 1);
  if (options.initial_status) {
    if (options.initial_status->size() != targets.size()) {
      throw InvariantError("initial status length differs from the target count");
    }
    initial = *options.initial_status;
  }
  std::vector<StatusVector> local(n, initial);

  SimLog log;
  RunSummary& summary = log.summary;
  summary.min_pairwise_dist_m = std::numeric_limits<double>::infinity();
  summary.min_target_dist_m = std::numeric_limits<double>::infinity();

  std::vector<Vec3> positions(n);
  for (std::size_t round = 0;; ++round) {
    const double t = static_cast<double>(round) * scenario.dt;
    for (std::size_t i = 0; i < n; ++i) positions[i] = states[i].p;

    RoundRecord record;
    record.round = round;
    record.t = t;
    record.agents.resize(n);

    // Safety bookkeeping on the current snapshot.
    std::string violation;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double d = distance(positions[i], positions[j]);
        summary.min_pairwise_dist_m = std::min(summary.min_pairwise_dist_m, d);
        if (d < kSingularDistance && violation.empty()) {
          violation = "agents " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                      " overlap at t=" + std::to_string(t);
        }
      }
      for (const Vec3& target : targets.targets) {
        summary.min_target_dist_m = std::min(summary.min_target_dist_m, distance(positions[i], target));
      }
    }

    const Partition partition = compute_partition(grid, positions, workers);
    const auto neighbors = neighbor_sets(grid, partition);

    StatusVector global = local[0];
    for (std::size_t i = 1; i < n; ++i) global = merge_status(global, local[i]);

    // Every agent reads the same previous-round snapshot of its neighbors.
    std::vector<StatusVector> merged(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<RoundMessage> inbox;
      for (std::size_t j : neighbors[i]) inbox.push_back({j, positions[j], local[j]});
      merged[i] = fold_merge(local[i], inbox);
    }

    std::vector<StatusView> views(merged.begin(), merged.end());
    const std::vector<CellIntegral> cells = quad.integrate(partition, positions, views, workers);
    record.uniform_status =
        std::all_of(merged.begin(), merged.end(), [&](const StatusVector& s) { return s == global; });

    double cost = 0.0;
    if (record.uniform_status) {
      for (const CellIntegral& c : cells) cost += c.cost;
    } else {
      for (const CellIntegral& c : quad.integrate(partition, positions, global, workers)) {
        cost += c.cost;
      }
    }
    record.lyapunov = lyapunov_from_cost(cost, states, targets.targets, gains);
    record.status = global;
    record.status_popcount = popcount(global);
    const auto facets = facet_status(global, targets.facet_members);
    record.facets_done = static_cast<std::size_t>(std::count(facets.begin(), facets.end(), 1));

    std::vector<Vec3> controls(n);
    for (std::size_t i = 0; i < n && violation.empty(); ++i) {
      AgentRecord& a = record.agents[i];
      const MassCentroid mc = to_mass_centroid(cells[i], positions[i]);
      a.p = states[i].p;
      a.v = states[i].v;
      a.centroid = mc.centroid;
      a.mass = mc.mass;
      a.neighbors = neighbors[i];
      a.uc = u_centroid(states[i], mc, gains);
      try {
        a.uo = u_avoid(states[i].p, targets.targets, gains);
      } catch (const SafetyError& e) {
        violation = "agent " + std::to_string(i + 1) + ": " + e.what();
      }
      controls[i] = total_control(a.uc, a.uo);
    }

    summary.rounds = round + 1;
    summary.completion_time_s = t;
    if (!violation.empty()) {
      summary.outcome = Outcome::SafetyAbort;
      summary.message = violation;
      if (options.log_stream) write_round(*options.log_stream, record);
      if (options.keep_records) log.rounds.push_back(std::move(record));
      break;
    }

    const bool done = record.status_popcount == 0;
    const bool out_of_time = !done && t >= scenario.t_max;

    std::vector<AgentKinematics> next(n);
    if (!done && !out_of_time) {
      for (std::size_t i = 0; i < n; ++i) {
        const StepReport rep = step_detailed(states[i], controls[i], step_params, scenario.region);
        next[i] = rep.next;
        record.saturated = record.saturated || rep.saturated;
        record.clamped = record.clamped || rep.clamped;
      }
    }

    if (options.log_stream) write_round(*options.log_stream, record);
    if (options.keep_records) log.rounds.push_back(std::move(record));

    if (done) {
      summary.outcome = Outcome::Success;
      break;
    }
    if (out_of_time) {
      summary.outcome = Outcome::Timeout;
      summary.message = "t_max reached with targets left uninspected";
      break;
    }

    states = std::move(next);
    for (std::size_t i = 0; i < n; ++i) {
      local[i] = update_inspection(states[i].p, targets.projected, merged[i], gains);
    }
  }
  return log;
}

SimLog run(const Scenario& scenario, const RunOptions& options) {
  return run(scenario, load_mesh(scenario.mesh_path), options);
}

}  // namespace uavinspect
