#include <cmath>
#include <ostream>

#include <json.hpp>

#include "uavinspect/sim.hpp"

namespace uavinspect {

namespace {

using Json = nlohmann::ordered_json;

Json vec(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

/// [[bit, run length], ...] in target order.
Json run_length(const StatusVector& bits) {
  Json runs = Json::array();
  std::size_t l = 0;
  while (l < bits.size()) {
    std::size_t end = l;
    while (end < bits.size() && bits[end] == bits[l]) ++end;
    runs.push_back(Json::array({static_cast<int>(bits[l]), end - l}));
    l = end;
  }
  return runs;
}

Json finite_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

}  // namespace

void write_round(std::ostream& out, const RoundRecord& record) {
  Json line;
  line["t"] = record.t;
  Json agents = Json::array();
  for (const AgentRecord& a : record.agents) {
    Json agent;
    agent["p"] = vec(a.p);
    agent["v"] = vec(a.v);
    agent["uc"] = vec(a.uc);
    agent["uo"] = vec(a.uo);
    agent["centroid"] = vec(a.centroid);
    agent["mass"] = a.mass;
    agent["neighbors"] = a.neighbors;
    agents.push_back(std::move(agent));
  }
  line["agents"] = std::move(agents);
  line["status_popcount"] = record.status_popcount;
  line["status_bits"] = run_length(record.status);
  line["lyapunov"] = record.lyapunov;
  line["facets_done"] = record.facets_done;
  out << line.dump() << '\n';
}

void write_summary(std::ostream& out, const RunSummary& summary) {
  Json doc;
  doc["completion_time_s"] = summary.completion_time_s;
  doc["success"] = summary.success();
  doc["min_pairwise_dist_m"] = finite_or_null(summary.min_pairwise_dist_m);
  doc["min_target_dist_m"] = finite_or_null(summary.min_target_dist_m);
  doc["outcome"] = to_string(summary.outcome);
  doc["rounds"] = summary.rounds;
  doc["message"] = summary.message;
  out << doc.dump(2) << '\n';
}

}  // namespace uavinspect
