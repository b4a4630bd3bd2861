#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "uavinspect/errors.hpp"
#include "uavinspect/sim.hpp"

using namespace uavinspect;

namespace {

const std::string kData = TEST_DATA_DIR;

// One 3 m triangle on z = 0, viewed from 14 m above.
Scenario triangle_scenario() {
  Scenario s;
  s.region = {{-20, -20, -10}, {20, 20, 30}};
  s.mesh_path = kData + "/triangle.obj";
  s.d_proj = 14.0;
  s.initial_positions = {{15, 15, 25}};
  s.alpha = 1e-4;
  s.t_max = 60.0;
  return s;
}

// 10 m cube in a 40 m region, three agents.
Scenario box_scenario() {
  Scenario s;
  s.region = {{-16, -16, -16}, {26, 26, 26}};
  s.mesh_path = kData + "/box.obj";
  s.d_proj = 13.0;
  s.initial_positions = {{-14, -14, -14}, {24, -10, 20}, {-12, 22, 4}};
  s.alpha = 1e-4;
  s.t_max = 3.0;
  return s;
}

std::string log_text(const SimLog& log) {
  std::ostringstream out;
  for (const RoundRecord& r : log.rounds) write_round(out, r);
  write_summary(out, log.summary);
  return out.str();
}

}  // namespace

TEST_CASE("a fully inspected start finishes at round 0") {
  Scenario s = triangle_scenario();
  RunOptions opts;
  opts.initial_status = StatusVector(4, 0);
  const SimLog log = run(s, opts);
  CHECK(log.summary.success());
  CHECK(log.summary.rounds == 1);
  CHECK(log.summary.completion_time_s == 0.0);
  REQUIRE(log.rounds.size() == 1);
  CHECK(log.rounds[0].status_popcount == 0);
  CHECK(log.rounds[0].facets_done == 1);
  CHECK(log.rounds[0].agents[0].mass == 0.0);
}

TEST_CASE("a single agent inspects a single facet") {
  const SimLog log = run(triangle_scenario());
  CHECK(log.summary.success());
  CHECK(log.summary.completion_time_s > 0.0);
  CHECK(log.summary.completion_time_s < 60.0);
  CHECK(log.summary.min_target_dist_m > 1.0);
  CHECK(log.summary.min_pairwise_dist_m == std::numeric_limits<double>::infinity());
  CHECK(log.rounds.back().status_popcount == 0);
  CHECK(log.rounds.back().facets_done == 1);
  CHECK(log.rounds.size() == log.summary.rounds);
}

TEST_CASE("zero time budget stops after the first round") {
  Scenario s = triangle_scenario();
  s.t_max = 0.0;
  const SimLog log = run(s);
  CHECK(log.summary.outcome == Outcome::Timeout);
  CHECK(log.summary.rounds == 1);
  CHECK_FALSE(log.summary.message.empty());
}

TEST_CASE("global popcount never increases and time advances by dt") {
  Scenario s = box_scenario();
  s.t_max = 20.0;
  const SimLog log = run(s);
  REQUIRE(log.rounds.size() > 1);
  for (std::size_t n = 1; n < log.rounds.size(); ++n) {
    CHECK(log.rounds[n].status_popcount <= log.rounds[n - 1].status_popcount);
    CHECK(log.rounds[n].t == doctest::Approx(n * s.dt));
    for (std::size_t l = 0; l < log.rounds[n].status.size(); ++l) {
      CHECK(log.rounds[n].status[l] <= log.rounds[n - 1].status[l]);
    }
  }
  for (const RoundRecord& r : log.rounds) {
    for (const AgentRecord& a : r.agents) CHECK(s.region.contains(a.p));
  }
}

TEST_CASE("logs are identical for any worker count") {
  const Scenario s = box_scenario();
  RunOptions one;
  RunOptions many;
  many.workers = 4;
  const std::string a = log_text(run(s, one));
  const std::string b = log_text(run(s, many));
  CHECK(a.size() > 1000);
  CHECK(a == b);
}

TEST_CASE("streamed log matches the kept records") {
  const Scenario s = box_scenario();
  std::ostringstream stream;
  RunOptions opts;
  opts.log_stream = &stream;
  const SimLog log = run(s, opts);
  std::ostringstream kept;
  for (const RoundRecord& r : log.rounds) write_round(kept, r);
  CHECK(stream.str() == kept.str());
}

TEST_CASE("relabeling agents permutes their trajectories") {
  Scenario s = box_scenario();
  s.t_max = 1.0;
  // Generic starts: integer starts put grid nodes exactly between agents, and
  // ties go to the lower index, which relabeling changes.
  s.initial_positions = {{-13.71, -14.13, -13.87}, {23.83, -9.79, 20.11}, {-12.23, 21.91, 4.37}};
  Scenario swapped = s;
  std::reverse(swapped.initial_positions.begin(), swapped.initial_positions.end());
  const SimLog a = run(s);
  const SimLog b = run(swapped);
  REQUIRE(a.rounds.size() == b.rounds.size());
  const std::size_t n = s.initial_positions.size();
  for (std::size_t r = 0; r < a.rounds.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(a.rounds[r].agents[i].p == b.rounds[r].agents[n - 1 - i].p);
    }
    CHECK(a.rounds[r].status == b.rounds[r].status);
    CHECK(a.rounds[r].lyapunov == doctest::Approx(b.rounds[r].lyapunov).epsilon(1e-12));
  }
}

TEST_CASE("invalid starts are rejected") {
  Scenario s = box_scenario();
  s.initial_positions[1] = {5, 5, 20};  // 10 m above the roof
  CHECK_THROWS_AS(run(s), InvariantError);

  s = box_scenario();
  s.initial_positions[1] = s.initial_positions[0];
  CHECK_THROWS_AS(run(s), InvariantError);

  s = box_scenario();
  s.initial_positions[2] = {-12, 22, 40};
  CHECK_THROWS_AS(run(s), InvariantError);

  s = box_scenario();
  s.d_proj = 20.0;  // projections leave the region
  CHECK_THROWS_AS(run(s), InvariantError);

  s = box_scenario();
  RunOptions opts;
  opts.initial_status = StatusVector(3, 1);
  CHECK_THROWS_AS(run(s, opts), InvariantError);
}

TEST_CASE("facet completion needs all four members") {
  const std::vector<std::array<std::size_t, 4>> members{{0, 1, 2, 4}, {1, 2, 3, 5}};
  CHECK(facet_status({0, 0, 0, 1, 0, 0}, members) == std::vector<std::uint8_t>{1, 0});
  CHECK(facet_status({0, 0, 0, 0, 0, 0}, members) == std::vector<std::uint8_t>{1, 1});
  CHECK(facet_status({0, 0, 0, 0, 1, 0}, members) == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("round records serialize with the fixed field names") {
  RoundRecord r;
  r.t = 0.5;
  r.agents.push_back({{1, 2, 3}, {0, 0, 1}, {0.5, 0, 0}, {0, 0, 0}, {4, 5, 6}, 2.5, {1, 2}});
  r.status = {1, 1, 0, 0, 0, 1};
  r.status_popcount = 3;
  r.lyapunov = 7.25;
  r.facets_done = 1;
  std::ostringstream out;
  write_round(out, r);
  const std::string line = out.str();
  CHECK(std::count(line.begin(), line.end(), '\n') == 1);
  const auto j = nlohmann::json::parse(line);
  CHECK(j.size() == 6);
  CHECK(j["t"] == 0.5);
  CHECK(j["status_popcount"] == 3);
  CHECK(j["status_bits"] == nlohmann::json::parse("[[1,2],[0,3],[1,1]]"));
  CHECK(j["lyapunov"] == 7.25);
  CHECK(j["facets_done"] == 1);
  const auto& a = j["agents"][0];
  CHECK(a.size() == 7);
  CHECK(a["p"] == nlohmann::json::parse("[1.0,2.0,3.0]"));
  CHECK(a["centroid"] == nlohmann::json::parse("[4.0,5.0,6.0]"));
  CHECK(a["mass"] == 2.5);
  CHECK(a["neighbors"] == nlohmann::json::parse("[1,2]"));
  for (const char* key : {"v", "uc", "uo"}) CHECK(a.contains(key));
}

TEST_CASE("summary serialization") {
  RunSummary s;
  s.outcome = Outcome::Success;
  s.completion_time_s = 12.5;
  s.rounds = 251;
  s.min_pairwise_dist_m = std::numeric_limits<double>::infinity();
  s.min_target_dist_m = 3.0;
  std::ostringstream out;
  write_summary(out, s);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["success"] == true);
  CHECK(j["completion_time_s"] == 12.5);
  CHECK(j["min_pairwise_dist_m"].is_null());
  CHECK(j["min_target_dist_m"] == 3.0);
  CHECK(j["outcome"] == "success");
  CHECK(to_string(Outcome::SafetyAbort) == "safety_abort");
}
