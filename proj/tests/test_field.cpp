#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uavinspect/errors.hpp"
#include "uavinspect/field.hpp"

using namespace uavinspect;

namespace {

// Brute-force nearest agent, ties to the lowest index.
std::size_t nearest(const Vec3& q, std::span<const Vec3> positions) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < positions.size(); ++j) {
    if (squared_norm(q - positions[j]) < squared_norm(q - positions[best])) best = j;
  }
  return best;
}

// Direct node loop over density_at; independent of the separable kernel.
std::vector<CellIntegral> oracle_cells(const QuadratureGrid& grid, std::span<const Vec3> positions,
                                       std::span<const Vec3> projected,
                                       const std::vector<StatusVector>& status, double alpha,
                                       double beta) {
  std::vector<CellIntegral> cells(positions.size());
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const Vec3 q = grid.node(i, j, k);
        const std::size_t o = nearest(q, positions);
        double phi = 0.0;
        for (std::size_t l = 0; l < projected.size(); ++l) {
          if (status[o][l]) phi += alpha * std::exp(-beta * squared_norm(q - projected[l]));
        }
        const double w = phi * grid.weight();
        cells[o].mass += w;
        cells[o].moment += q * w;
        cells[o].cost += 0.5 * squared_norm(q - positions[o]) * w;
      }
    }
  }
  return cells;
}

Vec3 random_point(std::mt19937_64& rng, const InspectionRegion& region) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vec3 e = region.extent();
  return region.min + Vec3{u(rng) * e.x, u(rng) * e.y, u(rng) * e.z};
}

}  // namespace

TEST_CASE("density of one target") {
  const std::vector<Vec3> projected{{0, 0, 0}};
  StatusVector on{1};
  const DensityField field{projected, on, 1.0, 0.25};
  CHECK(density_at({1, 1, 1}, field) == doctest::Approx(0.4723665527410147).epsilon(1e-14));
  CHECK(density_at({0, 0, 0}, field) == 1.0);

  StatusVector off{0};
  CHECK(density_at({1, 1, 1}, DensityField{projected, off, 1.0, 0.25}) == 0.0);

  StatusVector wrong{1, 1};
  CHECK_THROWS_AS(density_at({0, 0, 0}, DensityField{projected, wrong, 1.0, 0.25}),
                  InvariantError);
  CHECK_THROWS_AS(density_at({0, 0, 0}, DensityField{projected, on, 0.0, 0.25}), InvariantError);
}

TEST_CASE("unreliability") {
  CHECK(unreliability({1, 2, 2}, {0, 0, 0}) == 4.5);
  CHECK(unreliability({3, 3, 3}, {3, 3, 3}) == 0.0);
}

TEST_CASE("ownership ties go to the lower index") {
  const std::vector<Vec3> agents{{0, 0, 0}, {2, 0, 0}};
  CHECK(owns({1, 0, 0}, agents, 0));
  CHECK_FALSE(owns({1, 0, 0}, agents, 1));
  CHECK(owns({1.5, 0, 0}, agents, 1));
  CHECK_FALSE(owns({1.5, 0, 0}, agents, 0));
  CHECK_THROWS_AS(owns({0, 0, 0}, agents, 2), InvariantError);
}

TEST_CASE("quadrature grid must tile the region") {
  const InspectionRegion region{{0, 0, 0}, {4, 2, 6}};
  const QuadratureGrid grid(region, 1.0);
  CHECK(grid.nx() == 4);
  CHECK(grid.ny() == 2);
  CHECK(grid.nz() == 6);
  CHECK(grid.node(0, 0, 0) == Vec3{0.5, 0.5, 0.5});
  CHECK(grid.index(1, 1, 1) == 1 + 4 + 8);
  CHECK_THROWS_AS(QuadratureGrid(region, 0.75), InvariantError);
  CHECK_THROWS_AS(QuadratureGrid(region, 0.0), InvariantError);
}

TEST_CASE("partition assigns every node to its nearest agent") {
  const InspectionRegion region{{-6, -6, -6}, {6, 6, 6}};
  const QuadratureGrid grid(region, 1.0);
  std::mt19937_64 rng(7);
  std::vector<Vec3> agents;
  for (int a = 0; a < 4; ++a) agents.push_back(random_point(rng, region));
  agents.push_back(agents[1]);  // coincident agents: the later one owns nothing

  const Partition part = compute_partition(grid, agents, 3);
  REQUIRE(part.owner.size() == grid.size());
  for (std::size_t k = 0; k < grid.nz(); ++k)
    for (std::size_t j = 0; j < grid.ny(); ++j)
      for (std::size_t i = 0; i < grid.nx(); ++i)
        CHECK(part.owner[grid.index(i, j, k)] == nearest(grid.node(i, j, k), agents));
  CHECK(compute_partition(grid, agents, 1).owner == part.owner);
}

TEST_CASE("uniform density centroid is the region center") {
  const InspectionRegion region{{0, 0, 0}, {4, 2, 6}};
  const QuadratureGrid grid(region, 1.0);
  const std::vector<Vec3> agent{{1, 1, 1}};
  const Partition part = compute_partition(grid, agent);
  const auto cells = integrate_cells(grid, part, agent, [](const Vec3&, std::size_t) { return 1.0; });
  const MassCentroid mc = to_mass_centroid(cells[0], agent[0]);
  CHECK(mc.valid);
  CHECK(mc.mass == doctest::Approx(48.0));
  CHECK(mc.centroid.x == doctest::Approx(2.0));
  CHECK(mc.centroid.y == doctest::Approx(1.0));
  CHECK(mc.centroid.z == doctest::Approx(3.0));
}

TEST_CASE("empty cells fall back to the agent position") {
  const MassCentroid mc = to_mass_centroid(CellIntegral{}, {3, 4, 5});
  CHECK_FALSE(mc.valid);
  CHECK(mc.mass == 0.0);
  CHECK(mc.centroid == Vec3{3, 4, 5});
}

TEST_CASE("coverage cost of a centered Gaussian matches the closed form") {
  // H = alpha (pi/beta)^{3/2} * 3 / (4 beta) for an agent on the peak.
  const double beta = 0.5;
  const InspectionRegion region{{-6, -6, -6}, {6, 6, 6}};
  const QuadratureGrid grid(region, 0.5);
  const std::vector<Vec3> projected{{0, 0, 0}};
  StatusVector on{1};
  const std::vector<Vec3> agent{{0, 0, 0}};
  for (double alpha : {1.0, 3.5}) {
    const DensityField field{projected, on, alpha, beta};
    const double expected = alpha * std::pow(std::numbers::pi / beta, 1.5) * 3.0 / (4.0 * beta);
    CHECK(cost_H(agent, field, grid) == doctest::Approx(expected).epsilon(1e-7));
    const MassCentroid mc = mass_centroid(0, agent, field, grid);
    CHECK(mc.mass == doctest::Approx(alpha * std::pow(std::numbers::pi / beta, 1.5)).epsilon(1e-7));
    CHECK(std::abs(mc.centroid.x) < 1e-12);
  }
  CHECK(23.62441491858363 ==
        doctest::Approx(std::pow(std::numbers::pi / beta, 1.5) * 3.0 / (4.0 * beta)));
}

TEST_CASE("off-center Gaussian centroid sits on the peak") {
  const InspectionRegion region{{-8, -8, -8}, {8, 8, 8}};
  const std::vector<Vec3> projected{{1.25, -0.75, 0.5}};
  StatusVector on{1};
  const DensityField field{projected, on, 1.0, 0.5};
  const std::vector<Vec3> agent{{-3, 2, 4}};
  const MassCentroid coarse = mass_centroid(0, agent, field, QuadratureGrid(region, 0.5));
  const MassCentroid fine = mass_centroid(0, agent, field, QuadratureGrid(region, 0.25));
  CHECK(norm(coarse.centroid - projected[0]) < 1e-9);
  CHECK(norm(fine.centroid - coarse.centroid) < 1e-9);
}

TEST_CASE("fast mixture quadrature agrees with the direct node loop") {
  const InspectionRegion region{{0, 0, 0}, {20, 16, 12}};
  const QuadratureGrid grid(region, 2.0);
  std::mt19937_64 rng(11);
  std::bernoulli_distribution bit(0.6);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vec3> projected;
    for (int l = 0; l < 9; ++l) projected.push_back(random_point(rng, region));
    std::vector<Vec3> agents;
    for (int a = 0; a < 3; ++a) agents.push_back(random_point(rng, region));
    std::vector<StatusVector> status(agents.size(), StatusVector(projected.size()));
    for (auto& s : status)
      for (auto& b : s) b = bit(rng) ? 1 : 0;
    std::vector<StatusView> views(status.begin(), status.end());

    const double alpha = 0.7;
    const double beta = 0.03;
    const MixtureQuadrature quad(grid, projected, alpha, beta);
    const Partition part = compute_partition(grid, agents);
    const auto fast = quad.integrate(part, agents, views);
    const auto slow = oracle_cells(grid, agents, projected, status, alpha, beta);
    for (std::size_t a = 0; a < agents.size(); ++a) {
      CHECK(fast[a].mass == doctest::Approx(slow[a].mass).epsilon(1e-12));
      CHECK(fast[a].cost == doctest::Approx(slow[a].cost).epsilon(1e-12));
      CHECK(norm(fast[a].moment - slow[a].moment) <= 1e-12 * (1.0 + norm(slow[a].moment)));
    }
  }
}

TEST_CASE("mixture quadrature is identical for any worker count") {
  const InspectionRegion region{{0, 0, 0}, {24, 24, 10}};
  const QuadratureGrid grid(region, 2.0);
  std::mt19937_64 rng(5);
  std::vector<Vec3> projected;
  for (int l = 0; l < 20; ++l) projected.push_back(random_point(rng, region));
  std::vector<Vec3> agents;
  for (int a = 0; a < 4; ++a) agents.push_back(random_point(rng, region));
  const StatusVector status(projected.size(), 1);
  const MixtureQuadrature quad(grid, projected, 1.0, 0.0075);
  const Partition part = compute_partition(grid, agents);
  const auto one = quad.integrate(part, agents, status, 1);
  const auto many = quad.integrate(part, agents, status, 4);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    CHECK(one[a].mass == many[a].mass);
    CHECK(one[a].cost == many[a].cost);
    CHECK(one[a].moment == many[a].moment);
  }
}

TEST_CASE("mass scales with alpha and the centroid does not") {
  const InspectionRegion region{{0, 0, 0}, {20, 20, 10}};
  const QuadratureGrid grid(region, 2.0);
  const std::vector<Vec3> projected{{4, 5, 3}, {15, 12, 7}, {9, 18, 5}};
  const StatusVector on(3, 1);
  const std::vector<Vec3> agents{{3, 3, 3}, {16, 16, 6}};
  const MassCentroid a = mass_centroid(0, agents, DensityField{projected, on, 1.0, 0.05}, grid);
  const MassCentroid b = mass_centroid(0, agents, DensityField{projected, on, 8.0, 0.05}, grid);
  CHECK(b.mass == doctest::Approx(8.0 * a.mass).epsilon(1e-13));
  CHECK(norm(b.centroid - a.centroid) < 1e-12);
}

TEST_CASE("grad_H matches central differences with a frozen partition") {
  const InspectionRegion region{{0, 0, 0}, {20, 20, 10}};
  const QuadratureGrid grid(region, 1.0);
  const std::vector<Vec3> projected{{4, 5, 3}, {15, 12, 7}, {9, 18, 5}};
  const StatusVector on(3, 1);
  const DensityField field{projected, on, 1.0, 0.05};
  std::vector<Vec3> agents{{3.3, 3.1, 2.7}, {16.2, 15.9, 6.1}, {8.4, 14.2, 4.4}};
  const Partition frozen = compute_partition(grid, agents);
  const double step = 1e-3;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Vec3 g = grad_H(i, agents, field, grid, frozen);
    CHECK(g == grad_H(i, agents, field, grid));
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<Vec3> plus = agents;
      std::vector<Vec3> minus = agents;
      double* pp = axis == 0 ? &plus[i].x : axis == 1 ? &plus[i].y : &plus[i].z;
      double* pm = axis == 0 ? &minus[i].x : axis == 1 ? &minus[i].y : &minus[i].z;
      *pp += step;
      *pm -= step;
      const double fd =
          (cost_H(plus, field, grid, frozen) - cost_H(minus, field, grid, frozen)) / (2 * step);
      const double analytic = axis == 0 ? g.x : axis == 1 ? g.y : g.z;
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-6).scale(norm(g)));
    }
  }
}

TEST_CASE("grad_H vanishes for an empty cell") {
  const InspectionRegion region{{0, 0, 0}, {10, 10, 10}};
  const QuadratureGrid grid(region, 1.0);
  const std::vector<Vec3> projected{{5, 5, 5}};
  const StatusVector off{0};
  const std::vector<Vec3> agent{{2, 2, 2}};
  CHECK(grad_H(0, agent, DensityField{projected, off, 1.0, 0.1}, grid) == Vec3{});
}

TEST_CASE("collinear agents: only adjacent cells are neighbors") {
  const InspectionRegion region{{-6, -6, -6}, {6, 6, 6}};
  const QuadratureGrid grid(region, 1.0);
  const std::vector<Vec3> agents{{-4, 0, 0}, {0, 0, 0}, {4, 0, 0}};
  CHECK(voronoi_neighbors(0, agents, grid) == std::vector<std::size_t>{1});
  CHECK(voronoi_neighbors(1, agents, grid) == std::vector<std::size_t>{0, 2});
  CHECK(voronoi_neighbors(2, agents, grid) == std::vector<std::size_t>{1});
  CHECK(voronoi_neighbors(0, std::vector<Vec3>{{0, 0, 0}}, grid).empty());
}

TEST_CASE("neighbor sets match brute-force grid adjacency and are symmetric") {
  const InspectionRegion region{{0, 0, 0}, {16, 16, 8}};
  const QuadratureGrid grid(region, 1.0);
  std::mt19937_64 rng(3);
  std::vector<Vec3> agents;
  for (int a = 0; a < 6; ++a) agents.push_back(random_point(rng, region));
  const Partition part = compute_partition(grid, agents);
  const auto sets = neighbor_sets(grid, part);

  std::vector<std::vector<bool>> adj(agents.size(), std::vector<bool>(agents.size(), false));
  const auto owner = [&](std::size_t i, std::size_t j, std::size_t k) {
    return nearest(grid.node(i, j, k), agents);
  };
  for (std::size_t k = 0; k < grid.nz(); ++k)
    for (std::size_t j = 0; j < grid.ny(); ++j)
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::size_t a = owner(i, j, k);
        const std::size_t others[3] = {i + 1 < grid.nx() ? owner(i + 1, j, k) : a,
                                       j + 1 < grid.ny() ? owner(i, j + 1, k) : a,
                                       k + 1 < grid.nz() ? owner(i, j, k + 1) : a};
        for (std::size_t b : others) {
          if (b != a) adj[a][b] = adj[b][a] = true;
        }
      }
  for (std::size_t a = 0; a < agents.size(); ++a) {
    std::vector<std::size_t> expected;
    for (std::size_t b = 0; b < agents.size(); ++b)
      if (adj[a][b]) expected.push_back(b);
    CHECK(sets[a] == expected);
    CHECK(voronoi_neighbors(a, agents, grid) == expected);
  }
}
