#include <algorithm>
#include <fstream>
#include <limits>

#include "uavinspect/config.hpp"
#include "uavinspect/errors.hpp"

namespace uavinspect {

namespace {

std::size_t open_box_vertices(const BoxSubdivision& c) {
  return 2 * (c.along_x + c.along_y) * (c.along_z + 1) + (c.along_x - 1) * (c.along_y - 1);
}

std::size_t open_box_facets(const BoxSubdivision& c) {
  return 4 * (c.along_x + c.along_y) * c.along_z + 2 * c.along_x * c.along_y;
}

}  // namespace

BoxSubdivision solve_box_subdivision(std::size_t target_count, const Vec3& size) {
  constexpr std::size_t kMaxCuts = 64;
  BoxSubdivision best;
  double best_spread = std::numeric_limits<double>::infinity();
  for (std::size_t nx = 1; nx <= kMaxCuts; ++nx) {
    for (std::size_t ny = 1; ny <= kMaxCuts; ++ny) {
      for (std::size_t nz = 1; nz <= kMaxCuts; ++nz) {
        const BoxSubdivision c{nx, ny, nz};
        if (open_box_vertices(c) + open_box_facets(c) != target_count) continue;
        const double sx = size.x / static_cast<double>(nx);
        const double sy = size.y / static_cast<double>(ny);
        const double sz = size.z / static_cast<double>(nz);
        const double spread = std::max({sx, sy, sz}) / std::min({sx, sy, sz});
        if (spread < best_spread) {
          best_spread = spread;
          best = c;
        }
      }
    }
  }
  if (best.along_x == 0) {
    throw DegeneracyError("no open-box subdivision yields exactly " +
                          std::to_string(target_count) + " targets");
  }
  return best;
}

TriangleMesh make_open_box(const Vec3& lo, const Vec3& hi, const BoxSubdivision& cuts) {
  const std::size_t nx = cuts.along_x;
  const std::size_t ny = cuts.along_y;
  const std::size_t nz = cuts.along_z;
  if (nx == 0 || ny == 0 || nz == 0) throw InvariantError("subdivision counts must be positive");

  auto lerp = [](double a, double b, std::size_t k, std::size_t n) {
    return a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
  };

  // Perimeter walk, counter-clockwise seen from above, starting at (lo.x, lo.y).
  std::vector<std::pair<double, double>> ring;
  for (std::size_t i = 0; i < nx; ++i) ring.emplace_back(lerp(lo.x, hi.x, i, nx), lo.y);
  for (std::size_t j = 0; j < ny; ++j) ring.emplace_back(hi.x, lerp(lo.y, hi.y, j, ny));
  for (std::size_t i = nx; i > 0; --i) ring.emplace_back(lerp(lo.x, hi.x, i, nx), hi.y);
  for (std::size_t j = ny; j > 0; --j) ring.emplace_back(lo.x, lerp(lo.y, hi.y, j, ny));
  const std::size_t ring_size = ring.size();

  std::vector<Vec3> vertices;
  for (std::size_t k = 0; k <= nz; ++k) {
    const double z = lerp(lo.z, hi.z, k, nz);
    for (const auto& [x, y] : ring) vertices.push_back({x, y, z});
  }
  auto ring_vertex = [&](std::size_t level, std::size_t s) {
    return level * ring_size + (s % ring_size);
  };

  std::vector<Facet> facets;
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t s = 0; s < ring_size; ++s) {
      const std::size_t a = ring_vertex(k, s);
      const std::size_t b = ring_vertex(k, s + 1);
      const std::size_t c = ring_vertex(k + 1, s + 1);
      const std::size_t d = ring_vertex(k + 1, s);
      facets.push_back({a, b, c});
      facets.push_back({a, c, d});
    }
  }

  // Roof lattice: boundary nodes reuse the top ring, interior nodes are new.
  std::vector<std::size_t> roof((nx + 1) * (ny + 1));
  auto roof_at = [&](std::size_t i, std::size_t j) -> std::size_t& { return roof[j * (nx + 1) + i]; };
  for (std::size_t i = 0; i < nx; ++i) roof_at(i, 0) = ring_vertex(nz, i);
  for (std::size_t j = 0; j < ny; ++j) roof_at(nx, j) = ring_vertex(nz, nx + j);
  for (std::size_t i = nx; i > 0; --i) roof_at(i, ny) = ring_vertex(nz, nx + ny + (nx - i));
  for (std::size_t j = ny; j > 0; --j) roof_at(0, j) = ring_vertex(nz, 2 * nx + ny + (ny - j));
  for (std::size_t j = 1; j < ny; ++j) {
    for (std::size_t i = 1; i < nx; ++i) {
      roof_at(i, j) = vertices.size();
      vertices.push_back({lerp(lo.x, hi.x, i, nx), lerp(lo.y, hi.y, j, ny), hi.z});
    }
  }
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      facets.push_back({roof_at(i, j), roof_at(i + 1, j), roof_at(i + 1, j + 1)});
      facets.push_back({roof_at(i, j), roof_at(i + 1, j + 1), roof_at(i, j + 1)});
    }
  }
  return TriangleMesh::make(std::move(vertices), std::move(facets));
}

PaperScenario make_paper_scenario() {
  const Vec3 region_size{180.0, 180.0, 40.0};
  const Vec3 object_size{156.0, 78.0, 26.0};
  const Vec3 lo{(region_size.x - object_size.x) / 2, (region_size.y - object_size.y) / 2, 0.0};
  const Vec3 hi = lo + object_size;

  PaperScenario out;
  out.mesh = make_open_box(lo, hi, solve_box_subdivision(kPaperTargetCount, object_size));

  Scenario& s = out.scenario;
  s.region = {{0.0, 0.0, 0.0}, region_size};
  s.mesh_path = "object.obj";
  // The walls sit 12 m from the region faces, so the projection must stay below that.
  s.d_proj = 10.0;
  s.initial_positions = {
      {10.0, 20.0, 15.0}, {30.0, 9.0, 14.0}, {40.0, 17.0, 10.0}, {15.0, 30.0, 5.0}, {25.0, 20.0, 10.0}};
  s.gains = Gains{0.32, 0.86, 1000.0, 12.0, 10.0, 1000.0};
  s.alpha = 1.0;
  s.beta = 0.0075;
  s.dt = 0.05;
  s.t_max = 300.0;
  s.grid_h = 2.0;
  s.u_max = 20.0;
  s.log_path = "run.jsonl";
  s.summary_path = "summary.json";
  return out;
}

std::filesystem::path write_paper_scenario(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  PaperScenario paper = make_paper_scenario();
  {
    std::ofstream mesh_out(dir / "object.obj");
    if (!mesh_out) throw std::runtime_error("cannot write " + (dir / "object.obj").string());
    write_mesh(mesh_out, paper.mesh);
  }
  const auto config_path = dir / "scenario.cfg";
  std::ofstream cfg(config_path);
  if (!cfg) throw std::runtime_error("cannot write " + config_path.string());
  cfg << "# five-agent inspection of a 156 x 78 x 26 m object\n";
  emit_config(cfg, paper.scenario);
  if (!cfg) throw std::runtime_error("failed writing " + config_path.string());
  return config_path;
}

}  // namespace uavinspect
