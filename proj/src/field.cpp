#include "uavinspect/field.hpp"

#include <cmath>
#include <string>

#include "uavinspect/errors.hpp"
#include "uavinspect/parallel.hpp"

namespace uavinspect {

namespace {

std::size_t cells_along(double length, double h, const char* axis) {
  const double count = length / h;
  const double rounded = std::round(count);
  if (rounded < 1.0 || std::abs(count - rounded) > 1e-9 * std::max(1.0, count)) {
    throw InvariantError(std::string("region edge along ") + axis +
                         " is not an integer multiple of the grid resolution");
  }
  return static_cast<std::size_t>(rounded);
}

std::vector<double> axis_table(std::size_t cells, std::size_t targets,
                               std::span<const Vec3> projected, int axis, double beta,
                               const QuadratureGrid& grid) {
  std::vector<double> table(cells * targets);
  for (std::size_t c = 0; c < cells; ++c) {
    const double coord = axis == 0 ? grid.x(c) : (axis == 1 ? grid.y(c) : grid.z(c));
    for (std::size_t l = 0; l < targets; ++l) {
      const double d = coord - projected[l][axis];
      table[c * targets + l] = std::exp(-beta * d * d);
    }
  }
  return table;
}

void check_positions(std::span<const Vec3> positions) {
  if (positions.empty()) throw InvariantError("at least one agent position is required");
  for (const Vec3& p : positions) {
    if (!is_finite(p)) throw InvariantError("agent position is not finite");
  }
}

}  // namespace

void DensityField::validate() const {
  if (status.size() != projected.size()) {
    throw InvariantError("status vector length differs from the number of projected targets");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta)) {
    throw InvariantError("density parameters alpha and beta must be finite and positive");
  }
}

QuadratureGrid::QuadratureGrid(const InspectionRegion& region, double h)
    : region_{region}, h_{h} {
  region.validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw InvariantError("grid resolution must be positive");
  const Vec3 extent = region.extent();
  nx_ = cells_along(extent.x, h, "x");
  ny_ = cells_along(extent.y, h, "y");
  nz_ = cells_along(extent.z, h, "z");
}

Partition compute_partition(const QuadratureGrid& grid, std::span<const Vec3> positions,
                            unsigned workers) {
  check_positions(positions);
  Partition out;
  out.agents = positions.size();
  out.owner.resize(grid.size());
  for_each_chunk(grid.nz(), workers, [&](std::size_t k) {
    const double z = grid.z(k);
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const double y = grid.y(j);
      std::uint32_t* row = out.owner.data() + grid.index(0, j, k);
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const Vec3 q{grid.x(i), y, z};
        std::uint32_t best = 0;
        double best_d = squared_norm(q - positions[0]);
        for (std::size_t a = 1; a < positions.size(); ++a) {
          const double d = squared_norm(q - positions[a]);
          if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(a);
          }
        }
        row[i] = best;
      }
    }
  });
  return out;
}

MassCentroid to_mass_centroid(const CellIntegral& cell, const Vec3& position) {
  if (!(cell.mass >= kMassFloor)) return {cell.mass, position, false};
  return {cell.mass, cell.moment * (1.0 / cell.mass), true};
}

MixtureQuadrature::MixtureQuadrature(const QuadratureGrid& grid,
                                     std::span<const Vec3> projected, double alpha, double beta)
    : grid_{grid}, targets_{projected.size()}, alpha_{alpha} {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw InvariantError("density parameters alpha and beta must be positive");
  }
  ex_ = axis_table(grid_.nx(), targets_, projected, 0, beta, grid_);
  ey_ = axis_table(grid_.ny(), targets_, projected, 1, beta, grid_);
  ez_ = axis_table(grid_.nz(), targets_, projected, 2, beta, grid_);
}

std::vector<CellIntegral> MixtureQuadrature::integrate(const Partition& partition,
                                                       std::span<const Vec3> positions,
                                                       std::span<const StatusView> status_per_agent,
                                                       unsigned workers) const {
  const std::size_t agents = positions.size();
  const std::size_t L = targets_;
  if (partition.agents != agents || partition.owner.size() != grid_.size()) {
    throw InvariantError("partition does not match the grid and agent count");
  }
  if (status_per_agent.size() != agents) {
    throw InvariantError("one status vector per agent is required");
  }
  for (const StatusView& s : status_per_agent) {
    if (s.size() != L) throw InvariantError("status vector length differs from target count");
  }

  std::vector<std::vector<CellIntegral>> per_layer(grid_.nz(),
                                                   std::vector<CellIntegral>(agents));
  for_each_chunk(grid_.nz(), workers, [&](std::size_t k) {
    auto& acc = per_layer[k];
    // Row weights b_l * ey * ez for each agent, rebuilt lazily per row.
    std::vector<double> weights(agents * L);
    std::vector<std::size_t> row_tag(agents, static_cast<std::size_t>(-1));
    const double* ez = ez_.data() + k * L;
    const double z = grid_.z(k);
    for (std::size_t j = 0; j < grid_.ny(); ++j) {
      const double* ey = ey_.data() + j * L;
      const double y = grid_.y(j);
      const std::uint32_t* owner = partition.owner.data() + grid_.index(0, j, k);
      for (std::size_t i = 0; i < grid_.nx(); ++i) {
        const std::uint32_t o = owner[i];
        double* w = weights.data() + o * L;
        if (row_tag[o] != j) {
          const std::uint8_t* bits = status_per_agent[o].data();
          for (std::size_t l = 0; l < L; ++l) w[l] = bits[l] ? ey[l] * ez[l] : 0.0;
          row_tag[o] = j;
        }
        const double* ex = ex_.data() + i * L;
        double phi = 0.0;
#pragma omp simd reduction(+ : phi)
        for (std::size_t l = 0; l < L; ++l) phi += w[l] * ex[l];

        const Vec3 q{grid_.x(i), y, z};
        CellIntegral& cell = acc[o];
        cell.mass += phi;
        cell.moment += q * phi;
        cell.cost += 0.5 * squared_norm(q - positions[o]) * phi;
      }
    }
  });

  std::vector<CellIntegral> total(agents);
  for (const auto& layer : per_layer) {
    for (std::size_t a = 0; a < agents; ++a) {
      total[a].mass += layer[a].mass;
      total[a].moment += layer[a].moment;
      total[a].cost += layer[a].cost;
    }
  }
  const double scale = alpha_ * grid_.weight();
  for (CellIntegral& cell : total) {
    cell.mass *= scale;
    cell.moment *= scale;
    cell.cost *= scale;
  }
  return total;
}

std::vector<CellIntegral> MixtureQuadrature::integrate(const Partition& partition,
                                                       std::span<const Vec3> positions,
                                                       StatusView status,
                                                       unsigned workers) const {
  std::vector<StatusView> shared(positions.size(), status);
  return integrate(partition, positions, shared, workers);
}

double unreliability(const Vec3& q, const Vec3& p) { return 0.5 * squared_norm(q - p); }

double density_at(const Vec3& q, const DensityField& field) {
  field.validate();
  double phi = 0.0;
  for (std::size_t l = 0; l < field.projected.size(); ++l) {
    if (field.status[l]) {
      phi += field.alpha * std::exp(-field.beta * squared_norm(q - field.projected[l]));
    }
  }
  return phi;
}

bool owns(const Vec3& q, std::span<const Vec3> positions, std::size_t i) {
  if (i >= positions.size()) throw InvariantError("agent index out of range");
  const double mine = squared_norm(q - positions[i]);
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == i) continue;
    const double other = squared_norm(q - positions[j]);
    if (j < i ? other <= mine : other < mine) return false;
  }
  return true;
}

namespace {

std::vector<CellIntegral> integrate_field(std::span<const Vec3> positions,
                                          const DensityField& field,
                                          const QuadratureGrid& grid, const Partition& partition) {
  field.validate();
  check_positions(positions);
  MixtureQuadrature quad(grid, field.projected, field.alpha, field.beta);
  return quad.integrate(partition, positions, field.status);
}

}  // namespace

MassCentroid mass_centroid(std::size_t i, std::span<const Vec3> positions,
                           const DensityField& field, const QuadratureGrid& grid,
                           const Partition& frozen) {
  if (i >= positions.size()) throw InvariantError("agent index out of range");
  return to_mass_centroid(integrate_field(positions, field, grid, frozen)[i], positions[i]);
}

MassCentroid mass_centroid(std::size_t i, std::span<const Vec3> positions,
                           const DensityField& field, const QuadratureGrid& grid) {
  return mass_centroid(i, positions, field, grid, compute_partition(grid, positions));
}

double cost_H(std::span<const Vec3> positions, const DensityField& field,
              const QuadratureGrid& grid, const Partition& frozen) {
  double total = 0.0;
  for (const CellIntegral& cell : integrate_field(positions, field, grid, frozen)) {
    total += cell.cost;
  }
  return total;
}

double cost_H(std::span<const Vec3> positions, const DensityField& field,
              const QuadratureGrid& grid) {
  return cost_H(positions, field, grid, compute_partition(grid, positions));
}

Vec3 grad_H(std::size_t i, std::span<const Vec3> positions, const DensityField& field,
            const QuadratureGrid& grid, const Partition& frozen) {
  const MassCentroid mc = mass_centroid(i, positions, field, grid, frozen);
  if (!mc.valid) return {};
  return mc.mass * (positions[i] - mc.centroid);
}

Vec3 grad_H(std::size_t i, std::span<const Vec3> positions, const DensityField& field,
            const QuadratureGrid& grid) {
  return grad_H(i, positions, field, grid, compute_partition(grid, positions));
}

std::vector<std::vector<std::size_t>> neighbor_sets(const QuadratureGrid& grid,
                                                    const Partition& partition) {
  const std::size_t n = partition.agents;
  std::vector<std::uint8_t> adjacent(n * n, 0);
  auto mark = [&](std::uint32_t a, std::uint32_t b) {
    if (a != b) {
      adjacent[a * n + b] = 1;
      adjacent[b * n + a] = 1;
    }
  };
  const auto& owner = partition.owner;
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::uint32_t o = owner[grid.index(i, j, k)];
        if (i + 1 < grid.nx()) mark(o, owner[grid.index(i + 1, j, k)]);
        if (j + 1 < grid.ny()) mark(o, owner[grid.index(i, j + 1, k)]);
        if (k + 1 < grid.nz()) mark(o, owner[grid.index(i, j, k + 1)]);
      }
    }
  }
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (adjacent[a * n + b]) out[a].push_back(b);
    }
  }
  return out;
}

std::vector<std::size_t> voronoi_neighbors(std::size_t i, std::span<const Vec3> positions,
                                           const QuadratureGrid& grid) {
  if (i >= positions.size()) throw InvariantError("agent index out of range");
  return neighbor_sets(grid, compute_partition(grid, positions))[i];
}

}  // namespace uavinspect
