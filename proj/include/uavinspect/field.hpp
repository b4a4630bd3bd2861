#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uavinspect/geometry.hpp"
#include "uavinspect/vec3.hpp"

namespace uavinspect {

/// b_l per target: 1 = still to inspect, 0 = inspected.
using StatusVector = std::vector<std::uint8_t>;
using StatusView = std::span<const std::uint8_t>;

/// Cells with less mass than this are treated as empty.
inline constexpr double kMassFloor = 1e-12;

/// Gaussian mixture centered on the projected targets, gated by status bits.
struct DensityField {
  std::span<const Vec3> projected;
  StatusView status;
  double alpha = 1.0;
  double beta = 0.0075;

  void validate() const;
};

/// Midpoint-rule lattice of cell centers that exactly tiles a region.
class QuadratureGrid {
 public:
  /// Throws InvariantError unless every region edge is an integer multiple of h.
  QuadratureGrid(const InspectionRegion& region, double h);

  const InspectionRegion& region() const { return region_; }
  double h() const { return h_; }
  double weight() const { return h_ * h_ * h_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t nz() const { return nz_; }
  std::size_t size() const { return nx_ * ny_ * nz_; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (k * ny_ + j) * nx_ + i;
  }
  double x(std::size_t i) const { return region_.min.x + (static_cast<double>(i) + 0.5) * h_; }
  double y(std::size_t j) const { return region_.min.y + (static_cast<double>(j) + 0.5) * h_; }
  double z(std::size_t k) const { return region_.min.z + (static_cast<double>(k) + 0.5) * h_; }
  Vec3 node(std::size_t i, std::size_t j, std::size_t k) const { return {x(i), y(j), z(k)}; }

 private:
  InspectionRegion region_;
  double h_;
  std::size_t nx_;
  std::size_t ny_;
  std::size_t nz_;
};

/// Nearest-agent owner of every grid node (ties to the lowest index).
struct Partition {
  std::vector<std::uint32_t> owner;
  std::size_t agents = 0;
};

Partition compute_partition(const QuadratureGrid& grid, std::span<const Vec3> positions,
                            unsigned workers = 1);

/// Raw per-cell sums; all already weighted by h^3.
struct CellIntegral {
  double mass = 0.0;
  Vec3 moment;        // sum of q * phi(q)
  double cost = 0.0;  // sum of 0.5 |q - p|^2 phi(q)
};

struct MassCentroid {
  double mass = 0.0;
  Vec3 centroid;
  bool valid = false;
};

/// Centroid from the cell sums; falls back to `position` when the cell is empty.
MassCentroid to_mass_centroid(const CellIntegral& cell, const Vec3& position);

/// Midpoint-rule cell sums for an arbitrary density `phi(q, owner)`.
/// Straightforward node loop; MixtureQuadrature is the fast path for the
/// Gaussian mixture.
template <typename Density>
std::vector<CellIntegral> integrate_cells(const QuadratureGrid& grid, const Partition& partition,
                                          std::span<const Vec3> positions, Density&& phi) {
  std::vector<CellIntegral> cells(partition.agents);
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::uint32_t o = partition.owner[grid.index(i, j, k)];
        const Vec3 q = grid.node(i, j, k);
        const double w = phi(q, static_cast<std::size_t>(o)) * grid.weight();
        cells[o].mass += w;
        cells[o].moment += q * w;
        cells[o].cost += 0.5 * squared_norm(q - positions[o]) * w;
      }
    }
  }
  return cells;
}

/// Gaussian-mixture quadrature over a fixed grid and fixed projected points.
///
/// exp(-beta |q - c|^2) factors into per-axis terms, so the 1D tables are built
/// once and every node costs one dot product over the targets. Work is split
/// into one chunk per z layer and reduced in layer order, which keeps results
/// bit-identical for any worker count.
class MixtureQuadrature {
 public:
  MixtureQuadrature(const QuadratureGrid& grid, std::span<const Vec3> projected, double alpha,
                    double beta);

  const QuadratureGrid& grid() const { return grid_; }
  std::size_t targets() const { return targets_; }
  double alpha() const { return alpha_; }

  /// Integrates each agent's cell using that agent's own status vector.
  std::vector<CellIntegral> integrate(const Partition& partition,
                                      std::span<const Vec3> positions,
                                      std::span<const StatusView> status_per_agent,
                                      unsigned workers = 1) const;

  /// Same, with one status vector shared by all agents.
  std::vector<CellIntegral> integrate(const Partition& partition,
                                      std::span<const Vec3> positions, StatusView status,
                                      unsigned workers = 1) const;

 private:
  QuadratureGrid grid_;
  std::size_t targets_;
  double alpha_;
  std::vector<double> ex_;  // [i * targets + l]
  std::vector<double> ey_;
  std::vector<double> ez_;
};

/// Sensing unreliability f = 0.5 |q - p|^2.
double unreliability(const Vec3& q, const Vec3& p);

double density_at(const Vec3& q, const DensityField& field);

/// True iff agent i is the nearest agent to q (ties go to the lower index).
bool owns(const Vec3& q, std::span<const Vec3> positions, std::size_t i);

MassCentroid mass_centroid(std::size_t i, std::span<const Vec3> positions,
                           const DensityField& field, const QuadratureGrid& grid);
MassCentroid mass_centroid(std::size_t i, std::span<const Vec3> positions,
                           const DensityField& field, const QuadratureGrid& grid,
                           const Partition& frozen);

double cost_H(std::span<const Vec3> positions, const DensityField& field,
              const QuadratureGrid& grid);
/// Cost with node ownership taken from `frozen` instead of the positions.
double cost_H(std::span<const Vec3> positions, const DensityField& field,
              const QuadratureGrid& grid, const Partition& frozen);

/// dH/dp_i = M (p_i - C); zero when the cell is empty.
Vec3 grad_H(std::size_t i, std::span<const Vec3> positions, const DensityField& field,
            const QuadratureGrid& grid);
Vec3 grad_H(std::size_t i, std::span<const Vec3> positions, const DensityField& field,
            const QuadratureGrid& grid, const Partition& frozen);

/// Agents owning a node 6-adjacent to a node owned by i.
std::vector<std::size_t> voronoi_neighbors(std::size_t i, std::span<const Vec3> positions,
                                           const QuadratureGrid& grid);

/// Neighbor lists of every agent, ascending; symmetric.
std::vector<std::vector<std::size_t>> neighbor_sets(const QuadratureGrid& grid,
                                                    const Partition& partition);

}  // namespace uavinspect
