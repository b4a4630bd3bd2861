#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "uavinspect/vec3.hpp"

namespace uavinspect {

using Facet = std::array<std::size_t, 3>;

/// Triangulated boundary of the inspected object.
///
/// Invariants (checked by make()): facet indices in range, every facet has
/// area above kMinFacetArea, and every facet normal points away from the
/// vertex centroid. make() flips facets wound the other way; facets whose
/// plane contains the centroid keep their file winding.
class TriangleMesh {
 public:
  static constexpr double kMinFacetArea = 1e-9;

  TriangleMesh() = default;

  /// Validates and normalizes winding. Throws ParseError for bad indices,
  /// DegeneracyError for zero-area facets.
  static TriangleMesh make(std::vector<Vec3> vertices, std::vector<Facet> facets);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }

  /// Mean of all vertices; the interior reference point for outwardness.
  Vec3 interior_point() const;

  /// Cross product of the facet edges: direction is the outward normal,
  /// length is twice the facet area.
  Vec3 facet_area_vector(std::size_t facet) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Facet> facets_;
};

/// Axis-aligned cuboid the agents fly in.
struct InspectionRegion {
  Vec3 min;
  Vec3 max;

  /// Throws InvariantError unless min < max on every axis.
  void validate() const;
  bool contains(const Vec3& p) const;
  Vec3 clamp(const Vec3& p) const;
  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }

  friend bool operator==(const InspectionRegion&, const InspectionRegion&) = default;
};

/// Points to inspect, their outward projections and the normals used for them.
/// Ordering: all mesh vertices (file order) followed by all facet centers.
struct TargetSet {
  std::vector<Vec3> targets;
  std::vector<Vec3> projected;
  std::vector<Vec3> normals;
  /// Per facet: its 3 vertex targets followed by its center target.
  std::vector<std::array<std::size_t, 4>> facet_members;
  double d_proj = 0.0;

  std::size_t size() const { return targets.size(); }
};

/// Parses the `v x y z` / `f i j k` text format (1-based indices).
TriangleMesh parse_mesh(std::istream& in);
TriangleMesh load_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const TriangleMesh& mesh);

Vec3 facet_center(const TriangleMesh& mesh, std::size_t facet);

/// Builds targets = vertices ++ facet centers. Facet centers use the facet
/// normal; vertices use the normalized area-weighted mean of adjacent facet
/// normals. projected[l] = targets[l] + d_proj * normals[l].
TargetSet build_target_set(const TriangleMesh& mesh, double d_proj);

/// Throws InvariantError when the mesh or a projected point leaves the region.
void check_fits_region(const TriangleMesh& mesh, const TargetSet& targets,
                       const InspectionRegion& region);

}  // namespace uavinspect
