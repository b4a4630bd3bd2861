#include "uavinspect/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "uavinspect/errors.hpp"

namespace uavinspect {

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_real(const std::string& token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(at_line(line) + "invalid coordinate '" + token + "'");
  }
  return value;
}

std::size_t parse_index(const std::string& token, std::size_t line) {
  std::size_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || value == 0) {
    throw ParseError(at_line(line) + "invalid face index '" + token + "'");
  }
  return value - 1;
}

}  // namespace

TriangleMesh TriangleMesh::make(std::vector<Vec3> vertices, std::vector<Facet> facets) {
  TriangleMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.facets_ = std::move(facets);
  if (mesh.vertices_.empty() || mesh.facets_.empty()) {
    throw ParseError("mesh needs at least one vertex and one facet");
  }
  for (std::size_t v = 0; v < mesh.vertices_.size(); ++v) {
    if (!is_finite(mesh.vertices_[v])) {
      throw ParseError("vertex " + std::to_string(v + 1) + " is not finite");
    }
  }
  for (std::size_t f = 0; f < mesh.facets_.size(); ++f) {
    for (std::size_t idx : mesh.facets_[f]) {
      if (idx >= mesh.vertices_.size()) {
        throw ParseError("facet " + std::to_string(f + 1) + " references vertex " +
                         std::to_string(idx + 1) + " but the mesh has " +
                         std::to_string(mesh.vertices_.size()) + " vertices");
      }
    }
  }

  const Vec3 interior = mesh.interior_point();
  for (std::size_t f = 0; f < mesh.facets_.size(); ++f) {
    const Vec3 area_vec = mesh.facet_area_vector(f);
    if (0.5 * norm(area_vec) <= kMinFacetArea) {
      throw DegeneracyError("facet " + std::to_string(f + 1) + " has zero area");
    }
    // Facets coplanar with the interior point (e.g. an open planar patch) keep
    // the file's winding.
    const double side = dot(area_vec, facet_center(mesh, f) - interior);
    if (side < -1e-12 * norm(area_vec) * norm(facet_center(mesh, f) - interior)) {
      std::swap(mesh.facets_[f][1], mesh.facets_[f][2]);
    }
  }
  return mesh;
}

Vec3 TriangleMesh::interior_point() const {
  Vec3 sum;
  for (const Vec3& v : vertices_) sum += v;
  return sum * (1.0 / static_cast<double>(vertices_.size()));
}

Vec3 TriangleMesh::facet_area_vector(std::size_t facet) const {
  const Facet& f = facets_.at(facet);
  const Vec3& a = vertices_[f[0]];
  return cross(vertices_[f[1]] - a, vertices_[f[2]] - a);
}

void InspectionRegion::validate() const {
  if (!is_finite(min) || !is_finite(max) || !(min.x < max.x) || !(min.y < max.y) ||
      !(min.z < max.z)) {
    throw InvariantError("inspection region needs finite min < max on every axis");
  }
}

bool InspectionRegion::contains(const Vec3& p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
         p.z <= max.z;
}

Vec3 InspectionRegion::clamp(const Vec3& p) const {
  return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
          std::clamp(p.z, min.z, max.z)};
}

TriangleMesh parse_mesh(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<Facet> facets;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(raw);
    std::string kind;
    if (!(fields >> kind)) continue;  // blank line
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (kind == "v") {
      if (tokens.size() != 3) {
        throw ParseError(at_line(line) + "vertex needs exactly 3 coordinates");
      }
      vertices.push_back({parse_real(tokens[0], line), parse_real(tokens[1], line),
                          parse_real(tokens[2], line)});
    } else if (kind == "f") {
      if (tokens.size() != 3) {
        throw ParseError(at_line(line) + "only triangular faces are supported, got " +
                         std::to_string(tokens.size()) + " indices");
      }
      Facet f{parse_index(tokens[0], line), parse_index(tokens[1], line),
              parse_index(tokens[2], line)};
      facets.push_back(f);
    } else {
      throw ParseError(at_line(line) + "unsupported record type '" + kind + "'");
    }
  }
  return TriangleMesh::make(std::move(vertices), std::move(facets));
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  return parse_mesh(in);
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << std::setprecision(17);
  for (const Vec3& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const Facet& f : mesh.facets()) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
}

Vec3 facet_center(const TriangleMesh& mesh, std::size_t facet) {
  const Facet& f = mesh.facets().at(facet);
  const auto& v = mesh.vertices();
  return (v[f[0]] + v[f[1]] + v[f[2]]) * (1.0 / 3.0);
}

TargetSet build_target_set(const TriangleMesh& mesh, double d_proj) {
  if (!(d_proj > 0.0) || !std::isfinite(d_proj)) {
    throw InvariantError("projection distance must be positive");
  }
  const auto& vertices = mesh.vertices();
  const auto& facets = mesh.facets();
  const std::size_t nv = vertices.size();

  // Sum of un-normalized facet normals weights each facet by its area.
  std::vector<Vec3> vertex_accum(nv);
  std::vector<Vec3> facet_normals(facets.size());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const Vec3 area_vec = mesh.facet_area_vector(f);
    facet_normals[f] = area_vec * (1.0 / norm(area_vec));
    for (std::size_t idx : facets[f]) vertex_accum[idx] += area_vec;
  }

  TargetSet out;
  out.d_proj = d_proj;
  out.targets.reserve(nv + facets.size());
  out.normals.reserve(nv + facets.size());
  for (std::size_t v = 0; v < nv; ++v) {
    const double len = norm(vertex_accum[v]);
    if (!(len > 1e-12)) {
      throw DegeneracyError("vertex " + std::to_string(v + 1) +
                            " has no usable normal (unreferenced or opposing facets)");
    }
    out.targets.push_back(vertices[v]);
    out.normals.push_back(vertex_accum[v] * (1.0 / len));
  }
  for (std::size_t f = 0; f < facets.size(); ++f) {
    out.targets.push_back(facet_center(mesh, f));
    out.normals.push_back(facet_normals[f]);
    out.facet_members.push_back({facets[f][0], facets[f][1], facets[f][2], nv + f});
  }
  out.projected.reserve(out.targets.size());
  for (std::size_t l = 0; l < out.targets.size(); ++l) {
    out.projected.push_back(out.targets[l] + d_proj * out.normals[l]);
  }
  return out;
}

void check_fits_region(const TriangleMesh& mesh, const TargetSet& targets,
                       const InspectionRegion& region) {
  region.validate();
  for (std::size_t v = 0; v < mesh.vertices().size(); ++v) {
    if (!region.contains(mesh.vertices()[v])) {
      throw InvariantError("mesh vertex " + std::to_string(v + 1) +
                           " lies outside the inspection region");
    }
  }
  for (std::size_t l = 0; l < targets.projected.size(); ++l) {
    if (!region.contains(targets.projected[l])) {
      throw InvariantError("projected target " + std::to_string(l) +
                           " lies outside the inspection region; reduce d_proj");
    }
  }
}

}  // namespace uavinspect
