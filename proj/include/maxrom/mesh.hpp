// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_MESH_HPP
#define MAXROM_MESH_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

namespace maxrom {

constexpr int kVacuumTag = 0;

struct Material {
  double eps_r = 1.0;  // relative permittivity, >= 1
  double nu_r = 1.0;   // relative permeability, > 0
};
using MaterialMap = std::map<int, Material>;

enum class InclusionShape { Disk, Square };

struct Inclusion {
  InclusionShape shape = InclusionShape::Disk;
  double radius = 0.0;  // disk radius, or half-width for squares
  int tag = 0;
};

/// Triangulated domain with per-element material tags. Triangles are
/// positively oriented; boundary edges are the ones owned by a single triangle.
struct Mesh {
  std::vector<double> node_x, node_y;       // meters
  std::vector<std::array<int, 3>> triangles;  // CCW node indices
  std::vector<int> tag;                     // material tag per triangle

  std::size_t num_nodes() const { return node_x.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  double area(std::size_t t) const;
  std::array<double, 2> centroid(std::size_t t) const;

  /// Edges that belong to exactly one triangle (all tagged absorbing).
  std::vector<std::array<int, 2>> boundary_edges() const;
};

/// Structured crossed-triangle mesh of the square [-half_width, half_width]^2
/// with `resolution` cells per side. Each triangle is tagged by the innermost
/// inclusion containing its centroid, vacuum otherwise.
Mesh generate_mesh(double half_width, int resolution,
                   const std::vector<Inclusion>& inclusions = {});

/// Plain-text format: line "nodes N", N lines "x y", line "triangles M",
/// M lines "i j k tag" with zero-based indices.
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(const std::string& path);

void validate_materials(const Mesh& mesh, const MaterialMap& materials);

}  // namespace maxrom

#endif
