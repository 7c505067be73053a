// SPDX-License-Identifier: Apache-2.0

#include "maxrom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "maxrom/errors.hpp"

namespace maxrom {

double Mesh::area(std::size_t t) const {
  const auto& tri = triangles[t];
  const double ax = node_x[tri[0]], ay = node_y[tri[0]];
  const double bx = node_x[tri[1]], by = node_y[tri[1]];
  const double cx = node_x[tri[2]], cy = node_y[tri[2]];
  return 0.5 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

std::array<double, 2> Mesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return {(node_x[tri[0]] + node_x[tri[1]] + node_x[tri[2]]) / 3.0,
          (node_y[tri[0]] + node_y[tri[1]] + node_y[tri[2]]) / 3.0};
}

std::vector<std::array<int, 2>> Mesh::boundary_edges() const {
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<std::array<int, 2>> edges;
  for (const auto& [key, c] : count) {
    if (c == 1) edges.push_back({key.first, key.second});
    if (c > 2) throw MeshError("non-manifold edge in mesh");
  }
  return edges;
}

namespace {

bool contains(const Inclusion& inc, double x, double y) {
  switch (inc.shape) {
    case InclusionShape::Disk:
      return x * x + y * y < inc.radius * inc.radius;
    case InclusionShape::Square:
      return std::max(std::abs(x), std::abs(y)) < inc.radius;
  }
  return false;
}

}  // namespace

Mesh generate_mesh(double half_width, int resolution,
                   const std::vector<Inclusion>& inclusions) {
  if (resolution < 2) throw std::invalid_argument("generate_mesh: resolution must be >= 2");
  for (const auto& inc : inclusions) {
    if (!(inc.radius > 0.0) || inc.radius >= half_width)
      throw std::invalid_argument("generate_mesh: inclusion radius must fit inside domain");
  }
  for (std::size_t i = 0; i < inclusions.size(); ++i)
    for (std::size_t j = i + 1; j < inclusions.size(); ++j)
      if (inclusions[i].radius == inclusions[j].radius)
        throw std::invalid_argument(
            "generate_mesh: overlapping identically-sized inclusion radii");

  const int n = resolution;
  const double h = 2.0 * half_width / n;
  Mesh mesh;
  mesh.node_x.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  mesh.node_y.reserve(mesh.node_x.capacity());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.node_x.push_back(-half_width + i * h);
      mesh.node_y.push_back(-half_width + j * h);
    }
  }
  auto id = [n](int i, int j) { return i + j * (n + 1); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {  // alternate diagonals for the crossed pattern
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      } else {
        mesh.triangles.push_back({a, b, d});
        mesh.triangles.push_back({b, c, d});
      }
    }
  }

  mesh.tag.resize(mesh.num_triangles(), kVacuumTag);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto [cx, cy] = mesh.centroid(t);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& inc : inclusions) {
      if (contains(inc, cx, cy) && inc.radius < best) {
        best = inc.radius;
        mesh.tag[t] = inc.tag;
      }
    }
  }
  return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  out << "nodes " << mesh.num_nodes() << "\n";
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    out << mesh.node_x[i] << " " << mesh.node_y[i] << "\n";
  out << "triangles " << mesh.num_triangles() << "\n";
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    out << mesh.triangles[t][0] << " " << mesh.triangles[t][1] << " "
        << mesh.triangles[t][2] << " " << mesh.tag[t] << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string word;
  std::size_t n;
  if (!(in >> word >> n) || word != "nodes")
    throw MeshError("mesh file: expected 'nodes N' header in " + path);
  Mesh mesh;
  mesh.node_x.resize(n);
  mesh.node_y.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!(in >> mesh.node_x[i] >> mesh.node_y[i]))
      throw MeshError("mesh file: bad node line " + std::to_string(i));
  std::size_t m;
  if (!(in >> word >> m) || word != "triangles")
    throw MeshError("mesh file: expected 'triangles M' header");
  mesh.triangles.resize(m);
  mesh.tag.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    auto& tri = mesh.triangles[t];
    if (!(in >> tri[0] >> tri[1] >> tri[2] >> mesh.tag[t]))
      throw MeshError("mesh file: bad triangle line " + std::to_string(t));
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || static_cast<std::size_t>(tri[k]) >= n)
        throw MeshError("mesh file: node index out of range in triangle " +
                        std::to_string(t));
    if (mesh.area(t) < 0.0) std::swap(tri[1], tri[2]);  // enforce CCW
  }
  return mesh;
}

void validate_materials(const Mesh& mesh, const MaterialMap& materials) {
  for (const auto& [tag, mat] : materials) {
    if (mat.eps_r < 1.0 || !(mat.nu_r > 0.0))
      throw std::invalid_argument("material tag " + std::to_string(tag) +
                                  ": need eps_r >= 1 and nu_r > 0");
  }
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    if (!materials.count(mesh.tag[t]))
      throw std::invalid_argument("triangle " + std::to_string(t) +
                                  " references undefined material tag " +
                                  std::to_string(mesh.tag[t]));
}

}  // namespace maxrom
