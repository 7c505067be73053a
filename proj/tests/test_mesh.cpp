// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "maxrom/errors.hpp"
#include "maxrom/mesh.hpp"

using namespace maxrom;

TEST_CASE("resolution 2 without inclusions gives 8 triangles and 9 nodes, all vacuum") {
  const Mesh mesh = generate_mesh(1.0, 2);
  CHECK(mesh.num_triangles() == 8);
  CHECK(mesh.num_nodes() == 9);
  for (int t : mesh.tag) CHECK(t == kVacuumTag);
}

TEST_CASE("all triangles are positively oriented and cover the square") {
  const Mesh mesh = generate_mesh(2.6, 11);
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    CHECK(mesh.area(t) > 0.0);
    total += mesh.area(t);
  }
  CHECK(total == doctest::Approx(5.2 * 5.2).epsilon(1e-12));
}

TEST_CASE("every boundary edge belongs to exactly one triangle") {
  const Mesh mesh = generate_mesh(1.0, 5);
  const auto edges = mesh.boundary_edges();
  CHECK(edges.size() == 4 * 5);  // resolution segments per side
}

TEST_CASE("disk-tagged centroids lie inside the disk") {
  const Mesh mesh = generate_mesh(2.6, 40, {{InclusionShape::Disk, 0.6, 1}});
  std::size_t tagged = 0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto [x, y] = mesh.centroid(t);
    if (mesh.tag[t] == 1) {
      ++tagged;
      CHECK(x * x + y * y < 0.36);
    } else {
      CHECK(x * x + y * y >= 0.36);
    }
  }
  CHECK(tagged > 0);
}

TEST_CASE("concentric inclusions layer innermost-first") {
  const std::vector<Inclusion> layers = {{InclusionShape::Disk, 0.15, 1},
                                         {InclusionShape::Disk, 0.3, 2},
                                         {InclusionShape::Disk, 0.45, 3},
                                         {InclusionShape::Disk, 0.6, 4}};
  const Mesh mesh = generate_mesh(3.2, 64, layers);
  bool seen[5] = {false, false, false, false, false};
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto [x, y] = mesh.centroid(t);
    const double r = std::sqrt(x * x + y * y);
    const int tag = mesh.tag[t];
    seen[tag] = true;
    if (r < 0.15) CHECK(tag == 1);
    else if (r < 0.3) CHECK(tag == 2);
    else if (r < 0.45) CHECK(tag == 3);
    else if (r < 0.6) CHECK(tag == 4);
    else CHECK(tag == kVacuumTag);
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("identically-sized inclusions are rejected") {
  CHECK_THROWS_AS(generate_mesh(1.0, 4,
                                {{InclusionShape::Disk, 0.3, 1},
                                 {InclusionShape::Square, 0.3, 2}}),
                  std::invalid_argument);
}

TEST_CASE("bad generator arguments are rejected") {
  CHECK_THROWS_AS(generate_mesh(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_mesh(1.0, 4, {{InclusionShape::Disk, 1.5, 1}}),
                  std::invalid_argument);
}

TEST_CASE("mesh file round-trip preserves everything") {
  const Mesh mesh = generate_mesh(1.3, 6, {{InclusionShape::Disk, 0.4, 2}});
  const std::string path = "roundtrip.mesh";
  write_mesh(mesh, path);
  const Mesh back = read_mesh(path);
  REQUIRE(back.num_nodes() == mesh.num_nodes());
  REQUIRE(back.num_triangles() == mesh.num_triangles());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    CHECK(back.node_x[i] == mesh.node_x[i]);
    CHECK(back.node_y[i] == mesh.node_y[i]);
  }
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    CHECK(back.triangles[t] == mesh.triangles[t]);
    CHECK(back.tag[t] == mesh.tag[t]);
  }
  std::remove(path.c_str());
}

TEST_CASE("mesh reader reorients negatively oriented triangles") {
  const std::string path = "flipped.mesh";
  {
    std::ofstream out(path);
    out << "nodes 3\n0 0\n1 0\n0 1\n";
    out << "triangles 1\n0 2 1 0\n";  // clockwise on purpose
  }
  const Mesh mesh = read_mesh(path);
  CHECK(mesh.area(0) > 0.0);
  std::remove(path.c_str());
}

TEST_CASE("mesh reader reports malformed files") {
  const std::string path = "broken.mesh";
  {
    std::ofstream out(path);
    out << "vertices 3\n";
  }
  CHECK_THROWS_AS(read_mesh(path), MeshError);
  {
    std::ofstream out(path, std::ios::trunc);
    out << "nodes 2\n0 0\n1 0\ntriangles 1\n0 1 5 0\n";
  }
  CHECK_THROWS_AS(read_mesh(path), MeshError);
  std::remove(path.c_str());
}

TEST_CASE("material validation enforces physical ranges and defined tags") {
  const Mesh mesh = generate_mesh(1.0, 6, {{InclusionShape::Disk, 0.5, 1}});
  REQUIRE(std::count(mesh.tag.begin(), mesh.tag.end(), 1) > 0);
  MaterialMap ok = {{0, {1.0, 1.0}}, {1, {2.5, 1.0}}};
  CHECK_NOTHROW(validate_materials(mesh, ok));
  MaterialMap missing = {{0, {1.0, 1.0}}};
  CHECK_THROWS_AS(validate_materials(mesh, missing), std::invalid_argument);
  MaterialMap bad_eps = {{0, {0.5, 1.0}}, {1, {2.5, 1.0}}};
  CHECK_THROWS_AS(validate_materials(mesh, bad_eps), std::invalid_argument);
}
