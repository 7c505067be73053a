// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "maxrom/dgtd.hpp"
#include "maxrom/errors.hpp"

using namespace maxrom;

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

MaterialMap vacuum_only() { return {{kVacuumTag, {1.0, 1.0}}}; }

void set_plane_wave(FieldState& s, const DgOperators& ops, double omega, double dt) {
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  for (std::size_t d = 0; d < ops.dofs(); ++d) {
    s.ez[d] = incident_field(ops.dof_x[d], ops.dof_y[d], 0.0, omega).ez;
    s.hy[d] = incident_field(ops.dof_x[d], ops.dof_y[d], 0.5 * dt, omega).hy;
  }
  s.t = 0.0;
}

double plane_wave_l2_error(const FieldState& s, const DgOperators& ops, double omega,
                           double dt) {
  std::vector<double> diff(ops.dofs());
  double err2 = 0.0;
  for (std::size_t d = 0; d < ops.dofs(); ++d)
    diff[d] = s.ez[d] - incident_field(ops.dof_x[d], ops.dof_y[d], s.t, omega).ez;
  err2 += std::pow(l2_norm(ops, diff), 2);
  for (std::size_t d = 0; d < ops.dofs(); ++d)
    diff[d] = s.hy[d] - incident_field(ops.dof_x[d], ops.dof_y[d], s.t + 0.5 * dt, omega).hy;
  err2 += std::pow(l2_norm(ops, diff), 2);
  for (std::size_t d = 0; d < ops.dofs(); ++d) diff[d] = s.hx[d];
  err2 += std::pow(l2_norm(ops, diff), 2);
  return std::sqrt(err2);
}

}  // namespace

TEST_CASE("incident plane wave values") {
  const PlaneWave w0 = incident_field(0.0, 0.0, 0.0, kTwoPi);
  CHECK(w0.hx == 0.0);
  CHECK(w0.hy == doctest::Approx(-1.0));
  CHECK(w0.ez == doctest::Approx(1.0));
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const PlaneWave w = incident_field(u(gen), u(gen), u(gen), kTwoPi);
    CHECK(w.hx == 0.0);
    CHECK(w.ez + w.hy == doctest::Approx(0.0));  // negation identity
  }
}

TEST_CASE("DOF counts follow the nodal pattern") {
  CHECK(nodes_per_element(1) == 3);
  CHECK(nodes_per_element(2) == 6);
  CHECK(n_dofs(2, 5044) == 30264);  // the reference disk discretization
}

TEST_CASE("single-triangle P1 mass matrix is the exact area/12 pattern") {
  Mesh mesh;
  mesh.node_x = {0.0, 2.0, 0.0};
  mesh.node_y = {0.0, 0.0, 1.0};
  mesh.triangles = {{0, 1, 2}};
  mesh.tag = {kVacuumTag};
  const double area = 1.0;
  MaterialMap mats = {{kVacuumTag, {3.0, 1.0}}};
  const DgOperators ops = assemble_operators(mesh, mats, 1);

  const double expected[3][3] = {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(ops.mass[i * 3 + j] ==
            doctest::Approx(area / 12.0 * expected[i][j]).epsilon(1e-13));

  // (eps M)^{-1} really inverts eps-scaled mass
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += ops.minv_eps[i * 3 + k] * 3.0 * ops.mass[k * 3 + j];
      CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("uniform materials make the two mass inverses equal blockwise") {
  const Mesh mesh = generate_mesh(1.0, 4);
  const DgOperators ops = assemble_operators(mesh, vacuum_only(), 2);
  for (std::size_t i = 0; i < ops.minv_eps.size(); ++i)
    CHECK(ops.minv_eps[i] == ops.minv_nu[i]);
}

TEST_CASE("degenerate triangles are rejected as mesh-quality errors") {
  Mesh mesh;
  mesh.node_x = {0.0, 1.0, 2.0};
  mesh.node_y = {0.0, 0.0, 0.0};
  mesh.triangles = {{0, 1, 2}};
  mesh.tag = {kVacuumTag};
  CHECK_THROWS_AS(assemble_operators(mesh, vacuum_only(), 1), MeshError);
}

TEST_CASE("unsupported order is rejected") {
  const Mesh mesh = generate_mesh(1.0, 2);
  CHECK_THROWS_AS(assemble_operators(mesh, vacuum_only(), 3), std::invalid_argument);
}

TEST_CASE("zero state with zero incident amplitude stays identically zero") {
  const Mesh mesh = generate_mesh(1.0, 6);
  const DgOperators ops = assemble_operators(mesh, vacuum_only(), 2);
  FieldState s;
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  for (int n = 0; n < 25; ++n) leapfrog_step(s, ops, 0.5 * ops.cfl_dt, kTwoPi, 0.0);
  for (double v : s.ez) CHECK(v == 0.0);
  for (double v : s.hx) CHECK(v == 0.0);
  for (double v : s.hy) CHECK(v == 0.0);
}

TEST_CASE("constant fields produce zero interior residual (centered-flux reciprocity)") {
  const Mesh mesh = generate_mesh(1.0, 6);
  const DgOperators ops = assemble_operators(mesh, vacuum_only(), 1);
  FieldState s;
  s.hx.assign(ops.dofs(), 0.7);
  s.hy.assign(ops.dofs(), -0.3);
  s.ez.assign(ops.dofs(), 1.1);
  FieldState after = s;
  const BoundaryTerms eb{std::vector<double>(ops.dofs(), 0.0), {}, {}};
  advance_e(after, ops, 0.5 * ops.cfl_dt, eb.e);

  // elements without a boundary face must be exactly unchanged
  std::vector<bool> has_boundary(ops.n_elems, false);
  for (const auto& face : ops.faces)
    if (face.right < 0) has_boundary[static_cast<std::size_t>(face.left)] = true;
  std::size_t interior = 0;
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    if (has_boundary[e]) continue;
    ++interior;
    for (std::size_t i = 0; i < ops.n_p; ++i)
      CHECK(after.ez[e * ops.n_p + i] == s.ez[e * ops.n_p + i]);
  }
  CHECK(interior > 0);
}

TEST_CASE("leapfrog is reversible with frozen boundary terms") {
  const Mesh mesh = generate_mesh(1.0, 5, {{InclusionShape::Disk, 0.4, 1}});
  MaterialMap mats = vacuum_only();
  mats[1] = {2.0, 1.0};
  const DgOperators ops = assemble_operators(mesh, mats, 2);
  const double dt = 0.5 * ops.cfl_dt;

  FieldState s;
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto* f : {&s.hx, &s.hy, &s.ez})
    for (double& v : *f) v = u(gen);
  const FieldState start = s;

  const BoundaryTerms eb = boundary_terms_e(s, ops, s.t, kTwoPi, 1.0);
  const BoundaryTerms hb = boundary_terms_h(s, ops, s.t + 0.5 * dt, kTwoPi, 1.0);
  leapfrog_step_frozen(s, ops, dt, eb, hb);
  leapfrog_step_frozen_reverse(s, ops, dt, eb, hb);

  double worst = 0.0, scale = 0.0;
  for (std::size_t d = 0; d < ops.dofs(); ++d) {
    worst = std::max({worst, std::abs(s.ez[d] - start.ez[d]),
                      std::abs(s.hx[d] - start.hx[d]), std::abs(s.hy[d] - start.hy[d])});
    scale = std::max(scale, std::abs(start.ez[d]));
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("vacuum plane wave is tracked and the error decreases under refinement") {
  const double omega = kTwoPi;
  double previous = 0.0;
  for (int level = 0; level < 2; ++level) {
    const int res = 8 << level;
    const Mesh mesh = generate_mesh(1.0, res);
    const DgOperators ops = assemble_operators(mesh, vacuum_only(), 2);
    const double dt = 1.0 / std::ceil(1.0 / (0.9 * ops.cfl_dt));
    FieldState s;
    set_plane_wave(s, ops, omega, dt);
    const long steps = std::lround(1.0 / dt);
    for (long n = 0; n < steps; ++n) leapfrog_step(s, ops, dt, omega, 1.0);
    const double err = plane_wave_l2_error(s, ops, omega, dt);
    if (level > 0) CHECK(err < 0.45 * previous);
    previous = err;
  }
}

TEST_CASE("energy stays bounded with the absorbing boundary active") {
  const Mesh mesh = generate_mesh(2.6, 12, {{InclusionShape::Disk, 0.6, 1}});
  MaterialMap mats = vacuum_only();
  mats[1] = {4.0, 1.0};
  const DgOperators ops = assemble_operators(mesh, mats, 1);
  const double dt = 0.8 * ops.cfl_dt;
  FieldState s;
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  double peak = 0.0;
  const long steps = std::lround(12.0 / dt);
  for (long n = 0; n < steps; ++n) {
    leapfrog_step(s, ops, dt, kTwoPi, 1.0);
    peak = std::max(peak, field_energy(s, ops));
  }
  // one more period; the established field must not grow
  double late_peak = 0.0;
  for (long n = 0; n < std::lround(1.0 / dt); ++n) {
    leapfrog_step(s, ops, dt, kTwoPi, 1.0);
    late_peak = std::max(late_peak, field_energy(s, ops));
  }
  CHECK(late_peak <= 1.05 * peak);
}

TEST_CASE("stability: 1e4 steps at 0.9 CFL keep fields bounded by 10x the drive") {
  const Mesh mesh = generate_mesh(2.6, 12, {{InclusionShape::Disk, 0.6, 1}});
  MaterialMap mats = vacuum_only();
  mats[1] = {5.0, 1.0};
  const DgOperators ops = assemble_operators(mesh, mats, 1);
  const double dt = 0.9 * ops.cfl_dt;
  FieldState s;
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  for (int n = 0; n < 10000; ++n) leapfrog_step(s, ops, dt, kTwoPi, 1.0);
  double peak = 0.0;
  for (auto* f : {&s.hx, &s.hy, &s.ez})
    for (double v : *f) peak = std::max(peak, std::abs(v));
  CHECK(peak <= 10.0);
}

TEST_CASE("dt above the CFL bound is rejected; blow-up raises BlowUpError") {
  const Mesh mesh = generate_mesh(1.0, 4);
  const DgOperators ops = assemble_operators(mesh, vacuum_only(), 1);
  FieldState s;
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  CHECK_THROWS_AS(leapfrog_step(s, ops, 2.0 * ops.cfl_dt, kTwoPi, 1.0),
                  std::invalid_argument);
  s.ez[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(leapfrog_step(s, ops, 0.5 * ops.cfl_dt, kTwoPi, 1.0), BlowUpError);
}

TEST_CASE("run_fom with t_final 0 returns just the initial state") {
  const Mesh mesh = generate_mesh(1.0, 3);
  FomOptions opt;
  opt.t_final = 0.0;
  opt.dt = 0.01;
  const Trajectory tr = run_fom(mesh, vacuum_only(), 1, opt);
  CHECK(tr.times.size() == 1);
  CHECK(tr.times[0] == 0.0);
  CHECK(tr.ez.size() == 1);
}

TEST_CASE("run_fom honours the storage window") {
  const Mesh mesh = generate_mesh(1.0, 4);
  const DgOperators ops = assemble_operators(mesh, vacuum_only(), 1);
  FomOptions opt;
  opt.dt = 0.5 * ops.cfl_dt;
  opt.t_final = 40 * opt.dt;
  opt.store_from = 20 * opt.dt;
  const Trajectory tr = run_fom(mesh, vacuum_only(), 1, opt);
  CHECK(tr.times.size() == 21);
  CHECK(tr.times.front() == doctest::Approx(opt.store_from).epsilon(1e-9));
  CHECK(tr.wall_seconds > 0.0);
}

TEST_CASE("eval_field interpolates the nodal representation") {
  const Mesh mesh = generate_mesh(1.0, 4);
  const DgOperators ops = assemble_operators(mesh, vacuum_only(), 2);
  std::vector<double> field(ops.dofs());
  // a polynomial the P2 space represents exactly
  for (std::size_t d = 0; d < ops.dofs(); ++d)
    field[d] = 1.0 + 2.0 * ops.dof_x[d] - ops.dof_y[d] +
               0.5 * ops.dof_x[d] * ops.dof_y[d];
  for (double x : {-0.9, -0.15, 0.33, 0.8}) {
    for (double y : {-0.77, 0.05, 0.6}) {
      const double expect = 1.0 + 2.0 * x - y + 0.5 * x * y;
      CHECK(eval_field(mesh, ops, field, x, y) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}
