// SPDX-License-Identifier: Apache-2.0

#include "maxrom/dgtd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>

#include "maxrom/errors.hpp"

namespace maxrom {

PlaneWave incident_field(double x, double y, double t, double omega) {
  (void)y;
  const double phase = std::cos(omega * t - omega * x);  // k = omega / c, c = 1
  return {0.0, -phase, phase};
}

namespace {

// Reference bases on the unit triangle (0,0)-(1,0)-(0,1) as monomial
// coefficients over {1, r, s, r^2, rs, s^2}; vertices first, then midpoints.
constexpr double kBasisP1[3][6] = {
    {1, -1, -1, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}};
constexpr double kBasisP2[6][6] = {
    {1, -3, -3, 2, 4, 2}, {0, -1, 0, 2, 0, 0}, {0, 0, -1, 0, 0, 2},
    {0, 4, 0, -4, -4, 0}, {0, 0, 0, 0, 4, 0},  {0, 0, 4, 0, -4, -4}};
constexpr double kNodesP1[3][2] = {{0, 0}, {1, 0}, {0, 1}};
constexpr double kNodesP2[6][2] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};

// monomial exponents for {1, r, s, r^2, rs, s^2}
constexpr int kExp[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// exact integral of r^a s^b over the unit triangle
double tri_monomial_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

struct RefElement {
  std::size_t n_p;
  const double (*basis)[6];
  const double (*nodes)[2];
  std::vector<double> mass;    // n_p x n_p
  std::vector<double> sr, ss;  // integral of phi_i d(phi_j)/dr|ds
};

// derivative of a monomial-coefficient polynomial
std::array<double, 6> d_dr(const double* c) {
  // d/dr {1, r, s, r^2, rs, s^2} = {0, 1, 0, 2r, s, 0}
  return {c[1], 2.0 * c[3], c[4], 0.0, 0.0, 0.0};
}
std::array<double, 6> d_ds(const double* c) {
  return {c[2], c[4], 2.0 * c[5], 0.0, 0.0, 0.0};
}

double integrate_product(const double* p, const double* q) {
  double s = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (p[i] == 0.0) continue;
    for (int j = 0; j < 6; ++j) {
      if (q[j] == 0.0) continue;
      s += p[i] * q[j] *
           tri_monomial_integral(kExp[i][0] + kExp[j][0], kExp[i][1] + kExp[j][1]);
    }
  }
  return s;
}

RefElement build_reference(int order) {
  RefElement ref;
  ref.n_p = nodes_per_element(order);
  ref.basis = (order == 1) ? kBasisP1 : kBasisP2;
  ref.nodes = (order == 1) ? kNodesP1 : kNodesP2;
  ref.mass.assign(ref.n_p * ref.n_p, 0.0);
  ref.sr.assign(ref.n_p * ref.n_p, 0.0);
  ref.ss.assign(ref.n_p * ref.n_p, 0.0);
  for (std::size_t i = 0; i < ref.n_p; ++i) {
    for (std::size_t j = 0; j < ref.n_p; ++j) {
      ref.mass[i * ref.n_p + j] = integrate_product(ref.basis[i], ref.basis[j]);
      ref.sr[i * ref.n_p + j] = integrate_product(ref.basis[i], d_dr(ref.basis[j]).data());
      ref.ss[i * ref.n_p + j] = integrate_product(ref.basis[i], d_ds(ref.basis[j]).data());
    }
  }
  return ref;
}

// 1-D face mass matrices on the unit interval, nodes ordered along the edge
const std::vector<double>& face_mass_ref(int order) {
  static const std::vector<double> p1 = {1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3};
  static const std::vector<double> p2 = {4.0 / 30, 2.0 / 30,  -1.0 / 30, 2.0 / 30, 16.0 / 30,
                                         2.0 / 30, -1.0 / 30, 2.0 / 30,  4.0 / 30};
  return (order == 1) ? p1 : p2;
}

void invert_small(std::vector<double>& a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) throw MeshError("singular element mass matrix");
    if (piv != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    const double d = 1.0 / a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] *= d;
      inv[col * n + c] *= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  a = std::move(inv);
}

inline void block_matvec(const double* m, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * x[j];
    y[i] = s;
  }
}

void check_finite(const FieldState& s, const DgOperators& ops) {
  for (const auto* f : {&s.hx, &s.hy, &s.ez})
    for (double v : *f)
      if (!std::isfinite(v)) throw BlowUpError("non-finite field value", s.t);
  (void)ops;
}

}  // namespace

DgOperators assemble_operators(const Mesh& mesh, const MaterialMap& materials, int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("assemble_operators: order must be 1 or 2");
  validate_materials(mesh, materials);

  const RefElement ref = build_reference(order);
  DgOperators ops;
  ops.order = order;
  ops.n_p = ref.n_p;
  ops.n_fp = static_cast<std::size_t>(order + 1);
  ops.n_elems = mesh.num_triangles();

  if (order == 1) {
    ops.fnodes = {std::vector<int>{0, 1}, {1, 2}, {2, 0}};
  } else {
    ops.fnodes = {std::vector<int>{0, 3, 1}, {1, 4, 2}, {2, 5, 0}};
  }

  const std::size_t np = ops.n_p;
  const std::size_t bs = np * np;
  ops.mass.resize(ops.n_elems * bs);
  ops.minv_eps.resize(ops.n_elems * bs);
  ops.minv_nu.resize(ops.n_elems * bs);
  ops.sx.resize(ops.n_elems * bs);
  ops.sy.resize(ops.n_elems * bs);
  ops.eps.resize(ops.n_elems);
  ops.nu.resize(ops.n_elems);
  ops.dof_x.resize(ops.n_elems * np);
  ops.dof_y.resize(ops.n_elems * np);

  double min_inradius = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const auto& tri = mesh.triangles[e];
    const double x0 = mesh.node_x[tri[0]], y0 = mesh.node_y[tri[0]];
    const double x1 = mesh.node_x[tri[1]], y1 = mesh.node_y[tri[1]];
    const double x2 = mesh.node_x[tri[2]], y2 = mesh.node_y[tri[2]];
    const double xr = x1 - x0, yr = y1 - y0, xs = x2 - x0, ys = y2 - y0;
    const double detj = xr * ys - yr * xs;  // = 2 * area
    if (detj * 0.5 < 1e-14)
      throw MeshError("degenerate triangle " + std::to_string(e) + " (area " +
                      std::to_string(detj * 0.5) + ")");
    const double rx = ys / detj, sx_g = -yr / detj;
    const double ry = -xs / detj, sy_g = xr / detj;

    const double la = std::hypot(xr, yr);
    const double lb = std::hypot(x2 - x1, y2 - y1);
    const double lc = std::hypot(xs, ys);
    min_inradius = std::min(min_inradius, detj / (la + lb + lc));

    const Material& mat = materials.at(mesh.tag[e]);
    ops.eps[e] = mat.eps_r;
    ops.nu[e] = mat.nu_r;

    double* m = ops.mass.data() + e * bs;
    double* me = ops.minv_eps.data() + e * bs;
    double* mn = ops.minv_nu.data() + e * bs;
    double* sx = ops.sx.data() + e * bs;
    double* sy = ops.sy.data() + e * bs;
    for (std::size_t i = 0; i < bs; ++i) {
      m[i] = detj * ref.mass[i];
      sx[i] = detj * (rx * ref.sr[i] + sx_g * ref.ss[i]);
      sy[i] = detj * (ry * ref.sr[i] + sy_g * ref.ss[i]);
    }
    std::vector<double> tmp(m, m + bs);
    for (double& v : tmp) v *= mat.eps_r;
    invert_small(tmp, np);
    std::copy(tmp.begin(), tmp.end(), me);
    tmp.assign(m, m + bs);
    for (double& v : tmp) v *= mat.nu_r;
    invert_small(tmp, np);
    std::copy(tmp.begin(), tmp.end(), mn);

    for (std::size_t i = 0; i < np; ++i) {
      const double r = ref.nodes[i][0], s = ref.nodes[i][1];
      ops.dof_x[e * np + i] = x0 + r * xr + s * xs;
      ops.dof_y[e * np + i] = y0 + r * yr + s * ys;
    }
  }
  ops.cfl_dt = 0.5 * min_inradius / (order * order);

  // pair faces via sorted edge keys; singletons become absorbing boundary faces
  std::map<std::pair<int, int>, std::pair<int, int>> open;  // edge -> (elem, fid)
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    for (int f = 0; f < 3; ++f) {
      const int a = mesh.triangles[e][f];
      const int b = mesh.triangles[e][(f + 1) % 3];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(static_cast<int>(e), f));
      } else {
        DgOperators::Face face;
        face.left = it->second.first;
        face.fid_l = it->second.second;
        face.right = static_cast<int>(e);
        face.fid_r = f;
        open.erase(it);
        const int la = mesh.triangles[face.left][face.fid_l];
        const int lb = mesh.triangles[face.left][(face.fid_l + 1) % 3];
        const double dx = mesh.node_x[lb] - mesh.node_x[la];
        const double dy = mesh.node_y[lb] - mesh.node_y[la];
        face.len = std::hypot(dx, dy);
        face.nx = dy / face.len;
        face.ny = -dx / face.len;
        ops.faces.push_back(face);
      }
    }
  }
  for (const auto& [key, ef] : open) {
    DgOperators::Face face;
    face.left = ef.first;
    face.fid_l = ef.second;
    const int la = mesh.triangles[face.left][face.fid_l];
    const int lb = mesh.triangles[face.left][(face.fid_l + 1) % 3];
    const double dx = mesh.node_x[lb] - mesh.node_x[la];
    const double dy = mesh.node_y[lb] - mesh.node_y[la];
    face.len = std::hypot(dx, dy);
    face.nx = dy / face.len;
    face.ny = -dx / face.len;
    face.z = std::sqrt(ops.nu[face.left] / ops.eps[face.left]);
    ops.faces.push_back(face);
  }

  ops.face_mass.resize(ops.faces.size() * ops.n_fp * ops.n_fp);
  const std::vector<double>& fm = face_mass_ref(order);
  for (std::size_t f = 0; f < ops.faces.size(); ++f)
    for (std::size_t i = 0; i < ops.n_fp * ops.n_fp; ++i)
      ops.face_mass[f * ops.n_fp * ops.n_fp + i] = ops.faces[f].len * fm[i];

  // sanity: paired face nodes must coincide geometrically (reversed order)
  for (const auto& face : ops.faces) {
    if (face.right < 0) continue;
    for (std::size_t m = 0; m < ops.n_fp; ++m) {
      const std::size_t l = static_cast<std::size_t>(face.left) * np +
                            ops.fnodes[face.fid_l][m];
      const std::size_t r = static_cast<std::size_t>(face.right) * np +
                            ops.fnodes[face.fid_r][ops.n_fp - 1 - m];
      if (std::abs(ops.dof_x[l] - ops.dof_x[r]) + std::abs(ops.dof_y[l] - ops.dof_y[r]) >
          1e-10 * (1.0 + face.len))
        throw MeshError("non-conforming face between elements " +
                        std::to_string(face.left) + " and " + std::to_string(face.right));
    }
  }
  return ops;
}

namespace {

void scatter_face(const DgOperators& ops, std::size_t f, const DgOperators::Face& face,
                  const double* g, std::vector<double>& rhs_l, std::vector<double>& rhs_r,
                  bool has_right) {
  const std::size_t nfp = ops.n_fp;
  const double* mf = ops.face_mass.data() + f * nfp * nfp;
  double lifted[3];
  for (std::size_t i = 0; i < nfp; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < nfp; ++j) s += mf[i * nfp + j] * g[j];
    lifted[i] = s;
  }
  const auto& fl = ops.fnodes[face.fid_l];
  double* rl = rhs_l.data() + static_cast<std::size_t>(face.left) * ops.n_p;
  for (std::size_t i = 0; i < nfp; ++i) rl[fl[i]] += lifted[i];
  if (has_right) {
    const auto& fr = ops.fnodes[face.fid_r];
    double* rr = rhs_r.data() + static_cast<std::size_t>(face.right) * ops.n_p;
    for (std::size_t i = 0; i < nfp; ++i) rr[fr[nfp - 1 - i]] += lifted[i];
  }
}

}  // namespace

BoundaryTerms boundary_terms_e(const FieldState& s, const DgOperators& ops, double t_inc,
                               double omega, double amplitude) {
  BoundaryTerms bt;
  bt.e.assign(ops.dofs(), 0.0);
  const std::size_t np = ops.n_p;
  for (std::size_t f = 0; f < ops.faces.size(); ++f) {
    const auto& face = ops.faces[f];
    if (face.right >= 0) continue;
    const auto& fl = ops.fnodes[face.fid_l];
    double g[3];
    for (std::size_t m = 0; m < ops.n_fp; ++m) {
      const std::size_t d = static_cast<std::size_t>(face.left) * np + fl[m];
      const PlaneWave inc = incident_field(ops.dof_x[d], ops.dof_y[d], t_inc, omega);
      const double ht_inc = amplitude * (face.nx * inc.hy - face.ny * inc.hx);
      const double ez_inc = amplitude * inc.ez;
      const double ht = face.nx * s.hy[d] - face.ny * s.hx[d];
      const double w = (ez_inc - s.ez[d]) + face.z * (ht_inc - ht);
      g[m] = w / (2.0 * face.z);
    }
    scatter_face(ops, f, face, g, bt.e, bt.e, false);
  }
  return bt;
}

BoundaryTerms boundary_terms_h(const FieldState& s, const DgOperators& ops, double t_inc,
                               double omega, double amplitude) {
  BoundaryTerms bt;
  bt.hx.assign(ops.dofs(), 0.0);
  bt.hy.assign(ops.dofs(), 0.0);
  const std::size_t np = ops.n_p;
  for (std::size_t f = 0; f < ops.faces.size(); ++f) {
    const auto& face = ops.faces[f];
    if (face.right >= 0) continue;
    const auto& fl = ops.fnodes[face.fid_l];
    double gx[3], gy[3];
    for (std::size_t m = 0; m < ops.n_fp; ++m) {
      const std::size_t d = static_cast<std::size_t>(face.left) * np + fl[m];
      const PlaneWave inc = incident_field(ops.dof_x[d], ops.dof_y[d], t_inc, omega);
      const double ht_inc = amplitude * (face.nx * inc.hy - face.ny * inc.hx);
      const double ez_inc = amplitude * inc.ez;
      const double ht = face.nx * s.hy[d] - face.ny * s.hx[d];
      const double w = (ez_inc - s.ez[d]) + face.z * (ht_inc - ht);
      gx[m] = -face.ny * 0.5 * w;
      gy[m] = face.nx * 0.5 * w;
    }
    scatter_face(ops, f, face, gx, bt.hx, bt.hx, false);
    scatter_face(ops, f, face, gy, bt.hy, bt.hy, false);
  }
  return bt;
}

void advance_e(FieldState& s, const DgOperators& ops, double dt,
               const std::vector<double>& e_boundary_rhs) {
  const std::size_t np = ops.n_p;
  std::vector<double> rhs(ops.dofs());
  // volume:  Sx Hy - Sy Hx
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const double* sx = ops.sx.data() + e * np * np;
    const double* sy = ops.sy.data() + e * np * np;
    const double* hx = s.hx.data() + e * np;
    const double* hy = s.hy.data() + e * np;
    double* r = rhs.data() + e * np;
    for (std::size_t i = 0; i < np; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < np; ++j)
        acc += sx[i * np + j] * hy[j] - sy[i * np + j] * hx[j];
      r[i] = acc;
    }
  }
  // interior faces: centered jump of the tangential H
  for (std::size_t f = 0; f < ops.faces.size(); ++f) {
    const auto& face = ops.faces[f];
    if (face.right < 0) continue;
    const auto& fl = ops.fnodes[face.fid_l];
    const auto& fr = ops.fnodes[face.fid_r];
    double g[3];
    for (std::size_t m = 0; m < ops.n_fp; ++m) {
      const std::size_t dl = static_cast<std::size_t>(face.left) * np + fl[m];
      const std::size_t dr =
          static_cast<std::size_t>(face.right) * np + fr[ops.n_fp - 1 - m];
      const double ht_l = face.nx * s.hy[dl] - face.ny * s.hx[dl];
      const double ht_r = face.nx * s.hy[dr] - face.ny * s.hx[dr];
      g[m] = 0.5 * (ht_r - ht_l);
    }
    scatter_face(ops, f, face, g, rhs, rhs, true);
  }
  if (!e_boundary_rhs.empty())
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += e_boundary_rhs[i];

  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const double* mi = ops.minv_eps.data() + e * np * np;
    const double* r = rhs.data() + e * np;
    double* ez = s.ez.data() + e * np;
    double upd[6];
    block_matvec(mi, r, upd, np);
    for (std::size_t i = 0; i < np; ++i) ez[i] += dt * upd[i];
  }
}

void advance_h(FieldState& s, const DgOperators& ops, double dt,
               const std::vector<double>& hx_boundary_rhs,
               const std::vector<double>& hy_boundary_rhs) {
  const std::size_t np = ops.n_p;
  std::vector<double> rhs_x(ops.dofs()), rhs_y(ops.dofs());
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const double* sx = ops.sx.data() + e * np * np;
    const double* sy = ops.sy.data() + e * np * np;
    const double* ez = s.ez.data() + e * np;
    double* rx = rhs_x.data() + e * np;
    double* ry = rhs_y.data() + e * np;
    for (std::size_t i = 0; i < np; ++i) {
      double ax = 0.0, ay = 0.0;
      for (std::size_t j = 0; j < np; ++j) {
        ax -= sy[i * np + j] * ez[j];
        ay += sx[i * np + j] * ez[j];
      }
      rx[i] = ax;
      ry[i] = ay;
    }
  }
  for (std::size_t f = 0; f < ops.faces.size(); ++f) {
    const auto& face = ops.faces[f];
    if (face.right < 0) continue;
    const auto& fl = ops.fnodes[face.fid_l];
    const auto& fr = ops.fnodes[face.fid_r];
    double gx[3], gy[3];
    for (std::size_t m = 0; m < ops.n_fp; ++m) {
      const std::size_t dl = static_cast<std::size_t>(face.left) * np + fl[m];
      const std::size_t dr =
          static_cast<std::size_t>(face.right) * np + fr[ops.n_fp - 1 - m];
      const double jump = 0.5 * (s.ez[dr] - s.ez[dl]);
      gx[m] = -face.ny * jump;
      gy[m] = face.nx * jump;
    }
    scatter_face(ops, f, face, gx, rhs_x, rhs_x, true);
    scatter_face(ops, f, face, gy, rhs_y, rhs_y, true);
  }
  if (!hx_boundary_rhs.empty())
    for (std::size_t i = 0; i < rhs_x.size(); ++i) rhs_x[i] += hx_boundary_rhs[i];
  if (!hy_boundary_rhs.empty())
    for (std::size_t i = 0; i < rhs_y.size(); ++i) rhs_y[i] += hy_boundary_rhs[i];

  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const double* mi = ops.minv_nu.data() + e * np * np;
    double upd[6];
    block_matvec(mi, rhs_x.data() + e * np, upd, np);
    double* hx = s.hx.data() + e * np;
    for (std::size_t i = 0; i < np; ++i) hx[i] += dt * upd[i];
    block_matvec(mi, rhs_y.data() + e * np, upd, np);
    double* hy = s.hy.data() + e * np;
    for (std::size_t i = 0; i < np; ++i) hy[i] += dt * upd[i];
  }
}

void leapfrog_step(FieldState& s, const DgOperators& ops, double dt, double omega,
                   double amplitude) {
  if (!(std::abs(dt) <= ops.cfl_dt))
    throw std::invalid_argument("leapfrog_step: |dt| exceeds the CFL bound " +
                                std::to_string(ops.cfl_dt));
  const BoundaryTerms eb = boundary_terms_e(s, ops, s.t, omega, amplitude);
  advance_e(s, ops, dt, eb.e);
  s.t += dt;
  const BoundaryTerms hb = boundary_terms_h(s, ops, s.t - 0.5 * dt, omega, amplitude);
  advance_h(s, ops, dt, hb.hx, hb.hy);
  check_finite(s, ops);
}

void leapfrog_step_frozen(FieldState& s, const DgOperators& ops, double dt,
                          const BoundaryTerms& eb, const BoundaryTerms& hb) {
  advance_e(s, ops, dt, eb.e);
  s.t += dt;
  advance_h(s, ops, dt, hb.hx, hb.hy);
}

void leapfrog_step_frozen_reverse(FieldState& s, const DgOperators& ops, double dt,
                                  const BoundaryTerms& eb, const BoundaryTerms& hb) {
  advance_h(s, ops, -dt, hb.hx, hb.hy);
  advance_e(s, ops, -dt, eb.e);
  s.t -= dt;
}

Trajectory run_fom(const Mesh& mesh, const MaterialMap& materials, int order,
                   const FomOptions& opt) {
  if (!(opt.t_final >= 0.0)) throw std::invalid_argument("run_fom: t_final must be >= 0");
  const auto t0 = std::chrono::steady_clock::now();
  const DgOperators ops = assemble_operators(mesh, materials, order);
  if (opt.t_final > 0.0 && !(opt.dt > 0.0 && opt.dt <= ops.cfl_dt))
    throw std::invalid_argument("run_fom: dt must be positive and below the CFL bound " +
                                std::to_string(ops.cfl_dt));

  FieldState s;
  s.hx.assign(ops.dofs(), 0.0);
  s.hy.assign(ops.dofs(), 0.0);
  s.ez.assign(ops.dofs(), 0.0);
  if (opt.plane_wave_init) {
    for (std::size_t d = 0; d < ops.dofs(); ++d) {
      const PlaneWave e0 = incident_field(ops.dof_x[d], ops.dof_y[d], 0.0, opt.omega);
      s.ez[d] = opt.amplitude * e0.ez;
      const PlaneWave h0 =
          incident_field(ops.dof_x[d], ops.dof_y[d], 0.5 * opt.dt, opt.omega);
      s.hx[d] = opt.amplitude * h0.hx;
      s.hy[d] = opt.amplitude * h0.hy;
    }
  }

  Trajectory out;
  out.dt = opt.dt;
  out.omega = opt.omega;
  auto store = [&]() {
    if (s.t + 1e-12 >= opt.store_from) {
      out.times.push_back(s.t);
      out.hx.push_back(s.hx);
      out.hy.push_back(s.hy);
      out.ez.push_back(s.ez);
    }
  };
  store();
  const long steps = (opt.t_final > 0.0)
                         ? std::lround(opt.t_final / opt.dt)
                         : 0;
  for (long n = 0; n < steps; ++n) {
    leapfrog_step(s, ops, opt.dt, opt.omega, opt.amplitude);
    store();
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

double field_energy(const FieldState& s, const DgOperators& ops) {
  const std::size_t np = ops.n_p;
  double total = 0.0;
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const double* m = ops.mass.data() + e * np * np;
    const double* ez = s.ez.data() + e * np;
    const double* hx = s.hx.data() + e * np;
    const double* hy = s.hy.data() + e * np;
    double qe = 0.0, qx = 0.0, qy = 0.0;
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j) {
        qe += ez[i] * m[i * np + j] * ez[j];
        qx += hx[i] * m[i * np + j] * hx[j];
        qy += hy[i] * m[i * np + j] * hy[j];
      }
    total += ops.eps[e] * qe + ops.nu[e] * (qx + qy);
  }
  return total;
}

double l2_norm(const DgOperators& ops, std::span<const double> field) {
  const std::size_t np = ops.n_p;
  double total = 0.0;
  for (std::size_t e = 0; e < ops.n_elems; ++e) {
    const double* m = ops.mass.data() + e * np * np;
    const double* u = field.data() + e * np;
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j) total += u[i] * m[i * np + j] * u[j];
  }
  return std::sqrt(std::max(total, 0.0));
}

double eval_field(const Mesh& mesh, const DgOperators& ops, std::span<const double> field,
                  double x, double y) {
  const std::size_t np = ops.n_p;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles[e];
    const double x0 = mesh.node_x[tri[0]], y0 = mesh.node_y[tri[0]];
    const double xr = mesh.node_x[tri[1]] - x0, yr = mesh.node_y[tri[1]] - y0;
    const double xs = mesh.node_x[tri[2]] - x0, ys = mesh.node_y[tri[2]] - y0;
    const double detj = xr * ys - yr * xs;
    const double r = ((x - x0) * ys - (y - y0) * xs) / detj;
    const double s = (-(x - x0) * yr + (y - y0) * xr) / detj;
    if (r < -1e-12 || s < -1e-12 || r + s > 1.0 + 1e-12) continue;
    const double mono[6] = {1.0, r, s, r * r, r * s, s * s};
    const double(*basis)[6] = (ops.order == 1) ? kBasisP1 : kBasisP2;
    double v = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      double phi = 0.0;
      for (int k = 0; k < 6; ++k) phi += basis[i][k] * mono[k];
      v += field[e * np + i] * phi;
    }
    return v;
  }
  throw std::invalid_argument("eval_field: point outside mesh");
}

}  // namespace maxrom
