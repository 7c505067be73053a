// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_DGTD_HPP
#define MAXROM_DGTD_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "maxrom/mesh.hpp"

namespace maxrom {

// Normalized units: vacuum wave speed c = 1, so the wave number is k = omega.

struct PlaneWave {
  double hx, hy, ez;
};

/// Incident plane wave travelling in +x: Hx = 0, Hy = -cos(wt - kx),
/// Ez = cos(wt - kx).
PlaneWave incident_field(double x, double y, double t, double omega);

inline std::size_t nodes_per_element(int order) {
  return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
}
inline std::size_t n_dofs(int order, std::size_t n_elements) {
  return n_elements * nodes_per_element(order);
}

/// Element-local operators of the nodal DG discretization with centered
/// fluxes and first-order Silver-Mueller absorbing boundary faces.
struct DgOperators {
  int order = 1;
  std::size_t n_p = 0;      // nodes per element
  std::size_t n_fp = 0;     // nodes per face
  std::size_t n_elems = 0;
  double cfl_dt = 0.0;      // stability bound for |dt|

  // per element, row-major n_p x n_p blocks
  std::vector<double> mass;      // detJ-scaled reference mass
  std::vector<double> minv_eps;  // (eps M)^-1
  std::vector<double> minv_nu;   // (nu M)^-1
  std::vector<double> sx, sy;    // integral of phi_i d(phi_j)/dx|dy
  std::vector<double> eps, nu;   // material per element

  std::vector<double> dof_x, dof_y;  // DOF coordinates, n_elems * n_p

  struct Face {
    int left = -1, right = -1;  // right < 0: absorbing boundary face
    int fid_l = 0, fid_r = 0;   // local face ids
    double nx = 0.0, ny = 0.0;  // outward normal of the left element
    double len = 0.0;
    double z = 1.0;  // boundary impedance sqrt(nu/eps) of the left element
  };
  std::vector<Face> faces;
  std::vector<double> face_mass;             // per face, n_fp x n_fp (edge-length scaled)
  std::array<std::vector<int>, 3> fnodes;    // element-local node ids per local face

  std::size_t dofs() const { return n_elems * n_p; }
  std::span<const double> block(const std::vector<double>& blocks, std::size_t e) const {
    return {blocks.data() + e * n_p * n_p, n_p * n_p};
  }
};

/// Nodal Lagrange operators of degree `order` (1 or 2). Throws MeshError on
/// degenerate triangles (area < 1e-14), invalid_argument on undefined tags.
DgOperators assemble_operators(const Mesh& mesh, const MaterialMap& materials, int order);

/// Fields of the TM system. Ez lives at integer times t; Hx, Hy at t + dt/2.
struct FieldState {
  std::vector<double> hx, hy, ez;
  double t = 0.0;
};

/// Boundary contributions (pre mass-inverse RHS) captured for reversibility
/// experiments: reused verbatim by the frozen-step entry points.
struct BoundaryTerms {
  std::vector<double> e, hx, hy;
};

BoundaryTerms boundary_terms_e(const FieldState& s, const DgOperators& ops, double t_inc,
                               double omega, double amplitude);
BoundaryTerms boundary_terms_h(const FieldState& s, const DgOperators& ops, double t_inc,
                               double omega, double amplitude);

void advance_e(FieldState& s, const DgOperators& ops, double dt,
               const std::vector<double>& e_boundary_rhs);
void advance_h(FieldState& s, const DgOperators& ops, double dt,
               const std::vector<double>& hx_boundary_rhs,
               const std::vector<double>& hy_boundary_rhs);

/// One full leapfrog step: Ez by dt from H at the half step, then Hx, Hy by dt
/// from the new Ez. Incident boundary terms are evaluated at t for the E
/// update and t + dt/2 for the H update. Throws invalid_argument when |dt|
/// exceeds the CFL bound, BlowUpError on non-finite fields.
void leapfrog_step(FieldState& s, const DgOperators& ops, double dt, double omega,
                   double amplitude);

/// Time-reversed step (H first with -dt, then Ez) using frozen boundary terms.
void leapfrog_step_frozen(FieldState& s, const DgOperators& ops, double dt,
                          const BoundaryTerms& eb, const BoundaryTerms& hb);
void leapfrog_step_frozen_reverse(FieldState& s, const DgOperators& ops, double dt,
                                  const BoundaryTerms& eb, const BoundaryTerms& hb);

struct FomOptions {
  double omega = 2.0 * 3.14159265358979323846;
  double amplitude = 1.0;
  double dt = 0.0;
  double t_final = 0.0;
  bool plane_wave_init = false;  // otherwise zero initial fields
  double store_from = 0.0;       // keep states with t >= store_from
};

struct Trajectory {
  std::vector<double> times;  // Ez times of stored states
  std::vector<std::vector<double>> hx, hy, ez;
  double dt = 0.0;
  double omega = 0.0;
  double wall_seconds = 0.0;
};

Trajectory run_fom(const Mesh& mesh, const MaterialMap& materials, int order,
                   const FomOptions& opt);

/// Discrete energy  sum_K (eps Ez' M Ez + nu (Hx' M Hx + Hy' M Hy)).
double field_energy(const FieldState& s, const DgOperators& ops);

/// Mass-matrix L2 norm of one scalar DOF vector.
double l2_norm(const DgOperators& ops, std::span<const double> field);

/// Point evaluation of a DOF field (linear search for the containing triangle).
double eval_field(const Mesh& mesh, const DgOperators& ops, std::span<const double> field,
                  double x, double y);

}  // namespace maxrom

#endif
