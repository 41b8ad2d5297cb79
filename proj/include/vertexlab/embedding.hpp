#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "vertexlab/sos_currents.hpp"
#include "vertexlab/vertex_lattice.hpp"

namespace vertexlab {

// Angle of the lattice line carrying spectral parameter lambda:
//   alpha = -pi * lambda / eta.
// Throws ArgError when |eta| is below the singularity guard.
CScalar line_angle(CScalar lambda, const ModelParams& params);

// Rhombic image of a lattice in the complex plane. Every column line c and
// row line r gets an angle (line_angle of its spectral parameter, plus one
// optional global rotation). Crossing column c eastward moves a dual-face
// center by exp(i alpha_c); crossing row r southward moves it by
// exp(i alpha_r). Each vertex (r, c) then sits inside a rhombus whose
// corners are the four surrounding face centers and whose edge midpoints
// are the images of the four lattice edges at that vertex. For real angles
// the edges have unit length and the conjugate edge vectors below are the
// literal complex conjugates; for complex spectral data the same formulas
// act as the analytic continuation.
struct EmbeddingMap {
  int n_cols = 0;
  int n_rows = 0;
  std::vector<CScalar> col_angles;  // one per column line
  std::vector<CScalar> row_angles;  // one per row line

  // Unit steps of the dual-face grid and their formal conjugates.
  CScalar east_step(int c) const;        // exp(+i col_angles[c])
  CScalar south_step(int r) const;       // exp(+i row_angles[r])
  CScalar east_step_conj(int c) const;   // exp(-i col_angles[c])
  CScalar south_step_conj(int r) const;  // exp(-i row_angles[r])

  // Center of dual face (i, j), i in [0, n_cols], j in [0, n_rows]; the
  // origin face (0, 0) sits at 0.
  CScalar face_center(int i, int j) const;

  // Image of a lattice edge: the midpoint of the rhombus edge it crosses.
  CScalar point(const EdgeRef& edge) const;

  // Angle of the lattice line through that edge.
  CScalar angle_at(const EdgeRef& edge) const;

  // Rhombus opening angle at the west corner of the plaquette around
  // vertex (row, col): col_angles[col] - row_angles[row].
  CScalar opening_angle(int row, int col) const;

  // The four edge midpoints around vertex (row, col), ordered N, W, S, E.
  std::array<CScalar, 4> plaquette_points(int row, int col) const;

  // Anticlockwise rhombus edge vectors through those midpoints, same order,
  // and their formal conjugates. The four vectors sum to zero.
  std::array<CScalar, 4> plaquette_deltas(int row, int col) const;
  std::array<CScalar, 4> plaquette_deltas_conj(int row, int col) const;
};

// Build the map for a spin or height lattice. Throws GeometryError when any
// column/row angle difference is a multiple of pi (flat rhombus), ArgError
// on degenerate eta. The rotation shifts every line angle by the same
// amount; contour sums are invariant under it.
EmbeddingMap embed(const VertexLatticeSpec& spec, const ModelParams& params,
                   CScalar rotation = CScalar{});
EmbeddingMap embed(const SosLatticeSpec& spec, CScalar rotation = CScalar{});

// The four lattice edges around vertex (row, col) in N, W, S, E order;
// shared by the spin and height plaquette drivers.
std::array<EdgeRef, 4> plaquette_edges(int row, int col);

enum class ParafermionKind { vertex_phi, vertex_phi_bar, sos_phi, sos_phi_bar };

bool is_barred(ParafermionKind kind);
std::string flavor_name(ParafermionKind kind, int index);

// A current flavor together with its spin exponent. The spin fixes the
// angular prefactor: vertex flavors carry s = 1 + i eta / pi for both
// indices; height flavors carry s = 1 for index 0 and s = 1 + 2 i eta / pi
// for index 1 (barred partners share the spin of their plain counterpart).
struct Parafermion {
  ParafermionKind kind = ParafermionKind::vertex_phi;
  int index = 0;
  CScalar spin{};
};

Parafermion make_parafermion(ParafermionKind kind, int index, const ModelParams& params);

// Removes the spectral-parameter factor that the insertion generator of
// this flavor carries on a line with parameter lambda: vertex currents lose
// exp(-lambda) (barred: exp(+lambda)), index-1 height currents lose
// exp(-2 lambda) (barred: exp(+2 lambda)), index-0 height currents carry
// none. The result is the stripped current the spin prefactor acts on.
CScalar strip_spectral(const Parafermion& pf, CScalar lambda, CScalar current);

// Spin-factored parafermion: exp(-i s alpha) * stripped current for plain
// flavors, exp(+i s alpha) for barred ones.
CScalar parafermion_value(const Parafermion& pf, CScalar alpha, CScalar stripped_current);
CScalar parafermion_value(const Parafermion& pf, const EmbeddingMap& map, const EdgeRef& at,
                          CScalar stripped_current);

// Raw factorization: exp(-i alpha) * current (barred: exp(+i alpha)). At
// the canonical angle alpha = -pi lambda / eta this equals the
// spin-factored form applied to the stripped current.
CScalar parafermion_from_raw(const Parafermion& pf, CScalar alpha, CScalar current);

// Equality of the two factorizations at the canonical angle of lambda.
CheckResult check_parafermion_consistency(const Parafermion& pf, CScalar lambda,
                                          CScalar current, const ModelParams& params);

// Discrete contour integral: sum of delta_k * value_k over one plaquette.
CScalar contour_sum(const std::array<CScalar, 4>& values, const std::array<CScalar, 4>& deltas);

// One row of a contour report.
struct ContourRow {
  std::string plaquette_id;
  std::string flavor;
  double abs_sum = 0.0;
  double scale = 0.0;  // largest |delta_k * value_k|
  bool pass = false;
};

std::string contour_rows_to_json(const std::vector<ContourRow>& rows);

struct ContourCheck {
  CheckResult check;
  ContourRow row;
};

// Contour integral of one current flavor around the plaquette of vertex
// (row, col): the four expectations grow from one anchor ring cell, each is
// stripped and spin-factored at its line angle, and the sum runs against
// the anticlockwise rhombus edges (their conjugates for barred flavors).
// The residual is |sum| / scale.
ContourCheck check_vertex_contour(const VertexLatticeSpec& spec, int row, int col,
                                  std::pair<int, int> anchor, int i, bool barred,
                                  const ModelParams& params, CScalar rotation = CScalar{});

// Height-model version around the same vertex geometry.
ContourCheck check_sos_contour(const SosLatticeSpec& lattice, int row, int col,
                               std::pair<int, int> anchor, int i, bool barred,
                               CScalar rotation = CScalar{});

// Complementary combination around dual face (i, j): current(N) +
// current(W) - current(S) - current(E) over the four edges bordering the
// face, normalized by the largest magnitude. The currents satisfy the
// around-a-vertex combination by construction but not this one; the value
// is returned for reporting and is never asserted small.
double face_combination_magnitude(const VertexLatticeSpec& spec, int i, int j,
                                  std::pair<int, int> anchor, GeneratorId gen,
                                  const ModelParams& params);

// Compactified free boson data: dimensions (delta, delta_bar) of the field
// with electric charge e and magnetic charge m at coupling g,
//   delta = (e + m g)^2 / (4 g),  delta_bar = (e - m g)^2 / (4 g),
// so delta - delta_bar = e m. The parafermion points sit at e = +-g, where
// g is the coupling below.
struct FreeBosonCharge {
  CScalar e{};
  long m = 0;
  CScalar g{};
};

// g = 1 + i eta / pi; equals the vertex parafermion spin.
CScalar boson_coupling(const ModelParams& params);

// Charges of the four vertex flavors: plain index 0 -> (g, 1), plain
// index 1 -> (-g, -1), barred index 0 -> (g, -1), barred index 1 -> (-g, 1).
FreeBosonCharge vertex_boson_charge(int index, bool barred, const ModelParams& params);

// Throws DegenerateCoupling when |g| <= guard.
std::pair<CScalar, CScalar> boson_dimensions(const FreeBosonCharge& charge,
                                             double guard = 1e-9);

}  // namespace vertexlab
