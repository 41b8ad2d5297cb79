#include "vertexlab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "vertexlab/errors.hpp"

namespace vertexlab {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
const CScalar kI{0.0, 1.0};

std::string at_vertex(int row, int col) {
  return "vertex(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

}  // namespace

CScalar line_angle(CScalar lambda, const ModelParams& params) {
  if (std::abs(params.eta) <= params.tol.singularity_guard) {
    throw ArgError("line_angle: |eta| is below the singularity guard");
  }
  return -kPi * lambda / params.eta;
}

CScalar EmbeddingMap::east_step(int c) const {
  if (c < 0 || c >= n_cols) throw GeometryError("east_step: column out of range");
  return std::exp(kI * col_angles[static_cast<std::size_t>(c)]);
}

CScalar EmbeddingMap::south_step(int r) const {
  if (r < 0 || r >= n_rows) throw GeometryError("south_step: row out of range");
  return std::exp(kI * row_angles[static_cast<std::size_t>(r)]);
}

CScalar EmbeddingMap::east_step_conj(int c) const {
  if (c < 0 || c >= n_cols) throw GeometryError("east_step_conj: column out of range");
  return std::exp(-kI * col_angles[static_cast<std::size_t>(c)]);
}

CScalar EmbeddingMap::south_step_conj(int r) const {
  if (r < 0 || r >= n_rows) throw GeometryError("south_step_conj: row out of range");
  return std::exp(-kI * row_angles[static_cast<std::size_t>(r)]);
}

CScalar EmbeddingMap::face_center(int i, int j) const {
  if (i < 0 || i > n_cols || j < 0 || j > n_rows) {
    throw GeometryError("face_center: dual face out of range");
  }
  CScalar z{};
  for (int c = 0; c < i; ++c) z += east_step(c);
  for (int r = 0; r < j; ++r) z += south_step(r);
  return z;
}

CScalar EmbeddingMap::point(const EdgeRef& edge) const {
  if (edge.orient == 'v') {
    if (edge.line < 0 || edge.line >= n_cols || edge.offset < 0 || edge.offset > n_rows) {
      throw GeometryError("point: vertical edge out of range");
    }
    return face_center(edge.line, edge.offset) + east_step(edge.line) / 2.0;
  }
  if (edge.orient == 'h') {
    if (edge.line < 0 || edge.line >= n_rows || edge.offset < 0 || edge.offset > n_cols) {
      throw GeometryError("point: horizontal edge out of range");
    }
    return face_center(edge.offset, edge.line) + south_step(edge.line) / 2.0;
  }
  throw ArgError("point: edge orientation must be 'v' or 'h'");
}

CScalar EmbeddingMap::angle_at(const EdgeRef& edge) const {
  if (edge.orient == 'v') {
    if (edge.line < 0 || edge.line >= n_cols) {
      throw GeometryError("angle_at: vertical edge out of range");
    }
    return col_angles[static_cast<std::size_t>(edge.line)];
  }
  if (edge.orient == 'h') {
    if (edge.line < 0 || edge.line >= n_rows) {
      throw GeometryError("angle_at: horizontal edge out of range");
    }
    return row_angles[static_cast<std::size_t>(edge.line)];
  }
  throw ArgError("angle_at: edge orientation must be 'v' or 'h'");
}

CScalar EmbeddingMap::opening_angle(int row, int col) const {
  if (row < 0 || row >= n_rows || col < 0 || col >= n_cols) {
    throw GeometryError("opening_angle: vertex out of range");
  }
  return col_angles[static_cast<std::size_t>(col)] - row_angles[static_cast<std::size_t>(row)];
}

std::array<CScalar, 4> EmbeddingMap::plaquette_points(int row, int col) const {
  const auto edges = plaquette_edges(row, col);
  return {point(edges[0]), point(edges[1]), point(edges[2]), point(edges[3])};
}

std::array<CScalar, 4> EmbeddingMap::plaquette_deltas(int row, int col) const {
  if (row < 0 || row >= n_rows || col < 0 || col >= n_cols) {
    throw GeometryError("plaquette_deltas: vertex out of range");
  }
  const CScalar u = east_step(col);
  const CScalar s = south_step(row);
  return {-u, s, u, -s};
}

std::array<CScalar, 4> EmbeddingMap::plaquette_deltas_conj(int row, int col) const {
  if (row < 0 || row >= n_rows || col < 0 || col >= n_cols) {
    throw GeometryError("plaquette_deltas_conj: vertex out of range");
  }
  const CScalar u = east_step_conj(col);
  const CScalar s = south_step_conj(row);
  return {-u, s, u, -s};
}

namespace {

EmbeddingMap build_map(int n_cols, int n_rows, const std::vector<CScalar>& cols,
                       const std::vector<CScalar>& rows, const ModelParams& params,
                       CScalar rotation) {
  EmbeddingMap map;
  map.n_cols = n_cols;
  map.n_rows = n_rows;
  map.col_angles.reserve(cols.size());
  map.row_angles.reserve(rows.size());
  for (const CScalar& lambda : cols) map.col_angles.push_back(rotation + line_angle(lambda, params));
  for (const CScalar& lambda : rows) map.row_angles.push_back(rotation + line_angle(lambda, params));
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      const CScalar theta = map.opening_angle(r, c);
      if (std::abs(std::sin(theta)) <= params.tol.singularity_guard) {
        throw GeometryError("embed: flat rhombus at " + at_vertex(r, c) +
                            " (line-angle difference is a multiple of pi)");
      }
    }
  }
  return map;
}

}  // namespace

EmbeddingMap embed(const VertexLatticeSpec& spec, const ModelParams& params, CScalar rotation) {
  spec.validate();
  return build_map(spec.n_cols, spec.n_rows, spec.col_lambdas, spec.row_lambdas, params, rotation);
}

EmbeddingMap embed(const SosLatticeSpec& spec, CScalar rotation) {
  spec.validate();
  return build_map(spec.n_cols, spec.n_rows, spec.col_lambdas, spec.row_lambdas, spec.params,
                   rotation);
}

std::array<EdgeRef, 4> plaquette_edges(int row, int col) {
  return {EdgeRef{'v', col, row}, EdgeRef{'h', row, col}, EdgeRef{'v', col, row + 1},
          EdgeRef{'h', row, col + 1}};
}

bool is_barred(ParafermionKind kind) {
  return kind == ParafermionKind::vertex_phi_bar || kind == ParafermionKind::sos_phi_bar;
}

std::string flavor_name(ParafermionKind kind, int index) {
  std::string base;
  switch (kind) {
    case ParafermionKind::vertex_phi: base = "phi"; break;
    case ParafermionKind::vertex_phi_bar: base = "phi_bar"; break;
    case ParafermionKind::sos_phi: base = "Phi"; break;
    case ParafermionKind::sos_phi_bar: base = "Phi_bar"; break;
  }
  return base + std::to_string(index);
}

Parafermion make_parafermion(ParafermionKind kind, int index, const ModelParams& params) {
  if (index != 0 && index != 1) {
    throw ArgError("make_parafermion: index must be 0 or 1");
  }
  CScalar spin;
  switch (kind) {
    case ParafermionKind::vertex_phi:
    case ParafermionKind::vertex_phi_bar:
      spin = CScalar{1.0} + kI * params.eta / kPi;
      break;
    case ParafermionKind::sos_phi:
    case ParafermionKind::sos_phi_bar:
      spin = (index == 0) ? CScalar{1.0} : CScalar{1.0} + 2.0 * kI * params.eta / kPi;
      break;
  }
  return Parafermion{kind, index, spin};
}

CScalar strip_spectral(const Parafermion& pf, CScalar lambda, CScalar current) {
  switch (pf.kind) {
    case ParafermionKind::vertex_phi:
      return std::exp(lambda) * current;
    case ParafermionKind::vertex_phi_bar:
      return std::exp(-lambda) * current;
    case ParafermionKind::sos_phi:
      return pf.index == 1 ? std::exp(2.0 * lambda) * current : current;
    case ParafermionKind::sos_phi_bar:
      return pf.index == 1 ? std::exp(-2.0 * lambda) * current : current;
  }
  throw ArgError("strip_spectral: unknown flavor");
}

CScalar parafermion_value(const Parafermion& pf, CScalar alpha, CScalar stripped_current) {
  const double sign = is_barred(pf.kind) ? +1.0 : -1.0;
  return std::exp(sign * kI * pf.spin * alpha) * stripped_current;
}

CScalar parafermion_value(const Parafermion& pf, const EmbeddingMap& map, const EdgeRef& at,
                          CScalar stripped_current) {
  return parafermion_value(pf, map.angle_at(at), stripped_current);
}

CScalar parafermion_from_raw(const Parafermion& pf, CScalar alpha, CScalar current) {
  const double sign = is_barred(pf.kind) ? +1.0 : -1.0;
  return std::exp(sign * kI * alpha) * current;
}

CheckResult check_parafermion_consistency(const Parafermion& pf, CScalar lambda, CScalar current,
                                          const ModelParams& params) {
  const CScalar alpha = line_angle(lambda, params);
  const CScalar raw_route = parafermion_from_raw(pf, alpha, current);
  const CScalar spin_route =
      parafermion_value(pf, alpha, strip_spectral(pf, lambda, current));
  return make_check("parafermion factorizations agree (" + flavor_name(pf.kind, pf.index) + ")",
                    residual(raw_route, spin_route), 1e-12);
}

CScalar contour_sum(const std::array<CScalar, 4>& values, const std::array<CScalar, 4>& deltas) {
  CScalar sum{};
  for (std::size_t k = 0; k < 4; ++k) sum += deltas[k] * values[k];
  return sum;
}

std::string contour_rows_to_json(const std::vector<ContourRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ContourRow& row : rows) {
    arr.push_back({{"plaquette_id", row.plaquette_id},
                   {"flavor", row.flavor},
                   {"abs_sum", row.abs_sum},
                   {"scale", row.scale},
                   {"pass", row.pass}});
  }
  return arr.dump();
}

namespace {

ContourCheck run_contour(const std::string& plaquette_id, const Parafermion& pf,
                         const std::array<CScalar, 4>& lambdas,
                         const std::array<CScalar, 4>& currents, const EmbeddingMap& map,
                         int row, int col, double rel_tol) {
  const auto edges = plaquette_edges(row, col);
  std::array<CScalar, 4> phis{};
  for (std::size_t k = 0; k < 4; ++k) {
    phis[k] = parafermion_value(pf, map, edges[k], strip_spectral(pf, lambdas[k], currents[k]));
  }
  const auto deltas =
      is_barred(pf.kind) ? map.plaquette_deltas_conj(row, col) : map.plaquette_deltas(row, col);
  const CScalar sum = contour_sum(phis, deltas);
  double scale = 0.0;
  for (std::size_t k = 0; k < 4; ++k) scale = std::max(scale, std::abs(deltas[k] * phis[k]));
  const double res = scale > 0.0 ? std::abs(sum) / scale : std::abs(sum);
  ContourRow out{plaquette_id, flavor_name(pf.kind, pf.index), std::abs(sum), scale,
                 res <= rel_tol};
  CheckResult check =
      make_check("contour " + plaquette_id + " " + out.flavor, res, rel_tol);
  return ContourCheck{check, out};
}

}  // namespace

ContourCheck check_vertex_contour(const VertexLatticeSpec& spec, int row, int col,
                                  std::pair<int, int> anchor, int i, bool barred,
                                  const ModelParams& params, CScalar rotation) {
  const EmbeddingMap map = embed(spec, params, rotation);
  const auto edges = plaquette_edges(row, col);
  const Parafermion pf = make_parafermion(
      barred ? ParafermionKind::vertex_phi_bar : ParafermionKind::vertex_phi, i, params);
  const GeneratorId gen{barred ? GenKind::f_bar : GenKind::f, i};
  const std::array<CScalar, 4> lambdas{
      spec.col_lambdas[static_cast<std::size_t>(col)],
      spec.row_lambdas[static_cast<std::size_t>(row)],
      spec.col_lambdas[static_cast<std::size_t>(col)],
      spec.row_lambdas[static_cast<std::size_t>(row)]};
  std::array<CScalar, 4> currents{};
  for (std::size_t k = 0; k < 4; ++k) {
    const TailPath tail = straight_tail(anchor, edges[k], spec);
    currents[k] = current_expectation(spec, tail, gen, params).value;
  }
  return run_contour(at_vertex(row, col), pf, lambdas, currents, map, row, col,
                     params.tol.rel_tol);
}

ContourCheck check_sos_contour(const SosLatticeSpec& lattice, int row, int col,
                               std::pair<int, int> anchor, int i, bool barred,
                               CScalar rotation) {
  const EmbeddingMap map = embed(lattice, rotation);
  const PlaquetteCurrents pc = sos_plaquette_currents(lattice, row, col, anchor, i, barred);
  if (std::abs(pc.z) <= lattice.params.tol.singularity_guard) {
    throw DegenerateNormalization("check_sos_contour: partition function too small");
  }
  const Parafermion pf = make_parafermion(
      barred ? ParafermionKind::sos_phi_bar : ParafermionKind::sos_phi, i, lattice.params);
  const std::array<CScalar, 4> lambdas{
      lattice.col_lambdas[static_cast<std::size_t>(col)],
      lattice.row_lambdas[static_cast<std::size_t>(row)],
      lattice.col_lambdas[static_cast<std::size_t>(col)],
      lattice.row_lambdas[static_cast<std::size_t>(row)]};
  std::array<CScalar, 4> currents{};
  for (std::size_t k = 0; k < 4; ++k) currents[k] = pc.raw[k] / pc.z;
  return run_contour(at_vertex(row, col), pf, lambdas, currents, map, row, col,
                     lattice.params.tol.rel_tol);
}

double face_combination_magnitude(const VertexLatticeSpec& spec, int i, int j,
                                  std::pair<int, int> anchor, GeneratorId gen,
                                  const ModelParams& params) {
  if (i < 1 || i >= spec.n_cols || j < 1 || j >= spec.n_rows) {
    throw GeometryError("face_combination_magnitude: face must be interior");
  }
  const std::array<EdgeRef, 4> edges{EdgeRef{'h', j - 1, i}, EdgeRef{'v', i - 1, j},
                                     EdgeRef{'h', j, i}, EdgeRef{'v', i, j}};
  std::array<CScalar, 4> vals{};
  double scale = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const TailPath tail = straight_tail(anchor, edges[k], spec);
    vals[k] = current_expectation(spec, tail, gen, params).value;
    scale = std::max(scale, std::abs(vals[k]));
  }
  const CScalar d = vals[0] + vals[1] - vals[2] - vals[3];
  return scale > 0.0 ? std::abs(d) / scale : std::abs(d);
}

CScalar boson_coupling(const ModelParams& params) { return CScalar{1.0} + kI * params.eta / kPi; }

FreeBosonCharge vertex_boson_charge(int index, bool barred, const ModelParams& params) {
  if (index != 0 && index != 1) {
    throw ArgError("vertex_boson_charge: index must be 0 or 1");
  }
  const CScalar g = boson_coupling(params);
  const CScalar e = (index == 0) ? g : -g;
  long m = (index == 0) ? 1 : -1;
  if (barred) m = -m;
  return FreeBosonCharge{e, m, g};
}

std::pair<CScalar, CScalar> boson_dimensions(const FreeBosonCharge& charge, double guard) {
  if (std::abs(charge.g) <= guard) {
    throw DegenerateCoupling("boson_dimensions: coupling magnitude below guard");
  }
  const CScalar mg = static_cast<double>(charge.m) * charge.g;
  const CScalar delta = (charge.e + mg) * (charge.e + mg) / (4.0 * charge.g);
  const CScalar delta_bar = (charge.e - mg) * (charge.e - mg) / (4.0 * charge.g);
  return {delta, delta_bar};
}

}  // namespace vertexlab
