#include "vertexlab/sos_currents.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "vertexlab/errors.hpp"

namespace vertexlab {

namespace {

using json = nlohmann::json;
using Cell = std::pair<int, int>;

CScalar guarded_sinh(CScalar z, double guard, const char* what) {
  const CScalar s = std::sinh(z);
  if (std::abs(s) <= guard) throw SingularHeight(what);
  return s;
}

bool adjacent1(long u, long v) { return std::labs(u - v) == 1; }

std::array<long, 2> nb(long k) { return {k - 1, k + 1}; }

// tau_mu^- closed form; tau_mu^+ is the flip (a,b,c,d) -> (b,a,d,c).
CScalar tau_minus_closed(CScalar mu, long a, long b, long c, long d,
                         const ModelParams& params) {
  if (!adjacent1(a, b) || !adjacent1(c, d)) return {0.0, 0.0};
  const double pmq = static_cast<double>(c - d);
  const double pmb = static_cast<double>(b - a);
  const CScalar eta = params.eta;
  const CScalar num =
      std::sinh((pmq * height_value(d, params) + pmb * height_value(a, params)) * eta * 0.5 +
                mu * eta);
  const CScalar den =
      guarded_sinh(height_value(d, params) * eta, params.tol.singularity_guard,
                   "tail square hit a sinh zero in its denominator");
  return pmq * num / den;
}

CScalar tau_closed(CScalar mu, char sign, long a, long b, long c, long d,
                   const ModelParams& params) {
  if (sign == '-') return tau_minus_closed(mu, a, b, c, d, params);
  if (sign == '+') return tau_minus_closed(mu, b, a, d, c, params);
  throw ArgError("tail square sign must be '-' or '+'");
}

}  // namespace

double mu_value(int i) {
  if (i == 0) return 1.0;
  if (i == 1) return -1.0;
  throw ArgError("current index must be 0 or 1");
}

CScalar dressed_f(int i, bool barred, long a, long b, long c, CScalar lambda,
                  const ModelParams& params) {
  if (i != 0 && i != 1) throw ArgError("current index must be 0 or 1");
  if (!adjacent1(a, b) || !adjacent1(a, c)) return {0.0, 0.0};
  const CScalar eta = params.eta;
  const CScalar av = height_value(a, params);
  const double pmc = static_cast<double>(c - a);
  const CScalar den = 2.0 * guarded_sinh(av * eta, params.tol.singularity_guard,
                                         "triangle weight hit a sinh zero at its apex");
  // Plain index-0 and index-1 numerators; the barred family swaps them and
  // carries the extra exp(2 lambda + eta) factor.
  const bool use_one = barred ? (i == 0) : (i == 1);
  CScalar num;
  if (!use_one) {
    num = pmc * (b == c ? CScalar{1.0, 0.0} : std::exp(pmc * av * eta));
  } else {
    num = -pmc * std::exp(-2.0 * lambda) *
          (b == c ? CScalar{1.0, 0.0} : std::exp(-pmc * av * eta));
  }
  if (barred) num *= std::exp(2.0 * lambda + eta);
  return num / den;
}

CScalar dressed_f_contraction(int i, bool barred, long a, long b, long c, CScalar lambda,
                              const ModelParams& params) {
  if (i != 0 && i != 1) throw ArgError("current index must be 0 or 1");
  if (!adjacent1(a, b) || !adjacent1(a, c)) return {0.0, 0.0};
  const auto cov = intertwiner(IntertwinerKind::psi_star, a, c, lambda, params);
  const auto vec = intertwiner(IntertwinerKind::psi, a, b, lambda, params);
  const SiteOperator g =
      generator_on_v(GeneratorId{barred ? GenKind::f_bar : GenKind::f, i}, lambda, params);
  CScalar out{0.0, 0.0};
  for (int o = 0; o < 2; ++o) {
    for (int in = 0; in < 2; ++in) out += cov[static_cast<std::size_t>(o)] * g(o, in) *
                                          vec[static_cast<std::size_t>(in)];
  }
  return out;
}

CScalar dressed_t(int i, char sign, long a, long b, long c, long d,
                  const ModelParams& params) {
  return tau_closed(CScalar(mu_value(i), 0.0), sign, a, b, c, d, params);
}

CScalar dressed_tau(CScalar mu, char sign, long a, long b, long c, long d, CScalar lambda,
                    const ModelParams& params) {
  if (sign != '-' && sign != '+') throw ArgError("tail square sign must be '-' or '+'");
  if (!adjacent1(a, b) || !adjacent1(c, d)) return {0.0, 0.0};
  const CScalar eta = params.eta;
  const auto vec = intertwiner(IntertwinerKind::psi, a, b, lambda, params);
  const auto cov = intertwiner(sign == '-' ? IntertwinerKind::psi_star : IntertwinerKind::psi_prime,
                               d, c, lambda, params);
  const CScalar up = std::exp((sign == '-' ? mu : -mu) * eta);
  const CScalar down = std::exp((sign == '-' ? -mu : mu) * eta);
  return cov[0] * up * vec[0] + cov[1] * down * vec[1];
}

CheckResult check_dressed_f_consistency(int i, bool barred, long a, long b, long c,
                                        CScalar lambda, const ModelParams& params) {
  const CScalar closed = dressed_f(i, barred, a, b, c, lambda, params);
  const CScalar sandwich = dressed_f_contraction(i, barred, a, b, c, lambda, params);
  return make_check("dressed-triangle-consistency", residual(closed, sandwich), 1e-12);
}

CheckResult check_dressed_t_consistency(int i, char sign, long a, long b, long c, long d,
                                        CScalar lambda, const ModelParams& params) {
  const CScalar closed = dressed_t(i, sign, a, b, c, d, params);
  const CScalar sandwich =
      dressed_tau(CScalar(mu_value(i), 0.0), sign, a, b, c, d, lambda, params);
  return make_check("dressed-square-consistency", residual(closed, sandwich), 1e-12);
}

namespace {

CheckResult tail_ybe_impl(const std::string& name, CScalar mu, char sign,
                          const std::array<long, 6>& hex, CScalar l1, CScalar l2,
                          const ModelParams& params) {
  const auto [a, b, c, d, e, f] = std::tuple(hex[0], hex[1], hex[2], hex[3], hex[4], hex[5]);
  const CScalar l12 = l1 - l2;
  auto T = [&](long ta, long tb, long tc, long td, CScalar lam) {
    return dressed_tau(mu, sign, ta, tb, tc, td, lam, params);
  };
  CScalar lhs{0.0, 0.0};
  for (long g : nb(f)) {
    if (!adjacent1(g, d)) continue;
    lhs += face_weight(f, g, d, e, l12, params) * T(a, b, g, f, l1) * T(b, c, d, g, l2);
  }
  CScalar rhs{0.0, 0.0};
  for (long g : nb(a)) {
    if (!adjacent1(g, c)) continue;
    rhs += T(a, g, e, f, l2) * T(g, c, d, e, l1) * face_weight(a, b, c, g, l12, params);
  }
  return make_check(name, residual(lhs, rhs), params.tol.rel_tol);
}

}  // namespace

CheckResult check_tail_ybe(int i, char sign, const std::array<long, 6>& hex, CScalar l1,
                           CScalar l2, const ModelParams& params) {
  return tail_ybe_impl(std::string("tail-ybe-") + sign, CScalar(mu_value(i), 0.0), sign, hex,
                       l1, l2, params);
}

CheckResult check_tail_ybe_generalized(CScalar mu, char sign, const std::array<long, 6>& hex,
                                       CScalar l1, CScalar l2, const ModelParams& params) {
  if (sign != '-' && sign != '+') throw ArgError("tail square sign must be '-' or '+'");
  return tail_ybe_impl(std::string("tail-ybe-generalized-") + sign, mu, sign, hex, l1, l2,
                       params);
}

CheckResult check_sos_inversion(int which, int i, long a, long b, long c, long d,
                                CScalar lambda, const ModelParams& params) {
  (void)lambda;  // the squares carry no spectral dependence; kept for interface symmetry
  if (which < 1 || which > 4) throw ArgError("inversion relation index must be 1..4");
  const CScalar eta = params.eta;
  const double guard = params.tol.singularity_guard;
  auto Tm = [&](long ta, long tb, long tc, long td) { return dressed_t(i, '-', ta, tb, tc, td, params); };
  auto Tp = [&](long ta, long tb, long tc, long td) { return dressed_t(i, '+', ta, tb, tc, td, params); };
  auto sh = [&](long k) {
    return guarded_sinh(height_value(k, params) * eta, guard,
                        "inversion weight hit a sinh zero");
  };
  std::set<long> es{d - 1, d + 1, a - 1, a + 1};
  CScalar lhs{0.0, 0.0};
  CScalar rhs{0.0, 0.0};
  const CScalar delta = (b == c) ? CScalar{1.0, 0.0} : CScalar{0.0, 0.0};
  switch (which) {
    case 1:
      for (long e : es) lhs += Tp(d, e, a, c) * Tm(b, a, e, d);
      rhs = delta;
      break;
    case 2:
      for (long e : es) lhs += sh(e) / sh(a) * Tm(d, e, a, c) * Tp(b, a, e, d);
      rhs = delta * sh(d) / sh(b);
      break;
    case 3:
      for (long e : es) lhs += Tm(e, d, c, a) * Tp(a, b, d, e);
      rhs = delta;
      break;
    case 4:
      for (long e : es) lhs += sh(e) / sh(a) * Tp(e, d, c, a) * Tm(a, b, d, e);
      rhs = delta * sh(d) / sh(b);
      break;
    default:
      break;
  }
  return make_check("sos-inversion-" + std::to_string(which), residual(lhs, rhs),
                    params.tol.rel_tol);
}

CheckResult check_sos_commutation(int which, int i, long a, long b, long c, CScalar lambda,
                                  const ModelParams& params) {
  if (which < 1 || which > 4) throw ArgError("commutation relation index must be 1..4");
  const bool barred = which >= 3;
  const CScalar eta = params.eta;
  const double mu = mu_value(i);
  const double guard = params.tol.singularity_guard;
  auto F = [&](long fa, long fb, long fc) { return dressed_f(i, barred, fa, fb, fc, lambda, params); };
  auto Tm = [&](long ta, long tb, long tc, long td) { return dressed_t(i, '-', ta, tb, tc, td, params); };
  auto Tp = [&](long ta, long tb, long tc, long td) { return dressed_t(i, '+', ta, tb, tc, td, params); };
  auto sh = [&](long k) {
    return guarded_sinh(height_value(k, params) * eta, guard,
                        "commutation weight hit a sinh zero");
  };
  CScalar lhs{0.0, 0.0};
  if (which == 1 || which == 3) {
    for (long d : nb(c)) {
      for (long e : nb(d)) {
        lhs += sh(d) / sh(a) * Tp(d, e, c, a) * F(d, c, e) * Tm(a, b, c, d);
      }
    }
  } else {
    for (long d : nb(b)) {
      for (long e : nb(d)) {
        lhs += sh(e) / sh(b) * Tm(d, b, c, a) * F(d, e, b) * Tp(a, b, e, d);
      }
    }
  }
  const double s = (which == 1 || which == 4) ? (mu - 1.0) : (1.0 - mu);
  const CScalar rhs = std::exp(2.0 * s * eta) * F(a, b, c);
  return make_check("sos-commutation-" + std::to_string(which), residual(lhs, rhs),
                    params.tol.rel_tol);
}

CheckResult check_sos_four_term(int i, bool barred, const std::array<long, 5>& heights,
                                CScalar l1, CScalar l2, const ModelParams& params) {
  const auto [a, b, c, d, e] = std::tuple(heights[0], heights[1], heights[2], heights[3],
                                          heights[4]);
  const CScalar l12 = l1 - l2;
  auto F = [&](long fa, long fb, long fc, CScalar lam) {
    return dressed_f(i, barred, fa, fb, fc, lam, params);
  };
  auto Tm = [&](long ta, long tb, long tc, long td) { return dressed_t(i, '-', ta, tb, tc, td, params); };
  auto W = [&](long wa, long wb, long wc, long wd) {
    return face_weight(wa, wb, wc, wd, l12, params);
  };
  CScalar lhs = W(a, b, d, e) * F(b, c, d, l2);
  for (long g : nb(a)) {
    if (!adjacent1(g, d)) continue;
    lhs += W(a, g, d, e) * F(a, b, g, l1) * Tm(b, c, d, g);
  }
  CScalar rhs = F(e, c, d, l1) * W(a, b, c, e);
  for (long g : nb(a)) {
    if (!adjacent1(g, c)) continue;
    rhs += F(a, g, e, l2) * Tm(g, c, d, e) * W(a, b, c, g);
  }
  return make_check("sos-four-term", residual(lhs, rhs), params.tol.rel_tol);
}

// ---------------------------------------------------------------------------
// Seam engine: a tail on the dual cells cuts the crossed cells into angular
// regions; every face keeps its plain weight on the region heights, crossed
// edges carry tail squares, left-down / down-left turns carry a sinh ratio,
// and the insertion edge carries the triangle.
// ---------------------------------------------------------------------------

namespace {

int ang_of(char dir) {
  switch (dir) {
    case 'E': return 0;
    case 'N': return 90;
    case 'W': return 180;
    case 'S': return 270;
    default: throw InternalInconsistency("unknown direction in seam construction");
  }
}

int norm_ang(int a) { return ((a % 360) + 360) % 360; }

struct Chord {
  int entry = 0;
  int exit = 0;
};

int side_of(int ang, const Chord& ch) {
  const int d = norm_ang(ch.exit - ch.entry);
  const int x = norm_ang(ang - ch.entry);
  return (x > 0 && x < d) ? 1 : 0;
}

struct Slot {
  int var = -1;   // index into the region variables; -1 = fixed boundary
  long fixed = 0;
};

struct SeamFace {
  char kind = 'W';  // 'W' face, 'T' tail square, 'F' triangle, 'C' turn ratio
  std::array<Slot, 4> s{};
  int n_slots = 0;
  CScalar lambda{};
  char sign = '-';  // tail squares only
};

struct Informant {
  bool is_fixed = false;
  long fixed = 0;
  int var = -1;
};

struct SeamProblem {
  int n_cols = 0;
  int n_rows = 0;
  int current_index = 0;
  bool barred = false;
  ModelParams params;
  Cell anchor{};
  long anchor_height = 0;
  Cell approach{};
  std::map<Cell, std::vector<Chord>> chords;
  std::map<Cell, std::vector<std::vector<int>>> regions;
  std::map<Cell, long> boundary;
  std::vector<std::pair<Cell, int>> vars;                // canonical order
  std::map<std::pair<Cell, int>, int> var_of;
  std::vector<std::vector<Informant>> informants;        // per canonical var
  std::vector<int> order;                                // DFS order (canonical ids)
  std::vector<int> pos;                                  // canonical id -> DFS depth
  std::vector<SeamFace> faces;
  std::vector<int> prefix_faces;                         // all slots fixed
  std::vector<std::vector<int>> faces_at;                // per DFS depth
  long kmin = 0;
  long kmax = 0;
};

bool is_ring(const Cell& cell, int C, int R) {
  return cell.first == 0 || cell.first == C || cell.second == 0 || cell.second == R;
}

Cell step_cell(const Cell& cell, int base) {
  switch (base) {
    case 0: return {cell.first + 1, cell.second};
    case 90: return {cell.first, cell.second - 1};
    case 180: return {cell.first - 1, cell.second};
    case 270: return {cell.first, cell.second + 1};
    default: throw InternalInconsistency("probe base angle must be a cardinal direction");
  }
}

int region_id(const SeamProblem& pr, const Cell& cell, int ang) {
  const auto it = pr.chords.find(cell);
  if (it == pr.chords.end()) return 0;
  std::vector<int> sig;
  sig.reserve(it->second.size());
  for (const auto& ch : it->second) sig.push_back(side_of(ang, ch));
  const auto& regs = pr.regions.at(cell);
  const auto pos = std::find(regs.begin(), regs.end(), sig);
  if (pos == regs.end()) throw InternalInconsistency("seam region lookup missed every probe");
  return static_cast<int>(pos - regs.begin());
}

Slot resolve_slot(const SeamProblem& pr, const Cell& cell, int ang) {
  if (is_ring(cell, pr.n_cols, pr.n_rows)) return Slot{-1, pr.boundary.at(cell)};
  const int rid = region_id(pr, cell, ang);
  return Slot{pr.var_of.at({cell, rid}), 0};
}

char move_dir(const Cell& from, const Cell& to) {
  if (to.first == from.first + 1 && to.second == from.second) return 'E';
  if (to.first == from.first - 1 && to.second == from.second) return 'W';
  if (to.second == from.second - 1 && to.first == from.first) return 'N';
  if (to.second == from.second + 1 && to.first == from.first) return 'S';
  throw InternalInconsistency("tail cells are not unit steps apart");
}

SeamProblem build_seam(const SosLatticeSpec& lattice, const TailPath& tail, int i,
                       bool barred) {
  lattice.validate();
  if (lattice.cyclic) throw ArgError("current insertions on cyclic height lattices are not supported");
  if (i != 0 && i != 1) throw ArgError("current index must be 0 or 1");
  const int C = lattice.n_cols, R = lattice.n_rows;
  const VertexLatticeSpec shape =
      VertexLatticeSpec::uniform(C, R, lattice.col_lambdas, lattice.row_lambdas);
  tail.validate(shape);
  if (tail.anchor.second != R) {
    throw GeometryError("tail must anchor on the bottom boundary ring");
  }
  const auto cells = tail.cells();
  for (std::size_t k = 1; k < cells.size(); ++k) {
    if (is_ring(cells[k], C, R)) {
      throw GeometryError("tail may not run through the boundary ring");
    }
  }

  SeamProblem pr;
  pr.n_cols = C;
  pr.n_rows = R;
  pr.current_index = i;
  pr.barred = barred;
  pr.params = lattice.params;
  pr.anchor = cells.front();
  pr.approach = cells.back();
  pr.boundary = lattice.corner_heights();
  pr.anchor_height = pr.boundary.at(pr.anchor);

  // Chords: one per tail cell after the anchor, from the edge shared with
  // the previous cell to the edge toward the next cell (or the insertion).
  std::vector<char> dirs;
  for (std::size_t k = 0; k + 1 < cells.size(); ++k) dirs.push_back(move_dir(cells[k], cells[k + 1]));
  const char final_dir = tail.insertion.orient == 'v' ? 'W' : 'N';
  for (std::size_t k = 1; k < cells.size(); ++k) {
    const int entry = norm_ang(ang_of(dirs[k - 1]) + 180);
    const char out = (k + 1 < cells.size()) ? dirs[k] : final_dir;
    pr.chords[cells[k]].push_back(Chord{entry, ang_of(out)});
  }

  // Regions from the 36 probe angles.
  for (const auto& [cell, chs] : pr.chords) {
    std::vector<std::vector<int>> regs;
    for (int k = 0; k < 36; ++k) {
      const int ang = 10 * k + 5;
      std::vector<int> sig;
      sig.reserve(chs.size());
      for (const auto& ch : chs) sig.push_back(side_of(ang, ch));
      if (std::find(regs.begin(), regs.end(), sig) == regs.end()) regs.push_back(sig);
    }
    std::sort(regs.begin(), regs.end());
    pr.regions[cell] = regs;
  }

  // Region variables on internal cells, canonical (i, j, region) order.
  for (int ci = 1; ci < C; ++ci) {
    for (int cj = 1; cj < R; ++cj) {
      const Cell cell{ci, cj};
      const auto it = pr.regions.find(cell);
      const int count = (it == pr.regions.end()) ? 1 : static_cast<int>(it->second.size());
      for (int k = 0; k < count; ++k) {
        pr.var_of[{cell, k}] = static_cast<int>(pr.vars.size());
        pr.vars.push_back({cell, k});
      }
    }
  }

  // The two flanks of the insertion edge away from the approach cell must
  // belong to one region, as must every boundary cell.
  if (tail.insertion.orient == 'v') {
    const Cell wcell{tail.insertion.line, tail.insertion.offset};
    if (region_id(pr, wcell, 22) != region_id(pr, wcell, 338)) {
      throw GeometryError("tail splits the far flank of its insertion edge");
    }
  } else {
    const Cell ncell{tail.insertion.offset, tail.insertion.line};
    if (region_id(pr, ncell, 292) != region_id(pr, ncell, 248)) {
      throw GeometryError("tail splits the far flank of its insertion edge");
    }
  }

  // Fallback candidate window.
  long bmin = pr.boundary.begin()->second, bmax = bmin;
  for (const auto& [cell, h] : pr.boundary) {
    bmin = std::min(bmin, h);
    bmax = std::max(bmax, h);
  }
  pr.kmin = bmin - (C + R);
  pr.kmax = bmax + (C + R);

  // Faces: plain weights everywhere...
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      SeamFace f;
      f.kind = 'W';
      f.n_slots = 4;
      f.s[0] = resolve_slot(pr, {c, r}, 315);
      f.s[1] = resolve_slot(pr, {c + 1, r}, 225);
      f.s[2] = resolve_slot(pr, {c + 1, r + 1}, 135);
      f.s[3] = resolve_slot(pr, {c, r + 1}, 45);
      f.lambda = lattice.col_lambdas[static_cast<std::size_t>(c)] -
                 lattice.row_lambdas[static_cast<std::size_t>(r)];
      pr.faces.push_back(f);
    }
  }
  // ...tail squares on crossed edges...
  for (const auto& [edge, dir] : tail.crossings()) {
    SeamFace f;
    f.kind = 'T';
    f.n_slots = 4;
    if (edge.orient == 'v') {
      const Cell wcell{edge.line, edge.offset}, ecell{edge.line + 1, edge.offset};
      f.s[0] = resolve_slot(pr, wcell, 22);
      f.s[1] = resolve_slot(pr, ecell, 158);
      f.s[2] = resolve_slot(pr, ecell, 202);
      f.s[3] = resolve_slot(pr, wcell, 338);
      f.sign = (dir == 'W') ? '-' : '+';
    } else {
      const Cell ncell{edge.offset, edge.line}, scell{edge.offset, edge.line + 1};
      f.s[0] = resolve_slot(pr, ncell, 292);
      f.s[1] = resolve_slot(pr, scell, 68);
      f.s[2] = resolve_slot(pr, scell, 112);
      f.s[3] = resolve_slot(pr, ncell, 248);
      f.sign = (dir == 'N') ? '-' : '+';
    }
    pr.faces.push_back(f);
  }
  // ...sinh ratios on left-down / down-left turns...
  for (std::size_t k = 1; k < cells.size(); ++k) {
    const char in = dirs[k - 1];
    const char out = (k + 1 < cells.size()) ? dirs[k] : final_dir;
    if (!((in == 'W' && out == 'S') || (in == 'S' && out == 'W'))) continue;
    const int entry = norm_ang(ang_of(in) + 180);
    const int exit = ang_of(out);
    const int diff = norm_ang(exit - entry);
    int cut = 0;
    if (diff == 90) {
      cut = norm_ang(entry + 45);
    } else if (diff == 270) {
      cut = norm_ang(exit + 45);
    } else {
      throw InternalInconsistency("turn angles must differ by a quarter turn");
    }
    SeamFace f;
    f.kind = 'C';
    f.n_slots = 2;
    f.s[0] = resolve_slot(pr, cells[k], cut);
    f.s[1] = resolve_slot(pr, cells[k], norm_ang(cut + 180));
    pr.faces.push_back(f);
  }
  // ...and the triangle on the insertion edge.
  {
    SeamFace f;
    f.kind = 'F';
    f.n_slots = 3;
    if (tail.insertion.orient == 'v') {
      const Cell wcell{tail.insertion.line, tail.insertion.offset};
      const Cell ecell{tail.insertion.line + 1, tail.insertion.offset};
      f.s[0] = resolve_slot(pr, wcell, 0);
      f.s[1] = resolve_slot(pr, ecell, 158);
      f.s[2] = resolve_slot(pr, ecell, 202);
      f.lambda = lattice.col_lambdas[static_cast<std::size_t>(tail.insertion.line)];
    } else {
      const Cell ncell{tail.insertion.offset, tail.insertion.line};
      const Cell scell{tail.insertion.offset, tail.insertion.line + 1};
      f.s[0] = resolve_slot(pr, ncell, 270);
      f.s[1] = resolve_slot(pr, scell, 68);
      f.s[2] = resolve_slot(pr, scell, 112);
      f.lambda = lattice.row_lambdas[static_cast<std::size_t>(tail.insertion.line)];
    }
    pr.faces.push_back(f);
  }

  // Adjacency informants: probe just off each cardinal direction; the
  // matching flank of the neighbouring cell constrains this region to one
  // height step away.
  pr.informants.resize(pr.vars.size());
  for (std::size_t v = 0; v < pr.vars.size(); ++v) {
    const auto& [cell, reg] = pr.vars[v];
    for (int base : {0, 90, 180, 270}) {
      for (int off : {22, -22}) {
        if (region_id(pr, cell, norm_ang(base + off)) != reg) continue;
        const Cell q = step_cell(cell, base);
        if (q.first < 0 || q.first > C || q.second < 0 || q.second > R) continue;
        const int qang = norm_ang(base + 180 - off);
        Informant inf;
        if (is_ring(q, C, R)) {
          inf.is_fixed = true;
          inf.fixed = pr.boundary.at(q);
        } else {
          inf.var = pr.var_of.at({q, region_id(pr, q, qang)});
        }
        pr.informants[v].push_back(inf);
      }
    }
  }

  // DFS order: repeatedly take the first variable that already has an
  // informed neighbour, so candidate sets stay two values wide.
  std::vector<char> placed(pr.vars.size(), 0);
  pr.pos.assign(pr.vars.size(), -1);
  while (pr.order.size() < pr.vars.size()) {
    int best = -1;
    for (std::size_t v = 0; v < pr.vars.size(); ++v) {
      if (placed[v]) continue;
      for (const auto& inf : pr.informants[v]) {
        if (inf.is_fixed || placed[static_cast<std::size_t>(inf.var)]) {
          best = static_cast<int>(v);
          break;
        }
      }
      if (best >= 0) break;
    }
    if (best < 0) {
      for (std::size_t v = 0; v < pr.vars.size(); ++v) {
        if (!placed[v]) {
          best = static_cast<int>(v);
          break;
        }
      }
    }
    pr.pos[static_cast<std::size_t>(best)] = static_cast<int>(pr.order.size());
    pr.order.push_back(best);
    placed[static_cast<std::size_t>(best)] = 1;
  }

  pr.faces_at.resize(pr.vars.size());
  for (std::size_t fi = 0; fi < pr.faces.size(); ++fi) {
    const auto& f = pr.faces[fi];
    int last = -1;
    for (int k = 0; k < f.n_slots; ++k) {
      if (f.s[static_cast<std::size_t>(k)].var >= 0) {
        last = std::max(last, pr.pos[static_cast<std::size_t>(f.s[static_cast<std::size_t>(k)].var)]);
      }
    }
    if (last < 0) {
      pr.prefix_faces.push_back(static_cast<int>(fi));
    } else {
      pr.faces_at[static_cast<std::size_t>(last)].push_back(static_cast<int>(fi));
    }
  }
  return pr;
}

// ---- evaluation policies -------------------------------------------------

struct ComplexEval {
  using Value = CScalar;
  const SeamProblem* pr;

  Value one() const { return {1.0, 0.0}; }
  static bool is_zero(const Value& v) { return v == CScalar{0.0, 0.0}; }
  static Value mul(const Value& a, const Value& b) { return a * b; }

  Value face_value(const SeamFace& f, const std::vector<long>& assign) const {
    auto h = [&](int k) {
      const Slot& s = f.s[static_cast<std::size_t>(k)];
      return s.var < 0 ? s.fixed : assign[static_cast<std::size_t>(s.var)];
    };
    const ModelParams& mp = pr->params;
    switch (f.kind) {
      case 'W':
        return face_weight(h(0), h(1), h(2), h(3), f.lambda, mp);
      case 'T':
        return dressed_t(pr->current_index, f.sign, h(0), h(1), h(2), h(3), mp);
      case 'F':
        return dressed_f(pr->current_index, pr->barred, h(0), h(1), h(2), f.lambda, mp);
      case 'C': {
        const CScalar num = guarded_sinh(height_value(h(0), mp) * mp.eta,
                                         mp.tol.singularity_guard,
                                         "turn ratio hit a sinh zero");
        const CScalar den = guarded_sinh(height_value(h(1), mp) * mp.eta,
                                         mp.tol.singularity_guard,
                                         "turn ratio hit a sinh zero");
        return num / den;
      }
      default:
        throw InternalInconsistency("unknown seam face kind");
    }
  }
};

// Leading-order arithmetic in the regulator: weight = coeff * eps^order.
struct Graded {
  bool zero = false;
  long order = 0;
  CScalar coeff{1.0, 0.0};
};

struct GradedEval {
  using Value = Graded;
  const SeamProblem* pr;

  Value one() const { return {}; }
  static bool is_zero(const Value& v) { return v.zero; }
  static Value mul(const Value& a, const Value& b) {
    if (a.zero || b.zero) return {true, 0, {0.0, 0.0}};
    return {false, a.order + b.order, a.coeff * b.coeff};
  }
  static Value div(const Value& a, const Value& b) {
    if (b.zero) throw InternalInconsistency("graded division by an exact zero");
    if (a.zero) return a;
    return {false, a.order - b.order, a.coeff / b.coeff};
  }
  static Value scale(Value v, CScalar s) {
    if (s == CScalar{0.0, 0.0}) return {true, 0, {0.0, 0.0}};
    v.coeff *= s;
    return v;
  }

  // sinh(u * eps * eta + w) to leading order in eps.
  Graded atom(double u, CScalar w) const {
    const CScalar s = std::sinh(w);
    if (std::abs(s) > pr->params.tol.singularity_guard) return {false, 0, s};
    if (u == 0.0) return {true, 0, {0.0, 0.0}};
    return {false, 1, u * pr->params.eta * std::cosh(w)};
  }

  Value face_value(const SeamFace& f, const std::vector<long>& assign) const {
    auto h = [&](int k) {
      const Slot& s = f.s[static_cast<std::size_t>(k)];
      return s.var < 0 ? s.fixed : assign[static_cast<std::size_t>(s.var)];
    };
    const CScalar eta = pr->params.eta;
    switch (f.kind) {
      case 'W': {
        const long a = h(0), b = h(1), c = h(2), d = h(3);
        if (!adjacent1(a, b) || !adjacent1(b, c) || !adjacent1(c, d) || !adjacent1(d, a)) {
          return {true, 0, {0.0, 0.0}};
        }
        if (std::labs(c - a) == 2) return atom(0.0, f.lambda + eta);
        if (c == a && d == 2 * a - b) {
          return div(mul(atom(0.0, f.lambda), atom(1.0, static_cast<double>(b) * eta)),
                     atom(1.0, static_cast<double>(a) * eta));
        }
        if (c == a && d == b) {
          const double pm = static_cast<double>(b - a);
          return div(mul(atom(0.0, eta), atom(1.0, static_cast<double>(a) * eta - pm * f.lambda)),
                     atom(1.0, static_cast<double>(a) * eta));
        }
        throw InternalInconsistency("face pattern escaped the admissibility filter");
      }
      case 'T': {
        long a = h(0), b = h(1), c = h(2), d = h(3);
        if (f.sign == '+') {
          std::swap(a, b);
          std::swap(c, d);
        }
        if (!adjacent1(a, b) || !adjacent1(c, d)) return {true, 0, {0.0, 0.0}};
        const double mu = mu_value(pr->current_index);
        const double pmq = static_cast<double>(c - d);
        const double pmb = static_cast<double>(b - a);
        const Graded num = atom((pmq + pmb) * 0.5,
                                (pmq * static_cast<double>(d) + pmb * static_cast<double>(a)) *
                                        eta * 0.5 +
                                    mu * eta);
        const Graded den = atom(1.0, static_cast<double>(d) * eta);
        return scale(div(num, den), pmq);
      }
      case 'F': {
        const long a = h(0), b = h(1), c = h(2);
        if (!adjacent1(a, b) || !adjacent1(a, c)) return {true, 0, {0.0, 0.0}};
        const double pmc = static_cast<double>(c - a);
        const bool use_one = pr->barred ? (pr->current_index == 0) : (pr->current_index == 1);
        CScalar num;
        if (!use_one) {
          num = pmc * (b == c ? CScalar{1.0, 0.0}
                              : std::exp(pmc * static_cast<double>(a) * eta));
        } else {
          num = -pmc * std::exp(-2.0 * f.lambda) *
                (b == c ? CScalar{1.0, 0.0}
                        : std::exp(-pmc * static_cast<double>(a) * eta));
        }
        if (pr->barred) num *= std::exp(2.0 * f.lambda + eta);
        return scale(div(Graded{false, 0, num}, atom(1.0, static_cast<double>(a) * eta)), 0.5);
      }
      case 'C':
        return div(atom(1.0, static_cast<double>(h(0)) * eta),
                   atom(1.0, static_cast<double>(h(1)) * eta));
      default:
        throw InternalInconsistency("unknown seam face kind");
    }
  }
};

template <class Policy>
void seam_dfs(const SeamProblem& pr, const Policy& pol, std::size_t depth,
              typename Policy::Value acc, std::vector<long>& assign,
              std::vector<char>& assigned,
              const std::function<void(const std::vector<long>&, const typename Policy::Value&)>&
                  leaf) {
  if (depth == pr.order.size()) {
    leaf(assign, acc);
    return;
  }
  const int v = pr.order[depth];
  std::set<long> cand;
  bool informed = false;
  for (const auto& inf : pr.informants[static_cast<std::size_t>(v)]) {
    long value = 0;
    if (inf.is_fixed) {
      value = inf.fixed;
    } else if (assigned[static_cast<std::size_t>(inf.var)]) {
      value = assign[static_cast<std::size_t>(inf.var)];
    } else {
      continue;
    }
    const std::set<long> mine{value - 1, value + 1};
    if (!informed) {
      cand = mine;
      informed = true;
    } else {
      std::set<long> both;
      std::set_intersection(cand.begin(), cand.end(), mine.begin(), mine.end(),
                            std::inserter(both, both.begin()));
      cand = std::move(both);
    }
  }
  if (!informed) {
    for (long k = pr.kmin; k <= pr.kmax; ++k) cand.insert(k);
  }
  for (long value : cand) {
    assign[static_cast<std::size_t>(v)] = value;
    assigned[static_cast<std::size_t>(v)] = 1;
    typename Policy::Value next = acc;
    bool dead = false;
    for (int fi : pr.faces_at[depth]) {
      next = Policy::mul(next, pol.face_value(pr.faces[static_cast<std::size_t>(fi)], assign));
      if (Policy::is_zero(next)) {
        dead = true;
        break;
      }
    }
    if (!dead) seam_dfs(pr, pol, depth + 1, next, assign, assigned, leaf);
    assigned[static_cast<std::size_t>(v)] = 0;
  }
}

template <class Policy>
void seam_run(const SeamProblem& pr, const Policy& pol,
              const std::function<void(const std::vector<long>&, const typename Policy::Value&)>&
                  leaf) {
  typename Policy::Value acc = pol.one();
  for (int fi : pr.prefix_faces) {
    acc = Policy::mul(acc, pol.face_value(pr.faces[static_cast<std::size_t>(fi)],
                                          std::vector<long>{}));
    if (Policy::is_zero(acc)) return;
  }
  std::vector<long> assign(pr.vars.size(), 0);
  std::vector<char> assigned(pr.vars.size(), 0);
  seam_dfs(pr, pol, 0, acc, assign, assigned, leaf);
}

CScalar seam_raw_sum(const SeamProblem& pr) {
  ComplexEval pol{&pr};
  CScalar total{0.0, 0.0};
  seam_run<ComplexEval>(pr, pol, [&](const std::vector<long>&, const CScalar& w) { total += w; });
  return total;
}

// Independent plain-lattice enumeration used by the locality oracle and the
// restriction probe: interior corner heights in raster order, each
// constrained one step away from its west/north neighbour.
template <class Visitor>
void plain_heights_dfs(const SosLatticeSpec& lattice, std::map<Cell, long>& h,
                       const std::vector<Cell>& cells, std::size_t k, const Visitor& visit) {
  if (k == cells.size()) {
    visit(h);
    return;
  }
  const Cell cell = cells[k];
  const Cell west{cell.first - 1, cell.second};
  const Cell north{cell.first, cell.second - 1};
  std::set<long> cand;
  for (long v : nb(h.at(west))) cand.insert(v);
  std::set<long> from_north;
  for (long v : nb(h.at(north))) from_north.insert(v);
  std::set<long> both;
  std::set_intersection(cand.begin(), cand.end(), from_north.begin(), from_north.end(),
                        std::inserter(both, both.begin()));
  for (long v : both) {
    h[cell] = v;
    plain_heights_dfs(lattice, h, cells, k + 1, visit);
    h.erase(cell);
  }
}

template <class Visitor>
void plain_heights_enumerate(const SosLatticeSpec& lattice, const Visitor& visit) {
  std::map<Cell, long> h = lattice.corner_heights();
  std::vector<Cell> cells;
  for (int i = 1; i < lattice.n_cols; ++i) {
    for (int j = 1; j < lattice.n_rows; ++j) cells.push_back({i, j});
  }
  plain_heights_dfs(lattice, h, cells, 0, visit);
}

}  // namespace

std::string sos_insertion_to_json(const SosInsertion& ins) {
  json j;
  j["lattice"] = json::parse(sos_spec_to_json(ins.lattice));
  j["tail"]["anchor"] = {ins.tail.anchor.first, ins.tail.anchor.second};
  j["tail"]["steps"] = ins.tail.steps;
  j["tail"]["insertion"] = {{"orient", std::string(1, ins.tail.insertion.orient)},
                            {"line", ins.tail.insertion.line},
                            {"offset", ins.tail.insertion.offset}};
  j["current_index"] = ins.current_index;
  j["barred"] = ins.barred;
  return j.dump(2);
}

SosInsertion sos_insertion_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgError(std::string("invalid insertion json: ") + e.what());
  }
  try {
    SosInsertion ins;
    ins.lattice = sos_spec_from_json(j.at("lattice").dump());
    const auto& t = j.at("tail");
    ins.tail.anchor = {t.at("anchor").at(0).get<int>(), t.at("anchor").at(1).get<int>()};
    ins.tail.steps = t.at("steps").get<std::string>();
    const std::string orient = t.at("insertion").at("orient").get<std::string>();
    if (orient != "v" && orient != "h") throw ArgError("insertion orient must be 'v' or 'h'");
    ins.tail.insertion = EdgeRef{orient[0], t.at("insertion").at("line").get<int>(),
                                 t.at("insertion").at("offset").get<int>()};
    ins.current_index = j.at("current_index").get<int>();
    ins.barred = j.at("barred").get<bool>();
    return ins;
  } catch (const json::exception& e) {
    throw ArgError(std::string("invalid insertion json: ") + e.what());
  }
}

SosCurrentResult sos_current_expectation(const SosInsertion& ins) {
  const SeamProblem pr = build_seam(ins.lattice, ins.tail, ins.current_index, ins.barred);
  SosCurrentResult out;
  out.raw = seam_raw_sum(pr);
  out.z = sos_partition_function(ins.lattice).value;
  if (std::abs(out.z) <= ins.lattice.params.tol.singularity_guard) {
    throw DegenerateNormalization("face partition function is too close to zero");
  }
  out.value = out.raw / out.z;
  return out;
}

CheckResult check_vertex_sos_equivalence(const SosInsertion& ins) {
  const SeamProblem pr = build_seam(ins.lattice, ins.tail, ins.current_index, ins.barred);
  const CScalar seam = seam_raw_sum(pr);

  const VertexLatticeSpec base = VertexLatticeSpec::uniform(
      ins.lattice.n_cols, ins.lattice.n_rows, ins.lattice.col_lambdas, ins.lattice.row_lambdas);
  const VertexLatticeSpec dressed = dressed_vertex_spec(
      base, ins.lattice.perimeter, ins.lattice.params, ins.tail.anchor.first);
  const GeneratorId gen{ins.barred ? GenKind::f_bar : GenKind::f, ins.current_index};
  const CScalar spin =
      current_expectation(dressed, ins.tail, gen, ins.lattice.params).raw;

  const int m = ins.tail.winding_number();
  const double sgn = ins.barred ? 1.0 : -1.0;
  const CScalar factor =
      std::exp(sgn * 2.0 * static_cast<double>(m) * mu_value(ins.current_index) *
               ins.lattice.params.eta);
  return make_check("vertex-sos-equivalence", residual(spin, factor * seam),
                    ins.lattice.params.tol.rel_tol);
}

PlaquetteCurrents sos_plaquette_currents(const SosLatticeSpec& lattice, int row, int col,
                                         std::pair<int, int> anchor, int i, bool barred) {
  lattice.validate();
  if (row < 0 || row >= lattice.n_rows || col < 0 || col >= lattice.n_cols) {
    throw GeometryError("plaquette vertex outside the lattice");
  }
  const VertexLatticeSpec shape = VertexLatticeSpec::uniform(
      lattice.n_cols, lattice.n_rows, lattice.col_lambdas, lattice.row_lambdas);
  const std::array<EdgeRef, 4> edges{EdgeRef{'v', col, row}, EdgeRef{'h', row, col},
                                     EdgeRef{'v', col, row + 1}, EdgeRef{'h', row, col + 1}};
  PlaquetteCurrents out;
  for (std::size_t k = 0; k < 4; ++k) {
    const TailPath tail = straight_tail(anchor, edges[k], shape);
    const SeamProblem pr = build_seam(lattice, tail, i, barred);
    out.raw[k] = seam_raw_sum(pr);
  }
  out.z = sos_partition_function(lattice).value;
  return out;
}

CheckResult check_sos_plaquette(const SosLatticeSpec& lattice, int row, int col,
                                std::pair<int, int> anchor, int i, bool barred) {
  const PlaquetteCurrents pc = sos_plaquette_currents(lattice, row, col, anchor, i, barred);
  const CScalar comb = pc.raw[0] - pc.raw[1] - pc.raw[2] + pc.raw[3];
  double scale = 0.0;
  for (const auto& v : pc.raw) scale = std::max(scale, std::abs(v));
  const double res = scale > 0.0 ? std::abs(comb) / scale : std::abs(comb);
  return make_check("sos-plaquette", res, lattice.params.tol.rel_tol);
}

J0LocalityReport check_j0_locality(const SosLatticeSpec& lattice, const TailPath& tail) {
  const SeamProblem pr = build_seam(lattice, tail, 0, false);
  const ModelParams& mp = lattice.params;
  const ComplexEval pol{&pr};

  // Group region variables by cell for the equal-heights test.
  std::map<Cell, std::vector<int>> cell_vars;
  for (std::size_t v = 0; v < pr.vars.size(); ++v) {
    cell_vars[pr.vars[v].first].push_back(static_cast<int>(v));
  }
  const int approach_var = pr.var_of.at({pr.approach, 0});

  const CScalar anchor_sinh =
      guarded_sinh(height_value(pr.anchor_height, mp) * mp.eta, mp.tol.singularity_guard,
                   "anchor height hit a sinh zero");

  CScalar full{0.0, 0.0};
  CScalar diag{0.0, 0.0};
  double telescope_worst = 0.0;
  seam_run<ComplexEval>(pr, pol, [&](const std::vector<long>& assign, const CScalar& w) {
    full += w;
    bool is_diag = true;
    for (const auto& [cell, vs] : cell_vars) {
      for (std::size_t k = 1; k < vs.size(); ++k) {
        if (assign[static_cast<std::size_t>(vs[k])] !=
            assign[static_cast<std::size_t>(vs[0])]) {
          is_diag = false;
          break;
        }
      }
      if (!is_diag) break;
    }
    if (!is_diag) return;
    diag += w;
    CScalar tails{1.0, 0.0};
    for (const auto& f : pr.faces) {
      if (f.kind == 'T' || f.kind == 'C') tails *= pol.face_value(f, assign);
    }
    const long happ = assign[static_cast<std::size_t>(approach_var)];
    const CScalar want = anchor_sinh / guarded_sinh(height_value(happ, mp) * mp.eta,
                                                    mp.tol.singularity_guard,
                                                    "approach height hit a sinh zero");
    telescope_worst = std::max(telescope_worst, residual(tails, want));
  });

  // Local oracle: plain heights, the triangle with equal feet, and the
  // telescoped boundary ratio.
  const bool vertical = tail.insertion.orient == 'v';
  const Cell apex = vertical ? Cell{tail.insertion.line, tail.insertion.offset}
                             : Cell{tail.insertion.offset, tail.insertion.line};
  const Cell foot = pr.approach;
  const CScalar flambda =
      vertical ? lattice.col_lambdas[static_cast<std::size_t>(tail.insertion.line)]
               : lattice.row_lambdas[static_cast<std::size_t>(tail.insertion.line)];
  CScalar local{0.0, 0.0};
  plain_heights_enumerate(lattice, [&](const std::map<Cell, long>& h) {
    CScalar w{1.0, 0.0};
    for (int r = 0; r < lattice.n_rows && w != CScalar{0.0, 0.0}; ++r) {
      for (int c = 0; c < lattice.n_cols; ++c) {
        w *= face_weight(h.at({c, r}), h.at({c + 1, r}), h.at({c + 1, r + 1}), h.at({c, r + 1}),
                         lattice.col_lambdas[static_cast<std::size_t>(c)] -
                             lattice.row_lambdas[static_cast<std::size_t>(r)],
                         mp);
        if (w == CScalar{0.0, 0.0}) break;
      }
    }
    if (w == CScalar{0.0, 0.0}) return;
    const long hb = h.at(foot);
    const CScalar tri = dressed_f(0, false, h.at(apex), hb, hb, flambda, mp);
    const CScalar ratio = anchor_sinh / guarded_sinh(height_value(hb, mp) * mp.eta,
                                                     mp.tol.singularity_guard,
                                                     "approach height hit a sinh zero");
    local += w * tri * ratio;
  });

  J0LocalityReport rep;
  rep.cross_seam_collapse =
      make_check("j0-cross-seam-collapse", residual(full, diag), mp.tol.abs_tol);
  rep.telescoping = make_check("j0-telescoping", telescope_worst, mp.tol.abs_tol);
  rep.local_match = make_check("j0-local-match", residual(full, local), mp.tol.abs_tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Restriction probe.
// ---------------------------------------------------------------------------

namespace {

bool in_range(long h, int p) { return h >= 1 && h <= p; }

std::vector<CScalar> probe_cols() {
  return {{0.23, 0.11}, {-0.17, 0.31}, {0.41, -0.07}};
}

std::vector<CScalar> probe_rows() {
  return {{0.05, -0.29}, {0.37, 0.13}, {-0.21, 0.17}};
}

SosLatticeSpec probe_lattice(int p, long q) {
  SosLatticeSpec lat;
  lat.n_cols = 3;
  lat.n_rows = 3;
  lat.col_lambdas = probe_cols();
  lat.row_lambdas = probe_rows();
  lat.params.eta = CScalar(0.0, std::numbers::pi / static_cast<double>(p + 1));
  lat.params.x0 = CScalar(0.0, 0.0);
  lat.perimeter.clear();
  for (int k = 0; k < 12; ++k) lat.perimeter.push_back(k % 2 == 0 ? q : q + 1);
  return lat;
}

// Graded weight of one plain face with reference height treated as the
// regulator.
Graded graded_face(const GradedEval& ge, long a, long b, long c, long d, CScalar lambda) {
  SeamFace f;
  f.kind = 'W';
  f.n_slots = 4;
  f.s[0] = Slot{-1, a};
  f.s[1] = Slot{-1, b};
  f.s[2] = Slot{-1, c};
  f.s[3] = Slot{-1, d};
  f.lambda = lambda;
  return ge.face_value(f, {});
}

}  // namespace

RsosProbeReport rsos_incompatibility_probe(int p) {
  if (p < 3) throw ArgError("restriction probe needs p >= 3");
  RsosProbeReport rep;
  rep.p = p;
  rep.pure_partition_restricts = true;

  // Stage one: with no insertion, every configuration that leaves {1..p}
  // must vanish with the regulator (strictly positive order).
  for (long q = 1; q + 1 <= p; ++q) {
    const SosLatticeSpec lat = probe_lattice(p, q);
    SeamProblem shell;  // only used to hand the parameters to the evaluator
    shell.params = lat.params;
    const GradedEval ge{&shell};
    plain_heights_enumerate(lat, [&](const std::map<Cell, long>& h) {
      bool out = false;
      for (const auto& [cell, v] : h) out = out || !in_range(v, p);
      if (!out) return;
      Graded w = ge.one();
      for (int r = 0; r < lat.n_rows && !w.zero; ++r) {
        for (int c = 0; c < lat.n_cols; ++c) {
          w = GradedEval::mul(
              w, graded_face(ge, h.at({c, r}), h.at({c + 1, r}), h.at({c + 1, r + 1}),
                             h.at({c, r + 1}),
                             lat.col_lambdas[static_cast<std::size_t>(c)] -
                                 lat.row_lambdas[static_cast<std::size_t>(r)]));
          if (w.zero) break;
        }
      }
      if (!w.zero && w.order <= 0 &&
          std::abs(w.coeff) > lat.params.tol.singularity_guard) {
        rep.pure_partition_restricts = false;
      }
    });
  }

  // Stage two: with a tail inserted, search for a configuration of
  // non-positive order whose out-of-range height sits on a tail face.
  const TailPath tail{{2, 3}, "UU", EdgeRef{'v', 1, 1}};
  for (long q = 1; q + 1 <= p && !rep.witness; ++q) {
    for (int i = 0; i < 2 && !rep.witness; ++i) {
      for (int bar = 0; bar < 2 && !rep.witness; ++bar) {
        const SosLatticeSpec lat = probe_lattice(p, q);
        const SeamProblem pr = build_seam(lat, tail, i, bar == 1);
        const GradedEval ge{&pr};
        seam_run<GradedEval>(pr, ge, [&](const std::vector<long>& assign, const Graded& w) {
          ++rep.configs_scanned;
          if (rep.witness || w.zero) return;
          if (w.order > 0 || std::abs(w.coeff) <= lat.params.tol.singularity_guard) return;
          std::set<long> offending;
          for (const auto& f : pr.faces) {
            if (f.kind != 'T' && f.kind != 'F') continue;
            for (int k = 0; k < f.n_slots; ++k) {
              const Slot& s = f.s[static_cast<std::size_t>(k)];
              const long v = s.var < 0 ? s.fixed : assign[static_cast<std::size_t>(s.var)];
              if (!in_range(v, p)) offending.insert(v);
            }
          }
          if (offending.empty()) return;
          RsosWitness wit;
          wit.order = w.order;
          wit.magnitude = std::abs(w.coeff);
          wit.current_index = i;
          wit.barred = (bar == 1);
          wit.out_of_range.assign(offending.begin(), offending.end());
          wit.perimeter = lat.perimeter;
          for (std::size_t v = 0; v < pr.vars.size(); ++v) {
            wit.heights.push_back(RegionHeight{pr.vars[v].first.first, pr.vars[v].first.second,
                                               pr.vars[v].second, assign[v]});
          }
          rep.witness = std::move(wit);
        });
      }
    }
  }
  if (!rep.witness) {
    throw ProbeInconclusive("no out-of-range tail contribution found within the search bound");
  }
  return rep;
}

std::string rsos_probe_to_json(const RsosProbeReport& report) {
  json j;
  j["p"] = report.p;
  j["pure_partition_restricts"] = report.pure_partition_restricts;
  j["configs_scanned"] = report.configs_scanned;
  if (report.witness) {
    const auto& w = *report.witness;
    json jw;
    jw["order"] = w.order;
    jw["magnitude"] = w.magnitude;
    jw["current_index"] = w.current_index;
    jw["barred"] = w.barred;
    jw["out_of_range"] = w.out_of_range;
    jw["perimeter"] = w.perimeter;
    jw["heights"] = json::array();
    for (const auto& rh : w.heights) {
      jw["heights"].push_back(
          {{"cell", {rh.cell_i, rh.cell_j}}, {"region", rh.region}, {"height", rh.height}});
    }
    j["witness"] = jw;
  } else {
    j["witness"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace vertexlab
