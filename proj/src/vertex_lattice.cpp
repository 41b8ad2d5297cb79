#include "vertexlab/vertex_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "json.hpp"

namespace vertexlab {

namespace {

using nlohmann::json;

// Closed-form vertex weight R(lambda)[sS, sW, sN, sE]; spins 0 = up, 1 = down.
CScalar vertex_weight(int s_s, int s_w, int s_n, int s_e, CScalar lambda, const ModelParams& p) {
  if (s_s + s_w != s_n + s_e) return CScalar(0.0);
  if (s_s == s_n && s_w == s_e) {
    return s_s == s_w ? std::sinh(lambda + p.eta) : std::sinh(lambda);
  }
  return std::sinh(p.eta);  // spins exchanged between the two lines
}

struct EdgeKey {
  char orient;
  int line;
  int offset;
  bool operator<(const EdgeKey& o) const {
    return std::tie(orient, line, offset) < std::tie(o.orient, o.line, o.offset);
  }
};

EdgeKey key_of(const EdgeRef& e) { return {e.orient, e.line, e.offset}; }

// Everything the two summation engines need: effective boundary vectors with
// external-edge operators folded in, plus operators on internal edges.
struct Machine {
  int C = 0, R = 0;
  const VertexLatticeSpec* spec = nullptr;
  const ModelParams* p = nullptr;
  // Effective boundary vectors indexed by the vertex-side spin value.
  std::vector<std::array<CScalar, 2>> efftop, effbot, effwest, effeast;
  // Operators on internal edges (identity when absent).
  std::map<EdgeKey, SiteOperator> internal_ops;
};

std::array<CScalar, 2> base_vector(const BoundaryTerm& b) {
  switch (b.mode) {
    case BoundaryTerm::Mode::fixed:
      return b.spin == +1 ? std::array<CScalar, 2>{1.0, 0.0} : std::array<CScalar, 2>{0.0, 1.0};
    case BoundaryTerm::Mode::summed:
      return {1.0, 1.0};
    case BoundaryTerm::Mode::weighted:
      return b.weight;
  }
  return {1.0, 0.0};
}

bool edge_is_internal(const EdgeRef& e, int C, int R) {
  if (e.orient == 'v') return e.offset >= 1 && e.offset <= R - 1 && e.line >= 0 && e.line < C;
  return e.offset >= 1 && e.offset <= C - 1 && e.line >= 0 && e.line < R;
}

Machine build_machine(const VertexLatticeSpec& spec, const ModelParams& p,
                      const std::map<EdgeKey, SiteOperator>& ops) {
  spec.validate();
  Machine m;
  m.C = spec.n_cols;
  m.R = spec.n_rows;
  m.spec = &spec;
  m.p = &p;

  auto fold = [&](const std::array<CScalar, 2>& bv, const SiteOperator* op, bool outer_is_in) {
    std::array<CScalar, 2> eff{};
    if (op == nullptr) return bv;
    for (int vtx = 0; vtx < 2; ++vtx) {
      CScalar acc(0.0);
      for (int outer = 0; outer < 2; ++outer) {
        // Operator maps the in end to the out end of the edge.
        acc += outer_is_in ? bv[outer] * (*op)(vtx, outer) : bv[outer] * (*op)(outer, vtx);
      }
      eff[vtx] = acc;
    }
    return eff;
  };

  auto find_op = [&](char orient, int line, int offset) -> const SiteOperator* {
    auto it = ops.find({orient, line, offset});
    return it == ops.end() ? nullptr : &it->second;
  };

  m.efftop.resize(m.C);
  m.effbot.resize(m.C);
  for (int c = 0; c < m.C; ++c) {
    // Top external v(c,0): outer end is the in end (spins flow down).
    m.efftop[c] = fold(base_vector(spec.top[c]), find_op('v', c, 0), true);
    // Bottom external v(c,R): outer end is the out end.
    m.effbot[c] = fold(base_vector(spec.bottom[c]), find_op('v', c, m.R), false);
  }
  m.effwest.resize(m.R);
  m.effeast.resize(m.R);
  for (int r = 0; r < m.R; ++r) {
    // West external h(r,0): outer (west) end is the out end (spins flow west).
    m.effwest[r] = fold(base_vector(spec.west[r]), find_op('h', r, 0), false);
    // East external h(r,C): outer (east) end is the in end.
    m.effeast[r] = fold(base_vector(spec.east[r]), find_op('h', r, m.C), true);
  }

  for (const auto& [k, op] : ops) {
    EdgeRef e{k.orient, k.line, k.offset};
    if (edge_is_internal(e, m.C, m.R)) m.internal_ops.emplace(k, op);
  }
  return m;
}

// ---- row-transfer engine ---------------------------------------------------

CScalar transfer_sum(const Machine& m) {
  const int C = m.C, R = m.R;
  if (C > 12) throw SizeError("transfer limited to 12 columns");
  const std::size_t dim = std::size_t{1} << C;
  const auto bit = [&](std::size_t s, int c) { return static_cast<int>((s >> (C - 1 - c)) & 1u); };

  std::vector<CScalar> acc(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    CScalar v(1.0);
    for (int c = 0; c < C; ++c) v *= m.efftop[c][static_cast<std::size_t>(bit(s, c))];
    acc[s] = v;
  }

  for (int r = 0; r < R; ++r) {
    // Operators on the internal gap above this row map the state.
    if (r >= 1) {
      std::vector<const SiteOperator*> gap(C, nullptr);
      bool any = false;
      for (int c = 0; c < C; ++c) {
        auto it = m.internal_ops.find({'v', c, r});
        if (it != m.internal_ops.end()) {
          gap[c] = &it->second;
          any = true;
        }
      }
      if (any) {
        std::vector<CScalar> next(dim, CScalar(0.0));
        for (std::size_t up = 0; up < dim; ++up) {
          if (acc[up] == CScalar(0.0)) continue;
          for (std::size_t dn = 0; dn < dim; ++dn) {
            CScalar g(1.0);
            for (int c = 0; c < C; ++c) {
              const int bu = bit(up, c), bd = bit(dn, c);
              if (gap[c] == nullptr) {
                if (bu != bd) {
                  g = CScalar(0.0);
                  break;
                }
              } else {
                g *= (*gap[c])(bd, bu);
                if (g == CScalar(0.0)) break;
              }
            }
            next[dn] += acc[up] * g;
          }
        }
        acc = std::move(next);
      }
    }

    // Row matrix: for each (top state, bottom state), chain west to east.
    std::vector<CScalar> next(dim, CScalar(0.0));
    for (std::size_t st = 0; st < dim; ++st) {
      if (acc[st] == CScalar(0.0)) continue;
      for (std::size_t sb = 0; sb < dim; ++sb) {
        std::array<CScalar, 2> vec = m.effwest[r];
        for (int c = 0; c < C; ++c) {
          if (c >= 1) {
            auto it = m.internal_ops.find({'h', r, c});
            if (it != m.internal_ops.end()) {
              // vec is indexed by the west (out) end; map to the east (in) end.
              std::array<CScalar, 2> w{};
              for (int in = 0; in < 2; ++in)
                for (int out = 0; out < 2; ++out) w[in] += vec[out] * it->second(out, in);
              vec = w;
            }
          }
          const CScalar lambda = m.spec->col_lambdas[c] - m.spec->row_lambdas[r];
          std::array<CScalar, 2> w{};
          for (int e = 0; e < 2; ++e)
            for (int wv = 0; wv < 2; ++wv)
              w[e] += vec[wv] * vertex_weight(bit(sb, c), wv, bit(st, c), e, lambda, *m.p);
          vec = w;
        }
        const CScalar row_amp = vec[0] * m.effeast[r][0] + vec[1] * m.effeast[r][1];
        if (row_amp != CScalar(0.0)) next[sb] += acc[st] * row_amp;
      }
    }
    acc = std::move(next);
  }

  CScalar z(0.0);
  for (std::size_t s = 0; s < dim; ++s) {
    CScalar v = acc[s];
    for (int c = 0; c < C; ++c) v *= m.effbot[c][static_cast<std::size_t>(bit(s, c))];
    z += v;
  }
  return z;
}

// ---- depth-first enumeration engine ----------------------------------------

struct EnumState {
  const Machine* m;
  // Assigned end values, -1 when not yet set. For vertical edges vup is the
  // upper (in) end, vdn the lower (out) end; for horizontal edges hwest is
  // the west (out) end, heast the east (in) end.
  std::vector<std::vector<int>> vup, hwest;
  CScalar total{0.0};
};

void enum_vertex(EnumState& st, int k, CScalar amp) {
  const Machine& m = *st.m;
  const int C = m.C, R = m.R;
  if (k == C * R) {
    st.total += amp;
    return;
  }
  const int r = k / C, c = k % C;
  const CScalar lambda = m.spec->col_lambdas[c] - m.spec->row_lambdas[r];

  const SiteOperator* nop = nullptr;
  if (r >= 1) {
    auto it = m.internal_ops.find({'v', c, r});
    if (it != m.internal_ops.end()) nop = &it->second;
  }
  const SiteOperator* wop = nullptr;
  if (c >= 1) {
    auto it = m.internal_ops.find({'h', r, c});
    if (it != m.internal_ops.end()) wop = &it->second;
  }

  for (int n = 0; n < 2; ++n) {
    CScalar amp_n = amp;
    if (r == 0) {
      amp_n *= m.efftop[c][static_cast<std::size_t>(n)];
    } else {
      const int up = st.vup[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
      if (nop != nullptr) {
        amp_n *= (*nop)(n, up);  // lower (out) end branches against the known upper end
      } else if (n != up) {
        continue;
      }
    }
    if (amp_n == CScalar(0.0)) continue;

    for (int w = 0; w < 2; ++w) {
      CScalar amp_w = amp_n;
      if (c == 0) {
        amp_w *= m.effwest[r][static_cast<std::size_t>(w)];
      } else {
        const int west = st.hwest[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        if (wop != nullptr) {
          amp_w *= (*wop)(west, w);  // east (in) end branches against the known west end
        } else if (w != west) {
          continue;
        }
      }
      if (amp_w == CScalar(0.0)) continue;

      for (int e = 0; e < 2; ++e) {
        CScalar amp_e = amp_w;
        if (c + 1 == C) amp_e *= m.effeast[r][static_cast<std::size_t>(e)];
        if (amp_e == CScalar(0.0)) continue;

        for (int s = 0; s < 2; ++s) {
          CScalar amp_s = amp_e;
          if (r + 1 == R) amp_s *= m.effbot[c][static_cast<std::size_t>(s)];
          if (amp_s == CScalar(0.0)) continue;

          const CScalar wgt = vertex_weight(s, w, n, e, lambda, *m.p);
          if (wgt == CScalar(0.0)) continue;

          if (c + 1 < C) st.hwest[static_cast<std::size_t>(r)][static_cast<std::size_t>(c + 1)] = e;
          if (r + 1 < R) st.vup[static_cast<std::size_t>(c)][static_cast<std::size_t>(r + 1)] = s;
          enum_vertex(st, k + 1, amp_s * wgt);
        }
      }
    }
  }
}

CScalar enumeration_sum(const Machine& m) {
  EnumState st;
  st.m = &m;
  st.vup.assign(static_cast<std::size_t>(m.C), std::vector<int>(static_cast<std::size_t>(m.R) + 1, -1));
  st.hwest.assign(static_cast<std::size_t>(m.R), std::vector<int>(static_cast<std::size_t>(m.C) + 1, -1));
  enum_vertex(st, 0, CScalar(1.0));
  return st.total;
}

CScalar dual_sum(const Machine& m, const ModelParams& p, const char* what) {
  const CScalar zt = transfer_sum(m);
  if (m.spec->edge_count() <= 26) {
    const CScalar ze = enumeration_sum(m);
    if (std::abs(zt - ze) > p.tol.rel_tol * (1.0 + std::abs(zt))) {
      throw InternalInconsistency(std::string(what) + ": transfer and enumeration disagree");
    }
  }
  return zt;
}

std::map<EdgeKey, SiteOperator> tail_operators(const VertexLatticeSpec& spec, const TailPath& tail,
                                               GeneratorId gen, const ModelParams& p,
                                               bool include_crossings) {
  if (gen.kind != GenKind::f && gen.kind != GenKind::f_bar) {
    throw ArgError("current insertion must be f or f_bar");
  }
  tail.validate(spec);
  std::map<EdgeKey, SiteOperator> ops;
  auto compose = [&](const EdgeRef& e, const SiteOperator& x) {
    auto it = ops.find(key_of(e));
    if (it == ops.end()) {
      ops.emplace(key_of(e), x);
    } else {
      it->second = x * it->second;
    }
  };
  if (include_crossings) {
    for (const auto& [edge, dir] : tail.crossings()) {
      const GenKind tk = (dir == 'W' || dir == 'N') ? GenKind::t_inv : GenKind::t;
      compose(edge, generator_on_v({tk, gen.index}, CScalar(0.0), p));
    }
  }
  const CScalar lam = tail.insertion.orient == 'v' ? spec.col_lambdas[tail.insertion.line]
                                                   : spec.row_lambdas[tail.insertion.line];
  compose(tail.insertion, generator_on_v(gen, lam, p));
  return ops;
}

}  // namespace

void VertexLatticeSpec::validate() const {
  if (n_cols < 1 || n_rows < 1) throw GeometryError("lattice needs at least one vertex");
  if (col_lambdas.size() != static_cast<std::size_t>(n_cols) ||
      row_lambdas.size() != static_cast<std::size_t>(n_rows)) {
    throw GeometryError("one spectral parameter per line required");
  }
  if (top.size() != static_cast<std::size_t>(n_cols) ||
      bottom.size() != static_cast<std::size_t>(n_cols) ||
      west.size() != static_cast<std::size_t>(n_rows) ||
      east.size() != static_cast<std::size_t>(n_rows)) {
    throw GeometryError("boundary term count does not match lattice perimeter");
  }
}

VertexLatticeSpec VertexLatticeSpec::uniform(int n_cols, int n_rows, std::vector<CScalar> cols,
                                             std::vector<CScalar> rows) {
  VertexLatticeSpec s;
  s.n_cols = n_cols;
  s.n_rows = n_rows;
  s.col_lambdas = std::move(cols);
  s.row_lambdas = std::move(rows);
  s.top.assign(static_cast<std::size_t>(n_cols), BoundaryTerm::plus());
  s.bottom.assign(static_cast<std::size_t>(n_cols), BoundaryTerm::plus());
  s.west.assign(static_cast<std::size_t>(n_rows), BoundaryTerm::plus());
  s.east.assign(static_cast<std::size_t>(n_rows), BoundaryTerm::plus());
  s.validate();
  return s;
}

std::vector<std::pair<int, int>> TailPath::cells() const {
  std::vector<std::pair<int, int>> out{anchor};
  int i = anchor.first, j = anchor.second;
  for (char mv : steps) {
    switch (mv) {
      case 'U': --j; break;
      case 'D': ++j; break;
      case 'L': --i; break;
      case 'R': ++i; break;
      default: throw GeometryError("tail step must be one of U, D, L, R");
    }
    out.emplace_back(i, j);
  }
  return out;
}

std::vector<std::pair<EdgeRef, char>> TailPath::crossings() const {
  std::vector<std::pair<EdgeRef, char>> out;
  int i = anchor.first, j = anchor.second;
  for (char mv : steps) {
    switch (mv) {
      case 'U':
        out.push_back({EdgeRef{'h', j - 1, i}, 'N'});
        --j;
        break;
      case 'D':
        out.push_back({EdgeRef{'h', j, i}, 'S'});
        ++j;
        break;
      case 'L':
        out.push_back({EdgeRef{'v', i - 1, j}, 'W'});
        --i;
        break;
      case 'R':
        out.push_back({EdgeRef{'v', i, j}, 'E'});
        ++i;
        break;
      default:
        throw GeometryError("tail step must be one of U, D, L, R");
    }
  }
  return out;
}

void TailPath::validate(const VertexLatticeSpec& spec) const {
  const int C = spec.n_cols, R = spec.n_rows;
  if (!(anchor.first == 0 || anchor.first == C || anchor.second == 0 || anchor.second == R)) {
    throw GeometryError("tail anchor must sit on the boundary ring of dual cells");
  }
  const auto cs = cells();
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : cs) {
    if (i < 0 || i > C || j < 0 || j > R) throw GeometryError("tail leaves the dual-cell grid");
    if (!seen.insert({i, j}).second) throw GeometryError("tail revisits a dual cell");
  }
  if (!edge_is_internal(insertion, C, R)) throw GeometryError("insertion edge must be internal");
  const std::pair<int, int> want_final =
      insertion.orient == 'v' ? std::pair<int, int>{insertion.line + 1, insertion.offset}
                              : std::pair<int, int>{insertion.offset, insertion.line + 1};
  if (cs.back() != want_final) {
    throw GeometryError(insertion.orient == 'v'
                            ? "vertical insertion must be approached from its east cell"
                            : "horizontal insertion must be approached from its south cell");
  }
  for (const auto& [edge, dir] : crossings()) {
    (void)dir;
    if (edge == insertion) throw GeometryError("tail crosses its own insertion edge");
  }
}

int TailPath::winding_number() const {
  const auto cs = cells();
  // Geometric picture: cell (i, j) sits at (i, -j); the insertion edge
  // midpoint is the reference point for the sweep.
  double mx, my;
  if (insertion.orient == 'v') {
    mx = insertion.line + 0.5;
    my = -static_cast<double>(insertion.offset);
  } else {
    mx = insertion.offset;
    my = -(insertion.line + 0.5);
  }
  // Frame point just outside the ring so the sweep starts outside the lattice.
  const auto [i0, j0] = cs.front();
  std::pair<double, double> frame{static_cast<double>(i0), -static_cast<double>(j0) - 0.6};
  if (j0 == 0) {
    frame = {static_cast<double>(i0), 0.6};
  } else if (i0 == 0) {
    frame = {-0.6, -static_cast<double>(j0)};
  }
  // Anchors on the bottom ring keep the downward frame; east-ring anchors
  // (i0 > 0, 0 < j0 < bottom) also use it, sweeping in from below.
  std::vector<std::pair<double, double>> pts{frame};
  for (const auto& [i, j] : cs) pts.emplace_back(static_cast<double>(i), -static_cast<double>(j));

  double total = 0.0;
  double prev = std::atan2(pts[0].second - my, pts[0].first - mx);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double ang = std::atan2(pts[k].second - my, pts[k].first - mx);
    double d = ang - prev;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    total += d;
    prev = ang;
  }
  const double wrapped = std::remainder(total, 2.0 * std::numbers::pi);
  return static_cast<int>(std::lround((total - wrapped) / (2.0 * std::numbers::pi)));
}

TailPath straight_tail(std::pair<int, int> anchor, EdgeRef insertion,
                       const VertexLatticeSpec& spec) {
  const std::pair<int, int> target =
      insertion.orient == 'v' ? std::pair<int, int>{insertion.line + 1, insertion.offset}
                              : std::pair<int, int>{insertion.offset, insertion.line + 1};
  auto build = [&](bool vertical_first) {
    std::string steps;
    int i = anchor.first, j = anchor.second;
    auto leg_v = [&] {
      while (j > target.second) {
        steps.push_back('U');
        --j;
      }
      while (j < target.second) {
        steps.push_back('D');
        ++j;
      }
    };
    auto leg_h = [&] {
      while (i > target.first) {
        steps.push_back('L');
        --i;
      }
      while (i < target.first) {
        steps.push_back('R');
        ++i;
      }
    };
    if (vertical_first) {
      leg_v();
      leg_h();
    } else {
      leg_h();
      leg_v();
    }
    return TailPath{anchor, steps, insertion};
  };
  for (bool vfirst : {true, false}) {
    TailPath t = build(vfirst);
    try {
      t.validate(spec);
      return t;
    } catch (const GeometryError&) {
      continue;
    }
  }
  throw GeometryError("no two-leg tail from anchor to insertion edge");
}

ZResult partition_function(const VertexLatticeSpec& spec, const ModelParams& p) {
  const Machine m = build_machine(spec, p, {});
  ZResult out;
  out.by_transfer = transfer_sum(m);
  if (spec.edge_count() <= 26) {
    out.by_enumeration = enumeration_sum(m);
    if (std::abs(out.by_transfer - *out.by_enumeration) >
        p.tol.rel_tol * (1.0 + std::abs(out.by_transfer))) {
      throw InternalInconsistency("partition function: transfer and enumeration disagree");
    }
  }
  return out;
}

CurrentResult current_expectation(const VertexLatticeSpec& spec, const TailPath& tail,
                                  GeneratorId gen, const ModelParams& p) {
  const auto ops = tail_operators(spec, tail, gen, p, true);
  const Machine with_ops = build_machine(spec, p, ops);
  const Machine plain = build_machine(spec, p, {});
  CurrentResult out;
  out.raw = dual_sum(with_ops, p, "current expectation");
  out.z = dual_sum(plain, p, "partition function");
  if (std::abs(out.z) <= p.tol.singularity_guard) {
    throw DegenerateNormalization("partition function too small to normalize");
  }
  out.value = out.raw / out.z;
  return out;
}

CheckResult check_plaquette_conservation(const VertexLatticeSpec& spec, int row, int col,
                                         std::pair<int, int> anchor, GeneratorId gen,
                                         const ModelParams& p) {
  const int C = spec.n_cols, R = spec.n_rows;
  if (row < 1 || row > R - 2 || col < 1 || col > C - 2) {
    throw GeometryError("conservation vertex needs all four edges internal");
  }
  const EdgeRef north{'v', col, row};
  const EdgeRef south{'v', col, row + 1};
  const EdgeRef west{'h', row, col};
  const EdgeRef east{'h', row, col + 1};

  CScalar sums[4];
  const EdgeRef edges[4] = {north, west, south, east};
  double scale = 0.0;
  for (int k = 0; k < 4; ++k) {
    const TailPath tail = straight_tail(anchor, edges[k], spec);
    const auto ops = tail_operators(spec, tail, gen, p, true);
    sums[k] = dual_sum(build_machine(spec, p, ops), p, "conservation sum");
    scale = std::max(scale, std::abs(sums[k]));
  }
  const CScalar combo = sums[0] - sums[1] - sums[2] + sums[3];
  const double res = std::abs(combo) / std::max(scale, 1e-300);
  return make_check("plaquette_conservation", res, p.tol.rel_tol);
}

CheckResult check_path_independence(const VertexLatticeSpec& spec, const TailPath& a,
                                    const TailPath& b, GeneratorId gen, const ModelParams& p) {
  if (!(a.insertion == b.insertion)) throw GeometryError("tails target different edges");
  if (a.anchor != b.anchor) throw GeometryError("tails start from different anchors");
  const CScalar sa = dual_sum(build_machine(spec, p, tail_operators(spec, a, gen, p, true)), p,
                              "path independence");
  const CScalar sb = dual_sum(build_machine(spec, p, tail_operators(spec, b, gen, p, true)), p,
                              "path independence");
  return make_check("path_independence", residual(sa, sb), p.tol.abs_tol);
}

CheckResult check_unwind(const VertexLatticeSpec& spec, const TailPath& wound,
                         const TailPath& reference, GeneratorId gen, const ModelParams& p) {
  if (!(wound.insertion == reference.insertion)) {
    throw GeometryError("tails target different edges");
  }
  if (wound.anchor != reference.anchor) {
    throw GeometryError("tails start from different anchors");
  }
  const int dm = wound.winding_number() - reference.winding_number();
  const CScalar factor = gen.kind == GenKind::f_bar
                             ? std::exp(2.0 * p.eta * static_cast<double>(dm))
                             : std::exp(-2.0 * p.eta * static_cast<double>(dm));
  const CScalar sw = dual_sum(build_machine(spec, p, tail_operators(spec, wound, gen, p, true)), p,
                              "unwind");
  const CScalar sr = dual_sum(
      build_machine(spec, p, tail_operators(spec, reference, gen, p, true)), p, "unwind");
  return make_check("unwind", residual(sw, factor * sr), p.tol.abs_tol);
}

CheckResult check_zero_eta_tail(const VertexLatticeSpec& spec, const TailPath& tail,
                                GeneratorId gen, const ModelParams& p) {
  ModelParams p0 = p;
  p0.eta = CScalar(0.0);
  const CScalar with_tail =
      dual_sum(build_machine(spec, p0, tail_operators(spec, tail, gen, p0, true)), p0,
               "zero eta tail");
  const CScalar bare = dual_sum(
      build_machine(spec, p0, tail_operators(spec, tail, gen, p0, false)), p0, "zero eta bare");
  return make_check("zero_eta_tail", residual(with_tail, bare), p.tol.abs_tol);
}

namespace {

json cvalue(const CScalar& z) { return json::array({z.real(), z.imag()}); }

CScalar cparse(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ArgError("complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json boundary_value(const BoundaryTerm& b) {
  switch (b.mode) {
    case BoundaryTerm::Mode::fixed: return b.spin == +1 ? json("+") : json("-");
    case BoundaryTerm::Mode::summed: return json("sum");
    case BoundaryTerm::Mode::weighted:
      return json::array({cvalue(b.weight[0]), cvalue(b.weight[1])});
  }
  return json("+");
}

BoundaryTerm boundary_parse(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "+") return BoundaryTerm::plus();
    if (s == "-") return BoundaryTerm::minus();
    if (s == "sum") return BoundaryTerm::sum();
    throw ArgError("boundary string must be '+', '-' or 'sum'");
  }
  if (j.is_array() && j.size() == 2) {
    return BoundaryTerm::vec(cparse(j[0]), cparse(j[1]));
  }
  throw ArgError("boundary entry must be a string or a pair of complex weights");
}

std::string gen_to_string(GeneratorId g) { return to_string(g); }

GeneratorId gen_parse(const std::string& s) {
  for (GenKind k : {GenKind::f, GenKind::f_bar, GenKind::e, GenKind::e_bar, GenKind::t,
                    GenKind::t_inv}) {
    for (int i = 0; i < 2; ++i) {
      if (to_string(GeneratorId{k, i}) == s) return {k, i};
    }
  }
  throw ArgError("unknown generator name: " + s);
}

}  // namespace

std::string lattice_job_to_json(const LatticeJob& job) {
  json j;
  j["dimensions"] = {job.spec.n_cols, job.spec.n_rows};
  j["col_lambdas"] = json::array();
  for (const auto& l : job.spec.col_lambdas) j["col_lambdas"].push_back(cvalue(l));
  j["row_lambdas"] = json::array();
  for (const auto& l : job.spec.row_lambdas) j["row_lambdas"].push_back(cvalue(l));
  json b;
  for (const auto& [name, side] :
       std::initializer_list<std::pair<const char*, const std::vector<BoundaryTerm>*>>{
           {"top", &job.spec.top},
           {"bottom", &job.spec.bottom},
           {"west", &job.spec.west},
           {"east", &job.spec.east}}) {
    json arr = json::array();
    for (const auto& t : *side) arr.push_back(boundary_value(t));
    b[name] = arr;
  }
  j["boundary"] = b;
  if (job.tail.has_value()) {
    json t;
    t["anchor"] = {job.tail->anchor.first, job.tail->anchor.second};
    t["steps"] = job.tail->steps;
    t["insertion"] = {{"orient", std::string(1, job.tail->insertion.orient)},
                      {"line", job.tail->insertion.line},
                      {"offset", job.tail->insertion.offset}};
    t["generator"] = gen_to_string(job.gen);
    j["tail"] = t;
  }
  return j.dump(2);
}

LatticeJob lattice_job_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, true, true);
  LatticeJob job;
  const auto& dims = j.at("dimensions");
  job.spec.n_cols = dims.at(0).get<int>();
  job.spec.n_rows = dims.at(1).get<int>();
  for (const auto& l : j.at("col_lambdas")) job.spec.col_lambdas.push_back(cparse(l));
  for (const auto& l : j.at("row_lambdas")) job.spec.row_lambdas.push_back(cparse(l));
  const auto& b = j.at("boundary");
  for (const auto& t : b.at("top")) job.spec.top.push_back(boundary_parse(t));
  for (const auto& t : b.at("bottom")) job.spec.bottom.push_back(boundary_parse(t));
  for (const auto& t : b.at("west")) job.spec.west.push_back(boundary_parse(t));
  for (const auto& t : b.at("east")) job.spec.east.push_back(boundary_parse(t));
  job.spec.validate();
  if (j.contains("tail")) {
    const auto& t = j.at("tail");
    TailPath tail;
    tail.anchor = {t.at("anchor").at(0).get<int>(), t.at("anchor").at(1).get<int>()};
    tail.steps = t.at("steps").get<std::string>();
    const auto& ins = t.at("insertion");
    const std::string orient = ins.at("orient").get<std::string>();
    if (orient != "v" && orient != "h") throw ArgError("insertion orient must be 'v' or 'h'");
    tail.insertion = EdgeRef{orient[0], ins.at("line").get<int>(), ins.at("offset").get<int>()};
    tail.validate(job.spec);
    job.tail = tail;
    if (t.contains("generator")) job.gen = gen_parse(t.at("generator").get<std::string>());
  }
  return job;
}

}  // namespace vertexlab
