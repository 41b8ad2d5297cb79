#include "vertexlab/sos_weights.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "vertexlab/errors.hpp"

namespace vertexlab {

namespace {

using json = nlohmann::json;

CScalar guarded_sinh(CScalar z, double guard, const char* what) {
  const CScalar s = std::sinh(z);
  if (std::abs(s) <= guard) throw SingularHeight(what);
  return s;
}

long mod_pos(long k, long n) {
  long r = k % n;
  return r < 0 ? r + n : r;
}

bool adjacent(long u, long v, bool cyclic, long n) {
  if (!cyclic) return std::labs(u - v) == 1;
  const long d = mod_pos(u - v, n);
  return d == 1 || d == n - 1;
}

std::vector<long> neighbors(long k, bool cyclic, long n) {
  if (!cyclic) return {k - 1, k + 1};
  return {mod_pos(k - 1, n), mod_pos(k + 1, n)};
}

std::array<CScalar, 4> kron22(const std::array<CScalar, 2>& x,
                              const std::array<CScalar, 2>& y) {
  return {x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]};
}

double max_abs4(const std::array<CScalar, 4>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

CScalar height_value(long k, const ModelParams& params) {
  return params.x0 + CScalar(static_cast<double>(k), 0.0);
}

std::array<CScalar, 2> intertwiner(IntertwinerKind kind, long a, long b,
                                   CScalar lambda, const ModelParams& params) {
  if (std::labs(a - b) != 1) throw ArgError("intertwiner heights must be adjacent");
  const CScalar av = height_value(a, params);
  const CScalar eta = params.eta;
  const double pm = static_cast<double>(b - a);
  const double half = 0.5;
  switch (kind) {
    case IntertwinerKind::psi:
      return {std::exp((-lambda + pm * av * eta) * half),
              std::exp((lambda - pm * av * eta) * half)};
    case IntertwinerKind::psi_star: {
      const CScalar den =
          guarded_sinh(av * eta, params.tol.singularity_guard, "psi_star: sinh(a eta)");
      const CScalar pref = pm / (2.0 * den);
      return {pref * std::exp((lambda + pm * av * eta) * half),
              -pref * std::exp((-lambda - pm * av * eta) * half)};
    }
    case IntertwinerKind::psi_prime: {
      const CScalar bv = height_value(b, params);
      const CScalar den =
          guarded_sinh(bv * eta, params.tol.singularity_guard, "psi_prime: sinh(b eta)");
      const CScalar pref = pm / (2.0 * den);
      return {pref * std::exp((lambda + pm * av * eta) * half + eta),
              -pref * std::exp((-lambda - pm * av * eta) * half - eta)};
    }
  }
  throw ArgError("intertwiner: unknown kind");
}

namespace {

CScalar face_weight_impl(long a, long b, long c, long d, CScalar lambda,
                         const ModelParams& params, bool cyclic, long n) {
  const std::array<std::pair<long, long>, 4> pairs{
      {{a, b}, {b, c}, {c, d}, {d, a}}};
  for (const auto& [u, v] : pairs)
    if (!adjacent(u, v, cyclic, n)) return CScalar(0.0, 0.0);

  const CScalar eta = params.eta;
  const CScalar av = height_value(a, params);
  const long dca = cyclic ? mod_pos(c - a, n) : c - a;

  if ((!cyclic && (dca == 2 || dca == -2)) ||
      (cyclic && (dca == 2 || dca == mod_pos(-2, n)))) {
    // Mod 4 the +-2 offsets coincide, so adjacency also admits the
    // once-around pattern with d != b; it matches none of the closed forms
    // and carries weight zero.
    if (cyclic && mod_pos(d - b, n) != 0) return CScalar(0.0, 0.0);
    return std::sinh(lambda + eta);
  }
  const bool c_eq_a = cyclic ? (dca == 0) : (c == a);
  if (c_eq_a) {
    const CScalar den =
        guarded_sinh(av * eta, params.tol.singularity_guard, "face_weight: sinh(a eta)");
    const bool d_eq_b = cyclic ? (mod_pos(d - b, n) == 0) : (d == b);
    if (d_eq_b) {
      const double pm =
          (cyclic ? (mod_pos(b - a, n) == 1 ? 1.0 : -1.0)
                  : static_cast<double>(b - a));
      return std::sinh(eta) * std::sinh(av * eta - pm * lambda) / den;
    }
    const bool d_mirror = cyclic ? (mod_pos(d - (2 * a - b), n) == 0) : (d == 2 * a - b);
    if (d_mirror) {
      // The neighbour enters through its local step off a, so the value stays
      // representative-independent in cyclic mode.
      const double pm =
          (cyclic ? (mod_pos(b - a, n) == 1 ? 1.0 : -1.0)
                  : static_cast<double>(b - a));
      const CScalar bv = av + pm;
      return std::sinh(lambda) * std::sinh(bv * eta) / den;
    }
  }
  throw InternalInconsistency("face_weight: admissible quadruple matched no case");
}

}  // namespace

CScalar face_weight(long a, long b, long c, long d, CScalar lambda,
                    const ModelParams& params) {
  return face_weight_impl(a, b, c, d, lambda, params, false, 0);
}

CScalar face_weight_cyclic(long a, long b, long c, long d, CScalar lambda,
                           const ModelParams& params, long n) {
  if (n < 3) throw ArgError("face_weight_cyclic: n must be >= 3");
  return face_weight_impl(a, b, c, d, lambda, params, true, n);
}

CheckResult check_face_intertwining(int direction, long a, long mid, long c,
                                    CScalar l1, CScalar l2, const ModelParams& params) {
  if (direction != 1 && direction != 2)
    throw ArgError("check_face_intertwining: direction must be 1 or 2");
  if (std::labs(a - mid) != 1 || std::labs(mid - c) != 1)
    throw ArgError("check_face_intertwining: inadmissible height triple");

  const ComplexTensor R = r_matrix(l1 - l2, params);
  const CScalar l12 = l1 - l2;
  std::array<CScalar, 4> lhs{}, rhs{};

  if (direction == 1) {
    const long b = mid;
    const auto x = intertwiner(IntertwinerKind::psi, a, b, l1, params);
    const auto y = intertwiner(IntertwinerKind::psi, b, c, l2, params);
    const auto v = kron22(x, y);
    for (int o1 = 0; o1 < 2; ++o1)
      for (int o2 = 0; o2 < 2; ++o2) {
        CScalar s{};
        for (int i1 = 0; i1 < 2; ++i1)
          for (int i2 = 0; i2 < 2; ++i2)
            s += R.at({static_cast<std::size_t>(o1), static_cast<std::size_t>(o2),
                       static_cast<std::size_t>(i1), static_cast<std::size_t>(i2)}) *
                 v[2 * i1 + i2];
        lhs[2 * o1 + o2] = s;
      }
    for (long d : {a - 1, a + 1}) {
      if (std::labs(d - c) != 1) continue;
      const CScalar w = face_weight(a, b, c, d, l12, params);
      const auto p = intertwiner(IntertwinerKind::psi, d, c, l1, params);
      const auto q = intertwiner(IntertwinerKind::psi, a, d, l2, params);
      const auto t = kron22(p, q);
      for (int i = 0; i < 4; ++i) rhs[i] += w * t[i];
    }
  } else {
    const long d = mid;
    const auto x = intertwiner(IntertwinerKind::psi_star, d, c, l1, params);
    const auto y = intertwiner(IntertwinerKind::psi_star, a, d, l2, params);
    const auto v = kron22(x, y);
    for (int i1 = 0; i1 < 2; ++i1)
      for (int i2 = 0; i2 < 2; ++i2) {
        CScalar s{};
        for (int o1 = 0; o1 < 2; ++o1)
          for (int o2 = 0; o2 < 2; ++o2)
            s += v[2 * o1 + o2] *
                 R.at({static_cast<std::size_t>(o1), static_cast<std::size_t>(o2),
                       static_cast<std::size_t>(i1), static_cast<std::size_t>(i2)});
        lhs[2 * i1 + i2] = s;
      }
    for (long b : {a - 1, a + 1}) {
      if (std::labs(b - c) != 1) continue;
      const CScalar w = face_weight(a, b, c, d, l12, params);
      const auto p = intertwiner(IntertwinerKind::psi_star, a, b, l1, params);
      const auto q = intertwiner(IntertwinerKind::psi_star, b, c, l2, params);
      const auto t = kron22(p, q);
      for (int i = 0; i < 4; ++i) rhs[i] += w * t[i];
    }
  }

  double diff = 0.0;
  for (int i = 0; i < 4; ++i) diff = std::max(diff, std::abs(lhs[i] - rhs[i]));
  const double res = diff / (1.0 + max_abs4(lhs));
  const std::string name = "face-intertwining-" + std::to_string(direction);
  return make_check(name, res, params.tol.rel_tol);
}

CheckResult check_inversions(char which, long a, CScalar lambda, const ModelParams& params) {
  double worst = 0.0;
  const auto nb = std::array<long, 2>{a - 1, a + 1};
  switch (which) {
    case 'a': {
      for (long c : nb)
        for (long b : nb) {
          const auto s = intertwiner(IntertwinerKind::psi_star, a, c, lambda, params);
          const auto v = intertwiner(IntertwinerKind::psi, a, b, lambda, params);
          const CScalar dot = s[0] * v[0] + s[1] * v[1];
          const CScalar want = (b == c) ? CScalar(1.0, 0.0) : CScalar(0.0, 0.0);
          worst = std::max(worst, std::abs(dot - want));
        }
      break;
    }
    case 'b': {
      std::array<CScalar, 4> m{};
      for (long b : nb) {
        const auto v = intertwiner(IntertwinerKind::psi, a, b, lambda, params);
        const auto s = intertwiner(IntertwinerKind::psi_star, a, b, lambda, params);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) m[2 * i + j] += v[i] * s[j];
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          worst = std::max(worst,
                           std::abs(m[2 * i + j] - (i == j ? CScalar(1.0) : CScalar(0.0))));
      break;
    }
    case 'c': {
      for (long c : nb)
        for (long b : nb) {
          const auto p = intertwiner(IntertwinerKind::psi_prime, c, a, lambda, params);
          const auto v = intertwiner(IntertwinerKind::psi, b, a, lambda, params);
          const CScalar dot = p[0] * v[0] + p[1] * v[1];
          const CScalar want = (b == c) ? CScalar(1.0, 0.0) : CScalar(0.0, 0.0);
          worst = std::max(worst, std::abs(dot - want));
        }
      break;
    }
    case 'd': {
      std::array<CScalar, 4> m{};
      for (long b : nb) {
        const auto v = intertwiner(IntertwinerKind::psi, b, a, lambda, params);
        const auto p = intertwiner(IntertwinerKind::psi_prime, b, a, lambda, params);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) m[2 * i + j] += v[i] * p[j];
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          worst = std::max(worst,
                           std::abs(m[2 * i + j] - (i == j ? CScalar(1.0) : CScalar(0.0))));
      break;
    }
    default:
      throw ArgError("check_inversions: which must be one of a, b, c, d");
  }
  return make_check(std::string("inversion-") + which, worst, params.tol.abs_tol);
}

CheckResult check_sos_ybe(long a, long b, long c, long d, long e, long f,
                          CScalar l1, CScalar l2, CScalar l3, const ModelParams& params) {
  const std::array<std::pair<long, long>, 6> edges{
      {{a, b}, {b, c}, {c, d}, {d, e}, {e, f}, {f, a}}};
  for (const auto& [u, v] : edges)
    if (std::labs(u - v) != 1) throw ArgError("check_sos_ybe: inadmissible hexagon");

  const CScalar l12 = l1 - l2, l13 = l1 - l3, l23 = l2 - l3;
  CScalar lhs{}, rhs{};
  for (long g : {f - 1, f + 1}) {
    if (std::labs(g - b) != 1 || std::labs(g - d) != 1) continue;
    lhs += face_weight(f, g, d, e, l12, params) * face_weight(a, b, g, f, l13, params) *
           face_weight(b, c, d, g, l23, params);
  }
  for (long g : {a - 1, a + 1}) {
    if (std::labs(g - c) != 1 || std::labs(g - e) != 1) continue;
    rhs += face_weight(a, g, e, f, l23, params) * face_weight(g, c, d, e, l13, params) *
           face_weight(a, b, c, g, l12, params);
  }
  return make_check("sos-ybe", residual(lhs, rhs), params.tol.rel_tol);
}

std::map<std::pair<int, int>, long> corner_heights_from_perimeter(
    int n_cols, int n_rows, const std::vector<long>& perimeter) {
  const int C = n_cols, R = n_rows;
  const std::size_t expect = static_cast<std::size_t>(2 * (C + R));
  if (perimeter.size() != expect)
    throw GeometryError("perimeter length must be 2 (n_cols + n_rows)");
  std::map<std::pair<int, int>, long> h;
  std::size_t k = 0;
  for (int i = 0; i <= C; ++i) h[{i, 0}] = perimeter[k++];
  for (int j = 1; j <= R; ++j) h[{C, j}] = perimeter[k++];
  for (int i = C - 1; i >= 0; --i) h[{i, R}] = perimeter[k++];
  for (int j = R - 1; j >= 1; --j) h[{0, j}] = perimeter[k++];
  return h;
}

void SosLatticeSpec::validate() const {
  if (n_cols < 1 || n_rows < 1) throw GeometryError("lattice dimensions must be positive");
  if (face_count() > 16) throw SizeError("face enumeration limited to 16 faces");
  if (col_lambdas.size() != static_cast<std::size_t>(n_cols) ||
      row_lambdas.size() != static_cast<std::size_t>(n_rows))
    throw GeometryError("lambda vectors must match the face grid");
  if (cyclic && n < 3) throw ArgError("cyclic mode requires n >= 3");
  const auto walk = perimeter;
  if (walk.size() != static_cast<std::size_t>(2 * (n_cols + n_rows)))
    throw GeometryError("perimeter length must be 2 (n_cols + n_rows)");
  for (std::size_t k = 0; k < walk.size(); ++k) {
    const long u = walk[k];
    const long v = walk[(k + 1) % walk.size()];
    if (!adjacent(u, v, cyclic, n))
      throw GeometryError("perimeter heights must form a closed admissible walk");
  }
}

std::map<std::pair<int, int>, long> SosLatticeSpec::corner_heights() const {
  return corner_heights_from_perimeter(n_cols, n_rows, perimeter);
}

std::vector<long> random_boundary_walk(int n_cols, int n_rows, long k0,
                                       std::uint64_t seed) {
  const int total = 2 * (n_cols + n_rows);
  std::vector<long> steps(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) steps[static_cast<std::size_t>(i)] = (i < total / 2) ? 1 : -1;
  std::mt19937_64 rng(seed);
  std::shuffle(steps.begin(), steps.end(), rng);
  std::vector<long> walk;
  walk.reserve(static_cast<std::size_t>(total));
  walk.push_back(k0);
  long k = k0;
  for (int i = 0; i + 1 < total; ++i) {
    k += steps[static_cast<std::size_t>(i)];
    walk.push_back(k);
  }
  return walk;
}

namespace {

CScalar face_weight_for(const SosLatticeSpec& spec, long a, long b, long c, long d,
                        CScalar lambda) {
  return spec.cyclic ? face_weight_cyclic(a, b, c, d, lambda, spec.params, spec.n)
                     : face_weight(a, b, c, d, lambda, spec.params);
}

CScalar sos_enumeration(const SosLatticeSpec& spec) {
  const int C = spec.n_cols, R = spec.n_rows;
  auto H = spec.corner_heights();
  std::vector<std::pair<int, int>> interior;
  for (int j = 1; j < R; ++j)
    for (int i = 1; i < C; ++i) interior.push_back({i, j});

  CScalar total{};
  auto product = [&]() {
    CScalar w{1.0, 0.0};
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < R; ++r) {
        w *= face_weight_for(spec, H.at({c, r}), H.at({c + 1, r}), H.at({c + 1, r + 1}),
                             H.at({c, r + 1}),
                             spec.col_lambdas[static_cast<std::size_t>(c)] -
                                 spec.row_lambdas[static_cast<std::size_t>(r)]);
        if (w == CScalar(0.0, 0.0)) return w;
      }
    return w;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == interior.size()) {
      total += product();
      return;
    }
    const auto [i, j] = interior[k];
    std::set<long> cands;
    for (long v : neighbors(H.at({i - 1, j}), spec.cyclic, spec.n)) cands.insert(v);
    auto keep_adjacent_to = [&](long ref) {
      for (auto it = cands.begin(); it != cands.end();)
        it = adjacent(*it, ref, spec.cyclic, spec.n) ? std::next(it) : cands.erase(it);
    };
    keep_adjacent_to(H.at({i, j - 1}));
    if (i + 1 == C) keep_adjacent_to(H.at({i + 1, j}));
    if (j + 1 == R) keep_adjacent_to(H.at({i, j + 1}));
    for (long v : cands) {
      H[{i, j}] = v;
      rec(k + 1);
    }
    H.erase({i, j});
  };
  rec(0);
  return total;
}

CScalar sos_transfer(const SosLatticeSpec& spec) {
  const int C = spec.n_cols, R = spec.n_rows;
  const auto H = spec.corner_heights();

  auto fixed_row = [&](int j) {
    std::vector<long> row(static_cast<std::size_t>(C + 1));
    for (int i = 0; i <= C; ++i) row[static_cast<std::size_t>(i)] = H.at({i, j});
    return row;
  };

  // All admissible corner rows at level j (west and east ends pinned).
  auto level_states = [&](int j) {
    std::vector<std::vector<long>> out;
    if (j == 0 || j == R) {
      out.push_back(fixed_row(j));
      return out;
    }
    const long west = H.at({0, j});
    const long east = H.at({C, j});
    std::vector<long> row{west};
    std::function<void()> grow = [&]() {
      if (static_cast<int>(row.size()) == C + 1) {
        if (row.back() == east) out.push_back(row);
        return;
      }
      for (long v : neighbors(row.back(), spec.cyclic, spec.n)) {
        row.push_back(v);
        grow();
        row.pop_back();
      }
    };
    grow();
    return out;
  };

  auto row_weight = [&](const std::vector<long>& top, const std::vector<long>& bot, int r) {
    CScalar w{1.0, 0.0};
    for (int c = 0; c < C; ++c) {
      w *= face_weight_for(spec, top[static_cast<std::size_t>(c)],
                           top[static_cast<std::size_t>(c + 1)],
                           bot[static_cast<std::size_t>(c + 1)],
                           bot[static_cast<std::size_t>(c)],
                           spec.col_lambdas[static_cast<std::size_t>(c)] -
                               spec.row_lambdas[static_cast<std::size_t>(r)]);
      if (w == CScalar(0.0, 0.0)) return w;
    }
    return w;
  };

  std::map<std::vector<long>, CScalar> amp{{fixed_row(0), CScalar(1.0, 0.0)}};
  for (int j = 0; j < R; ++j) {
    std::map<std::vector<long>, CScalar> next;
    const auto states = level_states(j + 1);
    for (const auto& [top, a] : amp)
      for (const auto& bot : states) {
        const CScalar w = row_weight(top, bot, j);
        if (w != CScalar(0.0, 0.0)) next[bot] += a * w;
      }
    amp = std::move(next);
  }
  CScalar z{};
  for (const auto& [row, a] : amp) z += a;
  return z;
}

}  // namespace

SosZResult sos_partition_function(const SosLatticeSpec& spec) {
  spec.validate();
  SosZResult out;
  out.by_enumeration = sos_enumeration(spec);
  out.by_transfer = sos_transfer(spec);
  const double diff = std::abs(*out.by_transfer - out.by_enumeration);
  if (diff > spec.params.tol.rel_tol * (1.0 + std::abs(out.by_enumeration)))
    throw InternalInconsistency("sos_partition_function: strategies disagree");
  out.value = out.by_enumeration;
  return out;
}

VertexLatticeSpec dressed_vertex_spec(const VertexLatticeSpec& base,
                                      const std::vector<long>& perimeter,
                                      const ModelParams& params, long anchor_gap) {
  const int C = base.n_cols, R = base.n_rows;
  const auto H = corner_heights_from_perimeter(C, R, perimeter);
  VertexLatticeSpec spec = base;
  spec.top.assign(static_cast<std::size_t>(C), BoundaryTerm::plus());
  spec.bottom.assign(static_cast<std::size_t>(C), BoundaryTerm::plus());
  spec.west.assign(static_cast<std::size_t>(R), BoundaryTerm::plus());
  spec.east.assign(static_cast<std::size_t>(R), BoundaryTerm::plus());
  for (int c = 0; c < C; ++c) {
    const auto v = intertwiner(IntertwinerKind::psi, H.at({c, 0}), H.at({c + 1, 0}),
                               base.col_lambdas[static_cast<std::size_t>(c)], params);
    spec.top[static_cast<std::size_t>(c)] = BoundaryTerm::vec(v[0], v[1]);
    const auto kind = (anchor_gap >= 0 && c >= anchor_gap) ? IntertwinerKind::psi_prime
                                                           : IntertwinerKind::psi_star;
    const auto w = intertwiner(kind, H.at({c, R}), H.at({c + 1, R}),
                               base.col_lambdas[static_cast<std::size_t>(c)], params);
    spec.bottom[static_cast<std::size_t>(c)] = BoundaryTerm::vec(w[0], w[1]);
  }
  for (int r = 0; r < R; ++r) {
    const auto v = intertwiner(IntertwinerKind::psi, H.at({C, r}), H.at({C, r + 1}),
                               base.row_lambdas[static_cast<std::size_t>(r)], params);
    spec.east[static_cast<std::size_t>(r)] = BoundaryTerm::vec(v[0], v[1]);
    const auto w = intertwiner(IntertwinerKind::psi_star, H.at({0, r}), H.at({0, r + 1}),
                               base.row_lambdas[static_cast<std::size_t>(r)], params);
    spec.west[static_cast<std::size_t>(r)] = BoundaryTerm::vec(w[0], w[1]);
  }
  return spec;
}

CheckResult check_partition_correspondence(const VertexLatticeSpec& vspec,
                                           const std::vector<long>& perimeter,
                                           const ModelParams& params) {
  if (vspec.n_cols > 3 || vspec.n_rows > 3)
    throw SizeError("partition correspondence limited to 3x3 lattices");
  const VertexLatticeSpec dressed = dressed_vertex_spec(vspec, perimeter, params);
  const CScalar z6 = partition_function(dressed, params).by_transfer;

  SosLatticeSpec sos;
  sos.n_cols = vspec.n_cols;
  sos.n_rows = vspec.n_rows;
  sos.col_lambdas = vspec.col_lambdas;
  sos.row_lambdas = vspec.row_lambdas;
  sos.perimeter = perimeter;
  sos.params = params;
  const CScalar zs = sos_partition_function(sos).value;
  return make_check("partition-correspondence", residual(zs, z6), params.tol.rel_tol);
}

namespace {

json cscalar_to_json(const CScalar& z) { return json::array({z.real(), z.imag()}); }

CScalar cscalar_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ArgError("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string sos_spec_to_json(const SosLatticeSpec& spec) {
  json j;
  j["dimensions"] = {spec.n_cols, spec.n_rows};
  j["col_lambdas"] = json::array();
  for (const auto& l : spec.col_lambdas) j["col_lambdas"].push_back(cscalar_to_json(l));
  j["row_lambdas"] = json::array();
  for (const auto& l : spec.row_lambdas) j["row_lambdas"].push_back(cscalar_to_json(l));
  j["perimeter"] = spec.perimeter;
  if (spec.cyclic)
    j["cyclic"] = {{"n", spec.n}};
  else
    j["cyclic"] = nullptr;
  return j.dump(2);
}

SosLatticeSpec sos_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgError(std::string("sos spec JSON parse error: ") + e.what());
  }
  SosLatticeSpec spec;
  try {
    spec.n_cols = j.at("dimensions").at(0).get<int>();
    spec.n_rows = j.at("dimensions").at(1).get<int>();
    for (const auto& l : j.at("col_lambdas")) spec.col_lambdas.push_back(cscalar_from_json(l));
    for (const auto& l : j.at("row_lambdas")) spec.row_lambdas.push_back(cscalar_from_json(l));
    spec.perimeter = j.at("perimeter").get<std::vector<long>>();
    if (j.contains("cyclic") && !j.at("cyclic").is_null()) {
      spec.cyclic = true;
      spec.n = j.at("cyclic").at("n").get<long>();
    }
  } catch (const json::exception& e) {
    throw ArgError(std::string("sos spec JSON structure error: ") + e.what());
  }
  return spec;
}

}  // namespace vertexlab
