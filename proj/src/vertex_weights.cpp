#include "vertexlab/vertex_weights.hpp"

#include <algorithm>
#include <cmath>

namespace vertexlab {

namespace {

using std::exp;
using std::sinh;

bool is_e_type(GenKind k) { return k == GenKind::e || k == GenKind::e_bar; }
bool is_f_type(GenKind k) { return k == GenKind::f || k == GenKind::f_bar; }
bool is_t_type(GenKind k) { return k == GenKind::t || k == GenKind::t_inv; }

}  // namespace

std::string to_string(GeneratorId id) {
  std::string base;
  switch (id.kind) {
    case GenKind::e: base = "e"; break;
    case GenKind::f: base = "f"; break;
    case GenKind::t: base = "t"; break;
    case GenKind::t_inv: base = "t_inv"; break;
    case GenKind::f_bar: base = "f_bar"; break;
    case GenKind::e_bar: base = "e_bar"; break;
  }
  return base + std::to_string(id.index);
}

SiteOperator SiteOperator::operator*(const SiteOperator& rhs) const {
  SiteOperator out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += (*this)(i, k) * rhs(k, j);
  return out;
}

SiteOperator SiteOperator::operator*(CScalar s) const {
  SiteOperator out = *this;
  for (auto& v : out.m) v *= s;
  return out;
}

SiteOperator SiteOperator::operator+(const SiteOperator& rhs) const {
  SiteOperator out = *this;
  for (std::size_t i = 0; i < 4; ++i) out.m[i] += rhs.m[i];
  return out;
}

SiteOperator SiteOperator::operator-(const SiteOperator& rhs) const {
  SiteOperator out = *this;
  for (std::size_t i = 0; i < 4; ++i) out.m[i] -= rhs.m[i];
  return out;
}

double SiteOperator::max_abs() const {
  double m0 = 0.0;
  for (const auto& v : m) m0 = std::max(m0, std::abs(v));
  return m0;
}

SiteOperator SiteOperator::identity() {
  SiteOperator out;
  out(0, 0) = 1.0;
  out(1, 1) = 1.0;
  return out;
}

ComplexTensor r_matrix(CScalar lambda, const ModelParams& p) {
  ComplexTensor r({2, 2, 2, 2});
  const CScalar a = sinh(lambda + p.eta);
  const CScalar b = sinh(lambda);
  const CScalar c = sinh(p.eta);
  r.at({0, 0, 0, 0}) = a;
  r.at({1, 1, 1, 1}) = a;
  r.at({0, 1, 0, 1}) = b;
  r.at({1, 0, 1, 0}) = b;
  r.at({0, 1, 1, 0}) = c;
  r.at({1, 0, 0, 1}) = c;
  return r;
}

SiteOperator generator_on_v(GeneratorId id, CScalar lambda, const ModelParams& p) {
  const CScalar eta = p.eta;
  SiteOperator op;
  switch (id.kind) {
    case GenKind::e:
      if (id.index == 1) {
        op(0, 1) = exp(lambda);
      } else {
        op(1, 0) = exp(lambda);
      }
      return op;
    case GenKind::f:
      if (id.index == 1) {
        op(1, 0) = exp(-lambda);
      } else {
        op(0, 1) = exp(-lambda);
      }
      return op;
    case GenKind::f_bar:
      if (id.index == 1) {
        op(0, 1) = exp(lambda + eta);
      } else {
        op(1, 0) = exp(lambda + eta);
      }
      return op;
    case GenKind::e_bar:
      return generator_on_v({GenKind::f, id.index}, lambda, p) *
             generator_on_v({GenKind::t, id.index}, lambda, p);
    case GenKind::t:
      if (id.index == 1) {
        op(0, 0) = exp(eta);
        op(1, 1) = exp(-eta);
      } else {
        op(0, 0) = exp(-eta);
        op(1, 1) = exp(eta);
      }
      return op;
    case GenKind::t_inv:
      if (id.index == 1) {
        op(0, 0) = exp(-eta);
        op(1, 1) = exp(eta);
      } else {
        op(0, 0) = exp(eta);
        op(1, 1) = exp(-eta);
      }
      return op;
  }
  return op;
}

ComplexTensor site_to_matrix(const SiteOperator& op) {
  ComplexTensor m({2, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.at({static_cast<std::size_t>(i), static_cast<std::size_t>(j)}) = op(i, j);
  return m;
}

ComplexTensor kron(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[0] != a.shape()[1] ||
      b.shape()[0] != b.shape()[1]) {
    throw ShapeError("kron expects square matrices");
  }
  const std::size_t m = a.shape()[0], n = b.shape()[0];
  ComplexTensor out({m * n, m * n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const CScalar aij = a.at({i, j});
      if (aij == CScalar(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out.at({i * n + k, j * n + l}) = aij * b.at({k, l});
    }
  return out;
}

ComplexTensor coproduct_action(GeneratorId id, const std::vector<CScalar>& lambdas,
                               const ModelParams& p) {
  const std::size_t n = lambdas.size();
  if (n == 0) throw SizeError("coproduct over zero sites");
  if (n > 12) throw SizeError("coproduct limited to 12 sites");
  const std::size_t dim = std::size_t{1} << n;
  ComplexTensor out({dim, dim});

  if (is_t_type(id.kind)) {
    // Diagonal tensor power.
    const SiteOperator site = generator_on_v(id, CScalar(0.0), p);
    for (std::size_t s = 0; s < dim; ++s) {
      CScalar v(1.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const int bit = static_cast<int>((s >> (n - 1 - j)) & 1u);
        v *= site(bit, bit);
      }
      out.at({s, s}) = v;
    }
    return out;
  }

  const bool etype = is_e_type(id.kind);
  const SiteOperator tail =
      etype ? generator_on_v({GenKind::t, id.index}, CScalar(0.0), p)
            : generator_on_v({GenKind::t_inv, id.index}, CScalar(0.0), p);

  // Each term is diagonal away from the active site; walk the 2^(n-1)
  // diagonal patterns instead of materializing Kronecker factors.
  for (std::size_t j = 0; j < n; ++j) {
    const SiteOperator x = generator_on_v(id, lambdas[j], p);
    for (int oj = 0; oj < 2; ++oj)
      for (int ij = 0; ij < 2; ++ij) {
        const CScalar xval = x(oj, ij);
        if (xval == CScalar(0.0, 0.0)) continue;
        const std::size_t patterns = std::size_t{1} << (n - 1);
        for (std::size_t pat = 0; pat < patterns; ++pat) {
          CScalar v = xval;
          std::size_t row = 0, col = 0;
          std::size_t bitpos = 0;
          for (std::size_t s = 0; s < n; ++s) {
            int bit;
            if (s == j) {
              row = (row << 1) | static_cast<std::size_t>(oj);
              col = (col << 1) | static_cast<std::size_t>(ij);
              continue;
            }
            bit = static_cast<int>((pat >> (n - 2 - bitpos)) & 1u);
            ++bitpos;
            row = (row << 1) | static_cast<std::size_t>(bit);
            col = (col << 1) | static_cast<std::size_t>(bit);
            if (etype) {
              // Sites before the active one carry t, later ones identity.
              if (s < j) v *= tail(bit, bit);
            } else {
              if (s > j) v *= tail(bit, bit);
            }
          }
          out.at({row, col}) += v;
        }
      }
  }
  return out;
}

ComplexTensor coproduct_action_iterative(GeneratorId id, const std::vector<CScalar>& lambdas,
                                         const ModelParams& p) {
  const std::size_t n = lambdas.size();
  if (n == 0) throw SizeError("coproduct over zero sites");
  if (n > 12) throw SizeError("coproduct limited to 12 sites");

  const ComplexTensor eye2 = site_to_matrix(SiteOperator::identity());
  const ComplexTensor tmat = site_to_matrix(generator_on_v({GenKind::t, id.index}, CScalar(0.0), p));
  const ComplexTensor tinv =
      site_to_matrix(generator_on_v({GenKind::t_inv, id.index}, CScalar(0.0), p));

  if (is_t_type(id.kind)) {
    ComplexTensor acc = site_to_matrix(generator_on_v(id, lambdas[0], p));
    const ComplexTensor step = id.kind == GenKind::t ? tmat : tinv;
    for (std::size_t k = 1; k < n; ++k) acc = kron(acc, step);
    return acc;
  }

  const bool etype = is_e_type(id.kind);
  ComplexTensor acc = site_to_matrix(generator_on_v(id, lambdas[0], p));
  ComplexTensor tpow = tmat;  // running t tensor power over the sites built so far
  ComplexTensor eyepow = eye2;

  for (std::size_t k = 1; k < n; ++k) {
    const ComplexTensor xk = site_to_matrix(generator_on_v(id, lambdas[k], p));
    ComplexTensor next;
    if (etype) {
      // X_{k+1} = X_k (x) 1 + t^(k) (x) x
      ComplexTensor t1 = kron(acc, eye2);
      ComplexTensor t2 = kron(tpow, xk);
      next = ComplexTensor(t1.shape());
      for (std::size_t i = 0; i < t1.size(); ++i) next[i] = t1[i] + t2[i];
    } else {
      // X_{k+1} = X_k (x) t^-1 + 1^(k) (x) x
      ComplexTensor t1 = kron(acc, tinv);
      ComplexTensor t2 = kron(eyepow, xk);
      next = ComplexTensor(t1.shape());
      for (std::size_t i = 0; i < t1.size(); ++i) next[i] = t1[i] + t2[i];
    }
    acc = std::move(next);
    if (k + 1 < n) {
      tpow = kron(tpow, tmat);
      eyepow = kron(eyepow, eye2);
    }
  }
  return acc;
}

CheckResult make_check(const std::string& name, double res, double tol) {
  return CheckResult{name, res, tol, res <= tol};
}

namespace {

// R embedded on a pair of sites of a 3-site chain, as an 8x8 matrix.
ComplexTensor embed_r3(const ComplexTensor& r, int site_a, int site_b) {
  ComplexTensor m({8, 8});
  for (std::size_t row = 0; row < 8; ++row)
    for (std::size_t col = 0; col < 8; ++col) {
      int ro[3] = {static_cast<int>((row >> 2) & 1), static_cast<int>((row >> 1) & 1),
                   static_cast<int>(row & 1)};
      int ci[3] = {static_cast<int>((col >> 2) & 1), static_cast<int>((col >> 1) & 1),
                   static_cast<int>(col & 1)};
      bool spectator_ok = true;
      for (int s = 0; s < 3; ++s) {
        if (s != site_a && s != site_b && ro[s] != ci[s]) spectator_ok = false;
      }
      if (!spectator_ok) continue;
      m.at({row, col}) =
          r.at({static_cast<std::size_t>(ro[site_a]), static_cast<std::size_t>(ro[site_b]),
                static_cast<std::size_t>(ci[site_a]), static_cast<std::size_t>(ci[site_b])});
    }
  return m;
}

ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b) {
  return contract(a, b, {1}, {0});
}

// Two-site action and its flipped partner for the intertwining check.
ComplexTensor two_site_action(GeneratorId id, CScalar l1, CScalar l2, const ModelParams& p,
                              bool flipped) {
  const ComplexTensor eye2 = site_to_matrix(SiteOperator::identity());
  const ComplexTensor tmat = site_to_matrix(generator_on_v({GenKind::t, id.index}, CScalar(0.0), p));
  const ComplexTensor tinv =
      site_to_matrix(generator_on_v({GenKind::t_inv, id.index}, CScalar(0.0), p));
  const ComplexTensor x1 = site_to_matrix(generator_on_v(id, l1, p));
  const ComplexTensor x2 = site_to_matrix(generator_on_v(id, l2, p));

  auto add = [](const ComplexTensor& a, const ComplexTensor& b) {
    ComplexTensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
  };

  if (is_t_type(id.kind)) {
    const ComplexTensor& step = id.kind == GenKind::t ? tmat : tinv;
    return kron(step, step);
  }
  if (is_e_type(id.kind)) {
    return flipped ? add(kron(x1, tmat), kron(eye2, x2))
                   : add(kron(x1, eye2), kron(tmat, x2));
  }
  return flipped ? add(kron(tinv, x2), kron(x1, eye2))
                 : add(kron(x1, tinv), kron(eye2, x2));
}

}  // namespace

CheckResult check_ybe(CScalar l1, CScalar l2, CScalar l3, const ModelParams& p) {
  const ComplexTensor r12 = embed_r3(r_matrix(l1 - l2, p), 0, 1);
  const ComplexTensor r13 = embed_r3(r_matrix(l1 - l3, p), 0, 2);
  const ComplexTensor r23 = embed_r3(r_matrix(l2 - l3, p), 1, 2);
  const ComplexTensor lhs = matmul(matmul(r12, r13), r23);
  const ComplexTensor rhs = matmul(matmul(r23, r13), r12);
  return make_check("ybe", residual(lhs, rhs), p.tol.abs_tol);
}

CheckResult check_unitarity(CScalar lambda, const ModelParams& p) {
  const ComplexTensor rp = r_matrix(lambda, p).reshaped({4, 4});
  const ComplexTensor rm = r_matrix(-lambda, p).reshaped({4, 4});
  const ComplexTensor prod = matmul(rp, rm);
  const CScalar scale = sinh(p.eta + lambda) * sinh(p.eta - lambda);
  ComplexTensor expected({4, 4});
  for (std::size_t i = 0; i < 4; ++i) expected.at({i, i}) = scale;
  return make_check("unitarity", residual(prod, expected), p.tol.abs_tol);
}

CheckResult check_crossing(CScalar lambda, const ModelParams& p) {
  const ComplexTensor r = r_matrix(lambda, p);
  const ComplexTensor rc = r_matrix(-lambda - p.eta, p);
  double worst = 0.0;
  for (std::size_t i1p = 0; i1p < 2; ++i1p)
    for (std::size_t i2p = 0; i2p < 2; ++i2p)
      for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2) {
          const int e1 = 1 - 2 * static_cast<int>(i1);
          const int e1p = 1 - 2 * static_cast<int>(i1p);
          const double sign = ((e1 + e1p) / 2 == 0) ? 1.0 : -1.0;
          const CScalar lhs = r.at({i1p, i2p, i1, i2});
          const CScalar rhs = sign * rc.at({i2, 1 - i1p, i2p, 1 - i1});
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return make_check("crossing", worst / (1.0 + max_abs(r)), p.tol.abs_tol);
}

CheckResult check_vertex_intertwining(CScalar l1, CScalar l2, const ModelParams& p) {
  const ComplexTensor r = r_matrix(l1 - l2, p).reshaped({4, 4});
  double worst = 0.0;
  for (GenKind kind :
       {GenKind::e, GenKind::f, GenKind::t, GenKind::t_inv, GenKind::f_bar, GenKind::e_bar}) {
    for (int index = 0; index < 2; ++index) {
      const GeneratorId id{kind, index};
      const ComplexTensor d = two_site_action(id, l1, l2, p, false);
      const ComplexTensor dop = two_site_action(id, l1, l2, p, true);
      worst = std::max(worst, residual(matmul(r, d), matmul(dop, r)));
    }
  }
  return make_check("vertex_intertwining", worst, p.tol.abs_tol);
}

CheckResult check_winding_relation(CScalar lambda, const ModelParams& p) {
  double worst = 0.0;
  for (int index = 0; index < 2; ++index) {
    const SiteOperator t = generator_on_v({GenKind::t, index}, lambda, p);
    const SiteOperator tinv = generator_on_v({GenKind::t_inv, index}, lambda, p);
    const SiteOperator f = generator_on_v({GenKind::f, index}, lambda, p);
    const SiteOperator fbar = generator_on_v({GenKind::f_bar, index}, lambda, p);

    const SiteOperator lhs_f = t * f * tinv;
    const SiteOperator rhs_f = f * exp(-2.0 * p.eta);
    worst = std::max(worst, (lhs_f - rhs_f).max_abs() / (1.0 + rhs_f.max_abs()));

    const SiteOperator lhs_fb = t * fbar * tinv;
    const SiteOperator rhs_fb = fbar * exp(2.0 * p.eta);
    worst = std::max(worst, (lhs_fb - rhs_fb).max_abs() / (1.0 + rhs_fb.max_abs()));
  }
  return make_check("winding_relation", worst, p.tol.abs_tol);
}

CheckResult check_antipode_consistency(CScalar lambda, const ModelParams& p) {
  double worst = 0.0;
  for (int index = 0; index < 2; ++index) {
    const SiteOperator f = generator_on_v({GenKind::f, index}, lambda, p);
    const SiteOperator t = generator_on_v({GenKind::t, index}, lambda, p);
    const SiteOperator tinv = generator_on_v({GenKind::t_inv, index}, lambda, p);
    const SiteOperator e = generator_on_v({GenKind::e, index}, lambda, p);
    const SiteOperator ebar = generator_on_v({GenKind::e_bar, index}, lambda, p);
    const SiteOperator fbar = generator_on_v({GenKind::f_bar, index}, lambda, p);

    // Definition e_bar = f t.
    worst = std::max(worst, (ebar - f * t).max_abs() / (1.0 + ebar.max_abs()));

    // Counit contractions m (S x id) Delta(x) = eps(x) 1, with
    // S(e) = -t^-1 e, S(f) = -f t, S(t) = t^-1 and barred partners alike.
    const SiteOperator s_e = (tinv * e) * CScalar(-1.0);
    const SiteOperator s_f = (f * t) * CScalar(-1.0);
    const SiteOperator s_fb = (fbar * t) * CScalar(-1.0);
    const SiteOperator s_eb = (tinv * ebar) * CScalar(-1.0);

    worst = std::max(worst, (s_e + tinv * e).max_abs());     // S(e)1 + S(t)e
    worst = std::max(worst, (s_f * tinv + f).max_abs());     // S(f)t^-1 + S(1)f
    worst = std::max(worst, (s_fb * tinv + fbar).max_abs());
    worst = std::max(worst, (s_eb + tinv * ebar).max_abs());
    worst = std::max(worst, (tinv * t - SiteOperator::identity()).max_abs());
  }
  return make_check("antipode_consistency", worst, p.tol.abs_tol);
}

CheckResult check_defining_relations(CScalar lambda, const ModelParams& p) {
  const CScalar q = exp(p.eta);
  const CScalar denom = q - CScalar(1.0) / q;
  double worst = 0.0;

  SiteOperator e[2], f[2], t[2], tinv[2];
  for (int i = 0; i < 2; ++i) {
    e[i] = generator_on_v({GenKind::e, i}, lambda, p);
    f[i] = generator_on_v({GenKind::f, i}, lambda, p);
    t[i] = generator_on_v({GenKind::t, i}, lambda, p);
    tinv[i] = generator_on_v({GenKind::t_inv, i}, lambda, p);
  }

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const SiteOperator comm = e[i] * f[j] - f[j] * e[i];
      SiteOperator expect;
      if (i == j) {
        expect = (t[i] - tinv[i]) * (CScalar(1.0) / denom);
      }
      worst = std::max(worst, (comm - expect).max_abs() / (1.0 + expect.max_abs()));
    }

  // Diagonal conjugation: t_i e_j t_i^-1 = exp(+-2 eta) e_j.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const CScalar factor = (i == j) ? exp(2.0 * p.eta) : exp(-2.0 * p.eta);
      const SiteOperator lhs = t[i] * e[j] * tinv[i];
      const SiteOperator rhs = e[j] * factor;
      worst = std::max(worst, (lhs - rhs).max_abs() / (1.0 + rhs.max_abs()));
    }

  // t0 t1 acts as the identity in this representation.
  worst = std::max(worst, (t[0] * t[1] - SiteOperator::identity()).max_abs());

  return make_check("defining_relations", worst, p.tol.abs_tol);
}

}  // namespace vertexlab
