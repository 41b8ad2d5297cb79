#include "vertexlab/csos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "vertexlab/embedding.hpp"
#include "vertexlab/errors.hpp"

namespace vertexlab {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

long mod_n(long x, long n) {
  const long r = x % n;
  return r < 0 ? r + n : r;
}

// +1 / -1 when `to` is one step above / below `from` mod n, else 0.
int step_of(long from, long to, long n) {
  const long d = mod_n(to - from, n);
  if (d == 1) return 1;
  if (d == n - 1) return -1;
  return 0;
}

std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string pair_tag(const CsosParams& csos) {
  return "p=" + std::to_string(csos.p) + ",p'=" + std::to_string(csos.pprime);
}

// Column-sparse product helpers for the loop-algebra checks. Columns are
// maps row -> value so repeated paths accumulate.
using SparseCols = std::vector<std::map<std::size_t, CScalar>>;

SparseCols to_sparse(const TLGenerator& g) {
  SparseCols out(g.dim);
  for (std::size_t w = 0; w < g.dim; ++w)
    for (const auto& [row, val] : g.cols[w]) out[w][row] += val;
  return out;
}

// Columns of A applied after B: (A B)[col] = A . B[col].
SparseCols mul(const TLGenerator& a, const SparseCols& b) {
  SparseCols out(b.size());
  for (std::size_t col = 0; col < b.size(); ++col)
    for (const auto& [mid, vb] : b[col])
      for (const auto& [row, va] : a.cols[mid]) out[col][row] += va * vb;
  return out;
}

double max_entry(const SparseCols& m) {
  double best = 0.0;
  for (const auto& col : m)
    for (const auto& [row, val] : col) best = std::max(best, std::abs(val));
  return best;
}

double max_diff(const SparseCols& a, const SparseCols& b, CScalar b_factor = CScalar(1.0)) {
  double dev = 0.0;
  for (std::size_t col = 0; col < a.size(); ++col) {
    std::map<std::size_t, CScalar> merged = a[col];
    for (const auto& [row, val] : b[col]) merged[row] -= b_factor * val;
    for (const auto& [row, val] : merged) dev = std::max(dev, std::abs(val));
  }
  return dev;
}

}  // namespace

std::pair<long, long> derive_ln(long p, long pprime) {
  if (p < 2 || pprime < 1 || pprime >= p)
    throw ArgError("cyclic pair needs 1 <= p' < p with p >= 2");
  if (std::gcd(p, pprime) != 1) throw ArgError("cyclic pair must be coprime");
  const long diff = p - pprime;
  long ell = 0;
  long n = 0;
  if (diff % 2 == 0) {
    ell = diff / 2;
    n = p;
  } else {
    ell = diff;
    n = 2 * p;
  }
  if (2 * ell * p != n * diff)
    throw InternalInconsistency("cyclic derivation broke 2*ell*p == n*(p-p')");
  if (std::gcd(ell, n) != 1)
    throw InternalInconsistency("cyclic derivation produced non-coprime (ell, n)");
  return {ell, n};
}

CsosParams make_csos(long p, long pprime) {
  const auto [ell, n] = derive_ln(p, pprime);
  CsosParams csos;
  csos.p = p;
  csos.pprime = pprime;
  csos.ell = ell;
  csos.n = n;
  return csos;
}

CScalar CsosParams::eta() const {
  return CScalar(0.0, kPi * double(p - pprime) / double(p));
}

ModelParams CsosParams::model_params(CScalar x0) const {
  ModelParams params;
  params.eta = eta();
  params.x0 = x0;
  return params;
}

CheckResult check_cyclic_periodicity(const CsosParams& csos, CScalar x0, CScalar lambda) {
  const ModelParams params = csos.model_params(x0);
  const long n = csos.n;
  double dev = 0.0;
  double scale = 0.0;

  // Face weights repeat exactly when all four corners shift by n.
  for (long a = 0; a < n; ++a) {
    for (const int e1 : {1, -1}) {
      for (const int e2 : {1, -1}) {
        const long b = a + e1;
        const long d = a + e2;
        std::vector<long> cs = {a + e1 + e2};
        if (e1 + e2 != 0) cs.push_back(a);
        for (const long c : cs) {
          const CScalar w0 = face_weight(a, b, c, d, lambda, params);
          const CScalar w1 = face_weight(a + n, b + n, c + n, d + n, lambda, params);
          dev = std::max(dev, std::abs(w1 - w0));
          scale = std::max(scale, std::abs(w0));
        }
      }
    }
  }

  // Intertwiner components pick up (-1)^ell under the same shift.
  const double sign = (csos.ell % 2 == 0) ? 1.0 : -1.0;
  for (const IntertwinerKind kind :
       {IntertwinerKind::psi, IntertwinerKind::psi_star, IntertwinerKind::psi_prime}) {
    for (long a = 0; a < n; ++a) {
      for (const int e1 : {1, -1}) {
        const auto v0 = intertwiner(kind, a, a + e1, lambda, params);
        const auto v1 = intertwiner(kind, a + n, a + e1 + n, lambda, params);
        for (int comp = 0; comp < 2; ++comp) {
          dev = std::max(dev, std::abs(v1[comp] - sign * v0[comp]));
          scale = std::max(scale, std::abs(v0[comp]));
        }
      }
    }
  }

  return make_check("cyclic periodicity " + pair_tag(csos), dev / (1.0 + scale), 1e-12);
}

std::vector<long> decode_walk(std::size_t index, int length, long n) {
  if (length < 0 || length > 8) throw ArgError("walk length must lie in [0, 8]");
  const std::size_t nbits = std::size_t(1) << length;
  const std::size_t bits = index & (nbits - 1);
  long h = long(index >> length);
  if (h < 0 || h >= n) throw ArgError("walk index out of range");
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(length) + 1);
  out.push_back(h);
  for (int k = 0; k < length; ++k) {
    h = mod_n(h + (((bits >> k) & 1u) ? 1 : -1), n);
    out.push_back(h);
  }
  return out;
}

TLGenerator tl_generator(const CsosParams& csos, int length, int site, CScalar x0) {
  if (length < 2 || length > 8) throw ArgError("loop generator needs 2 <= length <= 8");
  if (site < 1 || site > length - 1)
    throw ArgError("loop generator site must satisfy 1 <= site <= length-1");
  const long n = csos.n;
  const CScalar eta = csos.eta();
  const double guard = ToleranceConfig{}.singularity_guard;

  std::vector<CScalar> height_sinh(static_cast<std::size_t>(n));
  for (long a = 0; a < n; ++a) {
    height_sinh[static_cast<std::size_t>(a)] = std::sinh((x0 + CScalar(double(a))) * eta);
    if (std::abs(height_sinh[static_cast<std::size_t>(a)]) <= guard)
      throw SingularHeight("loop generator: sinh((x0+" + std::to_string(a) +
                           ")eta) is below the singularity guard");
  }

  TLGenerator g;
  g.length = length;
  g.site = site;
  g.n = n;
  const std::size_t nbits = std::size_t(1) << length;
  g.dim = static_cast<std::size_t>(n) * nbits;
  g.cols.assign(g.dim, {});

  for (std::size_t w = 0; w < g.dim; ++w) {
    const std::size_t bits = w & (nbits - 1);
    const int s_in = ((bits >> (site - 1)) & 1u) ? 1 : -1;
    const int s_after = ((bits >> site) & 1u) ? 1 : -1;
    if (s_in + s_after != 0) continue;  // the two neighbours of a_site differ

    long a = long(w >> length);  // height at position site-1
    for (int k = 0; k < site - 1; ++k) a = mod_n(a + (((bits >> k) & 1u) ? 1 : -1), n);

    const CScalar den = height_sinh[static_cast<std::size_t>(a)];
    const CScalar num = height_sinh[static_cast<std::size_t>(mod_n(a + s_in, n))];
    for (const int s_out : {1, -1}) {
      std::size_t ob = bits;
      if (s_out == 1) {
        ob |= (std::size_t(1) << (site - 1));
        ob &= ~(std::size_t(1) << site);
      } else {
        ob &= ~(std::size_t(1) << (site - 1));
        ob |= (std::size_t(1) << site);
      }
      const std::size_t wout = (w & ~(nbits - 1)) | ob;
      const CScalar val = -double(s_in * s_out) * num / den;
      g.cols[w].push_back({wout, val});
    }
  }
  return g;
}

std::vector<CScalar> TLGenerator::apply(const std::vector<CScalar>& v) const {
  if (v.size() != dim) throw ShapeError("loop generator applied to a wrong-size vector");
  std::vector<CScalar> out(dim, CScalar{});
  for (std::size_t w = 0; w < dim; ++w) {
    if (v[w] == CScalar{}) continue;
    for (const auto& [row, val] : cols[w]) out[row] += val * v[w];
  }
  return out;
}

CheckResult check_tl_square(const CsosParams& csos, int length, int site, CScalar x0) {
  const TLGenerator e = tl_generator(csos, length, site, x0);
  const SparseCols es = to_sparse(e);
  const SparseCols e2 = mul(e, es);
  const CScalar loop = -2.0 * std::cosh(csos.eta());
  const double dev = max_diff(e2, es, loop);
  const double scale = std::max(max_entry(e2), max_entry(es));
  return make_check("loop square " + pair_tag(csos) + " L=" + std::to_string(length) +
                        " j=" + std::to_string(site),
                    dev / (1.0 + scale), 1e-10);
}

CheckResult check_tl_braid(const CsosParams& csos, int length, int site_j, int site_k,
                           CScalar x0) {
  if (std::abs(site_j - site_k) != 1)
    throw ArgError("braid relation needs adjacent sites");
  const TLGenerator ej = tl_generator(csos, length, site_j, x0);
  const TLGenerator ek = tl_generator(csos, length, site_k, x0);
  const SparseCols ejs = to_sparse(ej);
  const SparseCols triple = mul(ej, mul(ek, ejs));
  const double dev = max_diff(triple, ejs);
  const double scale = std::max(max_entry(triple), max_entry(ejs));
  return make_check("loop braid " + pair_tag(csos) + " L=" + std::to_string(length) + " (" +
                        std::to_string(site_j) + "," + std::to_string(site_k) + ")",
                    dev / (1.0 + scale), 1e-10);
}

CheckResult check_tl_commute(const CsosParams& csos, int length, int site_j, int site_k,
                             CScalar x0) {
  if (std::abs(site_j - site_k) < 2)
    throw ArgError("commutation check needs sites at distance >= 2");
  const TLGenerator ej = tl_generator(csos, length, site_j, x0);
  const TLGenerator ek = tl_generator(csos, length, site_k, x0);
  const SparseCols jk = mul(ej, to_sparse(ek));
  const SparseCols kj = mul(ek, to_sparse(ej));
  const double dev = max_diff(jk, kj);
  const double scale = std::max(max_entry(jk), max_entry(kj));
  return make_check("loop commute " + pair_tag(csos) + " L=" + std::to_string(length) + " (" +
                        std::to_string(site_j) + "," + std::to_string(site_k) + ")",
                    dev / (1.0 + scale), 1e-10);
}

double check_w_tl_decomposition(const CsosParams& csos, long a, long b, long c, long d,
                                CScalar lambda, CScalar x0) {
  const ModelParams params = csos.model_params(x0);
  const long n = csos.n;
  const CScalar w = face_weight_cyclic(a, b, c, d, lambda, params, n);

  const int e1 = step_of(a, b, n);
  const int e2 = step_of(a, d, n);
  const bool admissible = e1 != 0 && e2 != 0 && step_of(b, c, n) != 0 && step_of(c, d, n) != 0;
  CScalar rhs{};
  if (admissible) {
    if (mod_n(b - d, n) == 0) rhs += std::sinh(lambda + csos.eta());
    if (mod_n(c - a, n) == 0) {
      const long ar = mod_n(a, n);
      const CScalar den = std::sinh((x0 + CScalar(double(ar))) * csos.eta());
      if (std::abs(den) <= params.tol.singularity_guard)
        throw SingularHeight("loop entry hit a sinh zero in the denominator");
      rhs += std::sinh(lambda) * (-double(e1 * e2)) *
             std::sinh((x0 + CScalar(double(ar + e1))) * csos.eta()) / den;
    }
  }
  return residual(w, rhs);
}

EigSystem adjacency_eigensystem(long n) {
  if (n < 3) throw ArgError("adjacency eigensystem needs n >= 3");
  EigSystem sys;
  sys.n = n;
  const auto push = [&](char family, long j) {
    EigVector v;
    v.family = family;
    v.j = j;
    v.eigenvalue = 2.0 * std::cos(2.0 * kPi * double(j) / double(n));
    const double norm =
        (j == 0 || 2 * j == n) ? std::sqrt(1.0 / double(n)) : std::sqrt(2.0 / double(n));
    v.components.resize(static_cast<std::size_t>(n));
    for (long a = 0; a < n; ++a) {
      const double arg = 2.0 * kPi * double(a) * double(j) / double(n);
      v.components[static_cast<std::size_t>(a)] =
          norm * (family == 'S' ? std::sin(arg) : std::cos(arg));
    }
    sys.vectors.push_back(std::move(v));
  };
  push('T', 0);
  for (long j = 1; 2 * j < n; ++j) {
    push('S', j);
    push('T', j);
  }
  if (n % 2 == 0) push('T', n / 2);
  return sys;
}

std::pair<Rational, Rational> conformal_dimensions(const CsosParams& csos, const Rational& e,
                                                   long m) {
  const long long p = csos.p;
  const long long pp = csos.pprime;
  const Rational ep = e * p;
  const Rational mp = Rational(static_cast<long long>(m) * pp);
  const Rational gap2((p - pp) * (p - pp));
  const Rational denom(4 * p * pp);
  const Rational h = ((ep - mp) * (ep - mp) - gap2) / denom;
  const Rational hbar = ((ep + mp) * (ep + mp) - gap2) / denom;
  return {h, hbar};
}

Rational central_charge(const CsosParams& csos) {
  const long long d = csos.p - csos.pprime;
  return Rational(1) - Rational(6 * d * d, static_cast<long long>(csos.p) * csos.pprime);
}

Rational effective_central_charge(const CsosParams& csos) {
  const auto [h0, hbar0] = conformal_dimensions(csos, Rational(0), 0);
  return central_charge(csos) - Rational(12) * (h0 + hbar0);
}

CheckResult check_spin_identification(const CsosParams& csos) {
  const ModelParams params = csos.model_params(CScalar(0.37, 0.11));
  const Parafermion phi1 = make_parafermion(ParafermionKind::sos_phi, 1, params);
  const Parafermion phi0 = make_parafermion(ParafermionKind::sos_phi, 0, params);
  const auto dims = conformal_dimensions(csos, Rational(1), 3);
  const double h13 = boost::rational_cast<double>(dims.first);
  double dev = std::abs(phi1.spin - CScalar(h13));
  dev = std::max(dev, std::abs(phi0.spin - CScalar(1.0)));
  return make_check("height current spin vs dimension table " + pair_tag(csos), dev, 1e-14);
}

std::vector<SpectrumEntry> spectrum_table(const CsosParams& csos, long e_bound, long m_bound) {
  if (e_bound < 0 || m_bound < 0) throw ArgError("spectrum bounds must be non-negative");
  std::vector<SpectrumEntry> rows;
  rows.reserve(static_cast<std::size_t>((2 * e_bound + 1) * (2 * m_bound + 1)));
  for (long e = -e_bound; e <= e_bound; ++e) {
    for (long u = -m_bound; u <= m_bound; ++u) {
      const long m = u * csos.n;
      const auto [h, hbar] = conformal_dimensions(csos, Rational(e), m);
      rows.push_back({Rational(e), m, h, hbar});
    }
  }
  return rows;
}

std::string spectrum_to_csv(const CsosParams& csos, const std::vector<SpectrumEntry>& rows) {
  std::string out = "p,pprime,e_num,e_den,m,h_re,h_im,hbar_re,hbar_im\n";
  for (const auto& r : rows) {
    out += std::to_string(csos.p) + ',' + std::to_string(csos.pprime) + ',';
    out += std::to_string(r.e.numerator()) + ',' + std::to_string(r.e.denominator()) + ',';
    out += std::to_string(r.m) + ',';
    out += fmt_g17(boost::rational_cast<double>(r.h)) + ",0,";
    out += fmt_g17(boost::rational_cast<double>(r.hbar)) + ",0\n";
  }
  return out;
}

std::string spectrum_to_json(const CsosParams& csos, const std::vector<SpectrumEntry>& rows) {
  nlohmann::json doc;
  doc["p"] = csos.p;
  doc["pprime"] = csos.pprime;
  doc["ell"] = csos.ell;
  doc["n"] = csos.n;
  doc["entries"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["e_num"] = r.e.numerator();
    row["e_den"] = r.e.denominator();
    row["m"] = r.m;
    row["h_re"] = boost::rational_cast<double>(r.h);
    row["h_im"] = 0.0;
    row["hbar_re"] = boost::rational_cast<double>(r.hbar);
    row["hbar_im"] = 0.0;
    doc["entries"].push_back(std::move(row));
  }
  return doc.dump();
}

double torus_character(const CsosParams& csos, double q, long truncation) {
  if (!(q > 0.0 && q < 1.0)) throw ArgError("torus sum needs a real modulus in (0, 1)");
  if (truncation < 1)
    throw TruncationError("torus sum needs a truncation window of at least 1");
  const long k_max = truncation;
  const long n = csos.n;
  const double p = double(csos.p);
  const double pp = double(csos.pprime);
  const double gap2 = double((csos.p - csos.pprime) * (csos.p - csos.pprime));

  // Combined exponent of q^{h} qbar^{hbar} at qbar = q.
  const auto expo = [&](long t, long u) {
    const double e = double(t) / double(n);
    const double m = double(u) * double(n);
    return (e * e * p * p + m * m * pp * pp - gap2) / (2.0 * p * pp);
  };

  double best = std::numeric_limits<double>::infinity();
  long best_t = 0;
  long best_u = 0;
  for (long t = -k_max * n; t <= k_max * n; ++t) {
    for (long u = -k_max; u <= k_max; ++u) {
      const double x = expo(t, u);
      if (x < best) {
        best = x;
        best_t = t;
        best_u = u;
      }
    }
  }
  if (std::labs(best_t) == k_max * n || std::labs(best_u) == k_max)
    throw TruncationError("leading torus exponent sits on the truncation boundary");

  double sum = 0.0;
  for (long t = -k_max * n; t <= k_max * n; ++t)
    for (long u = -k_max; u <= k_max; ++u) sum += std::pow(q, expo(t, u));

  double prod = 1.0;
  for (long k = 1; k <= k_max; ++k) prod *= 1.0 - std::pow(q, double(k));

  const double c = boost::rational_cast<double>(central_charge(csos));
  // (q qbar)^{c/24} = q^{c/12}; |eta_D(q)|^2 = q^{1/12} prod^2 at real q.
  return std::pow(q, c / 12.0 - 1.0 / 12.0) * sum / (prod * prod);
}

Rational torus_leading_exponent(const CsosParams& csos) {
  const auto [h0, hbar0] = conformal_dimensions(csos, Rational(0), 0);
  return central_charge(csos) / 12 - Rational(1, 12) + h0 + hbar0;
}

}  // namespace vertexlab
