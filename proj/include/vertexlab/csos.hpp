#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "vertexlab/sos_weights.hpp"

namespace vertexlab {

using Rational = boost::rational<long long>;

// Cyclic height arithmetic. For a coprime pair p' < p the anisotropy
// eta = i*pi*(p-p')/p makes every sinh((x0+k)eta) periodic under k -> k+n,
// where (ell, n) = ((p-p')/2, p) when p-p' is even and (p-p', 2p) when it is
// odd. In both cases eta = 2*i*pi*ell/n with ell and n coprime, so heights
// can be folded to residues mod n.
struct CsosParams {
  long p = 0;
  long pprime = 0;
  long ell = 0;
  long n = 0;

  CScalar eta() const;
  ModelParams model_params(CScalar x0) const;
};

// Derives (ell, n) from the parity of p-p' and cross-checks the exact
// integer identity 2*ell*p == n*(p-p') together with gcd(ell, n) == 1.
// Non-coprime pairs or p' outside [1, p) raise ArgError.
std::pair<long, long> derive_ln(long p, long pprime);
CsosParams make_csos(long p, long pprime);

// Max deviation over: face weights under the shift of all four corner
// heights by n, and the three intertwiner kinds under the same shift
// compared against (-1)^ell times their unshifted values -- the components
// repeat for even ell and flip sign for odd ell, while the face weights
// always repeat.
CheckResult check_cyclic_periodicity(const CsosParams& csos, CScalar x0, CScalar lambda);

// Loop generator acting at an interior site of a cyclic height walk
// (a_0..a_L), heights stored as residues mod n and steps as bits (set bit =
// step up). Column-sparse: cols[w] lists (w', value) with <w'|E|w> = value.
// An entry is nonzero only when the two neighbours of the active site agree,
// and the out-walk differs from the in-walk at the active site alone.
struct TLGenerator {
  int length = 0;       // L: number of steps in each walk
  int site = 0;         // acts on a_site, 1 <= site <= length-1
  long n = 0;           // cyclic modulus
  std::size_t dim = 0;  // n * 2^length walks
  std::vector<std::vector<std::pair<std::size_t, CScalar>>> cols;

  std::vector<CScalar> apply(const std::vector<CScalar>& v) const;
};

// Walk codec shared with the tests: index = start * 2^length + step bits,
// bit k set meaning a_{k+1} = a_k + 1 (mod n). Returns the length+1 heights.
std::vector<long> decode_walk(std::size_t index, int length, long n);

// Builds E_site on the walk space. Requires 1 <= site <= length-1 and
// length <= 8; raises SingularHeight when sinh((x0+a)eta) degenerates for
// any residue a.
TLGenerator tl_generator(const CsosParams& csos, int length, int site, CScalar x0);

// Algebra of the loop generators on a shared walk space:
//   square:  E_j^2 + 2 cosh(eta) E_j = 0
//   braid:   E_j E_k E_j - E_j = 0 for |j-k| = 1
//   commute: E_j E_k - E_k E_j = 0 for |j-k| >= 2
CheckResult check_tl_square(const CsosParams& csos, int length, int site, CScalar x0);
CheckResult check_tl_braid(const CsosParams& csos, int length, int site_j, int site_k,
                           CScalar x0);
CheckResult check_tl_commute(const CsosParams& csos, int length, int site_j, int site_k,
                             CScalar x0);

// Entrywise split of the cyclic face weight into an identity part and a
// loop part,
//   W(a,b,c,d) = sinh(lambda+eta) delta_{bd} + sinh(lambda) E(a,b,c,d),
// where E vanishes unless c == a (mod n) and otherwise equals
// -eps1*eps2*sinh((x0+a+eps1)eta)/sinh((x0+a)eta) with eps1, eps2 the steps
// from a to b and from a to d. Inadmissible quadruples compare W against 0.
// Returns the scale-aware residual of the two sides.
double check_w_tl_decomposition(const CsosParams& csos, long a, long b, long c, long d,
                                CScalar lambda, CScalar x0);

// Real orthonormal eigenbasis of the cyclic adjacency matrix
// A_{ab} = 1 iff |a-b| == 1 (mod n): sine vectors S^(j) for interior j and
// cosine vectors T^(j) including the endpoints, components
// N_j sin(2 pi a j / n) and N_j cos(2 pi a j / n) with N_j = sqrt(1/n) when
// j = 0 or j = n/2 and sqrt(2/n) otherwise. Each vector has adjacency
// eigenvalue 2 cos(2 pi j / n).
struct EigVector {
  char family = 'T';  // 'S' or 'T'
  long j = 0;
  double eigenvalue = 0.0;
  std::vector<double> components;
};

struct EigSystem {
  long n = 0;
  std::vector<EigVector> vectors;
};

// Requires n >= 3 (ArgError otherwise); returns exactly n vectors:
// T(0..n/2) and S(1..(n-1)/2) for odd n, T(0..n/2) and S(1..n/2-1) for even.
EigSystem adjacency_eigensystem(long n);

// Exact Coulomb-gas dimensions for rational electric charge e and integer
// magnetic charge m:
//   h    = ((e p - m p')^2 - (p - p')^2) / (4 p p')
//   hbar = ((e p + m p')^2 - (p - p')^2) / (4 p p')
// so that h - hbar = -e m. The spectrum proper uses m in n*Z; general m is
// allowed for exploration.
std::pair<Rational, Rational> conformal_dimensions(const CsosParams& csos,
                                                   const Rational& e, long m);

// c = 1 - 6 (p-p')^2 / (p p'), exactly.
Rational central_charge(const CsosParams& csos);

// c - 12*(h + hbar) at e = m = 0; equals 1 for every valid pair.
Rational effective_central_charge(const CsosParams& csos);

// |s1 - h(1,3)| + |s0 - 1|: the index-1 height-current spin 1 + 2 i eta / pi
// computed from floating model parameters against the exact dimension at
// charges (e, m) = (1, 3), plus the index-0 spin against 1.
CheckResult check_spin_identification(const CsosParams& csos);

struct SpectrumEntry {
  Rational e;
  long m = 0;
  Rational h;
  Rational hbar;
};

// Rows for integer electric charges |e| <= e_bound crossed with magnetic
// charges m = n*u, |u| <= m_bound, in ascending (e, m) order.
std::vector<SpectrumEntry> spectrum_table(const CsosParams& csos, long e_bound, long m_bound);

// Deterministic table emitters. CSV columns:
//   p,pprime,e_num,e_den,m,h_re,h_im,hbar_re,hbar_im
// with doubles printed at full round-trip precision.
std::string spectrum_to_csv(const CsosParams& csos, const std::vector<SpectrumEntry>& rows);
std::string spectrum_to_json(const CsosParams& csos, const std::vector<SpectrumEntry>& rows);

// Truncated scaling-limit torus sum at real 0 < q < 1 (qbar = q):
//   (q qbar)^{c/24} / |eta_D(q)|^2 * sum_{e,m} q^{h_em} qbar^{hbar_em}
// with eta_D(q) = q^{1/24} prod_{k=1..K} (1 - q^k) and the charge lattice
// truncated to e = t/n, |t| <= K*n and m = n*u, |u| <= K. Raises ArgError
// for q outside (0, 1) and TruncationError when K < 1 or when the smallest
// exponent lands on the truncation boundary (a larger window could then
// still lower the leading term).
double torus_character(const CsosParams& csos, double q, long truncation);

// Exact exponent of the leading small-q behaviour of the torus sum:
// c/12 - 1/12 + h_00 + hbar_00.
Rational torus_leading_exponent(const CsosParams& csos);

}  // namespace vertexlab
