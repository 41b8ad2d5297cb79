#pragma once

#include <array>
#include <string>
#include <vector>

#include "vertexlab/numerics.hpp"

namespace vertexlab {

// Anisotropy eta, reference height x0, and the tolerance knobs. Everything
// downstream takes its parameters from here.
struct ModelParams {
  CScalar eta{0.41, -0.23};
  CScalar x0{0.37, 0.11};
  ToleranceConfig tol{};
};

enum class GenKind { e, f, t, t_inv, f_bar, e_bar };

// One of the twelve single-site generators: kind x index in {0, 1}.
struct GeneratorId {
  GenKind kind;
  int index;  // 0 or 1
};

std::string to_string(GeneratorId id);

// Dense 2x2 site operator, [out][in]; spin index 0 <-> up (+1), 1 <-> down (-1).
struct SiteOperator {
  std::array<CScalar, 4> m{};

  CScalar& operator()(int out, int in) { return m[static_cast<std::size_t>(2 * out + in)]; }
  const CScalar& operator()(int out, int in) const {
    return m[static_cast<std::size_t>(2 * out + in)];
  }

  SiteOperator operator*(const SiteOperator& rhs) const;
  SiteOperator operator*(CScalar s) const;
  SiteOperator operator+(const SiteOperator& rhs) const;
  SiteOperator operator-(const SiteOperator& rhs) const;
  double max_abs() const;

  static SiteOperator identity();
};

// Trigonometric R matrix as a {2,2,2,2} tensor [out1, out2, in1, in2].
// Slot 1 is the vertical (column) line, slot 2 the horizontal (row) line.
// Diagonal weight sinh(lambda+eta), parallel sinh(lambda), exchange sinh(eta).
ComplexTensor r_matrix(CScalar lambda, const ModelParams& p);

// Single-site generator in the spectral-parameter-twisted representation:
//   e1 raises with amplitude exp(lambda), f1 lowers with exp(-lambda),
//   t1 = diag(exp(eta), exp(-eta)); index-0 partners act oppositely;
//   barred partners carry the extra exp(eta) twist; e_bar = f * t.
SiteOperator generator_on_v(GeneratorId id, CScalar lambda, const ModelParams& p);

// N-site action, one spectral parameter per site. Tail convention:
//   e-type (e, e_bar):  sum_j  t x...x t x x(lambda_j) x 1 x...x 1
//   f-type (f, f_bar):  sum_j  1 x...x 1 x x(lambda_j) x t^-1 x...x t^-1
//   t-type: plain tensor power.
// Returned as a {2^N, 2^N} matrix; site 0 owns the most significant bit.
// N > 12 throws SizeError.
ComplexTensor coproduct_action(GeneratorId id, const std::vector<CScalar>& lambdas,
                               const ModelParams& p);

// Same operator assembled by folding the two-site rule one site at a time;
// kept as an independent construction for cross-checks.
ComplexTensor coproduct_action_iterative(GeneratorId id, const std::vector<CScalar>& lambdas,
                                         const ModelParams& p);

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

CheckResult make_check(const std::string& name, double residual, double tol);

// R12(l1-l2) R13(l1-l3) R23(l2-l3) = R23 R13 R12 on three sites.
CheckResult check_ybe(CScalar l1, CScalar l2, CScalar l3, const ModelParams& p);

// R(lambda) R(-lambda) = sinh(eta+lambda) sinh(eta-lambda) * identity.
CheckResult check_unitarity(CScalar lambda, const ModelParams& p);

// Crossing: R(lambda)[o1,o2,i1,i2] equals the signed, charge-reversed
// evaluation of R(-lambda-eta) on the first line.
CheckResult check_crossing(CScalar lambda, const ModelParams& p);

// R(l1-l2) D(x) = D'(x) R(l1-l2) for every generator, where D / D' are the
// two-site action and its flipped partner.
CheckResult check_vertex_intertwining(CScalar l1, CScalar l2, const ModelParams& p);

// Conjugation by t rescales the step operators:
//   t f t^-1 = exp(-2 eta) f,   t f_bar t^-1 = exp(+2 eta) f_bar,
// for both site indices.
CheckResult check_winding_relation(CScalar lambda, const ModelParams& p);

// e_bar = f t, and the antipode S(e) = -t^-1 e, S(f) = -f t, S(t) = t^-1
// satisfies the counit contraction on every generator.
CheckResult check_antipode_consistency(CScalar lambda, const ModelParams& p);

// Chevalley relations in the twisted representation: [e_i, f_j] pairing and
// diagonal conjugation, plus t0 t1 = 1.
CheckResult check_defining_relations(CScalar lambda, const ModelParams& p);

// Kronecker product of square matrices given as {m,m} and {n,n} tensors.
ComplexTensor kron(const ComplexTensor& a, const ComplexTensor& b);

ComplexTensor site_to_matrix(const SiteOperator& op);

}  // namespace vertexlab
