#include <cmath>
#include <complex>

#include "doctest.h"
#include "vertexlab/vertex_weights.hpp"

using namespace vertexlab;

namespace {

const ModelParams kParams{CScalar(0.41, -0.23), CScalar(0.37, 0.11), {}};

// Independent Kronecker product oracle (plain quadruple loop).
ComplexTensor kron_oracle(const ComplexTensor& a, const ComplexTensor& b) {
  const std::size_t m = a.shape()[0], n = b.shape()[0];
  ComplexTensor out({m * n, m * n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out.at({i * n + k, j * n + l}) = a.at({i, j}) * b.at({k, l});
  return out;
}

}  // namespace

TEST_CASE("r matrix carries the three trigonometric weights and the ice rule") {
  const CScalar lambda(0.3, 0.15);
  const ComplexTensor r = r_matrix(lambda, kParams);
  const CScalar a = std::sinh(lambda + kParams.eta);
  const CScalar b = std::sinh(lambda);
  const CScalar c = std::sinh(kParams.eta);
  CHECK(std::abs(r.at({0, 0, 0, 0}) - a) < 1e-15);
  CHECK(std::abs(r.at({1, 1, 1, 1}) - a) < 1e-15);
  CHECK(std::abs(r.at({0, 1, 0, 1}) - b) < 1e-15);
  CHECK(std::abs(r.at({1, 0, 1, 0}) - b) < 1e-15);
  CHECK(std::abs(r.at({0, 1, 1, 0}) - c) < 1e-15);
  CHECK(std::abs(r.at({1, 0, 0, 1}) - c) < 1e-15);
  // Charge conservation: everything else vanishes.
  for (std::size_t o1 = 0; o1 < 2; ++o1)
    for (std::size_t o2 = 0; o2 < 2; ++o2)
      for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2) {
          if (o1 + o2 != i1 + i2) CHECK(std::abs(r.at({o1, o2, i1, i2})) == 0.0);
        }
}

TEST_CASE("generators carry the documented matrix elements") {
  const CScalar lambda(0.52, -0.31);
  const CScalar eta = kParams.eta;
  const SiteOperator e1 = generator_on_v({GenKind::e, 1}, lambda, kParams);
  const SiteOperator f1 = generator_on_v({GenKind::f, 1}, lambda, kParams);
  const SiteOperator t1 = generator_on_v({GenKind::t, 1}, lambda, kParams);
  const SiteOperator e0 = generator_on_v({GenKind::e, 0}, lambda, kParams);
  const SiteOperator f0 = generator_on_v({GenKind::f, 0}, lambda, kParams);
  const SiteOperator t0 = generator_on_v({GenKind::t, 0}, lambda, kParams);
  const SiteOperator fb1 = generator_on_v({GenKind::f_bar, 1}, lambda, kParams);
  const SiteOperator fb0 = generator_on_v({GenKind::f_bar, 0}, lambda, kParams);
  const SiteOperator eb1 = generator_on_v({GenKind::e_bar, 1}, lambda, kParams);

  CHECK(std::abs(e1(0, 1) - std::exp(lambda)) < 1e-15);
  CHECK(std::abs(e1(1, 0)) == 0.0);
  CHECK(std::abs(f1(1, 0) - std::exp(-lambda)) < 1e-15);
  CHECK(std::abs(t1(0, 0) - std::exp(eta)) < 1e-15);
  CHECK(std::abs(t1(1, 1) - std::exp(-eta)) < 1e-15);
  CHECK(std::abs(e0(1, 0) - std::exp(lambda)) < 1e-15);
  CHECK(std::abs(f0(0, 1) - std::exp(-lambda)) < 1e-15);
  CHECK(std::abs(t0(0, 0) - std::exp(-eta)) < 1e-15);
  CHECK(std::abs(fb1(0, 1) - std::exp(lambda + eta)) < 1e-15);
  CHECK(std::abs(fb0(1, 0) - std::exp(lambda + eta)) < 1e-15);
  // e_bar = f t composes the lowering step with the diagonal twist.
  const SiteOperator eb1_oracle = f1 * t1;
  CHECK((eb1 - eb1_oracle).max_abs() < 1e-15);
}

TEST_CASE("identity battery passes on sampled parameter points") {
  ParamSampler sampler(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const SampledPoint p1 = sampler.sample();
    const SampledPoint p2 = sampler.sample();
    const SampledPoint p3 = sampler.sample();
    ModelParams mp{p1.eta, p1.x0, {}};

    const CheckResult ybe = check_ybe(p1.lambda, p2.lambda, p3.lambda, mp);
    CHECK_MESSAGE(ybe.pass, "ybe residual ", ybe.residual);
    const CheckResult uni = check_unitarity(p1.lambda, mp);
    CHECK_MESSAGE(uni.pass, "unitarity residual ", uni.residual);
    const CheckResult cross = check_crossing(p1.lambda, mp);
    CHECK_MESSAGE(cross.pass, "crossing residual ", cross.residual);
    const CheckResult intertw = check_vertex_intertwining(p1.lambda, p2.lambda, mp);
    CHECK_MESSAGE(intertw.pass, "intertwining residual ", intertw.residual);
    const CheckResult wind = check_winding_relation(p1.lambda, mp);
    CHECK_MESSAGE(wind.pass, "winding residual ", wind.residual);
    const CheckResult anti = check_antipode_consistency(p1.lambda, mp);
    CHECK_MESSAGE(anti.pass, "antipode residual ", anti.residual);
    const CheckResult def = check_defining_relations(p1.lambda, mp);
    CHECK_MESSAGE(def.pass, "defining residual ", def.residual);
  }
}

TEST_CASE("intertwining check is not vacuous") {
  // R does not commute with the plain (unflipped) two-site action of e.
  const CScalar l1(0.42, 0.12), l2(0.18, -0.22);
  const ComplexTensor r = r_matrix(l1 - l2, kParams).reshaped({4, 4});
  const ComplexTensor d = coproduct_action({GenKind::e, 1}, {l1, l2}, kParams);
  const ComplexTensor rd = contract(r, d, {1}, {0});
  const ComplexTensor dr = contract(d, r, {1}, {0});
  CHECK(residual(rd, dr) > 1e-3);
}

TEST_CASE("coproduct closed sum matches the iterative fold") {
  ParamSampler sampler(77);
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<CScalar> lambdas;
    SampledPoint p0 = sampler.sample();
    lambdas.push_back(p0.lambda);
    for (std::size_t k = 1; k < n; ++k) lambdas.push_back(sampler.sample().lambda);
    ModelParams mp{p0.eta, p0.x0, {}};
    for (GenKind kind :
         {GenKind::e, GenKind::f, GenKind::t, GenKind::t_inv, GenKind::f_bar, GenKind::e_bar}) {
      for (int index = 0; index < 2; ++index) {
        const ComplexTensor closed = coproduct_action({kind, index}, lambdas, mp);
        const ComplexTensor folded = coproduct_action_iterative({kind, index}, lambdas, mp);
        CHECK_MESSAGE(residual(closed, folded) < 1e-12, to_string(GeneratorId{kind, index}),
                      " n=", n, " residual ", residual(closed, folded));
      }
    }
  }
}

TEST_CASE("coproduct matches an explicit three-site kron oracle") {
  const CScalar l0(0.3, 0.1), l1(0.5, -0.2), l2(0.7, 0.05);
  const ModelParams mp = kParams;

  auto mat = [&](GeneratorId id, CScalar lam) {
    return site_to_matrix(generator_on_v(id, lam, mp));
  };
  const ComplexTensor eye = site_to_matrix(SiteOperator::identity());

  // f-type: f x t^-1 x t^-1 + 1 x f x t^-1 + 1 x 1 x f.
  const GeneratorId fid{GenKind::f, 0};
  const ComplexTensor tinv = mat({GenKind::t_inv, 0}, 0.0);
  ComplexTensor term1 = kron_oracle(kron_oracle(mat(fid, l0), tinv), tinv);
  ComplexTensor term2 = kron_oracle(kron_oracle(eye, mat(fid, l1)), tinv);
  ComplexTensor term3 = kron_oracle(kron_oracle(eye, eye), mat(fid, l2));
  ComplexTensor expect_f(term1.shape());
  for (std::size_t i = 0; i < term1.size(); ++i) expect_f[i] = term1[i] + term2[i] + term3[i];
  CHECK(residual(coproduct_action(fid, {l0, l1, l2}, mp), expect_f) < 1e-14);

  // e-type: e x 1 x 1 + t x e x 1 + t x t x e.
  const GeneratorId eid{GenKind::e, 1};
  const ComplexTensor tm = mat({GenKind::t, 1}, 0.0);
  term1 = kron_oracle(kron_oracle(mat(eid, l0), eye), eye);
  term2 = kron_oracle(kron_oracle(tm, mat(eid, l1)), eye);
  term3 = kron_oracle(kron_oracle(tm, tm), mat(eid, l2));
  ComplexTensor expect_e(term1.shape());
  for (std::size_t i = 0; i < term1.size(); ++i) expect_e[i] = term1[i] + term2[i] + term3[i];
  CHECK(residual(coproduct_action(eid, {l0, l1, l2}, mp), expect_e) < 1e-14);

  // t-type tensor power.
  const ComplexTensor tt = coproduct_action({GenKind::t, 1}, {l0, l1, l2}, mp);
  CHECK(residual(tt, kron_oracle(kron_oracle(tm, tm), tm)) < 1e-14);
}

TEST_CASE("coproduct rejects unsupported sizes") {
  std::vector<CScalar> lambdas(13, CScalar(0.2, 0.1));
  CHECK_THROWS_AS(coproduct_action({GenKind::f, 0}, lambdas, kParams), SizeError);
  CHECK_THROWS_AS(coproduct_action({GenKind::f, 0}, {}, kParams), SizeError);
  CHECK_THROWS_AS(coproduct_action_iterative({GenKind::e, 1}, lambdas, kParams), SizeError);
}
