#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "vertexlab/numerics.hpp"

using namespace vertexlab;

namespace {

// Independent dense matrix multiply used as an oracle for contract().
ComplexTensor naive_matmul(const ComplexTensor& a, const ComplexTensor& b) {
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  ComplexTensor out({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CScalar acc(0.0, 0.0);
      for (std::size_t s = 0; s < k; ++s) acc += a.at({i, s}) * b.at({s, j});
      out.at({i, j}) = acc;
    }
  return out;
}

ComplexTensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng) {
  ComplexTensor t(std::move(shape));
  for (auto& v : t.data()) {
    const double re = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    const double im = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    v = CScalar(re, im);
  }
  return t;
}

}  // namespace

TEST_CASE("tensor layout is row major with last index fastest") {
  ComplexTensor t({2, 3});
  t.at({0, 0}) = 1.0;
  t.at({0, 2}) = 2.0;
  t.at({1, 0}) = 3.0;
  CHECK(t[0] == CScalar(1.0));
  CHECK(t[2] == CScalar(2.0));
  CHECK(t[3] == CScalar(3.0));
  CHECK(t.flat_index({1, 2}) == 5);
}

TEST_CASE("tensor guards shape errors") {
  CHECK_THROWS_AS(ComplexTensor({4097, 4096}), ShapeError);  // over the element budget
  CHECK_THROWS_AS(ComplexTensor({2, 0}), ShapeError);
  ComplexTensor t({2, 3});
  CHECK_THROWS_AS(t.at({2, 0}), ShapeError);
  CHECK_THROWS_AS(t.at({0, 0, 0}), ShapeError);
  CHECK_THROWS_AS(t.reshaped({5}), ShapeError);
  ComplexTensor ok = t.reshaped({3, 2});
  CHECK(ok.shape()[0] == 3);
}

TEST_CASE("contract matches a hand-rolled matrix product") {
  std::mt19937_64 rng(7);
  const ComplexTensor a = random_tensor({3, 4}, rng);
  const ComplexTensor b = random_tensor({4, 5}, rng);
  const ComplexTensor via_contract = contract(a, b, {1}, {0});
  const ComplexTensor via_loops = naive_matmul(a, b);
  CHECK(residual(via_contract, via_loops) < 1e-15);
}

TEST_CASE("contract rejects inconsistent axes") {
  ComplexTensor a({3, 4});
  ComplexTensor b({5, 6});
  CHECK_THROWS_AS(contract(a, b, {1}, {0}), ShapeError);
  CHECK_THROWS_AS(contract(a, b, {0, 1}, {0}), ShapeError);
  ComplexTensor c({4, 4});
  CHECK_THROWS_AS(contract(a, c, {1, 1}, {0, 1}), ShapeError);
  CHECK_THROWS_AS(contract(a, c, {7}, {0}), ShapeError);
}

TEST_CASE("contraction is associative to near machine precision") {
  std::mt19937_64 rng(11);
  const ComplexTensor a = random_tensor({2, 3, 4}, rng);
  const ComplexTensor b = random_tensor({4, 5}, rng);
  const ComplexTensor c = random_tensor({5, 3}, rng);
  const ComplexTensor left = contract(contract(a, b, {2}, {0}), c, {2}, {0});
  const ComplexTensor right = contract(a, contract(b, c, {1}, {0}), {2}, {0});
  CHECK(residual(left, right) < 1e-12);
}

TEST_CASE("full contraction produces a scalar tensor") {
  std::mt19937_64 rng(13);
  const ComplexTensor a = random_tensor({3, 4}, rng);
  const ComplexTensor b = random_tensor({3, 4}, rng);
  const ComplexTensor s = contract(a, b, {0, 1}, {0, 1});
  CHECK(s.size() == 1);
  CScalar expect(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) expect += a[i] * b[i];
  CHECK(std::abs(s[0] - expect) < 1e-14);
}

TEST_CASE("residual uses max-abs difference over 1 + scale") {
  ComplexTensor a({2});
  ComplexTensor b({2});
  a[0] = CScalar(3.0, 0.0);
  a[1] = CScalar(0.0, 4.0);
  b[0] = CScalar(3.0, 0.0);
  b[1] = CScalar(0.0, 4.5);
  CHECK(residual(a, b) == doctest::Approx(0.5 / 5.0).epsilon(1e-14));
  CHECK(residual(CScalar(1.0, 0.0), CScalar(1.0, 0.2)) == doctest::Approx(0.1).epsilon(1e-12));
  ComplexTensor c({3});
  CHECK_THROWS_AS(residual(a, c), ShapeError);
}

TEST_CASE("sampler is reproducible from the seed") {
  ParamSampler s1(12345);
  ParamSampler s2(12345);
  for (int i = 0; i < 50; ++i) {
    const SampledPoint p1 = s1.sample();
    const SampledPoint p2 = s2.sample();
    CHECK(p1.lambda == p2.lambda);
    CHECK(p1.eta == p2.eta);
    CHECK(p1.x0 == p2.x0);
  }
  ParamSampler s3(54321);
  bool any_diff = false;
  ParamSampler s4(12345);
  for (int i = 0; i < 10; ++i) {
    if (s3.sample().lambda != s4.sample().lambda) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("sampler uniform mapping takes the top 53 bits") {
  ParamSampler s(99);
  std::mt19937_64 oracle(99);
  for (int i = 0; i < 20; ++i) {
    const double expect = static_cast<double>(oracle() >> 11) * 0x1.0p-53;
    const double got = s.uniform01();
    CHECK(got == expect);
    CHECK(got >= 0.0);
    CHECK(got < 1.0);
  }
}

TEST_CASE("sampler enforces the singularity guard") {
  ParamSampler s(7);
  for (int i = 0; i < 100; ++i) {
    const SampledPoint p = s.sample();
    for (int k = -6; k <= 6; ++k) {
      CHECK(std::abs(std::sinh((p.x0 + static_cast<double>(k)) * p.eta)) > 1e-6);
    }
  }
}

TEST_CASE("sampler rejects hopeless configurations and empty batches") {
  ParamSampler bad(3, ComplexBox{}, {CScalar(1e-12, 0.0)});
  CHECK_THROWS_AS(bad.sample(), SamplingError);
  ParamSampler ok(3);
  CHECK_THROWS_AS(ok.sample(0), SamplingError);
  CHECK(ok.sample(5).size() == 5);
  CHECK_THROWS_AS(ParamSampler(1, ComplexBox{}, {}), SamplingError);
}
