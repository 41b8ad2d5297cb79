#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "vertexlab/errors.hpp"

namespace vertexlab {

using CScalar = std::complex<double>;

// Shared tolerance knobs. `abs_tol` gates raw residuals, `rel_tol` gates
// residuals normalized by scale, `singularity_guard` is the minimum distance
// kept from zeros of sinh in denominators.
struct ToleranceConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  double singularity_guard = 1e-6;
};

// Dense row-major complex tensor. The last index varies fastest. Capacity is
// capped so an accidental runaway contraction fails fast instead of swapping.
class ComplexTensor {
 public:
  static constexpr std::size_t kMaxElements = std::size_t{1} << 24;

  ComplexTensor() = default;
  explicit ComplexTensor(std::vector<std::size_t> shape);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  std::size_t flat_index(const std::vector<std::size_t>& idx) const;
  CScalar& at(const std::vector<std::size_t>& idx) { return data_[flat_index(idx)]; }
  const CScalar& at(const std::vector<std::size_t>& idx) const { return data_[flat_index(idx)]; }
  CScalar& operator[](std::size_t flat) { return data_[flat]; }
  const CScalar& operator[](std::size_t flat) const { return data_[flat]; }

  std::vector<CScalar>& data() { return data_; }
  const std::vector<CScalar>& data() const { return data_; }

  // Reinterpret the flat buffer under a new shape with the same element count.
  ComplexTensor reshaped(std::vector<std::size_t> new_shape) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::vector<CScalar> data_;
};

// Tensor contraction over the listed axis pairs (axes_a[k] of `a` against
// axes_b[k] of `b`). Free axes of `a` come first in the result, then free
// axes of `b`, both in their original order. Throws ShapeError on axis or
// dimension mismatches and on element-budget overflow.
ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<std::size_t>& axes_a,
                       const std::vector<std::size_t>& axes_b);

double max_abs(const ComplexTensor& t);

// Scale-aware mismatch measure: max |a-b| / (1 + max |a|).
double residual(const ComplexTensor& a, const ComplexTensor& b);
double residual(CScalar a, CScalar b);

struct ComplexBox {
  double re_min = 0.15;
  double re_max = 0.85;
  double im_min = -0.60;
  double im_max = 0.60;
};

struct SampledPoint {
  CScalar lambda;
  CScalar eta;
  CScalar x0;
};

// Deterministic parameter source for the identity batteries. A fixed seed
// reproduces the exact same stream on any platform: draws come from
// mt19937_64 through an explicit 53-bit mapping, never through
// distribution objects with unspecified algorithms.
class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed, ComplexBox lambda_box = {},
                        std::vector<CScalar> eta_choices = default_etas(),
                        CScalar x0 = CScalar(0.37, 0.11),
                        ToleranceConfig tol = {});

  static std::vector<CScalar> default_etas();

  // One admissible (lambda, eta, x0) triple; retries a bounded number of
  // times when a draw lands too close to a sinh zero, then throws
  // SamplingError.
  SampledPoint sample();

  // Batch draw; n == 0 is rejected with SamplingError.
  std::vector<SampledPoint> sample(std::size_t n);

  // Uniform double in [0, 1): top 53 bits of the generator output.
  double uniform01();

  std::uint64_t raw() { return rng_(); }

 private:
  bool admissible(const SampledPoint& p) const;

  std::mt19937_64 rng_;
  ComplexBox box_;
  std::vector<CScalar> etas_;
  CScalar x0_;
  ToleranceConfig tol_;
};

}  // namespace vertexlab
