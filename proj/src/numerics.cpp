#include "vertexlab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace vertexlab {

namespace {

std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * shape[i];
  }
  return strides;
}

std::size_t checked_total(const std::vector<std::size_t>& shape) {
  std::size_t total = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("zero-length tensor axis");
    if (total > ComplexTensor::kMaxElements / d) {
      throw ShapeError("tensor exceeds element budget");
    }
    total *= d;
  }
  if (total > ComplexTensor::kMaxElements) {
    throw ShapeError("tensor exceeds element budget");
  }
  return total;
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)),
      strides_(row_major_strides(shape_)),
      data_(checked_total(shape_), CScalar(0.0, 0.0)) {}

std::size_t ComplexTensor::flat_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) {
    throw ShapeError("index rank does not match tensor rank");
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= shape_[i]) throw ShapeError("tensor index out of range");
    flat += idx[i] * strides_[i];
  }
  return flat;
}

ComplexTensor ComplexTensor::reshaped(std::vector<std::size_t> new_shape) const {
  ComplexTensor out(std::move(new_shape));
  if (out.size() != size()) {
    throw ShapeError("reshape changes element count");
  }
  out.data_ = data_;
  return out;
}

ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<std::size_t>& axes_a,
                       const std::vector<std::size_t>& axes_b) {
  if (axes_a.size() != axes_b.size()) {
    throw ShapeError("contraction axis lists differ in length");
  }
  const auto& sa = a.shape();
  const auto& sb = b.shape();

  std::vector<bool> used_a(sa.size(), false), used_b(sb.size(), false);
  std::size_t contracted = 1;
  for (std::size_t k = 0; k < axes_a.size(); ++k) {
    const std::size_t ia = axes_a[k], ib = axes_b[k];
    if (ia >= sa.size() || ib >= sb.size()) throw ShapeError("contraction axis out of range");
    if (used_a[ia] || used_b[ib]) throw ShapeError("contraction axis repeated");
    if (sa[ia] != sb[ib]) throw ShapeError("contracted dimensions do not match");
    used_a[ia] = used_b[ib] = true;
    contracted *= sa[ia];
  }

  std::vector<std::size_t> free_a, free_b, out_shape;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (!used_a[i]) {
      free_a.push_back(i);
      out_shape.push_back(sa[i]);
    }
  }
  for (std::size_t i = 0; i < sb.size(); ++i) {
    if (!used_b[i]) {
      free_b.push_back(i);
      out_shape.push_back(sb[i]);
    }
  }

  ComplexTensor out(out_shape.empty() ? std::vector<std::size_t>{1} : out_shape);
  const bool scalar_out = out_shape.empty();

  // Walk the output multi-index and, inside, the contracted multi-index.
  std::vector<std::size_t> ia(sa.size(), 0), ib(sb.size(), 0);
  std::vector<std::size_t> oidx(out_shape.size(), 0);
  const std::size_t out_elems = scalar_out ? 1 : out.size();

  for (std::size_t o = 0; o < out_elems; ++o) {
    // Scatter the output index into the free slots of a and b.
    for (std::size_t k = 0; k < free_a.size(); ++k) ia[free_a[k]] = oidx[k];
    for (std::size_t k = 0; k < free_b.size(); ++k) ib[free_b[k]] = oidx[free_a.size() + k];

    CScalar acc(0.0, 0.0);
    std::vector<std::size_t> cidx(axes_a.size(), 0);
    for (std::size_t c = 0; c < contracted; ++c) {
      for (std::size_t k = 0; k < axes_a.size(); ++k) {
        ia[axes_a[k]] = cidx[k];
        ib[axes_b[k]] = cidx[k];
      }
      acc += a.at(ia) * b.at(ib);
      // Increment the contracted multi-index (last axis fastest).
      for (std::size_t k = axes_a.size(); k-- > 0;) {
        if (++cidx[k] < sa[axes_a[k]]) break;
        cidx[k] = 0;
      }
    }
    out[o] = acc;

    for (std::size_t k = oidx.size(); k-- > 0;) {
      if (++oidx[k] < out_shape[k]) break;
      oidx[k] = 0;
    }
  }
  return out;
}

double max_abs(const ComplexTensor& t) {
  double m = 0.0;
  for (const auto& v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double residual(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.shape() != b.shape()) throw ShapeError("residual of mismatched shapes");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff / (1.0 + max_abs(a));
}

double residual(CScalar a, CScalar b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

ParamSampler::ParamSampler(std::uint64_t seed, ComplexBox lambda_box,
                           std::vector<CScalar> eta_choices, CScalar x0, ToleranceConfig tol)
    : rng_(seed), box_(lambda_box), etas_(std::move(eta_choices)), x0_(x0), tol_(tol) {
  if (etas_.empty()) throw SamplingError("empty eta choice list");
}

std::vector<CScalar> ParamSampler::default_etas() {
  return {CScalar(0.41, -0.23), CScalar(0.33, 0.17), CScalar(0.52, 0.08),
          CScalar(0.27, -0.34), CScalar(0.61, 0.29)};
}

double ParamSampler::uniform01() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

bool ParamSampler::admissible(const SampledPoint& p) const {
  const double guard = tol_.singularity_guard;
  // Keep every height value used by the weight tables away from sinh zeros.
  for (int k = -6; k <= 6; ++k) {
    if (std::abs(std::sinh((p.x0 + static_cast<double>(k)) * p.eta)) <= guard) return false;
  }
  // Light robustness guards on the spectral parameter itself.
  if (std::abs(std::sinh(p.lambda)) <= guard) return false;
  if (std::abs(std::sinh(p.lambda + p.eta)) <= guard) return false;
  if (std::abs(std::sinh(p.lambda - p.eta)) <= guard) return false;
  if (std::abs(std::sinh(p.eta)) <= guard) return false;
  return true;
}

SampledPoint ParamSampler::sample() {
  constexpr int kMaxRetries = 256;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    const double u_eta = uniform01();
    std::size_t idx = static_cast<std::size_t>(u_eta * static_cast<double>(etas_.size()));
    idx = std::min(idx, etas_.size() - 1);
    const double re = box_.re_min + (box_.re_max - box_.re_min) * uniform01();
    const double im = box_.im_min + (box_.im_max - box_.im_min) * uniform01();
    SampledPoint p{CScalar(re, im), etas_[idx], x0_};
    if (admissible(p)) return p;
  }
  throw SamplingError("no admissible parameter point after bounded retries");
}

std::vector<SampledPoint> ParamSampler::sample(std::size_t n) {
  if (n == 0) throw SamplingError("requested zero samples");
  std::vector<SampledPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample());
  return out;
}

}  // namespace vertexlab
