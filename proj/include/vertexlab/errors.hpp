#pragma once

#include <stdexcept>
#include <string>

namespace vertexlab {

// Thrown when tensor shapes, axes, or element budgets are violated.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a requested operator product would exceed the supported size.
struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the parameter sampler cannot produce an admissible point.
struct SamplingError : std::runtime_error {
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when two independent evaluation strategies disagree.
struct InternalInconsistency : std::runtime_error {
  explicit InternalInconsistency(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a normalization (partition function) is too close to zero.
struct DegenerateNormalization : std::runtime_error {
  explicit DegenerateNormalization(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on invalid lattice/tail/embedding geometry.
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a height hits a zero of sinh and a finite weight is required.
struct SingularHeight : std::runtime_error {
  explicit SingularHeight(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on invalid user-supplied arguments (non-coprime pairs, bad flags...).
struct ArgError : std::runtime_error {
  explicit ArgError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the compactification coupling degenerates to zero.
struct DegenerateCoupling : std::runtime_error {
  explicit DegenerateCoupling(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a restriction probe can neither confirm nor refute.
struct ProbeInconclusive : std::runtime_error {
  explicit ProbeInconclusive(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a series fails to converge within the truncation budget.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vertexlab
