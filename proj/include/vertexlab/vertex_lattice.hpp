#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vertexlab/vertex_weights.hpp"

namespace vertexlab {

// Square lattice with C columns and R rows of vertices. Vertical lines carry
// col_lambdas and their spins flow downward; horizontal lines carry
// row_lambdas and their spins flow westward. The weight at vertex (row r,
// column c) is R(col_lambda[c] - row_lambda[r])[S, W, N, E].
//
// Edge coordinates:
//   vertical   v(c, j): column c in [0,C), height j in [0,R]; j=0 and j=R
//              are the top/bottom externals;
//   horizontal h(r, i): row r in [0,R), position i in [0,C]; i=0 and i=C
//              are the west/east externals.
//
// Dual cells (i, j), i in [0,C], j in [0,R], sit between the lattice lines;
// cell (i, j) touches vertex (r=j, c=i) at its south-east corner, so its
// east side is v(i, j), west side v(i-1, j), north side h(j-1, i) and south
// side h(j, i). Cells with i in {0, C} or j in {0, R} form the boundary ring.

struct BoundaryTerm {
  enum class Mode { fixed, summed, weighted };
  Mode mode = Mode::fixed;
  int spin = +1;                        // used when fixed; +1 = up = index 0
  std::array<CScalar, 2> weight{};     // used when weighted, [up, down]

  static BoundaryTerm plus() { return {Mode::fixed, +1, {}}; }
  static BoundaryTerm minus() { return {Mode::fixed, -1, {}}; }
  static BoundaryTerm sum() { return {Mode::summed, +1, {}}; }
  static BoundaryTerm vec(CScalar up, CScalar down) {
    return {Mode::weighted, +1, {up, down}};
  }
};

struct VertexLatticeSpec {
  int n_cols = 1;
  int n_rows = 1;
  std::vector<CScalar> col_lambdas;
  std::vector<CScalar> row_lambdas;
  // External boundary terms: top/bottom indexed by column, west/east by row.
  std::vector<BoundaryTerm> top, bottom, west, east;

  void validate() const;  // GeometryError on inconsistent sizes
  int edge_count() const { return 2 * n_cols * n_rows + n_cols + n_rows; }

  // All externals fixed to up spins; a convenient starting point for tests.
  static VertexLatticeSpec uniform(int n_cols, int n_rows, std::vector<CScalar> cols,
                                   std::vector<CScalar> rows);
};

struct EdgeRef {
  char orient = 'v';  // 'v' or 'h'
  int line = 0;       // v: column c; h: row r
  int offset = 0;     // v: height j; h: position i
  bool operator==(const EdgeRef&) const = default;
};

// A defect line on the dual lattice: starts at a boundary-ring cell, walks
// cell to cell (steps U/D/L/R), and terminates on an internal insertion
// edge. Vertical insertion edges are approached from their east cell,
// horizontal ones from their south cell.
struct TailPath {
  std::pair<int, int> anchor{0, 0};  // ring cell (i, j)
  std::string steps;                 // moves in {U, D, L, R}
  EdgeRef insertion;

  std::vector<std::pair<int, int>> cells() const;  // anchor first
  void validate(const VertexLatticeSpec& spec) const;

  // Edges crossed along the walk, in order, with the crossing direction
  // ('W','E' for vertical edges, 'N','S' for horizontal ones).
  std::vector<std::pair<EdgeRef, char>> crossings() const;

  // Winding of the walk about the insertion edge, anticlockwise positive,
  // measured as the accumulated signed turning of the position vector.
  int winding_number() const;
};

// Straight two-leg route from `anchor` to the insertion edge, vertical leg
// first (falls back to horizontal-first when the arrival would cross the
// insertion edge itself). GeometryError when no two-leg route works.
TailPath straight_tail(std::pair<int, int> anchor, EdgeRef insertion,
                       const VertexLatticeSpec& spec);

struct ZResult {
  CScalar by_transfer{};
  std::optional<CScalar> by_enumeration;  // filled when edge_count <= 26
};

// Partition function by row transfer, cross-checked against an independent
// depth-first enumeration when the lattice is small enough. Throws
// InternalInconsistency when the two strategies disagree.
ZResult partition_function(const VertexLatticeSpec& spec, const ModelParams& p);

struct CurrentResult {
  CScalar raw{};    // tail-dressed unnormalized sum
  CScalar z{};      // plain partition function (transfer route)
  CScalar value{};  // raw / z
};

// Expectation of the quasi-local current: the insertion generator acts on
// the insertion edge and every tail crossing contributes t^-1 (west/north
// crossings) or t (east/south). gen.kind must be f or f_bar. Throws
// DegenerateNormalization when |z| is below the singularity guard; performs
// the enumeration cross-check on small lattices.
CurrentResult current_expectation(const VertexLatticeSpec& spec, const TailPath& tail,
                                  GeneratorId gen, const ModelParams& p);

// Discrete conservation around vertex (row, col): raw(N) - raw(W) - raw(S)
// + raw(E) with all four tails grown from the same anchor ring cell.
// residual is |combination| / max |raw|.
CheckResult check_plaquette_conservation(const VertexLatticeSpec& spec, int row, int col,
                                         std::pair<int, int> anchor, GeneratorId gen,
                                         const ModelParams& p);

// Two tails into the same insertion edge with equal winding give equal sums.
CheckResult check_path_independence(const VertexLatticeSpec& spec, const TailPath& a,
                                    const TailPath& b, GeneratorId gen, const ModelParams& p);

// Tails differing only by winding: raw_a = exp(-2 eta (Ma - Mb)) raw_b for
// f-type insertions and the inverse factor for f_bar.
CheckResult check_unwind(const VertexLatticeSpec& spec, const TailPath& wound,
                         const TailPath& reference, GeneratorId gen, const ModelParams& p);

// At eta = 0 the tail operators become the identity, so the dressed sum
// equals the sum with the bare insertion alone.
CheckResult check_zero_eta_tail(const VertexLatticeSpec& spec, const TailPath& tail,
                                GeneratorId gen, const ModelParams& p);

// JSON round trip for a lattice job (spec + optional tail + generator).
struct LatticeJob {
  VertexLatticeSpec spec;
  std::optional<TailPath> tail;
  GeneratorId gen{GenKind::f, 0};
};

std::string lattice_job_to_json(const LatticeJob& job);
LatticeJob lattice_job_from_json(const std::string& text);

}  // namespace vertexlab
