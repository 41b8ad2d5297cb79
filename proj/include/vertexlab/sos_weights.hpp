#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vertexlab/vertex_lattice.hpp"
#include "vertexlab/vertex_weights.hpp"

namespace vertexlab {

// Solid-on-solid layer: heights live on the dual-cell corners and are stored
// as integer offsets k labelling the complex height value x0 + k. In cyclic
// mode the offsets are residues mod n and adjacency wraps around.

CScalar height_value(long k, const ModelParams& params);

// Two-component intertwining vectors attached to an admissible height pair
// (|a-b| = 1). psi maps the face picture into the spin picture; psi_star is
// its left inverse; psi_prime is the sinh-ratio-rescaled variant that
// inverts against psi through the *second* height argument.
enum class IntertwinerKind { psi, psi_star, psi_prime };

std::array<CScalar, 2> intertwiner(IntertwinerKind kind, long a, long b,
                                   CScalar lambda, const ModelParams& params);

// Face weight with corners a (NW), b (NE), c (SE), d (SW). Zero unless all
// four cyclically consecutive pairs are adjacent; the admissible cases are
//   c = a +- 2            -> sinh(lambda + eta)
//   c = a, d = 2a - b     -> sinh(lambda) sinh(b_v eta) / sinh(a_v eta)
//   c = a, d = b          -> sinh(eta) sinh(a_v eta - (b-a) lambda) / sinh(a_v eta)
// with a_v = x0 + a, b_v = x0 + b. Throws SingularHeight when a denominator
// degenerates. face_weight_cyclic matches the patterns mod n instead.
CScalar face_weight(long a, long b, long c, long d, CScalar lambda,
                    const ModelParams& params);
CScalar face_weight_cyclic(long a, long b, long c, long d, CScalar lambda,
                           const ModelParams& params, long n);

// R-matrix / intertwiner exchange relation. direction 1 is the vector form
// (R acting on psi (x) psi), direction 2 the covector form (psi* (x) psi*
// acting on R); `mid` is the summed-over inner height on the opposite side:
// the NE corner b for direction 1, the SW corner d for direction 2.
CheckResult check_face_intertwining(int direction, long a, long mid, long c,
                                    CScalar l1, CScalar l2, const ModelParams& params);

// Inversion relations, worst case over the admissible neighbours of a:
//   'a'  psi*(a,c) . psi(a,b)   = delta_bc
//   'b'  sum_b psi(a,b) psi*(a,b) = identity
//   'c'  psi'(c,a) . psi(b,a)   = delta_bc
//   'd'  sum_b psi(b,a) psi'(b,a) = identity
CheckResult check_inversions(char which, long a, CScalar lambda, const ModelParams& params);

// Face-form Yang-Baxter equation on the admissible hexagon (a..f): both
// sides summed over the interior height g.
CheckResult check_sos_ybe(long a, long b, long c, long d, long e, long f,
                          CScalar l1, CScalar l2, CScalar l3, const ModelParams& params);

// Height lattice with n_cols x n_rows faces. Corner (i, j) has i in [0,C],
// j in [0,R]; the boundary corners are fixed by `perimeter`, listed
// clockwise from the NW corner: top row left to right (C+1 values), east
// side j = 1..R, bottom row right to left (C values), west side j = R-1..1.
struct SosLatticeSpec {
  int n_cols = 1;
  int n_rows = 1;
  std::vector<CScalar> col_lambdas;
  std::vector<CScalar> row_lambdas;
  std::vector<long> perimeter;
  bool cyclic = false;
  long n = 0;
  ModelParams params;

  int face_count() const { return n_cols * n_rows; }
  void validate() const;  // GeometryError / SizeError / ArgError
  std::map<std::pair<int, int>, long> corner_heights() const;
};

std::map<std::pair<int, int>, long> corner_heights_from_perimeter(
    int n_cols, int n_rows, const std::vector<long>& perimeter);

// Seeded closed admissible boundary walk (equal numbers of +1/-1 steps in
// shuffled order), returned in the SosLatticeSpec::perimeter convention.
std::vector<long> random_boundary_walk(int n_cols, int n_rows, long k0,
                                       std::uint64_t seed);

struct SosZResult {
  CScalar by_enumeration{};
  std::optional<CScalar> by_transfer;
  CScalar value{};
};

// Sum over interior heights of the product of face weights, by depth-first
// enumeration cross-checked against a row-transfer contraction. Lattices
// of more than 16 faces are rejected with SizeError; disagreement between
// the strategies raises InternalInconsistency.
SosZResult sos_partition_function(const SosLatticeSpec& spec);

// Boundary dressing of a spin lattice by a height walk: top and east
// external edges carry psi components, bottom and west carry psi_star.
// When anchor_gap >= 0 the bottom edges at columns >= anchor_gap use
// psi_prime instead (the variant used when a defect tail enters there).
VertexLatticeSpec dressed_vertex_spec(const VertexLatticeSpec& base,
                                      const std::vector<long>& perimeter,
                                      const ModelParams& params, long anchor_gap = -1);

// Equality of the height-dressed spin partition function with the pure
// face-weight partition function over the same boundary walk.
CheckResult check_partition_correspondence(const VertexLatticeSpec& vspec,
                                           const std::vector<long>& perimeter,
                                           const ModelParams& params);

std::string sos_spec_to_json(const SosLatticeSpec& spec);
SosLatticeSpec sos_spec_from_json(const std::string& text);

}  // namespace vertexlab
