#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vertexlab/sos_weights.hpp"
#include "vertexlab/vertex_lattice.hpp"

namespace vertexlab {

// Diagonal charge of the two current families: mu_value(0) = +1,
// mu_value(1) = -1. Any other index is rejected with ArgError.
double mu_value(int i);

// Triangle weight F_i / Fbar_i: the height-dressed step generator with apex
// height a, lower-left height b, lower-right height c. Zero unless
// |a-b| = |a-c| = 1; SingularHeight when the apex sinh factor degenerates.
CScalar dressed_f(int i, bool barred, long a, long b, long c, CScalar lambda,
                  const ModelParams& params);

// Same weight assembled from the covector / site-generator / vector
// contraction; kept as an independent route for consistency checks.
CScalar dressed_f_contraction(int i, bool barred, long a, long b, long c, CScalar lambda,
                              const ModelParams& params);

// Square tail weight T_i^- (sign '-') or T_i^+ (sign '+') with heights
// (a, b) along the top edge and (d, c) along the bottom edge. Zero unless
// |a-b| = 1 and |c-d| = 1; the top and bottom pairs need not be adjacent
// to each other. SingularHeight when the denominator sinh degenerates.
CScalar dressed_t(int i, char sign, long a, long b, long c, long d,
                  const ModelParams& params);

// Generalised tail weight tau_mu^-/tau_mu^+ for an arbitrary complex charge,
// assembled by contraction. dressed_t(i, ...) equals dressed_tau with
// mu = mu_value(i).
CScalar dressed_tau(CScalar mu, char sign, long a, long b, long c, long d, CScalar lambda,
                    const ModelParams& params);

// Closed form against contraction route.
CheckResult check_dressed_f_consistency(int i, bool barred, long a, long b, long c,
                                        CScalar lambda, const ModelParams& params);
CheckResult check_dressed_t_consistency(int i, char sign, long a, long b, long c, long d,
                                        CScalar lambda, const ModelParams& params);

// Exchange of two tail squares across a plain face, for the sign'd tail
// family with charge index i (or an arbitrary charge mu in the generalised
// form). Heights walk the hexagon boundary as (a, b, c, d, e, f).
CheckResult check_tail_ybe(int i, char sign, const std::array<long, 6>& hex, CScalar l1,
                           CScalar l2, const ModelParams& params);
CheckResult check_tail_ybe_generalized(CScalar mu, char sign, const std::array<long, 6>& hex,
                                       CScalar l1, CScalar l2, const ModelParams& params);

// The four tail inversion relations (which = 1..4): summed products of a
// T^+ and a T^- square reduce to delta_{bc}, weighted by a sinh ratio for
// the even-numbered relations.
CheckResult check_sos_inversion(int which, int i, long a, long b, long c, long d,
                                CScalar lambda, const ModelParams& params);

// The four commutation relations between a triangle and a T^+/T^- pair
// (which = 1, 2 for the plain triangle, 3, 4 for the barred one). The
// right-hand side is the same triangle scaled by exp(+-2(1-mu_i) eta).
CheckResult check_sos_commutation(int which, int i, long a, long b, long c, CScalar lambda,
                                  const ModelParams& params);

// Four-term exchange of a triangle with a plain face: heights = (a,b,c,d,e),
// spectral parameters l1 (triangle/tail) and l2 (second triangle), face at
// l1 - l2.
CheckResult check_sos_four_term(int i, bool barred, const std::array<long, 5>& heights,
                                CScalar l1, CScalar l2, const ModelParams& params);

// A current insertion on the height lattice: the tail runs over the same
// dual cells as on the spin side, anchored on the bottom boundary ring, and
// cuts each crossed cell into height regions that may differ across the cut.
struct SosInsertion {
  SosLatticeSpec lattice;
  TailPath tail;
  int current_index = 0;  // 0 or 1
  bool barred = false;
};

std::string sos_insertion_to_json(const SosInsertion& ins);
SosInsertion sos_insertion_from_json(const std::string& text);

struct SosCurrentResult {
  CScalar raw{};    // seam-dressed unnormalized sum
  CScalar z{};      // plain face partition function
  CScalar value{};  // raw / z
};

// Expectation of the height-model current: every face keeps its plain
// weight evaluated on the region heights, every tail crossing contributes a
// T^- (west/north crossings) or T^+ (east/south) square, left-down and
// down-left turns contribute a sinh ratio, and the insertion edge carries
// the triangle. GeometryError on malformed seams (anchor not on the bottom
// ring, tail through other ring cells, split boundary flanks);
// DegenerateNormalization when |z| is below the singularity guard.
SosCurrentResult sos_current_expectation(const SosInsertion& ins);

// Equality of the spin-model current against the height-model current over
// the same boundary walk: the spin sum uses the height-dressed boundary
// (with the prime dressing east of the anchor gap) and must equal
// exp(-2 M mu_i eta) times the seam sum for the plain current, with the
// inverse factor for the barred one; M is the anticlockwise winding.
CheckResult check_vertex_sos_equivalence(const SosInsertion& ins);

// The four insertions around vertex (row, col), all grown from one anchor.
struct PlaquetteCurrents {
  std::array<CScalar, 4> raw{};  // N, W, S, E insertion edges
  CScalar z{};
};

PlaquetteCurrents sos_plaquette_currents(const SosLatticeSpec& lattice, int row, int col,
                                         std::pair<int, int> anchor, int i, bool barred);

// Discrete conservation raw(N) - raw(W) - raw(S) + raw(E) around a vertex;
// residual normalized by the largest of the four sums.
CheckResult check_sos_plaquette(const SosLatticeSpec& lattice, int row, int col,
                                std::pair<int, int> anchor, int i, bool barred);

// Three-part locality statement for the index-0 current: (1) the seam sum
// collapses onto configurations whose cut cells carry equal heights on both
// sides, (2) on those configurations the tail squares telescope to
// sinh(anchor height) / sinh(approach height), (3) the full seam sum equals
// the local triangle formula weighted by that ratio.
struct J0LocalityReport {
  CheckResult cross_seam_collapse;
  CheckResult telescoping;
  CheckResult local_match;
};

J0LocalityReport check_j0_locality(const SosLatticeSpec& lattice, const TailPath& tail);

// Restriction probe at eta = i pi / (p+1), reference height zero. The
// boundary walk stays inside {1..p}; interior heights are enumerated with
// the reference height treated as an infinitesimal regulator, so every
// configuration weight carries a leading power of the regulator (its order)
// and a leading coefficient. Without an insertion every configuration that
// leaves {1..p} has strictly positive order (it vanishes with the
// regulator); with a tail inserted the probe searches for a configuration
// of order <= 0 whose out-of-range height sits on a tail square or the
// triangle. ProbeInconclusive when no witness exists within the search
// bound.
struct RegionHeight {
  int cell_i = 0;
  int cell_j = 0;
  int region = 0;
  long height = 0;
};

struct RsosWitness {
  std::vector<RegionHeight> heights;  // full region assignment
  long order = 0;                     // leading regulator power
  double magnitude = 0.0;             // |leading coefficient|
  int current_index = 0;
  bool barred = false;
  std::vector<long> out_of_range;  // offending heights on tail faces
  std::vector<long> perimeter;     // boundary walk of the witness lattice
};

struct RsosProbeReport {
  int p = 0;
  bool pure_partition_restricts = false;
  long configs_scanned = 0;
  std::optional<RsosWitness> witness;
};

RsosProbeReport rsos_incompatibility_probe(int p);
std::string rsos_probe_to_json(const RsosProbeReport& report);

}  // namespace vertexlab
