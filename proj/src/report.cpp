#include "vertexlab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vertexlab/csos.hpp"
#include "vertexlab/embedding.hpp"
#include "vertexlab/errors.hpp"
#include "vertexlab/sos_currents.hpp"
#include "vertexlab/sos_weights.hpp"
#include "vertexlab/vertex_lattice.hpp"
#include "vertexlab/vertex_weights.hpp"

namespace vertexlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_g(double x, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

std::string fmt_c(CScalar z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.4g%+.4gi", z.real(), z.imag());
  return buf;
}

struct Budget {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double limit = 300.0;
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  bool expired() const { return elapsed() > limit; }
};

// Accumulates rows with canonical per-family counters and applies the
// configured tolerance override.
struct Collector {
  std::optional<double> tol_override;
  std::vector<ReportRow> rows;
  std::vector<MeasurementRow> measurements;
  std::map<std::string, int> counters;

  std::string next_id(const std::string& family) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", counters[family]++);
    return family + "/" + buf;
  }

  void add(const std::string& family, const std::string& params, const CheckResult& r) {
    add_residual(family, params, r.residual, r.tol);
  }

  void add_residual(const std::string& family, const std::string& params, double residual,
                    double tol) {
    const double eff = tol_override.value_or(tol);
    rows.push_back({next_id(family), params, residual, eff, residual <= eff});
  }

  void measure(const std::string& family, const std::string& params, double value) {
    measurements.push_back({next_id(family), params, value});
  }
};

int pick_int(ParamSampler& s, int lo, int hi) {
  const int span = hi - lo + 1;
  int k = lo + static_cast<int>(std::floor(s.uniform01() * span));
  return std::min(k, hi);
}

long pick_step(ParamSampler& s) { return s.uniform01() < 0.5 ? -1L : 1L; }

const char* flavor_tag(int i, bool barred) {
  static const char* names[4] = {"f0", "f1", "fbar0", "fbar1"};
  return names[(barred ? 2 : 0) + i];
}

GeneratorId flavor_gen(int i, bool barred) {
  return GeneratorId{barred ? GenKind::f_bar : GenKind::f, i};
}

ParamSampler make_sampler(const SuiteConfig& config) {
  if (config.etas.empty()) return ParamSampler(config.seed);
  return ParamSampler(config.seed, ComplexBox{}, config.etas);
}

void require_size(const SuiteConfig& config) {
  const bool ok = (config.n_cols == 3 && config.n_rows == 3) ||
                  (config.n_cols == 4 && config.n_rows == 4);
  if (!ok) throw ArgError("lattice suites support sizes 3x3 and 4x4");
}

// Seeded-lambda spin lattice with the mixed boundary that opens the
// insertion sectors +1, 0, -1 (so current sums are non-vacuous).
VertexLatticeSpec seeded_vertex_spec(int size, ParamSampler& s) {
  std::vector<CScalar> cols, rows;
  for (int k = 0; k < size; ++k) cols.push_back(s.sample().lambda);
  for (int k = 0; k < size; ++k) rows.push_back(s.sample().lambda);
  VertexLatticeSpec spec = VertexLatticeSpec::uniform(size, size, cols, rows);
  if (size == 3) {
    spec.top = {BoundaryTerm::sum(), BoundaryTerm::plus(), BoundaryTerm::minus()};
    spec.bottom = {BoundaryTerm::plus(), BoundaryTerm::minus(), BoundaryTerm::sum()};
    spec.west = {BoundaryTerm::plus(), BoundaryTerm::minus(), BoundaryTerm::minus()};
    spec.east = {BoundaryTerm::minus(), BoundaryTerm::plus(), BoundaryTerm::minus()};
  } else {
    spec.top = {BoundaryTerm::sum(), BoundaryTerm::plus(), BoundaryTerm::minus(),
                BoundaryTerm::minus()};
    spec.bottom = {BoundaryTerm::plus(), BoundaryTerm::minus(), BoundaryTerm::sum(),
                   BoundaryTerm::plus()};
    spec.west = {BoundaryTerm::minus(), BoundaryTerm::minus(), BoundaryTerm::plus(),
                 BoundaryTerm::minus()};
    spec.east = {BoundaryTerm::minus(), BoundaryTerm::plus(), BoundaryTerm::minus(),
                 BoundaryTerm::plus()};
  }
  return spec;
}

SosLatticeSpec seeded_sos_spec(int size, const SuiteConfig& config, ParamSampler& s,
                               const ModelParams& params) {
  SosLatticeSpec spec;
  spec.n_cols = size;
  spec.n_rows = size;
  for (int k = 0; k < size; ++k) spec.col_lambdas.push_back(s.sample().lambda);
  for (int k = 0; k < size; ++k) spec.row_lambdas.push_back(s.sample().lambda);
  spec.perimeter = random_boundary_walk(size, size, 0, config.seed * 2654435761u + size);
  spec.params = params;
  return spec;
}

std::string lattice_digest(const VertexLatticeSpec& spec, const ModelParams& p) {
  std::string d = "e=" + fmt_c(p.eta);
  d += ";l0=" + fmt_c(spec.col_lambdas.front()) + ";r0=" + fmt_c(spec.row_lambdas.front());
  return d;
}

std::string sos_digest(const SosLatticeSpec& spec) {
  std::string d = "e=" + fmt_c(spec.params.eta);
  d += ";l0=" + fmt_c(spec.col_lambdas.front()) + ";k0=";
  d += std::to_string(spec.perimeter.front());
  return d;
}

// ---------------------------------------------------------------- suites --

void suite_vertex_identities(const SuiteConfig& config, Collector& out, Budget& budget,
                             bool& truncated) {
  ParamSampler sampler = make_sampler(config);
  for (int k = 0; k < 100; ++k) {
    if (budget.expired()) {
      truncated = true;
      return;
    }
    const SampledPoint p1 = sampler.sample();
    const SampledPoint p2 = sampler.sample();
    const SampledPoint p3 = sampler.sample();
    const ModelParams params{p1.eta, p1.x0, {}};
    const std::string base = "l=" + fmt_c(p1.lambda) + ";e=" + fmt_c(p1.eta);
    const std::string two = base + ";l2=" + fmt_c(p2.lambda);
    out.add("ybe", two + ";l3=" + fmt_c(p3.lambda),
            check_ybe(p1.lambda, p2.lambda, p3.lambda, params));
    out.add("unitarity", base, check_unitarity(p1.lambda, params));
    out.add("crossing", base, check_crossing(p1.lambda, params));
    out.add("defining-relations", base, check_defining_relations(p1.lambda, params));
    out.add("intertwining", two, check_vertex_intertwining(p1.lambda, p2.lambda, params));
    out.add("winding-relation", base, check_winding_relation(p1.lambda, params));
    out.add("antipode", base, check_antipode_consistency(p1.lambda, params));
  }
}

void suite_sos_identities(const SuiteConfig& config, Collector& out, Budget& budget,
                          bool& truncated) {
  ParamSampler sampler = make_sampler(config);
  for (int k = 0; k < 100; ++k) {
    if (budget.expired()) {
      truncated = true;
      return;
    }
    const SampledPoint p1 = sampler.sample();
    const SampledPoint p2 = sampler.sample();
    const SampledPoint p3 = sampler.sample();
    const ModelParams params{p1.eta, p1.x0, {}};
    const long a = pick_int(sampler, -3, 3);
    const long s1 = pick_step(sampler), s2 = pick_step(sampler), s3 = pick_step(sampler);
    const std::string base = "l=" + fmt_c(p1.lambda) + ";e=" + fmt_c(p1.eta) +
                             ";a=" + std::to_string(a);

    for (int dir : {1, 2}) {
      out.add("face-intertwining", base + ";dir=" + std::to_string(dir),
              check_face_intertwining(dir, a, a + s1, a + s1 + s2, p1.lambda, p2.lambda,
                                      params));
    }
    for (char which : {'a', 'b', 'c', 'd'}) {
      out.add(std::string("inversion-") + which, base,
              check_inversions(which, a, p1.lambda, params));
    }
    {
      // Admissible hexagon: one three-step walk, the return side uses the
      // same steps in a different order so the two walks close.
      const long b = a + s1, c = b + s2, d = c + s3;
      const long f = a + s3, e = f + s1;
      out.add("face-ybe", base,
              check_sos_ybe(a, b, c, d, e, f, p1.lambda, p2.lambda, p3.lambda, params));
    }
    for (int i : {0, 1}) {
      for (bool barred : {false, true}) {
        out.add(std::string("triangle-closed-form-") + flavor_tag(i, barred), base,
                check_dressed_f_consistency(i, barred, a, a + s1, a + s2, p1.lambda, params));
      }
    }
    {
      const long b = a + s1;
      const long d = a + (s2 + s3 == 0 ? 0 : s2 + s3);  // equal or two away
      const long c = d + s1;
      for (int i : {0, 1}) {
        for (char sign : {'-', '+'}) {
          out.add(std::string("square-closed-form-") + (sign == '-' ? "minus" : "plus") +
                      std::to_string(i),
                  base, check_dressed_t_consistency(i, sign, a, b, c, d, p1.lambda, params));
        }
        const double symm = residual(dressed_t(i, '+', a, b, c, d, params),
                                     dressed_t(i, '-', b, a, d, c, params));
        out.add_residual("square-symmetry-" + std::to_string(i), base, symm, 1e-12);
      }
    }
    {
      const long b = a + s1, c = b + s2;
      const long d = c + (s3 + s1 == 0 ? 0 : s3 + s1);
      const long e = d + s2, f = e + s3;
      const std::array<long, 6> hex{a, b, c, d, e, f};
      for (int i : {0, 1}) {
        for (char sign : {'-', '+'}) {
          out.add(std::string("tail-ybe-") + (sign == '-' ? "minus" : "plus") +
                      std::to_string(i),
                  base, check_tail_ybe(i, sign, hex, p1.lambda, p2.lambda, params));
        }
      }
    }
    for (int which : {1, 2, 3, 4}) {
      const long d = a + (s1 + s2 == 0 ? 0 : s1 + s2);
      for (int i : {0, 1}) {
        out.add("square-inversion-" + std::to_string(which) + "-" + std::to_string(i), base,
                check_sos_inversion(which, i, a, a + s1, a + s2, d, p1.lambda, params));
        out.add("square-commutation-" + std::to_string(which) + "-" + std::to_string(i), base,
                check_sos_commutation(which, i, a, a + s1, a + s2, p1.lambda, params));
      }
    }
    {
      const long b = a + s1, c = b + s2, d = b + s3;
      const long e = (std::labs(d - s2 - a) == 1) ? d - s2 : d + s2;
      const std::array<long, 5> heights{a, b, c, d, e};
      for (int i : {0, 1}) {
        for (bool barred : {false, true}) {
          out.add(std::string("four-term-") + flavor_tag(i, barred), base,
                  check_sos_four_term(i, barred, heights, p1.lambda, p2.lambda, params));
        }
      }
    }
  }
}

void suite_vertex_conservation(const SuiteConfig& config, Collector& out, Budget& budget,
                               bool& truncated) {
  require_size(config);
  ParamSampler sampler = make_sampler(config);
  const SampledPoint pt = sampler.sample();
  const ModelParams params{pt.eta, pt.x0, {}};
  const int size = config.n_cols;
  VertexLatticeSpec spec = seeded_vertex_spec(size, sampler);
  const std::string digest = lattice_digest(spec, params);
  const std::pair<int, int> anchor{size, size - 1};

  for (int r = 1; r + 1 < size; ++r) {
    for (int c = 1; c + 1 < size; ++c) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      for (int i : {0, 1}) {
        for (bool barred : {false, true}) {
          const std::string fam = "conservation/v" + std::to_string(r) + "-" +
                                  std::to_string(c) + "-" + flavor_tag(i, barred);
          out.add(fam, digest,
                  check_plaquette_conservation(spec, r, c, anchor, flavor_gen(i, barred),
                                               params));
        }
      }
    }
  }

  const TailPath homo_a = size == 3 ? TailPath{{3, 2}, "LU", EdgeRef{'v', 1, 1}}
                                    : TailPath{{4, 2}, "LL", EdgeRef{'v', 1, 2}};
  const TailPath homo_b = size == 3 ? TailPath{{3, 2}, "UL", EdgeRef{'v', 1, 1}}
                                    : TailPath{{4, 2}, "ULDL", EdgeRef{'v', 1, 2}};
  for (int i : {0, 1}) {
    for (bool barred : {false, true}) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      const GeneratorId gen = flavor_gen(i, barred);
      out.add(std::string("homotopy-") + flavor_tag(i, barred), digest,
              check_path_independence(spec, homo_a, homo_b, gen, params));
      out.add(std::string("tail-eta-zero-") + flavor_tag(i, barred), digest,
              check_zero_eta_tail(spec, homo_a, gen, params));
    }
  }

  // Winding always runs on the fixed 4x4 geometry: one anticlockwise and one
  // clockwise loop against their straight same-anchor references.
  VertexLatticeSpec big = size == 4 ? spec : seeded_vertex_spec(4, sampler);
  const TailPath ccw{{3, 4}, "UUULLDDRU", EdgeRef{'v', 1, 2}};
  const TailPath ccw_ref{{3, 4}, "UUL", EdgeRef{'v', 1, 2}};
  const TailPath cw{{1, 4}, "UUURRDDLU", EdgeRef{'v', 1, 2}};
  const TailPath cw_ref{{1, 4}, "URU", EdgeRef{'v', 1, 2}};
  for (int i : {0, 1}) {
    for (bool barred : {false, true}) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      const GeneratorId gen = flavor_gen(i, barred);
      out.add(std::string("unwind-ccw-") + flavor_tag(i, barred), digest,
              check_unwind(big, ccw, ccw_ref, gen, params));
      out.add(std::string("unwind-cw-") + flavor_tag(i, barred), digest,
              check_unwind(big, cw, cw_ref, gen, params));
    }
  }
}

void suite_vertex_parafermion(const SuiteConfig& config, Collector& out, Budget& budget,
                              bool& truncated) {
  require_size(config);
  ParamSampler sampler = make_sampler(config);
  const SampledPoint pt = sampler.sample();
  const ModelParams params{pt.eta, pt.x0, {}};
  const int size = config.n_cols;
  VertexLatticeSpec spec = seeded_vertex_spec(size, sampler);
  const std::string digest = lattice_digest(spec, params);
  const std::pair<int, int> anchor{size, size - 1};

  for (int r = 1; r + 1 < size; ++r) {
    for (int c = 1; c + 1 < size; ++c) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      for (int i : {0, 1}) {
        for (bool barred : {false, true}) {
          const ContourCheck cc = check_vertex_contour(spec, r, c, anchor, i, barred, params);
          out.add("contour/v" + std::to_string(r) + "-" + std::to_string(c) + "-" +
                      flavor_tag(i, barred),
                  digest + ";scale=" + fmt_g(cc.row.scale), cc.check);
        }
      }
    }
  }

  for (ParafermionKind kind : {ParafermionKind::vertex_phi, ParafermionKind::vertex_phi_bar,
                               ParafermionKind::sos_phi, ParafermionKind::sos_phi_bar}) {
    for (int i : {0, 1}) {
      const Parafermion pf = make_parafermion(kind, i, params);
      for (int k = 0; k < 3; ++k) {
        const SampledPoint q = sampler.sample();
        const CScalar current{sampler.uniform01() + 0.2, sampler.uniform01() - 0.5};
        out.add("parafermion-consistency/" + flavor_name(kind, i),
                "l=" + fmt_c(q.lambda) + ";cur=" + fmt_c(current),
                check_parafermion_consistency(pf, q.lambda, current, params));
      }
    }
  }

  // Compactified-boson bookkeeping: the dimension gap of each flavor charge
  // equals e*m exactly, and matches the parafermion spin up to the barred
  // orientation flip.
  for (int i : {0, 1}) {
    for (bool barred : {false, true}) {
      const FreeBosonCharge charge = vertex_boson_charge(i, barred, params);
      const auto [delta, delta_bar] = boson_dimensions(charge);
      const CScalar gap = delta - delta_bar;
      const CScalar em = charge.e * static_cast<double>(charge.m);
      const Parafermion pf = make_parafermion(
          barred ? ParafermionKind::vertex_phi_bar : ParafermionKind::vertex_phi, i, params);
      const CScalar want = barred ? -pf.spin : pf.spin;
      const std::string tag = flavor_tag(i, barred);
      out.add_residual("boson-dimension-gap-" + tag, "em=" + fmt_c(em),
                       std::abs(gap - em) / (1.0 + std::abs(em)), 1e-12);
      out.add_residual("boson-spin-match-" + tag, "spin=" + fmt_c(pf.spin),
                       std::abs(gap - want) / (1.0 + std::abs(want)), 1e-12);
    }
  }

  for (int fi = 1; fi < size; ++fi) {
    for (int fj = 1; fj < size; ++fj) {
      const double mag =
          face_combination_magnitude(spec, fi, fj, anchor, flavor_gen(0, false), params);
      out.measure("face-combination/f" + std::to_string(fi) + "-" + std::to_string(fj),
                  digest, mag);
    }
  }
}

void suite_sos_currents(const SuiteConfig& config, Collector& out, Budget& budget,
                        bool& truncated) {
  require_size(config);
  ParamSampler sampler = make_sampler(config);
  const SampledPoint pt = sampler.sample();
  const ModelParams params{pt.eta, pt.x0, {}};
  const int size = config.n_cols;
  SosLatticeSpec spec = seeded_sos_spec(size, config, sampler, params);
  const std::string digest = sos_digest(spec);
  const std::pair<int, int> anchor{2, size};

  for (int r = 1; r + 1 < size; ++r) {
    for (int c = 1; c + 1 < size; ++c) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      for (int i : {0, 1}) {
        for (bool barred : {false, true}) {
          const std::string vtx = "v" + std::to_string(r) + "-" + std::to_string(c) + "-" +
                                  flavor_tag(i, barred);
          out.add("sos-conservation/" + vtx, digest,
                  check_sos_plaquette(spec, r, c, anchor, i, barred));
          const ContourCheck cc = check_sos_contour(spec, r, c, anchor, i, barred);
          out.add("sos-contour/" + vtx, digest + ";scale=" + fmt_g(cc.row.scale), cc.check);
        }
      }
    }
  }

  // Any interior detour on the 3x3 grid would cross the insertion edge
  // itself, so the path-independence family always runs on a 4x4 lattice.
  const SosLatticeSpec big = size == 4 ? spec : seeded_sos_spec(4, config, sampler, params);
  const TailPath straight_big{{2, 4}, "UU", EdgeRef{'v', 1, 2}};
  const TailPath detour_big{{2, 4}, "URUL", EdgeRef{'v', 1, 2}};
  for (int i : {0, 1}) {
    for (bool barred : {false, true}) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      const auto a = sos_current_expectation({big, straight_big, i, barred});
      const auto b = sos_current_expectation({big, detour_big, i, barred});
      out.add_residual(std::string("seam-path-independence-") + flavor_tag(i, barred),
                       sos_digest(big), residual(a.raw, b.raw), 1e-10);
    }
  }

  const TailPath straight{{2, size}, size == 3 ? "UU" : "UUU", EdgeRef{'v', 1, 1}};
  const J0LocalityReport rep = check_j0_locality(spec, straight);
  out.add("j0-cross-seam-collapse", digest, rep.cross_seam_collapse);
  out.add("j0-telescoping", digest, rep.telescoping);
  out.add("j0-local-match", digest, rep.local_match);
}

void suite_equivalence(const SuiteConfig& config, Collector& out, Budget& budget,
                       bool& truncated) {
  ParamSampler sampler = make_sampler(config);
  const SampledPoint pt = sampler.sample();
  const ModelParams params{pt.eta, pt.x0, {}};

  for (int size : {2, 3}) {
    for (int k = 0; k < 3; ++k) {
      if (budget.expired()) {
        truncated = true;
        return;
      }
      std::vector<CScalar> cols, rows;
      for (int j = 0; j < size; ++j) cols.push_back(sampler.sample().lambda);
      for (int j = 0; j < size; ++j) rows.push_back(sampler.sample().lambda);
      const VertexLatticeSpec vspec = VertexLatticeSpec::uniform(size, size, cols, rows);
      const auto walk = random_boundary_walk(size, size, 0, config.seed + 31 * k + size);
      out.add("partition-correspondence/" + std::to_string(size) + "x" + std::to_string(size),
              "e=" + fmt_c(params.eta) + ";k=" + std::to_string(k),
              check_partition_correspondence(vspec, walk, params));
    }
  }

  SosLatticeSpec small = seeded_sos_spec(3, config, sampler, params);
  const std::string digest = sos_digest(small);
  const TailPath vert{{2, 3}, "UU", EdgeRef{'v', 1, 1}};
  const TailPath horiz{{2, 3}, "UL", EdgeRef{'h', 1, 1}};
  for (const auto& [name, tail] :
       std::initializer_list<std::pair<const char*, const TailPath*>>{{"vert", &vert},
                                                                      {"horiz", &horiz}}) {
    for (int i : {0, 1}) {
      for (bool barred : {false, true}) {
        if (budget.expired()) {
          truncated = true;
          return;
        }
        out.add(std::string("equivalence/M0-") + name + "-" + flavor_tag(i, barred), digest,
                check_vertex_sos_equivalence({small, *tail, i, barred}));
      }
    }
  }

  // Wound seams need the 4x4 geometry; the equality includes the
  // exp(-2 M mu_i eta) factor for windings +1 and -1.
  SosLatticeSpec big = seeded_sos_spec(4, config, sampler, params);
  const TailPath ccw{{3, 4}, "UUULLDDRU", EdgeRef{'v', 1, 2}};
  const TailPath cw{{1, 4}, "UUURRDDLU", EdgeRef{'v', 1, 2}};
  for (const auto& [name, tail] :
       std::initializer_list<std::pair<const char*, const TailPath*>>{{"Mplus", &ccw},
                                                                      {"Mminus", &cw}}) {
    for (int i : {0, 1}) {
      for (bool barred : {false, true}) {
        if (budget.expired()) {
          truncated = true;
          return;
        }
        out.add(std::string("equivalence/") + name + "-" + flavor_tag(i, barred),
                sos_digest(big),
                check_vertex_sos_equivalence({big, *tail, i, barred}));
      }
    }
  }
}

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

void suite_csos_spectrum(const SuiteConfig& config, Collector& out, Budget& budget,
                         bool& truncated) {
  ParamSampler sampler = make_sampler(config);
  std::vector<std::pair<long, long>> pairs = config.pairs;
  if (pairs.empty()) pairs = {{4, 3}, {5, 4}, {5, 2}};

  for (const auto& [p, pprime] : pairs) {
    if (budget.expired()) {
      truncated = true;
      return;
    }
    const CsosParams csos = make_csos(p, pprime);
    const std::string tag =
        "/p" + std::to_string(p) + "-" + std::to_string(pprime);
    const std::string base = "l=" + std::to_string(csos.ell) + ";n=" + std::to_string(csos.n);
    const CScalar x0{0.37 + 0.02 * sampler.uniform01(), 0.11};
    const CScalar lambda = sampler.sample().lambda;

    const double derive_dev = std::abs(
        2.0 * static_cast<double>(csos.ell) / static_cast<double>(csos.n) -
        static_cast<double>(p - pprime) / static_cast<double>(p));
    out.add_residual("derive" + tag, base, derive_dev, 1e-15);

    const Rational c = central_charge(csos);
    const double c_num = 1.0 - 6.0 * static_cast<double>((p - pprime) * (p - pprime)) /
                                   static_cast<double>(p * pprime);
    out.add_residual("central-charge" + tag, "c=" + rat_str(c),
                     std::abs(boost::rational_cast<double>(c) - c_num), 1e-13);
    out.measure("value/central-charge" + tag, "c=" + rat_str(c),
                boost::rational_cast<double>(c));

    const Rational ceff = effective_central_charge(csos);
    out.add_residual("effective-central-charge" + tag, "ceff=" + rat_str(ceff),
                     std::abs(boost::rational_cast<double>(ceff) - 1.0), 0.0);

    const Rational h13 = conformal_dimensions(csos, Rational(1), 3).first;
    out.add("spin-identification" + tag, "h13=" + rat_str(h13),
            check_spin_identification(csos));
    out.measure("value/h13" + tag, "h13=" + rat_str(h13),
                boost::rational_cast<double>(h13));

    out.add("cyclic-periodicity" + tag, base + ";x0=" + fmt_c(x0),
            check_cyclic_periodicity(csos, x0, lambda));

    for (int site : {1, 2, 3}) {
      out.add("tl-square" + tag + "-L4s" + std::to_string(site), base,
              check_tl_square(csos, 4, site, x0));
    }
    out.add("tl-braid" + tag + "-L4s12", base, check_tl_braid(csos, 4, 1, 2, x0));
    out.add("tl-braid" + tag + "-L4s21", base, check_tl_braid(csos, 4, 2, 1, x0));
    out.add("tl-commute" + tag + "-L5s13", base, check_tl_commute(csos, 5, 1, 3, x0));

    const Rational lead = torus_leading_exponent(csos);
    const Rational want = (c - Rational(1)) / Rational(6);
    out.add_residual("torus-exponent" + tag, "x=" + rat_str(lead),
                     std::abs(boost::rational_cast<double>(lead - want)), 0.0);
    out.measure("value/torus-exponent" + tag, "x=" + rat_str(lead),
                boost::rational_cast<double>(lead));

    const double z8 = torus_character(csos, 0.1, 8);
    const double z16 = torus_character(csos, 0.1, 16);
    out.add_residual("torus-convergence" + tag, "q=0.1",
                     std::abs(z8 - z16) / (1.0 + std::abs(z16)), 1e-8);

    const auto table = spectrum_table(csos, 2, 2);
    double worst = 0.0;
    for (const auto& entry : table) {
      const Rational gap = entry.h - entry.hbar + entry.e * Rational(entry.m);
      worst = std::max(worst, std::abs(boost::rational_cast<double>(gap)));
    }
    out.add_residual("spectrum-spin-integrality" + tag,
                     "rows=" + std::to_string(table.size()), worst, 0.0);
    out.measure("value/spectrum-rows" + tag, base, static_cast<double>(table.size()));
  }
}

void suite_rsos_probe(const SuiteConfig& config, Collector& out, Budget& budget,
                      bool& truncated) {
  std::vector<long> ps;
  if (config.pairs.empty()) {
    ps = {3, 4, 5};
  } else {
    for (const auto& pr : config.pairs) ps.push_back(pr.first);
  }
  for (long p : ps) {
    if (budget.expired()) {
      truncated = true;
      return;
    }
    const RsosProbeReport rep = rsos_incompatibility_probe(static_cast<int>(p));
    const std::string tag = "/p" + std::to_string(p);
    out.add_residual("pure-partition-restricts" + tag,
                     "scanned=" + std::to_string(rep.configs_scanned),
                     rep.pure_partition_restricts ? 0.0 : 1.0, 0.5);

    bool witness_ok = rep.witness.has_value();
    std::string wdigest = "none";
    if (rep.witness) {
      const RsosWitness& w = *rep.witness;
      witness_ok = witness_ok && w.order <= 0 && w.magnitude > 1e-6 && !w.out_of_range.empty();
      for (long h : w.out_of_range) witness_ok = witness_ok && (h < 1 || h > p);
      wdigest = "order=" + std::to_string(w.order) + ";mag=" + fmt_g(w.magnitude) +
                ";heights=" + std::to_string(w.out_of_range.size());
      out.measure("witness-magnitude" + tag, wdigest, w.magnitude);
      out.measure("witness-order" + tag, wdigest, static_cast<double>(w.order));
    }
    out.add_residual("witness-exists" + tag, wdigest, witness_ok ? 0.0 : 1.0, 0.5);
    out.measure("configs-scanned" + tag, "p=" + std::to_string(p),
                static_cast<double>(rep.configs_scanned));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "vertex-identities", "vertex-conservation", "vertex-parafermion", "sos-identities",
      "sos-currents",      "equivalence",         "csos-spectrum",      "rsos-probe"};
  return names;
}

SuiteReport run(const SuiteConfig& config) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), config.suite) == names.end()) {
    throw ArgError("unknown suite: " + config.suite);
  }
  if (config.format != "json" && config.format != "csv") {
    throw ArgError("unknown format: " + config.format);
  }

  Budget budget;
  budget.limit = config.budget_seconds;
  Collector out;
  out.tol_override = config.tol_override;
  bool truncated = false;

  if (config.suite == "vertex-identities") {
    suite_vertex_identities(config, out, budget, truncated);
  } else if (config.suite == "vertex-conservation") {
    suite_vertex_conservation(config, out, budget, truncated);
  } else if (config.suite == "vertex-parafermion") {
    suite_vertex_parafermion(config, out, budget, truncated);
  } else if (config.suite == "sos-identities") {
    suite_sos_identities(config, out, budget, truncated);
  } else if (config.suite == "sos-currents") {
    suite_sos_currents(config, out, budget, truncated);
  } else if (config.suite == "equivalence") {
    suite_equivalence(config, out, budget, truncated);
  } else if (config.suite == "csos-spectrum") {
    suite_csos_spectrum(config, out, budget, truncated);
  } else {
    suite_rsos_probe(config, out, budget, truncated);
  }

  SuiteReport report;
  report.suite = config.suite;
  report.seed = config.seed;
  report.truncated = truncated;
  report.rows = std::move(out.rows);
  report.measurements = std::move(out.measurements);
  std::sort(report.rows.begin(), report.rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return a.id < b.id; });
  std::sort(report.measurements.begin(), report.measurements.end(),
            [](const MeasurementRow& a, const MeasurementRow& b) { return a.id < b.id; });
  report.count = report.rows.size();
  report.all_pass = !report.rows.empty();
  for (const auto& row : report.rows) {
    report.max_residual = std::max(report.max_residual, row.residual);
    report.all_pass = report.all_pass && row.pass;
  }
  report.wall_seconds = budget.elapsed();
  return report;
}

std::string report_to_json(const SuiteReport& report) {
  ordered_json doc;
  doc["format"] = "vertexlab-report-v1";
  doc["suite"] = report.suite;
  doc["seed"] = report.seed;
  doc["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["id"] = row.id;
    r["params"] = row.params;
    r["residual"] = row.residual;
    r["tol"] = row.tol;
    r["pass"] = row.pass;
    doc["rows"].push_back(std::move(r));
  }
  doc["measurements"] = ordered_json::array();
  for (const auto& m : report.measurements) {
    ordered_json r;
    r["id"] = m.id;
    r["params"] = m.params;
    r["value"] = m.value;
    doc["measurements"].push_back(std::move(r));
  }
  ordered_json summary;
  summary["max_residual"] = report.max_residual;
  summary["count"] = report.count;
  summary["all_pass"] = report.all_pass;
  summary["truncated"] = report.truncated;
  summary["wall_time"] = nullptr;  // measured time goes to stderr, not the file
  doc["summary"] = std::move(summary);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const SuiteReport& report) {
  std::string text = "# suite=" + report.suite + ";seed=" + std::to_string(report.seed) +
                     ";count=" + std::to_string(report.count) +
                     ";all_pass=" + (report.all_pass ? "1" : "0") +
                     ";truncated=" + (report.truncated ? "1" : "0") +
                     ";max_residual=" + fmt_g(report.max_residual, "%.17g") + "\n";
  text += "id,params,kind,value,tol,pass\n";
  for (const auto& row : report.rows) {
    text += row.id + "," + row.params + ",check," + fmt_g(row.residual, "%.17g") + "," +
            fmt_g(row.tol, "%.17g") + "," + (row.pass ? "true" : "false") + "\n";
  }
  for (const auto& m : report.measurements) {
    text += m.id + "," + m.params + ",measure," + fmt_g(m.value, "%.17g") + ",,\n";
  }
  return text;
}

std::string emit_table(const std::string& kind, const SuiteConfig& config) {
  if (config.format != "json" && config.format != "csv") {
    throw ArgError("unknown format: " + config.format);
  }
  if (kind == "spectrum") {
    const auto pair = config.pairs.empty() ? std::pair<long, long>{5, 4} : config.pairs.front();
    const CsosParams csos = make_csos(pair.first, pair.second);
    const auto rows = spectrum_table(csos, 2, 2);
    return config.format == "csv" ? spectrum_to_csv(csos, rows)
                                  : spectrum_to_json(csos, rows);
  }
  if (kind != "weights") throw ArgError("unknown table kind: " + kind);

  // Face weights for every admissible height pattern with the NW corner at
  // offsets -3..3 from the reference, at a fixed spectral parameter.
  const CScalar lambda{0.23, -0.17};
  const ModelParams params{config.etas.empty() ? CScalar{0.41, -0.23} : config.etas.front(),
                           CScalar{0.37, 0.11},
                           {}};
  struct Entry {
    long a, b, c, d;
    CScalar w;
  };
  std::vector<Entry> entries;
  for (long a = -3; a <= 3; ++a) {
    for (long e1 : {1L, -1L}) {
      for (long e2 : {1L, -1L}) {
        std::vector<long> cs = e1 + e2 == 0 ? std::vector<long>{a}
                                            : std::vector<long>{a, a + e1 + e2};
        for (long c : cs) {
          entries.push_back({a, a + e1, c, a + e2,
                             face_weight(a, a + e1, c, a + e2, lambda, params)});
        }
      }
    }
  }
  if (config.format == "csv") {
    std::string text = "a,b,c,d,w_re,w_im\n";
    for (const auto& e : entries) {
      text += std::to_string(e.a) + "," + std::to_string(e.b) + "," + std::to_string(e.c) +
              "," + std::to_string(e.d) + "," + fmt_g(e.w.real(), "%.17g") + "," +
              fmt_g(e.w.imag(), "%.17g") + "\n";
    }
    return text;
  }
  ordered_json doc;
  doc["kind"] = "face-weights";
  doc["lambda"] = {lambda.real(), lambda.imag()};
  doc["eta"] = {params.eta.real(), params.eta.imag()};
  doc["x0"] = {params.x0.real(), params.x0.imag()};
  doc["rows"] = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json r;
    r["a"] = e.a;
    r["b"] = e.b;
    r["c"] = e.c;
    r["d"] = e.d;
    r["w_re"] = e.w.real();
    r["w_im"] = e.w.imag();
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

}  // namespace vertexlab
