#include <cmath>
#include <complex>

#include "doctest.h"
#include "vertexlab/vertex_lattice.hpp"

using namespace vertexlab;

namespace {

const ModelParams kP{CScalar(0.41, -0.23), CScalar(0.37, 0.11), {}};

VertexLatticeSpec spec_3x3() {
  VertexLatticeSpec s = VertexLatticeSpec::uniform(
      3, 3,
      {CScalar(0.31, 0.12), CScalar(0.47, -0.08), CScalar(0.23, 0.21)},
      {CScalar(0.11, -0.19), CScalar(0.68, 0.14), CScalar(0.39, 0.26)});
  // Two summed externals so the insertion sectors +1, 0, -1 are all open.
  s.top = {BoundaryTerm::sum(), BoundaryTerm::plus(), BoundaryTerm::minus()};
  s.bottom = {BoundaryTerm::plus(), BoundaryTerm::minus(), BoundaryTerm::sum()};
  s.west = {BoundaryTerm::plus(), BoundaryTerm::minus(), BoundaryTerm::minus()};
  s.east = {BoundaryTerm::minus(), BoundaryTerm::plus(), BoundaryTerm::minus()};
  return s;
}

VertexLatticeSpec spec_4x4() {
  VertexLatticeSpec s = VertexLatticeSpec::uniform(
      4, 4,
      {CScalar(0.31, 0.12), CScalar(0.47, -0.08), CScalar(0.23, 0.21), CScalar(0.56, 0.02)},
      {CScalar(0.11, -0.19), CScalar(0.68, 0.14), CScalar(0.39, 0.26), CScalar(0.18, 0.07)});
  s.top = {BoundaryTerm::sum(), BoundaryTerm::plus(), BoundaryTerm::minus(),
           BoundaryTerm::minus()};
  s.bottom = {BoundaryTerm::plus(), BoundaryTerm::minus(), BoundaryTerm::sum(),
              BoundaryTerm::plus()};
  s.west = {BoundaryTerm::minus(), BoundaryTerm::minus(), BoundaryTerm::plus(),
            BoundaryTerm::minus()};
  s.east = {BoundaryTerm::minus(), BoundaryTerm::plus(), BoundaryTerm::minus(),
            BoundaryTerm::plus()};
  return s;
}

}  // namespace

TEST_CASE("single vertex partition function is the diagonal weight") {
  const CScalar lc(0.42, 0.17), lr(0.13, -0.21);
  VertexLatticeSpec s = VertexLatticeSpec::uniform(1, 1, {lc}, {lr});
  const ZResult z = partition_function(s, kP);
  CHECK(std::abs(z.by_transfer - std::sinh(lc - lr + kP.eta)) < 1e-14);
  REQUIRE(z.by_enumeration.has_value());
  CHECK(std::abs(*z.by_enumeration - z.by_transfer) < 1e-14);
}

TEST_CASE("all-up partition function factorizes into diagonal weights") {
  const std::vector<CScalar> cols{CScalar(0.42, 0.17), CScalar(0.29, -0.05)};
  const std::vector<CScalar> rows{CScalar(0.13, -0.21), CScalar(0.61, 0.09)};
  VertexLatticeSpec s = VertexLatticeSpec::uniform(2, 2, cols, rows);
  CScalar expect(1.0);
  for (const auto& lc : cols)
    for (const auto& lr : rows) expect *= std::sinh(lc - lr + kP.eta);
  const ZResult z = partition_function(s, kP);
  CHECK(std::abs(z.by_transfer - expect) / std::abs(expect) < 1e-13);
}

TEST_CASE("charge-imbalanced fixed boundary kills the partition function") {
  VertexLatticeSpec s = VertexLatticeSpec::uniform(1, 1, {CScalar(0.4, 0.1)}, {CScalar(0.1, 0.0)});
  s.bottom = {BoundaryTerm::minus()};  // one up in, zero up out elsewhere
  const ZResult z = partition_function(s, kP);
  CHECK(std::abs(z.by_transfer) == 0.0);
}

TEST_CASE("an all-summed single vertex matches a hand enumeration") {
  const CScalar lc(0.37, 0.21), lr(0.05, -0.13);
  VertexLatticeSpec s = VertexLatticeSpec::uniform(1, 1, {lc}, {lr});
  s.top = {BoundaryTerm::sum()};
  s.bottom = {BoundaryTerm::sum()};
  s.west = {BoundaryTerm::sum()};
  s.east = {BoundaryTerm::sum()};
  // Oracle: loop the six ice configurations directly.
  const CScalar lam = lc - lr;
  const CScalar a = std::sinh(lam + kP.eta), b = std::sinh(lam), c = std::sinh(kP.eta);
  const CScalar expect = a + a + b + b + c + c;
  const ZResult z = partition_function(s, kP);
  CHECK(std::abs(z.by_transfer - expect) < 1e-13);
}

TEST_CASE("transfer and enumeration agree on mixed boundaries") {
  VertexLatticeSpec s = spec_3x3();
  const ZResult z = partition_function(s, kP);
  REQUIRE(z.by_enumeration.has_value());
  CHECK(std::abs(z.by_transfer - *z.by_enumeration) < 1e-10 * (1.0 + std::abs(z.by_transfer)));
  CHECK(std::abs(z.by_transfer) > 1e-8);  // the balanced sector is open
}

TEST_CASE("weighted boundary terms contract like vectors") {
  // A weighted edge equal to (1,0) reproduces a fixed up spin; (1,1) a sum.
  VertexLatticeSpec s = spec_3x3();
  VertexLatticeSpec w = s;
  w.top[0] = BoundaryTerm::vec(CScalar(1.0), CScalar(1.0));
  w.west[1] = BoundaryTerm::vec(CScalar(0.0), CScalar(1.0));
  const CScalar z1 = partition_function(w, kP).by_transfer;
  const CScalar z2 = partition_function(s, kP).by_transfer;
  CHECK(std::abs(z1 - z2) < 1e-12 * (1.0 + std::abs(z2)));
}

TEST_CASE("tail validation rejects broken geometry") {
  VertexLatticeSpec s = spec_3x3();
  // Anchor off the ring.
  CHECK_THROWS_AS((TailPath{{2, 2}, "L", EdgeRef{'v', 0, 2}}.validate(s)), GeometryError);
  // Wrong final cell for the insertion edge.
  CHECK_THROWS_AS((TailPath{{3, 2}, "L", EdgeRef{'v', 0, 2}}.validate(s)), GeometryError);
  // External insertion edge.
  CHECK_THROWS_AS((TailPath{{3, 0}, "LL", EdgeRef{'v', 0, 0}}.validate(s)), GeometryError);
  // Revisited cell.
  CHECK_THROWS_AS((TailPath{{3, 2}, "LRL", EdgeRef{'v', 1, 2}}.validate(s)), GeometryError);
  // Crossing the insertion edge.
  CHECK_THROWS_AS((TailPath{{0, 2}, "RR", EdgeRef{'v', 1, 2}}.validate(s)), GeometryError);
  // Valid elbow passes.
  TailPath ok{{3, 2}, "LU", EdgeRef{'v', 1, 1}};
  CHECK_NOTHROW(ok.validate(s));
  CHECK(ok.winding_number() == 0);
}

TEST_CASE("straight tails avoid the insertion edge or fail loudly") {
  VertexLatticeSpec s = spec_3x3();
  const TailPath t = straight_tail({3, 2}, EdgeRef{'v', 1, 1}, s);
  CHECK_NOTHROW(t.validate(s));
  // Due west of a vertical insertion no two-leg route can arrive legally.
  CHECK_THROWS_AS(straight_tail({0, 1}, EdgeRef{'v', 1, 1}, s), GeometryError);
}

TEST_CASE("spiral tails wind once around the insertion edge") {
  const TailPath ccw{{3, 4}, "UUULLDDRU", EdgeRef{'v', 1, 2}};
  const TailPath cw{{1, 4}, "UUURRDDLU", EdgeRef{'v', 1, 2}};
  const TailPath ref{{2, 4}, "UU", EdgeRef{'v', 1, 2}};
  VertexLatticeSpec s = spec_4x4();
  CHECK_NOTHROW(ccw.validate(s));
  CHECK_NOTHROW(cw.validate(s));
  CHECK_NOTHROW(ref.validate(s));
  CHECK(ccw.winding_number() == 1);
  CHECK(cw.winding_number() == -1);
  CHECK(ref.winding_number() == 0);
}

TEST_CASE("current expectation is finite and dual-checked on the 3x3 lattice") {
  VertexLatticeSpec s = spec_3x3();
  const TailPath tail{{3, 2}, "LU", EdgeRef{'v', 1, 1}};
  for (GenKind kind : {GenKind::f, GenKind::f_bar}) {
    for (int index = 0; index < 2; ++index) {
      const CurrentResult r = current_expectation(s, tail, {kind, index}, kP);
      CHECK(std::abs(r.raw) > 1e-8);  // sector is open: non-vacuous
      CHECK(std::abs(r.value - r.raw / r.z) < 1e-14);
    }
  }
  CHECK_THROWS_AS(current_expectation(s, tail, {GenKind::e, 0}, kP), ArgError);
}

TEST_CASE("discrete conservation holds around the centre vertex") {
  VertexLatticeSpec s = spec_3x3();
  for (GenKind kind : {GenKind::f, GenKind::f_bar}) {
    for (int index = 0; index < 2; ++index) {
      const CheckResult r = check_plaquette_conservation(s, 1, 1, {3, 2}, {kind, index}, kP);
      CHECK_MESSAGE(r.pass, "flavor ", index, " residual ", r.residual);
    }
  }
  CHECK_THROWS_AS(check_plaquette_conservation(s, 0, 1, {3, 2}, {GenKind::f, 0}, kP),
                  GeometryError);
}

TEST_CASE("homotopic tails give identical sums") {
  VertexLatticeSpec s = spec_3x3();
  const TailPath a{{3, 2}, "LU", EdgeRef{'v', 1, 1}};
  const TailPath b{{3, 2}, "UL", EdgeRef{'v', 1, 1}};
  for (GenKind kind : {GenKind::f, GenKind::f_bar}) {
    for (int index = 0; index < 2; ++index) {
      const CheckResult r = check_path_independence(s, a, b, {kind, index}, kP);
      CHECK_MESSAGE(r.pass, "residual ", r.residual);
    }
  }
}

TEST_CASE("unwinding a loop costs exactly the diagonal conjugation factor") {
  VertexLatticeSpec s = spec_4x4();
  // Wound and unwound pairs must share the anchor: the anchor is part of
  // the observable, so only same-anchor deformations are exact identities.
  const TailPath ccw{{3, 4}, "UUULLDDRU", EdgeRef{'v', 1, 2}};
  const TailPath ccw_ref{{3, 4}, "UUL", EdgeRef{'v', 1, 2}};
  const TailPath cw{{1, 4}, "UUURRDDLU", EdgeRef{'v', 1, 2}};
  const TailPath cw_ref{{1, 4}, "URU", EdgeRef{'v', 1, 2}};
  CHECK(ccw_ref.winding_number() == 0);
  CHECK(cw_ref.winding_number() == 0);

  for (int index = 0; index < 2; ++index) {
    CHECK(check_unwind(s, ccw, ccw_ref, {GenKind::f, index}, kP).pass);
    CHECK(check_unwind(s, cw, cw_ref, {GenKind::f, index}, kP).pass);
    CHECK(check_unwind(s, ccw, ccw_ref, {GenKind::f_bar, index}, kP).pass);
    CHECK(check_unwind(s, cw, cw_ref, {GenKind::f_bar, index}, kP).pass);
  }

  // The factor truly is exp(-2 eta) per anticlockwise turn: raw ratio check.
  const CScalar s_ccw = current_expectation(s, ccw, {GenKind::f, 0}, kP).raw;
  const CScalar s_ref = current_expectation(s, ccw_ref, {GenKind::f, 0}, kP).raw;
  CHECK(std::abs(s_ccw / s_ref - std::exp(-2.0 * kP.eta)) < 1e-9);
  const CScalar b_ccw = current_expectation(s, ccw, {GenKind::f_bar, 1}, kP).raw;
  const CScalar b_ref = current_expectation(s, ccw_ref, {GenKind::f_bar, 1}, kP).raw;
  CHECK(std::abs(b_ccw / b_ref - std::exp(2.0 * kP.eta)) < 1e-9);

  CHECK_THROWS_AS(check_unwind(s, ccw, cw_ref, {GenKind::f, 0}, kP), GeometryError);
}

TEST_CASE("tail operators become immaterial at zero anisotropy") {
  VertexLatticeSpec s = spec_3x3();
  const TailPath tail{{3, 2}, "LU", EdgeRef{'v', 1, 1}};
  for (int index = 0; index < 2; ++index) {
    CHECK(check_zero_eta_tail(s, tail, {GenKind::f, index}, kP).pass);
  }
}

TEST_CASE("degenerate normalization is reported") {
  VertexLatticeSpec s = VertexLatticeSpec::uniform(
      2, 2, {CScalar(0.4, 0.1), CScalar(0.3, -0.1)}, {CScalar(0.1, 0.05), CScalar(0.2, 0.0)});
  // One net up flows in, so the plain partition function vanishes.
  s.west = {BoundaryTerm::minus(), BoundaryTerm::plus()};
  s.bottom = {BoundaryTerm::plus(), BoundaryTerm::plus()};
  s.top = {BoundaryTerm::plus(), BoundaryTerm::plus()};
  s.east = {BoundaryTerm::minus(), BoundaryTerm::minus()};
  const TailPath tail{{2, 1}, "L", EdgeRef{'v', 0, 1}};
  CHECK_THROWS_AS(current_expectation(s, tail, {GenKind::f, 0}, kP), DegenerateNormalization);
}

TEST_CASE("spec validation and size limits") {
  VertexLatticeSpec s = spec_3x3();
  s.row_lambdas.pop_back();
  CHECK_THROWS_AS(s.validate(), GeometryError);
  VertexLatticeSpec wide = VertexLatticeSpec::uniform(
      13, 1, std::vector<CScalar>(13, CScalar(0.3, 0.1)), {CScalar(0.1, 0.0)});
  CHECK_THROWS_AS(partition_function(wide, kP), SizeError);
}

TEST_CASE("lattice jobs survive a json round trip") {
  LatticeJob job;
  job.spec = spec_3x3();
  job.tail = TailPath{{3, 2}, "LU", EdgeRef{'v', 1, 1}};
  job.gen = GeneratorId{GenKind::f_bar, 1};
  const std::string text = lattice_job_to_json(job);
  const LatticeJob back = lattice_job_from_json(text);
  CHECK(back.spec.n_cols == 3);
  CHECK(back.spec.n_rows == 3);
  CHECK(back.spec.col_lambdas == job.spec.col_lambdas);
  CHECK(back.spec.row_lambdas == job.spec.row_lambdas);
  REQUIRE(back.tail.has_value());
  CHECK(back.tail->steps == "LU");
  CHECK(back.tail->anchor == std::make_pair(3, 2));
  CHECK(back.gen.kind == GenKind::f_bar);
  CHECK(back.gen.index == 1);
  const CScalar z1 = partition_function(job.spec, kP).by_transfer;
  const CScalar z2 = partition_function(back.spec, kP).by_transfer;
  CHECK(std::abs(z1 - z2) == 0.0);
  CHECK_THROWS_AS(lattice_job_from_json("{\"dimensions\": [1]}"), std::exception);
}
