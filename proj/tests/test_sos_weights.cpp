#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "vertexlab/errors.hpp"
#include "vertexlab/sos_weights.hpp"

using namespace vertexlab;

namespace {

const ModelParams kP{};  // generic eta and x0 defaults

CScalar hval(long k, const ModelParams& p = kP) { return height_value(k, p); }

double vdiff(const std::array<CScalar, 2>& u, const std::array<CScalar, 2>& v) {
  return std::max(std::abs(u[0] - v[0]), std::abs(u[1] - v[1]));
}

}  // namespace

TEST_CASE("psi components match the displayed closed form") {
  const CScalar lam(0.44, -0.26);
  for (long a : {-1L, 0L, 2L}) {
    const CScalar av = hval(a);
    const auto up = intertwiner(IntertwinerKind::psi, a, a + 1, lam, kP);
    CHECK(std::abs(up[0] - std::exp((-lam + av * kP.eta) * 0.5)) < 1e-14);
    CHECK(std::abs(up[1] - std::exp((lam - av * kP.eta) * 0.5)) < 1e-14);
    const auto dn = intertwiner(IntertwinerKind::psi, a, a - 1, lam, kP);
    CHECK(std::abs(dn[0] - std::exp((-lam - av * kP.eta) * 0.5)) < 1e-14);
    CHECK(std::abs(dn[1] - std::exp((lam + av * kP.eta) * 0.5)) < 1e-14);
  }
  CHECK_THROWS_AS(intertwiner(IntertwinerKind::psi, 0, 2, lam, kP), ArgError);
  CHECK_THROWS_AS(intertwiner(IntertwinerKind::psi, 0, 0, lam, kP), ArgError);
}

TEST_CASE("psi_star components and the scalar inversion") {
  const CScalar lam(0.44, -0.26);
  for (long a : {-1L, 0L, 2L}) {
    const CScalar av = hval(a);
    const CScalar den = 2.0 * std::sinh(av * kP.eta);
    const auto up = intertwiner(IntertwinerKind::psi_star, a, a + 1, lam, kP);
    CHECK(std::abs(up[0] - std::exp((lam + av * kP.eta) * 0.5) / den) < 1e-14);
    CHECK(std::abs(up[1] + std::exp((-lam - av * kP.eta) * 0.5) / den) < 1e-14);
    const auto dn = intertwiner(IntertwinerKind::psi_star, a, a - 1, lam, kP);
    CHECK(std::abs(dn[0] + std::exp((lam - av * kP.eta) * 0.5) / den) < 1e-14);
    CHECK(std::abs(dn[1] - std::exp((-lam + av * kP.eta) * 0.5) / den) < 1e-14);

    for (long b : {a - 1, a + 1})
      for (long c : {a - 1, a + 1}) {
        const auto s = intertwiner(IntertwinerKind::psi_star, a, c, lam, kP);
        const auto v = intertwiner(IntertwinerKind::psi, a, b, lam, kP);
        const CScalar dot = s[0] * v[0] + s[1] * v[1];
        const CScalar want = (b == c) ? CScalar(1.0) : CScalar(0.0);
        CHECK(std::abs(dot - want) < 1e-12);
      }
  }
}

TEST_CASE("psi_prime equals the sinh-ratio rescaling of psi_star") {
  const CScalar lam(0.44, -0.26);
  for (long a : {-1L, 0L, 2L})
    for (long b : {a - 1, a + 1}) {
      const auto star = intertwiner(IntertwinerKind::psi_star, a, b, lam, kP);
      const CScalar ratio = std::sinh(hval(a) * kP.eta) / std::sinh(hval(b) * kP.eta);
      const std::array<CScalar, 2> oracle{ratio * star[0] * std::exp(kP.eta),
                                          ratio * star[1] * std::exp(-kP.eta)};
      const auto prime = intertwiner(IntertwinerKind::psi_prime, a, b, lam, kP);
      CHECK(vdiff(prime, oracle) < 1e-13);
    }
}

TEST_CASE("inversion checks pass for all four variants") {
  const CScalar lam(0.44, -0.26);
  for (long a : {-1L, 0L, 2L})
    for (char which : {'a', 'b', 'c', 'd'}) {
      const auto res = check_inversions(which, a, lam, kP);
      CAPTURE(which);
      CAPTURE(a);
      CHECK(res.pass);
      CHECK(res.residual < 1e-12);
    }
  CHECK_THROWS_AS(check_inversions('x', 0, lam, kP), ArgError);
}

TEST_CASE("singular heights are rejected") {
  ModelParams p0 = kP;
  p0.x0 = CScalar(0.0, 0.0);  // height value 0 makes sinh(a eta) vanish at a = 0
  const CScalar lam(0.3, 0.1);
  CHECK_NOTHROW(intertwiner(IntertwinerKind::psi, 0, 1, lam, p0));
  CHECK_THROWS_AS(intertwiner(IntertwinerKind::psi_star, 0, 1, lam, p0), SingularHeight);
  CHECK_THROWS_AS(intertwiner(IntertwinerKind::psi_prime, 1, 0, lam, p0), SingularHeight);
  CHECK_THROWS_AS(face_weight(0, 1, 0, 1, lam, p0), SingularHeight);
  CHECK_NOTHROW(face_weight(0, 1, 2, 1, lam, p0));  // no denominator in this case
  CHECK_THROWS_AS(face_weight_cyclic(0, 1, 0, 1, lam, kP, 2), ArgError);
}

TEST_CASE("face weight reproduces the three displayed cases") {
  const CScalar lam(0.29, 0.37);
  for (long a : {-1L, 0L, 2L}) {
    const CScalar av = hval(a);
    CHECK(std::abs(face_weight(a, a + 1, a + 2, a + 1, lam, kP) - std::sinh(lam + kP.eta)) <
          1e-14);
    CHECK(std::abs(face_weight(a, a - 1, a - 2, a - 1, lam, kP) - std::sinh(lam + kP.eta)) <
          1e-14);

    const CScalar up = std::sinh(lam) * std::sinh(hval(a + 1) * kP.eta) / std::sinh(av * kP.eta);
    CHECK(std::abs(face_weight(a, a + 1, a, a - 1, lam, kP) - up) < 1e-14);
    const CScalar dn = std::sinh(lam) * std::sinh(hval(a - 1) * kP.eta) / std::sinh(av * kP.eta);
    CHECK(std::abs(face_weight(a, a - 1, a, a + 1, lam, kP) - dn) < 1e-14);

    const CScalar same_up =
        std::sinh(kP.eta) * std::sinh(av * kP.eta - lam) / std::sinh(av * kP.eta);
    CHECK(std::abs(face_weight(a, a + 1, a, a + 1, lam, kP) - same_up) < 1e-14);
    const CScalar same_dn =
        std::sinh(kP.eta) * std::sinh(av * kP.eta + lam) / std::sinh(av * kP.eta);
    CHECK(std::abs(face_weight(a, a - 1, a, a - 1, lam, kP) - same_dn) < 1e-14);
  }
  CHECK(std::abs(face_weight(0, 1, 0, -1, CScalar(0.0), kP)) == 0.0);
  CHECK(face_weight(0, 2, 1, 1, lam, kP) == CScalar(0.0));
  CHECK(face_weight(0, 1, 2, 3, lam, kP) == CScalar(0.0));
}

TEST_CASE("face intertwining relations hold for every admissible triple") {
  const CScalar l1(0.33, 0.21), l2(-0.18, -0.40);
  for (long a : {-2L, 0L, 3L})
    for (long b : {a - 1, a + 1})
      for (long c : {b - 1, b + 1})
        for (int dir : {1, 2}) {
          const auto res = check_face_intertwining(dir, a, b, c, l1, l2, kP);
          CAPTURE(dir);
          CAPTURE(a);
          CAPTURE(b);
          CAPTURE(c);
          CHECK(res.pass);
          CHECK(res.residual < 1e-10);
        }
  // equal spectral parameters: R degenerates to a multiple of the swap
  CHECK(check_face_intertwining(1, 0, 1, 2, l1, l1, kP).pass);
  CHECK(check_face_intertwining(2, 0, 1, 0, l1, l1, kP).pass);
  CHECK_THROWS_AS(check_face_intertwining(3, 0, 1, 2, l1, l2, kP), ArgError);
  CHECK_THROWS_AS(check_face_intertwining(1, 0, 2, 3, l1, l2, kP), ArgError);
}

TEST_CASE("face Yang-Baxter equation over all twenty admissible hexagons") {
  const CScalar l1(0.25, 0.14), l2(-0.31, 0.05), l3(0.12, -0.33);
  for (long a : {0L, 1L}) {
    int patterns = 0;
    for (long b : {a - 1, a + 1})
      for (long c : {b - 1, b + 1})
        for (long d : {c - 1, c + 1})
          for (long e : {d - 1, d + 1})
            for (long f : {e - 1, e + 1}) {
              if (std::labs(f - a) != 1) continue;
              ++patterns;
              const auto res = check_sos_ybe(a, b, c, d, e, f, l1, l2, l3, kP);
              CAPTURE(a);
              CAPTURE(b);
              CAPTURE(c);
              CAPTURE(d);
              CAPTURE(e);
              CAPTURE(f);
              CHECK(res.pass);
              CHECK(res.residual < 1e-10);
            }
    CHECK(patterns == 20);
  }
  // monotone staircase forces a unique interior height on both sides
  const auto res = check_sos_ybe(0, 1, 2, 3, 2, 1, l1, l2, l3, kP);
  CHECK(res.residual < 1e-12);
  CHECK_THROWS_AS(check_sos_ybe(0, 2, 3, 4, 3, 1, l1, l2, l3, kP), ArgError);
}

TEST_CASE("random boundary walks close and are admissible") {
  for (std::uint64_t seed : {1ULL, 2ULL, 7ULL}) {
    const auto walk = random_boundary_walk(3, 3, 0, seed);
    REQUIRE(walk.size() == 12);
    CHECK(walk[0] == 0);
    for (std::size_t k = 0; k < walk.size(); ++k)
      CHECK(std::labs(walk[k] - walk[(k + 1) % walk.size()]) == 1);
  }
  CHECK(random_boundary_walk(2, 2, 0, 5) == random_boundary_walk(2, 2, 0, 5));
  CHECK(random_boundary_walk(3, 3, 0, 1) != random_boundary_walk(3, 3, 0, 2));
}

TEST_CASE("one-face partition function is the bare face weight") {
  SosLatticeSpec spec;
  spec.n_cols = 1;
  spec.n_rows = 1;
  spec.col_lambdas = {CScalar(0.31, 0.12)};
  spec.row_lambdas = {CScalar(0.11, -0.19)};
  spec.perimeter = {0, 1, 2, 1};
  spec.params = kP;
  const auto z = sos_partition_function(spec);
  const CScalar want =
      face_weight(0, 1, 2, 1, spec.col_lambdas[0] - spec.row_lambdas[0], kP);
  CHECK(std::abs(z.value - want) < 1e-14);
  REQUIRE(z.by_transfer.has_value());
  CHECK(std::abs(*z.by_transfer - want) < 1e-14);
  CHECK(std::abs(want - std::sinh(spec.col_lambdas[0] - spec.row_lambdas[0] + kP.eta)) <
        1e-14);
}

TEST_CASE("partition strategies agree on mixed grids") {
  const std::vector<CScalar> lc{CScalar(0.31, 0.12), CScalar(0.47, -0.08), CScalar(0.23, 0.21)};
  const std::vector<CScalar> lr{CScalar(0.11, -0.19), CScalar(0.68, 0.14), CScalar(0.39, 0.26)};
  int nonzero = 0;
  for (const auto& [C, R, seed] :
       std::vector<std::tuple<int, int, std::uint64_t>>{{2, 2, 11}, {3, 2, 12}, {2, 3, 13}, {3, 3, 14}}) {
    SosLatticeSpec spec;
    spec.n_cols = C;
    spec.n_rows = R;
    spec.col_lambdas = std::vector<CScalar>(lc.begin(), lc.begin() + C);
    spec.row_lambdas = std::vector<CScalar>(lr.begin(), lr.begin() + R);
    spec.perimeter = random_boundary_walk(C, R, 0, seed);
    spec.params = kP;
    const auto z = sos_partition_function(spec);
    REQUIRE(z.by_transfer.has_value());
    CHECK(std::abs(*z.by_transfer - z.by_enumeration) <
          1e-10 * (1.0 + std::abs(z.by_enumeration)));
    if (std::abs(z.value) > 1e-8) ++nonzero;
  }
  CHECK(nonzero >= 3);  // the sums must not be vacuously zero
}

TEST_CASE("lattice guards reject malformed height specs") {
  SosLatticeSpec spec;
  spec.n_cols = 2;
  spec.n_rows = 2;
  spec.col_lambdas = {CScalar(0.3), CScalar(0.4)};
  spec.row_lambdas = {CScalar(0.1), CScalar(0.2)};
  spec.perimeter = random_boundary_walk(2, 2, 0, 3);
  spec.params = kP;
  CHECK_NOTHROW(spec.validate());

  auto bad = spec;
  bad.perimeter.pop_back();
  CHECK_THROWS_AS(bad.validate(), GeometryError);

  bad = spec;
  bad.perimeter[3] += 2;  // breaks adjacency of the walk
  CHECK_THROWS_AS(bad.validate(), GeometryError);

  bad = spec;
  bad.row_lambdas.pop_back();
  CHECK_THROWS_AS(bad.validate(), GeometryError);

  SosLatticeSpec big;
  big.n_cols = 17;
  big.n_rows = 1;
  big.col_lambdas.assign(17, CScalar(0.3));
  big.row_lambdas = {CScalar(0.1)};
  big.perimeter = random_boundary_walk(17, 1, 0, 1);
  CHECK_THROWS_AS(big.validate(), SizeError);
}

TEST_CASE("cyclic weights are n-periodic at resonant coupling") {
  ModelParams pc = kP;
  pc.eta = CScalar(0.0, M_PI / 8.0);  // n eta = i pi for n = 8
  const long n = 8;
  const CScalar lam(0.23, 0.31);
  for (long k : {0L, 1L, 5L}) {
    CHECK(std::abs(face_weight(k + n, k + 1 + n, k + n, k + 1 + n, lam, pc) -
                   face_weight(k, k + 1, k, k + 1, lam, pc)) < 1e-12);
    CHECK(std::abs(face_weight(k + n, k + 1 + n, k + n, k - 1 + n, lam, pc) -
                   face_weight(k, k + 1, k, k - 1, lam, pc)) < 1e-12);
  }
  // residue arithmetic wraps: the pair (0, 7) is the local step -1 off 0
  CHECK(std::abs(face_weight_cyclic(0, 7, 0, 1, lam, pc, n) -
                 face_weight(0, -1, 0, 1, lam, pc)) < 1e-12);
  CHECK(std::abs(face_weight_cyclic(7, 0, 7, 0, lam, pc, n) -
                 face_weight(7, 8, 7, 8, lam, pc)) < 1e-12);
}

TEST_CASE("cyclic sums are dynamical: shifting heights without x0 changes Z") {
  ModelParams pc = kP;
  pc.eta = CScalar(0.0, M_PI / 8.0);
  SosLatticeSpec spec;
  spec.n_cols = 2;
  spec.n_rows = 2;
  spec.col_lambdas = {CScalar(0.31, 0.12), CScalar(0.47, -0.08)};
  spec.row_lambdas = {CScalar(0.11, -0.19), CScalar(0.68, 0.14)};
  spec.perimeter = {0, 1, 2, 3, 2, 3, 2, 1};
  spec.cyclic = true;
  spec.n = 8;
  spec.params = pc;
  const CScalar z0 = sos_partition_function(spec).value;

  auto shifted = spec;
  for (auto& k : shifted.perimeter) k = (k + 1) % 8;
  const CScalar z1 = sos_partition_function(shifted).value;
  CHECK(std::abs(z1 - z0) > 1e-3 * (1.0 + std::abs(z0)));

  // the shift is undone by moving the reference height x0 with it
  auto moved = shifted;
  moved.params.x0 = pc.x0 - CScalar(1.0);
  const CScalar z2 = sos_partition_function(moved).value;
  CHECK(std::abs(z2 - z0) < 1e-10 * (1.0 + std::abs(z0)));
}

TEST_CASE("cyclic residue wrap keeps the partition function consistent") {
  ModelParams pc = kP;
  pc.eta = CScalar(0.0, M_PI / 8.0);
  SosLatticeSpec spec;
  spec.n_cols = 2;
  spec.n_rows = 2;
  spec.col_lambdas = {CScalar(0.31, 0.12), CScalar(0.47, -0.08)};
  spec.row_lambdas = {CScalar(0.11, -0.19), CScalar(0.68, 0.14)};
  spec.perimeter = {7, 0, 1, 0, 1, 0, 7, 0};
  spec.cyclic = true;
  spec.n = 8;
  spec.params = pc;
  const CScalar zw = sos_partition_function(spec).value;

  auto shifted = spec;
  for (auto& k : shifted.perimeter) k = (k + 1) % 8;
  shifted.params.x0 = pc.x0 - CScalar(1.0);
  const CScalar zs = sos_partition_function(shifted).value;
  CHECK(std::abs(zs - zw) < 1e-10 * (1.0 + std::abs(zw)));
}

TEST_CASE("one-site correspondence reduces to a single face weight") {
  const std::vector<CScalar> lc{CScalar(0.31, 0.12)};
  const std::vector<CScalar> lr{CScalar(0.11, -0.19)};
  const auto base = VertexLatticeSpec::uniform(1, 1, lc, lr);
  const std::vector<long> walk{0, 1, 2, 1};
  const auto res = check_partition_correspondence(base, walk, kP);
  CHECK(res.pass);
  CHECK(res.residual < 1e-12);

  const auto dressed = dressed_vertex_spec(base, walk, kP);
  const CScalar z6 = partition_function(dressed, kP).by_transfer;
  CHECK(std::abs(z6 - std::sinh(lc[0] - lr[0] + kP.eta)) < 1e-12);
}

TEST_CASE("dressed spin sums equal pure height sums on small grids") {
  const std::vector<CScalar> lc{CScalar(0.31, 0.12), CScalar(0.47, -0.08), CScalar(0.23, 0.21)};
  const std::vector<CScalar> lr{CScalar(0.11, -0.19), CScalar(0.68, 0.14), CScalar(0.39, 0.26)};
  for (const auto& [C, R, seed] : std::vector<std::tuple<int, int, std::uint64_t>>{
           {2, 2, 21}, {2, 2, 22}, {3, 2, 23}, {2, 3, 24}, {3, 3, 25}}) {
    const auto base = VertexLatticeSpec::uniform(
        C, R, std::vector<CScalar>(lc.begin(), lc.begin() + C),
        std::vector<CScalar>(lr.begin(), lr.begin() + R));
    const auto walk = random_boundary_walk(C, R, 0, seed);
    const auto res = check_partition_correspondence(base, walk, kP);
    CAPTURE(C);
    CAPTURE(R);
    CAPTURE(seed);
    CHECK(res.pass);
    CHECK(res.residual < 1e-9);
  }
  const auto big = VertexLatticeSpec::uniform(4, 1, std::vector<CScalar>(4, CScalar(0.3)),
                                              {CScalar(0.1)});
  CHECK_THROWS_AS(check_partition_correspondence(big, random_boundary_walk(4, 1, 0, 1), kP),
                  SizeError);
}

TEST_CASE("height spec JSON round trip") {
  SosLatticeSpec spec;
  spec.n_cols = 2;
  spec.n_rows = 2;
  spec.col_lambdas = {CScalar(0.31, 0.12), CScalar(0.47, -0.08)};
  spec.row_lambdas = {CScalar(0.11, -0.19), CScalar(0.68, 0.14)};
  spec.perimeter = {0, 1, 2, 3, 2, 3, 2, 1};
  spec.cyclic = true;
  spec.n = 8;
  const auto text = sos_spec_to_json(spec);
  const auto back = sos_spec_from_json(text);
  CHECK(back.n_cols == spec.n_cols);
  CHECK(back.n_rows == spec.n_rows);
  CHECK(back.col_lambdas == spec.col_lambdas);
  CHECK(back.row_lambdas == spec.row_lambdas);
  CHECK(back.perimeter == spec.perimeter);
  CHECK(back.cyclic == spec.cyclic);
  CHECK(back.n == spec.n);
  CHECK(sos_spec_to_json(back) == text);

  SosLatticeSpec plain = spec;
  plain.cyclic = false;
  plain.n = 0;
  const auto back2 = sos_spec_from_json(sos_spec_to_json(plain));
  CHECK_FALSE(back2.cyclic);
  CHECK_THROWS_AS(sos_spec_from_json("{ not json"), ArgError);
}
