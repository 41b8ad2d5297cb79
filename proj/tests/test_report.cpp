#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "vertexlab/errors.hpp"
#include "vertexlab/report.hpp"

using namespace vertexlab;

namespace {

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

const ReportRow* find_row(const SuiteReport& rep, const std::string& id) {
  for (const auto& row : rep.rows) {
    if (row.id == id) return &row;
  }
  return nullptr;
}

const MeasurementRow* find_measurement(const SuiteReport& rep, const std::string& id) {
  for (const auto& m : rep.measurements) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

bool sorted_by_id(const SuiteReport& rep) {
  return std::is_sorted(rep.rows.begin(), rep.rows.end(),
                        [](const ReportRow& a, const ReportRow& b) { return a.id < b.id; }) &&
         std::is_sorted(
             rep.measurements.begin(), rep.measurements.end(),
             [](const MeasurementRow& a, const MeasurementRow& b) { return a.id < b.id; });
}

}  // namespace

TEST_CASE("suite catalogue rejects unknown names and formats") {
  CHECK(suite_names().size() == 8);
  SuiteConfig bad;
  bad.suite = "bogus";
  CHECK_THROWS_AS(run(bad), ArgError);
  SuiteConfig badf;
  badf.suite = "vertex-identities";
  badf.format = "xml";
  CHECK_THROWS_AS(run(badf), ArgError);
  SuiteConfig badsize;
  badsize.suite = "vertex-conservation";
  badsize.n_cols = 5;
  badsize.n_rows = 5;
  CHECK_THROWS_AS(run(badsize), ArgError);
}

TEST_CASE("the spin identity suite runs green and byte-deterministically") {
  SuiteConfig cfg;
  cfg.suite = "vertex-identities";
  cfg.seed = 7;
  const SuiteReport rep = run(cfg);
  CHECK(rep.all_pass);
  CHECK(!rep.truncated);
  CHECK(rep.count == 700);
  CHECK(rep.max_residual <= 1e-9);
  CHECK(sorted_by_id(rep));

  const SuiteReport again = run(cfg);
  CHECK(report_to_json(rep) == report_to_json(again));
  CHECK(report_to_csv(rep) == report_to_csv(again));

  SuiteConfig other = cfg;
  other.seed = 8;
  CHECK(report_to_json(run(other)) != report_to_json(rep));

  const auto doc = nlohmann::json::parse(report_to_json(rep));
  CHECK(doc["format"] == "vertexlab-report-v1");
  CHECK(doc["suite"] == "vertex-identities");
  CHECK(doc["seed"] == 7);
  CHECK(doc["rows"].size() == 700);
  CHECK(doc["measurements"].is_array());
  CHECK(doc["summary"]["all_pass"] == true);
  CHECK(doc["summary"]["count"] == 700);
  CHECK(doc["summary"]["truncated"] == false);
  CHECK(doc["summary"]["wall_time"].is_null());

  const std::string csv = report_to_csv(rep);
  CHECK(csv.rfind("# suite=vertex-identities;seed=7;", 0) == 0);
  CHECK(csv.find("id,params,kind,value,tol,pass\n") != std::string::npos);
  CHECK(count_lines(csv) == 702);  // banner + header + 700 checks
}

TEST_CASE("tolerance override and wall budget are honored") {
  SuiteConfig cfg;
  cfg.suite = "vertex-identities";
  cfg.tol_override = 1e-30;
  const SuiteReport rep = run(cfg);
  CHECK(rep.count == 700);
  CHECK(!rep.all_pass);
  for (const auto& row : rep.rows) CHECK(row.tol == 1e-30);

  SuiteConfig zero;
  zero.suite = "vertex-identities";
  zero.budget_seconds = 0.0;
  const SuiteReport t = run(zero);
  CHECK(t.truncated);
  CHECK(t.rows.empty());
  CHECK(!t.all_pass);
}

TEST_CASE("the height identity suite runs green") {
  SuiteConfig cfg;
  cfg.suite = "sos-identities";
  const SuiteReport rep = run(cfg);
  CHECK(rep.all_pass);
  CHECK(rep.count == 4100);
  CHECK(rep.max_residual <= 1e-9);
  CHECK(sorted_by_id(rep));
}

TEST_CASE("lattice suites run green at both supported sizes") {
  SuiteConfig cons;
  cons.suite = "vertex-conservation";
  const SuiteReport r3 = run(cons);
  CHECK(r3.all_pass);
  CHECK(r3.count == 20);

  cons.n_cols = cons.n_rows = 4;
  const SuiteReport r4 = run(cons);
  CHECK(r4.all_pass);
  CHECK(r4.count == 32);  // 16 conservation + 4 homotopy + 4 eta-zero + 8 unwind

  SuiteConfig pf;
  pf.suite = "vertex-parafermion";
  const SuiteReport rp = run(pf);
  CHECK(rp.all_pass);
  CHECK(rp.count == 36);
  CHECK(rp.measurements.size() == 4);
  CHECK(find_measurement(rp, "face-combination/f1-1/000") != nullptr);

  SuiteConfig sos;
  sos.suite = "sos-currents";
  const SuiteReport rs = run(sos);
  CHECK(rs.all_pass);
  CHECK(rs.count == 15);
  CHECK(find_row(rs, "j0-local-match/000") != nullptr);
}

TEST_CASE("the equivalence suite covers partition equality and wound seams") {
  SuiteConfig cfg;
  cfg.suite = "equivalence";
  const SuiteReport rep = run(cfg);
  CHECK(rep.all_pass);
  CHECK(rep.count == 22);
  CHECK(find_row(rep, "partition-correspondence/2x2/000") != nullptr);
  CHECK(find_row(rep, "equivalence/Mplus-f0/000") != nullptr);
  CHECK(find_row(rep, "equivalence/Mminus-fbar1/000") != nullptr);
}

TEST_CASE("the cyclic spectrum suite pins the advertised values") {
  SuiteConfig cfg;
  cfg.suite = "csos-spectrum";
  const SuiteReport rep = run(cfg);
  CHECK(rep.all_pass);
  CHECK(rep.count == 3 * 14);
  CHECK(rep.measurements.size() == 3 * 4);

  const ReportRow* h13 = find_row(rep, "spin-identification/p4-3/000");
  REQUIRE(h13 != nullptr);
  CHECK(h13->params.find("h13=1/2") != std::string::npos);

  const MeasurementRow* c43 = find_measurement(rep, "value/central-charge/p4-3/000");
  REQUIRE(c43 != nullptr);
  CHECK(c43->value == doctest::Approx(0.5).epsilon(1e-14));
  const MeasurementRow* c52 = find_measurement(rep, "value/central-charge/p5-2/000");
  REQUIRE(c52 != nullptr);
  CHECK(c52->value == doctest::Approx(-4.4).epsilon(1e-14));
  const MeasurementRow* lead = find_measurement(rep, "value/torus-exponent/p4-3/000");
  REQUIRE(lead != nullptr);
  CHECK(lead->value == doctest::Approx(-1.0 / 12.0).epsilon(1e-14));

  SuiteConfig one;
  one.suite = "csos-spectrum";
  one.pairs = {{5, 4}};
  const SuiteReport single = run(one);
  CHECK(single.all_pass);
  CHECK(single.count == 14);
  const MeasurementRow* rows54 = find_measurement(single, "value/spectrum-rows/p5-4/000");
  REQUIRE(rows54 != nullptr);
  CHECK(rows54->value == 25.0);
}

TEST_CASE("the restriction probe suite reports witnesses") {
  SuiteConfig cfg;
  cfg.suite = "rsos-probe";
  cfg.pairs = {{3, 1}, {4, 1}};  // probe reads the first components
  const SuiteReport rep = run(cfg);
  CHECK(rep.all_pass);
  CHECK(rep.count == 4);
  CHECK(find_row(rep, "witness-exists/p3/000") != nullptr);
  CHECK(find_row(rep, "pure-partition-restricts/p4/000") != nullptr);
  const MeasurementRow* mag = find_measurement(rep, "witness-magnitude/p3/000");
  REQUIRE(mag != nullptr);
  CHECK(mag->value > 1e-6);
}

TEST_CASE("tables are byte-stable and carry the documented shapes") {
  SuiteConfig cfg;
  cfg.format = "csv";
  const std::string spectrum_csv = emit_table("spectrum", cfg);
  CHECK(count_lines(spectrum_csv) == 26);  // header + 25 entries for (5,4)
  CHECK(emit_table("spectrum", cfg) == spectrum_csv);

  cfg.format = "json";
  const auto spectrum = nlohmann::json::parse(emit_table("spectrum", cfg));
  CHECK(spectrum["p"] == 5);
  CHECK(spectrum["pprime"] == 4);
  CHECK(spectrum["entries"].size() == 25);

  cfg.pairs = {{4, 3}};
  cfg.format = "csv";
  const auto other = emit_table("spectrum", cfg);
  CHECK(other != spectrum_csv);
  CHECK(count_lines(other) == 26);

  SuiteConfig wcfg;
  wcfg.format = "csv";
  const std::string weights_csv = emit_table("weights", wcfg);
  CHECK(weights_csv.rfind("a,b,c,d,w_re,w_im\n", 0) == 0);
  CHECK(count_lines(weights_csv) == 43);  // header + 7 offsets x 6 patterns
  CHECK(emit_table("weights", wcfg) == weights_csv);

  wcfg.format = "json";
  const auto weights = nlohmann::json::parse(emit_table("weights", wcfg));
  CHECK(weights["kind"] == "face-weights");
  CHECK(weights["rows"].size() == 42);

  CHECK_THROWS_AS(emit_table("bogus", wcfg), ArgError);
  SuiteConfig badfmt;
  badfmt.format = "xml";
  CHECK_THROWS_AS(emit_table("spectrum", badfmt), ArgError);
}
