#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vertexlab/numerics.hpp"

namespace vertexlab {

// Configuration of one suite run. Field semantics:
//   suite          one of suite_names()
//   seed           sampler seed; every row is a pure function of (suite, config)
//   etas           anisotropy choices for the sampler (empty: built-in set)
//   pairs          (p, p') list for the cyclic suites; rsos-probe reads the
//                  first components as its p values
//   n_cols/n_rows  lattice size for the lattice suites (supported: 3x3, 4x4)
//   tol_override   replaces every row's tolerance gate when set
//   out_path       destination file ("" = stdout); used by the CLI driver
//   format         "json" or "csv"
//   budget_seconds wall budget; exceeding it truncates the run (flagged,
//                  never silent)
struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 7;
  std::vector<CScalar> etas;
  std::vector<std::pair<long, long>> pairs;
  int n_cols = 3;
  int n_rows = 3;
  std::optional<double> tol_override;
  std::string out_path;
  std::string format = "json";
  double budget_seconds = 300.0;
};

// One asserted check: pass iff residual <= tol.
struct ReportRow {
  std::string id;      // canonical "<family>/<counter>" label
  std::string params;  // compact digest of the generating inputs
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// One reported magnitude that is never gated (diagnostic only).
struct MeasurementRow {
  std::string id;
  std::string params;
  double value = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<ReportRow> rows;                // sorted by id
  std::vector<MeasurementRow> measurements;   // sorted by id
  bool truncated = false;                     // wall budget hit; tail skipped
  double max_residual = 0.0;
  std::size_t count = 0;                      // number of asserted rows
  bool all_pass = false;                      // nonempty and every row passes
  double wall_seconds = 0.0;                  // measured; not serialized
};

const std::vector<std::string>& suite_names();

// Runs the named suite deterministically from the seed. Unknown suite or
// unsupported size -> ArgError. The budget is enforced between checks; a
// truncated report keeps the rows finished so far.
SuiteReport run(const SuiteConfig& config);

// Canonical serializations: rows and measurements sorted by id, fixed key
// order, no timestamps, so identical configurations yield identical bytes.
// Wall time is reported as null in JSON and omitted from CSV; the measured
// value lives only in SuiteReport::wall_seconds.
std::string report_to_json(const SuiteReport& report);
std::string report_to_csv(const SuiteReport& report);

// Stand-alone tables, byte-stable for fixed inputs.
//   kind "spectrum": dimension table for the first configured (p, p') pair
//                    (default (5, 4)) with |e| <= 2 and |m| <= 2n.
//   kind "weights":  face weights for height offsets a in [-3, 3] around
//                    the reference at a fixed spectral parameter.
// Unknown kind or format -> ArgError.
std::string emit_table(const std::string& kind, const SuiteConfig& config);

}  // namespace vertexlab
