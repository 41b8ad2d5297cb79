// Python bindings: suite runner, table emitters, JSON-driven lattice jobs,
// and the cyclic spectrum arithmetic. Reports and tables round-trip through
// their canonical JSON so python sees plain dicts and lists.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vertexlab/csos.hpp"
#include "vertexlab/report.hpp"
#include "vertexlab/sos_currents.hpp"
#include "vertexlab/sos_weights.hpp"
#include "vertexlab/vertex_lattice.hpp"
#include "vertexlab/vertex_weights.hpp"

namespace py = pybind11;
using namespace vertexlab;

namespace {

py::object loads(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

py::object fraction(const Rational& r) {
  return py::module_::import("fractions")
      .attr("Fraction")(py::int_(r.numerator()), py::int_(r.denominator()));
}

SuiteConfig build_config(const std::string& suite, std::uint64_t seed,
                         const std::vector<std::complex<double>>& etas,
                         const std::vector<std::pair<long, long>>& pairs,
                         std::pair<int, int> size, std::optional<double> tol,
                         double budget_seconds) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = seed;
  cfg.etas.assign(etas.begin(), etas.end());
  cfg.pairs = pairs;
  cfg.n_cols = size.first;
  cfg.n_rows = size.second;
  cfg.tol_override = tol;
  cfg.budget_seconds = budget_seconds;
  return cfg;
}

constexpr const char* kSuiteArgsDoc =
    "suite: one of suite_names(); seed: RNG seed; etas: anisotropy draws "
    "overriding the default pool; pairs: (p, p') moduli for the cyclic "
    "suites; size: (cols, rows), 3x3 or 4x4; tol: override every gate "
    "tolerance; budget_seconds: wall clock before graceful truncation.";

}  // namespace

PYBIND11_MODULE(_vertexlab, m) {
  m.doc() =
      "Exact-scale lattice currents: spin and height identity suites, "
      "JSON-described lattice jobs, and cyclic spectrum arithmetic.";

  m.def("suite_names", [] { return suite_names(); },
        "Names accepted by run_suite, in canonical order.");

  m.def(
      "run_suite",
      [](const std::string& suite, std::uint64_t seed,
         const std::vector<std::complex<double>>& etas,
         const std::vector<std::pair<long, long>>& pairs, std::pair<int, int> size,
         std::optional<double> tol, double budget_seconds) {
        return loads(report_to_json(
            run(build_config(suite, seed, etas, pairs, size, tol, budget_seconds))));
      },
      py::arg("suite"), py::arg("seed") = 7,
      py::arg("etas") = std::vector<std::complex<double>>{},
      py::arg("pairs") = std::vector<std::pair<long, long>>{},
      py::arg("size") = std::pair<int, int>{3, 3}, py::arg("tol") = std::nullopt,
      py::arg("budget_seconds") = 300.0,
      (std::string("Run one check suite and return the report as a dict. ") + kSuiteArgsDoc)
          .c_str());

  m.def(
      "run_suite_csv",
      [](const std::string& suite, std::uint64_t seed,
         const std::vector<std::complex<double>>& etas,
         const std::vector<std::pair<long, long>>& pairs, std::pair<int, int> size,
         std::optional<double> tol, double budget_seconds) {
        return report_to_csv(
            run(build_config(suite, seed, etas, pairs, size, tol, budget_seconds)));
      },
      py::arg("suite"), py::arg("seed") = 7,
      py::arg("etas") = std::vector<std::complex<double>>{},
      py::arg("pairs") = std::vector<std::pair<long, long>>{},
      py::arg("size") = std::pair<int, int>{3, 3}, py::arg("tol") = std::nullopt,
      py::arg("budget_seconds") = 300.0,
      "Run one check suite and return the canonical CSV text.");

  m.def(
      "emit_table",
      [](const std::string& kind, const std::string& format,
         const std::vector<std::pair<long, long>>& pairs,
         const std::vector<std::complex<double>>& etas) {
        SuiteConfig cfg;
        cfg.format = format;
        cfg.pairs = pairs;
        cfg.etas.assign(etas.begin(), etas.end());
        return emit_table(kind, cfg);
      },
      py::arg("kind"), py::arg("format") = "json",
      py::arg("pairs") = std::vector<std::pair<long, long>>{},
      py::arg("etas") = std::vector<std::complex<double>>{},
      "Deterministic reference table ('spectrum' or 'weights') as text in "
      "the requested format (json or csv).");

  m.def(
      "vertex_job",
      [](const std::string& job_json, std::complex<double> eta, std::complex<double> x0) {
        const LatticeJob job = lattice_job_from_json(job_json);
        const ModelParams params{eta, x0, {}};
        py::dict out;
        if (job.tail) {
          const CurrentResult r = current_expectation(job.spec, *job.tail, job.gen, params);
          out["raw"] = r.raw;
          out["z"] = r.z;
          out["value"] = r.value;
        } else {
          const ZResult z = partition_function(job.spec, params);
          out["z"] = z.by_transfer;
          out["z_enumeration"] =
              z.by_enumeration ? py::cast(*z.by_enumeration) : py::object(py::none());
        }
        return out;
      },
      py::arg("job_json"), py::arg("eta") = std::complex<double>{0.41, -0.23},
      py::arg("x0") = std::complex<double>{0.37, 0.11},
      "Evaluate a spin-lattice job described by its JSON document: the "
      "partition function when no tail is given, otherwise the tail-dressed "
      "current expectation {raw, z, value}.");

  m.def(
      "lattice_job_roundtrip",
      [](const std::string& job_json) { return lattice_job_to_json(lattice_job_from_json(job_json)); },
      py::arg("job_json"),
      "Parse and re-serialize a lattice job; canonicalizes field order.");

  m.def(
      "sos_partition",
      [](const std::string& spec_json, std::complex<double> eta, std::complex<double> x0) {
        SosLatticeSpec spec = sos_spec_from_json(spec_json);
        spec.params = ModelParams{eta, x0, {}};
        const SosZResult z = sos_partition_function(spec);
        return z.value;
      },
      py::arg("spec_json"), py::arg("eta") = std::complex<double>{0.41, -0.23},
      py::arg("x0") = std::complex<double>{0.37, 0.11},
      "Face-weight partition function of the height lattice described by "
      "the JSON document, at the given anisotropy and reference height.");

  m.def(
      "sos_current",
      [](const std::string& insertion_json, std::complex<double> eta,
         std::complex<double> x0) {
        SosInsertion ins = sos_insertion_from_json(insertion_json);
        ins.lattice.params = ModelParams{eta, x0, {}};
        const SosCurrentResult r = sos_current_expectation(ins);
        py::dict out;
        out["raw"] = r.raw;
        out["z"] = r.z;
        out["value"] = r.value;
        return out;
      },
      py::arg("insertion_json"), py::arg("eta") = std::complex<double>{0.41, -0.23},
      py::arg("x0") = std::complex<double>{0.37, 0.11},
      "Seam-dressed height-current expectation {raw, z, value} for the "
      "insertion described by the JSON document.");

  m.def(
      "random_walk",
      [](int n_cols, int n_rows, long k0, std::uint64_t seed) {
        return random_boundary_walk(n_cols, n_rows, k0, seed);
      },
      py::arg("n_cols"), py::arg("n_rows"), py::arg("k0") = 0, py::arg("seed") = 1,
      "Seeded admissible boundary-height walk for an n_cols x n_rows face "
      "lattice, starting at height k0.");

  m.def(
      "csos",
      [](long p, long pprime) {
        const CsosParams c = make_csos(p, pprime);
        py::dict out;
        out["p"] = c.p;
        out["pprime"] = c.pprime;
        out["ell"] = c.ell;
        out["n"] = c.n;
        out["c"] = fraction(central_charge(c));
        out["c_eff"] = fraction(effective_central_charge(c));
        const auto [h, hbar] = conformal_dimensions(c, Rational(1), 3);
        out["h13"] = fraction(h);
        return out;
      },
      py::arg("p"), py::arg("pprime"),
      "Cyclic model data for the coprime pair (p, p'): wrapped charge "
      "(ell, n), exact central charge, effective charge, and the (1, 3) "
      "conformal weight, as Fractions.");

  m.def(
      "conformal_dimensions",
      [](long p, long pprime, long e_num, long e_den, long mm) {
        const auto [h, hbar] =
            conformal_dimensions(make_csos(p, pprime), Rational(e_num, e_den), mm);
        return py::make_tuple(fraction(h), fraction(hbar));
      },
      py::arg("p"), py::arg("pprime"), py::arg("e_num"), py::arg("e_den") = 1,
      py::arg("m") = 0,
      "Exact (h, hbar) at electric charge e = e_num/e_den and magnetic "
      "charge m, as Fractions.");

  m.def(
      "spectrum",
      [](long p, long pprime, long e_bound, long m_bound) {
        const CsosParams c = make_csos(p, pprime);
        return loads(spectrum_to_json(c, spectrum_table(c, e_bound, m_bound)));
      },
      py::arg("p"), py::arg("pprime"), py::arg("e_bound") = 2, py::arg("m_bound") = 2,
      "Charge-lattice spectrum rows for |e| <= e_bound, m = n*u with "
      "|u| <= m_bound, as a dict.");

  m.def(
      "rsos_probe", [](int p) { return loads(rsos_probe_to_json(rsos_incompatibility_probe(p))); },
      py::arg("p"),
      "Restriction probe at the root-of-unity point for modulus p: plain "
      "partition stays in band, the current insertion exhibits an "
      "out-of-range witness.");

  m.def(
      "ybe_residual",
      [](std::complex<double> l1, std::complex<double> l2, std::complex<double> l3,
         std::complex<double> eta) {
        return check_ybe(l1, l2, l3, ModelParams{eta, {0.37, 0.11}, {}}).residual;
      },
      py::arg("l1"), py::arg("l2"), py::arg("l3"),
      py::arg("eta") = std::complex<double>{0.41, -0.23},
      "Star-triangle residual of the spin weights at three spectral "
      "parameters; ~1e-15 everywhere away from degeneracies.");
}
