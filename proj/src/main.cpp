#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "vertexlab/errors.hpp"
#include "vertexlab/report.hpp"

namespace {

using vertexlab::ArgError;
using vertexlab::CScalar;
using vertexlab::SuiteConfig;

CScalar parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ArgError("expected re,im but got: " + text);
  try {
    std::size_t used = 0;
    const double re = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw ArgError("bad real part in: " + text);
    const std::string imag = text.substr(comma + 1);
    const double im = std::stod(imag, &used);
    if (used != imag.size()) throw ArgError("bad imaginary part in: " + text);
    return CScalar{re, im};
  } catch (const std::logic_error&) {
    throw ArgError("expected re,im but got: " + text);
  }
}

std::pair<long, long> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ArgError("expected p,pprime but got: " + text);
  try {
    return {std::stol(text.substr(0, comma)), std::stol(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw ArgError("expected p,pprime but got: " + text);
  }
}

std::pair<int, int> parse_size(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ArgError("expected NxM but got: " + text);
  try {
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::logic_error&) {
    throw ArgError("expected NxM but got: " + text);
  }
}

// Precedence, lowest to highest: built-in default, VERTEXLAB_SEED (seed
// only), command-line flags, config file.
void apply_config_file(const std::string& path, SuiteConfig& cfg, std::string& table) {
  std::ifstream in(path);
  if (!in) throw ArgError("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgError("config file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (j.contains("suite")) cfg.suite = j["suite"].get<std::string>();
    if (j.contains("table")) table = j["table"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("etas")) {
      cfg.etas.clear();
      for (const auto& e : j["etas"]) {
        cfg.etas.push_back(CScalar{e.at(0).get<double>(), e.at(1).get<double>()});
      }
    }
    if (j.contains("pairs")) {
      cfg.pairs.clear();
      for (const auto& p : j["pairs"]) {
        cfg.pairs.emplace_back(p.at(0).get<long>(), p.at(1).get<long>());
      }
    }
    if (j.contains("size")) {
      const auto sz = parse_size(j["size"].get<std::string>());
      cfg.n_cols = sz.first;
      cfg.n_rows = sz.second;
    }
    if (j.contains("tol")) cfg.tol_override = j["tol"].get<double>();
    if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("budget_seconds")) cfg.budget_seconds = j["budget_seconds"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgError("config file " + path + " has a malformed field: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgError("cannot write output file: " + path);
  out << text;
  if (!out) throw ArgError("write failed for output file: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "vertexlab: deterministic verification suites and tables for six-vertex /\n"
      "height-model conserved currents and their cyclic spectrum arithmetic.\n"
      "Exit codes: 0 all checks pass, 1 residual failures or truncation,\n"
      "2 usage or configuration errors."};

  SuiteConfig cfg;
  if (const char* env = std::getenv("VERTEXLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) cfg.seed = v;
  }

  std::string table, config_path, size_str;
  std::vector<std::string> eta_strs, pp_strs;
  double tol = 0.0;
  bool list = false;

  std::string suite_help = "Suite to run:";
  for (const auto& name : vertexlab::suite_names()) suite_help += " " + name;
  app.add_option("--suite", cfg.suite, suite_help);
  app.add_option("--table", table,
                 "Emit a table instead of running a suite: spectrum | weights");
  app.add_option("--seed", cfg.seed, "Sampler seed (default: VERTEXLAB_SEED or 7)");
  app.add_option("--eta", eta_strs, "Anisotropy re,im (repeatable)");
  app.add_option("--pp", pp_strs, "Coprime pair p,pprime (repeatable)");
  app.add_option("--size", size_str, "Lattice size NxM (supported: 3x3, 4x4)");
  auto* tol_opt = app.add_option("--tol", tol, "Tolerance override applied to every check");
  app.add_option("--out", cfg.out_path, "Output file (default: stdout)");
  app.add_option("--format", cfg.format, "Report format: json | csv");
  app.add_option("--config", config_path,
                 "JSON config file; its values override the flags");
  app.add_option("--budget", cfg.budget_seconds, "Wall budget per suite in seconds");
  app.add_flag("--list", list, "Print the suite names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& s : eta_strs) cfg.etas.push_back(parse_complex(s));
    for (const auto& s : pp_strs) cfg.pairs.push_back(parse_pair(s));
    if (!size_str.empty()) {
      const auto sz = parse_size(size_str);
      cfg.n_cols = sz.first;
      cfg.n_rows = sz.second;
    }
    if (tol_opt->count() > 0) cfg.tol_override = tol;
    if (!config_path.empty()) apply_config_file(config_path, cfg, table);

    if (list) {
      for (const auto& name : vertexlab::suite_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (!table.empty() && !cfg.suite.empty()) {
      throw ArgError("--suite and --table are mutually exclusive");
    }
    if (table.empty() && cfg.suite.empty()) {
      throw ArgError("one of --suite or --table is required (see --help)");
    }

    if (!table.empty()) {
      write_text(cfg.out_path, vertexlab::emit_table(table, cfg));
      return 0;
    }

    const vertexlab::SuiteReport report = vertexlab::run(cfg);
    write_text(cfg.out_path, cfg.format == "csv" ? vertexlab::report_to_csv(report)
                                                 : vertexlab::report_to_json(report));
    std::fprintf(stderr, "suite %s: %zu checks, max residual %.3g, %s%s, wall %.2fs\n",
                 report.suite.c_str(), report.count, report.max_residual,
                 report.all_pass ? "all pass" : "FAILURES",
                 report.truncated ? " (truncated by wall budget)" : "",
                 report.wall_seconds);
    return (report.all_pass && !report.truncated) ? 0 : 1;
  } catch (const ArgError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
