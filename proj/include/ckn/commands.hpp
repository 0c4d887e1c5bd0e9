#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckn/cylinder.hpp"
#include "ckn/report.hpp"

namespace ckn {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  std::vector<int> n_values;
  std::vector<double> p_values;
  int grid_N = 0;    // 0: default for each (p, n)
  double grid_S = 0; // 0: default for each (p, n)
  int L = 8;
  int M = 64;
  std::vector<double> mus;   // empty: log-spaced default
  std::vector<double> gaps;  // empty: uniform in [4, 12]/sqrt(Lambda)
  std::vector<int> ells{0, 1, 2};
  int k = 3;                 // eigenvalues per degree
  bool detail = false;       // sharpness: one row per mu
  double zeta = 0.01;
  int samples = 10000;
  std::uint64_t seed = 20240601;
  int threads = 1;
  std::string out;           // empty: stdout
  OutputFormat format = OutputFormat::csv;

  /// Cartesian product of n_values and p_values, n outer.
  std::vector<std::pair<int, double>> pairs() const;
  DiscOptions disc_options() const;
  /// Throws std::invalid_argument on an inadmissible (p, n) or bad grid override.
  void validate() const;
};

/// "4" or "a:b:step" (inclusive of b up to rounding).
std::vector<double> parse_range(const std::string& spec);

Table cmd_constants(const RunConfig& cfg);
Table cmd_sharpness(const RunConfig& cfg);
Table cmd_spectrum(const RunConfig& cfg);
Table cmd_interactions(const RunConfig& cfg);

struct SelftestResult {
  Table table;
  bool passed = true;
};
/// Uses cfg's (p, n) pairs, or a small built-in set when none are given.
SelftestResult cmd_selftest(const RunConfig& cfg);

ReportMeta make_meta(const RunConfig& cfg);

}  // namespace ckn
