#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horolab/ensembles.hpp"
#include "horolab/modular.hpp"
#include "horolab/sections.hpp"

namespace horolab {

// Flat key = value experiment configuration ('#' comments).  Presets expand
// to fully explicit configs, so parse(serialize(c)) == c.
struct ExperimentConfig {
  std::string preset = "custom";
  std::string section = "parabolic";        // zero | parabolic | constant:A,B
  std::string f = "bump:0.7,0.15";          // const:V | bump:R0,W | count:RIN,ROUT,W
  std::string psi = "smooth:0,2";           // smooth:A,B | triangle:A,B | indicator:A,B
  std::vector<std::string> ensembles = {"nonprimitive"};
  std::vector<std::int64_t> n_grid = {2000, 20000, 200000};
  std::vector<std::int64_t> q_grid;         // empty with q_auto => derived from n_grid
  bool q_auto = true;
  bool q_primes_only = false;               // auto grid: drop the divisor-rich values
  std::int64_t twist_count = 32;
  std::int64_t haar_samples = 1000000;
  std::int64_t quad_points = 262144;
  std::uint64_t seed = 1;
  int workers = 0;                          // 0 = hardware concurrency
  std::string out = "out";

  bool operator==(const ExperimentConfig&) const = default;

  static ExperimentConfig preset_config(const std::string& name);
  static std::vector<std::string> preset_names();

  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string serialize() const;
  void save(const std::string& path) const;

  void validate() const;  // throws on malformed grids/specs
};

// Builders from the spec strings (shared by config and tests).
HorocycleSection section_from_spec(const std::string& spec);
TestFunction test_function_from_spec(const std::string& spec);
WeightFunction weight_from_spec(const std::string& spec);

// Parses a numeric token: integer, decimal, p/q, sqrtN, pi, e.  Reports
// whether the denoted real is rational (sqrt of a non-square, pi, e are not).
struct ParsedReal {
  double value;
  Rationality rationality;
};
ParsedReal parse_real_token(const std::string& token);

// primes >= each n (plus a matched divisor-rich value unless primes_only)
// for the q grid
std::vector<std::int64_t> derive_q_grid(const std::vector<std::int64_t>& n_grid,
                                        const SieveTable& sieve, bool primes_only = false);

}  // namespace horolab
