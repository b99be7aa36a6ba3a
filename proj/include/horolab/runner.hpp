#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "horolab/config.hpp"
#include "horolab/ensembles.hpp"

namespace horolab {

// One (ensemble, parameter) cell.  haar_ref is the full comparison target
// for the estimator (int f dnu * int psi for the discrete ensembles, int f
// for the continuous one, 0 for mean-zero twisted sums), so
// abs_err = |estimate - haar_ref| is recomputable from the row alone.
struct EnsembleResult {
  std::int64_t param = 0;
  std::string ensemble;
  std::complex<double> estimate;
  double haar_ref = 0;
  double haar_stderr = 0;
  double abs_err = 0;
  std::int64_t terms = 0;
  std::int64_t runtime_ms = 0;
  std::uint64_t seed = 0;
};

struct NamedFit {
  std::string name;
  DecayFit fit;
};

struct VerificationRow {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<EnsembleResult> results;
  std::vector<NamedFit> fits;
  std::vector<VerificationRow> verification;  // filled by the verify command
  double haar_ref_f = 0;                      // cached int f dnu and its stderr
  double haar_stderr_f = 0;
  std::map<int, double> f_sobolev;            // proxy norms of f, degrees 0..2
  double wall_seconds = 0;
};

// Runs every (ensemble, grid cell) of the config.  Deterministic given
// (config, seed): results are bit-identical for any worker count.
RunReport run_experiment(const ExperimentConfig& config);

// CSV with the fixed header
// param,ensemble,estimate_re,estimate_im,haar_ref,haar_stderr,abs_err,terms,runtime_ms,seed
std::string results_to_csv(const std::vector<EnsembleResult>& rows);
std::string report_to_json(const RunReport& report);

// Writes <out>/results.csv and <out>/report.json; creates the directory.
void write_report_files(const RunReport& report, const std::string& out_dir);

}  // namespace horolab
