#include "horolab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "horolab/sieve.hpp"

namespace horolab {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto wall0 = Clock::now();

  RunReport report;
  report.config = config;

  const HorocycleSection section = section_from_spec(config.section);
  const TestFunction f = test_function_from_spec(config.f);
  const WeightFunction psi = weight_from_spec(config.psi);
  const int workers = config.workers;

  // Haar reference for f, one Monte Carlo run per (f, seed) pair; every
  // abs_err inherits its uncertainty, reported separately per row.
  const HaarSampler ref_sampler(config.seed);
  const MonteCarlo ref = haar_integral(f, config.haar_samples, ref_sampler, workers);
  report.haar_ref_f = ref.estimate;
  report.haar_stderr_f = ref.std_error;
  for (int d = 0; d <= 2; ++d)
    report.f_sobolev[d] = sobolev_proxy(f, d, 256, config.seed ^ 0x50b01e5ULL);

  const bool wants_primitive =
      std::find(config.ensembles.begin(), config.ensembles.end(), "primitive") != config.ensembles.end();
  std::vector<std::int64_t> q_grid = config.q_grid;
  std::unique_ptr<SieveTable> sieve;
  if (wants_primitive) {
    std::int64_t q_max = 0;
    if (config.q_auto) {
      for (std::int64_t n : config.n_grid) q_max = std::max(q_max, n + n / 5 + 1000);
    } else {
      for (std::int64_t q : q_grid) q_max = std::max(q_max, q);
    }
    sieve = std::make_unique<SieveTable>(q_max);
    if (config.q_auto) q_grid = derive_q_grid(config.n_grid, *sieve, config.q_primes_only);
  }

  auto emit = [&](EnsembleResult row) {
    if (!std::isfinite(row.estimate.real()) || !std::isfinite(row.estimate.imag()) ||
        !std::isfinite(row.abs_err))
      throw std::domain_error("non-finite estimate in ensemble " + row.ensemble);
    report.results.push_back(std::move(row));
  };

  const double int_psi = psi.integral();
  const double target = ref.estimate * int_psi;
  const double target_stderr = ref.std_error * std::abs(int_psi);

  for (const std::string& kind : config.ensembles) {
    if (kind == "continuous") {
      for (std::int64_t n : config.n_grid) {
        const auto t0 = Clock::now();
        const QuadResult quad =
            continuous_average(section, f, psi.a(), psi.b(), 1.0 / static_cast<double>(n),
                               config.quad_points, workers);
        EnsembleResult row;
        row.param = n;
        row.ensemble = "continuous";
        row.estimate = quad.value;
        row.haar_ref = ref.estimate;
        row.haar_stderr = ref.std_error;
        row.abs_err = std::abs(quad.value - ref.estimate);
        row.terms = config.quad_points;
        row.runtime_ms = ms_since(t0);
        row.seed = config.seed;
        emit(std::move(row));
      }
    } else if (kind == "nonprimitive") {
      for (std::int64_t n : config.n_grid) {
        const auto t0 = Clock::now();
        const double value = nonprimitive_average(section, f, psi, n, workers);
        const auto [k_lo, k_hi] = index_window(psi, n);
        EnsembleResult row;
        row.param = n;
        row.ensemble = "nonprimitive";
        row.estimate = value;
        row.haar_ref = target;
        row.haar_stderr = target_stderr;
        row.abs_err = std::abs(value - target);
        row.terms = std::max<std::int64_t>(0, k_hi - k_lo);
        row.runtime_ms = ms_since(t0);
        row.seed = config.seed;
        emit(std::move(row));
      }
    } else if (kind == "primitive") {
      for (std::int64_t q : q_grid) {
        const auto t0 = Clock::now();
        const double value = primitive_average(section, f, psi, *sieve, q, workers);
        EnsembleResult row;
        row.param = q;
        row.ensemble = "primitive";
        row.estimate = value;
        row.haar_ref = target;
        row.haar_stderr = target_stderr;
        row.abs_err = std::abs(value - target);
        row.terms = static_cast<std::int64_t>(coprime_residues(q, psi.a(), psi.b()).size());
        row.runtime_ms = ms_since(t0);
        row.seed = config.seed;
        emit(std::move(row));
      }
    } else if (kind == "twisted") {
      std::vector<double> twists(static_cast<std::size_t>(config.twist_count));
      for (std::int64_t n : config.n_grid) {
        const auto t0 = Clock::now();
        for (std::size_t j = 0; j < twists.size(); ++j)
          twists[j] = twists.size() == 1
                          ? 0.0
                          : static_cast<double>(n) * static_cast<double>(j) /
                                static_cast<double>(twists.size() - 1);
        const auto values = twisted_average(section, f, psi, n, twists, ref.estimate, workers);
        const auto [k_lo, k_hi] = index_window(psi, n);
        const std::int64_t ms = ms_since(t0);
        for (std::size_t j = 0; j < twists.size(); ++j) {
          EnsembleResult row;
          row.param = n;
          char label[48];
          std::snprintf(label, sizeof(label), "twisted(%.6g)", twists[j]);
          row.ensemble = label;
          row.estimate = values[j];
          row.haar_ref = 0;  // mean-zero target
          row.haar_stderr = target_stderr;
          row.abs_err = std::abs(values[j]);
          row.terms = std::max<std::int64_t>(0, k_hi - k_lo);
          row.runtime_ms = ms;
          row.seed = config.seed;
          emit(std::move(row));
        }
      }
    }
  }

  // Decay fits per ensemble family over points above the Monte Carlo noise
  // floor (3x the reference stderr); below it the residual is sampling
  // noise, not equidistribution error.
  const double floor_err = 3.0 * target_stderr;
  auto fit_family = [&](const std::string& name, auto&& take) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : report.results) {
      if (!take(row)) continue;
      if (row.abs_err > floor_err && row.abs_err > 0)
        pts.emplace_back(static_cast<double>(row.param), row.abs_err);
    }
    if (pts.size() >= 3) report.fits.push_back({name, fit_decay(pts)});
  };
  fit_family("continuous", [](const EnsembleResult& r) { return r.ensemble == "continuous"; });
  fit_family("nonprimitive", [](const EnsembleResult& r) { return r.ensemble == "nonprimitive"; });
  fit_family("primitive", [](const EnsembleResult& r) { return r.ensemble == "primitive"; });
  {
    // twisted: fit the per-N maximum over the twist grid
    std::vector<std::pair<double, double>> pts;
    for (std::int64_t n : config.n_grid) {
      double worst = 0;
      bool seen = false;
      for (const auto& row : report.results)
        if (row.param == n && row.ensemble.rfind("twisted(", 0) == 0) {
          worst = std::max(worst, row.abs_err);
          seen = true;
        }
      if (seen && worst > floor_err) pts.emplace_back(static_cast<double>(n), worst);
    }
    if (pts.size() >= 3) report.fits.push_back({"twisted_max", fit_decay(pts)});
  }

  report.wall_seconds =
      std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - wall0).count();
  return report;
}

std::string results_to_csv(const std::vector<EnsembleResult>& rows) {
  std::string out = "param,ensemble,estimate_re,estimate_im,haar_ref,haar_stderr,abs_err,terms,runtime_ms,seed\n";
  for (const auto& r : rows) {
    out += std::to_string(r.param);
    out += ',';
    out += r.ensemble;
    out += ',';
    out += fmt_double(r.estimate.real());
    out += ',';
    out += fmt_double(r.estimate.imag());
    out += ',';
    out += fmt_double(r.haar_ref);
    out += ',';
    out += fmt_double(r.haar_stderr);
    out += ',';
    out += fmt_double(r.abs_err);
    out += ',';
    out += std::to_string(r.terms);
    out += ',';
    out += std::to_string(r.runtime_ms);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::string report_to_json(const RunReport& report) {
  nlohmann::json j;
  {
    nlohmann::json c;
    c["preset"] = report.config.preset;
    c["section"] = report.config.section;
    c["f"] = report.config.f;
    c["psi"] = report.config.psi;
    c["ensembles"] = report.config.ensembles;
    c["n_grid"] = report.config.n_grid;
    c["q_grid"] = report.config.q_grid;
    c["q_auto"] = report.config.q_auto;
    c["q_primes_only"] = report.config.q_primes_only;
    c["twist_count"] = report.config.twist_count;
    c["haar_samples"] = report.config.haar_samples;
    c["quad_points"] = report.config.quad_points;
    c["seed"] = report.config.seed;
    c["workers"] = report.config.workers;
    c["out"] = report.config.out;
    j["config"] = c;
  }
  j["haar_ref_f"] = report.haar_ref_f;
  j["haar_stderr_f"] = report.haar_stderr_f;
  j["f_sobolev_proxy"] = nlohmann::json::object();
  for (const auto& [d, v] : report.f_sobolev) j["f_sobolev_proxy"][std::to_string(d)] = v;
  {
    const HorocycleSection section = section_from_spec(report.config.section);
    if (const auto dio = section.diophantine()) {
      j["section_diophantine"] = {{"type_k", dio->type_k}, {"constant", dio->constant}};
    }
    if (const auto lin = section.rationally_linear())
      j["section_rationally_linear"] = *lin;
    else
      j["section_rationally_linear"] = "unknown";
    if (const auto p = section.period()) j["section_period"] = *p;
  }
  j["results"] = nlohmann::json::array();
  for (const auto& r : report.results) {
    nlohmann::json row;
    row["param"] = r.param;
    row["ensemble"] = r.ensemble;
    row["estimate_re"] = r.estimate.real();
    row["estimate_im"] = r.estimate.imag();
    row["haar_ref"] = r.haar_ref;
    row["haar_stderr"] = r.haar_stderr;
    row["abs_err"] = r.abs_err;
    row["terms"] = r.terms;
    row["runtime_ms"] = r.runtime_ms;
    row["seed"] = r.seed;
    j["results"].push_back(row);
  }
  j["fits"] = nlohmann::json::array();
  for (const auto& nf : report.fits) {
    nlohmann::json fit;
    fit["name"] = nf.name;
    fit["delta_hat"] = nf.fit.delta_hat;
    fit["r2"] = nf.fit.r2;
    fit["points"] = nlohmann::json::array();
    for (const auto& [p, e] : nf.fit.points) fit["points"].push_back({p, e});
    j["fits"].push_back(fit);
  }
  j["verification"] = nlohmann::json::array();
  for (const auto& v : report.verification) {
    nlohmann::json row;
    row["id"] = v.id;
    row["name"] = v.name;
    row["pass"] = v.pass;
    row["detail"] = v.detail;
    row["seconds"] = v.seconds;
    j["verification"].push_back(row);
  }
  j["wall_seconds"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

void write_report_files(const RunReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir + "/results.csv");
    if (!csv) throw std::runtime_error("cannot write " + out_dir + "/results.csv");
    csv << results_to_csv(report.results);
  }
  {
    std::ofstream json(out_dir + "/report.json");
    if (!json) throw std::runtime_error("cannot write " + out_dir + "/report.json");
    json << report_to_json(report);
  }
}

}  // namespace horolab
