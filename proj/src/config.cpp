#include "horolab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace horolab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split(s, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad integer in list: " + tok);
    out.push_back(v);
  }
  return out;
}

std::string join_int_list(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_str_list(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i];
  }
  return out;
}

}  // namespace

ParsedReal parse_real_token(const std::string& token_in) {
  const std::string token = trim(token_in);
  if (token.empty()) throw std::invalid_argument("empty numeric token");
  if (token == "pi") return {3.14159265358979323846, Rationality::Irrational};
  if (token == "e") return {2.71828182845904523536, Rationality::Irrational};
  if (token.rfind("sqrt", 0) == 0) {
    const std::string rest = token.substr(4);
    std::size_t pos = 0;
    const long long n = std::stoll(rest, &pos);
    if (pos != rest.size() || n < 0) throw std::invalid_argument("bad sqrt token: " + token);
    const long long r = std::llround(std::sqrt(static_cast<double>(n)));
    const bool square = r * r == n;
    return {std::sqrt(static_cast<double>(n)),
            square ? Rationality::Rational : Rationality::Irrational};
  }
  if (const auto slash = token.find('/'); slash != std::string::npos) {
    std::size_t p1 = 0, p2 = 0;
    const long long num = std::stoll(token.substr(0, slash), &p1);
    const long long den = std::stoll(token.substr(slash + 1), &p2);
    if (p1 != slash || p2 != token.size() - slash - 1 || den == 0)
      throw std::invalid_argument("bad fraction token: " + token);
    return {static_cast<double>(num) / static_cast<double>(den), Rationality::Rational};
  }
  std::size_t pos = 0;
  const double v = std::stod(token, &pos);
  if (pos != token.size()) throw std::invalid_argument("bad numeric token: " + token);
  // a decimal literal denotes a rational number
  return {v, Rationality::Rational};
}

HorocycleSection section_from_spec(const std::string& spec) {
  if (spec == "zero") return HorocycleSection::zero();
  if (spec == "parabolic") return HorocycleSection::parabolic();
  if (spec.rfind("constant:", 0) == 0) {
    const auto parts = split(spec.substr(9), ',');
    if (parts.size() != 2) throw std::invalid_argument("constant section needs two components");
    const ParsedReal c1 = parse_real_token(parts[0]);
    const ParsedReal c2 = parse_real_token(parts[1]);
    const Rationality r = (c1.rationality == Rationality::Rational &&
                           c2.rationality == Rationality::Rational)
                              ? Rationality::Rational
                              : Rationality::Irrational;
    HorocycleSection s = HorocycleSection::constant(c1.value, c2.value, r);
    if (parts[0].rfind("sqrt", 0) == 0 && parts[1].rfind("sqrt", 0) == 0 &&
        r == Rationality::Irrational) {
      // pairs of quadratic irrationals carry the classical simultaneous
      // approximation type 3/2; the constant is a nominal label
      s.annotate_diophantine({1.5, 0.05});
    }
    return s;
  }
  throw std::invalid_argument("unknown section spec: " + spec);
}

TestFunction test_function_from_spec(const std::string& spec) {
  auto args = [&](std::size_t skip) { return split(spec.substr(skip), ','); };
  if (spec.rfind("const:", 0) == 0) {
    const auto a = args(6);
    if (a.size() != 1) throw std::invalid_argument("const needs one value");
    return TestFunction::constant(parse_real_token(a[0]).value);
  }
  if (spec.rfind("bump:", 0) == 0) {
    const auto a = args(5);
    if (a.size() != 2) throw std::invalid_argument("bump needs r0,w");
    return TestFunction::shortest_vector_bump(parse_real_token(a[0]).value,
                                              parse_real_token(a[1]).value);
  }
  if (spec.rfind("count:", 0) == 0) {
    const auto a = args(6);
    if (a.size() != 3) throw std::invalid_argument("count needs r_inner,r_outer,w");
    return TestFunction::smoothed_count(parse_real_token(a[0]).value,
                                        parse_real_token(a[1]).value,
                                        parse_real_token(a[2]).value);
  }
  throw std::invalid_argument("unknown test function spec: " + spec);
}

WeightFunction weight_from_spec(const std::string& spec) {
  auto two = [&](std::size_t skip) {
    const auto a = split(spec.substr(skip), ',');
    if (a.size() != 2) throw std::invalid_argument("weight needs a,b: " + spec);
    return std::pair{parse_real_token(a[0]).value, parse_real_token(a[1]).value};
  };
  if (spec.rfind("smooth:", 0) == 0) {
    const auto [a, b] = two(7);
    return WeightFunction::smooth_bump(a, b);
  }
  if (spec.rfind("triangle:", 0) == 0) {
    const auto [a, b] = two(9);
    return WeightFunction::triangle(a, b);
  }
  if (spec.rfind("indicator:", 0) == 0) {
    const auto [a, b] = two(10);
    return WeightFunction::indicator(a, b);
  }
  throw std::invalid_argument("unknown weight spec: " + spec);
}

std::vector<std::string> ExperimentConfig::preset_names() {
  return {"strom", "brown", "negative_control", "custom"};
}

ExperimentConfig ExperimentConfig::preset_config(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "strom") {
    // constant displacement of Diophantine type; averages over [0,1]
    c.section = "constant:sqrt2,sqrt3";
    c.f = "bump:0.7,0.15";
    c.psi = "smooth:0,1";
    c.ensembles = {"nonprimitive", "primitive", "twisted"};
    c.n_grid = {2000, 20000, 200000};
    c.haar_samples = 4000000;
  } else if (name == "brown") {
    // parabolic section; psi spans one period
    c.section = "parabolic";
    c.f = "bump:0.7,0.15";
    c.psi = "smooth:0,2";
    c.ensembles = {"nonprimitive", "primitive", "twisted"};
    c.n_grid = {2000, 20000, 200000};
    c.haar_samples = 4000000;
  } else if (name == "negative_control") {
    // rationally linear section with an affine-sensitive observable
    c.section = "zero";
    c.f = "bump:0.7,0.15";
    c.psi = "smooth:0,2";
    c.ensembles = {"nonprimitive"};
    c.n_grid = {100000};
    c.haar_samples = 4000000;
  } else if (name != "custom") {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return c;
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig c;
  bool preset_seen = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "preset") {
      // expand first so later keys can override preset values
      if (preset_seen) throw std::invalid_argument("config: preset given twice");
      preset_seen = true;
      const std::string out_keep = c.out;
      c = preset_config(val);
      c.out = out_keep;
    } else if (key == "section") {
      c.section = val;
    } else if (key == "f") {
      c.f = val;
    } else if (key == "psi") {
      c.psi = val;
    } else if (key == "ensembles") {
      c.ensembles = split(val, ',');
    } else if (key == "n_grid") {
      c.n_grid = parse_int_list(val);
    } else if (key == "q_grid") {
      if (val == "auto" || val == "auto_primes") {
        c.q_auto = true;
        c.q_primes_only = val == "auto_primes";
        c.q_grid.clear();
      } else {
        c.q_auto = false;
        c.q_primes_only = false;
        c.q_grid = parse_int_list(val);
      }
    } else if (key == "twist_count") {
      c.twist_count = std::stoll(val);
    } else if (key == "haar_samples") {
      c.haar_samples = std::stoll(val);
    } else if (key == "quad_points") {
      c.quad_points = std::stoll(val);
    } else if (key == "seed") {
      c.seed = std::stoull(val);
    } else if (key == "workers") {
      c.workers = std::stoi(val);
    } else if (key == "out") {
      c.out = val;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "preset = " << preset << "\n";
  out << "section = " << section << "\n";
  out << "f = " << f << "\n";
  out << "psi = " << psi << "\n";
  out << "ensembles = " << join_str_list(ensembles) << "\n";
  out << "n_grid = " << join_int_list(n_grid) << "\n";
  out << "q_grid = "
      << (q_auto ? std::string(q_primes_only ? "auto_primes" : "auto") : join_int_list(q_grid))
      << "\n";
  out << "twist_count = " << twist_count << "\n";
  out << "haar_samples = " << haar_samples << "\n";
  out << "quad_points = " << quad_points << "\n";
  out << "seed = " << seed << "\n";
  out << "workers = " << workers << "\n";
  out << "out = " << this->out << "\n";
  return out.str();
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << serialize();
}

void ExperimentConfig::validate() const {
  section_from_spec(section);
  test_function_from_spec(f);
  weight_from_spec(psi);
  for (const auto& e : ensembles)
    if (e != "continuous" && e != "nonprimitive" && e != "primitive" && e != "twisted")
      throw std::invalid_argument("unknown ensemble: " + e);
  auto check_grid = [](const std::vector<std::int64_t>& g, const char* name) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < 1) throw std::invalid_argument(std::string(name) + ": values must be >= 1");
      if (i && g[i] <= g[i - 1])
        throw std::invalid_argument(std::string(name) + ": grid must be strictly increasing");
    }
  };
  check_grid(n_grid, "n_grid");
  check_grid(q_grid, "q_grid");
  if (ensembles.empty()) throw std::invalid_argument("ensembles: at least one required");
  if (n_grid.empty()) throw std::invalid_argument("n_grid: at least one value required");
  if (twist_count < 1) throw std::invalid_argument("twist_count must be >= 1");
  if (haar_samples < 100) throw std::invalid_argument("haar_samples must be >= 100");
  if (quad_points < 64) throw std::invalid_argument("quad_points must be >= 64");
}

std::vector<std::int64_t> derive_q_grid(const std::vector<std::int64_t>& n_grid,
                                        const SieveTable& sieve, bool primes_only) {
  // primes just above each N, plus a divisor-rich q near each N so the
  // phi(q)/q contrast is visible in the primitive columns
  std::vector<std::int64_t> out;
  for (std::int64_t n : n_grid) {
    out.push_back(sieve.next_prime(n));
    if (primes_only) continue;
    std::int64_t best = n, best_div = 0;
    const std::int64_t lo = std::max<std::int64_t>(2, n - n / 10);
    const std::int64_t hi = std::min<std::int64_t>(sieve.limit(), n + n / 10);
    for (std::int64_t q = lo; q <= hi; ++q) {
      std::int64_t d = 1, m = q;
      while (m > 1) {
        const std::int64_t p = sieve.smallest_prime_factor(m);
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        d *= e + 1;
      }
      if (d > best_div) { best_div = d; best = q; }
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace horolab
