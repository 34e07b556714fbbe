// Copyright 2026 The Ninionics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ninionics/ninionics.hpp"

namespace ninionics::cli {
namespace {

using json = nlohmann::ordered_json;

// Bad flag values found after CLI11 accepted the syntax.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Report model: named tables whose rows are produced on demand, so large
// scans stream into the output buffer without an intermediate list.

using Cell = std::variant<std::int64_t, double, std::string, bool>;
using Row = std::vector<Cell>;
using RowSink = std::function<void(const Row&)>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::function<void(const RowSink&)> rows;
};

struct Report {
  json parameters = json::object();
  json summary = json::object();
  std::vector<Table> tables;
  std::vector<std::string> notices;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return q + "\"";
        }
      },
      c);
}

std::string json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? format_double(v) : "null";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return json(v).dump();
      },
      c);
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  t.rows([&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << '\n';
  });
}

void write_json(const std::string& command, const Report& rep, std::ostream& os) {
  os << "{\n\"schema_version\": " << kSchemaVersion << ",\n\"command\": " << json(command).dump()
     << ",\n\"parameters\": " << rep.parameters.dump() << ",\n\"summary\": " << rep.summary.dump()
     << ",\n\"tables\": {";
  for (std::size_t k = 0; k < rep.tables.size(); ++k) {
    const Table& t = rep.tables[k];
    os << (k ? ",\n" : "\n") << json(t.name).dump() << ": {\"columns\": " << json(t.columns).dump()
       << ", \"rows\": [";
    bool first = true;
    t.rows([&](const Row& r) {
      os << (first ? "\n[" : ",\n[");
      first = false;
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? ", " : "") << json_cell(r[i]);
      os << ']';
    });
    os << "]}";
  }
  os << "\n}\n}\n";
}

// ---------------------------------------------------------------------------
// Argument parsing helpers.

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw UsageError("invalid integer for " + what + ": '" + s + "'");
  return v;
}

// Exact value of "p/q" or a plain decimal such as "-0.125".
ReducedFraction parse_exact(const std::string& s, const std::string& what) {
  static const std::regex frac(R"(^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$)");
  static const std::regex dec(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?\s*$)");
  std::smatch m;
  try {
    if (std::regex_match(s, m, frac)) {
      const std::int64_t q = parse_int(m[2], what);
      if (q == 0) throw UsageError(what + ": denominator zero");
      return reduce(parse_int(m[1], what), q);
    }
    if (std::regex_match(s, m, dec) && (m[2].length() + m[3].length()) > 0) {
      const std::string digits = m[2].str() + m[3].str();
      if (digits.size() > 18) throw UsageError(what + ": too many digits in '" + s + "'");
      std::int64_t den = 1;
      for (std::size_t i = 0; i < static_cast<std::size_t>(m[3].length()); ++i) den *= 10;
      std::int64_t num = parse_int(digits, what);
      if (m[1] == "-") num = -num;
      return reduce(num, den);
    }
  } catch (const std::overflow_error&) {
    throw UsageError(what + ": value out of range '" + s + "'");
  }
  throw UsageError("invalid fraction for " + what + ": '" + s + "' (expected p/q or a decimal)");
}

// Turns given as "p/q" are exact; decimals go through the best rational
// approximation and therefore need an explicit --q-max.
ReducedFraction parse_turns(const std::string& s, std::int64_t q_max, const std::string& what) {
  if (s.find('/') != std::string::npos) return parse_exact(s, what);
  if (q_max <= 0) throw UsageError(what + ": decimal input '" + s + "' needs --q-max");
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x))
    throw UsageError("invalid number for " + what + ": '" + s + "'");
  return approximate_rational(x, q_max);
}

// Angles: plain numbers in radians, or multiples of pi such as "pi/4",
// "3pi/4", "-2*pi/3".
double parse_angle(const std::string& s) {
  static const std::regex re(R"(^\s*([+-]?)(\d+(?:\.\d*)?|\.\d+)?\s*(\*?\s*pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re) || (!m[2].matched && !m[3].matched))
    throw UsageError("invalid angle '" + s + "' (expected a number or an expression in pi)");
  if (m[3].matched && m[3].str().front() == '*' && !m[2].matched) throw UsageError("invalid angle '" + s + "'");
  long double v = m[2].matched ? std::stold(m[2].str()) : 1.0L;
  if (m[3].matched) v *= std::numbers::pi_v<long double>;
  if (m[4].matched) {
    const long double d = std::stold(m[4].str());
    if (d == 0) throw UsageError("invalid angle '" + s + "': division by zero");
    v /= d;
  }
  if (m[1] == "-") v = -v;
  return static_cast<double>(v);
}

std::pair<ReducedFraction, ReducedFraction> parse_window(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("--window expects lo,hi");
  const ReducedFraction lo = parse_exact(s.substr(0, comma), "--window");
  const ReducedFraction hi = parse_exact(s.substr(comma + 1), "--window");
  if (lo < ReducedFraction(0, 1) || hi > ReducedFraction(1, 1)) throw UsageError("--window must lie inside [0, 1]");
  return {lo, hi};
}

Family parse_family_flag(const std::string& s) {
  try {
    return parse_family(s);
  } catch (const std::exception&) {
    throw UsageError("unknown family '" + s + "' (expected bose or fermi)");
  }
}

json fraction_json(const ReducedFraction& f) { return f.to_string(); }

// ---------------------------------------------------------------------------
// Subcommands. Each `prepare` function validates its flags and returns a
// closure that performs the computation.

struct Common {
  std::string format = "csv";
  std::string output;
  std::string table;
  unsigned threads = 1;
};

using Job = std::function<Report()>;

struct ThomaeArgs {
  std::vector<std::string> fractions;
  std::int64_t q_max = 0;
};

Job prepare_thomae(const ThomaeArgs& a) {
  std::vector<std::pair<std::string, ReducedFraction>> xs;
  for (const auto& s : a.fractions) xs.emplace_back(s, parse_turns(s, a.q_max, "--fraction"));
  return [xs, a] {
    Report r;
    r.parameters["fractions"] = a.fractions;
    if (a.q_max > 0) r.parameters["q_max"] = a.q_max;
    r.tables.push_back({"thomae",
                        {"input", "numerator", "denominator", "thomae", "thomae_real", "energy_ratio", "entropy_ratio"},
                        [xs](const RowSink& emit) {
                          for (const auto& [s, x] : xs) {
                            const auto sample = fractal::make_sample(x);
                            const ReducedFraction t = thomae(x);
                            emit({s, x.num(), x.den(), t.to_string(), t.to_double(), sample.energy_ratio,
                                  sample.entropy_ratio});
                          }
                        }});
    return r;
  };
}

struct IdentityArgs {
  std::string family = "bose";
  std::int64_t q_max = 64;
  std::vector<double> gammas;
  bool flipped = false;
  bool rows = false;
};

Job prepare_identity(const IdentityArgs& a, unsigned threads) {
  const Family fam = parse_family_flag(a.family);
  std::vector<double> gammas = a.gammas.empty() ? std::vector<double>{0.1, 1.0, 10.0} : a.gammas;
  for (double g : gammas)
    if (!(g >= identities::IdentityOptions{}.gamma_floor)) throw UsageError("--gamma must be >= 1e-6");
  if (a.flipped && fam != Family::fermi) throw UsageError("--flipped-sign applies to fermions only");
  return [=] {
    const auto sign = a.flipped ? identities::FermionSign::flipped : identities::FermionSign::standard;
    auto checks = std::make_shared<std::vector<identities::IdentityCheck>>(
        identities::scan_identities(fam, a.q_max, gammas, sign, threads));
    Report r;
    r.parameters = {{"family", std::string(to_string(fam))},
                    {"q_max", a.q_max},
                    {"gammas", gammas},
                    {"sign", a.flipped ? "flipped" : "standard"}};
    double worst = 0.0, worst_imag = 0.0;
    for (const auto& c : *checks) {
      worst = std::max(worst, c.residual);
      worst_imag = std::max(worst_imag, c.imag);
    }
    r.summary = {{"checks", checks->size()}, {"max_residual", worst}, {"max_imag", worst_imag}};
    Table summary{"summary",
                  {"family", "sign", "q_max", "gamma", "checks", "max_residual", "max_imag", "worst_p", "worst_q"},
                  [=](const RowSink& emit) {
                    for (double g : gammas) {
                      std::int64_t n = 0;
                      const identities::IdentityCheck* w = nullptr;
                      double mi = 0.0;
                      for (const auto& c : *checks) {
                        if (c.gamma != g) continue;
                        ++n;
                        mi = std::max(mi, c.imag);
                        if (w == nullptr || c.residual > w->residual) w = &c;
                      }
                      emit({std::string(to_string(fam)), std::string(a.flipped ? "flipped" : "standard"), a.q_max, g,
                            n, w ? w->residual : 0.0, mi, w ? w->p : 0, w ? w->q : 0});
                    }
                  }};
    Table detail{"checks", {"p", "q", "gamma", "lhs", "rhs", "residual", "imag"}, [checks](const RowSink& emit) {
                   for (const auto& c : *checks) emit({c.p, c.q, c.gamma, c.lhs, c.rhs, c.residual, c.imag});
                 }};
    if (a.rows) {
      r.tables.push_back(detail);
      r.tables.push_back(summary);
    } else {
      r.tables.push_back(summary);
    }
    return r;
  };
}

struct ThermoArgs {
  std::string family = "bose";
  std::string chi = "0/1";
  std::int64_t q_max = 0;
  double beta = 1.0;
  std::string method = "closed";
  double mass = 0.0;
  double mu = 0.0;
  std::int64_t degeneracy = 1;
};

const std::vector<std::string> kThermoColumns = {
    "family", "chi_numerator", "chi_denominator", "method", "ensemble", "multiplicity", "beta_multiplier",
    "beta", "effective_beta", "f", "energy", "pressure", "entropy", "quadrature_error", "imag"};

Job prepare_thermo(const ThermoArgs& a, unsigned threads) {
  const Family fam = parse_family_flag(a.family);
  const ReducedFraction turns = parse_turns(a.chi, a.q_max, "--chi");
  if (a.method != "closed" && a.method != "quadrature") throw UsageError("--method must be closed or quadrature");
  if (a.method == "closed" && (a.mass != 0.0 || a.mu != 0.0))
    throw UsageError("closed forms cover the massless gas at mu = 0; use --method quadrature");
  return [=] {
    const StatAngle chi(turns);
    const ReducedFraction canon = fam == Family::bose ? chi.bosonic_canonical() : chi.fermionic_canonical();
    const std::int64_t p = canon.num(), q = canon.den();
    const thermo::MappedEnsemble m =
        fam == Family::bose ? thermo::boson_equivalence(p, q, a.beta) : thermo::fermion_equivalence(p, q, a.beta);
    const ReducedFraction dof = ReducedFraction::integer(a.degeneracy);
    const thermo::PowerLaw law = fam == Family::bose ? thermo::mapped_law(m).scaled(dof)
                                                     : thermo::fermion_gas_law(m, a.degeneracy);
    thermo::ThermoQuantities t;
    double err = 0.0, imag = 0.0;
    if (a.method == "closed") {
      t = law.evaluate(a.beta);
    } else {
      thermo::GasSpec gas{fam, a.mass, a.mu, static_cast<double>(a.degeneracy)};
      thermo::QuadratureConfig cfg;
      cfg.threads = threads;
      auto f_of = [&](double b) { return thermo::free_energy_quadrature(gas, b, chi, cfg).value; };
      const auto est = thermo::free_energy_quadrature(gas, a.beta, chi, cfg);
      err = est.error;
      imag = est.imag;
      t = thermo::power_law_quantities(est.value, m.effective_beta);
      if (a.mass != 0.0) {
        t.energy = thermo::finite_difference_energy(f_of, a.beta);
        t.entropy = m.effective_beta * (t.energy + t.pressure);
      }
    }
    Report r;
    r.parameters = {{"family", std::string(to_string(fam))}, {"chi_turns", fraction_json(turns)},
                    {"beta", a.beta},   {"method", a.method}, {"mass", a.mass}, {"mu", a.mu},
                    {"degeneracy", a.degeneracy}};
    r.summary = {{"free_energy_coeff_pi2", law.free_energy_coeff().to_string()},
                 {"energy_coeff_pi2", law.energy_coeff().to_string()},
                 {"entropy_coeff_pi2", law.entropy_coeff().to_string()},
                 {"pressure_residual", t.pressure_residual()},
                 {"entropy_residual", t.entropy_residual()}};
    const Row row = {std::string(to_string(fam)), p, q, a.method, std::string(thermo::to_string(m.out_family)),
                     m.multiplicity, m.beta_multiplier, a.beta, m.effective_beta, t.f, t.energy, t.pressure,
                     t.entropy, err, imag};
    r.tables.push_back({"thermo", kThermoColumns, [row](const RowSink& emit) { emit(row); }});
    return r;
  };
}

struct WallsArgs {
  double beta = 1.0;
  bool rotating = false;
};

Job prepare_walls(const WallsArgs& a) {
  return [=] {
    const auto w = thermo::crossed_walls_thermo(a.beta, a.rotating);
    const auto base = thermo::crossed_walls_thermo(a.beta, false).quantities;
    Report r;
    r.parameters = {{"beta", a.beta}, {"rotating", a.rotating}};
    std::vector<Row> rows;
    const std::string src = w.reported_value ? "reported" : "count_factor";
    rows.push_back({src, w.quantities.f, w.quantities.energy, w.quantities.pressure, w.quantities.entropy,
                    w.quantities.energy / base.energy, 0.0, 0.0});
    if (w.oracle) {
      const auto& o = *w.oracle;
      rows.push_back({std::string("oracle"), o.quantities.f, o.quantities.energy, o.quantities.pressure,
                      o.quantities.entropy, o.quantities.energy / base.energy, o.energy_relative_deviation,
                      o.entropy_relative_deviation});
      r.summary = {{"mode_integral", o.mode_integral},
                   {"series_value", o.series_value},
                   {"mode_relative_error", o.mode_relative_error},
                   {"odd_count", o.odd_count},
                   {"energy_relative_deviation", o.energy_relative_deviation},
                   {"entropy_relative_deviation", o.entropy_relative_deviation}};
    } else {
      r.summary = {{"odd_count", thermo::extrapolated_odd_count_ratio()}};
    }
    r.tables.push_back({"walls",
                        {"source", "f", "energy", "pressure", "entropy", "energy_ratio_to_static",
                         "energy_relative_deviation", "entropy_relative_deviation"},
                        [rows](const RowSink& emit) {
                          for (const Row& row : rows) emit(row);
                        }});
    return r;
  };
}

struct OccupationArgs {
  std::string family = "bose";
  std::vector<std::string> xis;
  double x_min = 0.01;
  double x_max = 5.0;
  std::int64_t points = 100;
  double beta_mu = 0.0;
  std::string chi;
  std::int64_t q_max = 0;
  std::int64_t m_min = 0;
  std::int64_t m_max = 8;
};

Job prepare_occupation(const OccupationArgs& a) {
  const Family fam = parse_family_flag(a.family);
  if (!a.chi.empty()) {
    const ReducedFraction turns = parse_turns(a.chi, a.q_max, "--chi");
    if (a.m_max < a.m_min) throw UsageError("--m-max must be >= --m-min");
    return [=] {
      const auto levels = occupation::classify_levels(StatAngle(turns), fam, a.m_min, a.m_max);
      Report r;
      r.parameters = {{"family", std::string(to_string(fam))}, {"chi_turns", fraction_json(turns)},
                      {"m_min", a.m_min}, {"m_max", a.m_max}};
      r.tables.push_back({"levels", {"m", "xi", "xi_canonical", "xi_turns", "label", "beta_multiplier"},
                          [levels](const RowSink& emit) {
                            for (const auto& l : levels)
                              emit({l.m, l.xi.raw, l.xi.canonical, l.xi.canonical_turns.to_string(),
                                    std::string(occupation::to_string(l.cls.label)), l.cls.beta_multiplier});
                          }});
      return r;
    };
  }
  if (a.xis.empty()) throw UsageError("occupation needs --xi or --chi");
  std::vector<double> xis;
  for (const auto& s : a.xis) xis.push_back(parse_angle(s));
  if (a.points < 1) throw UsageError("--points must be >= 1");
  if (!(a.x_max >= a.x_min)) throw UsageError("--beta-omega-max must be >= --beta-omega-min");
  return [=] {
    struct Point {
      double xi, x, n;
      occupation::LevelClass cls;
    };
    std::vector<Point> pts;
    for (double xi : xis)
      for (std::int64_t i = 0; i < a.points; ++i) {
        const double x = a.points == 1 ? a.x_min
                                       : a.x_min + (a.x_max - a.x_min) * static_cast<double>(i) /
                                                       static_cast<double>(a.points - 1);
        pts.push_back({xi, x, occupation::occupation({fam, xi, 1.0, x, a.beta_mu}), occupation::limit_form(fam, xi)});
      }
    Report r;
    r.parameters = {{"family", std::string(to_string(fam))}, {"xi", a.xis}, {"beta_omega_min", a.x_min},
                    {"beta_omega_max", a.x_max}, {"points", a.points}, {"beta_mu", a.beta_mu}};
    r.tables.push_back({"occupation", {"xi", "xi_canonical", "beta_omega", "occupation", "label", "beta_multiplier"},
                        [pts](const RowSink& emit) {
                          for (const auto& p : pts)
                            emit({p.xi, occupation::canonical_angle(p.xi), p.x, p.n,
                                  std::string(occupation::to_string(p.cls.label)), p.cls.beta_multiplier});
                        }});
    return r;
  };
}

const std::vector<std::string> kScanColumns = {"chi_numerator", "chi_denominator", "chi_real",
                                               "q",             "energy_ratio",    "entropy_ratio"};

Row sample_row(const fractal::FractalSample& s) {
  return {s.chi_turns.num(), s.chi_turns.den(), s.chi_turns.to_double(), s.q, s.energy_ratio, s.entropy_ratio};
}

struct ScanArgs {
  std::int64_t order = 50;
  std::string window = "0,1";
  std::int64_t zoom = 0;
  std::string witness;
  double distance = 1e-6;
  double factor = 1e8;
};

Job prepare_scan(const ScanArgs& a) {
  const auto [lo, hi] = parse_window(a.window);
  std::optional<ReducedFraction> x0;
  if (!a.witness.empty()) x0 = parse_exact(a.witness, "--witness");
  return [=] {
    Report r;
    r.parameters = {{"order", a.order}, {"window", {fraction_json(lo), fraction_json(hi)}}};
    if (a.zoom > 0) {
      const auto rep = fractal::self_similarity_check(a.order, lo, hi, a.zoom);
      r.parameters["zoom"] = a.zoom;
      r.summary = {{"ok", rep.ok()}};
      const auto n = [](std::size_t v) { return static_cast<std::int64_t>(v); };
      const std::vector<Row> rows = {
          {std::string("numerator_irrelevant"), rep.numerator_irrelevant, n(rep.outer_samples + rep.zoomed_samples)},
          {std::string("mediant_property"), rep.mediant_property, n(rep.outer_samples + rep.zoomed_samples)},
          {std::string("stern_brocot_descent"), rep.stern_brocot_descent, n(rep.descent_pairs_checked)}};
      r.summary["outer_samples"] = rep.outer_samples;
      r.summary["zoomed_samples"] = rep.zoomed_samples;
      r.tables.push_back({"self_similarity", {"check", "passed", "items_checked"}, [rows](const RowSink& emit) {
                            for (const Row& row : rows) emit(row);
                          }});
      return r;
    }
    if (x0) {
      const auto w = fractal::non_continuity_witness(*x0, a.distance, a.factor);
      r.parameters["witness"] = fraction_json(*x0);
      r.summary = {{"distance", w.distance}, {"suppression", w.suppression}};
      r.tables.push_back({"witness", kScanColumns, [w](const RowSink& emit) {
                            emit(sample_row(w.at_x0));
                            emit(sample_row(w.nearby));
                          }});
      return r;
    }
    r.tables.push_back({"samples", kScanColumns, [=](const RowSink& emit) {
                          fractal::for_each_sample(a.order, lo, hi, [&](const fractal::FractalSample& s) {
                            emit(sample_row(s));
                            return true;
                          });
                        }});
    return r;
  };
}

struct NogoArgs {
  std::int64_t n = 1;
  std::vector<std::int64_t> ms;
  std::string mode = "fixed";
  std::string target;
};

Job prepare_nogo(const NogoArgs& a) {
  fractal::ProbeMode mode;
  if (a.mode == "fixed" || a.mode == "fixed_denominator") mode = fractal::ProbeMode::fixed_denominator;
  else if (a.mode == "growing" || a.mode == "growing_denominator") mode = fractal::ProbeMode::growing_denominator;
  else throw UsageError("--mode must be fixed or growing");
  std::optional<ReducedFraction> target;
  if (!a.target.empty()) target = parse_exact(a.target, "--target");
  std::vector<std::int64_t> ms = a.ms;
  if (ms.empty())
    for (std::int64_t m = a.n + 1; m <= a.n + 40; ++m) ms.push_back(m);
  return [=] {
    const auto probe = fractal::prime_sequence_probe(a.n, ms, mode, target);
    Report r;
    r.parameters = {{"n", a.n}, {"prime_n", probe.prime_n}, {"m", ms}, {"mode", std::string(to_string(mode))}};
    if (target) r.parameters["target"] = fraction_json(*target);
    r.summary = {{"target", probe.target}, {"limit_estimate", probe.limit_estimate}, {"skipped", probe.skipped}};
    for (std::int64_t m : probe.skipped)
      r.notices.push_back("notice: skipped m = " + std::to_string(m) + " (P_m divisible by P_n)");
    r.tables.push_back({"sequence",
                        {"m_index", "prime_m", "chi_numerator", "chi_denominator", "chi_real", "q", "distance",
                         "energy_ratio", "fermion_ghost"},
                        [probe](const RowSink& emit) {
                          for (const auto& p : probe.points)
                            emit({p.m_index, p.prime_m, p.chi_turns.num(), p.chi_turns.den(), p.chi_turns.to_double(),
                                  p.chi_turns.den(), p.distance, p.energy_ratio, p.fermion_ghost});
                        }});
    return r;
  };
}

struct RotorArgs {
  double inertia = 0.5;
  double beta = 1.0;
  std::int64_t m_cut = 50;
  std::vector<std::string> chis;
  std::int64_t chi_points = 9;
  std::string offset = "integer";
  std::int64_t grid = 0;
};

Job prepare_rotor(const RotorArgs& a) {
  rotor::PhaseOffset off;
  if (a.offset == "integer") off = rotor::PhaseOffset::integer;
  else if (a.offset == "half") off = rotor::PhaseOffset::half_integer;
  else throw UsageError("--offset must be integer or half");
  std::vector<double> chis;
  for (const auto& s : a.chis) chis.push_back(parse_angle(s));
  if (chis.empty()) {
    if (a.chi_points < 2) throw UsageError("--chi-points must be >= 2");
    for (std::int64_t i = 0; i < a.chi_points; ++i)
      chis.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                             static_cast<double>(a.chi_points - 1));
  }
  return [=] {
    const rotor::RotorSpec spec{a.inertia, a.m_cut};
    struct ZRow {
      double chi;
      std::complex<double> z, k;
    };
    std::vector<ZRow> zs;
    for (double chi : chis)
      zs.push_back({chi, rotor::partition_rotwisted(spec, a.beta, chi, off),
                    rotor::generating_function(spec, a.beta, chi, off)});
    const auto dist = rotor::angular_distribution(spec, a.beta, static_cast<std::size_t>(a.grid), off);
    const double z0 = rotor::partition_plain(spec, a.beta);
    Report r;
    r.parameters = {{"inertia", a.inertia}, {"beta", a.beta}, {"m_cut", a.m_cut}, {"offset", a.offset},
                    {"grid_points", dist.grid_points}};
    r.summary = {{"z0", z0}, {"sum_r", dist.total()}, {"max_imag_r", dist.max_imag}};
    r.tables.push_back({"partition", {"chi", "re_z", "im_z", "re_k", "im_k"}, [zs](const RowSink& emit) {
                          for (const auto& z : zs) emit({z.chi, z.z.real(), z.z.imag(), z.k.real(), z.k.imag()});
                        }});
    r.tables.push_back({"distribution", {"m", "r", "boltzmann"}, [dist, spec, a, z0](const RowSink& emit) {
                          for (std::size_t i = 0; i < dist.weights.size(); ++i) {
                            const std::int64_t m = dist.m_min + static_cast<std::int64_t>(i);
                            emit({m, dist.weights[i], std::exp(-a.beta * spec.energy(m)) / z0});
                          }
                        }});
    return r;
  };
}

std::string error_category(const std::exception& e) {
  if (dynamic_cast<const zero_crossing_error*>(&e)) return "zero_crossing";
  if (dynamic_cast<const truncation_error*>(&e)) return "truncation";
  if (dynamic_cast<const aliasing_error*>(&e)) return "aliasing";
  if (dynamic_cast<const pole_error*>(&e)) return "pole";
  if (dynamic_cast<const singularity_error*>(&e)) return "singularity";
  if (dynamic_cast<const domain_error*>(&e)) return "domain";
  if (dynamic_cast<const std::overflow_error*>(&e)) return "overflow";
  return "numerical";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermodynamics of free gases under imaginary rotation", "ninionics"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", common.output, "Write to a file instead of standard output");
  app.add_option("--table", common.table, "Table to emit in CSV mode (default: the first)");
  app.add_option("--threads", common.threads, "Worker threads (capped by NINIONICS_THREADS)")
      ->check(CLI::Range(1u, 1024u));

  Job job;
  std::string command;
  auto positive = CLI::PositiveNumber;

  ThomaeArgs ta;
  auto* thomae_cmd = app.add_subcommand("thomae", "Thomae function of a statistical angle");
  thomae_cmd->add_option("--fraction", ta.fractions, "p/q or decimal (decimals need --q-max)")
      ->required()
      ->delimiter(',');
  thomae_cmd->add_option("--q-max", ta.q_max, "Largest denominator for decimal inputs")->check(CLI::Range(1LL, 1000000000LL));

  IdentityArgs ia;
  auto* ident_cmd = app.add_subcommand("identity", "Check the finite phase-sum identities");
  ident_cmd->add_option("--family", ia.family)->check(CLI::IsMember({"bose", "boson", "fermi", "fermion"}));
  ident_cmd->add_option("--q-max", ia.q_max)->check(CLI::Range(1LL, 4096LL));
  ident_cmd->add_option("--gamma", ia.gammas, "beta * omega values")->delimiter(',')->check(positive);
  ident_cmd->add_flag("--flipped-sign", ia.flipped, "Use the wrong fermionic sign (mutation check)");
  ident_cmd->add_flag("--rows", ia.rows, "Emit every individual check");

  ThermoArgs th;
  auto* thermo_cmd = app.add_subcommand("thermo", "Free gas thermodynamics at a rational statistical angle");
  thermo_cmd->add_option("--family", th.family)->check(CLI::IsMember({"bose", "boson", "fermi", "fermion"}));
  thermo_cmd->add_option("--chi", th.chi, "chi / 2pi as p/q or decimal");
  thermo_cmd->add_option("--q-max", th.q_max)->check(CLI::Range(1LL, 1000000LL));
  thermo_cmd->add_option("--beta", th.beta)->check(positive);
  thermo_cmd->add_option("--method", th.method)->check(CLI::IsMember({"closed", "quadrature"}));
  thermo_cmd->add_option("--mass", th.mass, "beta * M")->check(CLI::NonNegativeNumber);
  thermo_cmd->add_option("--mu", th.mu, "Chemical potential");
  thermo_cmd->add_option("--degeneracy", th.degeneracy, "Degrees of freedom (2 for a Dirac fermion)")
      ->check(CLI::Range(1LL, 1000LL));

  WallsArgs wa;
  auto* walls_cmd = app.add_subcommand("walls", "Crossed Dirichlet-Neumann walls");
  walls_cmd->add_option("--beta", wa.beta)->check(positive);
  walls_cmd->add_flag("--rotating", wa.rotating, "Rotate by half a turn per period");

  OccupationArgs oa;
  auto* occ_cmd = app.add_subcommand("occupation", "Occupation numbers along beta*omega, or level classes");
  occ_cmd->add_option("--family", oa.family)->check(CLI::IsMember({"bose", "boson", "fermi", "fermion"}));
  occ_cmd->add_option("--xi", oa.xis, "Statistical parameters, e.g. pi/4,pi/2")->delimiter(',');
  occ_cmd->add_option("--beta-omega-min", oa.x_min);
  occ_cmd->add_option("--beta-omega-max", oa.x_max);
  occ_cmd->add_option("--points", oa.points)->check(CLI::Range(1LL, 1000000LL));
  occ_cmd->add_option("--beta-mu", oa.beta_mu);
  occ_cmd->add_option("--chi", oa.chi, "Classify levels at chi / 2pi instead");
  occ_cmd->add_option("--q-max", oa.q_max)->check(CLI::Range(1LL, 1000000LL));
  occ_cmd->add_option("--m-min", oa.m_min);
  occ_cmd->add_option("--m-max", oa.m_max);

  ScanArgs sa;
  auto* scan_cmd = app.add_subcommand("scan", "Energy and entropy ratios over a Farey sequence");
  scan_cmd->add_option("--order", sa.order)->check(CLI::Range(1LL, 10000000LL));
  scan_cmd->add_option("--window", sa.window, "lo,hi inside [0,1], exact decimals or p/q");
  scan_cmd->add_option("--zoom", sa.zoom, "Run the self-similarity check at this zoom")->check(CLI::Range(1LL, 10000LL));
  scan_cmd->add_option("--witness", sa.witness, "Build a non-continuity witness near this rational");
  scan_cmd->add_option("--distance", sa.distance)->check(positive);
  scan_cmd->add_option("--factor", sa.factor)->check(CLI::Range(1.0, 1e30));

  NogoArgs na;
  auto* nogo_cmd = app.add_subcommand("nogo", "Prime-number sequences of statistical angles");
  nogo_cmd->add_option("--n", na.n, "Index of the prime P_n")->check(CLI::Range(1LL, 1000000LL));
  nogo_cmd->add_option("--m", na.ms, "Indices m of P_m")->delimiter(',')->check(CLI::Range(1LL, 1000000LL));
  nogo_cmd->add_option("--mode", na.mode)->check(CLI::IsMember({"fixed", "growing", "fixed_denominator", "growing_denominator"}));
  nogo_cmd->add_option("--target", na.target, "Accumulation point for the growing mode");

  RotorArgs ra;
  auto* rotor_cmd = app.add_subcommand("rotor", "Planar rotor generating function");
  rotor_cmd->add_option("--inertia", ra.inertia)->check(positive);
  rotor_cmd->add_option("--beta", ra.beta)->check(positive);
  rotor_cmd->add_option("--m-cut", ra.m_cut)->check(CLI::Range(1LL, 100000LL));
  rotor_cmd->add_option("--chi", ra.chis, "Angles, e.g. 0,pi/3")->delimiter(',');
  rotor_cmd->add_option("--chi-points", ra.chi_points)->check(CLI::Range(2LL, 100000LL));
  rotor_cmd->add_option("--offset", ra.offset)->check(CLI::IsMember({"integer", "half"}));
  rotor_cmd->add_option("--grid", ra.grid, "Points of the chi grid (default 4M+1)")->check(CLI::Range(0LL, 10000000LL));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    command = app.get_subcommands().front()->get_name();
    if (command == "thomae") job = prepare_thomae(ta);
    else if (command == "identity") job = prepare_identity(ia, common.threads);
    else if (command == "thermo") job = prepare_thermo(th, common.threads);
    else if (command == "walls") job = prepare_walls(wa);
    else if (command == "occupation") job = prepare_occupation(oa);
    else if (command == "scan") job = prepare_scan(sa);
    else if (command == "nogo") job = prepare_nogo(na);
    else job = prepare_rotor(ra);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ostringstream buffer;
  std::vector<std::string> notices;
  try {
    const Report rep = job();
    notices = rep.notices;
    if (common.format == "json") {
      write_json(command, rep, buffer);
    } else {
      const Table* t = rep.tables.empty() ? nullptr : &rep.tables.front();
      if (!common.table.empty()) {
        t = nullptr;
        for (const Table& c : rep.tables)
          if (c.name == common.table) t = &c;
        if (t == nullptr) {
          std::string names;
          for (const Table& c : rep.tables) names += (names.empty() ? "" : ", ") + c.name;
          err << "usage error: unknown table '" << common.table << "' (available: " << names << ")\n";
          return kExitUsage;
        }
      }
      if (t != nullptr) write_csv(*t, buffer);
    }
  } catch (const std::exception& e) {
    err << "error [" << error_category(e) << "]: " << e.what() << "\n";
    return kExitComputation;
  }

  if (common.output.empty()) {
    out << buffer.str();
    out.flush();
  } else {
    std::ofstream file(common.output, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "error [io]: cannot write " << common.output << "\n";
      return kExitComputation;
    }
  }
  for (const auto& n : notices) err << n << "\n";
  return kExitOk;
}

}  // namespace ninionics::cli
