#pragma once

// Command-line front end.  Exit codes: 0 all requested verdicts pass,
// 1 usage or input error, 2 a verdict failed (see reasons.txt).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wfl/frame_conditions.hpp"
#include "wfl/io.hpp"
#include "wfl/systems.hpp"
#include "wfl/windows.hpp"
#include "wfl/zak.hpp"

namespace wfl::cli {

enum class Command { Construct, Verify, Parseval, ZakCheck, Obstruction };
enum class Format { Json, Csv, Both };

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerdict = 2;

struct RunConfig {
  Command command = Command::Verify;
  std::optional<std::string> window_spec_path;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::size_t grid_n = 1024;
  std::optional<double> tol;
  std::optional<int> k_max;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  Format format = Format::Both;
  std::vector<double> betas{1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0};
  std::size_t zak_n = kDefaultZakN;
  std::size_t signals = 10;
};

/// Input problems that map to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "0.25", "1/4" or "1e-3".
inline double parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return parse_double(text);
    const double num = parse_double(std::string_view(text).substr(0, slash));
    const double den = parse_double(std::string_view(text).substr(slash + 1));
    if (den == 0.0) throw UsageError("zero denominator in '" + text + "'");
    return num / den;
  } catch (const std::invalid_argument&) {
    throw UsageError("not a number: '" + text + "'");
  }
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Construct: return "construct";
    case Command::Verify: return "verify";
    case Command::Parseval: return "parseval";
    case Command::ZakCheck: return "zak-check";
    case Command::Obstruction: return "obstruction";
  }
  return "?";
}

namespace detail {

inline Window load_window(const RunConfig& cfg, bool seed_default) {
  if (!cfg.window_spec_path) {
    if (seed_default) return gaussian_seed(1.0);
    throw UsageError(std::string("--window is required for ") + command_name(cfg.command));
  }
  std::ifstream in(*cfg.window_spec_path);
  if (!in) throw UsageError("cannot open window spec '" + *cfg.window_spec_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON in '" + *cfg.window_spec_path + "': " + e.what());
  }
  try {
    return window_from_json(j);
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid window spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid window spec: ") + e.what());
  }
}

/// Lattice from flags, falling back to the window's own parameters.
inline LatticeParams lattice_for(const RunConfig& cfg, const Window& w) {
  double alpha = 1.0;
  double beta = 0.5;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, IndicatorParams>) {
          alpha = p.alpha;
          beta = 1.0 / (2.0 * p.alpha);
        } else if constexpr (std::is_same_v<P, SmoothBumpParams> || std::is_same_v<P, ZakConstructedParams>) {
          beta = p.beta;
        }
      },
      w.params());
  try {
    return LatticeParams(cfg.alpha.value_or(alpha), cfg.beta.value_or(beta));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline void require_seed(const RunConfig& cfg, const Window& w) {
  if (w.kind() != WindowKind::Gaussian || w.perturbation())
    throw UsageError(std::string(command_name(cfg.command)) + " needs a gaussian seed window, got " +
                     to_string(w.kind()));
}

inline double require_zak_beta(double beta) {
  const LatticeParams lat(1.0, beta);
  if (!lat.inverse_beta_integral()) throw UsageError("1/beta must be a natural number, got beta = " + format_g(beta));
  return beta;
}

class Emitter {
 public:
  explicit Emitter(const RunConfig& cfg) : dir_(cfg.output_dir), format_(cfg.format) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      throw UsageError("cannot create output directory '" + dir_.string() + "'");
  }

  [[nodiscard]] bool json_enabled() const { return format_ != Format::Csv; }
  [[nodiscard]] bool csv_enabled() const { return format_ != Format::Json; }

  void write_json(const std::string& name, const json& j) const {
    if (json_enabled()) write(name, j.dump(2) + "\n");
  }

  template <typename Fn>
  void write_csv(const std::string& name, Fn&& fn) const {
    if (!csv_enabled()) return;
    std::ostringstream os;
    fn(os);
    write(name, os.str());
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw UsageError("cannot write '" + (dir_ / name).string() + "'");
  }

 private:
  std::filesystem::path dir_;
  Format format_;
};

struct Outcome {
  std::vector<std::string> failures;
  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

inline std::string exceeds(const std::string& name, double value, double tol) {
  return name + " = " + format_g(value) + " >= " + format_g(tol);
}

inline Outcome run_verify(const RunConfig& cfg, const Emitter& em, std::ostream& out) {
  const Window w = load_window(cfg, false);
  const LatticeParams lat = lattice_for(cfg, w);
  ScanOptions opt;
  opt.grid_n = cfg.grid_n;
  opt.tol = cfg.tol.value_or(default_tolerance(w));
  opt.k_max = cfg.k_max;
  const FrameReport rep = scan_frame_conditions(w, lat, opt);

  json j = report_to_json(rep);
  j["command"] = "verify";
  j["window"] = to_string(w.kind());
  em.write_json("report.json", j);
  em.write_csv("phi_k.csv", [&](std::ostream& os) { write_condition_csv(os, rep.phi_samples); });
  em.write_csv("delta_k.csv", [&](std::ostream& os) { write_condition_csv(os, rep.delta_samples); });

  out << "window            " << to_string(w.kind()) << "\n"
      << "lattice           alpha = " << format_g(lat.alpha()) << ", beta = " << format_g(lat.beta()) << "\n"
      << "max |Phi_0 - 1|   " << format_g(rep.max_phi0_dev) << "\n"
      << "max |Phi_k|       " << format_g(rep.max_phik_dev) << "\n"
      << "max |Delta_k|     " << format_g(rep.max_deltak_dev) << "\n"
      << "norm_sq           " << format_g(rep.norm_sq) << "\n"
      << "tight_gabor       " << (rep.tight_gabor.pass ? "true" : "false") << "\n"
      << "parseval_wilson   " << (rep.parseval_wilson.pass ? "true" : "false") << "\n"
      << "onb               " << (rep.onb.pass ? "true" : "false") << "\n";

  Outcome o;
  o.check(rep.max_phi0_dev < opt.tol, exceeds("max_phi0_dev", rep.max_phi0_dev, opt.tol));
  o.check(rep.max_phik_dev < opt.tol, exceeds("max_phik_dev", rep.max_phik_dev, opt.tol));
  o.check(rep.max_deltak_dev < opt.tol, exceeds("max_deltak_dev", rep.max_deltak_dev, opt.tol));
  return o;
}

inline Outcome run_parseval(const RunConfig& cfg, const Emitter& em, std::ostream& out) {
  const Window w = load_window(cfg, false);
  const LatticeParams lat = lattice_for(cfg, w);
  const double tol = cfg.tol.value_or(1e-6);
  ScanOptions opt;
  opt.grid_n = cfg.grid_n;
  opt.tol = default_tolerance(w);
  opt.k_max = cfg.k_max;
  opt.keep_samples = false;
  FrameReport rep = scan_frame_conditions(w, lat, opt);

  DirectOptions dopt;
  dopt.tol = tol;
  const auto signals = make_test_signals(cfg.seed, cfg.signals);
  Outcome o;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const auto& f = signals[i];
    const auto coeffs = wilson_coefficients(f, w, lat, dopt);
    const auto per = periodization_terms(f, w, lat);
    DeficitRecord d;
    d.seed = cfg.seed;
    d.signal_index = i;
    d.deficit_direct = std::abs(coeffs.energy - f.norm_sq()) / f.norm_sq();
    d.deficit_periodization = std::abs(per.i0 + per.i1 - f.norm_sq()) / f.norm_sq();
    d.decomposition_gap = std::abs(coeffs.energy - per.i0 - per.i1) / f.norm_sq();
    d.reconstruction_error = reconstruct(f, w, lat).rel_error;
    rep.deficits.push_back(d);
    if (i == 0) em.write_csv("coefficients.csv", [&](std::ostream& os) { write_coefficients_csv(os, coeffs); });
    const std::string tag = "signal " + std::to_string(i) + ": ";
    o.check(d.deficit_direct < tol, tag + exceeds("deficit_direct", d.deficit_direct, tol));
    o.check(d.decomposition_gap < tol, tag + exceeds("decomposition_gap", d.decomposition_gap, tol));
    out << "signal " << i << "  deficit " << format_g(d.deficit_direct) << "  periodization "
        << format_g(d.deficit_periodization) << "  gap " << format_g(d.decomposition_gap) << "  reconstruction "
        << format_g(d.reconstruction_error) << "\n";
    for (const auto& wmsg : coeffs.warnings)
      if (i == 0) out << "warning: " << wmsg << "\n";
  }
  json j = report_to_json(rep);
  j["command"] = "parseval";
  j["window"] = to_string(w.kind());
  j["deficit_tol"] = tol;
  em.write_json("report.json", j);
  return o;
}

inline Outcome run_construct(const RunConfig& cfg, const Emitter& em, std::ostream& out) {
  const Window seed = load_window(cfg, true);
  require_seed(cfg, seed);
  const double beta = require_zak_beta(cfg.beta.value_or(0.5));
  const double tol = cfg.tol.value_or(1e-8);
  const auto adm = seed_admissibility(seed, beta, cfg.zak_n, cfg.zak_n);
  Outcome o;
  json j{{"command", "construct"},
         {"beta", beta},
         {"nx", cfg.zak_n},
         {"ny", cfg.zak_n},
         {"admissibility", {{"min_value", adm.min_value}, {"x", adm.x}, {"eta", adm.eta}, {"admissible", adm.admissible}}}};
  if (!adm.admissible) {
    o.failures.push_back("seed not admissible: min energy " + format_g(adm.min_value) + " at (" + format_g(adm.x) +
                         ", " + format_g(adm.eta) + ")");
    em.write_json("report.json", j);
    return o;
  }
  const auto c = construct(seed, beta, cfg.zak_n, cfg.zak_n);
  const double nrm = window_l2_norm(c.window);
  const double dfc = dfc_check(c.window, beta, cfg.zak_n, cfg.zak_n);
  j["psi_quasi_periodicity"] = c.psi_qp_residual;
  j["psi_symmetry"] = c.psi_symmetry_residual;
  j["max_imag"] = c.max_imag;
  j["norm_sq"] = nrm * nrm;
  j["dfc_deviation"] = dfc;
  em.write_json("report.json", j);
  em.write("window.json", window_to_json(c.window).dump(2) + "\n");
  em.write_csv("zak.csv", [&](std::ostream& os) { write_zak(os, c.psi); });

  out << "admissibility min  " << format_g(adm.min_value) << "\n"
      << "norm_sq            " << format_g(nrm * nrm) << "\n"
      << "dfc deviation      " << format_g(dfc) << "\n"
      << "max |Im phihat|    " << format_g(c.max_imag) << "\n";
  o.check(dfc < tol, exceeds("dfc_deviation", dfc, tol));
  o.check(std::abs(nrm * nrm - 1.0) < tol, exceeds("|norm_sq - 1|", std::abs(nrm * nrm - 1.0), tol));
  return o;
}

inline Outcome run_zak_check(const RunConfig& cfg, const Emitter& em, std::ostream& out) {
  const Window g = load_window(cfg, true);
  require_seed(cfg, g);
  const double beta = require_zak_beta(cfg.beta.value_or(0.5));
  const double tol = cfg.tol.value_or(1e-8);
  constexpr double kQpTol = 1e-12;
  const ZakGrid z = zak_transform(g, beta, cfg.zak_n, cfg.zak_n);
  const double qp = quasi_periodicity_check(z);
  const double nrm = window_l2_norm(g);
  const double unit = std::abs(zak_norm_sq(z) - nrm * nrm);
  const auto inv = zak_inverse(z);
  double round_trip = 0.0;
  for (std::size_t i = 0; i < inv.size(); ++i)
    round_trip = std::max(round_trip, std::abs(inv[i] - g.time(inv.point(i))));
  const double rzf = zak_fourier_relation_check(g, beta);
  const auto adm = seed_admissibility(g, beta, cfg.zak_n, cfg.zak_n);

  json j{{"command", "zak-check"},
         {"beta", beta},
         {"nx", z.nx()},
         {"ny", z.ny()},
         {"truncation_k", z.truncation_k()},
         {"quasi_periodicity", qp},
         {"unitarity", unit},
         {"round_trip", round_trip},
         {"fourier_relation", rzf},
         {"admissibility", {{"min_value", adm.min_value}, {"x", adm.x}, {"eta", adm.eta}, {"admissible", adm.admissible}}}};
  em.write_json("report.json", j);
  em.write_csv("zak.csv", [&](std::ostream& os) { write_zak(os, z); });

  out << "quasi-periodicity  " << format_g(qp) << "\n"
      << "unitarity          " << format_g(unit) << "\n"
      << "round trip         " << format_g(round_trip) << "\n"
      << "fourier relation   " << format_g(rzf) << "\n"
      << "admissibility min  " << format_g(adm.min_value) << "\n";
  Outcome o;
  o.check(qp < kQpTol, exceeds("quasi_periodicity", qp, kQpTol));
  o.check(unit < tol, exceeds("unitarity", unit, tol));
  o.check(round_trip < tol, exceeds("round_trip", round_trip, tol));
  o.check(rzf < tol, exceeds("fourier_relation", rzf, tol));
  return o;
}

inline Outcome run_obstruction(const RunConfig& cfg, const Emitter& em, std::ostream& out) {
  const Window seed = load_window(cfg, true);
  require_seed(cfg, seed);
  for (double b : cfg.betas) require_zak_beta(b);
  const double tol = cfg.tol.value_or(1e-8);
  const auto rows = onb_obstruction_report({seed}, cfg.betas, cfg.zak_n, cfg.zak_n);
  em.write_json("report.json", json{{"command", "obstruction"}, {"rows", obstruction_to_json(rows)}});
  em.write_csv("obstruction.csv", [&](std::ostream& os) { write_obstruction_csv(os, rows); });

  out << "beta        norm_sq           required  onb_possible\n";
  Outcome o;
  for (const auto& r : rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-10.6g  %-16.12g  %-8.4g  %s\n", r.beta, r.norm_sq, r.required,
                  r.onb_possible ? "true" : "false");
    out << line;
    const std::string tag = "beta = " + format_g(r.beta) + ": ";
    o.check(std::abs(r.norm_sq - 1.0) < tol, tag + exceeds("|norm_sq - 1|", std::abs(r.norm_sq - 1.0), tol));
    if (std::lround(1.0 / r.beta) >= 3) o.check(!r.onb_possible, tag + "onb_possible = true");
  }
  return o;
}

inline void write_reasons(const RunConfig& cfg, const std::vector<std::string>& reasons) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  std::ofstream out(std::filesystem::path(cfg.output_dir) / "reasons.txt", std::ios::trunc);
  for (const auto& r : reasons) out << r << "\n";
}

}  // namespace detail

/// Runs one command and writes its report files into cfg.output_dir.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (cfg.grid_n < 64) throw UsageError("--grid-n must be at least 64");
    if (cfg.tol && !(*cfg.tol > 0.0)) throw UsageError("--tol must be positive");
    if (!is_power_of_two(cfg.zak_n) || cfg.zak_n < 64) throw UsageError("--zak-n must be a power of two >= 64");
    const detail::Emitter em(cfg);
    detail::Outcome o;
    switch (cfg.command) {
      case Command::Construct: o = detail::run_construct(cfg, em, out); break;
      case Command::Verify: o = detail::run_verify(cfg, em, out); break;
      case Command::Parseval: o = detail::run_parseval(cfg, em, out); break;
      case Command::ZakCheck: o = detail::run_zak_check(cfg, em, out); break;
      case Command::Obstruction: o = detail::run_obstruction(cfg, em, out); break;
    }
    if (o.failures.empty()) {
      std::error_code ec;
      std::filesystem::remove(std::filesystem::path(cfg.output_dir) / "reasons.txt", ec);
      return kExitPass;
    }
    detail::write_reasons(cfg, o.failures);
    for (const auto& f : o.failures) err << "FAILED: " << f << "\n";
    return kExitVerdict;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    detail::write_reasons(cfg, {std::string("input error: ") + e.what()});
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    detail::write_reasons(cfg, {std::string("input error: ") + e.what()});
    return kExitUsage;
  }
}

/// Parses argv into a RunConfig and runs it.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  CLI::App app{"Tight Gabor frame, Parseval Wilson frame and Zak-construction checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string alpha;
  std::string beta;
  std::string betas = "1/3,1/4,1/5";
  std::string format = "both";
  std::string window;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--window", window, "window spec JSON file");
    sub->add_option("--alpha", alpha, "modulation step alpha (default from the window, else 1)");
    sub->add_option("--beta", beta, "translation step beta, e.g. 1/4 (default from the window, else 1/2)");
    sub->add_option("--grid-n", cfg.grid_n, "xi samples per scanned interval")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "verdict tolerance (default 1e-8 closed-form, 1e-6 sampled)");
    sub->add_option("--k-max", cfg.k_max, "largest |k| scanned (default from the support)");
    sub->add_option("--seed", cfg.seed, "test-signal seed")->capture_default_str();
    sub->add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
    sub->add_option("--format", format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    sub->add_option("--zak-n", cfg.zak_n, "Zak grid size (power of two)")->capture_default_str();
  };
  struct Sub {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::Construct, "construct", "build a window from a gaussian seed through the Zak transform"},
      {Command::Verify, "verify", "scan Phi_k and Delta_k and report frame verdicts"},
      {Command::Parseval, "parseval", "measure Parseval deficits on seeded test signals"},
      {Command::ZakCheck, "zak-check", "check quasi-periodicity, unitarity and inversion of the Zak transform"},
      {Command::Obstruction, "obstruction", "tabulate constructed norms against the ONB requirement"},
  };
  std::vector<std::pair<CLI::App*, Command>> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    if (s.command == Command::Obstruction)
      sub->add_option("--betas", betas, "comma-separated betas with 1/beta natural")->capture_default_str();
    if (s.command == Command::Parseval)
      sub->add_option("--signals", cfg.signals, "number of test signals")->capture_default_str();
    apps.emplace_back(sub, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  for (const auto& [sub, command] : apps)
    if (sub->parsed()) cfg.command = command;
  try {
    if (!window.empty()) cfg.window_spec_path = window;
    if (!alpha.empty()) cfg.alpha = parse_rational(alpha);
    if (!beta.empty()) cfg.beta = parse_rational(beta);
    cfg.betas = parse_list(betas);
    cfg.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Both;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    detail::write_reasons(cfg, {std::string("input error: ") + e.what()});
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace wfl::cli
