#pragma once

// JSON and CSV serialization for windows, reports and Zak grids.
// Doubles are written in shortest round-trip form, so every write/read
// cycle is bit-exact and identical inputs give identical bytes.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "wfl/frame_conditions.hpp"
#include "wfl/systems.hpp"
#include "wfl/windows.hpp"
#include "wfl/zak.hpp"

namespace wfl {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return v;
}

// ---------------------------------------------------------------------------
// Windows
// ---------------------------------------------------------------------------

inline json sampled_to_json(const SampledFunction& f) {
  json re = json::array();
  json im = json::array();
  for (const cplx& v : f.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return json{{"lo", f.lo()}, {"hi", f.hi()}, {"n", f.size()}, {"re", re}, {"im", im}};
}

inline SampledFunction sampled_from_json(const json& j) {
  const GridSpec g{j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("n").get<std::size_t>()};
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != g.n || im.size() != g.n) throw std::invalid_argument("samples: re/im length must equal n");
  std::vector<cplx> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = {re[i].get<double>(), im[i].get<double>()};
  return SampledFunction(g, std::move(v));
}

inline json window_to_json(const Window& w) {
  json j;
  j["kind"] = to_string(w.kind());
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, IndicatorParams>) {
          j["alpha"] = p.alpha;
        } else if constexpr (std::is_same_v<P, SmoothBumpParams>) {
          j["beta"] = p.beta;
          j["eps_prime"] = p.eps_prime;
        } else if constexpr (std::is_same_v<P, GaussianParams>) {
          j["scale"] = p.scale;
        } else {
          j["beta"] = p.beta;
          j["seed_scale"] = p.seed_scale;
          j["nx"] = p.nx;
          j["ny"] = p.ny;
        }
      },
      w.params());
  if (w.gain() != 1.0) j["gain"] = w.gain();
  if (const auto& p = w.perturbation())
    j["perturbation"] = json{{"amplitude", p->amplitude}, {"center", p->center}, {"radius", p->radius}};
  if (const auto& s = w.sampled_hat()) j["samples"] = sampled_to_json(*s);
  return j;
}

inline Window window_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("window spec must be a JSON object");
  const WindowKind kind = window_kind_from_string(j.at("kind").get<std::string>());
  Window w = [&]() -> Window {
    switch (kind) {
      case WindowKind::Indicator:
        return indicator_window(j.at("alpha").get<double>());
      case WindowKind::SmoothBump: {
        std::optional<double> ep;
        if (j.contains("eps_prime")) ep = j.at("eps_prime").get<double>();
        return example2_window(j.at("beta").get<double>(), ep);
      }
      case WindowKind::Gaussian:
        return gaussian_seed(j.value("scale", 1.0));
      case WindowKind::ZakConstructed:
        if (!j.contains("samples")) throw std::invalid_argument("zak_constructed window requires samples");
        return Window(ZakConstructedParams{j.at("beta").get<double>(), j.value("seed_scale", 1.0),
                                           j.value("nx", kDefaultZakN), j.value("ny", kDefaultZakN)},
                      1.0, std::nullopt, sampled_from_json(j.at("samples")));
    }
    throw std::invalid_argument("unknown window kind");
  }();
  if (j.contains("gain")) w = w.scaled(j.at("gain").get<double>());
  if (j.contains("perturbation")) {
    const auto& p = j.at("perturbation");
    w = w.perturbed(Perturbation{p.at("amplitude").get<double>(), p.at("center").get<double>(),
                                 p.at("radius").get<double>()});
  }
  return w;
}

// ---------------------------------------------------------------------------
// Frame reports
// ---------------------------------------------------------------------------

inline json verdict_to_json(const Verdict& v) { return json{{"pass", v.pass}, {"tol", v.tol}}; }

inline json deficit_to_json(const DeficitRecord& d) {
  return json{{"seed", d.seed},
              {"signal_index", d.signal_index},
              {"deficit_direct", d.deficit_direct},
              {"deficit_periodization", d.deficit_periodization},
              {"decomposition_gap", d.decomposition_gap},
              {"reconstruction_error", d.reconstruction_error}};
}

inline json report_to_json(const FrameReport& r) {
  json deficits = json::array();
  for (const auto& d : r.deficits) deficits.push_back(deficit_to_json(d));
  return json{{"lattice", {{"alpha", r.lattice.alpha()}, {"beta", r.lattice.beta()}}},
              {"k_range", r.k_range},
              {"grid_n", r.grid_n},
              {"max_phi0_dev", r.max_phi0_dev},
              {"max_phik_dev", r.max_phik_dev},
              {"max_deltak_dev", r.max_deltak_dev},
              {"norm_sq", r.norm_sq},
              {"xy_max", r.xy_max},
              {"verdicts",
               {{"tight_gabor", verdict_to_json(r.tight_gabor)},
                {"parseval_wilson", verdict_to_json(r.parseval_wilson)},
                {"onb", verdict_to_json(r.onb)}}},
              {"onb_reasons", r.onb_reasons},
              {"consistent", r.consistent()},
              {"deficits", deficits}};
}

/// Header "k,xi,re,im,abs,target"; x in column 2, values in 3-5.
inline void write_condition_csv(std::ostream& os, const std::vector<ConditionSample>& samples) {
  os << "k,xi,re,im,abs,target\n";
  for (const auto& s : samples)
    os << s.k << ',' << format_double(s.xi) << ',' << format_double(s.value.real()) << ','
       << format_double(s.value.imag()) << ',' << format_double(std::abs(s.value)) << ','
       << format_double(s.target) << '\n';
}

inline void write_coefficients_csv(std::ostream& os, const CoefficientSet& c) {
  os << "j,m,re,im,abs2\n";
  for (long j = -c.J; j <= c.J; ++j)
    for (int m = 0; m <= c.M; ++m) {
      const cplx v = c.at(j, m);
      os << j << ',' << m << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
         << format_double(std::norm(v)) << '\n';
    }
}

inline json obstruction_to_json(const std::vector<ObstructionRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back(json{{"seed", r.seed_index},
                       {"beta", r.beta},
                       {"norm_sq", r.norm_sq},
                       {"required", r.required},
                       {"onb_possible", r.onb_possible}});
  return out;
}

inline void write_obstruction_csv(std::ostream& os, const std::vector<ObstructionRow>& rows) {
  os << "seed,beta,norm_sq,required,onb_possible\n";
  for (const auto& r : rows)
    os << r.seed_index << ',' << format_double(r.beta) << ',' << format_double(r.norm_sq) << ','
       << format_double(r.required) << ',' << (r.onb_possible ? "true" : "false") << '\n';
}

// ---------------------------------------------------------------------------
// Zak grids: one JSON header line, then "row,col,re,im" rows
// ---------------------------------------------------------------------------

inline void write_zak(std::ostream& os, const ZakGrid& z) {
  const json header{{"beta", z.beta()}, {"nx", z.nx()}, {"ny", z.ny()}, {"truncation_k", z.truncation_k()}};
  os << header.dump() << '\n' << "row,col,re,im\n";
  for (std::size_t ix = 0; ix <= z.nx(); ++ix)
    for (std::size_t iy = 0; iy <= z.ny(); ++iy) {
      const cplx v = z.at(ix, iy);
      os << ix << ',' << iy << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

inline ZakGrid read_zak(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("zak: missing header");
  const json header = json::parse(line);
  const auto nx = header.at("nx").get<std::size_t>();
  const auto ny = header.at("ny").get<std::size_t>();
  if (!std::getline(is, line) || line != "row,col,re,im") throw std::invalid_argument("zak: bad column header");
  std::vector<cplx> values((nx + 1) * (ny + 1));
  std::vector<bool> seen(values.size(), false);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      cells.push_back(rest.substr(0, pos));
    cells.push_back(rest);
    if (cells.size() != 4) throw std::invalid_argument("zak: expected 4 columns");
    const auto ix = static_cast<std::size_t>(parse_double(cells[0]));
    const auto iy = static_cast<std::size_t>(parse_double(cells[1]));
    if (ix > nx || iy > ny) throw std::invalid_argument("zak: index out of range");
    values[ix * (ny + 1) + iy] = {parse_double(cells[2]), parse_double(cells[3])};
    seen[ix * (ny + 1) + iy] = true;
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("zak: missing grid cells");
  return ZakGrid(header.at("beta").get<double>(), nx, ny, header.at("truncation_k").get<int>(), std::move(values));
}

}  // namespace wfl
