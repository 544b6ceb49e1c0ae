#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wfl/cli.hpp"

using namespace wfl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("wfl_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_spec(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "wfl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("rational arguments", "[cli]") {
  CHECK(cli::parse_rational("0.25") == 0.25);
  CHECK(cli::parse_rational("1/3") == 1.0 / 3.0);
  CHECK(cli::parse_rational("2e-1") == 0.2);
  CHECK_THROWS_AS(cli::parse_rational("1/0"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_rational("abc"), cli::UsageError);
  CHECK(cli::parse_list("1/3,1/4,0.2") == std::vector<double>{1.0 / 3.0, 0.25, 0.2});
}

TEST_CASE("help and usage errors", "[cli]") {
  const auto help = run_args({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
  const auto sub_help = run_args({"verify", "--help"});
  CHECK(sub_help.code == 0);
  CHECK(sub_help.out.find("--grid-n") != std::string::npos);
  CHECK(sub_help.out.find("1024") != std::string::npos);
  CHECK(run_args({}).code == 1);
  CHECK(run_args({"frobnicate"}).code == 1);
  CHECK(run_args({"verify", "--grid-n", "ten"}).code == 1);
  CHECK(run_args({"verify", "--format", "xml"}).code == 1);
}

TEST_CASE("verify a Parseval window", "[cli]") {
  TempDir dir("verify");
  const auto spec = write_spec(dir.path, "w.json", R"({"kind": "smooth_bump", "beta": 0.16666666666666666})");
  const auto out = dir.path / "out";
  const auto r = run_args({"verify", "--window", spec.string(), "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("parseval_wilson   true") != std::string::npos);
  CHECK(fs::exists(out / "report.json"));
  CHECK_FALSE(fs::exists(out / "reasons.txt"));
  CHECK(slurp(out / "phi_k.csv").rfind("k,xi,re,im,abs,target\n", 0) == 0);
  CHECK(slurp(out / "delta_k.csv").rfind("k,xi,re,im,abs,target\n", 0) == 0);
  const json j = json::parse(slurp(out / "report.json"));
  CHECK(j["verdicts"]["parseval_wilson"]["pass"] == true);
  CHECK(j["verdicts"]["onb"]["pass"] == false);
  CHECK(j["lattice"]["beta"] == 1.0 / 6.0);
}

TEST_CASE("verify Example 2 at beta = 1/4 exits 0", "[cli]") {
  TempDir dir("verify_quarter");
  const auto spec = write_spec(dir.path, "w.json", R"({"kind": "smooth_bump", "beta": 0.25})");
  const auto r = run_args({"verify", "--window", spec.string(), "--out", (dir.path / "out").string()});
  CHECK(r.code == 0);
  const json j = json::parse(slurp(dir.path / "out" / "report.json"));
  CHECK(j["verdicts"]["parseval_wilson"]["pass"] == true);
}

TEST_CASE("verify the perturbed window fails with reasons", "[cli]") {
  TempDir dir("perturbed");
  const auto spec = write_spec(dir.path, "w.json",
                               R"({"kind": "smooth_bump", "beta": 0.25,
                                   "perturbation": {"amplitude": 0.01, "center": 0.3, "radius": 0.1}})");
  const auto out = dir.path / "out";
  const auto r = run_args({"verify", "--window", spec.string(), "--out", out.string()});
  CHECK(r.code == 2);
  const std::string reasons = slurp(out / "reasons.txt");
  CHECK(reasons.find("max_phi0_dev = 0.0201") != std::string::npos);
  const json j = json::parse(slurp(out / "report.json"));
  CHECK(j["max_phi0_dev"].get<double>() > 5e-3);
}

TEST_CASE("input errors exit 1 with a reasons file", "[cli]") {
  TempDir dir("errors");
  const auto out = dir.path / "out";
  auto r = run_args({"verify", "--window", (dir.path / "missing.json").string(), "--out", out.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
  CHECK(fs::exists(out / "reasons.txt"));

  const auto bad = write_spec(dir.path, "bad.json", "{not json");
  CHECK(run_args({"verify", "--window", bad.string(), "--out", out.string()}).code == 1);
  CHECK(slurp(out / "reasons.txt").find("malformed JSON") != std::string::npos);

  const auto unknown = write_spec(dir.path, "unknown.json", R"({"kind": "hann"})");
  CHECK(run_args({"verify", "--window", unknown.string(), "--out", out.string()}).code == 1);

  CHECK(run_args({"verify", "--out", out.string()}).code == 1);

  const auto bump = write_spec(dir.path, "bump.json", R"({"kind": "smooth_bump", "beta": 0.25})");
  CHECK(run_args({"construct", "--window", bump.string(), "--out", out.string()}).code == 1);
  CHECK(slurp(out / "reasons.txt").find("gaussian seed") != std::string::npos);

  CHECK(run_args({"construct", "--beta", "0.3", "--out", out.string()}).code == 1);
  CHECK(run_args({"verify", "--window", bump.string(), "--tol", "-1", "--out", out.string()}).code == 1);
  CHECK(run_args({"verify", "--window", bump.string(), "--grid-n", "16", "--out", out.string()}).code == 1);
  CHECK(run_args({"zak-check", "--zak-n", "100", "--out", out.string()}).code == 1);
}

TEST_CASE("reports are byte-identical across runs", "[cli]") {
  TempDir dir("determinism");
  const auto spec = write_spec(dir.path, "w.json", R"({"kind": "smooth_bump", "beta": 0.1})");
  for (const char* sub : {"a", "b"})
    REQUIRE(run_args({"parseval", "--window", spec.string(), "--signals", "2", "--seed", "9", "--out",
                      (dir.path / sub).string()})
                .code == 0);
  CHECK(slurp(dir.path / "a" / "report.json") == slurp(dir.path / "b" / "report.json"));
  CHECK(slurp(dir.path / "a" / "coefficients.csv") == slurp(dir.path / "b" / "coefficients.csv"));
  const json j = json::parse(slurp(dir.path / "a" / "report.json"));
  REQUIRE(j["deficits"].size() == 2);
  CHECK(j["deficits"][0]["seed"] == 9);
  CHECK(j["deficits"][1]["deficit_direct"].get<double>() < 1e-6);
}

TEST_CASE("format selects the emitted files", "[cli]") {
  TempDir dir("format");
  const auto spec = write_spec(dir.path, "w.json", R"({"kind": "indicator", "alpha": 1})");
  REQUIRE(run_args({"verify", "--window", spec.string(), "--format", "csv", "--out", (dir.path / "c").string()}).code == 0);
  CHECK_FALSE(fs::exists(dir.path / "c" / "report.json"));
  CHECK(fs::exists(dir.path / "c" / "phi_k.csv"));
  REQUIRE(run_args({"verify", "--window", spec.string(), "--format", "json", "--out", (dir.path / "j").string()}).code == 0);
  CHECK(fs::exists(dir.path / "j" / "report.json"));
  CHECK_FALSE(fs::exists(dir.path / "j" / "phi_k.csv"));
}

TEST_CASE("lattice flags override the window defaults", "[cli]") {
  TempDir dir("lattice");
  const auto spec = write_spec(dir.path, "w.json", R"({"kind": "gaussian"})");
  const auto r = run_args({"verify", "--window", spec.string(), "--alpha", "1", "--beta", "1/6", "--k-max", "2",
                           "--out", (dir.path / "o").string()});
  CHECK(r.code == 2);
  const json j = json::parse(slurp(dir.path / "o" / "report.json"));
  CHECK(j["k_range"] == 2);
  CHECK(j["max_deltak_dev"].get<double>() < 1e-12);
}

TEST_CASE("construct, zak-check and obstruction", "[cli]") {
  TempDir dir("zak");
  const auto c = run_args({"construct", "--beta", "1/2", "--zak-n", "128", "--out", (dir.path / "c").string()});
  CHECK(c.code == 0);
  CHECK(fs::exists(dir.path / "c" / "window.json"));
  CHECK(fs::exists(dir.path / "c" / "zak.csv"));
  // the constructed window feeds back into verify
  const auto v = run_args({"verify", "--window", (dir.path / "c" / "window.json").string(), "--out",
                           (dir.path / "v").string()});
  CHECK(v.code == 0);

  CHECK(run_args({"zak-check", "--beta", "1/3", "--zak-n", "64", "--out", (dir.path / "z").string()}).code == 0);
  std::ifstream zin(dir.path / "z" / "zak.csv");
  const ZakGrid z = read_zak(zin);
  CHECK(z.nx() == 64);
  CHECK(z.beta() == 1.0 / 3.0);

  const auto o = run_args({"obstruction", "--betas", "1/3,1/4,1/5", "--zak-n", "128", "--out", (dir.path / "o").string()});
  CHECK(o.code == 0);
  const json j = json::parse(slurp(dir.path / "o" / "report.json"));
  REQUIRE(j["rows"].size() == 3);
  for (const auto& row : j["rows"]) CHECK(row["onb_possible"] == false);
  CHECK(slurp(dir.path / "o" / "obstruction.csv").rfind("seed,beta,norm_sq,required,onb_possible\n", 0) == 0);
}

TEST_CASE("run accepts a config directly", "[cli]") {
  TempDir dir("config");
  cli::RunConfig cfg;
  cfg.command = cli::Command::Obstruction;
  cfg.betas = {0.5};
  cfg.zak_n = 64;
  cfg.output_dir = (dir.path / "o").string();
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cli::run(cfg, out, err) == 0);
  CHECK(out.str().find("true") != std::string::npos);
}
