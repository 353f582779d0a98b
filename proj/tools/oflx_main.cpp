// Command-line front end for liboflx. Links the C API only; all JSON/flag
// plumbing lives here, all mathematics lives in the library.
//
// Exit codes: 0 success, 1 check failure, 2 usage/validation error, 3 I/O.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oflx.h"

namespace {

using Json = nlohmann::ordered_json;

struct SeriesDeleter {
  void operator()(oflx_series* s) const { oflx_series_free(s); }
};
struct ReportDeleter {
  void operator()(oflx_report* r) const { oflx_report_free(r); }
};
using SeriesPtr = std::unique_ptr<oflx_series, SeriesDeleter>;
using ReportPtr = std::unique_ptr<oflx_report, ReportDeleter>;

int exit_code(oflx_status st) {
  switch (st) {
    case OFLX_OK:
      return 0;
    case OFLX_ERR_INVALID:
    case OFLX_ERR_DOMAIN:
      return 2;
    case OFLX_ERR_IO:
    default:
      return 3;
  }
}

[[noreturn]] void die(oflx_status st) {
  std::fprintf(stderr, "oflx: %s\n", oflx_last_error());
  std::exit(exit_code(st));
}

void check(oflx_status st) {
  if (st != OFLX_OK) die(st);
}

[[noreturn]] void usage_error(const std::string& msg) {
  std::fprintf(stderr, "oflx: %s\n", msg.c_str());
  std::exit(2);
}

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream is(path);
  if (!is) {
    std::fprintf(stderr, "oflx: cannot open config '%s'\n", path.c_str());
    std::exit(3);
  }
  try {
    Json j = Json::parse(is);
    if (!j.is_object()) usage_error("config file must hold a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    usage_error(std::string("config file is not valid JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    std::fprintf(stderr, "oflx: cannot open '%s' for writing\n", path.c_str());
    std::exit(3);
  }
  os << text;
  if (!os) {
    std::fprintf(stderr, "oflx: write failed for '%s'\n", path.c_str());
    std::exit(3);
  }
}

std::string file_digest(const std::string& path) {
  char hex[65];
  check(oflx_file_digest(path.c_str(), hex));
  return hex;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
  CLI::App* cmd = nullptr;
  std::string configPath, outDir = ".", stem = "field", kind = "shear", modulation = "steady";
  std::uint32_t nx = 32, ny = 32, nzHalf = 32;
  double lz = 3.141592653589793, alpha = 0.5, envelopeCut = 0.85, modRate = 0.0;
  int modeCount = 5;
  bool crossModes = false;
  std::uint64_t seed = 1;
  std::vector<double> fCoeff, gCoeff, times;
};

void add_gen(CLI::App& app, GenArgs& a) {
  a.cmd = app.add_subcommand("gen", "Generate synthetic snapshots (OFLX1 + JSON sidecars)");
  a.cmd->add_option("--config", a.configPath, "JSON config file; flags override its values");
  a.cmd->add_option("--out", a.outDir, "Output directory (created if missing)");
  a.cmd->add_option("--stem", a.stem, "Output file stem");
  a.cmd->add_option("--kind", a.kind, "shear | lacunary | gradient_bump | time_modulated_shear");
  a.cmd->add_option("--nx", a.nx, "Nodes along x1");
  a.cmd->add_option("--ny", a.ny, "Nodes along x2");
  a.cmd->add_option("--nz-half", a.nzHalf, "Nodes on each side of the boundary plane");
  a.cmd->add_option("--lz", a.lz, "Slab half height");
  a.cmd->add_option("--f-coeff", a.fCoeff, "Cosine coefficients of the first shear profile")->expected(-1);
  a.cmd->add_option("--g-coeff", a.gCoeff, "Cosine coefficients of the second shear profile")->expected(-1);
  a.cmd->add_option("--alpha", a.alpha, "Lacunary Hoelder exponent");
  a.cmd->add_option("--mode-count", a.modeCount, "Lacunary dyadic mode count");
  a.cmd->add_flag("--cross-modes", a.crossModes, "Add horizontal x vertical product modes");
  a.cmd->add_option("--seed", a.seed, "Random seed");
  a.cmd->add_option("--envelope-cut", a.envelopeCut, "Decay envelope cut as a fraction of Lz");
  a.cmd->add_option("--modulation", a.modulation, "Time amplitude: steady | linear | cosine");
  a.cmd->add_option("--mod-rate", a.modRate, "Modulation rate");
  a.cmd->add_option("--times", a.times, "Snapshot times (start at 0, strictly increasing)")->expected(-1);
}

int run_gen(const GenArgs& a) {
  Json spec = {{"kind", a.kind},
               {"grid", {{"nx", a.nx}, {"ny", a.ny}, {"nzHalf", a.nzHalf}, {"Lz", a.lz}}}};
  std::string outDir = a.outDir, stem = a.stem;

  const Json cfg = load_config(a.configPath);
  for (const auto& kv : cfg.items()) {
    if (kv.key() == "out") {
      outDir = kv.value().get<std::string>();
    } else if (kv.key() == "stem") {
      stem = kv.value().get<std::string>();
    } else if (kv.key() == "grid" && kv.value().is_object()) {
      for (const auto& gkv : kv.value().items()) spec["grid"][gkv.key()] = gkv.value();
    } else {
      spec[kv.key()] = kv.value();
    }
  }

  const CLI::App& c = *a.cmd;
  if (c.count("--out")) outDir = a.outDir;
  if (c.count("--stem")) stem = a.stem;
  if (c.count("--kind")) spec["kind"] = a.kind;
  if (c.count("--nx")) spec["grid"]["nx"] = a.nx;
  if (c.count("--ny")) spec["grid"]["ny"] = a.ny;
  if (c.count("--nz-half")) spec["grid"]["nzHalf"] = a.nzHalf;
  if (c.count("--lz")) spec["grid"]["Lz"] = a.lz;
  if (c.count("--f-coeff")) spec["fCoeff"] = a.fCoeff;
  if (c.count("--g-coeff")) spec["gCoeff"] = a.gCoeff;
  if (c.count("--alpha")) spec["alpha"] = a.alpha;
  if (c.count("--mode-count")) spec["modeCount"] = a.modeCount;
  if (c.count("--cross-modes")) spec["crossModes"] = a.crossModes;
  if (c.count("--seed")) spec["seed"] = a.seed;
  if (c.count("--envelope-cut")) spec["envelopeCut"] = a.envelopeCut;
  if (c.count("--modulation")) spec["modulation"] = a.modulation;
  if (c.count("--mod-rate")) spec["modRate"] = a.modRate;
  if (c.count("--times")) spec["times"] = a.times;

  std::error_code ec;
  std::filesystem::create_directories(outDir, ec);
  if (ec) {
    std::fprintf(stderr, "oflx: cannot create '%s': %s\n", outDir.c_str(), ec.message().c_str());
    return 3;
  }

  oflx_series* raw = nullptr;
  check(oflx_series_generate(spec.dump(2).c_str(), &raw));
  SeriesPtr series(raw);

  size_t count = 0;
  check(oflx_series_size(series.get(), &count));
  for (size_t k = 0; k < count; ++k) {
    const oflx_field* snap = nullptr;
    check(oflx_series_field(series.get(), k, &snap));

    char idx[8];
    std::snprintf(idx, sizeof(idx), "%03zu", k);
    const std::string base = outDir + "/" + stem + "_" + idx;
    check(oflx_field_write(snap, (base + ".oflx").c_str()));

    char* meta = nullptr;
    check(oflx_field_meta_json(snap, &meta));
    Json sidecar = Json::parse(meta);
    oflx_string_free(meta);
    sidecar["spec"] = spec;
    sidecar["sha256"] = file_digest(base + ".oflx");
    write_text(base + ".json", sidecar.dump(2) + "\n");

    std::printf("wrote %s.oflx\n", base.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analysis commands
// ---------------------------------------------------------------------------

using RunFn = oflx_status (*)(const oflx_series*, const char*, const char*, oflx_report**);

struct AnalysisArgs {
  CLI::App* cmd = nullptr;
  std::string name;
  RunFn fn = nullptr;
  std::vector<std::string> inputs;
  std::string configPath, reportPath, csvPath;

  // Flag storage; only flags the user actually passed are forwarded.
  double epsilon = 0.0, gamma = 0.0, tol = 1e-11, boundaryTol = 1e-10;
  double t = -1.0, identityTol = 1e-9, delta = 0.0;
  int scaleCount = 5, baseStep = 1;
  std::vector<double> epsilons;
  std::vector<std::string> directions;
};

AnalysisArgs* add_analysis(CLI::App& app, std::vector<std::unique_ptr<AnalysisArgs>>& store,
                           const std::string& name, const char* desc, RunFn fn) {
  store.push_back(std::make_unique<AnalysisArgs>());
  AnalysisArgs& a = *store.back();
  a.name = name;
  a.fn = fn;
  a.cmd = app.add_subcommand(name, desc);
  a.cmd->add_option("inputs", a.inputs, "OFLX1 snapshot files, in time order");
  a.cmd->add_option("--config", a.configPath, "JSON config file; flags override its values");
  a.cmd->add_option("--report", a.reportPath, "Write the JSON report here (default: stdout)");
  a.cmd->add_option("--csv", a.csvPath, "Write the CSV projection here");
  return &a;
}

Json flag_overrides(const AnalysisArgs& a) {
  const CLI::App& c = *a.cmd;
  Json j = Json::object();
  auto on = [&](const char* flag) { return c.get_option_no_throw(flag) && c.count(flag); };
  if (on("--epsilon")) j["epsilon"] = a.epsilon;
  if (on("--gamma")) j["gamma"] = a.gamma;
  if (on("--tol")) j["tol"] = a.tol;
  if (on("--boundary-tol")) j["boundaryTol"] = a.boundaryTol;
  if (on("--t")) j["t"] = a.t;
  if (on("--identity-tol")) j["identityTol"] = a.identityTol;
  if (on("--delta")) j["delta"] = a.delta;
  if (on("--scale-count")) j["scaleCount"] = a.scaleCount;
  if (on("--base-step")) j["baseStep"] = a.baseStep;
  if (on("--eps")) j["epsilons"] = a.epsilons;
  if (on("--direction")) {
    Json dirs = Json::array();
    for (const std::string& s : a.directions) {
      int d[3] = {0, 0, 0};
      if (std::sscanf(s.c_str(), "%d,%d,%d", &d[0], &d[1], &d[2]) != 3)
        usage_error("--direction expects three comma-separated integers, got '" + s + "'");
      dirs.push_back({d[0], d[1], d[2]});
    }
    j["directions"] = dirs;
  }
  return j;
}

int run_analysis(const AnalysisArgs& a) {
  Json cfg = load_config(a.configPath);

  std::vector<std::string> inputs = a.inputs;
  if (inputs.empty() && cfg.contains("inputs"))
    for (const auto& p : cfg.at("inputs")) inputs.push_back(p.get<std::string>());
  std::string reportPath = a.reportPath.empty() ? cfg.value("report", "") : a.reportPath;
  std::string csvPath = a.csvPath.empty() ? cfg.value("csv", "") : a.csvPath;
  if (inputs.empty()) usage_error(a.name + ": no input snapshots given");

  Json options = cfg;
  options.erase("inputs");
  options.erase("report");
  options.erase("csv");
  for (const auto& kv : flag_overrides(a).items()) options[kv.key()] = kv.value();

  Json inputMeta = Json::array();
  for (const std::string& p : inputs) inputMeta.push_back({{"path", p}, {"sha256", file_digest(p)}});
  const Json embed = {{"command", a.name}, {"options", options}, {"inputs", inputMeta}};

  std::vector<const char*> cpaths;
  for (const std::string& p : inputs) cpaths.push_back(p.c_str());
  oflx_series* rawSeries = nullptr;
  check(oflx_series_from_files(cpaths.data(), cpaths.size(), &rawSeries));
  SeriesPtr series(rawSeries);

  oflx_report* rawReport = nullptr;
  check(a.fn(series.get(), options.dump().c_str(), embed.dump().c_str(), &rawReport));
  ReportPtr report(rawReport);

  if (reportPath.empty()) {
    std::fputs(oflx_report_json(report.get()), stdout);
  } else {
    write_text(reportPath, oflx_report_json(report.get()));
    std::printf("wrote %s\n", reportPath.c_str());
  }
  if (!csvPath.empty()) {
    write_text(csvPath, oflx_report_csv(report.get()));
    std::printf("wrote %s\n", csvPath.c_str());
  }
  return oflx_report_passed(report.get()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-aware energy conservation analyses for slab velocity fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", oflx_version());
  int threads = 0;
  app.add_option("--threads", threads, "Cap the worker pool (0: OFLX_THREADS or hardware)");

  GenArgs gen;
  add_gen(app, gen);

  std::vector<std::unique_ptr<AnalysisArgs>> cmds;
  AnalysisArgs* verify = add_analysis(app, cmds, "verify",
                                      "Check the reflection/extension/mollification identities", oflx_run_verify);
  verify->cmd->add_option("--epsilon", verify->epsilon, "Mollification scale (0: smallest admissible)");
  verify->cmd->add_option("--gamma", verify->gamma, "Truncation depth (0: automatic)");
  verify->cmd->add_option("--tol", verify->tol, "Absolute tolerance for the identities");
  verify->cmd->add_option("--boundary-tol", verify->boundaryTol, "Allowed |u3| on the boundary plane");

  AnalysisArgs* structure = add_analysis(app, cmds, "structure",
                                         "Third-order structure functions and the bulk condition", oflx_run_structure);
  structure->cmd->add_option("--direction", structure->directions,
                             "Offset direction 'a,b,c' (repeatable)");
  structure->cmd->add_option("--scale-count", structure->scaleCount, "Dyadic scales per direction");
  structure->cmd->add_option("--base-step", structure->baseStep, "Smallest offset in grid steps");

  AnalysisArgs* budget = add_analysis(app, cmds, "budget",
                                      "Mollified energy budget over an epsilon ladder", oflx_run_budget);
  budget->cmd->add_option("--eps", budget->epsilons, "Mollification scales (strictly decreasing)")->expected(-1);
  budget->cmd->add_option("--t", budget->t, "Horizon (default: final snapshot time)");
  budget->cmd->add_option("--identity-tol", budget->identityTol, "Identity residual bound relative to scale");

  AnalysisArgs* strip = add_analysis(app, cmds, "strip",
                                     "Near-boundary strip norms of shifted increments", oflx_run_strip);
  strip->cmd->add_option("--eps", strip->epsilons, "Strip half-widths")->expected(-1);

  AnalysisArgs* modulus = add_analysis(app, cmds, "modulus",
                                       "Boundary modulus of continuity", oflx_run_modulus);
  modulus->cmd->add_option("--delta", modulus->delta, "Boundary layer depth (0: Lz/4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (threads > 0) oflx_set_threads(threads);

  if (gen.cmd->parsed()) return run_gen(gen);
  for (const auto& a : cmds)
    if (a->cmd->parsed()) return run_analysis(*a);
  return 2;
}
