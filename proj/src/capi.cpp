#include "oflx.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "oflx/field.hpp"
#include "oflx/parallel.hpp"
#include "oflx/report.hpp"
#include "oflx/snapshot_io.hpp"
#include "oflx/synth_fields.hpp"

using Json = nlohmann::ordered_json;

struct oflx_field {
  std::shared_ptr<const oflx::VectorField> f;
};

struct oflx_series {
  oflx::TimeSeries ts;
  std::vector<oflx_field> views;  // borrowed per-snapshot handles
};

struct oflx_report {
  oflx::RenderedReport r;
};

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& msg) { t_last_error = msg; }

template <class F>
oflx_status guarded(F&& fn) noexcept {
  try {
    fn();
    t_last_error.clear();
    return OFLX_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return OFLX_ERR_INVALID;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return OFLX_ERR_DOMAIN;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return OFLX_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return OFLX_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return OFLX_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string("null argument: ") + name);
}

Json parse_options(const char* options_json,
                   std::initializer_list<const char*> allowed) {
  if (!options_json || !*options_json) return Json::object();
  Json j;
  try {
    j = Json::parse(options_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("options are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("options must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known)
      throw std::invalid_argument("unknown option '" + item.key() + "'");
  }
  return j;
}

std::vector<double> number_list(const Json& j, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string("missing required option '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

oflx_series* wrap_series(oflx::TimeSeries ts) {
  auto* s = new oflx_series{std::move(ts), {}};
  s->views.reserve(s->ts.snaps.size());
  for (const auto& snap : s->ts.snaps) s->views.push_back(oflx_field{snap});
  return s;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

const char* support_name(oflx::Region::Kind k) {
  switch (k) {
    case oflx::Region::Kind::FullSlab: return "full";
    case oflx::Region::Kind::HalfPlus: return "halfPlus";
    case oflx::Region::Kind::Above: return "above";
    case oflx::Region::Kind::Strip: return "strip";
  }
  return "full";
}

template <class Run>
oflx_status run_report(const oflx_series* u, const char* config_json,
                       oflx_report** out, Run&& run) {
  return guarded([&] {
    require(u, "series");
    require(out, "report out");
    oflx::RenderedReport rep =
        run(u->ts, config_json ? std::string(config_json) : std::string());
    *out = new oflx_report{std::move(rep)};
  });
}

}  // namespace

extern "C" {

const char* oflx_version(void) { return oflx::kToolVersion; }

const char* oflx_last_error(void) { return t_last_error.c_str(); }

void oflx_set_threads(int n) { oflx::set_worker_count(n); }

void oflx_field_free(oflx_field* f) { delete f; }
void oflx_series_free(oflx_series* s) { delete s; }
void oflx_report_free(oflx_report* r) { delete r; }
void oflx_string_free(char* s) { std::free(s); }

oflx_status oflx_field_generate(const char* spec_json, oflx_field** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "field out");
    const oflx::FieldSpec spec = oflx::field_spec_from_json(spec_json);
    *out = new oflx_field{
        std::make_shared<const oflx::VectorField>(oflx::generate(spec))};
  });
}

oflx_status oflx_series_generate(const char* spec_json, oflx_series** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "series out");
    const oflx::FieldSpec spec = oflx::field_spec_from_json(spec_json);
    *out = wrap_series(oflx::generate_series(spec));
  });
}

oflx_status oflx_field_read(const char* path, oflx_field** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "field out");
    *out = new oflx_field{
        std::make_shared<const oflx::VectorField>(oflx::read_snapshot(path))};
  });
}

oflx_status oflx_field_write(const oflx_field* f, const char* path) {
  return guarded([&] {
    require(f, "field");
    require(path, "path");
    oflx::write_snapshot(path, *f->f);
  });
}

oflx_status oflx_series_from_files(const char* const* paths, size_t count,
                                   oflx_series** out) {
  return guarded([&] {
    require(paths, "paths");
    require(out, "series out");
    if (count == 0) throw std::invalid_argument("series needs at least one snapshot file");
    oflx::TimeSeries ts;
    for (size_t k = 0; k < count; ++k) {
      require(paths[k], "paths[k]");
      auto snap = std::make_shared<const oflx::VectorField>(oflx::read_snapshot(paths[k]));
      ts.times.push_back(snap->time);
      ts.snaps.push_back(std::move(snap));
    }
    ts.validate();
    *out = wrap_series(std::move(ts));
  });
}

oflx_status oflx_field_grid(const oflx_field* f, uint32_t* nx, uint32_t* ny,
                            uint32_t* nz_half, double* lz, double* time) {
  return guarded([&] {
    require(f, "field");
    if (nx) *nx = f->f->grid.nx;
    if (ny) *ny = f->f->grid.ny;
    if (nz_half) *nz_half = f->f->grid.nzHalf;
    if (lz) *lz = f->f->grid.Lz;
    if (time) *time = f->f->time;
  });
}

oflx_status oflx_field_meta_json(const oflx_field* f, char** out) {
  return guarded([&] {
    require(f, "field");
    require(out, "meta out");
    const oflx::VectorField& v = *f->f;
    Json j;
    j["format"] = "OFLX1";
    j["formatVersion"] = 1;
    j["grid"] = {{"nx", v.grid.nx}, {"ny", v.grid.ny},
                 {"nzHalf", v.grid.nzHalf}, {"Lz", v.grid.Lz}};
    j["time"] = v.time;
    j["support"] = {{"kind", support_name(v.support.kind)},
                    {"a", v.support.a}, {"b", v.support.b}};
    *out = dup_string(j.dump(2) + "\n");
  });
}

oflx_status oflx_series_size(const oflx_series* s, size_t* n) {
  return guarded([&] {
    require(s, "series");
    require(n, "size out");
    *n = s->ts.snaps.size();
  });
}

oflx_status oflx_series_field(const oflx_series* s, size_t k,
                              const oflx_field** out) {
  return guarded([&] {
    require(s, "series");
    require(out, "field out");
    if (k >= s->views.size())
      throw std::invalid_argument("snapshot index " + std::to_string(k) +
                                  " out of range (series has " +
                                  std::to_string(s->views.size()) + ")");
    *out = &s->views[k];
  });
}

oflx_status oflx_file_digest(const char* path, char hex64[65]) {
  return guarded([&] {
    require(path, "path");
    require(hex64, "digest out");
    const std::string hex = oflx::file_sha256(path);
    std::memcpy(hex64, hex.c_str(), 65);
  });
}

oflx_status oflx_run_verify(const oflx_series* u, const char* options_json,
                            const char* config_json, oflx_report** out) {
  return run_report(u, config_json, out, [&](const oflx::TimeSeries& ts, const std::string& cfg) {
    const Json j = parse_options(options_json, {"epsilon", "gamma", "tol", "boundaryTol"});
    oflx::VerifyOptions o;
    o.epsilon = j.value("epsilon", o.epsilon);
    o.gamma = j.value("gamma", o.gamma);
    o.tol = j.value("tol", o.tol);
    o.boundaryTol = j.value("boundaryTol", o.boundaryTol);
    return oflx::run_verify(ts, o, cfg);
  });
}

oflx_status oflx_run_structure(const oflx_series* u, const char* options_json,
                               const char* config_json, oflx_report** out) {
  return run_report(u, config_json, out, [&](const oflx::TimeSeries& ts, const std::string& cfg) {
    const Json j = parse_options(options_json, {"directions", "scaleCount", "baseStep"});
    oflx::StructureOptions o;
    if (j.contains("directions"))
      for (const auto& d : j.at("directions")) {
        if (!d.is_array() || d.size() != 3)
          throw std::invalid_argument("each direction must be a 3-vector of integers");
        o.directions.push_back({d[0].get<int>(), d[1].get<int>(), d[2].get<int>()});
      }
    o.scaleCount = j.value("scaleCount", o.scaleCount);
    o.baseStep = j.value("baseStep", o.baseStep);
    return oflx::run_structure(ts, o, cfg);
  });
}

oflx_status oflx_run_budget(const oflx_series* u, const char* options_json,
                            const char* config_json, oflx_report** out) {
  return run_report(u, config_json, out, [&](const oflx::TimeSeries& ts, const std::string& cfg) {
    const Json j = parse_options(options_json, {"epsilons", "t", "identityTol"});
    oflx::BudgetOptions o;
    o.epsilons = number_list(j, "epsilons");
    o.t = j.value("t", o.t);
    o.identityTol = j.value("identityTol", o.identityTol);
    return oflx::run_budget(ts, o, cfg);
  });
}

oflx_status oflx_run_strip(const oflx_series* u, const char* options_json,
                           const char* config_json, oflx_report** out) {
  return run_report(u, config_json, out, [&](const oflx::TimeSeries& ts, const std::string& cfg) {
    const Json j = parse_options(options_json, {"epsilons"});
    oflx::StripOptions o;
    o.epsilons = number_list(j, "epsilons");
    return oflx::run_strip(ts, o, cfg);
  });
}

oflx_status oflx_run_modulus(const oflx_series* u, const char* options_json,
                             const char* config_json, oflx_report** out) {
  return run_report(u, config_json, out, [&](const oflx::TimeSeries& ts, const std::string& cfg) {
    const Json j = parse_options(options_json, {"delta"});
    oflx::ModulusOptions o;
    o.delta = j.value("delta", o.delta);
    return oflx::run_modulus(ts, o, cfg);
  });
}

const char* oflx_report_json(const oflx_report* r) {
  return r ? r->r.json.c_str() : "";
}

const char* oflx_report_csv(const oflx_report* r) {
  return r ? r->r.csv.c_str() : "";
}

int oflx_report_passed(const oflx_report* r) {
  return r && r->r.passed ? 1 : 0;
}

}  // extern "C"
