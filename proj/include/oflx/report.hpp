#pragma once

#include <array>
#include <string>
#include <vector>

#include "oflx/field.hpp"

namespace oflx {

inline constexpr const char* kToolVersion = "0.1.0";

/// A finished analysis run: the canonical JSON document, its CSV projection
/// for plotting, and the aggregate pass verdict used for exit codes.
/// Reports carry no timestamps so identical runs render identical bytes.
struct RenderedReport {
  std::string json;
  std::string csv;
  bool passed = true;
};

struct VerifyOptions {
  double epsilon = 0.0;       ///< kernel scale; <= 0 picks the smallest admissible
  double gamma = 0.0;         ///< truncation depth; <= 0 picks (epsilon + Lz) / 2
  double tol = 1e-11;         ///< absolute tolerance for the identity checks
  double boundaryTol = 1e-10; ///< allowed |u3| on the boundary plane
};

struct StructureOptions {
  std::vector<std::array<int, 3>> directions;  ///< empty: e1, e2, e1+e2
  int scaleCount = 5;
  int baseStep = 1;
};

struct BudgetOptions {
  std::vector<double> epsilons;  ///< required, positive; sorted descending
  double t = -1.0;               ///< horizon; < 0 means the final snapshot time
  double identityTol = 1e-9;     ///< residual bound relative to report scale
};

struct StripOptions {
  std::vector<double> epsilons;
};

struct ModulusOptions {
  double delta = 0.0;  ///< boundary layer depth; <= 0 picks Lz / 4
};

/// Each run_* computes its study over the series, embeds `configJson`
/// (a JSON object; empty string means {}) plus tool version verbatim in the
/// report, and renders JSON + CSV. Invalid options or inputs raise the
/// domain/invalid exceptions of the underlying modules.
RenderedReport run_verify(const TimeSeries& u, const VerifyOptions& opt,
                          const std::string& configJson);
RenderedReport run_structure(const TimeSeries& u, const StructureOptions& opt,
                             const std::string& configJson);
RenderedReport run_budget(const TimeSeries& u, const BudgetOptions& opt,
                          const std::string& configJson);
RenderedReport run_strip(const TimeSeries& u, const StripOptions& opt,
                         const std::string& configJson);
RenderedReport run_modulus(const TimeSeries& u, const ModulusOptions& opt,
                           const std::string& configJson);

}  // namespace oflx
