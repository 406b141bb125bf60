#pragma once

#include "rayleigh/flow.hpp"

#include <string>
#include <vector>

namespace rayleigh {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyOptions {
  bool quick = false;  // n = 1 subsets for the expensive criteria
  int jobs = 0;        // 0: hardware concurrency
  IntegrationOptions integration;
};

/// The ten acceptance criteria, in order. Pinned tolerances live here.
std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& opts = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace rayleigh
