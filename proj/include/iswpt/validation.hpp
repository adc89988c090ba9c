#pragma once

#include <functional>
#include <string>
#include <vector>

namespace iswpt {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured quantities behind the verdict
  double seconds = 0.0;
};

/// Identifiers 1..12 of the acceptance suite, in order.
std::vector<int> acceptance_ids();

/// Runs one acceptance check. Throws std::out_of_range for an unknown id.
/// Exceptions from the algorithms are caught and reported as a failure.
CriterionResult run_criterion(int id);

/// Runs the given checks in order (all of them when `ids` is empty), invoking
/// `report` after each one.
std::vector<CriterionResult> run_acceptance(
    const std::vector<int>& ids = {},
    const std::function<void(const CriterionResult&)>& report = {});

std::string format_result(const CriterionResult& r);

}  // namespace iswpt
