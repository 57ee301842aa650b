#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace splitconv {

/// Patch-size selection under a workspace budget. The budget is expressed
/// in complex workspace elements of one patch transform, M^2 with M the
/// power-of-two transform side for that candidate.
struct PlanRequest {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t budget_elems = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::size_t> candidates{4, 8, 16, 32, 64};
};

struct CandidateEval {
  std::size_t s = 0;
  bool feasible = false;
  std::uint64_t workspace = 0;  // M^2
  double modeled_total = 0;     // mul_split + add_split
};

struct PlanResult {
  std::size_t chosen_s = 0;
  double modeled_total = 0;
  std::vector<CandidateEval> per_candidate;
};

struct InfeasiblePlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustively minimizes the modeled operation total over feasible
/// candidates; ties break toward the smaller patch. Throws
/// InfeasiblePlanError (listing every workspace) when no candidate fits.
PlanResult choose_patch_size(const PlanRequest& request);

}  // namespace splitconv
