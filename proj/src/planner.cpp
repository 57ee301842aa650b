#include "splitconv/planner.hpp"

#include <string>

#include "splitconv/costmodel.hpp"
#include "splitconv/fft.hpp"

namespace splitconv {

PlanResult choose_patch_size(const PlanRequest& request) {
  if (request.n == 0 || request.k == 0) {
    throw std::invalid_argument("choose_patch_size: N and k must be positive");
  }
  if (request.candidates.empty()) {
    throw std::invalid_argument("choose_patch_size: no candidates");
  }

  PlanResult result;
  result.per_candidate.reserve(request.candidates.size());
  bool found = false;
  for (std::size_t s : request.candidates) {
    if (s == 0) {
      throw std::invalid_argument("choose_patch_size: candidate must be >= 1");
    }
    CandidateEval eval;
    eval.s = s;
    const std::size_t m = next_power_of_two(s + request.k - 1);
    eval.workspace = static_cast<std::uint64_t>(m) * m;
    eval.feasible = eval.workspace <= request.budget_elems;
    eval.modeled_total =
        mul_split(static_cast<double>(request.n), static_cast<double>(s),
                  static_cast<double>(request.k)) +
        add_split(static_cast<double>(request.n), static_cast<double>(s),
                  static_cast<double>(request.k));
    if (eval.feasible &&
        (!found || eval.modeled_total < result.modeled_total ||
         (eval.modeled_total == result.modeled_total && s < result.chosen_s))) {
      found = true;
      result.chosen_s = s;
      result.modeled_total = eval.modeled_total;
    }
    result.per_candidate.push_back(eval);
  }

  if (!found) {
    std::string detail;
    for (const CandidateEval& eval : result.per_candidate) {
      detail += " S=" + std::to_string(eval.s) +
                " workspace=" + std::to_string(eval.workspace);
    }
    throw InfeasiblePlanError(
        "no feasible patch size under budget " +
        std::to_string(request.budget_elems) + " elements:" + detail);
  }
  return result;
}

}  // namespace splitconv
