#pragma once

#include <sstream>
#include <string>

#include "fracstep/adaptive_controller.hpp"

namespace checks {

// Flag automaton over one run: within a cell, grows and shrinks never mix, and
// the final action matches the state it leaves from. Empty string when valid.
inline std::string automaton_violation(const fracstep::RunReport& report) {
  using fracstep::StepAction;
  for (std::size_t k = 0; k < report.cells.size(); ++k) {
    const auto& acts = report.cells[k].actions;
    std::ostringstream where;
    where << "cell " << k << " at t=" << report.cells[k].left << ": ";
    if (acts.empty()) {
      return where.str() + "no actions";
    }
    bool grew = false;
    bool shrank = false;
    for (std::size_t i = 0; i + 1 < acts.size(); ++i) {
      if (acts[i] == StepAction::grow) {
        grew = true;
      } else if (acts[i] == StepAction::shrink) {
        shrank = true;
      } else {
        return where.str() + "terminal action before the end";
      }
    }
    if (grew && shrank) {
      return where.str() + "grow and shrink mixed";
    }
    switch (acts.back()) {
      case StepAction::accept_restored:
        if (!grew) {
          return where.str() + "restore without a stashed pass";
        }
        break;
      case StepAction::accept_after_shrink:
        if (!shrank) {
          return where.str() + "accept-after-shrink without a shrink";
        }
        break;
      case StepAction::accept_cut:
      case StepAction::forced:
        break;
      default:
        return where.str() + "cell ends without acceptance";
    }
  }
  return {};
}

// Largest residual / (TOL * B) over non-forced cells, B at the sample's sub-interval end.
inline double worst_bound_ratio(const fracstep::RunReport& report, double tol) {
  double worst = 0.0;
  for (const auto& cell : report.cells) {
    if (cell.actions.back() == fracstep::StepAction::forced) {
      continue;
    }
    for (const auto& s : cell.samples) {
      worst = std::max(worst, s.residual / (tol * s.bound));
    }
  }
  return worst;
}

inline bool mesh_monotone(const fracstep::RunReport& report, double horizon, double start = 0.0) {
  for (std::size_t i = 1; i < report.mesh.size(); ++i) {
    if (!(report.mesh[i] > report.mesh[i - 1]) || report.mesh[i] > horizon) {
      return false;
    }
  }
  return !report.mesh.empty() && report.mesh.front() == start;
}

}  // namespace checks
