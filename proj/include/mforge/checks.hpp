#ifndef MFORGE_CHECKS_HPP
#define MFORGE_CHECKS_HPP

// Self-check suite: runs every module's invariants against a given polytope
// with a seeded generator and reports one result per invariant. Used by the
// `check` CLI command.

#include <cstdint>
#include <string>
#include <vector>

#include "mforge/polytope.hpp"

namespace mforge::checks {

struct CheckResult {
    std::string module;
    std::string invariant;
    bool pass = false;
    double defect = 0.0;     // worst measured deviation
    double tolerance = 0.0;  // 0 for exact checks
    std::string detail;      // worst point or counterexample, if any
};

struct CheckOptions {
    std::uint64_t seed = 20240403;
    double tol_boundary = kTolBoundary;
    double tol_newton = kTolNewton;
    double tol_kn = kTolKn;
};

std::vector<CheckResult> run_checks(const polytope::LabelledPolytope& p,
                                    const CheckOptions& opt = {});

}  // namespace mforge::checks

#endif
