// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sumlab {

/// Machine-readable outcome of one theorem check on one (signal, kernel)
/// case. Three-valued: a finite grid must distinguish "contradicts the
/// theorem" from "grid too short".
struct TheoremReport {
    enum class Status { pass, fail, inconclusive };

    std::string theorem_id;
    Status status = Status::inconclusive;
    std::string signal;
    std::string kernel;
    std::vector<std::pair<std::string, double>> discrepancies;
    std::vector<std::pair<std::string, double>> tolerances;
    std::string note;

    bool passed() const { return status == Status::pass; }
};

inline const char* to_string(TheoremReport::Status s) {
    switch (s) {
        case TheoremReport::Status::pass: return "pass";
        case TheoremReport::Status::fail: return "fail";
        default: return "inconclusive";
    }
}

/// Default tolerances: 2e-2 for limit functionals (O(1/theta_J) + O(h)
/// error budget at the standard grid), 1e-6 for quadrature identities.
struct Tolerances {
    double eps_limit = 2e-2;
    double eps_quadrature = 1e-6;
    double instability = 2e-2;
    double monotone_slack = 1e-3;
};

}  // namespace sumlab
