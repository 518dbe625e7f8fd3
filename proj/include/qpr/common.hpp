#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qpr {

using Vec3 = Eigen::Vector3d;

/// Global tolerance used as the default for all validity and check
/// thresholds. Configurable (the CLI sets it from --tol); all of the
/// mathematics is exact, so any tolerance is an artifact of doubles.
inline double& default_tol() {
    static double tol = 1e-9;
    return tol;
}

/// Outcome of a validation. `ok == false` carries the first failing
/// condition in `message`.
struct Status {
    bool ok = true;
    std::string message;

    explicit operator bool() const { return ok; }

    static Status good() { return {}; }
    static Status bad(std::string msg) { return {false, std::move(msg)}; }
};

/// Result of a batch check: worst absolute defect over all samples plus a
/// short description of the worst offender.
struct CheckReport {
    bool pass = true;
    double worst_defect = 0.0;
    std::string witness;
};

}  // namespace qpr
