#pragma once

// Finite-difference verification engine: Richardson-extrapolated central
// differences of every analytic derivative the engine produces, evaluated
// along an analytic task trajectory with IK-regenerated joint coordinates.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pkmdyn/invdyn.hpp"
#include "pkmdyn/trajectory.hpp"

namespace pkmdyn {

struct FdConfig {
    double base_step = 1e-4;
    int richardson_levels = 3;
    std::map<int, double> tolerance_per_order = {{1, 1e-7}, {2, 1e-5}};

    void validate() const;  // base_step in [1e-8, 1e-2], levels in 1..4
};

/// Central difference of the given order with Richardson extrapolation.
VecX fd_derivative(const std::function<VecX(double)>& f, double t, int order, const FdConfig& cfg);

struct CheckEntry {
    std::string name;
    int order;              // derivative order being certified
    double max_rel_error;   // over all sample times
    double tolerance;
    bool pass;
};

struct VerificationReport {
    std::vector<CheckEntry> entries;
    bool pass = true;
};

/// Full-pipeline evaluation at one trajectory time; joint coordinates are
/// regenerated by Newton-Raphson IK seeded from `seed` so loop closure stays
/// exact under the FD perturbations.
struct TrajectorySample {
    std::vector<VecX> theta;
    PkmKinCache kin;
    InvDynResult dyn;
};
TrajectorySample evaluate_at(const PkmModel& model, const Trajectory& traj, double t,
                             const std::vector<VecX>* seed = nullptr);

/// Run every derivative check at `samples` times in [t0, t1].
VerificationReport verify_model(const PkmModel& model, const Trajectory& traj, const FdConfig& cfg,
                                double t0, double t1, int samples = 10);

/// Report rows as CSV (name,order,max_rel_error,tolerance,pass).
std::string report_to_csv(const VerificationReport& report);

}  // namespace pkmdyn
