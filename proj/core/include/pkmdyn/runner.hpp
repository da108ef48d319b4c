#pragma once

// Batch trajectory evaluation, CSV serialization, and the benchmark loop
// backing the CLI subcommands.

#include <string>
#include <vector>

#include "pkmdyn/flatness.hpp"
#include "pkmdyn/oracle.hpp"
#include "pkmdyn/trajectory.hpp"

namespace pkmdyn {

struct TrajectoryRow {
    double t;
    VecX theta_a, dtheta_a, ddtheta_a, d3theta_a, d4theta_a;
    VecX u, ud, udd, tau;
};

/// One row per sample over [t0, t1] at the given rate (samples at t0 + k/rate,
/// inclusive of both ends when they land on the grid). IK is seeded from the
/// previous sample. Throws on IK failure or singularity, tagged with t.
std::vector<TrajectoryRow> run_trajectory(const PkmModel& model, const Trajectory& traj,
                                          double t0, double t1, double rate_hz);

/// CSV with a fixed header; floats at 17 significant digits.
std::string rows_to_csv(const std::vector<TrajectoryRow>& rows, int n_actuators);

struct BenchResult {
    double mean_us;
    double p99_us;
    int calls;
};

/// Times second_order_invdyn on a fixed state, single-threaded.
BenchResult bench_invdyn(const PkmModel& model, const Trajectory& traj, double t, int calls);

}  // namespace pkmdyn
