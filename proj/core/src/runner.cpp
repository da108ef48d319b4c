#include "pkmdyn/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pkmdyn {

namespace {

VecX actuated_rows(const PkmModel& model, const std::vector<VecX>& per_limb) {
    VecX out(model.limb_count());
    for (int l = 0; l < model.limb_count(); ++l) {
        out(l) = per_limb[l](model.limbs[l].actuated_joint);
    }
    return out;
}

VecX actuated_from_solve(const PkmModel& model, const PkmKinCache& kin, int order) {
    VecX out(model.limb_count());
    for (int l = 0; l < model.limb_count(); ++l) {
        const LimbSolveData& sd = kin.solve[l];
        const int a = model.limbs[l].actuated_joint;
        switch (order) {
            case 1: out(l) = sd.dtheta(a); break;
            case 2: out(l) = sd.ddtheta(a); break;
            case 3: out(l) = sd.d3theta(a); break;
            default: out(l) = sd.d4theta(a); break;
        }
    }
    return out;
}

}  // namespace

std::vector<TrajectoryRow> run_trajectory(const PkmModel& model, const Trajectory& traj,
                                          double t0, double t1, double rate_hz) {
    if (!(rate_hz > 0.0) || !(t1 >= t0)) {
        throw std::invalid_argument("run_trajectory: need rate > 0 and t1 >= t0");
    }
    const double dt = 1.0 / rate_hz;
    const int n = static_cast<int>(std::floor((t1 - t0) / dt + 0.5)) + 1;
    std::vector<TrajectoryRow> rows;
    rows.reserve(n);
    std::vector<VecX> seed;
    for (int l = 0; l < model.limb_count(); ++l) {
        seed.push_back(VecX::Zero(model.limbs[l].joint_count()));
    }
    for (int k = 0; k < n; ++k) {
        const double t = t0 + k * dt;
        TrajectorySample s;
        try {
            s = evaluate_at(model, traj, t, &seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("sample at t=" + std::to_string(t) + ": " + e.what());
        }
        seed = s.theta;
        TrajectoryRow row;
        row.t = t;
        row.theta_a = actuated_rows(model, s.theta);
        row.dtheta_a = actuated_from_solve(model, s.kin, 1);
        row.ddtheta_a = actuated_from_solve(model, s.kin, 2);
        row.d3theta_a = actuated_from_solve(model, s.kin, 3);
        row.d4theta_a = actuated_from_solve(model, s.kin, 4);
        row.u = s.dyn.u;
        row.ud = s.dyn.ud;
        row.udd = s.dyn.udd;
        row.tau = sea_feedforward(model, row.theta_a, row.dtheta_a, row.ddtheta_a, s.dyn).tau;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string rows_to_csv(const std::vector<TrajectoryRow>& rows, int n_actuators) {
    std::ostringstream os;
    os << "t";
    const char* groups[] = {"theta_a", "dtheta_a", "ddtheta_a", "d3theta_a", "d4theta_a",
                            "u", "du", "ddu", "tau"};
    for (const char* g : groups) {
        for (int i = 1; i <= n_actuators; ++i) os << ',' << g << i;
    }
    os << '\n';
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << ',' << buf;
    };
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.t);
        os << buf;
        for (const VecX* v : {&r.theta_a, &r.dtheta_a, &r.ddtheta_a, &r.d3theta_a, &r.d4theta_a,
                              &r.u, &r.ud, &r.udd, &r.tau}) {
            for (int i = 0; i < v->size(); ++i) emit((*v)(i));
        }
        os << '\n';
    }
    return os.str();
}

BenchResult bench_invdyn(const PkmModel& model, const Trajectory& traj, double t, int calls) {
    if (calls < 1) throw std::invalid_argument("calls must be >= 1");
    const TrajectorySample s = evaluate_at(model, traj, t);
    VecX Vt, Vtd, Vtdd, Vtddd;
    traj.task_derivatives(t, Vt, Vtd, Vtdd, Vtddd);

    std::vector<double> us(calls);
    double sink = 0.0;
    for (int k = 0; k < calls; ++k) {
        const auto a = std::chrono::steady_clock::now();
        const InvDynResult r = second_order_invdyn(model, s.theta, Vt, Vtd, Vtdd, Vtddd);
        const auto b = std::chrono::steady_clock::now();
        sink += r.u(0);
        us[k] = std::chrono::duration<double, std::micro>(b - a).count();
    }
    if (!std::isfinite(sink)) throw std::runtime_error("benchmark produced non-finite forces");
    BenchResult out;
    out.calls = calls;
    out.mean_us = 0.0;
    for (double v : us) out.mean_us += v;
    out.mean_us /= calls;
    std::sort(us.begin(), us.end());
    out.p99_us = us[static_cast<size_t>(std::min<double>(calls - 1, std::ceil(0.99 * calls) - 1))];
    return out;
}

}  // namespace pkmdyn
