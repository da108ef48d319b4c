#include "pkmdyn/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "pkmdyn/limb_kinematics.hpp"

namespace pkmdyn {

CosineSweepProfile::CosineSweepProfile(double s_min, double s_max, double period)
    : a_((s_max - s_min) / 2.0), w_(2.0 * M_PI / period), s_min_(s_min) {
    if (!(s_min < s_max) || !(period > 0.0)) {
        throw std::invalid_argument("cosine sweep requires s_min < s_max and period > 0");
    }
}

void CosineSweepProfile::eval(double t, double d[5]) const {
    const double c = std::cos(w_ * t), s = std::sin(w_ * t);
    d[0] = -a_ * c + a_ + s_min_;
    d[1] = a_ * w_ * s;
    d[2] = a_ * w_ * w_ * c;
    d[3] = -a_ * w_ * w_ * w_ * s;
    d[4] = -a_ * w_ * w_ * w_ * w_ * c;
}

namespace {

constexpr double kQuarterSign[4] = {1.0, -1.0, -1.0, 1.0};

Pose exp_unit(const Vec6& xi_scaled) {
    // normalize to a valid screw: unit angular part, or unit linear if prismatic
    const double nw = xi_scaled.head<3>().norm();
    if (nw > 1e-300) return exp_screw(Screw(xi_scaled / nw), nw);
    const double nv = xi_scaled.tail<3>().norm();
    if (nv > 1e-300) return exp_screw(Screw(xi_scaled / nv), nv);
    return Pose::identity();
}

}  // namespace

SinSqJerkProfile::SinSqJerkProfile(double displacement, double duration)
    : T_(duration), tau_(duration / 4.0), jerk_amp_(1.0) {
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
    double d[5];
    quarter_state(4, 0.0, d);  // end state with unit jerk amplitude
    const double unit_disp = d[0];
    jerk_amp_ = displacement / unit_disp;
}

/// Integrate the unit-amplitude profile analytically through q full quarters,
/// then `local` seconds into quarter q (q in 0..3; q == 4 means the end).
void SinSqJerkProfile::quarter_state(int q, double local, double out[5]) const {
    const double w = 2.0 * M_PI / tau_;
    double p = 0.0, v = 0.0, a = 0.0;
    auto advance = [&](int k, double s, double res[5]) {
        const double J = jerk_amp_ * kQuarterSign[k];
        const double sw = std::sin(w * s), cw = std::cos(w * s);
        res[0] = p + v * s + a * s * s / 2.0 + J / 2.0 * (s * s * s / 6.0 - s / (w * w) + sw / (w * w * w));
        res[1] = v + a * s + J / 2.0 * (s * s / 2.0 + (cw - 1.0) / (w * w));
        res[2] = a + J / 2.0 * (s - sw / w);
        res[3] = J / 2.0 * (1.0 - cw);
        res[4] = J / 2.0 * w * sw;
    };
    for (int k = 0; k < q && k < 4; ++k) {
        double full[5];
        advance(k, tau_, full);
        p = full[0];
        v = full[1];
        a = full[2];
    }
    if (q >= 4) {
        out[0] = p;
        out[1] = v;
        out[2] = a;
        out[3] = 0.0;
        out[4] = 0.0;
        return;
    }
    advance(q, local, out);
}

void SinSqJerkProfile::eval(double t, double d[5]) const {
    if (t <= 0.0) {
        d[0] = d[1] = d[2] = d[3] = d[4] = 0.0;
        return;
    }
    if (t >= T_) {
        quarter_state(4, 0.0, d);
        return;
    }
    int q = static_cast<int>(t / tau_);
    if (q > 3) q = 3;
    quarter_state(q, t - q * tau_, d);
}

double SinSqJerkProfile::peak_velocity() const {
    double d[5];
    quarter_state(2, 0.0, d);
    return d[1];
}

ScrewMotionTrajectory::ScrewMotionTrajectory(Pose C0, VecX axis_task, const MatX& P_p,
                                             std::shared_ptr<Profile> profile)
    : C0_(std::move(C0)), axis_task_(std::move(axis_task)), profile_(std::move(profile)) {
    xi_ = P_p * axis_task_;
}

Pose ScrewMotionTrajectory::pose(double t) const {
    double d[5];
    profile_->eval(t, d);
    return C0_ * exp_unit(xi_ * d[0]);
}

void ScrewMotionTrajectory::task_derivatives(double t, VecX& Vt, VecX& Vtd, VecX& Vtdd,
                                             VecX& Vtddd) const {
    double d[5];
    profile_->eval(t, d);
    Vt = axis_task_ * d[1];
    Vtd = axis_task_ * d[2];
    Vtdd = axis_task_ * d[3];
    Vtddd = axis_task_ * d[4];
}

Pose home_pose(const PkmModel& model) {
    const LimbModel& last = model.limbs.back();
    return fk_terminal(last, VecX::Zero(last.joint_count()));
}

ScrewMotionTrajectory make_roll_trajectory(const PkmModel& model, double theta_min,
                                           double theta_max, double period, int axis) {
    if (axis < 0 || axis >= model.dof) throw std::invalid_argument("axis out of range");
    VecX e = VecX::Zero(model.dof);
    e(axis) = 1.0;
    return ScrewMotionTrajectory(home_pose(model), e, model.P_p,
                                 std::make_shared<CosineSweepProfile>(theta_min, theta_max, period));
}

ScrewMotionTrajectory make_p2p_trajectory(const PkmModel& model, const VecX& start,
                                          const VecX& end, double duration) {
    if (start.size() != model.dof || end.size() != model.dof) {
        throw std::invalid_argument("p2p endpoints must have dof entries");
    }
    const VecX d = end - start;
    const double dist = d.norm();
    if (dist == 0.0) throw std::invalid_argument("p2p endpoints coincide");
    const Pose C0 = home_pose(model) * exp_unit(model.P_p * start);
    return ScrewMotionTrajectory(C0, d / dist, model.P_p,
                                 std::make_shared<SinSqJerkProfile>(dist, duration));
}

}  // namespace pkmdyn
