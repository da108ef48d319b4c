#pragma once

// Analytic task-space trajectories. Poses follow C(t) = C0 exp(xi^ s(t)) so
// the body twist is exactly xi sdot(t) and every derivative up to snap is
// closed form. Used by the CLI, the verification oracle, and the tests.

#include <memory>

#include "pkmdyn/model.hpp"

namespace pkmdyn {

/// Scalar motion profile with derivatives up to order 4.
class Profile {
public:
    virtual ~Profile() = default;
    /// d[0..4] = s(t) .. d^4 s/dt^4.
    virtual void eval(double t, double d[5]) const = 0;
};

/// s(t) = -A cos(w t) + A + s_min with A = (s_max - s_min)/2, w = 2 pi / T.
/// s(0) = s_min, s(T/2) = s_max, periodic.
class CosineSweepProfile : public Profile {
public:
    CosineSweepProfile(double s_min, double s_max, double period);
    void eval(double t, double d[5]) const override;

private:
    double a_, w_, s_min_;
};

/// Rest-to-rest profile whose jerk follows sin^2 quarters with sign pattern
/// (+,-,-,+): position, velocity, acceleration, jerk and snap are closed form,
/// all of velocity..snap vanish at both ends. Clamped outside [0, T].
class SinSqJerkProfile : public Profile {
public:
    SinSqJerkProfile(double displacement, double duration);
    void eval(double t, double d[5]) const override;

    double peak_velocity() const;  // == v(T/2)

private:
    void quarter_state(int q, double local, double out[5]) const;
    double T_, tau_, jerk_amp_;
};

class Trajectory {
public:
    virtual ~Trajectory() = default;
    virtual Pose pose(double t) const = 0;
    virtual void task_derivatives(double t, VecX& Vt, VecX& Vtd, VecX& Vtdd,
                                  VecX& Vtddd) const = 0;
};

/// C(t) = C0 exp(xi^ s(t)) with xi = P_p axis_task; V_t = axis_task * sdot.
class ScrewMotionTrajectory : public Trajectory {
public:
    ScrewMotionTrajectory(Pose C0, VecX axis_task, const MatX& P_p,
                          std::shared_ptr<Profile> profile);
    Pose pose(double t) const override;
    void task_derivatives(double t, VecX& Vt, VecX& Vtd, VecX& Vtdd, VecX& Vtddd) const override;

private:
    Pose C0_;
    VecX axis_task_;
    Vec6 xi_;
    std::shared_ptr<Profile> profile_;
};

/// Roll-style sweep of one task coordinate about the home platform pose.
/// axis indexes the V_t component (angular-x of the platform for the GSP).
ScrewMotionTrajectory make_roll_trajectory(const PkmModel& model, double theta_min,
                                           double theta_max, double period, int axis);

/// Rest-to-rest point-to-point motion between two task-space displacements
/// from home, with a sin^2 jerk profile.
ScrewMotionTrajectory make_p2p_trajectory(const PkmModel& model, const VecX& start,
                                          const VecX& end, double duration);

/// Home platform pose: forward kinematics of the last limb at theta = 0.
Pose home_pose(const PkmModel& model);

}  // namespace pkmdyn
