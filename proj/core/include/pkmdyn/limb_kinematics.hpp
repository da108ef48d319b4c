#pragma once

// Serial-chain primitives for one limb: product-of-exponentials poses, body
// twist recursions up to the third twist derivative, the geometric Jacobian
// J_p with its first three time derivatives, and Newton-Raphson geometric IK.
//
// All twist recursions here are purely kinematic: the ground boundary
// acceleration is an explicit argument and the PKM pipeline passes zero
// (gravity enters in the dynamics recursion, see invdyn.hpp).

#include <vector>

#include "pkmdyn/liegroup.hpp"
#include "pkmdyn/model.hpp"

namespace pkmdyn {

/// Per-limb kinematics workspace. Owned by the caller; limbs never share one.
struct LimbKinCache {
    std::vector<Pose> poses;        // C_i, i = 1..N (absolute)
    std::vector<Pose> rel_poses;    // C_{i,i-1} = C_i^-1 C_{i-1}
    std::vector<Twist> V, Vd, Vdd, Vddd;       // body twists and derivatives, index 0 = ground
    std::vector<Twist> dV, dVd, dVdd;          // Delta V_{p,i} and derivatives (platform frame)
    MatX J, Jd, Jdd, Jddd;                     // 6 x N_l platform Jacobian and derivatives

    void resize(int n_joints);
};

/// Pass over C_i = C_{i-1} B_i exp(X_i theta_i); fills poses and rel_poses.
void fk_poses(const LimbModel& limb, const VecX& theta, LimbKinCache& cache);

/// Terminal-body pose only (no cache).
Pose fk_terminal(const LimbModel& limb, const VecX& theta);

/// Column i of J: Ad_{C_p,i} X_i with C_p,i = C_p^-1 C_i; requires fk_poses.
void jacobian_platform(const LimbModel& limb, LimbKinCache& cache);

/// Body twist derivative recursions, orders 1..4 (V, Vd, Vdd, Vddd).
/// Boundary: V_0 = 0, Vd_0 = (0, ground_accel), higher orders zero.
/// Each order requires the lower ones; rate arguments beyond the order are ignored.
void twist_recursions(const LimbModel& limb, LimbKinCache& cache, const VecX& dtheta,
                      const VecX& ddtheta, const VecX& d3theta, const VecX& d4theta, int order,
                      const Vec3& ground_accel = Vec3::Zero());

/// Delta twists of body i relative to the platform, in the platform frame:
///   dV   = V_p - Ad_{C_p,i} V_i
///   dVd  = d/dt dV  = Vd_p - Ad Vd_i + ad_dV V_p
///   dVdd = d/dt dVd = Vdd_p - Ad Vdd_i + ad_dV(Ad Vd_i) + ad_dVd V_p + ad_dV Vd_p
/// V_p, Vd_p, Vdd_p are the platform twist derivatives (P_p V_t etc.).
void delta_twists(const LimbModel& limb, LimbKinCache& cache, const Twist& V_p, const Twist& Vd_p,
                  const Twist& Vdd_p, int order);

/// Closed-form Jacobian derivatives, columnwise from the delta twists:
///   Jd   = -ad_dV J
///   Jdd  = (ad_dV^2 - ad_dVd) J
///   Jddd = (-ad_dV^3 + 2 ad_dVd ad_dV + ad_dV ad_dVd - ad_dVdd) J
void jacobian_derivatives(const LimbModel& limb, LimbKinCache& cache, int order);

struct IkOptions {
    int max_iterations = 50;
    double tolerance = 1e-12;        // on the 6-vector pose error norm
    double condition_limit = 1e12;   // singular-Jacobian abort
};

/// Newton-Raphson (Gauss-Newton for dp(l) < 6) on the body-frame pose error.
/// Throws IkError on singular Jacobian or non-convergence.
VecX geometric_ik_newton(const LimbModel& limb, const Pose& target, const VecX& theta0,
                         const IkOptions& opts = {});

}  // namespace pkmdyn
