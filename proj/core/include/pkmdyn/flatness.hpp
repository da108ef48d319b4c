#pragma once

// SEA feedforward: motor trajectory and feedforward torque from the
// second-order inverse dynamics, u = K (q_m - th_a) and M_m q_m'' = tau - u.

#include "pkmdyn/invdyn.hpp"

namespace pkmdyn {

struct FeedforwardResult {
    VecX q_m, qd_m, qdd_m;  // motor position, velocity, acceleration
    VecX tau;               // feedforward torque/force
};

/// q_m = th_a + K^-1 u, qd_m = thd_a + K^-1 ud, qdd_m = thdd_a + K^-1 udd,
/// tau = M_m qdd_m + u. Throws std::invalid_argument on a zero stiffness entry.
FeedforwardResult sea_feedforward(const PkmModel& model, const VecX& theta_a, const VecX& dtheta_a,
                                  const VecX& ddtheta_a, const InvDynResult& inv);

}  // namespace pkmdyn
