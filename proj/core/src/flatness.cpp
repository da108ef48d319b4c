#include "pkmdyn/flatness.hpp"

#include <stdexcept>

namespace pkmdyn {

FeedforwardResult sea_feedforward(const PkmModel& model, const VecX& theta_a, const VecX& dtheta_a,
                                  const VecX& ddtheta_a, const InvDynResult& inv) {
    const int na = model.actuator_count();
    if (theta_a.size() != na || inv.u.size() != na) {
        throw std::invalid_argument("sea_feedforward: actuator dimension mismatch");
    }
    if (model.sea.stiffness.minCoeff() <= 0.0) {
        throw std::invalid_argument("sea_feedforward: stiffness entries must be positive");
    }
    const VecX kinv = model.sea.stiffness.cwiseInverse();
    FeedforwardResult r;
    r.q_m = theta_a + kinv.cwiseProduct(inv.u);
    r.qd_m = dtheta_a + kinv.cwiseProduct(inv.ud);
    r.qdd_m = ddtheta_a + kinv.cwiseProduct(inv.udd);
    r.tau = model.sea.motor_inertia.cwiseProduct(r.qdd_m) + inv.u;
    return r;
}

}  // namespace pkmdyn
