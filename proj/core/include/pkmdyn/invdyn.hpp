#pragma once

// Backward recursive second-order inverse dynamics per limb and the assembly
// of the PKM actuation forces u, ud, udd.
//
// Gravity enters here, not in the kinematics: per tree body the transported
// ground acceleration G_i = (0, R_i^T a0) with a0 = -gravity and its true
// derivatives Gd_i = -ad_{V_i} G_i, Gdd_i = -ad_{Vd_i} G_i - ad_{V_i} Gd_i
// are added to the acceleration slots of the recursion. Feeding gravity
// through the order-1 boundary of the twist recursions instead breaks the
// time-derivative consistency of the higher orders.

#include <optional>
#include <vector>

#include "pkmdyn/pkm_kinematics.hpp"

namespace pkmdyn {

/// Interbody wrenches and generalized forces of one limb's tree.
struct LimbForceCache {
    std::vector<Wrench> W, Wd, Wdd;  // index 0 = tree body 1
    VecX Q, Qd, Qdd;                 // Q_i = X_i^T W_i etc.
};

struct InvDynResult {
    VecX u, ud, udd;                      // n_a entries
    std::vector<LimbForceCache> forces;   // per limb
};

/// Options for the per-limb recursion; rates/accelerations can be overridden
/// so the task-space oracle can evaluate M-columns, Coriolis and gravity terms.
struct LimbDynInputs {
    const LimbKinCache* kin = nullptr;
    VecX dtheta, ddtheta;  // rates of this limb (for the Ad^T bracket terms)
    Vec3 gravity = Vec3::Zero();
};

/// W/Wd/Wdd backward over the tree bodies (terminal tree body down to 1,
/// zero boundary above), then Q^(k)_i = X_i^T W^(k)_i.
LimbForceCache limb_invdyn_2nd(const LimbModel& limb, const LimbDynInputs& in);

/// u from J_IK^T u = sum_l Fbar^T Qbar. Square n_a == dp uses the cached LU of
/// J_IK^T; n_a > dp returns the minimum-norm consistent solution through the
/// normal equations. Throws SingularityError on rank loss.
struct UAssembly {
    VecX u, ud, udd;
};
UAssembly assemble_u_chain(const PkmModel& model, const PkmKinCache& kin,
                           const std::vector<LimbForceCache>& forces,
                           const std::optional<VecX>& ee_load = std::nullopt);

/// fourth_order_kinematics + per-limb recursions + assembly.
/// ee_load: optional external platform wrench (task-space components),
/// subtracted from the right-hand side at order zero; defaults to none.
InvDynResult second_order_invdyn(const PkmModel& model, const std::vector<VecX>& theta,
                                 const VecX& Vt, const VecX& Vtd, const VecX& Vtdd,
                                 const VecX& Vtddd, const KinOptions& opts = {},
                                 const std::optional<VecX>& ee_load = std::nullopt);

/// Variant reusing an existing kinematics cache.
InvDynResult second_order_invdyn(const PkmModel& model, const PkmKinCache& kin,
                                 const std::optional<VecX>& ee_load = std::nullopt);

}  // namespace pkmdyn
