#include "pkmdyn/taskspace.hpp"

#include <stdexcept>

namespace pkmdyn {

namespace {

/// Q from the recursion with prescribed tree rates/accels, poses taken from
/// an already-filled cache (twists are rewritten in a scratch copy).
VecX recursion_Q(const LimbModel& limb, const LimbKinCache& posed, const VecX& dtheta_tree,
                 const VecX& ddtheta_tree, const Vec3& gravity) {
    const int N = limb.joint_count();
    const int n = limb.tree_joint_count();
    VecX dth = VecX::Zero(N), ddth = VecX::Zero(N);
    dth.head(n) = dtheta_tree;
    ddth.head(n) = ddtheta_tree;
    LimbKinCache scratch = posed;
    const VecX zero = VecX::Zero(N);
    twist_recursions(limb, scratch, dth, ddth, zero, zero, 2);
    LimbDynInputs in;
    in.kin = &scratch;
    in.dtheta = dth;
    in.ddtheta = ddth;
    in.gravity = gravity;
    return limb_invdyn_2nd(limb, in).Q;
}

MatX mass_matrix_from(const LimbModel& limb, const LimbKinCache& posed) {
    const int n = limb.tree_joint_count();
    MatX M(n, n);
    const VecX zero = VecX::Zero(n);
    for (int j = 0; j < n; ++j) {
        VecX ej = VecX::Zero(n);
        ej(j) = 1.0;
        M.col(j) = recursion_Q(limb, posed, zero, ej, Vec3::Zero());
    }
    const double asym = (M - M.transpose()).norm();
    if (asym > 1e-11 * (1.0 + M.norm())) {
        throw std::runtime_error("limb mass matrix asymmetry exceeds tolerance");
    }
    return 0.5 * (M + M.transpose());
}

LimbKinCache posed_cache(const LimbModel& limb, const VecX& theta) {
    LimbKinCache kin;
    kin.resize(limb.joint_count());
    fk_poses(limb, theta, kin);
    return kin;
}

}  // namespace

MatX limb_mass_matrix(const LimbModel& limb, const VecX& theta) {
    return mass_matrix_from(limb, posed_cache(limb, theta));
}

VecX limb_coriolis_times_rates(const LimbModel& limb, const VecX& theta, const VecX& dtheta_tree) {
    return recursion_Q(limb, posed_cache(limb, theta), dtheta_tree,
                       VecX::Zero(limb.tree_joint_count()), Vec3::Zero());
}

VecX limb_gravity_forces(const LimbModel& limb, const VecX& theta, const Vec3& gravity) {
    const int n = limb.tree_joint_count();
    return recursion_Q(limb, posed_cache(limb, theta), VecX::Zero(n), VecX::Zero(n), gravity);
}

LimbEomTerms limb_eom_terms(const LimbModel& limb, const VecX& theta, const VecX& dtheta_tree,
                            const Vec3& gravity) {
    const LimbKinCache posed = posed_cache(limb, theta);
    LimbEomTerms t;
    t.Mbar = mass_matrix_from(limb, posed);
    t.coriolis_times_rates = recursion_Q(limb, posed, dtheta_tree,
                                         VecX::Zero(limb.tree_joint_count()), Vec3::Zero());
    t.Q_grav = recursion_Q(limb, posed, VecX::Zero(limb.tree_joint_count()),
                           VecX::Zero(limb.tree_joint_count()), gravity);
    return t;
}

TaskSpaceEom task_eom(const PkmModel& model, const PkmKinCache& kin) {
    const int dp = model.dof;
    TaskSpaceEom eom;
    eom.M_t.setZero(dp, dp);
    eom.Ct_times_Vt.setZero(dp);
    eom.Wt_grav.setZero(dp);
    for (int l = 0; l < model.limb_count(); ++l) {
        const LimbModel& limb = model.limbs[l];
        const LimbSolveData& sd = kin.solve[l];
        const int n = limb.tree_joint_count();
        const LimbKinCache& posed = kin.limb[l];
        const MatX Mbar = mass_matrix_from(limb, posed);
        const VecX Cth = recursion_Q(limb, posed, sd.dtheta.head(n), VecX::Zero(n), Vec3::Zero());
        const VecX Qg = recursion_Q(limb, posed, VecX::Zero(n), VecX::Zero(n), model.gravity);
        eom.M_t += sd.Fbar.transpose() * Mbar * sd.Fbar;
        eom.Ct_times_Vt += sd.Fbar.transpose() * (Cth + Mbar * (sd.Fbard * kin.Vt));
        eom.Wt_grav += sd.Fbar.transpose() * Qg;
    }
    return eom;
}

double kinetic_energy(const PkmModel& model, const PkmKinCache& kin) {
    double ke = 0.0;
    for (int l = 0; l < model.limb_count(); ++l) {
        const LimbModel& limb = model.limbs[l];
        for (int i = 1; i <= limb.tree_joint_count(); ++i) {
            const Twist& V = kin.limb[l].V[i];
            ke += 0.5 * V.dot(limb.bodies[i - 1].mass_matrix * V);
        }
    }
    return ke;
}

}  // namespace pkmdyn
