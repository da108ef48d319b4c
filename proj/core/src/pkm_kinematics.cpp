#include "pkmdyn/pkm_kinematics.hpp"

#include <string>

#include "pkmdyn/errors.hpp"

namespace pkmdyn {

void LuCounters::reset() {
    jt_factorizations = 0;
    pass_solves = 0;
    other_solves = 0;
    jik_factorizations = 0;
}

LuCounters& lu_counters() {
    static LuCounters counters;
    return counters;
}

namespace {

void check_pivots(const Eigen::PartialPivLU<MatX>& lu, const MatX& A, double rel_tol, int limb) {
    const double scale = A.norm();
    const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
    const auto& LU = lu.matrixLU();
    for (int i = 0; i < LU.rows(); ++i) {
        if (std::abs(LU(i, i)) <= tol) {
            throw SingularityError(
                "kinematic singularity: J_t of limb " + std::to_string(limb) +
                    " has pivot " + std::to_string(std::abs(LU(i, i))) + " below threshold",
                limb);
        }
    }
}

}  // namespace

void limb_F_derivatives(LimbSolveData& sd) {
    sd.Fd = -sd.lu_jt.solve(sd.Jtd * sd.F);
    sd.Fdd = -sd.lu_jt.solve(sd.Jtdd * sd.F + 2.0 * sd.Jtd * sd.Fd);
    lu_counters().other_solves += 2;
}

void assemble_ik_jacobian(const PkmModel& model, PkmKinCache& cache) {
    const int L = model.limb_count();
    const int dp = model.dof;
    cache.J_IK.resize(L, dp);
    cache.J_IKd.resize(L, dp);
    cache.J_IKdd.resize(L, dp);
    for (int l = 0; l < L; ++l) {
        const int a = model.limbs[l].actuated_joint;
        cache.J_IK.row(l) = cache.solve[l].F.row(a);
        cache.J_IKd.row(l) = cache.solve[l].Fd.row(a);
        cache.J_IKdd.row(l) = cache.solve[l].Fdd.row(a);
    }
}

namespace {

MatX delete_cut_rows(const MatX& F, const LimbModel& limb) {
    const int n = limb.tree_joint_count();
    return F.topRows(n);  // cut rows are validated to be the trailing joints
}

}  // namespace

PkmKinCache fourth_order_kinematics(const PkmModel& model, const std::vector<VecX>& theta,
                                    const VecX& Vt, const VecX& Vtd, const VecX& Vtdd,
                                    const VecX& Vtddd, const KinOptions& opts) {
    const int L = model.limb_count();
    if (static_cast<int>(theta.size()) != L) {
        throw LoopClosureError("theta must have one block per limb");
    }
    PkmKinCache cache;
    cache.limb.resize(L);
    cache.solve.resize(L);
    cache.Vt = Vt;
    cache.Vtd = Vtd;
    cache.Vtdd = Vtdd;
    cache.Vtddd = Vtddd;
    cache.V_p = model.P_p * Vt;
    cache.Vd_p = model.P_p * Vtd;
    cache.Vdd_p = model.P_p * Vtdd;

    // -- pass 1: poses, J_p, LU(J_t), F, dtheta --
    for (int l = 0; l < L; ++l) {
        const LimbModel& limb = model.limbs[l];
        if (theta[l].size() != limb.joint_count()) {
            throw LoopClosureError("theta block of limb " + std::to_string(l) + " has wrong length");
        }
        LimbKinCache& kc = cache.limb[l];
        kc.resize(limb.joint_count());
        fk_poses(limb, theta[l], kc);
        jacobian_platform(limb, kc);
        LimbSolveData& sd = cache.solve[l];
        sd.Jt = limb.P_t * kc.J;
        sd.lu_jt.compute(sd.Jt);
        lu_counters().jt_factorizations += 1;
        check_pivots(sd.lu_jt, sd.Jt, opts.pivot_rel_tolerance, l);
        sd.F = sd.lu_jt.solve(limb.D_t);
        sd.dtheta = sd.lu_jt.solve(limb.D_t * Vt);
        lu_counters().pass_solves += 2;
    }
    if (opts.check_closure) {
        const Pose& ref = cache.limb[L - 1].poses.back();
        for (int l = 0; l < L; ++l) {
            const double err = pose_error(cache.limb[l].poses.back(), ref).norm();
            if (err > opts.closure_tolerance) {
                throw LoopClosureError("loop closure residual " + std::to_string(err) +
                                       " at limb " + std::to_string(l));
            }
        }
    }

    // -- pass 2: V_i, Jd, c2, ddtheta --
    for (int l = 0; l < L; ++l) {
        const LimbModel& limb = model.limbs[l];
        LimbKinCache& kc = cache.limb[l];
        LimbSolveData& sd = cache.solve[l];
        const VecX zero = VecX::Zero(limb.joint_count());
        twist_recursions(limb, kc, sd.dtheta, zero, zero, zero, 1);
        delta_twists(limb, kc, cache.V_p, cache.Vd_p, cache.Vdd_p, 1);
        jacobian_derivatives(limb, kc, 1);
        sd.c2 = limb.P_t * (kc.Jd * sd.dtheta);
        sd.ddtheta = sd.lu_jt.solve(limb.D_t * Vtd - sd.c2);
        lu_counters().pass_solves += 1;
    }

    // -- pass 3: Vd_i, Jdd, c3, d3theta --
    for (int l = 0; l < L; ++l) {
        const LimbModel& limb = model.limbs[l];
        LimbKinCache& kc = cache.limb[l];
        LimbSolveData& sd = cache.solve[l];
        const VecX zero = VecX::Zero(limb.joint_count());
        twist_recursions(limb, kc, sd.dtheta, sd.ddtheta, zero, zero, 2);
        delta_twists(limb, kc, cache.V_p, cache.Vd_p, cache.Vdd_p, 2);
        jacobian_derivatives(limb, kc, 2);
        sd.c3 = limb.P_t * (kc.Jdd * sd.dtheta + 2.0 * kc.Jd * sd.ddtheta);
        sd.d3theta = sd.lu_jt.solve(limb.D_t * Vtdd - sd.c3);
        lu_counters().pass_solves += 1;
    }

    // -- pass 4: Vdd_i, Jddd, c4, d4theta --
    for (int l = 0; l < L; ++l) {
        const LimbModel& limb = model.limbs[l];
        LimbKinCache& kc = cache.limb[l];
        LimbSolveData& sd = cache.solve[l];
        const VecX zero = VecX::Zero(limb.joint_count());
        twist_recursions(limb, kc, sd.dtheta, sd.ddtheta, sd.d3theta, zero, 3);
        delta_twists(limb, kc, cache.V_p, cache.Vd_p, cache.Vdd_p, 3);
        jacobian_derivatives(limb, kc, 3);
        const double w2 = opts.c4 == C4Variant::Binomial ? 3.0 : 2.0;
        sd.c4 = limb.P_t *
                (kc.Jddd * sd.dtheta + w2 * kc.Jdd * sd.ddtheta + 3.0 * kc.Jd * sd.d3theta);
        sd.d4theta = sd.lu_jt.solve(limb.D_t * Vtddd - sd.c4);
        lu_counters().pass_solves += 1;
    }

    // -- pass 5: Vddd_i; then F derivatives and J_IK --
    for (int l = 0; l < L; ++l) {
        const LimbModel& limb = model.limbs[l];
        LimbKinCache& kc = cache.limb[l];
        LimbSolveData& sd = cache.solve[l];
        twist_recursions(limb, kc, sd.dtheta, sd.ddtheta, sd.d3theta, sd.d4theta, 4);
        sd.Jtd = limb.P_t * kc.Jd;
        sd.Jtdd = limb.P_t * kc.Jdd;
        limb_F_derivatives(sd);
        sd.Fbar = delete_cut_rows(sd.F, limb);
        sd.Fbard = delete_cut_rows(sd.Fd, limb);
        sd.Fbardd = delete_cut_rows(sd.Fdd, limb);
    }
    assemble_ik_jacobian(model, cache);
    return cache;
}

VecX order_identity_residual(const PkmModel& model, const PkmKinCache& cache, int limb, int nu) {
    const LimbModel& lm = model.limbs[limb];
    const LimbSolveData& sd = cache.solve[limb];
    switch (nu) {
        case 1:
            return lm.D_t * cache.Vt - sd.Jt * sd.dtheta;
        case 2:
            return lm.D_t * cache.Vtd - sd.Jt * sd.ddtheta - sd.c2;
        case 3:
            return lm.D_t * cache.Vtdd - sd.Jt * sd.d3theta - sd.c3;
        case 4:
            return lm.D_t * cache.Vtddd - sd.Jt * sd.d4theta - sd.c4;
        default:
            throw std::invalid_argument("nu must be 1..4");
    }
}

}  // namespace pkmdyn
