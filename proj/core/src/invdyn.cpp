#include "pkmdyn/invdyn.hpp"

#include <string>

#include "pkmdyn/errors.hpp"

namespace pkmdyn {

LimbForceCache limb_invdyn_2nd(const LimbModel& limb, const LimbDynInputs& in) {
    const LimbKinCache& kin = *in.kin;
    const int n = limb.tree_joint_count();
    LimbForceCache out;
    out.W.assign(n, Wrench::Zero());
    out.Wd.assign(n, Wrench::Zero());
    out.Wdd.assign(n, Wrench::Zero());
    out.Q.setZero(n);
    out.Qd.setZero(n);
    out.Qdd.setZero(n);

    const Vec3 a0 = -in.gravity;
    Wrench W = Wrench::Zero(), Wd = Wrench::Zero(), Wdd = Wrench::Zero();
    for (int i = n; i >= 1; --i) {
        Wrench TW = Wrench::Zero(), TWd = Wrench::Zero(), TWdd = Wrench::Zero();
        if (i < n) {
            // transport the wrench of body i+1 across joint i+1
            const Pose& Cii = kin.rel_poses[i];  // C_{i+1,i}
            const Screw& X1 = limb.joints[i].screw;
            const double td = in.dtheta(i);
            const double tdd = in.ddtheta(i);
            TW = adjoint_T_apply(Cii, W);
            TWd = adjoint_T_apply(Cii, Wrench(Wd - td * ad_T_apply(X1, W)));
            const Wrench adTW = ad_T_apply(X1, W);
            TWdd = adjoint_T_apply(
                Cii, Wrench(Wdd - 2.0 * td * ad_T_apply(X1, Wd) +
                            td * td * ad_T_apply(X1, adTW) - tdd * adTW));
        }
        const Mat6& M = limb.bodies[i - 1].mass_matrix;
        const Twist& V = kin.V[i];
        const Twist& Vd = kin.Vd[i];
        const Twist& Vdd = kin.Vdd[i];
        const Twist& Vddd = kin.Vddd[i];
        // transported ground acceleration and its true derivatives
        Twist G = Twist::Zero();
        G.tail<3>() = kin.poses[i - 1].rotation.transpose() * a0;
        const Twist Gd = -ad_apply(V, G);
        const Twist Gdd = -ad_apply(Vd, G) - ad_apply(V, Gd);

        const Vec6 MV = M * V;
        const Vec6 MVd = M * Vd;
        W = TW + M * (Vd + G) - ad_T_apply(V, MV);
        Wd = TWd + M * (Vdd + Gd) - ad_T_apply(V, MVd) - ad_T_apply(Vd, MV);
        Wdd = TWdd + M * (Vddd + Gdd) - ad_T_apply(V, M * Vdd) - ad_T_apply(Vdd, MV) -
              2.0 * ad_T_apply(Vd, MVd);

        out.W[i - 1] = W;
        out.Wd[i - 1] = Wd;
        out.Wdd[i - 1] = Wdd;
        const Screw& X = limb.joints[i - 1].screw;
        out.Q(i - 1) = X.dot(W);
        out.Qd(i - 1) = X.dot(Wd);
        out.Qdd(i - 1) = X.dot(Wdd);
    }
    return out;
}

UAssembly assemble_u_chain(const PkmModel& model, const PkmKinCache& kin,
                           const std::vector<LimbForceCache>& forces,
                           const std::optional<VecX>& ee_load) {
    const int L = model.limb_count();
    const int dp = model.dof;
    VecX s = VecX::Zero(dp), sd = VecX::Zero(dp), sdd = VecX::Zero(dp);
    for (int l = 0; l < L; ++l) {
        const LimbSolveData& sdta = kin.solve[l];
        const LimbForceCache& f = forces[l];
        s += sdta.Fbar.transpose() * f.Q;
        sd += sdta.Fbar.transpose() * f.Qd + sdta.Fbard.transpose() * f.Q;
        sdd += sdta.Fbar.transpose() * f.Qdd + 2.0 * sdta.Fbard.transpose() * f.Qd +
               sdta.Fbardd.transpose() * f.Q;
    }
    if (ee_load && ee_load->size() > 0) {
        if (ee_load->size() != dp) throw std::invalid_argument("ee_load must have dof entries");
        s -= *ee_load;  // constant applied task wrench; derivatives unaffected
    }

    const MatX& J = kin.J_IK;
    const MatX& Jd = kin.J_IKd;
    const MatX& Jdd = kin.J_IKdd;
    UAssembly out;
    if (J.rows() == J.cols()) {
        Eigen::PartialPivLU<MatX> lu(J.transpose());
        lu_counters().jik_factorizations += 1;
        const auto& LU = lu.matrixLU();
        const double tol = 1e-12 * (J.norm() > 0 ? J.norm() : 1.0);
        for (int i = 0; i < LU.rows(); ++i) {
            if (std::abs(LU(i, i)) <= tol) {
                throw SingularityError("actuation singularity: J_IK is rank deficient");
            }
        }
        out.u = lu.solve(s);
        out.ud = lu.solve(VecX(sd - Jd.transpose() * out.u));
        out.udd = lu.solve(VecX(sdd - Jdd.transpose() * out.u - 2.0 * Jd.transpose() * out.ud));
        lu_counters().other_solves += 3;
    } else {
        // redundant actuation: minimum-norm u with J_IK^T u = s, differentiated
        // exactly through the normal equations
        const MatX A = J.transpose() * J;
        Eigen::PartialPivLU<MatX> lu(A);
        lu_counters().jik_factorizations += 1;
        const auto& LU = lu.matrixLU();
        const double tol = 1e-12 * (A.norm() > 0 ? A.norm() : 1.0);
        for (int i = 0; i < LU.rows(); ++i) {
            if (std::abs(LU(i, i)) <= tol) {
                throw SingularityError("actuation singularity: J_IK is rank deficient");
            }
        }
        const MatX Adot = Jd.transpose() * J + J.transpose() * Jd;
        const MatX Addot = Jdd.transpose() * J + 2.0 * Jd.transpose() * Jd + J.transpose() * Jdd;
        const VecX g0 = lu.solve(s);
        const VecX g1 = lu.solve(VecX(sd - Adot * g0));
        const VecX g2 = lu.solve(VecX(sdd - Addot * g0 - 2.0 * Adot * g1));
        out.u = J * g0;
        out.ud = Jd * g0 + J * g1;
        out.udd = Jdd * g0 + 2.0 * Jd * g1 + J * g2;
        lu_counters().other_solves += 3;
    }
    return out;
}

InvDynResult second_order_invdyn(const PkmModel& model, const PkmKinCache& kin,
                                 const std::optional<VecX>& ee_load) {
    const int L = model.limb_count();
    InvDynResult res;
    res.forces.reserve(L);
    for (int l = 0; l < L; ++l) {
        LimbDynInputs in;
        in.kin = &kin.limb[l];
        in.dtheta = kin.solve[l].dtheta;
        in.ddtheta = kin.solve[l].ddtheta;
        in.gravity = model.gravity;
        res.forces.push_back(limb_invdyn_2nd(model.limbs[l], in));
    }
    const UAssembly ua = assemble_u_chain(model, kin, res.forces, ee_load);
    res.u = ua.u;
    res.ud = ua.ud;
    res.udd = ua.udd;
    return res;
}

InvDynResult second_order_invdyn(const PkmModel& model, const std::vector<VecX>& theta,
                                 const VecX& Vt, const VecX& Vtd, const VecX& Vtdd,
                                 const VecX& Vtddd, const KinOptions& opts,
                                 const std::optional<VecX>& ee_load) {
    const PkmKinCache kin = fourth_order_kinematics(model, theta, Vt, Vtd, Vtdd, Vtddd, opts);
    return second_order_invdyn(model, kin, ee_load);
}

}  // namespace pkmdyn
