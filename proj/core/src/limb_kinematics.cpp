#include "pkmdyn/limb_kinematics.hpp"

#include <Eigen/SVD>

#include "pkmdyn/errors.hpp"

namespace pkmdyn {

void LimbKinCache::resize(int n) {
    poses.assign(n, Pose{});
    rel_poses.assign(n, Pose{});
    V.assign(n + 1, Twist::Zero());
    Vd.assign(n + 1, Twist::Zero());
    Vdd.assign(n + 1, Twist::Zero());
    Vddd.assign(n + 1, Twist::Zero());
    dV.assign(n, Twist::Zero());
    dVd.assign(n, Twist::Zero());
    dVdd.assign(n, Twist::Zero());
    J.setZero(6, n);
    Jd.setZero(6, n);
    Jdd.setZero(6, n);
    Jddd.setZero(6, n);
}

void fk_poses(const LimbModel& limb, const VecX& theta, LimbKinCache& cache) {
    const int N = limb.joint_count();
    if (static_cast<int>(cache.poses.size()) != N) cache.resize(N);
    Pose prev = Pose::identity();
    for (int i = 0; i < N; ++i) {
        const Pose step = limb.joints[i].ref_config * exp_screw(limb.joints[i].screw, theta(i));
        cache.poses[i] = prev * step;
        cache.rel_poses[i] = step.inverse();  // C_{i,i-1}
        prev = cache.poses[i];
    }
}

Pose fk_terminal(const LimbModel& limb, const VecX& theta) {
    Pose C = Pose::identity();
    for (int i = 0; i < limb.joint_count(); ++i) {
        C = C * limb.joints[i].ref_config * exp_screw(limb.joints[i].screw, theta(i));
    }
    return C;
}

void jacobian_platform(const LimbModel& limb, LimbKinCache& cache) {
    const int N = limb.joint_count();
    const Pose inv_p = cache.poses[N - 1].inverse();
    for (int i = 0; i < N; ++i) {
        const Pose Cpi = inv_p * cache.poses[i];
        cache.J.col(i) = adjoint(Cpi) * limb.joints[i].screw;
    }
}

void twist_recursions(const LimbModel& limb, LimbKinCache& cache, const VecX& dtheta,
                      const VecX& ddtheta, const VecX& d3theta, const VecX& d4theta, int order,
                      const Vec3& ground_accel) {
    const int N = limb.joint_count();
    cache.V[0].setZero();
    cache.Vd[0].setZero();
    cache.Vd[0].tail<3>() = ground_accel;
    cache.Vdd[0].setZero();
    cache.Vddd[0].setZero();
    for (int i = 1; i <= N; ++i) {
        const Mat6 A = adjoint(cache.rel_poses[i - 1]);
        const Screw& X = limb.joints[i - 1].screw;
        const double td = dtheta(i - 1);
        cache.V[i] = A * cache.V[i - 1] + X * td;
        if (order < 2) continue;
        const Twist adXV = ad_apply(X, cache.V[i]);
        cache.Vd[i] = A * cache.Vd[i - 1] - td * adXV + X * ddtheta(i - 1);
        if (order < 3) continue;
        const double tdd = ddtheta(i - 1);
        const Twist adX2V = ad_apply(X, adXV);
        cache.Vdd[i] = A * cache.Vdd[i - 1] + X * d3theta(i - 1)
                       - ad_apply(X, tdd * cache.V[i] + 2.0 * td * cache.Vd[i])
                       - td * td * adX2V;
        if (order < 4) continue;
        cache.Vddd[i] =
            A * cache.Vddd[i - 1] + X * d4theta(i - 1)
            - ad_apply(X, d3theta(i - 1) * cache.V[i] + 3.0 * tdd * cache.Vd[i] +
                              3.0 * td * cache.Vdd[i])
            - 3.0 * td * ad_apply(X, ad_apply(X, tdd * cache.V[i] + td * cache.Vd[i]))
            - td * td * td * ad_apply(X, adX2V);
    }
}

void delta_twists(const LimbModel& limb, LimbKinCache& cache, const Twist& V_p, const Twist& Vd_p,
                  const Twist& Vdd_p, int order) {
    const int N = limb.joint_count();
    const Pose inv_p = cache.poses[N - 1].inverse();
    for (int i = 0; i < N; ++i) {
        const Mat6 A = adjoint(inv_p * cache.poses[i]);
        cache.dV[i] = V_p - A * cache.V[i + 1];
        if (order < 2) continue;
        const Twist AVd = A * cache.Vd[i + 1];
        cache.dVd[i] = Vd_p - AVd + ad_apply(cache.dV[i], V_p);
        if (order < 3) continue;
        cache.dVdd[i] = Vdd_p - A * cache.Vdd[i + 1] + ad_apply(cache.dV[i], AVd) +
                        ad_apply(cache.dVd[i], V_p) + ad_apply(cache.dV[i], Vd_p);
    }
}

void jacobian_derivatives(const LimbModel& limb, LimbKinCache& cache, int order) {
    const int N = limb.joint_count();
    for (int i = 0; i < N; ++i) {
        const Twist col = cache.J.col(i);
        const Twist adV_col = ad_apply(cache.dV[i], col);
        cache.Jd.col(i) = -adV_col;
        if (order < 2) continue;
        const Twist adVd_col = ad_apply(cache.dVd[i], col);
        cache.Jdd.col(i) = ad_apply(cache.dV[i], adV_col) - adVd_col;
        if (order < 3) continue;
        cache.Jddd.col(i) = -ad_apply(cache.dV[i], ad_apply(cache.dV[i], adV_col)) +
                            2.0 * ad_apply(cache.dVd[i], adV_col) +
                            ad_apply(cache.dV[i], adVd_col) - ad_apply(cache.dVdd[i], col);
    }
}

VecX geometric_ik_newton(const LimbModel& limb, const Pose& target, const VecX& theta0,
                         const IkOptions& opts) {
    const int N = limb.joint_count();
    if (theta0.size() != N) throw IkError("seed length does not match joint count");
    VecX theta = theta0;
    LimbKinCache cache;
    cache.resize(N);
    for (int it = 0; it < opts.max_iterations; ++it) {
        fk_poses(limb, theta, cache);
        const Vec6 e = pose_error(cache.poses[N - 1], target);
        if (e.norm() <= opts.tolerance) return theta;
        jacobian_platform(limb, cache);
        Eigen::JacobiSVD<MatX> svd(cache.J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin <= 0.0 || smax / smin > opts.condition_limit) {
            throw IkError("singular Jacobian in IK (condition > limit)");
        }
        theta += svd.solve(e);
    }
    throw IkError("IK did not converge within iteration limit");
}

}  // namespace pkmdyn
