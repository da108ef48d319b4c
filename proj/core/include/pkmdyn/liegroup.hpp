#pragma once

// SE(3)/se(3) kernel: screw exponential, pose algebra, adjoint and spatial
// cross product operators. Twists are (angular, linear) in ray coordinates,
// wrenches (moment, force) in axis coordinates; the angular block comes first
// in every 6-vector and 6x6 operator.

#include <Eigen/Dense>

namespace pkmdyn {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Body twist (omega, v) or any element of se(3) in ray coordinates.
using Twist = Vec6;
/// Wrench (moment, force) in axis coordinates; <W,V> is mechanical power.
using Wrench = Vec6;
/// Constant joint screw in ray coordinates (unit rotational or unit prismatic).
using Screw = Vec6;

Mat3 skew(const Vec3& v);

/// Rigid transformation: rotation + translation, acting as x -> R x + p.
struct Pose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static Pose identity() { return {}; }

    Pose operator*(const Pose& other) const {
        return {rotation * other.rotation, rotation * other.translation + translation};
    }
    Pose inverse() const {
        return {rotation.transpose(), -(rotation.transpose() * translation)};
    }

    /// ||R^T R - I||, for validation.
    double orthonormality_error() const {
        return (rotation.transpose() * rotation - Mat3::Identity()).norm();
    }
};

/// exp(X th): Rodrigues closed form for unit rotational screws, pure
/// translation for prismatic ones. Small |th| uses series coefficients.
Pose exp_screw(const Screw& X, double theta);

/// Twist transformation matrix [[R,0],[p^R,R]] mapping frame-j twists to frame i
/// for C = C_{i,j}.
Mat6 adjoint(const Pose& C);

/// Spatial cross product [[w^,0],[v^,w^]]; ad(X) Y = [X, Y].
Mat6 ad(const Twist& X);

/// Ad(C)^T W without forming the 6x6 matrix.
Wrench adjoint_T_apply(const Pose& C, const Wrench& W);

/// ad(X)^T W without forming the 6x6 matrix.
Wrench ad_T_apply(const Twist& X, const Wrench& W);

/// ad(X) Y = [X, Y] without forming the 6x6 matrix.
Twist ad_apply(const Twist& X, const Twist& Y);

/// Body-frame pose difference as a 6-vector (rotation log, translation),
/// zero iff A == B. Used by the Newton-Raphson IK and closure checks.
Vec6 pose_error(const Pose& A, const Pose& B);

/// SO(3) log with atan2-based angle and small-angle branch below 1e-8.
Vec3 rotation_log(const Mat3& R);

/// true if X is a unit rotational or unit prismatic screw (tolerance 1e-12).
bool is_valid_screw(const Screw& X, double tol = 1e-12);

}  // namespace pkmdyn
