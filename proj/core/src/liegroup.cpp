#include "pkmdyn/liegroup.hpp"

#include <cmath>

namespace pkmdyn {

Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
         -v.y(), v.x(), 0;
    return s;
}

Pose exp_screw(const Screw& X, double theta) {
    const Vec3 w = X.head<3>();
    const Vec3 v = X.tail<3>();
    if (w.squaredNorm() < 1e-24) {
        return {Mat3::Identity(), v * theta};
    }
    // Rodrigues coefficients; 4th-order Taylor below 1e-8 to avoid cancellation.
    const double th = theta;
    double s, c1;  // sin(th), 1 - cos(th)
    if (std::abs(th) < 1e-8) {
        const double th2 = th * th;
        s = th * (1.0 - th2 / 6.0);
        c1 = th2 * (0.5 - th2 / 24.0);
    } else {
        s = std::sin(th);
        c1 = 1.0 - std::cos(th);
    }
    const Mat3 W = skew(w);
    const Mat3 R = Mat3::Identity() + s * W + c1 * (W * W);
    const Vec3 wxv = w.cross(v);
    const Vec3 p = (Mat3::Identity() - R) * wxv + w * (w.dot(v)) * th;
    return {R, p};
}

Mat6 adjoint(const Pose& C) {
    Mat6 A = Mat6::Zero();
    A.topLeftCorner<3, 3>() = C.rotation;
    A.bottomRightCorner<3, 3>() = C.rotation;
    A.bottomLeftCorner<3, 3>() = skew(C.translation) * C.rotation;
    return A;
}

Mat6 ad(const Twist& X) {
    Mat6 A = Mat6::Zero();
    const Mat3 wh = skew(X.head<3>());
    A.topLeftCorner<3, 3>() = wh;
    A.bottomRightCorner<3, 3>() = wh;
    A.bottomLeftCorner<3, 3>() = skew(X.tail<3>());
    return A;
}

Wrench adjoint_T_apply(const Pose& C, const Wrench& W) {
    // Ad^T = [[R^T, -R^T p^],[0, R^T]]
    const Vec3 m = W.head<3>();
    const Vec3 f = W.tail<3>();
    Wrench out;
    out.head<3>() = C.rotation.transpose() * (m - C.translation.cross(f));
    out.tail<3>() = C.rotation.transpose() * f;
    return out;
}

Wrench ad_T_apply(const Twist& X, const Wrench& W) {
    // ad^T = [[-w^, -v^],[0, -w^]]
    const Vec3 w = X.head<3>();
    const Vec3 v = X.tail<3>();
    Wrench out;
    out.head<3>() = -w.cross(W.head<3>()) - v.cross(W.tail<3>());
    out.tail<3>() = -w.cross(W.tail<3>());
    return out;
}

Twist ad_apply(const Twist& X, const Twist& Y) {
    const Vec3 w = X.head<3>();
    const Vec3 v = X.tail<3>();
    Twist out;
    out.head<3>() = w.cross(Y.head<3>());
    out.tail<3>() = v.cross(Y.head<3>()) + w.cross(Y.tail<3>());
    return out;
}

Vec3 rotation_log(const Mat3& R) {
    Vec3 axis2;  // 2 sin(th) * axis
    axis2 << R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1);
    const double s = 0.5 * axis2.norm();
    const double c = 0.5 * (R.trace() - 1.0);
    // atan2 keeps full precision for tiny angles where acos(c) loses ~sqrt(eps)
    const double th = std::atan2(s, c);
    if (s < 1e-8) {
        if (c > 0.0) {
            return 0.5 * axis2;  // th/(2 sin th) -> 1/2
        }
        // th near pi: axis from the symmetric part
        const Mat3 S = 0.5 * (R + Mat3::Identity());
        Vec3 ax(std::sqrt(std::max(0.0, S(0, 0))), std::sqrt(std::max(0.0, S(1, 1))),
                std::sqrt(std::max(0.0, S(2, 2))));
        int k;
        ax.maxCoeff(&k);
        for (int i = 0; i < 3; ++i) {
            if (i != k && S(k, i) < 0.0) ax(i) = -ax(i);
        }
        return th * ax.normalized();
    }
    return (th / (2.0 * s)) * axis2;
}

Vec6 pose_error(const Pose& A, const Pose& B) {
    const Pose D = A.inverse() * B;
    Vec6 e;
    e.head<3>() = rotation_log(D.rotation);
    e.tail<3>() = D.translation;
    return e;
}

bool is_valid_screw(const Screw& X, double tol) {
    const double nw = X.head<3>().norm();
    const double nv = X.tail<3>().norm();
    const bool rotational = std::abs(nw - 1.0) <= tol;
    const bool prismatic = nw <= tol && std::abs(nv - 1.0) <= tol;
    return rotational || prismatic;  // the two cases are mutually exclusive
}

}  // namespace pkmdyn
