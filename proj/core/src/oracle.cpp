#include "pkmdyn/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pkmdyn/taskspace.hpp"

namespace pkmdyn {

void FdConfig::validate() const {
    if (base_step < 1e-8 || base_step > 1e-2) {
        throw std::invalid_argument("base_step must be within [1e-8, 1e-2]");
    }
    if (richardson_levels < 1 || richardson_levels > 4) {
        throw std::invalid_argument("richardson_levels must be within 1..4");
    }
}

VecX fd_derivative(const std::function<VecX(double)>& f, double t, int order, const FdConfig& cfg) {
    cfg.validate();
    if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
    const int L = cfg.richardson_levels;
    std::vector<VecX> tab(L);
    const VecX f0 = (order == 2) ? f(t) : VecX();
    for (int k = 0; k < L; ++k) {
        const double h = cfg.base_step / std::pow(2.0, k);
        if (order == 1) {
            tab[k] = (f(t + h) - f(t - h)) / (2.0 * h);
        } else {
            tab[k] = (f(t + h) - 2.0 * f0 + f(t - h)) / (h * h);
        }
    }
    // both stencils have even error series; each level cancels one h^2 power
    for (int j = 1; j < L; ++j) {
        const double fac = std::pow(4.0, j);
        for (int k = 0; k + j < L; ++k) {
            tab[k] = (fac * tab[k + 1] - tab[k]) / (fac - 1.0);
        }
    }
    return tab[0];
}

TrajectorySample evaluate_at(const PkmModel& model, const Trajectory& traj, double t,
                             const std::vector<VecX>* seed) {
    const Pose target = traj.pose(t);
    TrajectorySample s;
    s.theta.reserve(model.limb_count());
    for (int l = 0; l < model.limb_count(); ++l) {
        const LimbModel& limb = model.limbs[l];
        const VecX th0 = seed ? (*seed)[l] : VecX::Zero(limb.joint_count());
        s.theta.push_back(geometric_ik_newton(limb, target, th0));
    }
    VecX Vt, Vtd, Vtdd, Vtddd;
    traj.task_derivatives(t, Vt, Vtd, Vtdd, Vtddd);
    s.kin = fourth_order_kinematics(model, s.theta, Vt, Vtd, Vtdd, Vtddd);
    s.dyn = second_order_invdyn(model, s.kin);
    return s;
}

namespace {

VecX flatten(const MatX& m) {
    return Eigen::Map<const VecX>(m.data(), m.size());
}

double rel_err(const VecX& analytic, const VecX& fd) {
    return (analytic - fd).norm() / (1.0 + fd.norm());
}

struct Checker {
    VerificationReport& report;
    const FdConfig& cfg;

    void add(const std::string& name, int order, double err) {
        const double tol = cfg.tolerance_per_order.at(order);
        for (auto& e : report.entries) {
            if (e.name == name) {
                e.max_rel_error = std::max(e.max_rel_error, err);
                e.pass = e.max_rel_error <= e.tolerance;
                report.pass = report.pass && e.pass;
                return;
            }
        }
        report.entries.push_back({name, order, err, tol, err <= tol});
        report.pass = report.pass && report.entries.back().pass;
    }
};

}  // namespace

namespace {

/// First-derivative Richardson table from pre-evaluated +/- samples.
VecX richardson1(const std::vector<VecX>& plus, const std::vector<VecX>& minus, double h0) {
    const int L = static_cast<int>(plus.size());
    std::vector<VecX> tab(L);
    for (int k = 0; k < L; ++k) {
        const double h = h0 / std::pow(2.0, k);
        tab[k] = (plus[k] - minus[k]) / (2.0 * h);
    }
    for (int j = 1; j < L; ++j) {
        const double fac = std::pow(4.0, j);
        for (int k = 0; k + j < L; ++k) tab[k] = (fac * tab[k + 1] - tab[k]) / (fac - 1.0);
    }
    return tab[0];
}

VecX richardson2(const std::vector<VecX>& plus, const VecX& center, const std::vector<VecX>& minus,
                 double h0) {
    const int L = static_cast<int>(plus.size());
    std::vector<VecX> tab(L);
    for (int k = 0; k < L; ++k) {
        const double h = h0 / std::pow(2.0, k);
        tab[k] = (plus[k] - 2.0 * center + minus[k]) / (h * h);
    }
    for (int j = 1; j < L; ++j) {
        const double fac = std::pow(4.0, j);
        for (int k = 0; k + j < L; ++k) tab[k] = (fac * tab[k + 1] - tab[k]) / (fac - 1.0);
    }
    return tab[0];
}

}  // namespace

VerificationReport verify_model(const PkmModel& model, const Trajectory& traj, const FdConfig& cfg,
                                double t0, double t1, int samples) {
    cfg.validate();
    VerificationReport report;
    Checker check{report, cfg};
    const int L = model.limb_count();
    const int levels = cfg.richardson_levels;

    for (int k = 0; k < samples; ++k) {
        const double t = t0 + (t1 - t0) * (k + 0.5) / samples;
        const TrajectorySample at = evaluate_at(model, traj, t);

        // one pipeline evaluation per stencil point; every quantity reuses them
        std::vector<TrajectorySample> sp(levels), sm(levels);
        for (int j = 0; j < levels; ++j) {
            const double h = cfg.base_step / std::pow(2.0, j);
            sp[j] = evaluate_at(model, traj, t + h, &at.theta);
            sm[j] = evaluate_at(model, traj, t - h, &at.theta);
        }
        auto fd1 = [&](const std::function<VecX(const TrajectorySample&)>& get) {
            std::vector<VecX> p(levels), m(levels);
            for (int j = 0; j < levels; ++j) {
                p[j] = get(sp[j]);
                m[j] = get(sm[j]);
            }
            return richardson1(p, m, cfg.base_step);
        };
        auto fd2 = [&](const std::function<VecX(const TrajectorySample&)>& get) {
            std::vector<VecX> p(levels), m(levels);
            for (int j = 0; j < levels; ++j) {
                p[j] = get(sp[j]);
                m[j] = get(sm[j]);
            }
            return richardson2(p, get(at), m, cfg.base_step);
        };

        for (int l = 0; l < L; ++l) {
            auto add1 = [&](const char* name, const VecX& analytic,
                            const std::function<VecX(const TrajectorySample&)>& get) {
                check.add(name, 1, rel_err(analytic, fd1(get)));
            };
            add1("ddtheta", at.kin.solve[l].ddtheta,
                 [l](const TrajectorySample& s) { return s.kin.solve[l].dtheta; });
            add1("d3theta", at.kin.solve[l].d3theta,
                 [l](const TrajectorySample& s) { return s.kin.solve[l].ddtheta; });
            add1("d4theta", at.kin.solve[l].d4theta,
                 [l](const TrajectorySample& s) { return s.kin.solve[l].d3theta; });
            add1("Jp_dot", flatten(at.kin.limb[l].Jd),
                 [l](const TrajectorySample& s) { return flatten(s.kin.limb[l].J); });
            add1("Jp_ddot", flatten(at.kin.limb[l].Jdd),
                 [l](const TrajectorySample& s) { return flatten(s.kin.limb[l].Jd); });
            add1("Jp_dddot", flatten(at.kin.limb[l].Jddd),
                 [l](const TrajectorySample& s) { return flatten(s.kin.limb[l].Jdd); });
            add1("F_dot", flatten(at.kin.solve[l].Fd),
                 [l](const TrajectorySample& s) { return flatten(s.kin.solve[l].F); });
            add1("F_ddot", flatten(at.kin.solve[l].Fdd),
                 [l](const TrajectorySample& s) { return flatten(s.kin.solve[l].Fd); });
            add1("Q_dot", at.dyn.forces[l].Qd,
                 [l](const TrajectorySample& s) { return s.dyn.forces[l].Q; });
            add1("Q_ddot", at.dyn.forces[l].Qdd,
                 [l](const TrajectorySample& s) { return s.dyn.forces[l].Qd; });
        }
        check.add("JIK_dot", 1, rel_err(flatten(at.kin.J_IKd), fd1([](const TrajectorySample& s) {
                                            return flatten(s.kin.J_IK);
                                        })));
        check.add("JIK_ddot", 1, rel_err(flatten(at.kin.J_IKdd), fd1([](const TrajectorySample& s) {
                                             return flatten(s.kin.J_IKd);
                                         })));
        check.add("u_dot", 1,
                  rel_err(at.dyn.ud, fd1([](const TrajectorySample& s) { return s.dyn.u; })));
        check.add("u_ddot", 1,
                  rel_err(at.dyn.udd, fd1([](const TrajectorySample& s) { return s.dyn.ud; })));
        check.add("u_ddot_2nd", 2,
                  rel_err(at.dyn.udd, fd2([](const TrajectorySample& s) { return s.dyn.u; })));

        // closed-form EOM residual
        const TaskSpaceEom eom = task_eom(model, at.kin);
        const VecX lhs = eom.M_t * at.kin.Vtd + eom.Ct_times_Vt + eom.Wt_grav;
        const VecX rhs = at.kin.J_IK.transpose() * at.dyn.u;
        check.add("eom_residual", 1, (lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
    return report;
}

std::string report_to_csv(const VerificationReport& report) {
    std::ostringstream os;
    os << "name,order,max_rel_error,tolerance,pass\n";
    os.precision(17);
    for (const auto& e : report.entries) {
        os << e.name << ',' << e.order << ',' << e.max_rel_error << ',' << e.tolerance << ','
           << (e.pass ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace pkmdyn
