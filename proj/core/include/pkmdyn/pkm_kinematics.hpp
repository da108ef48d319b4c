#pragma once

// Fourth-order forward/inverse PKM kinematics: five passes over the limbs,
// one LU factorization of J_t per limb per configuration (reused for every
// order), correction terms c^nu, and the assembly of F, Fbar, J_IK with
// their first two time derivatives.

#include <atomic>
#include <cstdint>
#include <vector>

#include "pkmdyn/limb_kinematics.hpp"
#include "pkmdyn/model.hpp"

namespace pkmdyn {

/// Counters for the LU reuse policy; cumulative, reset explicitly in tests.
struct LuCounters {
    std::atomic<std::uint64_t> jt_factorizations{0};
    std::atomic<std::uint64_t> pass_solves{0};   // F solve + the four per-order solves
    std::atomic<std::uint64_t> other_solves{0};  // Fd/Fdd and everything else
    std::atomic<std::uint64_t> jik_factorizations{0};

    void reset();
};
LuCounters& lu_counters();

/// Which coefficient multiplies Jdd*ddtheta in c^4. The general Leibniz form
/// gives 3; the alternative (coefficient 2) is kept selectable so a test can
/// pin the variant that satisfies the order-4 identity.
enum class C4Variant { Binomial, Alternate };

struct LimbSolveData {
    Eigen::PartialPivLU<MatX> lu_jt;  // factorized once per configuration
    MatX Jt, Jtd, Jtdd;               // P_t J, P_t Jd, P_t Jdd
    MatX F, Fd, Fdd;                  // N_l x dp inverse kinematics Jacobian of the limb
    MatX Fbar, Fbard, Fbardd;         // tree rows of F (cut rows deleted)
    VecX c2, c3, c4;                  // correction terms (dp(l) rows)
    VecX dtheta, ddtheta, d3theta, d4theta;
};

struct PkmKinCache {
    std::vector<LimbKinCache> limb;
    std::vector<LimbSolveData> solve;
    MatX J_IK, J_IKd, J_IKdd;  // n_a x dp
    Twist V_p, Vd_p, Vdd_p;    // P_p V_t and derivatives
    VecX Vt, Vtd, Vtdd, Vtddd;
};

struct KinOptions {
    C4Variant c4 = C4Variant::Binomial;
    double closure_tolerance = 1e-9;
    double pivot_rel_tolerance = 1e-12;
    bool check_closure = true;
};

/// Passes 1-5 for all limbs plus F/Fd/Fdd and J_IK assembly.
/// Preconditions: theta closes the loops (checked against closure_tolerance).
/// Throws SingularityError (naming the limb) when a J_t pivot falls below
/// pivot_rel_tolerance * ||J_t||, LoopClosureError on inconsistent theta.
PkmKinCache fourth_order_kinematics(const PkmModel& model, const std::vector<VecX>& theta,
                                    const VecX& Vt, const VecX& Vtd, const VecX& Vtdd,
                                    const VecX& Vtddd, const KinOptions& opts = {});

/// Fd = -G Jtd F, Fdd = -G (Jtdd F + 2 Jtd Fd) with G = Jt^-1 via the cached LU.
/// Called by fourth_order_kinematics; exposed for tests.
void limb_F_derivatives(LimbSolveData& sd);

/// Row (actuated joint) of each limb's F (and derivatives) stacked.
void assemble_ik_jacobian(const PkmModel& model, PkmKinCache& cache);

/// Residual of the order-nu identity D_t Vt^(nu-1) - J_t theta^(nu) - P_t c^nu
/// for one limb; diagnostic used by the invariants tests.
VecX order_identity_residual(const PkmModel& model, const PkmKinCache& cache, int limb, int nu);

}  // namespace pkmdyn
