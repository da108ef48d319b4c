#pragma once

// Closed-form task-space EOM assembled from per-limb terms:
//   M_t = sum Fbar^T Mbar Fbar
//   C_t V_t = sum Fbar^T (Cbar thbar_dot + Mbar Fbard V_t)
//   W_t = sum Fbar^T Qbar_grav
// Mbar comes from unit-acceleration inverse-dynamics columns, so this module
// is an independent cross-check of the recursive path, not a copy of it.

#include "pkmdyn/invdyn.hpp"

namespace pkmdyn {

struct LimbEomTerms {
    MatX Mbar;                 // n_tree x n_tree
    VecX coriolis_times_rates; // Cbar * thbar_dot
    VecX Q_grav;
};

struct TaskSpaceEom {
    MatX M_t;          // dp x dp
    VecX Ct_times_Vt;  // dp
    VecX Wt_grav;      // dp
};

/// Column j = Q from the recursion with zero rates, zero gravity, tree
/// ddtheta = e_j; symmetrized after asserting asymmetry <= 1e-11.
MatX limb_mass_matrix(const LimbModel& limb, const VecX& theta);

/// Q from the recursion with the given rates, zero acceleration, zero gravity.
VecX limb_coriolis_times_rates(const LimbModel& limb, const VecX& theta, const VecX& dtheta_tree);

/// Q from the recursion at rest under gravity.
VecX limb_gravity_forces(const LimbModel& limb, const VecX& theta, const Vec3& gravity);

LimbEomTerms limb_eom_terms(const LimbModel& limb, const VecX& theta, const VecX& dtheta_tree,
                            const Vec3& gravity);

/// Assemble Eq-level task-space terms from a kinematics cache.
TaskSpaceEom task_eom(const PkmModel& model, const PkmKinCache& kin);

/// Total kinetic energy 0.5 sum_i V_i^T M_i V_i over all tree bodies.
double kinetic_energy(const PkmModel& model, const PkmKinCache& kin);

}  // namespace pkmdyn
