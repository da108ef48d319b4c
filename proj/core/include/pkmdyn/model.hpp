#pragma once

// PKM description: limbs as serial chains of 1-DOF joints with body-fixed
// 6x6 mass matrices, selection matrices wiring each limb to the task space,
// cut-joint bookkeeping for the spanning tree, and SEA parameters.

#include <string>
#include <vector>

#include "pkmdyn/liegroup.hpp"

namespace pkmdyn {

/// One 1-DOF joint: screw X_i (in the body-i frame) plus the reference
/// configuration B_i of body i relative to body i-1 at theta = 0.
struct JointSpec {
    Screw screw;
    Pose ref_config;
};

/// 6x6 body-fixed mass matrix; zero for massless intermediate bodies.
struct BodySpec {
    Mat6 mass_matrix;
};

struct LimbModel {
    std::vector<JointSpec> joints;       // length N_l
    std::vector<BodySpec> bodies;        // length n_tree (tree bodies only)
    MatX P_t;                            // dp(l) x 6 row selection
    MatX D_t;                            // dp(l) x dp velocity distribution
    std::vector<int> cut_joint_rows;     // suffix of joint indices (0-based)
    int actuated_joint = 0;

    int joint_count() const { return static_cast<int>(joints.size()); }
    int tree_joint_count() const { return static_cast<int>(bodies.size()); }
    int task_dof() const { return static_cast<int>(P_t.rows()); }
};

struct SeaParams {
    VecX stiffness;       // diag K, one entry per actuator
    VecX motor_inertia;   // diag M_m
};

struct PkmModel {
    std::vector<LimbModel> limbs;   // last limb carries the platform body
    MatX P_p;                       // 6 x dp platform velocity distribution
    Vec3 gravity = Vec3::Zero();
    int dof = 0;                    // dp
    SeaParams sea;

    int limb_count() const { return static_cast<int>(limbs.size()); }
    int actuator_count() const { return limb_count(); }
};

/// Joint coordinates of all limbs plus the task-space motion they came from.
struct PkmState {
    std::vector<VecX> theta;   // per limb, length N_l
    VecX task_vel, task_acc, task_jerk, task_snap;  // V_t ... d3(V_t)/dt3
    Pose platform_pose;
};

/// Parse and fully validate a model document. Throws ModelError with the
/// limb/joint index on any schema or invariant violation.
PkmModel load_model(const std::string& document);

/// load_model(read file). Throws ModelError if unreadable.
PkmModel load_model_file(const std::string& path);

/// Canonical JSON serialization; load_model(serialize(m)) == m bitwise.
std::string serialize(const PkmModel& m);

struct EquimobilityEntry {
    int limb;
    int dp_l;
    bool equimobile;
};

/// dp(l) == dp  <=>  D_t(l) is square.
std::vector<EquimobilityEntry> validate_equimobility(const PkmModel& m);

}  // namespace pkmdyn
