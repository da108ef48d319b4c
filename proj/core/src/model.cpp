#include "pkmdyn/model.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pkmdyn/errors.hpp"

namespace pkmdyn {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ModelError(msg); }

std::string at_limb(int l) { return "limb " + std::to_string(l) + ": "; }

MatX parse_matrix(const json& j, int rows, int cols, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows) {
        fail(what + ": expected " + std::to_string(rows) + " rows");
    }
    MatX m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            fail(what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) +
                 " entries");
        }
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number()) fail(what + ": non-numeric entry");
            m(r, c) = row[c].get<double>();
        }
    }
    return m;
}

VecX parse_vector(const json& j, int n, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        fail(what + ": expected length " + std::to_string(n));
    }
    VecX v(n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_number()) fail(what + ": non-numeric entry");
        v(i) = j[i].get<double>();
    }
    return v;
}

const json& field(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) fail(ctx + "missing field '" + key + "'");
    return *it;
}

void check_selection_rows(const MatX& P, const std::string& what) {
    for (int r = 0; r < P.rows(); ++r) {
        int ones = 0;
        for (int c = 0; c < P.cols(); ++c) {
            const double v = P(r, c);
            if (v == 1.0) {
                ++ones;
            } else if (v != 0.0) {
                fail(what + ": entries must be 0 or 1");
            }
        }
        if (ones != 1) fail(what + ": each row must select exactly one component");
    }
    for (int r = 0; r < P.rows(); ++r) {
        for (int r2 = r + 1; r2 < P.rows(); ++r2) {
            if ((P.row(r) - P.row(r2)).norm() == 0.0) fail(what + ": duplicate selection row");
        }
    }
}

void validate_limb(const LimbModel& limb, int l, int dp) {
    const int N = limb.joint_count();
    if (N == 0) fail(at_limb(l) + "no joints");
    for (int i = 0; i < N; ++i) {
        if (!is_valid_screw(limb.joints[i].screw)) {
            fail(at_limb(l) + "joint " + std::to_string(i) +
                 ": screw is neither unit rotational nor unit prismatic");
        }
        const double oerr = limb.joints[i].ref_config.orthonormality_error();
        if (oerr > 1e-12 || limb.joints[i].ref_config.rotation.determinant() < 0.0) {
            fail(at_limb(l) + "joint " + std::to_string(i) + ": ref_config rotation not in SO(3)");
        }
    }
    for (size_t b = 0; b < limb.bodies.size(); ++b) {
        const Mat6& M = limb.bodies[b].mass_matrix;
        if ((M - M.transpose()).norm() > 1e-10) {
            fail(at_limb(l) + "body " + std::to_string(b) + ": mass_matrix not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Mat6> es(M);
        if (es.eigenvalues().minCoeff() < -1e-10) {
            fail(at_limb(l) + "body " + std::to_string(b) + ": mass_matrix not positive semidefinite");
        }
    }
    // non-redundancy: dp(l) = N_l
    if (limb.task_dof() != N) {
        fail(at_limb(l) + "non-redundancy violated: P_t has " + std::to_string(limb.task_dof()) +
             " rows but the limb has " + std::to_string(N) + " joints");
    }
    if (limb.P_t.cols() != 6) fail(at_limb(l) + "P_t must have 6 columns");
    check_selection_rows(limb.P_t, at_limb(l) + "P_t");
    if (limb.D_t.rows() != limb.task_dof() || limb.D_t.cols() != dp) {
        fail(at_limb(l) + "D_t must be dp(l) x dp");
    }
    if (Eigen::FullPivLU<MatX>(limb.D_t).rank() != dp) {
        fail(at_limb(l) + "D_t does not have full column rank");
    }
    // cut rows must be the trailing joints (platform side) so the tree is a prefix chain
    const int n_cut = static_cast<int>(limb.cut_joint_rows.size());
    for (int k = 0; k < n_cut; ++k) {
        const int expect = N - n_cut + k;
        if (limb.cut_joint_rows[k] != expect) {
            fail(at_limb(l) + "cut_joint_rows must be the trailing joint indices of the limb");
        }
    }
    if (limb.tree_joint_count() != N - n_cut) {
        fail(at_limb(l) + "bodies must list exactly the " + std::to_string(N - n_cut) +
             " tree bodies");
    }
    if (limb.actuated_joint < 0 || limb.actuated_joint >= N) {
        fail(at_limb(l) + "actuated_joint out of range");
    }
    for (int c : limb.cut_joint_rows) {
        if (c == limb.actuated_joint) fail(at_limb(l) + "actuated joint cannot be a cut joint");
    }
}

}  // namespace

PkmModel load_model(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }

    PkmModel m;
    m.dof = field(j, "dof", "").get<int>();
    if (m.dof < 1 || m.dof > 6) fail("dof must be in 1..6");
    const Vec3 g = parse_vector(field(j, "gravity", ""), 3, "gravity");
    m.gravity = g;
    m.P_p = parse_matrix(field(j, "P_p", ""), 6, m.dof, "P_p");
    check_selection_rows(m.P_p.transpose(), "P_p (columns)");

    const auto& sea = field(j, "sea", "");
    const auto& limbs = field(j, "limbs", "");
    if (!limbs.is_array() || limbs.empty()) fail("limbs must be a non-empty array");
    const int L = static_cast<int>(limbs.size());

    m.sea.stiffness = parse_vector(field(sea, "stiffness", "sea: "), L, "sea.stiffness");
    m.sea.motor_inertia = parse_vector(field(sea, "motor_inertia", "sea: "), L, "sea.motor_inertia");
    if (m.sea.stiffness.minCoeff() <= 0.0) fail("sea.stiffness entries must be > 0");
    if (m.sea.motor_inertia.minCoeff() < 0.0) fail("sea.motor_inertia entries must be >= 0");

    for (int l = 0; l < L; ++l) {
        const auto& lj = limbs[l];
        LimbModel limb;
        const auto& joints = field(lj, "joints", at_limb(l));
        if (!joints.is_array() || joints.empty()) fail(at_limb(l) + "joints must be non-empty");
        for (size_t i = 0; i < joints.size(); ++i) {
            const auto& jj = joints[i];
            JointSpec js;
            js.screw = parse_vector(field(jj, "screw", at_limb(l)), 6, at_limb(l) + "screw");
            const auto& rc = field(jj, "ref_config", at_limb(l));
            js.ref_config.rotation =
                parse_matrix(field(rc, "rotation", at_limb(l)), 3, 3, at_limb(l) + "rotation");
            js.ref_config.translation =
                parse_vector(field(rc, "translation", at_limb(l)), 3, at_limb(l) + "translation");
            limb.joints.push_back(js);
        }
        const auto& bodies = field(lj, "bodies", at_limb(l));
        if (!bodies.is_array()) fail(at_limb(l) + "bodies must be an array");
        for (size_t b = 0; b < bodies.size(); ++b) {
            BodySpec bs;
            bs.mass_matrix = parse_matrix(field(bodies[b], "mass_matrix", at_limb(l)), 6, 6,
                                          at_limb(l) + "mass_matrix");
            limb.bodies.push_back(bs);
        }
        const int N = limb.joint_count();
        limb.P_t = parse_matrix(field(lj, "P_t", at_limb(l)), N, 6, at_limb(l) + "P_t");
        limb.D_t = parse_matrix(field(lj, "D_t", at_limb(l)), N, m.dof, at_limb(l) + "D_t");
        const auto& cut = field(lj, "cut_joint_rows", at_limb(l));
        if (!cut.is_array()) fail(at_limb(l) + "cut_joint_rows must be an array");
        for (const auto& c : cut) limb.cut_joint_rows.push_back(c.get<int>());
        limb.actuated_joint = field(lj, "actuated_joint", at_limb(l)).get<int>();
        validate_limb(limb, l, m.dof);
        m.limbs.push_back(std::move(limb));
    }
    // the last limb carries the platform: it has no cut joints
    if (!m.limbs.back().cut_joint_rows.empty()) {
        fail("last limb must not have cut joints (it carries the platform)");
    }
    return m;
}

PkmModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

namespace {

json dump_matrix(const MatX& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json dump_vector(const VecX& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

}  // namespace

std::string serialize(const PkmModel& m) {
    json j;
    j["dof"] = m.dof;
    j["gravity"] = dump_vector(m.gravity);
    j["P_p"] = dump_matrix(m.P_p);
    j["sea"] = {{"stiffness", dump_vector(m.sea.stiffness)},
                {"motor_inertia", dump_vector(m.sea.motor_inertia)}};
    json limbs = json::array();
    for (const auto& limb : m.limbs) {
        json lj;
        json joints = json::array();
        for (const auto& js : limb.joints) {
            joints.push_back({{"screw", dump_vector(js.screw)},
                              {"ref_config",
                               {{"rotation", dump_matrix(js.ref_config.rotation)},
                                {"translation", dump_vector(js.ref_config.translation)}}}});
        }
        lj["joints"] = joints;
        json bodies = json::array();
        for (const auto& b : limb.bodies) bodies.push_back({{"mass_matrix", dump_matrix(b.mass_matrix)}});
        lj["bodies"] = bodies;
        lj["P_t"] = dump_matrix(limb.P_t);
        lj["D_t"] = dump_matrix(limb.D_t);
        lj["cut_joint_rows"] = limb.cut_joint_rows;
        lj["actuated_joint"] = limb.actuated_joint;
        limbs.push_back(lj);
    }
    j["limbs"] = limbs;
    return j.dump(1);
}

std::vector<EquimobilityEntry> validate_equimobility(const PkmModel& m) {
    std::vector<EquimobilityEntry> out;
    for (int l = 0; l < m.limb_count(); ++l) {
        const int dpl = m.limbs[l].task_dof();
        out.push_back({l, dpl, dpl == m.dof});
    }
    return out;
}

}  // namespace pkmdyn
