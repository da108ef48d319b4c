#pragma once

#include <stdexcept>
#include <string>

namespace pkmdyn {

/// Model file schema or invariant violation.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// J_t (or J_IK) lost rank at the current configuration.
struct SingularityError : std::runtime_error {
    SingularityError(const std::string& what, int limb_index = -1)
        : std::runtime_error(what), limb(limb_index) {}
    int limb;
};

/// Newton-Raphson IK failed (divergence, iteration cap, singular Jacobian).
struct IkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// PKM state whose limb poses do not close the loops.
struct LoopClosureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pkmdyn
