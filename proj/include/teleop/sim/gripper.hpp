#pragma once

// Gripper channel. The leader device reads the operator's grip position delta
// and renders the force reference sigma_hat; the follower gripper takes the
// position reference delta_hat and reports the grasp force sigma.

#include <algorithm>
#include <cmath>

#include "teleop/errors.hpp"

namespace teleop {

struct GripperParams {
    double open_width = 0.08;    // m
    double object_width = 0.04;  // m, rigid object between the jaws; <= 0 for none
    double k_grip = 500.0;       // N/m, position-servo stiffness
    double tau = 0.05;           // s, jaw time constant

    void validate() const {
        if (!(open_width > 0.0)) throw BadParams("gripper open width must be positive");
        if (!(object_width < open_width)) throw BadParams("object must fit in the open gripper");
        if (!(k_grip > 0.0) || !(tau > 0.0)) throw BadParams("gripper servo parameters must be positive");
    }
};

struct GripperChannel {
    // leader side
    double delta = 0.08;      // operator grip position (read)
    double sigma_hat = 0.0;   // force reference rendered to the operator (written)
    // follower side
    double delta_hat = 0.08;  // jaw position reference (written)
    double jaw = 0.08;        // measured jaw opening
    double sigma = 0.0;       // measured grasp force (read)
    bool in_contact = false;
};

/// Advance the follower jaw one step toward delta_hat. The jaw stops on the
/// object; the servo then squeezes with k_grip times the remaining error.
inline void gripper_step(GripperChannel& ch, const GripperParams& p, double dt) {
    const double target = std::clamp(ch.delta_hat, 0.0, p.open_width);
    ch.jaw += (1.0 - std::exp(-dt / p.tau)) * (target - ch.jaw);
    ch.in_contact = false;
    if (p.object_width > 0.0 && ch.jaw <= p.object_width) {
        ch.jaw = p.object_width;
        ch.in_contact = true;
    }
    ch.sigma = ch.in_contact ? p.k_grip * std::max(0.0, p.object_width - target) : 0.0;
}

}  // namespace teleop
