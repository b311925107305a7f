#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "liesys/coefficients.hpp"
#include "liesys/integrator.hpp"

namespace liesys {

enum class RuleKind { Linear, PinneyOsc, PinneyRiccati };

std::string rule_kind_name(RuleKind rule);

struct LinearConstants {
    double k1, k2;
};

enum class Branch { Plus, Minus };

struct PinneyOscConstants {
    // W is fixed by the two oscillator base solutions; only (I1, I2) and the
    // branch sign are free data of the rule. Requires 4 I1 I2 - k W^2 >= 0.
    double I1, I2, W;
    Branch branch;
};

struct PinneyRiccatiConstants {
    double C1, C2;
};

using SuperpositionConstants =
    std::variant<LinearConstants, PinneyOscConstants, PinneyRiccatiConstants>;

struct OscState {
    double x, v;
};

/// Linear rule for two oscillator solutions: x = c1 x1 + c2 x2 (and likewise
/// v) with c1 = k1/k, c2 = k2/k, k = x1 v2 - x2 v1 != 0.
OscState oscillator_superpose(double x1, double v1, double x2, double v2,
                              const LinearConstants& consts);

/// Pinney solution from two oscillator solutions y, z:
///   x = (sqrt(2)/|W|) (I2 y^2 + I1 z^2 +- sqrt(4 I1 I2 - k W^2) y z)^{1/2}.
double pinney_superpose(double y, double z, const PinneyOscConstants& consts, double k);

/// Pinney solution from three Riccati solutions:
///   x = sqrt( ((C1(x1-x2) - C2(x1-x3))^2 + k (x2-x3)^2)
///             / ((C2-C1)(x2-x3)(x2-x1)(x1-x3)) ).
double pinney_from_riccati(double x1, double x2, double x3, const PinneyRiccatiConstants& consts,
                           double k);

/// Second oscillator solution by quadrature from a known one:
///   x2(t) = k' x1(t) + k x1(t) * integral_{t0}^{t} x1(s)^{-2} ds,
/// with x1 read from the trajectory's dense output. Evaluation past a zero of
/// x1 raises a pole error naming the crossing time.
class PartialSuperposition {
public:
    PartialSuperposition(Trajectory osc_traj, double k, double k_prime, double t0,
                         double quad_tol = 1e-12);
    double operator()(double t) const;

private:
    double x1_at(double t) const;
    void check_pole_free(double t) const;

    Trajectory traj_;
    double k_, k_prime_, t0_, quad_tol_;
    std::vector<double> zero_crossings_;  // detected zeros of x1, ordered in time
};

PartialSuperposition partial_superpose(const Trajectory& osc_traj, double k, double k_prime,
                                       double t0);

/// Inverse of the chosen rule: constants that make the superposition
/// reproduce the target state at the common time. Base states and the target
/// are all taken at the same instant. For PinneyOsc the +- branch is the one
/// matching the target x (fixed thereafter).
SuperpositionConstants constants_from_state(RuleKind rule,
                                            std::span<const std::vector<double>> base_states,
                                            std::span<const double> target_state, double k);

struct VerificationReport {
    RuleKind rule;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;  // pointwise |diff| / max(1, |reference|)
    int n_points = 0;
    SuperpositionConstants constants;
    double t0 = 0.0;
    double t1 = 0.0;  // effective end of the comparison window
    bool window_clipped = false;
};

struct VerifyOptions {
    std::size_t n_points = 200;       // >= 50 comparison points
    double pole_clip_fraction = 0.9;  // keep this fraction of the distance to a detected pole
};

/// End-to-end check: integrates the base solutions and the target directly,
/// extracts constants at t0, reconstructs the target along a common grid and
/// reports the worst pointwise discrepancy. If a member trajectory terminates
/// early the window shrinks and the report says so.
VerificationReport verify_superposition(RuleKind rule, const OmegaProfile& omega,
                                        std::span<const std::vector<double>> base_initial,
                                        std::span<const double> target_initial, double k,
                                        double t0, double t1, Tolerances tol,
                                        const VerifyOptions& options = {});

}  // namespace liesys
