#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liesys/integrator.hpp"
#include "liesys/systems.hpp"

namespace liesys {

// First integrals. Argument roles are spelled out per signature because the
// coupled systems reuse the same letters for different slots.

/// W = y v_z - z v_y for two oscillator solutions (y, v_y), (z, v_z).
double wronskian(double y, double v_y, double z, double v_z);

/// Angular momentum F = x1 v2 - x2 v1 of two oscillator copies.
double oscillator_pair_integral(double x1, double v1, double x2, double v2);

/// Ermakov-Lewis invariant psi = (x/y)^2 + (x v_y - y v_x)^2 with x the
/// oscillator variable and y > 0 the Pinney (k=1) variable.
double ermakov_lewis(double x, double v_x, double y, double v_y);

/// Ermakov invariant of a Pinney/oscillator pair:
///   I = ((x_o v_p - x_p v_o)^2 + k (x_o/x_p)^2) / 2,  x_p > 0 the Pinney slot.
double pinney_pair_invariant(double x_p, double v_p, double x_o, double v_o, double k);

/// First integral coupling one Riccati solution w (and a partner Riccati
/// solution) to a Pinney solution (x, v):
///   C = (w - v/x) x^2 + (k + (w - v/x)^2 x^4) / ((w_partner - w) x^2).
/// With (w, w_partner) = (x2, x1) this is C1; with (x3, x1) it is C2.
/// The derivation goes through I1 = x1-x2, I2 = x2-v/x, I3 = x, I4 = v and
/// K1 = I1/I2, K2 = I2*I3^2, giving C = K2 + (k + K2^2)/(K1 K2); only the
/// final form above is exposed.
double riccati_pinney_constant(double w, double w_partner, double x, double v, double k);

/// Quadrature first integral of the generalized Ermakov system:
///   C = xi^2/2 + Q(x/y),  xi = x v_y - y v_x,
/// where Q(r) integrates -f(1/z)/z^3 + z g(1/z) from z = 1 to r in closed
/// form for the coupling family. The base point 1 is a fixed convention; any
/// other base shifts C by a constant.
double generalized_ermakov_invariant(double x, double v_x, double y, double v_y,
                                     const Coupling& f, const Coupling& g);

enum class InvariantKind {
    Wronskian,
    OscillatorPair,
    ErmakovLewis,
    PinneyPair,
    RiccatiPinney,
    GeneralizedErmakov,
};

/// Wires trajectory components to an invariant's arguments: args lists the
/// component indices in the signature order of the functions above.
struct InvariantBinding {
    std::string name;
    InvariantKind kind;
    std::vector<std::size_t> args;
    double k = 1.0;
    std::optional<Coupling> f, g;
};

std::size_t invariant_arity(InvariantKind kind);
double evaluate_invariant(const InvariantBinding& binding, std::span<const double> state);

struct InvariantReport {
    std::string name;
    std::vector<double> times;
    std::vector<double> values;
    double reference;      // value at the first node
    double max_abs_drift;  // max_i |values[i] - reference|
    double max_rel_drift;  // max_abs_drift / max(1, |reference|)

    void write_csv(std::ostream& out) const;  // header `t,value`
};

/// Evaluates the invariant at every grid node of the trajectory.
InvariantReport invariant_drift(const Trajectory& traj, const InvariantBinding& binding);

}  // namespace liesys
