#include "liesys/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "liesys/error.hpp"

namespace liesys {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
    throw Error(kind, "invariants", op, msg);
}

// Antiderivative of the x-side integrand -f(1/z)/z^3 at z, applying
//   f = c:        c / (2 z^2)
//   f = c z^-p:   integrand -c z^(-3-p); antiderivative c z^(-2-p)/(2+p),
//                 or -c ln z when p = -2.
double f_antiderivative(const Coupling& f, double z) {
    if (const auto* cv = std::get_if<ConstantValue>(&f.kind()))
        return cv->c / (2.0 * z * z);
    const auto& pl = std::get<PowerLaw>(f.kind());
    if (pl.c == 0.0) return 0.0;
    if (pl.p == -2.0) return -pl.c * std::log(z);
    return pl.c * std::pow(z, -(pl.p + 2.0)) / (pl.p + 2.0);
}

// Antiderivative of the y-side integrand z g(1/z):
//   g = c:        c z^2 / 2
//   g = c z^-p:   integrand c z^(1-p); antiderivative c z^(2-p)/(2-p),
//                 or c ln z when p = 2.
double g_antiderivative(const Coupling& g, double z) {
    if (const auto* cv = std::get_if<ConstantValue>(&g.kind()))
        return cv->c * z * z / 2.0;
    const auto& pl = std::get<PowerLaw>(g.kind());
    if (pl.c == 0.0) return 0.0;
    if (pl.p == 2.0) return pl.c * std::log(z);
    return pl.c * std::pow(z, 2.0 - pl.p) / (2.0 - pl.p);
}

}  // namespace

double wronskian(double y, double v_y, double z, double v_z) { return y * v_z - z * v_y; }

double oscillator_pair_integral(double x1, double v1, double x2, double v2) {
    return x1 * v2 - x2 * v1;
}

double ermakov_lewis(double x, double v_x, double y, double v_y) {
    if (!(y > 0.0))
        fail(ErrorKind::Domain, "ermakov_lewis", "Pinney variable y must be > 0");
    const double ratio = x / y;
    const double xi = x * v_y - y * v_x;
    return ratio * ratio + xi * xi;
}

double pinney_pair_invariant(double x_p, double v_p, double x_o, double v_o, double k) {
    if (!(x_p > 0.0))
        fail(ErrorKind::Domain, "pinney_pair_invariant", "Pinney variable x_p must be > 0");
    const double cross = x_o * v_p - x_p * v_o;
    const double ratio = x_o / x_p;
    return 0.5 * (cross * cross + k * ratio * ratio);
}

double riccati_pinney_constant(double w, double w_partner, double x, double v, double k) {
    if (!(x > 0.0))
        fail(ErrorKind::Domain, "riccati_pinney_constant", "Pinney variable x must be > 0");
    if (w_partner == w)
        fail(ErrorKind::SingularConfiguration, "riccati_pinney_constant",
             "the two Riccati solutions coincide (w_partner == w)");
    const double x2 = x * x;
    const double slope = w - v / x;
    return slope * x2 + (k + slope * slope * x2 * x2) / ((w_partner - w) * x2);
}

double generalized_ermakov_invariant(double x, double v_x, double y, double v_y,
                                     const Coupling& f, const Coupling& g) {
    if (!(x > 0.0) || !(y > 0.0))
        fail(ErrorKind::Domain, "generalized_ermakov_invariant", "requires x > 0 and y > 0");
    const double xi = x * v_y - y * v_x;
    const double r = x / y;
    // The path [1, r] stays inside (0, inf), so the power-law antiderivatives
    // are valid everywhere on it.
    const double quad = (f_antiderivative(f, r) - f_antiderivative(f, 1.0)) +
                        (g_antiderivative(g, r) - g_antiderivative(g, 1.0));
    return 0.5 * xi * xi + quad;
}

std::size_t invariant_arity(InvariantKind kind) {
    (void)kind;
    return 4;  // every invariant reads four components
}

double evaluate_invariant(const InvariantBinding& binding, std::span<const double> state) {
    const auto& a = binding.args;
    if (a.size() != invariant_arity(binding.kind))
        fail(ErrorKind::Config, "invariant_drift",
             "invariant '" + binding.name + "' needs " +
                 std::to_string(invariant_arity(binding.kind)) + " wired components, got " +
                 std::to_string(a.size()));
    for (std::size_t idx : a)
        if (idx >= state.size())
            fail(ErrorKind::Config, "invariant_drift",
                 "invariant '" + binding.name + "' wires component " + std::to_string(idx) +
                     " but the state has dimension " + std::to_string(state.size()));
    const double s0 = state[a[0]], s1 = state[a[1]], s2 = state[a[2]], s3 = state[a[3]];
    switch (binding.kind) {
        case InvariantKind::Wronskian: return wronskian(s0, s1, s2, s3);
        case InvariantKind::OscillatorPair: return oscillator_pair_integral(s0, s1, s2, s3);
        case InvariantKind::ErmakovLewis: return ermakov_lewis(s0, s1, s2, s3);
        case InvariantKind::PinneyPair: return pinney_pair_invariant(s0, s1, s2, s3, binding.k);
        case InvariantKind::RiccatiPinney:
            return riccati_pinney_constant(s0, s1, s2, s3, binding.k);
        case InvariantKind::GeneralizedErmakov:
            if (!binding.f || !binding.g)
                fail(ErrorKind::Config, "invariant_drift",
                     "invariant '" + binding.name + "' needs couplings f and g");
            return generalized_ermakov_invariant(s0, s1, s2, s3, *binding.f, *binding.g);
    }
    fail(ErrorKind::Config, "invariant_drift", "unknown invariant kind");
}

InvariantReport invariant_drift(const Trajectory& traj, const InvariantBinding& binding) {
    InvariantReport report;
    report.name = binding.name;
    report.times = traj.times();
    report.values.reserve(traj.states().size());
    for (const auto& state : traj.states())
        report.values.push_back(evaluate_invariant(binding, state));
    report.reference = report.values.front();
    report.max_abs_drift = 0.0;
    for (double v : report.values)
        report.max_abs_drift = std::max(report.max_abs_drift, std::abs(v - report.reference));
    report.max_rel_drift = report.max_abs_drift / std::max(1.0, std::abs(report.reference));
    return report;
}

void InvariantReport::write_csv(std::ostream& out) const {
    out << "t,value\n";
    char buf[40];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", times[i]);
        out << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out << "," << buf << "\n";
    }
}

}  // namespace liesys
