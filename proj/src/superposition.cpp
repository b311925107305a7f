#include "liesys/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liesys/error.hpp"
#include "liesys/invariants.hpp"

namespace liesys {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
    throw Error(kind, "superposition", op, msg);
}

double branch_sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

}  // namespace

std::string rule_kind_name(RuleKind rule) {
    switch (rule) {
        case RuleKind::Linear: return "linear";
        case RuleKind::PinneyOsc: return "pinney-osc";
        case RuleKind::PinneyRiccati: return "pinney-riccati";
    }
    return "unknown";
}

OscState oscillator_superpose(double x1, double v1, double x2, double v2,
                              const LinearConstants& consts) {
    const double k = x1 * v2 - x2 * v1;
    if (k == 0.0)
        fail(ErrorKind::SingularConfiguration, "oscillator_superpose",
             "base solutions are dependent (x1 v2 - x2 v1 = 0)");
    const double c1 = consts.k1 / k;
    const double c2 = consts.k2 / k;
    return OscState{c1 * x1 + c2 * x2, c1 * v1 + c2 * v2};
}

double pinney_superpose(double y, double z, const PinneyOscConstants& consts, double k) {
    if (consts.W == 0.0)
        fail(ErrorKind::SingularConfiguration, "pinney_superpose",
             "Wronskian of the base solutions vanishes");
    double disc = 4.0 * (consts.I1 * consts.I2) - k * consts.W * consts.W;
    if (disc < 0.0) {
        // Tolerate roundoff-scale negativity from constants extracted along
        // numerical solutions; anything larger is genuinely unreal.
        const double scale = std::max({1.0, 4.0 * std::abs(consts.I1 * consts.I2),
                                       std::abs(k) * consts.W * consts.W});
        if (disc < -1e-12 * scale)
            fail(ErrorKind::Realness, "pinney_superpose",
                 "4 I1 I2 - k W^2 = " + std::to_string(disc) + " < 0");
        disc = 0.0;
    }
    double inner = consts.I2 * (y * y) + consts.I1 * (z * z) +
                   branch_sign(consts.branch) * std::sqrt(disc) * (y * z);
    if (inner < 0.0) {
        const double scale = std::max({1.0, std::abs(consts.I2 * y * y),
                                       std::abs(consts.I1 * z * z)});
        if (inner < -1e-12 * scale)
            fail(ErrorKind::BranchDomain, "pinney_superpose",
                 "inner expression " + std::to_string(inner) + " < 0 for this branch");
        inner = 0.0;
    }
    return std::sqrt(2.0) / std::abs(consts.W) * std::sqrt(inner);
}

double pinney_from_riccati(double x1, double x2, double x3, const PinneyRiccatiConstants& consts,
                           double k) {
    if (x1 == x2 || x2 == x3 || x1 == x3)
        fail(ErrorKind::SingularConfiguration, "pinney_from_riccati",
             "Riccati solutions must be pairwise distinct");
    if (consts.C1 == consts.C2)
        fail(ErrorKind::SingularConfiguration, "pinney_from_riccati", "requires C1 != C2");
    const double num_lin = consts.C1 * (x1 - x2) - consts.C2 * (x1 - x3);
    const double num = num_lin * num_lin + k * (x2 - x3) * (x2 - x3);
    const double den = (consts.C2 - consts.C1) * (x2 - x3) * (x2 - x1) * (x1 - x3);
    const double ratio = num / den;
    if (!(ratio > 0.0))
        fail(ErrorKind::Realness, "pinney_from_riccati",
             "radicand " + std::to_string(ratio) + " is not positive");
    return std::sqrt(ratio);
}

// --- Partial superposition -----------------------------------------------

PartialSuperposition::PartialSuperposition(Trajectory osc_traj, double k, double k_prime,
                                           double t0, double quad_tol)
    : traj_(std::move(osc_traj)), k_(k), k_prime_(k_prime), t0_(t0), quad_tol_(quad_tol) {
    if (traj_.spec().dimension() != 2)
        fail(ErrorKind::Config, "partial_superpose",
             "expected a single-oscillator trajectory (dimension 2)");
    const double lo = std::min(traj_.t_front(), traj_.t_back());
    const double hi = std::max(traj_.t_front(), traj_.t_back());
    if (!(t0 >= lo && t0 <= hi))
        fail(ErrorKind::Domain, "partial_superpose", "t0 outside the trajectory range");

    // Locate zeros of x1 on nodes and step midpoints; a nontrivial oscillator
    // solution crosses transversally, so sign changes catch them all.
    const auto& times = traj_.times();
    auto x_at = [this](double t) { return traj_.sample(t)[0]; };
    std::vector<double> probes;
    for (std::size_t i = 0; i < times.size(); ++i) {
        probes.push_back(times[i]);
        if (i + 1 < times.size()) probes.push_back(0.5 * (times[i] + times[i + 1]));
    }
    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
        double a = probes[i], b = probes[i + 1];
        double fa = x_at(a), fb = x_at(b);
        if (fa == 0.0) {
            zero_crossings_.push_back(a);
            continue;
        }
        if (fa * fb < 0.0) {
            for (int it = 0; it < 80 && std::abs(b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = x_at(m);
                if (fm == 0.0) { a = b = m; break; }
                if (fa * fm < 0.0) { b = m; fb = fm; } else { a = m; fa = fm; }
            }
            zero_crossings_.push_back(0.5 * (a + b));
        }
    }
    if (x_at(probes.back()) == 0.0) zero_crossings_.push_back(probes.back());
    std::sort(zero_crossings_.begin(), zero_crossings_.end());
}

double PartialSuperposition::x1_at(double t) const { return traj_.sample(t)[0]; }

void PartialSuperposition::check_pole_free(double t) const {
    const double lo = std::min(t, t0_), hi = std::max(t, t0_);
    for (double z : zero_crossings_)
        if (z >= lo && z <= hi)
            fail(ErrorKind::Pole, "partial_superpose",
                 "x1 crosses zero at t = " + std::to_string(z) +
                     " inside the quadrature interval");
}

double PartialSuperposition::operator()(double t) const {
    const double lo = std::min(traj_.t_front(), traj_.t_back());
    const double hi = std::max(traj_.t_front(), traj_.t_back());
    if (!(t >= lo && t <= hi))
        fail(ErrorKind::Domain, "partial_superpose", "t outside the trajectory range");
    const double x1t = x1_at(t);
    if (k_ == 0.0) return k_prime_ * x1t;
    check_pole_free(t);

    // Adaptive Simpson on 1/x1^2 over [t0, t].
    auto integrand = [this](double s) {
        const double x = x1_at(s);
        return 1.0 / (x * x);
    };
    struct Quad {
        const decltype(integrand)& f;
        double tol;
        int depth_limit = 48;
        double simpson(double a, double fa, double m, double fm, double b, double fb) const {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        double recurse(double a, double fa, double m, double fm, double b, double fb, double whole,
                       double tol_here, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = simpson(a, fa, lm, flm, m, fm);
            const double right = simpson(m, fm, rm, frm, b, fb);
            if (depth >= depth_limit || std::abs(left + right - whole) <= 15.0 * tol_here)
                return left + right + (left + right - whole) / 15.0;
            return recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol_here, depth + 1) +
                   recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol_here, depth + 1);
        }
    };
    double a = t0_, b = t;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    double integral = 0.0;
    if (a != b) {
        const double fa = integrand(a), fb = integrand(b);
        const double m = 0.5 * (a + b);
        const double fm = integrand(m);
        Quad quad{integrand, quad_tol_};
        integral = sign * quad.recurse(a, fa, m, fm, b, fb, quad.simpson(a, fa, m, fm, b, fb),
                                       quad_tol_, 0);
    }
    return k_prime_ * x1t + k_ * x1t * integral;
}

PartialSuperposition partial_superpose(const Trajectory& osc_traj, double k, double k_prime,
                                       double t0) {
    return PartialSuperposition(osc_traj, k, k_prime, t0);
}

// --- Constants extraction --------------------------------------------------

SuperpositionConstants constants_from_state(RuleKind rule,
                                            std::span<const std::vector<double>> base_states,
                                            std::span<const double> target_state, double k) {
    switch (rule) {
        case RuleKind::Linear: {
            if (base_states.size() != 2 || base_states[0].size() != 2 ||
                base_states[1].size() != 2 || target_state.size() != 2)
                fail(ErrorKind::Config, "constants_from_state",
                     "linear rule needs two oscillator base states and an (x, v) target");
            const double x1 = base_states[0][0], v1 = base_states[0][1];
            const double x2 = base_states[1][0], v2 = base_states[1][1];
            const double x = target_state[0], v = target_state[1];
            if (x1 * v2 - x2 * v1 == 0.0)
                fail(ErrorKind::SingularConfiguration, "constants_from_state",
                     "base oscillator solutions are dependent");
            return LinearConstants{x * v2 - x2 * v, x1 * v - v1 * x};
        }
        case RuleKind::PinneyOsc: {
            if (base_states.size() != 2 || base_states[0].size() != 2 ||
                base_states[1].size() != 2 || target_state.size() != 2)
                fail(ErrorKind::Config, "constants_from_state",
                     "Pinney rule needs two oscillator base states and an (x, v) target");
            const double y = base_states[0][0], v_y = base_states[0][1];
            const double z = base_states[1][0], v_z = base_states[1][1];
            const double x = target_state[0], v = target_state[1];
            const double W = wronskian(y, v_y, z, v_z);
            if (W == 0.0)
                fail(ErrorKind::SingularConfiguration, "constants_from_state",
                     "base oscillator solutions are dependent (W = 0)");
            const double I1 = pinney_pair_invariant(x, v, y, v_y, k);
            const double I2 = pinney_pair_invariant(x, v, z, v_z, k);
            PinneyOscConstants consts{I1, I2, W, Branch::Plus};
            const double tol = 1e-9 * std::max(1.0, std::abs(x));
            if (std::abs(pinney_superpose(y, z, consts, k) - x) <= tol) return consts;
            consts.branch = Branch::Minus;
            if (std::abs(pinney_superpose(y, z, consts, k) - x) <= tol) return consts;
            fail(ErrorKind::Inversion, "constants_from_state",
                 "neither branch reproduces the target Pinney value within 1e-9");
        }
        case RuleKind::PinneyRiccati: {
            if (base_states.size() != 3 || base_states[0].size() != 1 ||
                base_states[1].size() != 1 || base_states[2].size() != 1 ||
                target_state.size() != 2)
                fail(ErrorKind::Config, "constants_from_state",
                     "three-Riccati rule needs three scalar base states and an (x, v) target");
            const double x1 = base_states[0][0];
            const double x2 = base_states[1][0];
            const double x3 = base_states[2][0];
            const double x = target_state[0], v = target_state[1];
            if (x1 == x2 || x2 == x3 || x1 == x3)
                fail(ErrorKind::SingularConfiguration, "constants_from_state",
                     "Riccati base values must be pairwise distinct");
            const double C1 = riccati_pinney_constant(x2, x1, x, v, k);
            const double C2 = riccati_pinney_constant(x3, x1, x, v, k);
            if (C1 == C2)
                fail(ErrorKind::SingularConfiguration, "constants_from_state",
                     "extracted constants coincide (C1 = C2)");
            return PinneyRiccatiConstants{C1, C2};
        }
    }
    fail(ErrorKind::Config, "constants_from_state", "unknown rule kind");
}

// --- End-to-end verification ------------------------------------------------

VerificationReport verify_superposition(RuleKind rule, const OmegaProfile& omega,
                                        std::span<const std::vector<double>> base_initial,
                                        std::span<const double> target_initial, double k,
                                        double t0, double t1, Tolerances tol,
                                        const VerifyOptions& options) {
    const std::size_t n_bases = rule == RuleKind::PinneyRiccati ? 3 : 2;
    if (base_initial.size() != n_bases)
        fail(ErrorKind::Config, "verify_superposition",
             rule_kind_name(rule) + " rule needs " + std::to_string(n_bases) +
                 " base solutions, got " + std::to_string(base_initial.size()));

    const SystemSpec::Kind base_kind =
        rule == RuleKind::PinneyRiccati ? SystemSpec::Kind{Riccati{}} : SystemSpec::Kind{Oscillator{}};
    const SystemSpec::Kind target_kind = rule == RuleKind::Linear
                                             ? SystemSpec::Kind{Oscillator{}}
                                             : SystemSpec::Kind{MilnePinney{k}};
    const SystemSpec base_spec(base_kind, omega);
    const SystemSpec target_spec(target_kind, omega);

    std::vector<Trajectory> bases;
    bases.reserve(n_bases);
    for (const auto& init : base_initial)
        bases.push_back(integrate(base_spec, init, t0, t1, tol.rel, tol.abs));
    const Trajectory target = integrate(target_spec, target_initial, t0, t1, tol.rel, tol.abs);

    // Shrink the window if any member stopped early; stay clear of poles.
    double t_end = t1;
    bool clipped = false;
    for (const auto& traj : bases)
        if (traj.terminated_early()) {
            t_end = std::min(t_end, traj.t_back());
            clipped = true;
        }
    if (target.terminated_early()) {
        t_end = std::min(t_end, target.t_back());
        clipped = true;
    }
    if (clipped) t_end = t0 + options.pole_clip_fraction * (t_end - t0);
    if (!(t_end > t0))
        fail(ErrorKind::VerificationWindow, "verify_superposition",
             "no usable comparison window remains after clipping");

    const SuperpositionConstants consts =
        constants_from_state(rule, base_initial, target_initial, k);

    VerificationReport report;
    report.rule = rule;
    report.constants = consts;
    report.t0 = t0;
    report.t1 = t_end;
    report.window_clipped = clipped;
    report.n_points = static_cast<int>(std::max<std::size_t>(options.n_points, 50));

    for (int i = 0; i < report.n_points; ++i) {
        const double t =
            t0 + (t_end - t0) * static_cast<double>(i) / static_cast<double>(report.n_points - 1);
        const auto ref = target.sample(t);
        double abs_err = 0.0, rel_err = 0.0;
        if (rule == RuleKind::Linear) {
            const auto b1 = bases[0].sample(t);
            const auto b2 = bases[1].sample(t);
            const OscState rec =
                oscillator_superpose(b1[0], b1[1], b2[0], b2[1], std::get<LinearConstants>(consts));
            abs_err = std::max(std::abs(rec.x - ref[0]), std::abs(rec.v - ref[1]));
            rel_err = std::max(std::abs(rec.x - ref[0]) / std::max(1.0, std::abs(ref[0])),
                               std::abs(rec.v - ref[1]) / std::max(1.0, std::abs(ref[1])));
        } else if (rule == RuleKind::PinneyOsc) {
            const auto b1 = bases[0].sample(t);
            const auto b2 = bases[1].sample(t);
            const double rec =
                pinney_superpose(b1[0], b2[0], std::get<PinneyOscConstants>(consts), k);
            abs_err = std::abs(rec - ref[0]);
            rel_err = abs_err / std::max(1.0, std::abs(ref[0]));
        } else {
            const double r1 = bases[0].sample(t)[0];
            const double r2 = bases[1].sample(t)[0];
            const double r3 = bases[2].sample(t)[0];
            const double rec =
                pinney_from_riccati(r1, r2, r3, std::get<PinneyRiccatiConstants>(consts), k);
            abs_err = std::abs(rec - ref[0]);
            rel_err = abs_err / std::max(1.0, std::abs(ref[0]));
        }
        report.max_abs_error = std::max(report.max_abs_error, abs_err);
        report.max_rel_error = std::max(report.max_rel_error, rel_err);
    }
    return report;
}

}  // namespace liesys
