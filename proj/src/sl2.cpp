#include "liesys/sl2.hpp"

#include <cmath>
#include <random>
#include <string>

#include "liesys/error.hpp"
#include "liesys/integrator.hpp"

namespace liesys::sl2 {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
    throw Error(kind, "sl2", op, msg);
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

constexpr double kRadicandSlack = 1e-12;

}  // namespace

GroupElement::GroupElement(double alpha_, double beta_, double gamma_, double delta_)
    : alpha(alpha_), beta(beta_), gamma(gamma_), delta(delta_) {
    if (std::abs(det() - 1.0) > 1e-12)
        fail(ErrorKind::Domain, "group_element",
             "matrix is not unimodular: det = " + std::to_string(det()));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
    return GroupElement(alpha * other.alpha + beta * other.gamma,
                        alpha * other.beta + beta * other.delta,
                        gamma * other.alpha + delta * other.gamma,
                        gamma * other.beta + delta * other.delta);
}

GroupElement exp_minus_a1(double s) { return GroupElement(1.0, 0.0, s, 1.0); }
GroupElement exp_minus_a2(double s) { return GroupElement(1.0, s, 0.0, 1.0); }
GroupElement exp_minus_a3(double s) {
    const double e = std::exp(0.5 * s);
    return GroupElement(e, 0.0, 0.0, 1.0 / e);
}

DecomposedElement decompose(const GroupElement& A) {
    if (!(A.delta > 0.0))
        fail(ErrorKind::DecompositionDomain, "decompose",
             "factorization requires delta > 0, got delta = " + std::to_string(A.delta));
    DecomposedElement d{A.gamma * A.delta, A.beta / A.delta, -2.0 * std::log(A.delta)};
    const GroupElement back = recompose(d);
    const double res = std::max(std::max(std::abs(back.alpha - A.alpha), std::abs(back.beta - A.beta)),
                                std::max(std::abs(back.gamma - A.gamma), std::abs(back.delta - A.delta)));
    if (res > 1e-12)
        fail(ErrorKind::NumericConsistency, "decompose",
             "recomposition residual " + std::to_string(res) + " exceeds 1e-12");
    return d;
}

GroupElement recompose(const DecomposedElement& d) {
    return exp_minus_a2(d.alpha2) * exp_minus_a1(d.alpha1) * exp_minus_a3(d.alpha3);
}

PhasePoint act(const GroupElement& A, double x, double v, double k) {
    if (!(x > 0.0)) fail(ErrorKind::Domain, "act", "requires x > 0");
    if (!(k > 0.0)) fail(ErrorKind::Domain, "act", "requires k > 0");
    if (A.delta == 0.0)
        fail(ErrorKind::FormulaDomain, "act", "closed-form action undefined for delta = 0");
    if (A.alpha == 1.0 && A.beta == 0.0 && A.gamma == 0.0 && A.delta == 1.0)
        return PhasePoint{x, v};  // identity acts exactly

    const double p = A.beta * v + A.alpha * x;   // (beta v + alpha x)
    const double q = A.delta * v + A.gamma * x;  // (delta v + gamma x)
    const double mix = p * q + k * A.delta * A.beta / (x * x);
    const double den = q * q + k * (A.delta / x) * (A.delta / x);
    const double xbar = std::sqrt((k + mix * mix) / den);

    double rad = q * q + (k * A.delta * A.delta / (x * x)) *
                             (1.0 - (x * x) / (A.delta * A.delta * xbar * xbar));
    if (rad < 0.0) {
        if (rad < -kRadicandSlack)
            fail(ErrorKind::NumericConsistency, "act",
                 "negative radicand " + std::to_string(rad) + " beyond the roundoff allowance");
        rad = 0.0;
    }
    const double kappa = sign_of((A.beta / A.delta) * (x * A.gamma + v * A.delta) *
                                     (x * A.gamma + v * A.delta) +
                                 k * A.delta * A.beta / (x * x) +
                                 (std::abs(x) / A.delta) * (v * A.delta + x * A.gamma));
    return PhasePoint{xbar, kappa * std::sqrt(rad)};
}

PhasePoint act_via_flows(const GroupElement& A, double x, double v, double k, double rel_tol,
                         double abs_tol) {
    if (!(x > 0.0)) fail(ErrorKind::Domain, "act_via_flows", "requires x > 0");
    if (!(k > 0.0)) fail(ErrorKind::Domain, "act_via_flows", "requires k > 0");
    const DecomposedElement d = decompose(A);

    // Scaling flow of L3, then shear flow of L1.
    const double scale = std::exp(0.5 * d.alpha3);
    const double x1 = scale * x;
    const double v1 = v / scale;
    const double x2 = x1;
    const double v2 = d.alpha1 * x1 + v1;

    if (d.alpha2 == 0.0) return PhasePoint{x2, v2};

    // The L2 flow is the k-barrier oscillator with omega = 0, integrated for
    // parameter time alpha2 (either sign).
    SystemSpec flow(SystemSpec::Kind{MilnePinney{k}}, OmegaProfile::constant(0.0));
    const double y0[2] = {x2, v2};
    Trajectory traj = integrate(flow, y0, 0.0, d.alpha2, rel_tol, abs_tol);
    if (traj.terminated_early())
        fail(ErrorKind::NumericConsistency, "act_via_flows",
             "L2 flow terminated early (" +
                 stop_reason_name(traj.terminated_early()->reason) + ")");
    const auto& yf = traj.states().back();
    return PhasePoint{yf[0], yf[1]};
}

namespace {

std::vector<double> bracket_at(const FundamentalTriple& fields, int a, int b,
                               std::span<const double> point, const BracketMode& mode) {
    const FundamentalField* f[3] = {&fields.x1, &fields.x2, &fields.x3};
    const FundamentalField& fa = *f[a - 1];
    const FundamentalField& fb = *f[b - 1];
    const std::size_t n = point.size();
    const auto va = fa.value(point);
    const auto vb = fb.value(point);

    // [X_a, X_b] = J_b X_a - J_a X_b
    if (std::holds_alternative<AnalyticJacobian>(mode)) {
        auto t1 = fb.jvp(point, va);
        auto t2 = fa.jvp(point, vb);
        for (std::size_t i = 0; i < n; ++i) t1[i] -= t2[i];
        return t1;
    }

    const double h = std::get<FiniteDifference>(mode).h;
    auto directional = [&](const FundamentalField& field, const std::vector<double>& dir) {
        double norm = 0.0;
        for (double d : dir) norm = std::max(norm, std::abs(d));
        std::vector<double> out(n, 0.0);
        if (norm == 0.0) return out;
        std::vector<double> plus(n), minus(n);
        for (std::size_t i = 0; i < n; ++i) {
            plus[i] = point[i] + h * dir[i] / norm;
            minus[i] = point[i] - h * dir[i] / norm;
        }
        const auto fp = field.value(plus);
        const auto fm = field.value(minus);
        for (std::size_t i = 0; i < n; ++i) out[i] = (fp[i] - fm[i]) / (2.0 * h) * norm;
        return out;
    };
    auto t1 = directional(fb, va);
    const auto t2 = directional(fa, vb);
    for (std::size_t i = 0; i < n; ++i) t1[i] -= t2[i];
    return t1;
}

}  // namespace

double bracket_residual(const FundamentalTriple& fields,
                        const std::vector<BracketRelation>& structure,
                        std::span<const std::vector<double>> points, const BracketMode& mode) {
    if (fields.x1.dimension() != fields.x2.dimension() ||
        fields.x1.dimension() != fields.x3.dimension())
        fail(ErrorKind::Config, "bracket_residual", "field dimensions disagree");
    if (const auto* fd = std::get_if<FiniteDifference>(&mode)) {
        if (!(fd->h >= 1e-8 && fd->h <= 1e-3))
            fail(ErrorKind::Config, "bracket_residual", "finite-difference h must lie in [1e-8, 1e-3]");
    }
    const std::size_t n = fields.x1.dimension();
    const FundamentalField* f[3] = {&fields.x1, &fields.x2, &fields.x3};

    double residual = 0.0;
    for (const auto& point : points) {
        if (point.size() != n)
            fail(ErrorKind::Config, "bracket_residual", "sample point has wrong dimension");
        std::vector<std::vector<double>> vals;
        vals.reserve(3);
        for (int g = 0; g < 3; ++g) vals.push_back(f[g]->value(point));
        for (const auto& rel : structure) {
            const auto lie = bracket_at(fields, rel.a, rel.b, point, mode);
            for (std::size_t i = 0; i < n; ++i) {
                double expected = 0.0;
                for (int g = 0; g < 3; ++g) expected += rel.coeffs[g] * vals[g][i];
                residual = std::max(residual, std::abs(lie[i] - expected));
            }
        }
    }
    return residual;
}

ActionCheckResult action_consistency(double k, int trials, std::uint64_t seed) {
    if (trials < 1) fail(ErrorKind::Config, "action_consistency", "trials must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> xs(0.3, 3.0);
    std::uniform_real_distribution<double> vs(-2.0, 2.0);

    auto random_element = [&] {
        return recompose(DecomposedElement{coeff(rng), coeff(rng), coeff(rng)});
    };

    SystemSpec mp(SystemSpec::Kind{MilnePinney{k}}, OmegaProfile::constant(0.0));
    auto triple = fundamental_fields(mp);
    const FundamentalField* gen[3] = {&triple.x1, &triple.x2, &triple.x3};

    double max_comp = 0.0, max_gen = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        GroupElement A = random_element();
        GroupElement B = random_element();
        GroupElement AB = A * B;
        while (!(AB.delta > 0.0)) {
            A = random_element();
            B = random_element();
            AB = A * B;
        }
        const double x = xs(rng);
        const double v = vs(rng);

        const PhasePoint inner = act(B, x, v, k);
        const PhasePoint lhs = act(AB, x, v, k);
        const PhasePoint rhs = act(A, inner.x, inner.v, k);
        max_comp = std::max({max_comp, std::abs(lhs.x - rhs.x), std::abs(lhs.v - rhs.v)});

        // d/ds act(exp(-s a_j), p)|_0 should reproduce the fundamental field.
        const int j = trial % 3;
        const double h = 1e-6;
        GroupElement plus = j == 0 ? exp_minus_a1(h) : (j == 1 ? exp_minus_a2(h) : exp_minus_a3(h));
        GroupElement minus =
            j == 0 ? exp_minus_a1(-h) : (j == 1 ? exp_minus_a2(-h) : exp_minus_a3(-h));
        const PhasePoint pp = act(plus, x, v, k);
        const PhasePoint pm = act(minus, x, v, k);
        const double state[2] = {x, v};
        const auto field = gen[j]->value(state);
        max_gen = std::max({max_gen, std::abs((pp.x - pm.x) / (2.0 * h) - field[0]),
                            std::abs((pp.v - pm.v) / (2.0 * h) - field[1])});
    }
    return ActionCheckResult{max_comp, max_gen};
}

}  // namespace liesys::sl2
