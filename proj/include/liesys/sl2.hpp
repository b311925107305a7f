#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "liesys/systems.hpp"

namespace liesys::sl2 {

/// Real 2x2 unimodular matrix with rows (alpha beta; gamma delta).
/// Construction checks |det - 1| <= 1e-12.
struct GroupElement {
    double alpha, beta, gamma, delta;

    GroupElement(double alpha_, double beta_, double gamma_, double delta_);
    static GroupElement identity() { return GroupElement(1.0, 0.0, 0.0, 1.0); }
    double det() const { return alpha * delta - beta * gamma; }
    GroupElement operator*(const GroupElement& other) const;
};

/// sl(2,R) basis as 2x2 matrices (a1, a2, a3).
struct Mat2 {
    double m00, m01, m10, m11;
};
inline constexpr Mat2 kBasisA1{0.0, 0.0, -1.0, 0.0};
inline constexpr Mat2 kBasisA2{0.0, -1.0, 0.0, 0.0};
inline constexpr Mat2 kBasisA3{-0.5, 0.0, 0.0, 0.5};

// One-parameter subgroups through the basis (minus sign matches the
// decomposition A = exp(-a2 s2) exp(-a1 s1) exp(-a3 s3)).
GroupElement exp_minus_a1(double s);  // (1 0; s 1)
GroupElement exp_minus_a2(double s);  // (1 s; 0 1)
GroupElement exp_minus_a3(double s);  // (e^{s/2} 0; 0 e^{-s/2})

struct DecomposedElement {
    double alpha1, alpha2, alpha3;
};

/// Factors A = exp(-alpha2 a2) exp(-alpha1 a1) exp(-alpha3 a3); requires
/// delta > 0 (the chart the factorization covers).
DecomposedElement decompose(const GroupElement& A);
GroupElement recompose(const DecomposedElement& d);

struct PhasePoint {
    double x, v;
};

/// Closed-form action of SL(2,R) on T R+ for the inverse-cubic oscillator
/// with parameter k > 0. Requires x > 0 and delta != 0.
PhasePoint act(const GroupElement& A, double x, double v, double k);

/// Same action composed from the three one-parameter flows of the
/// decomposition: scaling, shear, then numerical integration of the
/// (v d/dx + k/x^3 d/dv) flow for parameter time alpha2.
PhasePoint act_via_flows(const GroupElement& A, double x, double v, double k,
                         double rel_tol = 1e-12, double abs_tol = 1e-14);

struct AnalyticJacobian {};
struct FiniteDifference {
    double h;  // must lie in [1e-8, 1e-3]
};
using BracketMode = std::variant<AnalyticJacobian, FiniteDifference>;

/// Max over points and relations of |[X_a, X_b](p) - sum_g c^g X_g(p)|_inf.
/// Brackets via Jacobian-vector products: analytic, or normalized-direction
/// central differences in finite-difference mode.
double bracket_residual(const FundamentalTriple& fields,
                        const std::vector<BracketRelation>& structure,
                        std::span<const std::vector<double>> points, const BracketMode& mode);

struct ActionCheckResult {
    double max_composition_residual;  // |act(AB,p) - act(A, act(B,p))|_inf
    double max_generator_residual;    // |d/ds act(exp(-s a_j), p)|_0 - L_j(p)|_inf
};

/// Random unimodular elements are generated by sampling (alpha1, alpha2,
/// alpha3) uniform in [-2,2] and recomposing, so delta > 0 by construction;
/// products with delta <= 0 are resampled.
ActionCheckResult action_consistency(double k, int trials, std::uint64_t seed = 0);

}  // namespace liesys::sl2
