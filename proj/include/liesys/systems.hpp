#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "liesys/coefficients.hpp"

namespace liesys {

// Scalar coupling of the ratio r = y/x used by the generalized Ermakov
// system. Constants and power laws keep the quadrature first integral in
// closed form.

struct ConstantValue {
    double c;
};

struct PowerLaw {
    double c, p;  // c * r^p
};

class Coupling {
public:
    using Kind = std::variant<ConstantValue, PowerLaw>;

    static Coupling constant(double c);
    static Coupling power_law(double c, double p);

    double operator()(double r) const;
    double derivative(double r) const;  // d/dr
    bool is_zero() const;               // identically zero for all r
    const Kind& kind() const noexcept { return kind_; }
    bool operator==(const Coupling& other) const;

private:
    explicit Coupling(Kind kind) : kind_(kind) {}
    Kind kind_;
};

// --- System kinds -----------------------------------------------------------

struct Oscillator {};  // (x, v): x' = v, v' = -omega^2 x

struct MilnePinney {
    double k;  // (x, v), x > 0: v' = -omega^2 x + k/x^3
};

struct Riccati {};  // (x): x' = -omega^2 - x^2

struct Ermakov {};  // (x, v_x, y, v_y), y > 0: oscillator in x, Pinney (k=1) in y

struct GeneralizedErmakov {
    // (x, v_x, y, v_y), x > 0:
    //   v_x' = -omega^2 x + f(y/x)/x^3
    //   v_y' = -omega^2 y + g(y/x)/y^3
    Coupling f, g;
};

class SystemSpec;

struct Prolongation {
    std::vector<SystemSpec> members;  // all sharing the outer omega profile
};

class SystemSpec {
public:
    using Kind = std::variant<Oscillator, MilnePinney, Riccati, Ermakov, GeneralizedErmakov,
                              Prolongation>;

    SystemSpec(Kind kind, OmegaProfile omega);

    std::size_t dimension() const;
    std::vector<std::string> component_names() const;
    /// Indices of components constrained to stay strictly positive.
    std::vector<std::size_t> positive_components() const;

    void vector_field(double t, std::span<const double> state, std::span<double> deriv) const;
    std::vector<double> vector_field(double t, std::span<const double> state) const;

    /// Throws a domain error if the state violates dimension or positivity.
    void validate_state(std::span<const double> state) const;

    const Kind& kind() const noexcept { return kind_; }
    const OmegaProfile& omega() const noexcept { return omega_; }

private:
    Kind kind_;
    OmegaProfile omega_;
};

// --- Fundamental sl(2,R) fields ---------------------------------------------

/// One of the three time-independent vector fields spanning the system's
/// sl(2,R); carries the analytic Jacobian for bracket checks.
class FundamentalField {
public:
    using ValueFn = std::function<void(std::span<const double>, std::span<double>)>;
    using JvpFn = std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>;

    FundamentalField(std::size_t dim, ValueFn value, JvpFn jvp)
        : dim_(dim), value_(std::move(value)), jvp_(std::move(jvp)) {}

    std::size_t dimension() const noexcept { return dim_; }
    std::vector<double> value(std::span<const double> state) const;
    /// Analytic Jacobian-vector product J(state) * direction.
    std::vector<double> jvp(std::span<const double> state, std::span<const double> direction) const;

private:
    std::size_t dim_;
    ValueFn value_;
    JvpFn jvp_;
};

struct FundamentalTriple {
    FundamentalField x1, x2, x3;
};

/// The system's sl(2,R) triple (X1, X2, X3), such that the full t-dependent
/// field is X2 - omega^2(t) X1. For prolongations, the member-wise
/// concatenation (diagonal prolongation).
FundamentalTriple fundamental_fields(const SystemSpec& spec);

/// [X_a, X_b] = sum_g coeffs[g] X_g, with 1-based field labels, stored as
/// printed for each system (the sign conventions differ between sources).
struct BracketRelation {
    int a, b;
    std::array<double, 3> coeffs;
};

std::vector<BracketRelation> structure_relations(const SystemSpec& spec);

/// Max-norm of vector_field(t, state) - (X2(state) - omega^2(t) X1(state)).
double full_field_decomposition_check(const SystemSpec& spec, double t,
                                      std::span<const double> state);

}  // namespace liesys
