#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace liesys {

// Time-dependent frequency profiles. All systems in a coupled run share one
// profile, and evaluation is a pure function of (profile, t).

struct ConstantOmega {
    double omega0;  // omega(t) = omega0
};

struct ChirpOmega {
    double a, b;  // omega(t) = a + b t
};

struct SinusoidalOmega {
    // omega^2(t) = a + b cos(c t + phase); requires a - |b| >= 0 so the
    // frequency stays real.
    double a, b, c;
    double phase = 0.0;
};

struct TabulatedOmega {
    // Strictly increasing sample times; omega interpolated linearly (not
    // omega^2), values must be >= 0. Evaluation outside the range is an error.
    std::vector<std::pair<double, double>> samples;
};

class OmegaProfile {
public:
    using Kind = std::variant<ConstantOmega, ChirpOmega, SinusoidalOmega, TabulatedOmega>;

    static OmegaProfile constant(double omega0);
    static OmegaProfile chirp(double a, double b);
    static OmegaProfile sinusoidal(double a, double b, double c, double phase = 0.0);
    static OmegaProfile tabulated(std::vector<std::pair<double, double>> samples);

    double omega_sq(double t) const;
    double omega(double t) const;

    /// Time range on which the profile is defined; nullopt means all of R.
    std::optional<std::pair<double, double>> domain() const;

    const Kind& kind() const noexcept { return kind_; }
    bool operator==(const OmegaProfile& other) const;

private:
    explicit OmegaProfile(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

double omega_sq_at(const OmegaProfile& profile, double t);
double omega_at(const OmegaProfile& profile, double t);

}  // namespace liesys
