#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liesys/systems.hpp"

namespace liesys {

struct Tolerances {
    double rel, abs;
};

enum class StopReason {
    Blowup,          // a component magnitude crossed the blowup threshold
    DomainBoundary,  // a positive coordinate reached the domain floor
    StepUnderflow,   // step size collapsed without crossing either threshold
};

std::string stop_reason_name(StopReason reason);

struct EarlyTermination {
    double t_stop;
    StopReason reason;
};

struct IntegrateOptions {
    double blowup_threshold = 1e6;
    double positive_floor = 1e-9;
    std::size_t max_steps = 2'000'000;
};

/// Dense-output coefficients for one accepted step (quartic interpolant).
struct DenseStep {
    double t_start, h;
    std::array<std::vector<double>, 5> cont;
};

/// Immutable record of an adaptive integration: strictly monotone time grid,
/// one state per node, and per-step interpolation data for sampling anywhere
/// in between.
class Trajectory {
public:
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<std::vector<double>>& states() const noexcept { return states_; }
    const SystemSpec& spec() const noexcept { return spec_; }
    Tolerances tolerances() const noexcept { return tol_; }
    const std::optional<EarlyTermination>& terminated_early() const noexcept { return early_; }

    double t_front() const { return times_.front(); }
    double t_back() const { return times_.back(); }
    bool forward() const noexcept { return direction_ > 0; }

    /// Dense-output state at t; grid nodes return the stored state bit-exactly.
    std::vector<double> sample(double t) const;

    /// Header `t,<component names>`, one row per node, 17 significant digits.
    void write_csv(std::ostream& out) const;

private:
    friend Trajectory integrate(const SystemSpec&, std::span<const double>, double, double,
                                double, double, const IntegrateOptions&);
    Trajectory(SystemSpec spec, Tolerances tol, int direction)
        : spec_(std::move(spec)), tol_(tol), direction_(direction) {}

    SystemSpec spec_;
    Tolerances tol_;
    int direction_;
    std::vector<double> times_;
    std::vector<std::vector<double>> states_;
    std::vector<DenseStep> dense_;
    std::optional<EarlyTermination> early_;
};

/// Integrates the system from t0 to t1 (either direction) with the embedded
/// 5(4) pair. Blowups and domain-floor crossings terminate the trajectory
/// early instead of throwing; they are recorded on the result.
Trajectory integrate(const SystemSpec& spec, std::span<const double> state0, double t0, double t1,
                     double rel_tol, double abs_tol, const IntegrateOptions& options = {});

std::vector<double> sample(const Trajectory& traj, double t);

}  // namespace liesys
