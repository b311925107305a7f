#include "liesys/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "liesys/error.hpp"

namespace liesys {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
    throw Error(kind, "integrator", op, msg);
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights for the quartic interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

std::string stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::Blowup: return "blowup";
        case StopReason::DomainBoundary: return "domain-boundary";
        case StopReason::StepUnderflow: return "step-underflow";
    }
    return "unknown";
}

Trajectory integrate(const SystemSpec& spec, std::span<const double> state0, double t0, double t1,
                     double rel_tol, double abs_tol, const IntegrateOptions& options) {
    if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2) || !(abs_tol >= 1e-14 && abs_tol <= 1e-2))
        fail(ErrorKind::Domain, "integrate", "tolerances must lie in [1e-14, 1e-2]");
    if (!(t1 != t0) || !std::isfinite(t0) || !std::isfinite(t1))
        fail(ErrorKind::Domain, "integrate", "need finite t0 != t1");
    spec.validate_state(state0);
    if (auto dom = spec.omega().domain()) {
        if (std::min(t0, t1) < dom->first || std::max(t0, t1) > dom->second)
            fail(ErrorKind::Domain, "integrate",
                 "integration interval leaves the tabulated omega range");
    }

    const std::size_t n = spec.dimension();
    const int dir = t1 > t0 ? 1 : -1;
    const double span = std::abs(t1 - t0);
    const auto positive = spec.positive_components();

    Trajectory traj(spec, Tolerances{rel_tol, abs_tol}, dir);
    traj.times_.push_back(t0);
    traj.states_.emplace_back(state0.begin(), state0.end());

    std::vector<double> y(state0.begin(), state0.end());
    std::vector<double> ynew(n), ytmp(n), errv(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    double t = t0;

    // A stage that leaves the domain (positivity violation, table edge) counts
    // as a failed attempt and shrinks the step instead of aborting the run.
    auto eval = [&](double tt, std::span<const double> yy, std::span<double> ff) -> bool {
        try {
            spec.vector_field(tt, yy, ff);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Domain) return false;
            throw;
        }
        return all_finite(ff);
    };

    if (!eval(t, y, k1))
        fail(ErrorKind::Domain, "integrate", "vector field not evaluable at the initial state");

    // Initial step from the standard norm heuristic.
    double h;
    {
        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = abs_tol + rel_tol * std::abs(y[i]);
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h0 = std::min(h0, span);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
        const bool ok = eval(t + dir * h0, ytmp, k2);
        double h1 = h0;
        if (ok) {
            double der2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double sk = abs_tol + rel_tol * std::abs(y[i]);
                der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
            }
            der2 = std::sqrt(der2) / h0;
            const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
            h1 = der12 <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
        }
        h = std::min({100.0 * h0, h1, span});
    }

    const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    const double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool last_rejected = false;
    std::size_t n_attempts = 0;

    auto combine = [&](std::span<double> out, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = y[i];
            for (const auto& [w, kv] : terms) acc += dir * h * w * (*kv)[i];
            out[i] = acc;
        }
    };

    while (true) {
        if ((t - t1) * dir >= 0.0) break;
        if (++n_attempts > options.max_steps)
            fail(ErrorKind::Domain, "integrate", "step budget exceeded");

        const double remaining = std::abs(t1 - t);
        if (h > remaining) h = remaining;
        const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
        if (h < hmin) {
            traj.early_ = EarlyTermination{t, StopReason::StepUnderflow};
            break;
        }
        const double hs = dir * h;  // signed step

        bool ok = true;
        combine(ytmp, {{a21, &k1}});
        ok = ok && eval(t + c2 * hs, ytmp, k2);
        if (ok) {
            combine(ytmp, {{a31, &k1}, {a32, &k2}});
            ok = eval(t + c3 * hs, ytmp, k3);
        }
        if (ok) {
            combine(ytmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
            ok = eval(t + c4 * hs, ytmp, k4);
        }
        if (ok) {
            combine(ytmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
            ok = eval(t + c5 * hs, ytmp, k5);
        }
        if (ok) {
            combine(ytmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
            ok = eval(t + hs, ytmp, k6);
        }
        if (ok) {
            combine(ynew, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            ok = all_finite(ynew) && eval(t + hs, ynew, k7);
        }
        if (!ok) {
            h *= 0.5;
            last_rejected = true;
            continue;
        }

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            errv[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            const double sk = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (errv[i] / sk) * (errv[i] / sk);
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!std::isfinite(err)) err = 2.0;

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            // Accept: store dense coefficients, then the node.
            DenseStep ds;
            ds.t_start = t;
            ds.h = hs;
            for (auto& c : ds.cont) c.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                ds.cont[0][i] = y[i];
                ds.cont[1][i] = ydiff;
                ds.cont[2][i] = bspl;
                ds.cont[3][i] = ydiff - hs * k7[i] - bspl;
                ds.cont[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                      d6 * k6[i] + d7 * k7[i]);
            }
            traj.dense_.push_back(std::move(ds));
            const double tnew = (std::abs(hs) >= remaining) ? t1 : t + hs;
            traj.times_.push_back(tnew);
            traj.states_.push_back(ynew);
            t = tnew;

            bool blowup = false, floor_hit = false;
            for (std::size_t i = 0; i < n && !blowup; ++i)
                blowup = std::abs(ynew[i]) > options.blowup_threshold;
            for (std::size_t i : positive)
                floor_hit = floor_hit || ynew[i] <= options.positive_floor;
            if (blowup || floor_hit) {
                traj.early_ = EarlyTermination{
                    t, blowup ? StopReason::Blowup : StopReason::DomainBoundary};
                break;
            }

            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
            h = hnew;
            y = ynew;
            std::swap(k1, k7);  // FSAL
        } else {
            h = h / std::min(facc1, fac11 / safe);
            last_rejected = true;
        }
    }

    return traj;
}

std::vector<double> Trajectory::sample(double t) const {
    const double lo = std::min(t_front(), t_back());
    const double hi = std::max(t_front(), t_back());
    if (!(t >= lo && t <= hi))
        fail(ErrorKind::Domain, "sample",
             "t=" + std::to_string(t) + " outside the recorded range [" + std::to_string(lo) +
                 ", " + std::to_string(hi) + "]");

    // Grid nodes reproduce stored states exactly.
    const auto cmp = [this](double a, double b) { return direction_ > 0 ? a < b : a > b; };
    auto it = std::lower_bound(times_.begin(), times_.end(), t, cmp);
    if (it != times_.end() && *it == t)
        return states_[static_cast<std::size_t>(it - times_.begin())];

    const std::size_t step = static_cast<std::size_t>(it - times_.begin()) - 1;
    const DenseStep& ds = dense_[step];
    const double theta = (t - ds.t_start) / ds.h;
    const double theta1 = 1.0 - theta;
    const std::size_t n = states_.front().size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = ds.cont[0][i] +
                 theta * (ds.cont[1][i] +
                          theta1 * (ds.cont[2][i] +
                                    theta * (ds.cont[3][i] + theta1 * ds.cont[4][i])));
    return out;
}

void Trajectory::write_csv(std::ostream& out) const {
    out << "t";
    for (const auto& name : spec_.component_names()) out << "," << name;
    out << "\n";
    char buf[40];
    for (std::size_t row = 0; row < times_.size(); ++row) {
        std::snprintf(buf, sizeof(buf), "%.17g", times_[row]);
        out << buf;
        for (double v : states_[row]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
}

std::vector<double> sample(const Trajectory& traj, double t) { return traj.sample(t); }

}  // namespace liesys
