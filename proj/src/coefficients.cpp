#include "liesys/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liesys/error.hpp"

namespace liesys {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
    throw Error(kind, "coefficients", op, msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

OmegaProfile OmegaProfile::constant(double omega0) {
    if (!finite(omega0) || omega0 < 0.0)
        fail(ErrorKind::Domain, "constant", "omega0 must be finite and >= 0");
    return OmegaProfile(Kind{ConstantOmega{omega0}});
}

OmegaProfile OmegaProfile::chirp(double a, double b) {
    if (!finite(a) || !finite(b))
        fail(ErrorKind::Domain, "chirp", "coefficients must be finite");
    return OmegaProfile(Kind{ChirpOmega{a, b}});
}

OmegaProfile OmegaProfile::sinusoidal(double a, double b, double c, double phase) {
    if (!finite(a) || !finite(b) || !finite(c) || !finite(phase))
        fail(ErrorKind::Domain, "sinusoidal", "coefficients must be finite");
    if (a - std::abs(b) < 0.0)
        fail(ErrorKind::Domain, "sinusoidal",
             "requires a - |b| >= 0 so omega^2(t) stays nonnegative");
    return OmegaProfile(Kind{SinusoidalOmega{a, b, c, phase}});
}

OmegaProfile OmegaProfile::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.empty())
        fail(ErrorKind::Domain, "tabulated", "table must contain at least one sample");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!finite(samples[i].first) || !finite(samples[i].second))
            fail(ErrorKind::Domain, "tabulated", "samples must be finite");
        if (samples[i].second < 0.0)
            fail(ErrorKind::Domain, "tabulated", "omega samples must be >= 0");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            fail(ErrorKind::Domain, "tabulated", "sample times must be strictly increasing");
    }
    return OmegaProfile(Kind{TabulatedOmega{std::move(samples)}});
}

double OmegaProfile::omega(double t) const {
    if (const auto* c = std::get_if<ConstantOmega>(&kind_)) {
        (void)t;
        return c->omega0;
    }
    if (const auto* c = std::get_if<ChirpOmega>(&kind_)) return std::abs(c->a + c->b * t);
    if (const auto* s = std::get_if<SinusoidalOmega>(&kind_)) {
        double w2 = s->a + s->b * std::cos(s->c * t + s->phase);
        return std::sqrt(std::max(w2, 0.0));
    }
    const auto& tab = std::get<TabulatedOmega>(kind_).samples;
    if (t < tab.front().first || t > tab.back().first)
        fail(ErrorKind::Domain, "omega_at",
             "t=" + std::to_string(t) + " outside the tabulated range [" +
                 std::to_string(tab.front().first) + ", " + std::to_string(tab.back().first) + "]");
    auto it = std::lower_bound(tab.begin(), tab.end(), t,
                               [](const auto& s, double v) { return s.first < v; });
    if (it != tab.end() && it->first == t) return it->second;  // node hit: exact sample value
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double w = lo.second + (hi.second - lo.second) * (t - lo.first) / (hi.first - lo.first);
    return w;
}

double OmegaProfile::omega_sq(double t) const {
    if (const auto* s = std::get_if<SinusoidalOmega>(&kind_))
        return s->a + s->b * std::cos(s->c * t + s->phase);
    double w = omega(t);
    return w * w;
}

std::optional<std::pair<double, double>> OmegaProfile::domain() const {
    if (const auto* tab = std::get_if<TabulatedOmega>(&kind_))
        return std::make_pair(tab->samples.front().first, tab->samples.back().first);
    return std::nullopt;
}

bool OmegaProfile::operator==(const OmegaProfile& other) const {
    if (kind_.index() != other.kind_.index()) return false;
    if (const auto* c = std::get_if<ConstantOmega>(&kind_))
        return c->omega0 == std::get<ConstantOmega>(other.kind_).omega0;
    if (const auto* c = std::get_if<ChirpOmega>(&kind_)) {
        const auto& o = std::get<ChirpOmega>(other.kind_);
        return c->a == o.a && c->b == o.b;
    }
    if (const auto* s = std::get_if<SinusoidalOmega>(&kind_)) {
        const auto& o = std::get<SinusoidalOmega>(other.kind_);
        return s->a == o.a && s->b == o.b && s->c == o.c && s->phase == o.phase;
    }
    return std::get<TabulatedOmega>(kind_).samples == std::get<TabulatedOmega>(other.kind_).samples;
}

double omega_sq_at(const OmegaProfile& profile, double t) { return profile.omega_sq(t); }

double omega_at(const OmegaProfile& profile, double t) { return profile.omega(t); }

}  // namespace liesys
