#include "liesys/systems.hpp"

#include <cmath>
#include <string>

#include "liesys/error.hpp"

namespace liesys {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
    throw Error(kind, "systems", op, msg);
}

bool is_integer(double p) { return std::nearbyint(p) == p && std::isfinite(p); }

}  // namespace

// --- Coupling ----------------------------------------------------------------

Coupling Coupling::constant(double c) {
    if (!std::isfinite(c)) fail(ErrorKind::Domain, "coupling", "constant must be finite");
    return Coupling(Kind{ConstantValue{c}});
}

Coupling Coupling::power_law(double c, double p) {
    if (!std::isfinite(c) || !std::isfinite(p))
        fail(ErrorKind::Domain, "coupling", "power-law parameters must be finite");
    return Coupling(Kind{PowerLaw{c, p}});
}

double Coupling::operator()(double r) const {
    if (const auto* cv = std::get_if<ConstantValue>(&kind_)) return cv->c;
    const auto& pl = std::get<PowerLaw>(kind_);
    if (pl.c == 0.0) return 0.0;
    if (r <= 0.0 && !is_integer(pl.p))
        fail(ErrorKind::Domain, "coupling",
             "power law with non-integer exponent needs r > 0, got r=" + std::to_string(r));
    return pl.c * std::pow(r, pl.p);
}

double Coupling::derivative(double r) const {
    if (std::holds_alternative<ConstantValue>(kind_)) return 0.0;
    const auto& pl = std::get<PowerLaw>(kind_);
    if (pl.c == 0.0 || pl.p == 0.0) return 0.0;
    if (r <= 0.0 && !is_integer(pl.p - 1.0))
        fail(ErrorKind::Domain, "coupling",
             "power law with non-integer exponent needs r > 0, got r=" + std::to_string(r));
    return pl.c * pl.p * std::pow(r, pl.p - 1.0);
}

bool Coupling::is_zero() const {
    if (const auto* cv = std::get_if<ConstantValue>(&kind_)) return cv->c == 0.0;
    return std::get<PowerLaw>(kind_).c == 0.0;
}

bool Coupling::operator==(const Coupling& other) const {
    if (kind_.index() != other.kind_.index()) return false;
    if (const auto* cv = std::get_if<ConstantValue>(&kind_))
        return cv->c == std::get<ConstantValue>(other.kind_).c;
    const auto& a = std::get<PowerLaw>(kind_);
    const auto& b = std::get<PowerLaw>(other.kind_);
    return a.c == b.c && a.p == b.p;
}

// --- SystemSpec --------------------------------------------------------------

SystemSpec::SystemSpec(Kind kind, OmegaProfile omega)
    : kind_(std::move(kind)), omega_(std::move(omega)) {
    if (const auto* mp = std::get_if<MilnePinney>(&kind_)) {
        if (!(mp->k > 0.0)) fail(ErrorKind::Domain, "spec", "Milne-Pinney requires k > 0");
    } else if (const auto* prol = std::get_if<Prolongation>(&kind_)) {
        if (prol->members.empty())
            fail(ErrorKind::Domain, "spec", "prolongation needs at least one member");
        for (const auto& m : prol->members)
            if (!(m.omega() == omega_))
                fail(ErrorKind::Domain, "spec",
                     "all prolongation members must share the same omega profile");
    }
}

std::size_t SystemSpec::dimension() const {
    if (std::holds_alternative<Oscillator>(kind_)) return 2;
    if (std::holds_alternative<MilnePinney>(kind_)) return 2;
    if (std::holds_alternative<Riccati>(kind_)) return 1;
    if (std::holds_alternative<Ermakov>(kind_)) return 4;
    if (std::holds_alternative<GeneralizedErmakov>(kind_)) return 4;
    std::size_t n = 0;
    for (const auto& m : std::get<Prolongation>(kind_).members) n += m.dimension();
    return n;
}

std::vector<std::string> SystemSpec::component_names() const {
    if (std::holds_alternative<Oscillator>(kind_)) return {"x", "v"};
    if (std::holds_alternative<MilnePinney>(kind_)) return {"x", "v"};
    if (std::holds_alternative<Riccati>(kind_)) return {"x"};
    if (std::holds_alternative<Ermakov>(kind_)) return {"x", "v_x", "y", "v_y"};
    if (std::holds_alternative<GeneralizedErmakov>(kind_)) return {"x", "v_x", "y", "v_y"};
    std::vector<std::string> names;
    const auto& members = std::get<Prolongation>(kind_).members;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (const auto& n : members[i].component_names())
            names.push_back(n + "_" + std::to_string(i + 1));
    return names;
}

std::vector<std::size_t> SystemSpec::positive_components() const {
    if (std::holds_alternative<MilnePinney>(kind_)) return {0};
    if (std::holds_alternative<Ermakov>(kind_)) return {2};
    if (std::holds_alternative<GeneralizedErmakov>(kind_)) return {0};
    if (const auto* prol = std::get_if<Prolongation>(&kind_)) {
        std::vector<std::size_t> idx;
        std::size_t offset = 0;
        for (const auto& m : prol->members) {
            for (std::size_t i : m.positive_components()) idx.push_back(offset + i);
            offset += m.dimension();
        }
        return idx;
    }
    return {};
}

void SystemSpec::validate_state(std::span<const double> state) const {
    if (state.size() != dimension())
        fail(ErrorKind::Config, "vector_field",
             "state has dimension " + std::to_string(state.size()) + ", expected " +
                 std::to_string(dimension()));
    for (std::size_t i : positive_components())
        if (!(state[i] > 0.0))
            fail(ErrorKind::Domain, "vector_field",
                 "component '" + component_names()[i] + "' must be > 0, got " +
                     std::to_string(state[i]));
}

void SystemSpec::vector_field(double t, std::span<const double> state,
                              std::span<double> deriv) const {
    validate_state(state);
    const double w2 = omega_.omega_sq(t);
    if (std::holds_alternative<Oscillator>(kind_)) {
        deriv[0] = state[1];
        deriv[1] = -w2 * state[0];
    } else if (const auto* mp = std::get_if<MilnePinney>(&kind_)) {
        const double x = state[0];
        deriv[0] = state[1];
        deriv[1] = -w2 * x + mp->k / (x * x * x);
    } else if (std::holds_alternative<Riccati>(kind_)) {
        deriv[0] = -w2 - state[0] * state[0];
    } else if (std::holds_alternative<Ermakov>(kind_)) {
        const double y = state[2];
        deriv[0] = state[1];
        deriv[1] = -w2 * state[0];
        deriv[2] = state[3];
        deriv[3] = -w2 * y + 1.0 / (y * y * y);
    } else if (const auto* ge = std::get_if<GeneralizedErmakov>(&kind_)) {
        const double x = state[0];
        const double y = state[2];
        const double r = y / x;
        deriv[0] = state[1];
        deriv[1] = -w2 * x + ge->f(r) / (x * x * x);
        deriv[2] = state[3];
        double gval = ge->g(r);
        if (gval == 0.0) {
            deriv[3] = -w2 * y;
        } else {
            if (y == 0.0)
                fail(ErrorKind::Domain, "vector_field",
                     "generalized Ermakov g-term needs y != 0 when g(y/x) != 0");
            deriv[3] = -w2 * y + gval / (y * y * y);
        }
    } else {
        const auto& members = std::get<Prolongation>(kind_).members;
        std::size_t offset = 0;
        for (const auto& m : members) {
            const std::size_t n = m.dimension();
            m.vector_field(t, state.subspan(offset, n), deriv.subspan(offset, n));
            offset += n;
        }
    }
}

std::vector<double> SystemSpec::vector_field(double t, std::span<const double> state) const {
    std::vector<double> deriv(dimension());
    vector_field(t, state, deriv);
    return deriv;
}

// --- Fundamental fields --------------------------------------------------

std::vector<double> FundamentalField::value(std::span<const double> state) const {
    std::vector<double> out(dim_);
    value_(state, out);
    return out;
}

std::vector<double> FundamentalField::jvp(std::span<const double> state,
                                          std::span<const double> direction) const {
    std::vector<double> out(dim_);
    jvp_(state, direction, out);
    return out;
}

namespace {

FundamentalTriple oscillator_triple() {
    // X1 = x d/dv, X2 = v d/dx, X3 = (x d/dx - v d/dv)/2
    auto x1v = [](std::span<const double> s, std::span<double> o) { o[0] = 0.0; o[1] = s[0]; };
    auto x1j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.0; o[1] = d[0];
    };
    auto x2v = [](std::span<const double> s, std::span<double> o) { o[0] = s[1]; o[1] = 0.0; };
    auto x2j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = d[1]; o[1] = 0.0;
    };
    auto x3v = [](std::span<const double> s, std::span<double> o) {
        o[0] = 0.5 * s[0]; o[1] = -0.5 * s[1];
    };
    auto x3j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.5 * d[0]; o[1] = -0.5 * d[1];
    };
    return {FundamentalField(2, x1v, x1j), FundamentalField(2, x2v, x2j),
            FundamentalField(2, x3v, x3j)};
}

FundamentalTriple milne_pinney_triple(double k) {
    // L1 = x d/dv, L2 = v d/dx + (k/x^3) d/dv, L3 = (x d/dx - v d/dv)/2
    auto x1v = [](std::span<const double> s, std::span<double> o) { o[0] = 0.0; o[1] = s[0]; };
    auto x1j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.0; o[1] = d[0];
    };
    auto x2v = [k](std::span<const double> s, std::span<double> o) {
        const double x = s[0];
        o[0] = s[1];
        o[1] = k / (x * x * x);
    };
    auto x2j = [k](std::span<const double> s, std::span<const double> d, std::span<double> o) {
        const double x = s[0];
        o[0] = d[1];
        o[1] = -3.0 * k / (x * x * x * x) * d[0];
    };
    auto x3v = [](std::span<const double> s, std::span<double> o) {
        o[0] = 0.5 * s[0]; o[1] = -0.5 * s[1];
    };
    auto x3j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.5 * d[0]; o[1] = -0.5 * d[1];
    };
    return {FundamentalField(2, x1v, x1j), FundamentalField(2, x2v, x2j),
            FundamentalField(2, x3v, x3j)};
}

FundamentalTriple riccati_triple() {
    // L1 = d/dx, L2 = -x^2 d/dx, L3 = -x d/dx
    auto x1v = [](std::span<const double>, std::span<double> o) { o[0] = 1.0; };
    auto x1j = [](std::span<const double>, std::span<const double>, std::span<double> o) {
        o[0] = 0.0;
    };
    auto x2v = [](std::span<const double> s, std::span<double> o) { o[0] = -s[0] * s[0]; };
    auto x2j = [](std::span<const double> s, std::span<const double> d, std::span<double> o) {
        o[0] = -2.0 * s[0] * d[0];
    };
    auto x3v = [](std::span<const double> s, std::span<double> o) { o[0] = -s[0]; };
    auto x3j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = -d[0];
    };
    return {FundamentalField(1, x1v, x1j), FundamentalField(1, x2v, x2j),
            FundamentalField(1, x3v, x3j)};
}

FundamentalTriple ermakov_triple() {
    // X1 = x d/dv_x + y d/dv_y
    // X2 = v_x d/dx + v_y d/dy + (1/y^3) d/dv_y
    // X3 = (x d/dx + y d/dy - v_x d/dv_x - v_y d/dv_y)/2
    auto x1v = [](std::span<const double> s, std::span<double> o) {
        o[0] = 0.0; o[1] = s[0]; o[2] = 0.0; o[3] = s[2];
    };
    auto x1j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.0; o[1] = d[0]; o[2] = 0.0; o[3] = d[2];
    };
    auto x2v = [](std::span<const double> s, std::span<double> o) {
        const double y = s[2];
        o[0] = s[1]; o[1] = 0.0; o[2] = s[3]; o[3] = 1.0 / (y * y * y);
    };
    auto x2j = [](std::span<const double> s, std::span<const double> d, std::span<double> o) {
        const double y = s[2];
        o[0] = d[1]; o[1] = 0.0; o[2] = d[3];
        o[3] = -3.0 / (y * y * y * y) * d[2];
    };
    auto x3v = [](std::span<const double> s, std::span<double> o) {
        o[0] = 0.5 * s[0]; o[1] = -0.5 * s[1]; o[2] = 0.5 * s[2]; o[3] = -0.5 * s[3];
    };
    auto x3j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.5 * d[0]; o[1] = -0.5 * d[1]; o[2] = 0.5 * d[2]; o[3] = -0.5 * d[3];
    };
    return {FundamentalField(4, x1v, x1j), FundamentalField(4, x2v, x2j),
            FundamentalField(4, x3v, x3j)};
}

FundamentalTriple generalized_ermakov_triple(Coupling f, Coupling g) {
    // N1 = x d/dv_x + y d/dv_y
    // N2 = v_x d/dx + v_y d/dy + (f(y/x)/x^3) d/dv_x + (g(y/x)/y^3) d/dv_y
    // N3 = (x d/dx + y d/dy - v_x d/dv_x - v_y d/dv_y)/2
    auto x1v = [](std::span<const double> s, std::span<double> o) {
        o[0] = 0.0; o[1] = s[0]; o[2] = 0.0; o[3] = s[2];
    };
    auto x1j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.0; o[1] = d[0]; o[2] = 0.0; o[3] = d[2];
    };
    auto x2v = [f, g](std::span<const double> s, std::span<double> o) {
        const double x = s[0], y = s[2], r = y / x;
        o[0] = s[1];
        o[1] = f(r) / (x * x * x);
        o[2] = s[3];
        const double gval = g(r);
        o[3] = gval == 0.0 ? 0.0 : gval / (y * y * y);
    };
    auto x2j = [f, g](std::span<const double> s, std::span<const double> d, std::span<double> o) {
        const double x = s[0], y = s[2], r = y / x;
        const double x4 = x * x * x * x;
        const double fx = -3.0 * f(r) / x4 - f.derivative(r) * y / (x4 * x);
        const double fy = f.derivative(r) / x4;
        double gx = 0.0, gy = 0.0;
        if (!g.is_zero()) {
            const double y4 = y * y * y * y;
            gx = -g.derivative(r) / (x * x * y * y);
            gy = -3.0 * g(r) / y4 + g.derivative(r) / (x * y * y * y);
        }
        o[0] = d[1];
        o[1] = fx * d[0] + fy * d[2];
        o[2] = d[3];
        o[3] = gx * d[0] + gy * d[2];
    };
    auto x3v = [](std::span<const double> s, std::span<double> o) {
        o[0] = 0.5 * s[0]; o[1] = -0.5 * s[1]; o[2] = 0.5 * s[2]; o[3] = -0.5 * s[3];
    };
    auto x3j = [](std::span<const double>, std::span<const double> d, std::span<double> o) {
        o[0] = 0.5 * d[0]; o[1] = -0.5 * d[1]; o[2] = 0.5 * d[2]; o[3] = -0.5 * d[3];
    };
    return {FundamentalField(4, x1v, x1j), FundamentalField(4, x2v, x2j),
            FundamentalField(4, x3v, x3j)};
}

FundamentalField concatenate(std::vector<FundamentalField> parts) {
    std::size_t dim = 0;
    for (const auto& p : parts) dim += p.dimension();
    auto value = [parts](std::span<const double> s, std::span<double> o) {
        std::size_t offset = 0;
        for (const auto& p : parts) {
            const std::size_t n = p.dimension();
            auto v = p.value(s.subspan(offset, n));
            for (std::size_t i = 0; i < n; ++i) o[offset + i] = v[i];
            offset += n;
        }
    };
    auto jvp = [parts](std::span<const double> s, std::span<const double> d, std::span<double> o) {
        std::size_t offset = 0;
        for (const auto& p : parts) {
            const std::size_t n = p.dimension();
            auto v = p.jvp(s.subspan(offset, n), d.subspan(offset, n));
            for (std::size_t i = 0; i < n; ++i) o[offset + i] = v[i];
            offset += n;
        }
    };
    return FundamentalField(dim, value, jvp);
}

}  // namespace

FundamentalTriple fundamental_fields(const SystemSpec& spec) {
    if (std::holds_alternative<Oscillator>(spec.kind())) return oscillator_triple();
    if (const auto* mp = std::get_if<MilnePinney>(&spec.kind())) return milne_pinney_triple(mp->k);
    if (std::holds_alternative<Riccati>(spec.kind())) return riccati_triple();
    if (std::holds_alternative<Ermakov>(spec.kind())) return ermakov_triple();
    if (const auto* ge = std::get_if<GeneralizedErmakov>(&spec.kind()))
        return generalized_ermakov_triple(ge->f, ge->g);
    const auto& members = std::get<Prolongation>(spec.kind()).members;
    std::vector<FundamentalField> p1, p2, p3;
    for (const auto& m : members) {
        auto triple = fundamental_fields(m);
        p1.push_back(std::move(triple.x1));
        p2.push_back(std::move(triple.x2));
        p3.push_back(std::move(triple.x3));
    }
    return {concatenate(std::move(p1)), concatenate(std::move(p2)), concatenate(std::move(p3))};
}

std::vector<BracketRelation> structure_relations(const SystemSpec& spec) {
    // Stored exactly as printed per system; they all realize the same algebra.
    if (std::holds_alternative<MilnePinney>(spec.kind()))
        return {{1, 2, {0.0, 0.0, 2.0}}, {3, 2, {0.0, -1.0, 0.0}}, {3, 1, {1.0, 0.0, 0.0}}};
    if (std::holds_alternative<GeneralizedErmakov>(spec.kind()))
        return {{1, 2, {0.0, 0.0, 2.0}}, {3, 1, {1.0, 0.0, 0.0}}, {2, 3, {0.0, 1.0, 0.0}}};
    if (std::holds_alternative<Riccati>(spec.kind()))
        return {{1, 2, {0.0, 0.0, 2.0}}, {3, 1, {1.0, 0.0, 0.0}}, {2, 3, {0.0, 1.0, 0.0}}};
    if (std::holds_alternative<Prolongation>(spec.kind()))
        return {{1, 2, {0.0, 0.0, 2.0}}, {3, 1, {1.0, 0.0, 0.0}}, {3, 2, {0.0, -1.0, 0.0}}};
    // Oscillator and Ermakov
    return {{1, 2, {0.0, 0.0, 2.0}}, {3, 1, {1.0, 0.0, 0.0}}, {2, 3, {0.0, 1.0, 0.0}}};
}

double full_field_decomposition_check(const SystemSpec& spec, double t,
                                      std::span<const double> state) {
    auto field = spec.vector_field(t, state);
    auto triple = fundamental_fields(spec);
    auto x1 = triple.x1.value(state);
    auto x2 = triple.x2.value(state);
    const double w2 = spec.omega().omega_sq(t);
    double residual = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i)
        residual = std::max(residual, std::abs(field[i] - (x2[i] - w2 * x1[i])));
    return residual;
}

}  // namespace liesys
