#include <cmath>
#include <limits>

#include "common.hpp"
#include "rinv/elements.hpp"
#include "rinv/waves.hpp"

namespace rinv {

namespace {

constexpr const char* tag = "e0a";

double speed(const E0AConfig& c) { return val(c.eps) * val(c.eps1) * std::sqrt(c.A); }

double root_term(const E0AConfig& c)
{
    double g2 = norm2(c.params.g);
    return std::sqrt(std::max(0.0, g2 - c.c0 * c.c0)) / g2;
}

// dr0/dzeta in overflow-free form.
double w_of(const E0AConfig& c, double zeta)
{
    double T = std::tanh(zeta / c.F0);
    return 2 * c.A0 / c.F0 * T * (1 - T * T) / (1 + T * T);
}

double dw_of(const E0AConfig& c, double zeta)
{
    double T = std::tanh(zeta / c.F0), T2 = T * T;
    return 2 * c.A0 / (c.F0 * c.F0) * (1 - T2) * (1 - 4 * T2 - T2 * T2) / ((1 + T2) * (1 + T2));
}

double denominator(const E0AConfig& c, double t)
{
    double d = c.K - speed(c) * t;
    if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(c.K))) detail::wave_reject(tag, "pole K = eps eps1 sqrt(A) t");
    return d;
}

} // namespace

E0AConfig e0a_reference(double A, double K, double g)
{
    E0AConfig c;
    c.A = A;
    c.K = K;
    c.A0 = 5;
    c.F0 = 1;
    c.B0 = 0;
    c.c0 = g;
    c.c1 = 0;
    c.eps = c.eps1 = c.eps2 = Sign::plus;
    c.params = PhysParams::make(1.0, {0, 0, g}, {0, -1, 0});
    return c;
}

void validate(const E0AConfig& c)
{
    c.params.validate();
    if (!(c.A > 0)) detail::wave_reject(tag, "A must be positive");
    if (c.F0 == 0) detail::wave_reject(tag, "F0 must be nonzero");
    double g2 = norm2(c.params.g);
    if (g2 == 0) detail::wave_reject(tag, "g must be nonzero");
    if (g2 < c.c0 * c.c0) detail::wave_reject(tag, "|g|^2 < c0^2");
    const Vec3& om = c.params.omega;
    if (std::abs(norm(om) - 1) > 1e-12) detail::wave_reject(tag, "|Omega| must be 1");
    if (std::abs(dot(c.params.g, om)) > 1e-12 * std::sqrt(g2)) detail::wave_reject(tag, "g.Omega must be 0");
    for (double v : {c.A0, c.B0, c.c0, c.c1, c.K})
        if (!std::isfinite(v)) detail::wave_reject(tag, "non-finite parameter");
}

WaveCovector e0a_zeta_covector(const E0AConfig& c)
{
    const Vec3& g = c.params.g;
    double g2 = norm2(g);
    Vec3 l = (val(c.eps2) * root_term(c)) * g - (c.c0 / g2) * cross(g, c.params.omega);
    return {c.c0, l};
}

double e0a_zeta(const E0AConfig& c, const SpacetimePoint& pt) { return pair(e0a_zeta_covector(c), pt) + c.c1; }

double e0a_r0_of_zeta(const E0AConfig& c, double zeta)
{
    double T = std::tanh(zeta / c.F0);
    return c.A0 * std::log1p(T * T);
}

double e0a_psi0(const E0AConfig& c, double r0) { return c.F0 * std::atanh(std::sqrt(std::expm1(r0 / c.A0))); }

WaveSample e0a_eval(const E0AConfig& c, const SpacetimePoint& pt)
{
    double zeta = e0a_zeta(c, pt);
    double r0 = e0a_r0_of_zeta(c, zeta);
    double w = w_of(c, zeta);
    double B = ((speed(c) + c.B0) * pt.t + dot(c.params.omega, pt.x)) / denominator(c, pt.t);
    double rho = std::exp(r0 / c.A + B);
    const Vec3& g = c.params.g;
    Vec3 gxo = cross(g, c.params.omega);
    Vec3 v = (-w * c.c0 / norm2(g)) * g - (c.B0 + speed(c) * B) * c.params.omega
             + (1 - val(c.eps2) * w * root_term(c)) * gxo;
    return {FluidState(rho, c.A * rho, v), {r0, B}};
}

FluidState e0a_printed_eval(const E0AConfig& c, const SpacetimePoint& pt)
{
    double g = norm(c.params.g), sA = std::sqrt(c.A);
    double t = pt.t, x = pt.x.x, z = pt.x.z;
    double th = std::tanh(g * t - x), ch = std::cosh(g * t - x);
    double rho = std::pow(th * th + 1, 5 / c.A) * std::exp((sA * t + g * z) / (c.K - sA * t));
    double v2 = -((c.A * t + sA * g * z) / (c.K - c.A * t));
    double v3 = -2 * th * th / (2 * ch * ch - 1);
    return FluidState(rho, c.A * rho, {g, v2, v3});
}

std::optional<double> catastrophe_time(const E0AConfig& c)
{
    double t = c.K / speed(c);
    if (t > 0) return t;
    return std::nullopt;
}

RankTwoFrame e0a_frame(const E0AConfig& c, const SpacetimePoint& pt)
{
    WaveSample ws = e0a_eval(c, pt);
    double zeta = e0a_zeta(c, pt);
    double w = w_of(c, zeta);
    if (w == 0) detail::wave_reject(tag, "dr0 vanishes at zeta = 0");
    const Vec3& g = c.params.g;
    Vec3 dv_dw = (-c.c0 / norm2(g)) * g - (val(c.eps2) * root_term(c)) * cross(g, c.params.omega);
    Vec3 h0 = (dw_of(c, zeta) / w) * dv_dw;
    SimpleElement e0 = entropic_inhom(ws.u, c.params, ws.u.rho() / c.A, h0);

    double d = denominator(c, pt.t);
    Sign ew = parse_sign(val(c.eps) * val(c.eps1) * (d > 0 ? 1 : -1));
    SimpleElement e1 = acoustic_hom(ws.u, c.params, c.params.omega / d, ew, ws.u.rho());
    return {e1.gamma.as_array(), e1.lam, e0.gamma.as_array(), e0.lam};
}

AlphaZeroSpec e0a_alpha_zero_spec(const E0AConfig& c, Sign side, Interval r1_bracket)
{
    AlphaZeroSpec s;
    WaveCovector C = e0a_zeta_covector(c);
    double sg = val(side);
    s.C = {sg * C.lam0, sg * C.lam};
    s.a0 = sg * c.c1;
    s.Psi0 = [c](double r0) { return e0a_psi0(c, r0); };
    s.phi = [c](double r0) {
        double e = std::expm1(r0 / c.A0);
        double d = c.F0 * (e + 1) / (2 * c.A0 * (1 - e) * std::sqrt(e));
        return -std::log(d);
    };
    s.base = 0;
    s.r0_bracket = {0, c.A0 * std::log(2.0) * (1 - 1e-12)};
    double sp = speed(c), B0 = c.B0, K = c.K;
    Vec3 om = c.params.omega;
    s.waves.push_back({{}, [sp, B0, om](double r1) { return WaveCovector{sp * (r1 + 1) + B0, om}; },
                       [K](double r1) { return K * r1; }, r1_bracket});
    return s;
}

Field e0a_field(const E0AConfig& cfg)
{
    validate(cfg);
    return [cfg](const SpacetimePoint& pt) { return e0a_eval(cfg, pt).u.as_array(); };
}

} // namespace rinv
