#include <cmath>

#include "common.hpp"
#include "rinv/elements.hpp"
#include "rinv/waves.hpp"

namespace rinv {

namespace {

constexpr const char* tag = "h0e";

bool kappa_is(double kappa, double v) { return std::abs(kappa - v) <= 1e-12; }

struct Frame {
    double g1, g2, g3;
    Vec3 cxo;
};

Frame frame_of(const H0EConfig& c)
{
    const Vec3& g = c.params.g;
    Vec3 cxo = cross(c.c, c.params.omega);
    return {dot(g, c.c), dot(g, c.params.omega), dot(g, cxo), cxo};
}

double F_of(double kappa, double p)
{
    if (kappa_is(kappa, 1)) return std::log(p);
    double e = 1 - 1 / kappa;
    return std::pow(p, e) / e;
}

// H(p) = S1^-2 p^(-2/kappa) + 2 A^(1/kappa) F(p); the relation reads H(p) = a1 - (l1 + sigma)^2.
double H_of(const H0EConfig& c, double p)
{
    double k = c.params.kappa;
    return std::pow(p, -2 / k) / (c.S1 * c.S1) + 2 * std::pow(c.A, 1 / k) * F_of(k, p);
}

double dH_of(const H0EConfig& c, double p)
{
    double k = c.params.kappa;
    return -2 / k * std::pow(p, -2 / k - 1) / (c.S1 * c.S1) + 2 * std::pow(c.A, 1 / k) * std::pow(p, -1 / k);
}

double target(const H0EConfig& c, double sigma)
{
    double l = c.T1 - frame_of(c).g1 + sigma;
    return c.a1 - l * l;
}

struct Integrals {
    double I1 = 0, I2 = 0;
};

Integrals integrals(const H0EConfig& c, double sigma)
{
    double k = c.params.kappa;
    auto P = [&](double s) { return std::pow(h0e_pressure(c, s), 1 / k); };
    Integrals out;
    out.I1 = quad_simpson(P, 0, sigma, c.quad).value;
    out.I2 = quad_simpson([&](double s) { return s * P(s); }, 0, sigma, c.quad).value;
    return out;
}

double r1_relation(const H0EConfig& c, const SpacetimePoint& pt, double sigma, const Integrals& in, double r1)
{
    Frame f = frame_of(c);
    double y0 = c.Y0(r1), y1 = c.Y1(r1), y3 = c.Y3(r1);
    return -y1 * sigma - c.S1 * (y0 - c.c0 * y1 + c.T1 * y3) * in.I1 - c.S1 * y3 * in.I2 + y0 * pt.t
           + y1 * dot(c.c, pt.x) + y3 * dot(f.cxo, pt.x) - c.psi1(r1);
}

} // namespace

void validate(const H0EConfig& c)
{
    c.params.validate();
    const Vec3& om = c.params.omega;
    if (std::abs(norm(om) - 1) > 1e-12) detail::wave_reject(tag, "|Omega| must be 1");
    if (std::abs(norm(c.c) - 1) > 1e-12) detail::wave_reject(tag, "|c| must be 1");
    if (std::abs(dot(c.c, om)) > 1e-12) detail::wave_reject(tag, "c.Omega must be 0");
    if (c.S1 == 0) detail::wave_reject(tag, "S1 must be nonzero");
    if (!(c.A > 0)) detail::wave_reject(tag, "A must be positive");
    if (std::abs(frame_of(c).g3 - c.c0) > 1e-12 * std::max(1.0, norm(c.params.g)))
        detail::wave_reject(tag, "only g.(c x Omega) = c0 is supported");
    if (!c.Y0 || !c.Y1 || !c.Y3 || !c.V2 || !c.psi1) detail::wave_reject(tag, "missing Y0, Y1, Y3, V2 or psi1");
    if (!(c.p_bracket.lo > 0 && c.p_bracket.hi > c.p_bracket.lo)) detail::wave_reject(tag, "bad pressure bracket");
}

double h0e_sigma(const H0EConfig& c, const SpacetimePoint& pt) { return c.c0 * pt.t + dot(c.c, pt.x) + c.a0; }

double h0e_turning_pressure(const H0EConfig& c)
{
    double k = c.params.kappa;
    return std::pow(k * c.S1 * c.S1 * std::pow(c.A, 1 / k), -k / (k + 1));
}

double h0e_pressure_root(const H0EConfig& c, double sigma)
{
    double Z = target(c, sigma);
    double ps = h0e_turning_pressure(c);
    if (Z < H_of(c, ps)) detail::wave_reject(tag, "a1 - (l1 + sigma)^2 is below the minimum, no pressure");
    Interval r = c.branch == Sign::plus ? Interval{std::max(ps, c.p_bracket.lo), c.p_bracket.hi}
                                        : Interval{c.p_bracket.lo, std::min(ps, c.p_bracket.hi)};
    if (!(r.hi > r.lo)) detail::wave_reject(tag, "pressure bracket misses the branch");
    auto f = [&](double p) { return H_of(c, p) - Z; };
    auto df = [&](double p) { return dH_of(c, p); };
    return solve_unique(f, r, 64, true, 1e-16 * std::max(1.0, ps), df);
}

double h0e_pressure_closed(const H0EConfig& c, double sigma)
{
    if (!kappa_is(c.params.kappa, 3)) detail::wave_reject(tag, "closed-form pressure needs kappa = 3");
    double Z = target(c, sigma);
    double a3 = std::cbrt(c.A);
    double disc = Z * Z - 12 * a3 / (c.S1 * c.S1);
    if (disc < 0 || Z <= 0) detail::wave_reject(tag, "a1 - (l1 + sigma)^2 is below the minimum, no pressure");
    // Roots of 3 A^(1/3) X^2 - Z X + S1^-2 = 0 with X = p^(2/3); the small one from the product.
    double big = (Z + std::sqrt(disc)) / (6 * a3);
    double X = c.branch == Sign::plus ? big : 1 / (c.S1 * c.S1 * 3 * a3 * big);
    return X * std::sqrt(X);
}

double h0e_pressure(const H0EConfig& c, double sigma)
{
    if (c.closed_form && kappa_is(c.params.kappa, 3)) return h0e_pressure_closed(c, sigma);
    return h0e_pressure_root(c, sigma);
}

WaveSample h0e_eval(const H0EConfig& c, const SpacetimePoint& pt)
{
    double k = c.params.kappa;
    double sigma = h0e_sigma(c, pt);
    double p = h0e_pressure(c, sigma);
    double P = std::pow(p, 1 / k);
    Integrals in = integrals(c, sigma);
    auto R = [&](double r1) { return r1_relation(c, pt, sigma, in, r1); };
    double r1 = solve_unique(R, c.r1_bracket, 64, false, 1e-15);
    Frame f = frame_of(c);
    double v1 = 1 / (c.S1 * P) - c.c0;
    double v2 = c.V2(r1) + f.g2 * c.S1 * in.I1;
    double v3 = sigma + c.T1;
    Vec3 v = v1 * c.c + v2 * c.params.omega + v3 * f.cxo;
    return {FluidState(std::pow(p / c.A, 1 / k), p, v), {sigma, r1}};
}

RankTwoFrame h0e_frame(const H0EConfig& c, const SpacetimePoint& pt)
{
    WaveSample ws = h0e_eval(c, pt);
    double k = c.params.kappa;
    double sigma = ws.r.r0, r1 = ws.r.r1;
    double P = std::pow(ws.u.p(), 1 / k);
    double v1 = dot(ws.u.v(), c.c);
    SimpleElement e0 = hydrodynamic_inhom(ws.u, c.params, c.c, c.c0 + v1);

    // dr1 is proportional to the gradient of the relation at fixed r1.
    Frame f = frame_of(c);
    double y0 = c.Y0(r1), y1 = c.Y1(r1), y3 = c.Y3(r1);
    double dR = -y1 - c.S1 * (y0 - c.c0 * y1 + c.T1 * y3) * P - c.S1 * y3 * sigma * P;
    Vec3 grad = dR * c.c + y1 * c.c + y3 * f.cxo;
    Vec3 h1 = detail::diff(c.V2, r1) * c.params.omega;
    SimpleElement e1 = entropic_hom(ws.u, 0.0, h1, grad);
    return {e1.gamma.as_array(), e1.lam, e0.gamma.as_array(), e0.lam};
}

Field h0e_field(const H0EConfig& cfg)
{
    validate(cfg);
    return [cfg](const SpacetimePoint& pt) { return h0e_eval(cfg, pt).u.as_array(); };
}

} // namespace rinv
