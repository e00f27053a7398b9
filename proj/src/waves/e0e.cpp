#include <cmath>

#include "common.hpp"
#include "rinv/elements.hpp"
#include "rinv/special.hpp"
#include "rinv/waves.hpp"

namespace rinv {

namespace {

constexpr const char* tag = "e0e";

double L_of(const E0EConfig& c, const SpacetimePoint& pt) { return -c.Omega2 * pt.x.x + c.Omega1 * pt.x.y; }

double cn_factor(const E0EConfig& c, double r0)
{
    return jacobi_cn(1 / (1 + std::cosh(std::atan(c.b * r0))), c.k * c.k);
}

Vec3 direction(const E0EConfig& c) { return {1, c.Omega2 / c.Omega1, 0}; }

double a_dot(const E0EConfig& c, double r1) { return c.a_dot ? c.a_dot(r1) : detail::diff(c.a_fn, r1); }

} // namespace

PhysParams e0e_params(const E0EConfig& cfg) { return PhysParams::make(cfg.kappa, {0, 0, cfg.G}, {cfg.Omega1, cfg.Omega2, 0}); }

void validate(const E0EConfig& c)
{
    if (!(c.k > 0 && c.k < 1)) detail::wave_reject(tag, "modulus k must lie in (0, 1)");
    if (c.Omega1 == 0) detail::wave_reject(tag, "Omega1 must be nonzero");
    if (c.m == 0) detail::wave_reject(tag, "m must be nonzero");
    if (!(c.rho0 > 0)) detail::wave_reject(tag, "rho0 must be positive");
    if (c.G == 0) detail::wave_reject(tag, "G must be nonzero");
    if (!c.a_fn) detail::wave_reject(tag, "missing a(r1)");
    for (double v : {c.m, c.p0, c.rho0, c.b, c.c, c.r01, c.Omega1, c.Omega2, c.G})
        if (!std::isfinite(v)) detail::wave_reject(tag, "non-finite parameter");
}

double e0e_r1(const E0EConfig& c, const SpacetimePoint& pt)
{
    double L = L_of(c, pt), z = pt.x.z;
    double q = c.c * c.c * z * z / 4 + L + c.r01;
    if (q < 0) detail::wave_reject(tag, "c^2 z^2/4 + L + r01 < 0, no real r1");
    double sq = std::sqrt(q);
    double s = c.c * z / 2 + val(c.branch) * sq; // sqrt(r1 + r01)
    if (s < 0) detail::wave_reject(tag, "branch gives sqrt(r1 + r01) < 0");
    return L + c.c * c.c * z * z / 2 + val(c.branch) * c.c * z * sq;
}

double e0e_r1_root(const E0EConfig& c, const SpacetimePoint& pt)
{
    double L = L_of(c, pt), z = pt.x.z;
    auto g = [&](double r) { return r - L - c.c * z * std::sqrt(std::max(0.0, r + c.r01)); };
    // In s = sqrt(r1 + r01) the relation is quadratic with its vertex at s = c z/2.
    double s_mid = std::max(0.0, c.c * z / 2);
    double s_far = std::abs(c.c * z) + std::sqrt(std::abs(L + c.r01)) + 1;
    Interval br = c.branch == Sign::plus ? Interval{s_mid * s_mid - c.r01, s_far * s_far - c.r01}
                                         : Interval{-c.r01, s_mid * s_mid - c.r01};
    double glo = g(br.lo), ghi = g(br.hi);
    if (glo == 0) return br.lo;
    if (ghi == 0) return br.hi;
    if ((glo < 0) == (ghi < 0)) detail::wave_reject(tag, "no root of r1 - L - alpha(r1) z on this branch");
    return solve_scalar({g, br, 1e-15, 1e-16, 300, {}});
}

State5 e0e_state(const E0EConfig& c, double r0, double r1)
{
    double mr = c.m * r0;
    double rho = c.rho0 / std::cosh(mr);
    double p = c.rho0 / c.m * std::atan(std::sinh(mr)) + c.p0;
    Vec3 v = (c.a_fn(r1) * cn_factor(c, r0)) * direction(c);
    return {rho, p, v.x, v.y, v.z};
}

WaveSample e0e_eval(const E0EConfig& c, const SpacetimePoint& pt)
{
    validate(c);
    RiemannPair r{c.G * pt.x.z, e0e_r1(c, pt)};
    State5 s = e0e_state(c, r.r0, r.r1);
    return {FluidState(s[0], s[1], {s[2], s[3], s[4]}), r};
}

RankTwoFrame e0e_frame(const E0EConfig& c, const SpacetimePoint& pt)
{
    WaveSample w = e0e_eval(c, pt);
    PhysParams pp = e0e_params(c);
    double r0 = w.r.r0, r1 = w.r.r1;
    double drho = -c.rho0 * c.m * std::sinh(c.m * r0) / std::pow(std::cosh(c.m * r0), 2);
    double dcn = detail::diff([&](double s) { return cn_factor(c, s); }, r0);
    Vec3 h0 = (c.a_fn(r1) * dcn) * direction(c);
    SimpleElement e0 = entropic_inhom(w.u, pp, drho, h0);

    double s = std::sqrt(r1 + c.r01);
    Vec3 h1 = (a_dot(c, r1) * cn_factor(c, r0)) * direction(c);
    SimpleElement e1 = entropic_hom(w.u, 0.0, h1, {-c.Omega2, c.Omega1, c.c * s});
    return {e1.gamma.as_array(), e1.lam, e0.gamma.as_array(), e0.lam};
}

Field e0e_field(const E0EConfig& cfg)
{
    validate(cfg);
    return [cfg](const SpacetimePoint& pt) { return e0e_eval(cfg, pt).u.as_array(); };
}

} // namespace rinv
