#include <cmath>

#include "common.hpp"
#include "rinv/waves.hpp"

namespace rinv {

namespace {

constexpr const char* tag = "h0a";

struct Candidate {
    const H0AConfig& c;
    double g2 = dot(c.params.g, c.params.omega);

    double step(double r) const { return c.fd_step * std::max(1.0, std::abs(r)); }

    Vec3 h(double r1) const
    {
        Vec3 v = c.h(r1);
        if (std::abs(norm(v) - 1) > 1e-10) detail::wave_reject(tag, "|h| must be 1");
        if (std::abs(dot(v, c.params.omega)) > 1e-10) detail::wave_reject(tag, "h.Omega must be 0");
        return v;
    }
    Vec3 h_dot(double r1) const
    {
        double e = step(r1);
        return (c.h(r1 + e) - c.h(r1 - e)) / (2 * e);
    }
    double v2_dot(double r0) const { return c.v2_dot ? c.v2_dot(r0) : detail::diff(c.v2, r0, c.fd_step); }
    double v1_r1(double r0, double r1) const
    {
        double e = step(r1);
        return (c.v1(r0, r1 + e) - c.v1(r0, r1 - e)) / (2 * e);
    }
    double g1(double r1) const { return dot(c.params.g, h(r1)); }
    double g3(double r1) const { return dot(c.params.g, cross(h(r1), c.params.omega)); }

    // The f terms cancel: (g3 - f) dv2 + f dv2 = g3 dv2.
    double v3(double r0, double r1) const
    {
        double in = quad_simpson([&](double s) { return v2_dot(s) * c.v1(s, r1); }, 0, r0, c.quad).value;
        return (g3(r1) * (c.v2(r0) - c.v2(0)) + in) / g2 + c.V3(r1);
    }
    double rho(double r0, double r1) const { return c.S(r1) / (c.v1(r0, r1) + c.f(r1)); }
};

} // namespace

void validate(const H0AConfig& c)
{
    c.params.validate();
    if (std::abs(norm(c.params.omega) - 1) > 1e-12) detail::wave_reject(tag, "|Omega| must be 1");
    if (dot(c.params.g, c.params.omega) == 0) detail::wave_reject(tag, "g.Omega must be nonzero");
    if (!(c.A > 0)) detail::wave_reject(tag, "A must be positive");
    if (!c.S || !c.f || !c.V3 || !c.Psi || !c.v2 || !c.v1 || !c.h)
        detail::wave_reject(tag, "missing candidate function");
    if (!(c.fd_step > 0)) detail::wave_reject(tag, "fd_step must be positive");
}

H0AState h0a_state(const H0AConfig& c, double r0, double r1)
{
    Candidate k{c};
    H0AState s;
    s.v1 = c.v1(r0, r1);
    double den = s.v1 + c.f(r1);
    if (den == 0) detail::wave_reject(tag, "v1 + f vanishes");
    s.rho = c.S(r1) / den;
    if (!(s.rho > 0)) detail::wave_reject(tag, "S/(v1 + f) must be positive");
    s.p = c.A * std::pow(s.rho, c.params.kappa);
    s.v2 = c.v2(r0);
    s.v3 = k.v3(r0, r1);
    Vec3 h = k.h(r1);
    s.v = s.v1 * h + s.v2 * c.params.omega + s.v3 * cross(h, c.params.omega);
    return s;
}

double H0AResidualReport::max_abs() const
{
    double m = 0;
    for (const auto& c : conditions) m = std::max(m, c.max_abs);
    return m;
}

H0AResidualReport h0a_residual(const H0AConfig& c, const RGrid& grid)
{
    validate(c);
    Candidate k{c};
    const double kap = c.params.kappa, A = c.A;
    H0AResidualReport rep;
    rep.conditions[0].name = "direction";
    rep.conditions[1].name = "product";
    rep.conditions[2].name = "magnitude";
    rep.conditions[3].name = "state";
    std::array<double, 4> sq{};
    double wave = 0, scale = 1;

    auto at = [](const Interval& iv, std::size_t i, std::size_t n) {
        return n <= 1 ? iv.lo : iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    for (std::size_t i = 0; i < grid.n0; ++i) {
        for (std::size_t j = 0; j < grid.n1; ++j) {
            double r0 = at(grid.r0, i, grid.n0), r1 = at(grid.r1, j, grid.n1);
            double e0 = k.step(r0), e1 = k.step(r1);
            double v1 = c.v1(r0, r1), f = c.f(r1), S = c.S(r1);
            double v1r = k.v1_r1(r0, r1), fd = detail::diff(c.f, r1, c.fd_step);
            double rho = S / (v1 + f);
            double rho_r1 = (k.rho(r0, r1 + e1) - k.rho(r0, r1 - e1)) / (2 * e1);
            double rho_r0 = (k.rho(r0 + e0, r1) - k.rho(r0 - e0, r1)) / (2 * e0);
            double v3 = k.v3(r0, r1);
            double v3r = (k.v3(r0, r1 + e1) - k.v3(r0, r1 - e1)) / (2 * e1);
            Vec3 h = k.h(r1);
            double q = dot(k.h_dot(r1), cross(h, c.params.omega));
            double a = v1r - q * v3, b = v3r + q * v1;
            std::array<double, 4> res{
                q * (v1 + f) * a + (v1r + fd) * b,
                a * b - q * kap * A * std::pow(rho, kap - 2) * rho_r1,
                std::hypot(a, b) - std::sqrt(kap * A) * std::pow(rho, (kap - 3) / 2) * std::abs(rho_r1),
                rho_r0 + S * k.v2_dot(r0) * (k.g1(r1) - v3)
                             / (k.g2 * ((f + v1) * (f + v1) - kap * A * std::pow(rho, kap - 1))),
            };
            for (int n = 0; n < 4; ++n) {
                rep.conditions[n].max_abs = std::max(rep.conditions[n].max_abs, std::abs(res[n]));
                sq[n] += res[n] * res[n];
            }
            wave = std::max({wave, std::abs(a), std::abs(b), std::abs(rho_r1)});
            scale = std::max({scale, std::abs(v1), std::abs(v3), rho});
            ++rep.points;
        }
    }
    for (int n = 0; n < 4; ++n) rep.conditions[n].l2 = std::sqrt(sq[n]);
    rep.degenerate = wave <= 1e-8 * scale;
    return rep;
}

AlphaNonzeroSpec h0a_invariant_spec(const H0AConfig& c)
{
    validate(c);
    AlphaNonzeroSpec s;
    s.lam = [c](double r1) { return WaveCovector{c.f(r1), c.h(r1)}; };
    s.lam_dot = [c](double r1) {
        Candidate k{c};
        return WaveCovector{detail::diff(c.f, r1, c.fd_step), k.h_dot(r1)};
    };
    s.phi = [c](double r0, double r1) {
        Candidate k{c};
        double e = k.v2_dot(r0) * (c.f(r1) + c.v1(r0, r1)) / k.g2;
        if (!(e > 0)) detail::wave_reject(tag, "v2' (f + v1)/g2 must be positive");
        return -std::log(e);
    };
    s.phi_r1 = [c](double r0, double r1) {
        Candidate k{c};
        return -(k.v1_r1(r0, r1) + detail::diff(c.f, r1, c.fd_step)) / (c.f(r1) + c.v1(r0, r1));
    };
    s.Phi = c.Psi;
    s.Phi_dot = [c](double r1) { return detail::diff(c.Psi, r1, c.fd_step); };
    s.base = 0;
    return s;
}

WaveSample h0a_eval(const H0AConfig& c, const SpacetimePoint& pt)
{
    RiemannPair r = alpha_nonzero_invariants(h0a_invariant_spec(c), pt, c.seed);
    H0AState s = h0a_state(c, r.r0, r.r1);
    return {FluidState(s.rho, s.p, s.v), r};
}

Field h0a_field(const H0AConfig& cfg)
{
    validate(cfg);
    return [cfg](const SpacetimePoint& pt) { return h0a_eval(cfg, pt).u.as_array(); };
}

} // namespace rinv
