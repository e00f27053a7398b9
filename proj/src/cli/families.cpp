#include <cmath>

#include "rinv/cli.hpp"
#include "rinv/states.hpp"

namespace rinv::cli {

namespace {

PhysParams physics(const Config& c, const PhysParams& fallback, bool kappa_required)
{
    double kappa = kappa_required ? c.num("kappa") : c.num_or("kappa", fallback.kappa);
    Vec3 g = c.vec3_or("g", fallback.g);
    Vec3 om = c.vec3_or("omega", fallback.omega);
    return PhysParams::make(kappa, g, om);
}

Profile profile(const Config& c, const std::string& key, const std::string& fallback = {})
{
    auto f = fallback.empty() ? function(c, key) : function_or(c, key, fallback);
    return {f.f, f.text};
}

StateRow state_row(const Config& c, StateKind kind)
{
    switch (kind) {
    case StateKind::E0_gdotO_nonzero:
    case StateKind::E0_gdotO_zero: {
        auto p = function(c, "p");
        Profile ph{p.f, p.text}, rh{p.df, p.text + "'"};
        if (c.has("rho_hat")) rh = profile(c, "rho_hat");
        if (kind == StateKind::E0_gdotO_nonzero) return E0Uniform{c.vec3_or("v0", {}), ph, rh};
        return E0Swirl{c.vec3_or("A", {}), ph, rh, profile(c, "nu")};
    }
    case StateKind::A0_lam_cross_O_nonzero: {
        A0Oblique r;
        r.eps = c.sign_or("eps", r.eps);
        r.c = c.vec3_or("c", r.c);
        r.b0 = c.num_or("b0", r.b0);
        r.rho0 = c.num_or("rho0", r.rho0);
        r.p0 = c.num_or("p0", r.p0);
        return r;
    }
    case StateKind::A0_lam_parallel_O: {
        A0Aligned r;
        r.eps = c.sign_or("eps", r.eps);
        r.eps1 = c.sign_or("eps1", r.eps1);
        r.rho0 = c.num_or("rho0", r.rho0);
        r.p0 = c.num_or("p0", r.p0);
        r.A1 = c.num_or("A1", r.A1);
        r.B1 = c.num_or("B1", r.B1);
        r.c0 = c.num_or("c0", r.c0);
        return r;
    }
    case StateKind::H0_row1: {
        H0Oblique r;
        r.c = c.vec3_or("c", r.c);
        r.A = c.num_or("A", r.A);
        r.a1 = c.num_or("a1", r.a1);
        r.b1 = c.num_or("b1", r.b1);
        r.T1 = c.num_or("T1", r.T1);
        r.c0 = c.num_or("c0", r.c0);
        r.rho0 = c.num_or("rho0", r.rho0);
        r.rho_bracket = c.interval_or("rho_bracket", r.rho_bracket);
        return r;
    }
    case StateKind::H0_row2: {
        H0Aligned r;
        r.eps1 = c.sign_or("eps1", r.eps1);
        r.rho0 = c.num_or("rho0", r.rho0);
        r.p0 = c.num_or("p0", r.p0);
        r.A1 = c.num_or("A1", r.A1);
        r.B0 = c.num_or("B0", r.B0);
        r.B1 = c.num_or("B1", r.B1);
        r.c0 = c.num_or("c0", r.c0);
        return r;
    }
    case StateKind::H0_row3: {
        H0Vertical r;
        r.eps1 = c.sign_or("eps1", r.eps1);
        r.eps2 = c.sign_or("eps2", r.eps2);
        r.branch = c.sign_or("branch", r.branch);
        r.A = c.num_or("A", r.A);
        r.A1 = c.num_or("A1", r.A1);
        r.B1 = c.num_or("B1", r.B1);
        r.c0 = c.num_or("c0", r.c0);
        r.K = c.num_or("K", r.K);
        r.r0_offset = c.num_or("r0_offset", r.r0_offset);
        return r;
    }
    }
    throw ConfigError("unknown state row");
}

FamilyModel state_family(const Config& c)
{
    StateKind kind = parse_state_kind(c.str("row"));
    PhysParams pp = physics(c, PhysParams{}, true);
    StateRow row = state_row(c, kind);
    auto f = std::make_shared<const StateField>(row, pp);
    FamilyModel m;
    m.name = "state:" + to_string(kind);
    m.params = pp;
    m.rank = 1;
    m.eval = [f](const SpacetimePoint& pt) { return WaveSample{f->eval(pt), {f->phase(pt), 0}}; };
    m.field = as_field(*f);
    WaveCovector l = f->covector();
    m.lam0 = [l](double, double) { return l; };
    return m;
}

FamilyModel e0e_family(const Config& c)
{
    E0EConfig e;
    e.m = c.num_or("m", e.m);
    e.p0 = c.num_or("p0", e.p0);
    e.rho0 = c.num_or("rho0", e.rho0);
    e.b = c.num_or("b", e.b);
    e.c = c.num_or("c", e.c);
    e.r01 = c.num_or("r01", e.r01);
    e.k = c.num_or("k", e.k);
    auto a = function_or(c, "a", "1");
    e.a_fn = a.f;
    e.a_dot = a.df;
    e.Omega1 = c.num_or("Omega1", e.Omega1);
    e.Omega2 = c.num_or("Omega2", e.Omega2);
    e.G = c.num_or("G", e.G);
    e.branch = c.sign_or("branch", e.branch);
    e.kappa = c.num_or("kappa", e.kappa);
    validate(e);

    FamilyModel m;
    m.name = "e0e";
    m.params = e0e_params(e);
    m.rank = 2;
    m.eval = [e](const SpacetimePoint& pt) { return e0e_eval(e, pt); };
    m.field = e0e_field(e);
    m.frame = [e](const SpacetimePoint& pt) { return e0e_frame(e, pt); };
    // r0 = G z; r1 - L - alpha(r1) z = 0 gives dr1 along (0, -Omega2, Omega1, alpha).
    m.lam0 = [G = e.G](double, double) { return WaveCovector{0, {0, 0, G}}; };
    m.lam1 = [e](double, double r1) {
        return WaveCovector{0, {-e.Omega2, e.Omega1, e.c * std::sqrt(r1 + e.r01)}};
    };
    return m;
}

FamilyModel e0a_family(const Config& c)
{
    E0AConfig e;
    e.A = c.num_or("A", e.A);
    e.A0 = c.num_or("A0", e.A0);
    e.F0 = c.num_or("F0", e.F0);
    e.B0 = c.num_or("B0", e.B0);
    e.c0 = c.num_or("c0", e.c0);
    e.c1 = c.num_or("c1", e.c1);
    e.K = c.num_or("K", e.K);
    e.eps = c.sign_or("eps", e.eps);
    e.eps1 = c.sign_or("eps1", e.eps1);
    e.eps2 = c.sign_or("eps2", e.eps2);
    e.params = physics(c, e.params, false);
    validate(e);

    FamilyModel m;
    m.name = "e0a";
    m.params = e.params;
    m.rank = 2;
    m.eval = [e](const SpacetimePoint& pt) { return e0a_eval(e, pt); };
    m.field = e0a_field(e);
    m.frame = [e](const SpacetimePoint& pt) { return e0a_frame(e, pt); };
    WaveCovector z = e0a_zeta_covector(e);
    m.lam0 = [z](double, double) { return z; };
    double sp = val(e.eps) * val(e.eps1) * std::sqrt(e.A);
    m.lam1 = [sp, e](double, double r1) { return WaveCovector{sp * (r1 + 1) + e.B0, e.params.omega}; };
    m.t_star = catastrophe_time(e);
    return m;
}

FamilyModel h0e_family(const Config& c)
{
    H0EConfig e;
    e.A = c.num_or("A", e.A);
    e.S1 = c.num_or("S1", e.S1);
    e.a0 = c.num_or("a0", e.a0);
    e.a1 = c.num_or("a1", e.a1);
    e.c0 = c.num_or("c0", e.c0);
    e.T1 = c.num_or("T1", e.T1);
    e.c = c.vec3_or("c", e.c);
    e.Y0 = function(c, "Y0").f;
    e.Y1 = function(c, "Y1").f;
    e.Y3 = function(c, "Y3").f;
    e.V2 = function(c, "V2").f;
    e.psi1 = function(c, "psi1").f;
    e.branch = c.sign_or("branch", e.branch);
    e.p_bracket = c.interval_or("p_bracket", e.p_bracket);
    e.r1_bracket = c.interval_or("r1_bracket", e.r1_bracket);
    e.closed_form = c.flag_or("closed_form", e.closed_form);
    e.params = physics(c, e.params, false);
    validate(e);

    FamilyModel m;
    m.name = "h0e";
    m.params = e.params;
    m.rank = 2;
    m.eval = [e](const SpacetimePoint& pt) { return h0e_eval(e, pt); };
    m.field = h0e_field(e);
    m.frame = [e](const SpacetimePoint& pt) { return h0e_frame(e, pt); };
    return m;
}

// Unit h(r) = cos(theta(r)) e1 + sin(theta(r)) e2 with (e1, e2, Omega/|Omega|) right handed.
std::function<Vec3(double)> rotating_h(Vec3 omega, Fn1 theta)
{
    double n = norm(omega);
    if (!(n > 0)) throw PreconditionError("h0a: Omega must be nonzero");
    Vec3 w = (1 / n) * omega;
    Vec3 a = std::abs(w.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 e1 = a - dot(a, w) * w;
    e1 = (1 / norm(e1)) * e1;
    Vec3 e2 = cross(w, e1);
    return [=](double r) {
        double th = theta(r);
        return std::cos(th) * e1 + std::sin(th) * e2;
    };
}

FamilyModel h0a_family(const Config& c)
{
    H0AConfig e;
    e.A = c.num_or("A", e.A);
    e.S = function(c, "S").f;
    e.f = function(c, "f").f;
    e.V3 = function(c, "V3").f;
    e.Psi = function(c, "Psi").f;
    auto v2 = function(c, "v2");
    e.v2 = v2.f;
    e.v2_dot = v2.df;
    e.v1 = parse_function2(c.str("v1")).f;
    e.params = physics(c, e.params, false);
    e.h = rotating_h(e.params.omega, function(c, "h_angle").f);
    e.seed = {c.num_or("seed.r0", 0), c.num_or("seed.r1", 0)};
    validate(e);

    FamilyModel m;
    m.name = "h0a";
    m.params = e.params;
    m.rank = 2;
    m.eval = [e](const SpacetimePoint& pt) { return h0a_eval(e, pt); };
    m.field = h0a_field(e);
    return m;
}

} // namespace

FamilyModel build_family(const Config& c)
{
    const std::string& f = c.str("family");
    if (f == "state") return state_family(c);
    if (f == "e0e") return e0e_family(c);
    if (f == "e0a") return e0a_family(c);
    if (f == "h0e") return h0e_family(c);
    if (f == "h0a") return h0a_family(c);
    throw ConfigError("unknown family '" + f + "' (state, e0e, e0a, h0e, h0a)");
}

} // namespace rinv::cli
