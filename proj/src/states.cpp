#include <cmath>
#include <limits>

#include "rinv/states.hpp"

namespace rinv {

namespace {

constexpr double tight = 1e-12;

[[noreturn]] void reject(const std::string& what) { throw PreconditionError("state: " + what); }

void need_profile(const Profile& p, const char* name)
{
    if (!p.f) reject(std::string("missing profile ") + name);
}

bool kappa_is_one(double kappa) { return std::abs(kappa - 1) <= 1e-12; }

// Orthonormal frame check shared by the oblique rows.
void need_unit_normal(const Vec3& c, const Vec3& om)
{
    if (std::abs(norm(c) - 1) > tight) reject("|c| must be 1");
    if (std::abs(dot(c, om)) > tight * std::max(1.0, norm(om))) reject("c.Omega must be 0");
}

void need_g_perp_omega(const PhysParams& pp)
{
    if (std::abs(dot(pp.g, pp.omega)) > tight * std::max(1.0, norm(pp.g) * norm(pp.omega)))
        reject("g.Omega must be 0");
}

void need_g_not_perp_omega(const PhysParams& pp)
{
    if (std::abs(dot(pp.g, pp.omega)) <= tight * norm(pp.g) * norm(pp.omega) || norm(pp.omega) == 0)
        reject("g.Omega must be nonzero");
}

// Hydrodynamic oblique row: r0(rho) = Int_rho0^rho N/y, y = sgn sqrt(Y).
struct Oblique {
    const H0Oblique& c;
    double kappa, g1, g3;
    double rk = std::pow(c.rho0, kappa);

    double N(double s) const { return N_of(s, std::pow(s, kappa)); }

    // sk = s^kappa, shared by N and Y.
    double N_of(double s, double sk) const { return 1 / (c.a1 * c.a1 * s * s * s) - kappa * c.A * sk / (s * s); }

    double Y_of(double s, double sk) const
    {
        double a1 = c.a1, r = c.rho0, A = c.A;
        double d = c.T1 - g1;
        double mid = kappa_is_one(kappa) ? 2 * A * std::log(s / r) : 2 * kappa * A / (kappa - 1) * (sk / s - rk / r);
        return d * d - (1 / (s * s) - 1 / (r * r)) / (a1 * a1) - mid
               - 2 * (g3 - c.c0) * ((1 / s - 1 / r) / a1 + a1 * A * (sk - rk));
    }
    double Y(double s) const { return Y_of(s, std::pow(s, kappa)); }

    double y_of(double s, double sk) const
    {
        double Yv = Y_of(s, sk);
        if (!(Yv > 0)) throw SolverError("state: turning point of the implicit density relation reached");
        return std::copysign(std::sqrt(Yv), c.T1 - g1);
    }
    double y(double s) const { return y_of(s, std::pow(s, kappa)); }

    // dr0/drho
    double slope(double s) const
    {
        double sk = std::pow(s, kappa);
        return N_of(s, sk) / y_of(s, sk);
    }

    double r0_of(double rho) const
    {
        QuadOptions q{1e-14, 1e-13, 1L << 16};
        return quad_gk([&](double s) { return slope(s); }, c.rho0, rho, q).value;
    }

    double mass(double rho) const
    {
        QuadOptions q{1e-14, 1e-13, 1L << 16};
        return quad_gk([&](double s) { return s * slope(s); }, c.rho0, rho, q).value;
    }
};

// Vertical row: Phi(rho) = eps1 eps2 |g| (r0 - offset).
struct Vertical {
    const H0Vertical& c;
    double kappa;

    double Phi(double s) const
    {
        double k2 = c.K * c.K / (2 * s * s);
        if (kappa_is_one(kappa)) return c.A * std::log(s) + k2;
        return kappa * c.A / (kappa - 1) * std::pow(s, kappa - 1) + k2;
    }
    double dPhi(double s) const { return kappa * c.A * std::pow(s, kappa - 2) - c.K * c.K / (s * s * s); }
    double sonic() const { return std::pow(c.K * c.K / (kappa * c.A), 1 / (kappa + 1)); }
};

} // namespace

ExpProfiles exp_profiles(double p0, double alpha)
{
    ExpProfiles e;
    e.p = {[=](double r) { return p0 * std::exp(alpha * r); }, "exp"};
    e.rho_hat = {[=](double r) { return alpha * p0 * std::exp(alpha * r); }, "exp'"};
    return e;
}

std::string to_string(StateKind k)
{
    switch (k) {
    case StateKind::E0_gdotO_nonzero: return "E0_gdotO_nonzero";
    case StateKind::E0_gdotO_zero: return "E0_gdotO_zero";
    case StateKind::A0_lam_cross_O_nonzero: return "A0_lam_cross_O_nonzero";
    case StateKind::A0_lam_parallel_O: return "A0_lam_parallel_O";
    case StateKind::H0_row1: return "H0_row1";
    case StateKind::H0_row2: return "H0_row2";
    case StateKind::H0_row3: return "H0_row3";
    }
    return "?";
}

StateKind parse_state_kind(const std::string& s)
{
    for (int i = 0; i <= static_cast<int>(StateKind::H0_row3); ++i)
        if (to_string(static_cast<StateKind>(i)) == s) return static_cast<StateKind>(i);
    throw ConfigError("unknown state row '" + s + "'");
}

StateField::StateField(StateRow row, PhysParams params) : row_(std::move(row)), params_(params)
{
    params_.validate();
    const Vec3& g = params_.g;
    const Vec3& om = params_.omega;
    double w = norm(om);

    std::visit(
        [&](auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, E0Uniform>) {
                need_profile(r.p, "p");
                need_profile(r.rho_hat, "rho_hat");
                Vec3 F = g - cross(om, r.v0);
                if (norm(F) <= tight * std::max(1.0, norm(g))) reject("g must differ from Omega x v0");
                lam_ = {-dot(r.v0, g), F};
            } else if constexpr (std::is_same_v<T, E0Swirl>) {
                need_profile(r.p, "p");
                need_profile(r.rho_hat, "rho_hat");
                need_profile(r.nu, "nu");
                need_g_perp_omega(params_);
                if (std::abs(dot(r.A, om)) > tight * std::max(1.0, norm(r.A) * w)) reject("A.Omega must be 0");
                Vec3 F = g - cross(om, r.A);
                if (norm(F) <= tight * std::max(1.0, norm(g))) reject("g must differ from Omega x A");
                lam_ = {-dot(r.A, g), F};
            } else if constexpr (std::is_same_v<T, A0Oblique>) {
                need_unit_normal(r.c, om);
                need_g_not_perp_omega(params_);
                if (!(r.rho0 > 0 && r.p0 > 0)) reject("rho0, p0 must be positive");
                double a = std::sqrt(params_.kappa * r.p0 / r.rho0);
                double alpha = dot(g, cross(om, r.c)) / (w * w);
                lam_ = {val(r.eps) * a - alpha, r.c};
            } else if constexpr (std::is_same_v<T, A0Aligned>) {
                if (w == 0) reject("Omega must be nonzero");
                need_g_perp_omega(params_);
                if (!(r.rho0 > 0 && r.p0 > 0)) reject("rho0, p0 must be positive");
                if (r.A1 == 0) reject("A1 must be nonzero");
                lam_ = {r.c0, (val(r.eps1) / w) * om};
            } else if constexpr (std::is_same_v<T, H0Oblique>) {
                if (std::abs(w - 1) > tight) reject("|Omega| must be 1");
                need_unit_normal(r.c, om);
                need_g_not_perp_omega(params_);
                if (!(r.A > 0)) reject("A must be positive");
                if (r.a1 == 0) reject("a1 must be nonzero");
                if (!(r.rho0 > 0)) reject("rho0 must be positive");
                if (r.T1 == dot(g, r.c)) reject("T1 = g.c puts the relation at a turning point");
                const Interval& b = r.rho_bracket;
                if (!(b.lo > 0 && b.lo < b.hi && b.contains(r.rho0))) reject("rho_bracket must contain rho0 and be positive");
                double k = params_.kappa;
                double sonic = std::pow(1 / (k * r.A * r.a1 * r.a1), 1 / (k + 1));
                if (sonic >= b.lo && sonic <= b.hi) reject("rho_bracket contains the sonic density");
                Oblique o{r, k, dot(g, r.c), dot(g, cross(r.c, om))};
                for (int i = 0; i <= 256; ++i) {
                    double s = b.lo + (b.hi - b.lo) * i / 256.0;
                    if (!(o.Y(s) > 0)) reject("rho_bracket reaches a turning point of the density relation");
                }
                lam_ = {r.c0, r.c};
                double Ra = o.r0_of(b.lo), Rb = o.r0_of(b.hi);
                r0_reach_ = {std::min(Ra, Rb), std::max(Ra, Rb)};
            } else if constexpr (std::is_same_v<T, H0Aligned>) {
                if (w == 0) reject("Omega must be nonzero");
                need_g_perp_omega(params_);
                if (!(r.rho0 > 0 && r.p0 > 0)) reject("rho0, p0 must be positive");
                if (r.A1 == 0) reject("A1 must be nonzero");
                if (std::abs(r.c0 + val(r.eps1) * r.B0 * w) <= tight * std::max(1.0, std::abs(r.c0)))
                    reject("B0 must differ from -eps1 c0");
                lam_ = {r.c0, (val(r.eps1) / w) * om};
            } else if constexpr (std::is_same_v<T, H0Vertical>) {
                if (om.x != 0 || om.y != 0 || std::abs(om.z - 1) > tight) reject("Omega must be e3");
                double G = norm(g);
                if (G == 0 || std::abs(g.x) > tight * G || std::abs(g.y) > tight * G)
                    reject("g must be parallel to e3");
                if ((g.z > 0) != (r.eps2 == Sign::plus)) reject("eps2 must equal the sign of g3");
                if (!(r.A > 0)) reject("A must be positive");
                if (r.K == 0) reject("K must be nonzero");
                lam_ = {r.c0, {0, 0, val(r.eps1)}};
            }
        },
        row_);
}

StateKind StateField::kind() const { return static_cast<StateKind>(row_.index()); }

double StateField::density(double r0) const
{
    double k = params_.kappa;
    if (auto* r = std::get_if<H0Oblique>(&row_)) {
        Oblique o{*r, k, dot(params_.g, r->c), dot(params_.g, cross(r->c, params_.omega))};
        if (r0 < r0_reach_.lo || r0 > r0_reach_.hi)
            throw SolverError("state: r0 = " + std::to_string(r0) + " not bracketed by rho_bracket");
        // r0(rho) is monotone on the bracket. Newton from the linearisation at rho0,
        // integrating only the increment of each step, bisection when a step leaves the bracket.
        double lo = r->rho_bracket.lo, hi = r->rho_bracket.hi;
        bool increasing = o.N(r->rho0) / o.y(r->rho0) > 0;
        double x = r->rho0, R = 0;
        QuadOptions q{1e-15, 1e-14, 1L << 16};
        auto dR = [&](double s) { return o.slope(s); };
        for (int it = 0; it < 100; ++it) {
            double f = R - r0;
            if (f == 0) return x;
            if ((f < 0) == increasing)
                lo = x;
            else
                hi = x;
            double xn = x - f / dR(x);
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            if (std::abs(xn - x) <= 1e-15 * x) return xn;
            R += quad_gk(dR, x, xn, q).value;
            x = xn;
        }
        throw SolverError("state: density iteration did not converge");
    }
    if (auto* r = std::get_if<H0Vertical>(&row_)) {
        Vertical v{*r, k};
        double target = val(r->eps1) * val(r->eps2) * norm(params_.g) * (r0 - r->r0_offset);
        double rs = v.sonic();
        if (target < v.Phi(rs)) throw SolverError("state: r0 below the sonic extremum, no density");
        double far = rs;
        for (int i = 0;; ++i) {
            far = r->branch == Sign::plus ? far * 2 : far / 2;
            if (v.Phi(far) >= target) break;
            if (i > 200 || !std::isfinite(far) || far == 0) throw SolverError("state: density root not bracketed");
        }
        ScalarProblem p;
        p.f = [&](double s) { return v.Phi(s) - target; };
        p.df = [&](double s) { return v.dPhi(s); };
        p.bracket = {std::min(rs, far), std::max(rs, far)};
        p.tol_abs = 0;
        return solve_scalar(p);
    }
    throw PreconditionError("state: density() is only defined for implicit rows");
}

double StateField::phase_of_density(double rho) const
{
    if (auto* r = std::get_if<H0Oblique>(&row_)) {
        Oblique o{*r, params_.kappa, dot(params_.g, r->c), dot(params_.g, cross(r->c, params_.omega))};
        return o.r0_of(rho);
    }
    if (auto* r = std::get_if<H0Vertical>(&row_)) {
        Vertical v{*r, params_.kappa};
        return r->r0_offset + val(r->eps1) * val(r->eps2) * v.Phi(rho) / norm(params_.g);
    }
    throw PreconditionError("state: phase_of_density() is only defined for implicit rows");
}

State5 StateField::profile(double r0) const
{
    const Vec3& g = params_.g;
    const Vec3& om = params_.omega;
    double w = norm(om);
    double k = params_.kappa;

    auto pack = [](double rho, double p, const Vec3& v) { return State5{rho, p, v.x, v.y, v.z}; };

    return std::visit(
        [&](const auto& r) -> State5 {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, E0Uniform>) {
                return pack(r.rho_hat.f(r0), r.p.f(r0), r.v0);
            } else if constexpr (std::is_same_v<T, E0Swirl>) {
                return pack(r.rho_hat.f(r0), r.p.f(r0), r.nu.f(r0) * om + r.A);
            } else if constexpr (std::is_same_v<T, A0Oblique>) {
                double a = std::sqrt(k * r.p0 / r.rho0);
                double alpha = dot(g, cross(om, r.c)) / (w * w);
                double gam = dot(g, r.c) / (w * w);
                double beta = val(r.eps) / a * dot(g, om) / (w * w) * r0 + r.b0;
                return pack(r.rho0, r.p0, alpha * r.c + beta * om + gam * cross(r.c, om));
            } else if constexpr (std::is_same_v<T, A0Aligned>) {
                double a = std::sqrt(k * r.p0 / r.rho0);
                double th = -val(r.eps) * w * r0 / a + r.B1;
                Vec3 v = (r.A1 / w * std::cos(th)) * g + (val(r.eps1) * (val(r.eps) * a - r.c0) / w) * om
                         + ((1 - r.A1 * std::sin(th)) / (w * w)) * cross(g, om);
                return pack(r.rho0, r.p0, v);
            } else if constexpr (std::is_same_v<T, H0Oblique>) {
                Vec3 cw = cross(r.c, om);
                Oblique o{r, k, dot(g, r.c), dot(g, cw)};
                double rho = density(r0);
                double I = o.mass(rho);
                double v1 = 1 / (r.a1 * rho) - r.c0;
                double v2 = dot(g, om) * r.a1 * I + r.b1;
                double v3 = o.g1 + o.y(rho);
                return pack(rho, r.A * std::pow(rho, k), v1 * r.c + v2 * om + v3 * cw);
            } else if constexpr (std::is_same_v<T, H0Aligned>) {
                double e1 = val(r.eps1);
                double th = r.B1 - w * r0 / (r.c0 + e1 * r.B0 * w);
                Vec3 v = (r.A1 / w * std::cos(th)) * g + r.B0 * om + ((1 - r.A1 * std::sin(th)) / (w * w)) * cross(g, om);
                return pack(r.rho0, r.p0, v);
            } else {
                static_assert(std::is_same_v<T, H0Vertical>);
                double rho = density(r0);
                double e12 = val(r.eps1) * val(r.eps2);
                double th = r.B1 + e12 / (norm(g) * r.K) * (r.A * std::pow(rho, k) + r.K * r.K / rho);
                Vec3 v{r.A1 * std::cos(th), -r.A1 * std::sin(th), val(r.eps1) * (r.K / rho - r.c0)};
                return pack(rho, r.A * std::pow(rho, k), v);
            }
        },
        row_);
}

State5 StateField::profile_derivative(double r0, double h) const
{
    State5 a = profile(r0 + h), b = profile(r0 - h), d;
    for (int i = 0; i < 5; ++i) d[i] = (a[i] - b[i]) / (2 * h);
    return d;
}

FluidState StateField::eval(const SpacetimePoint& pt) const
{
    State5 u = profile(phase(pt));
    return FluidState(u[0], u[1], {u[2], u[3], u[4]});
}

FluidState eval_state(const StateField& f, const SpacetimePoint& pt) { return f.eval(pt); }

Field as_field(const StateField& f)
{
    return [f](const SpacetimePoint& pt) { return f.eval(pt).as_array(); };
}

ResidualReport state_residual(const StateField& f, const Grid4& grid, double h, bool order)
{
    return order ? euler_residual_order(as_field(f), grid, f.params(), h) : euler_residual(as_field(f), grid, f.params(), h);
}

} // namespace rinv
