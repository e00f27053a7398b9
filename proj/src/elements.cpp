#include "rinv/elements.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rinv {

std::string to_string(Family f)
{
    switch (f) {
    case Family::E0: return "E0";
    case Family::A_plus0: return "A_plus0";
    case Family::A_minus0: return "A_minus0";
    case Family::H0: return "H0";
    case Family::E: return "E";
    case Family::A_plus: return "A_plus";
    case Family::A_minus: return "A_minus";
    }
    return "?";
}

std::string to_string(WaveType w)
{
    switch (w) {
    case WaveType::entropic: return "entropic";
    case WaveType::acoustic_plus: return "acoustic_plus";
    case WaveType::acoustic_minus: return "acoustic_minus";
    case WaveType::hydrodynamic: return "hydrodynamic";
    }
    return "?";
}

bool is_homogeneous(Family f) { return f == Family::E || f == Family::A_plus || f == Family::A_minus; }

namespace {

double sound2(const FluidState& u, const PhysParams& params) { return params.kappa * u.p() / u.rho(); }

void require_nonzero(const Vec3& lam, const char* what)
{
    if (!finite(lam) || norm2(lam) == 0) throw PreconditionError(std::string(what) + ": covector is zero");
}

// Removes a small component of a along unit(b); rejects a large one.
Vec3 project_orthogonal(Vec3 a, const Vec3& b, const char* what)
{
    double na = norm(a), nb = norm(b);
    if (na == 0 || nb == 0) return a;
    double d = dot(a, b);
    if (std::abs(d) <= projection_tol * na * nb) return a - (d / (nb * nb)) * b;
    std::ostringstream os;
    os << what << ": orthogonality constraint violated (relative violation " << std::abs(d) / (na * nb) << ")";
    throw PreconditionError(os.str());
}

} // namespace

double advection_speed(const FluidState& u, const WaveCovector& lam) { return lam.lam0 + dot(u.v(), lam.lam); }

Vec3 forcing(const FluidState& u, const PhysParams& params) { return params.g - cross(params.omega, u.v()); }

double characteristic_determinant(const FluidState& u, const WaveCovector& lam, const PhysParams& params)
{
    double d = advection_speed(u, lam);
    return d * d * d * (d * d - sound2(u, params) * norm2(lam.lam));
}

WaveType classify(const FluidState& u, const WaveCovector& lam, const PhysParams& params, double tol)
{
    if (lam.is_zero()) throw PreconditionError("classify: zero covector");
    double c = std::sqrt(sound2(u, params)) * norm(lam.lam);
    double d = advection_speed(u, lam);
    // a purely temporal covector has c = 0; fall back to its own size
    double scale = c > 0 ? c : std::abs(lam.lam0);
    if (std::abs(d) <= tol * scale) return WaveType::entropic;
    if (c > 0 && std::abs(d - c) <= tol * scale) return WaveType::acoustic_plus;
    if (c > 0 && std::abs(d + c) <= tol * scale) return WaveType::acoustic_minus;
    return WaveType::hydrodynamic;
}

SimpleElement entropic_inhom(const FluidState& u, const PhysParams& params, double gamma_rho, Vec3 h)
{
    Vec3 f = forcing(u, params);
    double fscale = std::max(norm(params.g), norm(cross(params.omega, u.v())));
    if (norm(f) <= 1e-14 * fscale || norm2(f) == 0)
        throw PreconditionError("entropic_inhom: g equals Omega x v, the forcing covector vanishes");
    h = project_orthogonal(h, f, "entropic_inhom (h . lambda = 0)");
    SimpleElement e{Family::E0, {gamma_rho, u.rho(), h}, {-dot(u.v(), f), f}, 0.0};
    return e;
}

SimpleElement acoustic_inhom(const FluidState& u, const PhysParams& params, Vec3 lam_vec, Sign eps, double gamma_rho)
{
    require_nonzero(lam_vec, "acoustic_inhom");
    Vec3 f = forcing(u, params);
    lam_vec = project_orthogonal(lam_vec, f, "acoustic_inhom ((g - Omega x v) . lambda = 0)");
    double s = sound2(u, params);
    double delta = val(eps) * std::sqrt(s) * norm(lam_vec);
    Vec3 gv = (f - (s * gamma_rho / u.rho()) * lam_vec) / delta;
    Family fam = eps == Sign::plus ? Family::A_plus0 : Family::A_minus0;
    return {fam, {gamma_rho, s * gamma_rho, gv}, {delta - dot(u.v(), lam_vec), lam_vec}, delta};
}

SimpleElement hydrodynamic_inhom(const FluidState& u, const PhysParams& params, Vec3 lam_vec, double delta)
{
    require_nonzero(lam_vec, "hydrodynamic_inhom");
    double s = sound2(u, params);
    double l2 = norm2(lam_vec);
    if (!std::isfinite(delta) || std::abs(delta) <= projection_tol * std::sqrt(s * l2))
        throw PreconditionError("hydrodynamic_inhom: delta is entropic (zero), denominator singular");
    double denom = u.rho() * delta * delta - params.kappa * u.p() * l2;
    if (std::abs(denom) < projection_tol * params.kappa * u.p() * l2)
        throw PreconditionError("hydrodynamic_inhom: delta is acoustic, denominator rho delta^2 - kappa p |lam|^2 vanishes");
    Vec3 f = forcing(u, params);
    double grho = -u.rho() * u.rho() * dot(f, lam_vec) / denom;
    Vec3 gv = (f - (s * grho / u.rho()) * lam_vec) / delta;
    return {Family::H0, {grho, s * grho, gv}, {delta - dot(u.v(), lam_vec), lam_vec}, delta};
}

SimpleElement entropic_hom(const FluidState& u, double gamma_rho, Vec3 h, Vec3 lam_vec)
{
    require_nonzero(lam_vec, "entropic_hom");
    h = project_orthogonal(h, lam_vec, "entropic_hom (h . lambda = 0)");
    return {Family::E, {gamma_rho, 0.0, h}, {-dot(u.v(), lam_vec), lam_vec}, 0.0};
}

SimpleElement acoustic_hom(const FluidState& u, const PhysParams& params, Vec3 lam_vec, Sign eps, double gamma_rho)
{
    require_nonzero(lam_vec, "acoustic_hom");
    double s = sound2(u, params);
    double n = norm(lam_vec);
    double e = val(eps);
    Vec3 gv = (-e * std::sqrt(s) * gamma_rho / u.rho() / n) * lam_vec;
    double delta = e * n * std::sqrt(s);
    Family fam = eps == Sign::plus ? Family::A_plus : Family::A_minus;
    return {fam, {gamma_rho, s * gamma_rho, gv}, {delta - dot(u.v(), lam_vec), lam_vec}, delta};
}

double ElementResidual::max_abs() const
{
    return std::max({std::abs(momentum.x), std::abs(momentum.y), std::abs(momentum.z), std::abs(continuity),
                     std::abs(entropy)});
}

ElementResidual verify_element(const FluidState& u, const SimpleElement& e, const PhysParams& params)
{
    const double rho = u.rho(), p = u.p(), kap = params.kappa;
    const Gamma& g = e.gamma;
    const Vec3& lam = e.lam.lam;
    double d = advection_speed(u, e.lam);
    Vec3 rhs = is_homogeneous(e.family) ? Vec3{} : rho * forcing(u, params);

    Vec3 a = (rho * d) * g.v;
    Vec3 b = g.p * lam;
    ElementResidual r;
    r.momentum = a + b - rhs;
    double c1 = d * g.rho, c2 = rho * dot(g.v, lam);
    r.continuity = c1 + c2;
    double s1 = d * rho * g.p, s2 = d * kap * p * g.rho;
    r.entropy = s1 - s2;
    r.scale = std::max({1.0, norm(a), norm(b), norm(rhs), std::abs(c1), std::abs(c2), std::abs(s1), std::abs(s2)});
    return r;
}

} // namespace rinv
