#pragma once

#include <string>
#include <variant>

#include "rinv/solver.hpp"
#include "rinv/types.hpp"
#include "rinv/verify.hpp"

namespace rinv {

// Free profile of r0 for the entropic states.
struct Profile {
    Fn1 f;
    std::string label = "custom";
};

// p(r0) = p0 exp(alpha r0) together with rho_hat = dp/dr0.
struct ExpProfiles {
    Profile p, rho_hat;
};
ExpProfiles exp_profiles(double p0, double alpha);

// Entropic state, constant velocity v0.
struct E0Uniform {
    Vec3 v0{};
    Profile p, rho_hat;
};

// Entropic state, g.Omega = 0, velocity nu(r0) Omega + A.
struct E0Swirl {
    Vec3 A{};
    Profile p, rho_hat, nu;
};

// Acoustic state, lam x Omega != 0. |c| = 1, c.Omega = 0, g.Omega != 0.
struct A0Oblique {
    Sign eps = Sign::plus;
    Vec3 c{1, 0, 0};
    double b0 = 0, rho0 = 1, p0 = 1;
};

// Acoustic state, lam parallel to Omega, g.Omega = 0.
struct A0Aligned {
    Sign eps = Sign::plus, eps1 = Sign::plus;
    double rho0 = 1, p0 = 1, A1 = 1, B1 = 0, c0 = 0;
};

// Hydrodynamic state with implicit rho(r0). Needs |Omega| = 1, |c| = 1, c.Omega = 0,
// g.Omega != 0. rho_bracket must contain rho0 and stay clear of turning and sonic points.
struct H0Oblique {
    Vec3 c{1, 0, 0};
    double A = 1, a1 = 1, b1 = 0, T1 = 0, c0 = 0, rho0 = 1;
    Interval rho_bracket{0.5, 2};
};

// Hydrodynamic state, lam parallel to Omega, g.Omega = 0.
struct H0Aligned {
    Sign eps1 = Sign::plus;
    double rho0 = 1, p0 = 1, A1 = 1, B0 = 0, B1 = 0, c0 = 1;
};

// Hydrodynamic state, Omega = e3, g = eps2 |g| e3. branch plus takes rho above the
// sonic density (K^2/(kappa A))^(1/(kappa+1)), minus below it.
struct H0Vertical {
    Sign eps1 = Sign::plus, eps2 = Sign::minus, branch = Sign::plus;
    double A = 1, A1 = 1, B1 = 0, c0 = 0, K = 1, r0_offset = 0;
};

using StateRow = std::variant<E0Uniform, E0Swirl, A0Oblique, A0Aligned, H0Oblique, H0Aligned, H0Vertical>;

enum class StateKind { E0_gdotO_nonzero, E0_gdotO_zero, A0_lam_cross_O_nonzero, A0_lam_parallel_O, H0_row1, H0_row2, H0_row3 };
std::string to_string(StateKind k);
StateKind parse_state_kind(const std::string& s);

class StateField {
public:
    // Validates the row constraints; throws PreconditionError.
    StateField(StateRow row, PhysParams params);

    StateKind kind() const;
    const StateRow& row() const { return row_; }
    const PhysParams& params() const { return params_; }

    // dr0 as a covector; the phase is linear in (t, x).
    WaveCovector covector() const { return lam_; }
    double phase(const SpacetimePoint& pt) const { return pair(lam_, pt); }

    // (rho, p, v) as a function of r0 alone.
    State5 profile(double r0) const;
    // d profile / d r0, central differences with step h.
    State5 profile_derivative(double r0, double h = 1e-5) const;

    FluidState eval(const SpacetimePoint& pt) const;

    // Implicit rows only: density at r0 and the r0 of a density.
    double density(double r0) const;
    double phase_of_density(double rho) const;

private:
    StateRow row_;
    PhysParams params_;
    WaveCovector lam_;
    Interval r0_reach_{}; // r0 at the ends of rho_bracket (oblique hydrodynamic row)
};

FluidState eval_state(const StateField& f, const SpacetimePoint& pt);
Field as_field(const StateField& f);

// Euler residual of the state; with order set, at h and h/2.
ResidualReport state_residual(const StateField& f, const Grid4& grid, double h = 0, bool order = false);

} // namespace rinv
