#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rinv/solver.hpp"
#include "rinv/types.hpp"
#include "rinv/verify.hpp"

namespace rinv {

struct WaveSample {
    FluidState u;
    RiemannPair r;
};

// Jacobian frame of a rank-2 field at a point: du = xi gamma (x) lam + gamma0 (x) lam0.
struct RankTwoFrame {
    State5 gamma{};
    WaveCovector lam;
    State5 gamma0{};
    WaveCovector lam0;
};

// ---- entropic wave on an entropic state, stationary ----
// g = (0, 0, G), Omega = (Omega1, Omega2, 0), r0 = G z,
// r1 = L + alpha(r1) z with alpha = c sqrt(r1 + r01), L = -Omega2 x + Omega1 y.
struct E0EConfig {
    double m = 1, p0 = 1, rho0 = 1, b = 1;
    double c = 1, r01 = 1;
    double k = 0.5; // cn modulus, argument m = k^2
    Fn1 a_fn = [](double) { return 1.0; };
    Fn1 a_dot; // optional; central differences otherwise
    double Omega1 = 1, Omega2 = 0;
    double G = -standard_gravity;
    Sign branch = Sign::plus;
    double kappa = 1.4; // enters only through the entropy equation
};

PhysParams e0e_params(const E0EConfig& cfg);
void validate(const E0EConfig& cfg);

// Closed form for r1. Throws PreconditionError when the square root is imaginary or
// the chosen branch gives sqrt(r1 + r01) < 0.
double e0e_r1(const E0EConfig& cfg, const SpacetimePoint& pt);
// Root of r1 - L - alpha(r1) z on the branch's half of the domain, by bracketed search.
double e0e_r1_root(const E0EConfig& cfg, const SpacetimePoint& pt);
WaveSample e0e_eval(const E0EConfig& cfg, const SpacetimePoint& pt);
State5 e0e_state(const E0EConfig& cfg, double r0, double r1);
RankTwoFrame e0e_frame(const E0EConfig& cfg, const SpacetimePoint& pt);

// ---- acoustic wave on an entropic state, p = A rho (kappa = 1) ----
struct E0AConfig {
    double A = 5.0 / 3.0;
    double A0 = 5, F0 = 1;
    double B0 = 0, c0 = standard_gravity, c1 = 0;
    double K = -1.2909944487358056; // -sqrt(5/3)
    Sign eps = Sign::plus, eps1 = Sign::plus, eps2 = Sign::plus;
    PhysParams params = PhysParams::make(1.0, {0, 0, standard_gravity}, {0, -1, 0});
};

// The reference configuration: eps = eps1 = 1, B0 = 0, F0 = 1, A0 = 5, Omega = (0,-1,0),
// c0 = g, c1 = 0, g = (0, 0, g).
E0AConfig e0a_reference(double A = 5.0 / 3.0, double K = -1.2909944487358056, double g = standard_gravity);
void validate(const E0AConfig& cfg);

double e0a_zeta(const E0AConfig& cfg, const SpacetimePoint& pt);
WaveCovector e0a_zeta_covector(const E0AConfig& cfg);
double e0a_r0_of_zeta(const E0AConfig& cfg, double zeta);
// The Psi0 of the phase relation, F0 artanh sqrt(exp(r0/A0) - 1).
double e0a_psi0(const E0AConfig& cfg, double r0);
// Throws PreconditionError at the pole K = eps eps1 sqrt(A) t.
WaveSample e0a_eval(const E0AConfig& cfg, const SpacetimePoint& pt);
// The displayed closed form with the reference parameters, kept for comparison.
FluidState e0a_printed_eval(const E0AConfig& cfg, const SpacetimePoint& pt);
std::optional<double> catastrophe_time(const E0AConfig& cfg);
RankTwoFrame e0a_frame(const E0AConfig& cfg, const SpacetimePoint& pt);
// alpha = 0 form of both relations. The phase relation is even in zeta, so the
// side of zeta = 0 is chosen by `side`.
AlphaZeroSpec e0a_alpha_zero_spec(const E0AConfig& cfg, Sign side, Interval r1_bracket = {-1e3, 1e3});

// ---- entropic wave on a hydrodynamic state, l2 = (g3 - c0) S1 = 0 ----
// Frame (c, Omega, c x Omega), sigma = c0 t + c.x + a0 plays the role of r0.
//   (l1 + sigma)^2 = a1 - S1^-2 p^(-2/kappa) - 2 A^(1/kappa) F(p)
struct H0EConfig {
    double A = 1, S1 = 1, a0 = 0, a1 = 10, c0 = 0, T1 = 0;
    Vec3 c{1, 0, 0};
    Fn1 Y0, Y1, Y3, V2, psi1;
    Sign branch = Sign::plus; // plus: p above the turning pressure
    Interval p_bracket{1e-8, 1e8};
    Interval r1_bracket{-10, 10};
    bool closed_form = true; // use the kappa = 3 closed form when it applies
    QuadOptions quad{1e-13, 1e-13, 1L << 20};
    PhysParams params = PhysParams::make(3.0, {0, 0, -standard_gravity}, {0, 1, 0});
};

void validate(const H0EConfig& cfg);
double h0e_sigma(const H0EConfig& cfg, const SpacetimePoint& pt);
double h0e_turning_pressure(const H0EConfig& cfg);
double h0e_pressure_root(const H0EConfig& cfg, double sigma);
double h0e_pressure_closed(const H0EConfig& cfg, double sigma); // kappa = 3 only
double h0e_pressure(const H0EConfig& cfg, double sigma);
WaveSample h0e_eval(const H0EConfig& cfg, const SpacetimePoint& pt);
RankTwoFrame h0e_frame(const H0EConfig& cfg, const SpacetimePoint& pt);

// ---- acoustic wave on a hydrodynamic state ----
// Candidate functions; Phi follows from exp(-Phi) = v2'(r0) (f + v1)/g2 and v3 from
//   v3 = (g3 - f)(v2(r0) - v2(0))/g2 + Int_0^r0 v2' (f + v1)/g2 + V3(r1).
// |Omega| = 1, h . Omega = 0, |h| = 1, g2 = g.Omega != 0.
struct H0AConfig {
    double A = 1;
    Fn1 S, f, V3, Psi, v2;
    Fn1 v2_dot; // optional; central differences otherwise
    Fn2 v1;
    std::function<Vec3(double)> h;
    RiemannPair seed{};
    double fd_step = 1e-5;
    QuadOptions quad{1e-12, 1e-12, 1L << 20};
    PhysParams params = PhysParams::make(1.4, {0, 0, -standard_gravity}, {0, 0, 1});
};

void validate(const H0AConfig& cfg);

struct H0AState {
    double rho = 0, p = 0, v1 = 0, v2 = 0, v3 = 0;
    Vec3 v{};
};
H0AState h0a_state(const H0AConfig& cfg, double r0, double r1);

struct ConditionNorm {
    std::string name;
    double max_abs = 0, l2 = 0;
};

struct H0AResidualReport {
    std::array<ConditionNorm, 4> conditions;
    bool degenerate = false; // du/dr1 vanishes on the grid: rank < 2
    std::size_t points = 0;
    double max_abs() const;
};

// Pointwise residuals of the four compatibility conditions on a (r0, r1) lattice:
//   direction: q (v1 + f) a + (v1_r1 + f') b = 0
//   product:   a b = q kappa A rho^(kappa-2) rho_r1
//   magnitude: sqrt(a^2 + b^2) = sqrt(kappa A) rho^((kappa-3)/2) |rho_r1|
//   state:     rho_r0 = -S v2' (g1 - v3) / (g2 ((f + v1)^2 - kappa A rho^(kappa-1)))
// with a = v1_r1 - q v3, b = v3_r1 + q v1, q = h'.(h x Omega), rho = S/(v1 + f).
H0AResidualReport h0a_residual(const H0AConfig& cfg, const RGrid& grid);

AlphaNonzeroSpec h0a_invariant_spec(const H0AConfig& cfg);
WaveSample h0a_eval(const H0AConfig& cfg, const SpacetimePoint& pt);

// ---- adapters ----
Field e0e_field(const E0EConfig& cfg);
Field e0a_field(const E0AConfig& cfg);
Field h0e_field(const H0EConfig& cfg);
Field h0a_field(const H0AConfig& cfg);

} // namespace rinv
