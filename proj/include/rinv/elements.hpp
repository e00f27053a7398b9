#pragma once

#include <string>

#include "rinv/types.hpp"

namespace rinv {

enum class Family { E0, A_plus0, A_minus0, H0, E, A_plus, A_minus };

std::string to_string(Family f);
bool is_homogeneous(Family f);

// (gamma_rho, gamma_p, gamma_v)
struct Gamma {
    double rho = 0;
    double p = 0;
    Vec3 v{};

    State5 as_array() const { return {rho, p, v.x, v.y, v.z}; }
};

struct SimpleElement {
    Family family;
    Gamma gamma;
    WaveCovector lam;
    double delta = 0;
};

enum class WaveType { entropic, acoustic_plus, acoustic_minus, hydrodynamic };
std::string to_string(WaveType w);

// Relative tolerance below which orthogonality constraints are fixed by projection
// instead of rejected.
inline constexpr double projection_tol = 1e-8;

double advection_speed(const FluidState& u, const WaveCovector& lam);
double characteristic_determinant(const FluidState& u, const WaveCovector& lam, const PhysParams& params);
WaveType classify(const FluidState& u, const WaveCovector& lam, const PhysParams& params, double tol = 1e-10);

// Forcing g - Omega x v.
Vec3 forcing(const FluidState& u, const PhysParams& params);

SimpleElement entropic_inhom(const FluidState& u, const PhysParams& params, double gamma_rho, Vec3 h);
SimpleElement acoustic_inhom(const FluidState& u, const PhysParams& params, Vec3 lam_vec, Sign eps,
                             double gamma_rho = 1.0);
SimpleElement hydrodynamic_inhom(const FluidState& u, const PhysParams& params, Vec3 lam_vec, double delta);
SimpleElement entropic_hom(const FluidState& u, double gamma_rho, Vec3 h, Vec3 lam_vec);
SimpleElement acoustic_hom(const FluidState& u, const PhysParams& params, Vec3 lam_vec, Sign eps,
                           double gamma_rho = 1.0);

struct ElementResidual {
    Vec3 momentum{};
    double continuity = 0;
    double entropy = 0;
    double scale = 1; // largest term magnitude entering the equations, at least 1

    double max_abs() const;
    double relative() const { return max_abs() / scale; }
};

// Left minus right side of the element system: inhomogeneous families carry the
// forcing on the right, homogeneous ones have zero right side.
ElementResidual verify_element(const FluidState& u, const SimpleElement& e, const PhysParams& params);

} // namespace rinv
