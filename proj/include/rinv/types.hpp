#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "rinv/error.hpp"
#include "rinv/vec3.hpp"

namespace rinv {

inline constexpr double standard_gravity = 9.81;

// Sign parameters (eps, eps1, ...) of the solution families.
enum class Sign : int { minus = -1, plus = 1 };

constexpr double val(Sign s) { return static_cast<double>(static_cast<int>(s)); }
Sign parse_sign(double v); // accepts +1 / -1 only

struct PhysParams {
    double kappa = 1.4;
    Vec3 g{0, 0, -standard_gravity};
    Vec3 omega{};

    // Throws PreconditionError on kappa <= 0 or non-finite vectors.
    static PhysParams make(double kappa, Vec3 g, Vec3 omega);
    void validate() const;
};

// (rho, p, v1, v2, v3)
using State5 = std::array<double, 5>;

class FluidState {
public:
    FluidState(double rho, double p, Vec3 v); // rejects rho <= 0, p <= 0, non-finite

    double rho() const { return rho_; }
    double p() const { return p_; }
    const Vec3& v() const { return v_; }

    State5 as_array() const { return {rho_, p_, v_.x, v_.y, v_.z}; }

private:
    double rho_, p_;
    Vec3 v_;
};

struct WaveCovector {
    double lam0 = 0;
    Vec3 lam{};

    double norm4() const;
    bool is_zero() const { return lam0 == 0 && lam.x == 0 && lam.y == 0 && lam.z == 0; }
    double operator[](int mu) const { return mu == 0 ? lam0 : lam[mu - 1]; }
};

struct SpacetimePoint {
    double t = 0;
    Vec3 x{};

    double operator[](int mu) const { return mu == 0 ? t : x[mu - 1]; }
    double& operator[](int mu) { return mu == 0 ? t : x[mu - 1]; }
};

// lam_mu x^mu
inline double pair(const WaveCovector& l, const SpacetimePoint& p) { return l.lam0 * p.t + dot(l.lam, p.x); }

struct RiemannPair {
    double r0 = 0, r1 = 0;
};

struct Interval {
    double lo = 0, hi = 0;
    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct GridAxis {
    double lo = 0, hi = 0;
    std::size_t count = 1;
    double h = 0;

    double at(std::size_t i) const { return lo + static_cast<double>(i) * h; }
};

// Axes in order t, x, y, z. Points are enumerated row-major with z fastest.
struct Grid4 {
    std::array<GridAxis, 4> axes;

    std::size_t size() const;
    SpacetimePoint point(std::size_t i_t, std::size_t i_x, std::size_t i_y, std::size_t i_z) const;
    SpacetimePoint point(std::size_t flat) const;
};

Grid4 make_grid(const std::array<Interval, 4>& ranges, const std::array<std::size_t, 4>& counts);

} // namespace rinv
