#pragma once

// Parameter sets shared by the unit tests and the acceptance runner.

#include <cmath>
#include <string>
#include <vector>

#include "rinv/states.hpp"

namespace rinv::fixtures {

struct RowCase {
    std::string name;
    StateField field;
    Grid4 slab; // 33^3 at fixed t
};

inline Grid4 slab(double t, Interval x, Interval y, Interval z, std::size_t n)
{
    return make_grid({Interval{t, t}, x, y, z}, {1, n, n, n});
}

inline Vec3 unit(Vec3 v) { return (1 / norm(v)) * v; }

inline std::vector<RowCase> table_rows(std::size_t n = 33)
{
    std::vector<RowCase> rows;
    Interval u01{0, 1};
    {
        PhysParams pp = PhysParams::make(1.4, {0.3, -0.2, -9.81}, {0.3, 0.2, 1.0});
        auto e = exp_profiles(10, 0.1);
        rows.push_back({"E0_gdotO_nonzero", StateField(E0Uniform{{0.5, -0.2, 0.1}, e.p, e.rho_hat}, pp),
                        slab(0.1, u01, u01, u01, n)});
    }
    {
        PhysParams pp = PhysParams::make(1.4, {0, 0, -9.81}, {0.5, -0.3, 0});
        auto e = exp_profiles(10, 0.1);
        Profile nu{[](double r) { return std::sin(0.3 * r); }, "sin"};
        rows.push_back({"E0_gdotO_zero", StateField(E0Swirl{{0.3, 0.5, 0.2}, e.p, e.rho_hat, nu}, pp),
                        slab(0.1, u01, u01, u01, n)});
    }
    {
        Vec3 om{0.2, 0.1, 0.8};
        PhysParams pp = PhysParams::make(1.4, {0.5, 0, -9.81}, om);
        A0Oblique r{Sign::plus, unit(cross(om, {1, 0, 0})), 0.3, 1.2, 2.0};
        rows.push_back({"A0_lam_cross_O_nonzero", StateField(r, pp), slab(0.1, u01, u01, u01, n)});
    }
    {
        PhysParams pp = PhysParams::make(1.4, {0, 0, -9.81}, {0.4, -0.3, 0});
        A0Aligned r{Sign::minus, Sign::plus, 1.0, 1.5, 0.7, 0.2, 0.5};
        rows.push_back({"A0_lam_parallel_O", StateField(r, pp), slab(0.1, u01, u01, u01, n)});
    }
    {
        PhysParams pp = PhysParams::make(1.4, {1.0, 0.5, -9.81}, {0, 0, 1});
        H0Oblique r{{0.6, 0.8, 0}, 1.0, 2.0, 0.1, 3.0, 0.2, 1.0, {0.55, 1.9}};
        rows.push_back({"H0_row1", StateField(r, pp), slab(0, {-0.4, 0.1}, {-0.4, 0.1}, u01, n)});
    }
    {
        PhysParams pp = PhysParams::make(1.4, {0, 0, -9.81}, {0.9, 1.2, 0});
        H0Aligned r{Sign::minus, 1.0, 1.0, 0.4, 0.3, 0.1, 1.0};
        rows.push_back({"H0_row2", StateField(r, pp), slab(0.1, u01, u01, u01, n)});
    }
    {
        PhysParams pp = PhysParams::make(1.4, {0, 0, -9.81}, {0, 0, 1});
        H0Vertical r{Sign::plus, Sign::minus, Sign::plus, 10.0, 0.6, 0.3, 0.1, 0.5, 3.6};
        rows.push_back({"H0_row3", StateField(r, pp), slab(0.1, u01, u01, u01, n)});
    }
    return rows;
}

} // namespace rinv::fixtures
