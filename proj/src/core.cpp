#include "rinv/types.hpp"

#include <cmath>
#include <sstream>

namespace rinv {

Sign parse_sign(double v)
{
    if (v == 1.0) return Sign::plus;
    if (v == -1.0) return Sign::minus;
    std::ostringstream os;
    os << "sign parameter must be +1 or -1, got " << v;
    throw PreconditionError(os.str());
}

PhysParams PhysParams::make(double kappa, Vec3 g, Vec3 omega)
{
    PhysParams p{kappa, g, omega};
    p.validate();
    return p;
}

void PhysParams::validate() const
{
    if (!(kappa > 0) || !std::isfinite(kappa)) throw PreconditionError("kappa must be positive and finite");
    if (!finite(g)) throw PreconditionError("gravity vector is not finite");
    if (!finite(omega)) throw PreconditionError("rotation vector is not finite");
}

FluidState::FluidState(double rho, double p, Vec3 v) : rho_(rho), p_(p), v_(v)
{
    if (!(rho > 0) || !std::isfinite(rho)) {
        std::ostringstream os;
        os << "density must be positive, got " << rho;
        throw PreconditionError(os.str());
    }
    if (!(p > 0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "pressure must be positive, got " << p;
        throw PreconditionError(os.str());
    }
    if (!finite(v)) throw PreconditionError("velocity is not finite");
}

double WaveCovector::norm4() const { return std::sqrt(lam0 * lam0 + norm2(lam)); }

std::size_t Grid4::size() const
{
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
}

SpacetimePoint Grid4::point(std::size_t it, std::size_t ix, std::size_t iy, std::size_t iz) const
{
    return {axes[0].at(it), {axes[1].at(ix), axes[2].at(iy), axes[3].at(iz)}};
}

SpacetimePoint Grid4::point(std::size_t flat) const
{
    std::size_t iz = flat % axes[3].count;
    flat /= axes[3].count;
    std::size_t iy = flat % axes[2].count;
    flat /= axes[2].count;
    std::size_t ix = flat % axes[1].count;
    std::size_t it = flat / axes[1].count;
    return point(it, ix, iy, iz);
}

Grid4 make_grid(const std::array<Interval, 4>& ranges, const std::array<std::size_t, 4>& counts)
{
    static const char* names[4] = {"t", "x", "y", "z"};
    Grid4 g;
    for (int a = 0; a < 4; ++a) {
        const auto& r = ranges[a];
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
            throw PreconditionError(std::string("grid range for ") + names[a] + " is not finite");
        if (r.hi < r.lo) throw PreconditionError(std::string("grid range for ") + names[a] + " has hi < lo");
        if (counts[a] == 0) throw PreconditionError(std::string("grid count for ") + names[a] + " is zero");
        if (counts[a] == 1 && r.hi != r.lo)
            throw PreconditionError(std::string("grid axis ") + names[a] + " has a non-degenerate range but count 1");
        GridAxis ax{r.lo, r.hi, counts[a], 0.0};
        if (counts[a] > 1) ax.h = (r.hi - r.lo) / static_cast<double>(counts[a] - 1);
        g.axes[a] = ax;
    }
    return g;
}

} // namespace rinv
