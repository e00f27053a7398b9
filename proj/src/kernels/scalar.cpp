#include <algorithm>
#include <cmath>

#include "rinv/kernels.hpp"

namespace rinv::kernels {

void assemble_scalar(const ResidualInputs& in, const Vec3& g, const Vec3& om, ResidualOutputs& out)
{
    for (std::size_t k = 0; k < in.n; ++k) {
        double rho = in.rho[k];
        double v0 = in.v[0][k], v1 = in.v[1][k], v2 = in.v[2][k];
        double cor[3] = {om.y * v2 - om.z * v1, om.z * v0 - om.x * v2, om.x * v1 - om.y * v0};
        double gg[3] = {g.x, g.y, g.z};
        for (int i = 0; i < 3; ++i) {
            double adv = in.dv[i][0][k] + v0 * in.dv[i][1][k] + v1 * in.dv[i][2][k] + v2 * in.dv[i][3][k];
            out.r[i][k] = rho * (adv - (gg[i] - cor[i])) + in.dp[i][k];
        }
        double div = in.dv[0][1][k] + in.dv[1][2][k] + in.dv[2][3][k];
        out.r[3][k] = in.drho[0][k] + v0 * in.drho[1][k] + v1 * in.drho[2][k] + v2 * in.drho[3][k] + rho * div;
        out.r[4][k] = in.ds[0][k] + v0 * in.ds[1][k] + v1 * in.ds[2][k] + v2 * in.ds[3][k];
    }
}

Norms reduce_scalar(const double* r, std::size_t n)
{
    Norms s;
    for (std::size_t k = 0; k < n; ++k) {
        s.max_abs = std::max(s.max_abs, std::abs(r[k]));
        s.sum_sq += r[k] * r[k];
    }
    return s;
}

} // namespace rinv::kernels
