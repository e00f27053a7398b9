#include "rinv/special.hpp"

#include <cmath>
#include <numbers>

#include "rinv/error.hpp"

namespace rinv {

JacobiSCD jacobi(double u, double m)
{
    if (!(m >= 0 && m <= 1)) throw PreconditionError("jacobi: parameter m must lie in [0, 1]");
    if (m == 1) {
        double s = 1 / std::cosh(u);
        return {std::tanh(u), s, s};
    }
    double a[17], c[17];
    a[0] = 1;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1 - m);
    int n = 0;
    while (std::abs(c[n]) > 1e-16 && n < 16) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i > 0; --i) phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
    double sn = std::sin(phi), cn = std::cos(phi);
    return {sn, cn, std::sqrt(1 - m * sn * sn)};
}

double ellip_k(double m)
{
    if (!(m >= 0 && m < 1)) throw PreconditionError("ellip_k: parameter m must lie in [0, 1)");
    double a = 1, b = std::sqrt(1 - m);
    for (int i = 0; i < 64 && std::abs(a - b) > 4e-16 * a; ++i) {
        double t = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = t;
    }
    return std::numbers::pi / (2 * a);
}

} // namespace rinv
