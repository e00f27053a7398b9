#include <algorithm>
#include <cmath>

#include "rinv/verify.hpp"

namespace rinv {

Mat54 outer(const State5& gamma, const WaveCovector& lam)
{
    Mat54 m;
    for (int j = 0; j < 5; ++j)
        for (int mu = 0; mu < 4; ++mu) m[j][mu] = gamma[j] * lam[mu];
    return m;
}

Mat54 numeric_jacobian(const Field& f, const SpacetimePoint& pt, double h)
{
    Mat54 m;
    for (int mu = 0; mu < 4; ++mu) {
        SpacetimePoint a = pt, b = pt;
        a[mu] += h;
        b[mu] -= h;
        State5 ua = f(a), ub = f(b);
        for (int j = 0; j < 5; ++j) m[j][mu] = (ua[j] - ub[j]) / (2 * h);
    }
    return m;
}

// One-sided Jacobi: rotate column pairs until mutually orthogonal; the column norms
// are then the singular values.
std::array<double, 4> singular_values(const Mat54& in)
{
    Mat54 a = in;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 4; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (int i = 0; i < 5; ++i) {
                    alpha += a[i][p] * a[i][p];
                    beta += a[i][q] * a[i][q];
                    gamma += a[i][p] * a[i][q];
                }
                if (gamma == 0) continue;
                double c0 = std::abs(gamma) / std::sqrt(alpha * beta);
                off = std::max(off, c0);
                if (c0 < 1e-15) continue;
                double zeta = (beta - alpha) / (2 * gamma);
                double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                double c = 1 / std::sqrt(1 + t * t), s = c * t;
                for (int i = 0; i < 5; ++i) {
                    double x = a[i][p], y = a[i][q];
                    a[i][p] = c * x - s * y;
                    a[i][q] = s * x + c * y;
                }
            }
        if (off < 1e-15) break;
    }
    std::array<double, 4> sv{};
    for (int q = 0; q < 4; ++q) {
        double s = 0;
        for (int i = 0; i < 5; ++i) s += a[i][q] * a[i][q];
        sv[q] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

RankReport rank_of(const Mat54& j, double tol_ratio)
{
    RankReport r;
    r.jacobian = j;
    r.sigma = singular_values(j);
    if (r.sigma[0] > 0) {
        for (double s : r.sigma)
            if (s >= tol_ratio * r.sigma[0]) ++r.rank;
        r.ratio3 = r.sigma[2] / r.sigma[0];
    }
    return r;
}

RankReport jacobian_rank(const Field& f, const SpacetimePoint& pt, double h, double tol_ratio)
{
    return rank_of(numeric_jacobian(f, pt, h), tol_ratio);
}

namespace {

double inner(const Mat54& a, const Mat54& b)
{
    double s = 0;
    for (int j = 0; j < 5; ++j)
        for (int mu = 0; mu < 4; ++mu) s += a[j][mu] * b[j][mu];
    return s;
}

} // namespace

DecompositionFit decomposition_fit(const Mat54& j, const State5& gamma, const WaveCovector& lam, const State5& gamma0,
                                   const WaveCovector& lam0)
{
    Mat54 m1 = outer(gamma, lam), m2 = outer(gamma0, lam0);
    double a11 = inner(m1, m1), a12 = inner(m1, m2), a22 = inner(m2, m2);
    double det = a11 * a22 - a12 * a12;
    if (!(a11 > 0 && a22 > 0) || det <= 1e-12 * a11 * a22)
        throw PreconditionError("decomposition_fit: basis matrices are linearly dependent");
    double b1 = inner(m1, j), b2 = inner(m2, j);
    DecompositionFit f;
    f.xi = (a22 * b1 - a12 * b2) / det;
    f.coeff0 = (a11 * b2 - a12 * b1) / det;
    double res = 0, nj = inner(j, j);
    for (int r = 0; r < 5; ++r)
        for (int mu = 0; mu < 4; ++mu) {
            double d = j[r][mu] - f.xi * m1[r][mu] - f.coeff0 * m2[r][mu];
            res += d * d;
        }
    f.rel_residual = nj > 0 ? std::sqrt(res / nj) : std::sqrt(res);
    return f;
}

DecompositionFit decomposition_fit(const Field& f, const SpacetimePoint& pt, const State5& gamma,
                                   const WaveCovector& lam, const State5& gamma0, const WaveCovector& lam0, double h)
{
    return decomposition_fit(numeric_jacobian(f, pt, h), gamma, lam, gamma0, lam0);
}

} // namespace rinv
