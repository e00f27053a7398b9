#include "rinv/kernels.hpp"

#if defined(RINV_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace rinv::kernels {

bool avx2_compiled() { return true; }

void assemble_avx2(const ResidualInputs& in, const Vec3& g, const Vec3& om, ResidualOutputs& out)
{
    const std::size_t n4 = in.n - in.n % 4;
    const __m256d gx = _mm256_set1_pd(g.x), gy = _mm256_set1_pd(g.y), gz = _mm256_set1_pd(g.z);
    const __m256d ox = _mm256_set1_pd(om.x), oy = _mm256_set1_pd(om.y), oz = _mm256_set1_pd(om.z);
    for (std::size_t k = 0; k < n4; k += 4) {
        __m256d rho = _mm256_loadu_pd(in.rho + k);
        __m256d v0 = _mm256_loadu_pd(in.v[0] + k);
        __m256d v1 = _mm256_loadu_pd(in.v[1] + k);
        __m256d v2 = _mm256_loadu_pd(in.v[2] + k);
        __m256d cor[3];
        cor[0] = _mm256_sub_pd(_mm256_mul_pd(oy, v2), _mm256_mul_pd(oz, v1));
        cor[1] = _mm256_sub_pd(_mm256_mul_pd(oz, v0), _mm256_mul_pd(ox, v2));
        cor[2] = _mm256_sub_pd(_mm256_mul_pd(ox, v1), _mm256_mul_pd(oy, v0));
        __m256d gg[3] = {gx, gy, gz};
        for (int i = 0; i < 3; ++i) {
            __m256d adv = _mm256_loadu_pd(in.dv[i][0] + k);
            adv = _mm256_fmadd_pd(v0, _mm256_loadu_pd(in.dv[i][1] + k), adv);
            adv = _mm256_fmadd_pd(v1, _mm256_loadu_pd(in.dv[i][2] + k), adv);
            adv = _mm256_fmadd_pd(v2, _mm256_loadu_pd(in.dv[i][3] + k), adv);
            __m256d f = _mm256_sub_pd(gg[i], cor[i]);
            __m256d r = _mm256_mul_pd(rho, _mm256_sub_pd(adv, f));
            r = _mm256_add_pd(r, _mm256_loadu_pd(in.dp[i] + k));
            _mm256_storeu_pd(out.r[i] + k, r);
        }
        __m256d div = _mm256_add_pd(_mm256_loadu_pd(in.dv[0][1] + k),
                                    _mm256_add_pd(_mm256_loadu_pd(in.dv[1][2] + k), _mm256_loadu_pd(in.dv[2][3] + k)));
        __m256d c = _mm256_loadu_pd(in.drho[0] + k);
        c = _mm256_fmadd_pd(v0, _mm256_loadu_pd(in.drho[1] + k), c);
        c = _mm256_fmadd_pd(v1, _mm256_loadu_pd(in.drho[2] + k), c);
        c = _mm256_fmadd_pd(v2, _mm256_loadu_pd(in.drho[3] + k), c);
        c = _mm256_fmadd_pd(rho, div, c);
        _mm256_storeu_pd(out.r[3] + k, c);
        __m256d s = _mm256_loadu_pd(in.ds[0] + k);
        s = _mm256_fmadd_pd(v0, _mm256_loadu_pd(in.ds[1] + k), s);
        s = _mm256_fmadd_pd(v1, _mm256_loadu_pd(in.ds[2] + k), s);
        s = _mm256_fmadd_pd(v2, _mm256_loadu_pd(in.ds[3] + k), s);
        _mm256_storeu_pd(out.r[4] + k, s);
    }
    if (n4 < in.n) {
        // tail through the scalar kernel on offset views
        ResidualInputs t = in;
        t.n = in.n - n4;
        t.rho += n4;
        t.p += n4;
        for (int i = 0; i < 3; ++i) {
            t.v[i] += n4;
            t.dp[i] += n4;
            for (int m = 0; m < 4; ++m) t.dv[i][m] += n4;
        }
        for (int m = 0; m < 4; ++m) {
            t.drho[m] += n4;
            t.ds[m] += n4;
        }
        ResidualOutputs o;
        for (int i = 0; i < 5; ++i) o.r[i] = out.r[i] + n4;
        assemble_scalar(t, g, om, o);
    }
}

Norms reduce_avx2(const double* r, std::size_t n)
{
    const std::size_t n4 = n - n % 4;
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d mx = _mm256_setzero_pd(), sq = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n4; k += 4) {
        __m256d x = _mm256_loadu_pd(r + k);
        mx = _mm256_max_pd(mx, _mm256_andnot_pd(sign, x));
        sq = _mm256_fmadd_pd(x, x, sq);
    }
    alignas(32) double m[4], s[4];
    _mm256_store_pd(m, mx);
    _mm256_store_pd(s, sq);
    Norms out{std::max({m[0], m[1], m[2], m[3]}), (s[0] + s[1]) + (s[2] + s[3])};
    Norms tail = reduce_scalar(r + n4, n - n4);
    out.max_abs = std::max(out.max_abs, tail.max_abs);
    out.sum_sq += tail.sum_sq;
    // NaN must not be swallowed by max_pd
    for (std::size_t k = 0; k < n4; ++k)
        if (std::isnan(r[k])) out.max_abs = r[k];
    return out;
}

} // namespace rinv::kernels

#else

namespace rinv::kernels {

bool avx2_compiled() { return false; }
void assemble_avx2(const ResidualInputs& in, const Vec3& g, const Vec3& om, ResidualOutputs& out)
{
    assemble_scalar(in, g, om, out);
}
Norms reduce_avx2(const double* r, std::size_t n) { return reduce_scalar(r, n); }

} // namespace rinv::kernels

#endif
