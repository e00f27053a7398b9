#pragma once

#include <cstddef>

#include "rinv/types.hpp"

namespace rinv::kernels {

// Structure-of-arrays derivative data for n grid points. Index mu: 0 = t, 1..3 = x, y, z.
struct ResidualInputs {
    std::size_t n = 0;
    const double* rho = nullptr;
    const double* p = nullptr;
    const double* v[3] = {};
    const double* drho[4] = {};
    const double* dp[3] = {};     // spatial only
    const double* dv[3][4] = {};  // dv_i / dx^mu
    const double* ds[4] = {};     // entropy p / rho^kappa
};

// out[0..2] momentum, out[3] continuity, out[4] entropy transport; each length n.
struct ResidualOutputs {
    double* r[5] = {};
};

struct Norms {
    double max_abs = 0;
    double sum_sq = 0;
};

enum class Backend { scalar, avx2 };

void assemble_scalar(const ResidualInputs& in, const Vec3& g, const Vec3& omega, ResidualOutputs& out);
Norms reduce_scalar(const double* r, std::size_t n);

bool avx2_compiled();
bool avx2_supported(); // compiled in and supported by this CPU
void assemble_avx2(const ResidualInputs& in, const Vec3& g, const Vec3& omega, ResidualOutputs& out);
Norms reduce_avx2(const double* r, std::size_t n);

// Runtime choice: AVX2 when supported unless forced otherwise.
Backend active_backend();
void force_backend(Backend b);
void clear_forced_backend();

void assemble(const ResidualInputs& in, const Vec3& g, const Vec3& omega, ResidualOutputs& out);
Norms reduce(const double* r, std::size_t n);

} // namespace rinv::kernels
