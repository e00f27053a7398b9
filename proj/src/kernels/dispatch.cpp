#include <atomic>

#include "rinv/kernels.hpp"

namespace rinv::kernels {

namespace {
// -1: automatic, otherwise a Backend value
std::atomic<int> forced{-1};
} // namespace

bool avx2_supported()
{
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    static const bool ok = avx2_compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

Backend active_backend()
{
    int f = forced.load();
    if (f == static_cast<int>(Backend::scalar)) return Backend::scalar;
    if (f == static_cast<int>(Backend::avx2) && avx2_supported()) return Backend::avx2;
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

void force_backend(Backend b) { forced.store(static_cast<int>(b)); }
void clear_forced_backend() { forced.store(-1); }

void assemble(const ResidualInputs& in, const Vec3& g, const Vec3& omega, ResidualOutputs& out)
{
    if (active_backend() == Backend::avx2)
        assemble_avx2(in, g, omega, out);
    else
        assemble_scalar(in, g, omega, out);
}

Norms reduce(const double* r, std::size_t n)
{
    return active_backend() == Backend::avx2 ? reduce_avx2(r, n) : reduce_scalar(r, n);
}

} // namespace rinv::kernels
