#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include "doctest.h"
#include "rinv/kernels.hpp"

using namespace rinv;
using namespace rinv::kernels;

namespace {

struct Batch {
    std::vector<std::vector<double>> cols;
    ResidualInputs in;

    explicit Batch(std::size_t n, unsigned seed) : cols(32, std::vector<double>(n))
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(-2, 2);
        for (auto& c : cols)
            for (auto& x : c) x = U(rng);
        for (auto& x : cols[0]) x = std::abs(x) + 0.1; // rho
        in.n = n;
        int k = 0;
        in.rho = cols[k++].data();
        in.p = cols[k++].data();
        for (int i = 0; i < 3; ++i) in.v[i] = cols[k++].data();
        for (int m = 0; m < 4; ++m) in.drho[m] = cols[k++].data();
        for (int i = 0; i < 3; ++i) in.dp[i] = cols[k++].data();
        for (int i = 0; i < 3; ++i)
            for (int m = 0; m < 4; ++m) in.dv[i][m] = cols[k++].data();
        for (int m = 0; m < 4; ++m) in.ds[m] = cols[k++].data();
    }
};

} // namespace

TEST_CASE("scalar kernel matches a direct formula")
{
    Batch b(5, 1);
    const auto& in = b.in;
    Vec3 g{0.1, -0.2, -9.81}, om{0.3, 0.0, 1.1};
    std::vector<double> o[5];
    ResidualOutputs out;
    for (int i = 0; i < 5; ++i) {
        o[i].resize(5);
        out.r[i] = o[i].data();
    }
    assemble_scalar(in, g, om, out);
    for (std::size_t k = 0; k < 5; ++k) {
        Vec3 v{in.v[0][k], in.v[1][k], in.v[2][k]};
        Vec3 f = g - cross(om, v);
        for (int i = 0; i < 3; ++i) {
            double dt = in.dv[i][0][k];
            double conv = v.x * in.dv[i][1][k] + v.y * in.dv[i][2][k] + v.z * in.dv[i][3][k];
            double expect = in.rho[k] * (dt + conv) + in.dp[i][k] - in.rho[k] * f[i];
            CHECK(o[i][k] == doctest::Approx(expect).epsilon(1e-13));
        }
        double cont = in.drho[0][k] + v.x * in.drho[1][k] + v.y * in.drho[2][k] + v.z * in.drho[3][k] +
                      in.rho[k] * (in.dv[0][1][k] + in.dv[1][2][k] + in.dv[2][3][k]);
        CHECK(o[3][k] == doctest::Approx(cont).epsilon(1e-13));
    }
}

TEST_CASE("avx2 and scalar kernels agree")
{
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available; only the scalar path is exercised");
        return;
    }
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        Batch b(n, static_cast<unsigned>(n));
        Vec3 g{0.1, -0.2, -9.81}, om{0.3, 0.0, 1.1};
        std::vector<double> a[5], s[5];
        ResidualOutputs oa, os;
        for (int i = 0; i < 5; ++i) {
            a[i].resize(n);
            s[i].resize(n);
            oa.r[i] = a[i].data();
            os.r[i] = s[i].data();
        }
        assemble_avx2(b.in, g, om, oa);
        assemble_scalar(b.in, g, om, os);
        for (int i = 0; i < 5; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                double sc = 1 + std::abs(s[i][k]);
                CHECK(std::abs(a[i][k] - s[i][k]) <= 1e-14 * 64 * sc);
            }
            auto na = reduce_avx2(a[i].data(), n), ns = reduce_scalar(a[i].data(), n);
            CHECK(na.max_abs == ns.max_abs);
            CHECK(na.sum_sq == doctest::Approx(ns.sum_sq).epsilon(1e-14));
        }
    }
}

TEST_CASE("backend override")
{
    force_backend(Backend::scalar);
    CHECK(active_backend() == Backend::scalar);
    clear_forced_backend();
    CHECK(active_backend() == (avx2_supported() ? Backend::avx2 : Backend::scalar));
    std::vector<double> r{1, -3, NAN, 2, 0.5};
    CHECK(std::isnan(reduce(r.data(), r.size()).max_abs));
}
