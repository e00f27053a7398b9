#include <cmath>
#include <limits>
#include <sstream>

#include "rinv/cauchy.hpp"

namespace rinv {

AlphaZeroCauchy alpha_zero_cauchy(const CauchyCurve& curve, double r1_anchor, double r0_anchor, AlphaZeroSpec spec,
                                  double min_margin)
{
    if (curve.param != CauchyCurve::Param::by_r1) throw ConfigError("cauchy: the alpha = 0 workflow needs a curve parametrised by r1");
    if (!curve.eta) throw ConfigError("cauchy: curve has no eta");
    if (spec.waves.size() != 1) throw ConfigError("cauchy: the alpha = 0 workflow takes exactly one wave");
    if (!curve.s.contains(r1_anchor)) throw PreconditionError("cauchy: r1 anchor outside the curve's r1 range");
    check_monotone(curve);

    // C.h(r1) + a0 = Psi0(r0) with the anchor fixing a0.
    spec.a0 = alpha_zero_psi0(spec, r0_anchor) - pair(spec.C, curve.eta(r1_anchor));
    auto& w = spec.waves[0];
    if (!w.A) throw ConfigError("cauchy: the wave needs A(r1)");
    if (w.bracket.width() <= 0) w.bracket = curve.s;
    w.psi = {};

    AlphaZeroCauchy out;
    auto base_spec = std::make_shared<const AlphaZeroSpec>(spec);
    CauchyCurve cv = curve;
    out.r0_on_curve = [base_spec, cv](double r1) { return alpha_zero_r0(*base_spec, cv.eta(r1)); };
    // psi(r1) = Int_base^r0(r1) chi(s, r1) exp(-phi(s)) ds + A(r1).h(r1)
    w.psi = [base_spec, cv](double r1) {
        const auto& s = *base_spec;
        const auto& wv = s.waves[0];
        SpacetimePoint h = cv.eta(r1);
        double v = pair(wv.A(r1), h);
        if (wv.chi) {
            double r0 = alpha_zero_r0(s, h);
            v += quad_simpson([&](double q) { return wv.chi(q, r1) * std::exp(-s.phi(q)); }, s.base, r0, s.quad).value;
        }
        return v;
    };
    out.spec = spec;

    // lam1 = chi(r0, r1) C + A(r1) on the curve; its value on h' must not vanish.
    out.params = curve.sample_params();
    out.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.params.size(); ++i) {
        double r1 = out.params[i];
        double r0 = out.r0_on_curve(r1);
        WaveCovector A = w.A(r1);
        double chi = w.chi ? w.chi(r0, r1) : 0.0;
        WaveCovector l1{chi * spec.C.lam0 + A.lam0, chi * spec.C.lam + A.lam};
        Vec4 v = curve.tangent(r1);
        double vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
        double d = l1.norm4() * vn;
        double m = d > 0 ? std::abs(pair(l1, v)) / d : 0.0;
        out.margins.push_back(m);
        if (m < out.min_margin) out.min_margin = m, out.worst = i;
    }
    if (out.min_margin < min_margin) {
        std::ostringstream os;
        os << "cauchy: transversality condition violated (condition 2): the curve tangent lies in the annihilator of "
              "lam1 at sample "
           << out.worst << " (margin " << out.min_margin << ")";
        throw CauchyConditionError(2, static_cast<std::ptrdiff_t>(out.worst), os.str());
    }
    return out;
}

} // namespace rinv
