#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rinv/solver.hpp"

namespace rinv {

namespace {

double nrm2(const std::array<double, 2>& f) { return std::hypot(f[0], f[1]); }
double nrmi(const std::array<double, 2>& f) { return std::max(std::abs(f[0]), std::abs(f[1])); }
bool fin(const std::array<double, 2>& f) { return std::isfinite(f[0]) && std::isfinite(f[1]); }

std::array<double, 4> fd_jacobian(const PairResidual& F, RiemannPair r, const SpacetimePoint& pt)
{
    double h0 = std::max(1e-6, 1e-6 * std::abs(r.r0));
    double h1 = std::max(1e-6, 1e-6 * std::abs(r.r1));
    auto a = F({r.r0 + h0, r.r1}, pt), b = F({r.r0 - h0, r.r1}, pt);
    auto c = F({r.r0, r.r1 + h1}, pt), d = F({r.r0, r.r1 - h1}, pt);
    return {(a[0] - b[0]) / (2 * h0), (c[0] - d[0]) / (2 * h1), (a[1] - b[1]) / (2 * h0), (c[1] - d[1]) / (2 * h1)};
}

} // namespace

double condition_2x2(const std::array<double, 4>& m)
{
    double fro2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
    double det = std::abs(m[0] * m[3] - m[1] * m[2]);
    if (det == 0 || !std::isfinite(fro2)) return std::numeric_limits<double>::infinity();
    // s1^2 + s2^2 = fro2, s1 s2 = det
    double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4 * det * det));
    double s1sq = 0.5 * (fro2 + disc);
    double s2sq = det * det / s1sq;
    return std::sqrt(s1sq / s2sq);
}

PairResult solve_pair_ex(const ImplicitPair& sys, const SpacetimePoint& pt, RiemannPair seed, const PairOptions& opt)
{
    PairResult res;
    RiemannPair r = seed;
    auto f = sys.F(r, pt);
    if (!fin(f)) throw SolverError("solve_pair: residual not finite at the seed");
    double fn = nrm2(f);
    res.history.push_back(fn);
    for (int it = 0; it <= opt.max_iter; ++it) {
        res.iterations = it;
        if (nrmi(f) <= opt.tol) {
            res.root = r;
            res.residual = nrmi(f);
            auto jm = sys.J ? sys.J(r, pt) : fd_jacobian(sys.F, r, pt);
            res.condition = condition_2x2(jm);
            return res;
        }
        if (it == opt.max_iter) break;
        auto jm = sys.J ? sys.J(r, pt) : fd_jacobian(sys.F, r, pt);
        double cond = condition_2x2(jm);
        if (!(cond <= opt.max_condition)) {
            std::ostringstream os;
            os << "solve_pair: singular Jacobian (condition " << cond << ") at r = (" << r.r0 << ", " << r.r1
               << "); the invariants are not solvable here";
            throw SolverError(os.str());
        }
        double det = jm[0] * jm[3] - jm[1] * jm[2];
        double d0 = -(jm[3] * f[0] - jm[1] * f[1]) / det;
        double d1 = -(-jm[2] * f[0] + jm[0] * f[1]) / det;
        double big = std::max(std::abs(d0), std::abs(d1));
        if (big > opt.trust_radius) {
            d0 *= opt.trust_radius / big;
            d1 *= opt.trust_radius / big;
        }
        double alpha = 1;
        bool accepted = false;
        for (int k = 0; k < 40; ++k, alpha *= 0.5) {
            RiemannPair trial{r.r0 + alpha * d0, r.r1 + alpha * d1};
            auto ft = sys.F(trial, pt);
            if (fin(ft) && nrm2(ft) < fn) {
                r = trial;
                f = ft;
                fn = nrm2(ft);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // stuck at the rounding floor of F
            if (nrmi(f) <= 100 * opt.tol) {
                res.root = r;
                res.residual = nrmi(f);
                res.condition = cond;
                return res;
            }
            std::ostringstream os;
            os << "solve_pair: line search failed at r = (" << r.r0 << ", " << r.r1 << "), |F| = " << fn;
            throw SolverError(os.str());
        }
        if (fn > res.history.back()) throw SolverError("solve_pair: residual increased after damping");
        res.history.push_back(fn);
    }
    std::ostringstream os;
    os << "solve_pair: no convergence after " << opt.max_iter << " iterations, |F| = " << fn;
    throw SolverError(os.str());
}

RiemannPair solve_pair(const ImplicitPair& sys, const SpacetimePoint& pt, RiemannPair seed, const PairOptions& opt)
{
    return solve_pair_ex(sys, pt, seed, opt).root;
}

// ---- alpha1 != 0 ----

std::array<double, 2> alpha_nonzero_residual(const AlphaNonzeroSpec& s, RiemannPair r, const SpacetimePoint& pt)
{
    double r1 = r.r1;
    double i0 = quad_simpson([&](double xi) { return std::exp(-s.phi(xi, r1)); }, s.base, r.r0, s.quad).value;
    double i1 =
        quad_simpson([&](double xi) { return s.phi_r1(xi, r1) * std::exp(-s.phi(xi, r1)); }, s.base, r.r0, s.quad)
            .value;
    return {pair(s.lam(r1), pt) - s.Phi(r1) - i0, pair(s.lam_dot(r1), pt) - s.Phi_dot(r1) + i1};
}

RiemannPair alpha_nonzero_invariants(const AlphaNonzeroSpec& s, const SpacetimePoint& pt, RiemannPair seed,
                                     const PairOptions& opt)
{
    ImplicitPair sys{[&](RiemannPair r, const SpacetimePoint& p) { return alpha_nonzero_residual(s, r, p); }, {}};
    return solve_pair(sys, pt, seed, opt);
}

// ---- alpha1 = 0 ----

double alpha_zero_psi0(const AlphaZeroSpec& s, double r0)
{
    if (s.Psi0) return s.Psi0(r0);
    return quad_simpson([&](double xi) { return std::exp(-s.phi(xi)); }, s.base, r0, s.quad).value;
}

double alpha_zero_r0(const AlphaZeroSpec& s, const SpacetimePoint& pt)
{
    double target = pair(s.C, pt) + s.a0;
    // Psi0 is increasing when built from exp(-phi); a closed form must be checked
    const int n = std::max(2, s.n_scan);
    double prev = 0;
    int dir = 0;
    for (int i = 0; i <= n; ++i) {
        double r = s.r0_bracket.lo + (s.r0_bracket.hi - s.r0_bracket.lo) * i / n;
        double v = alpha_zero_psi0(s, r);
        if (!std::isfinite(v)) throw PreconditionError("alpha_zero: Psi0 not finite on the r0 bracket");
        if (i > 0) {
            int d = v > prev ? 1 : (v < prev ? -1 : 0);
            if (d == 0 || (dir != 0 && d != dir))
                throw PreconditionError("alpha_zero: Psi0 is not strictly monotone on the r0 bracket");
            dir = d;
        }
        prev = v;
    }
    ScalarProblem p{[&](double r) { return alpha_zero_psi0(s, r) - target; }, s.r0_bracket, 1e-15, 1e-15, 200, {}};
    return solve_scalar(p);
}

double alpha_zero_relation(const AlphaZeroSpec& s, std::size_t k, double r0, double rk, const SpacetimePoint& pt)
{
    const auto& w = s.waves.at(k);
    double in = 0;
    if (w.chi) in = quad_simpson([&](double xi) { return w.chi(xi, rk) * std::exp(-s.phi(xi)); }, s.base, r0, s.quad).value;
    return in + pair(w.A(rk), pt) - w.psi(rk);
}

std::vector<double> alpha_zero_multiwave(const AlphaZeroSpec& s, const SpacetimePoint& pt)
{
    if (s.waves.empty()) throw PreconditionError("alpha_zero: no wave relations supplied");
    std::vector<double> out;
    double r0 = alpha_zero_r0(s, pt);
    out.push_back(r0);
    for (std::size_t k = 0; k < s.waves.size(); ++k) {
        auto g = [&](double rk) { return alpha_zero_relation(s, k, r0, rk, pt); };
        out.push_back(solve_unique(g, s.waves[k].bracket, s.n_scan, false, 1e-15));
    }
    return out;
}

RiemannPair alpha_zero_invariants(const AlphaZeroSpec& s, const SpacetimePoint& pt)
{
    if (s.waves.empty()) throw PreconditionError("alpha_zero: no wave relations supplied");
    AlphaZeroSpec one = s;
    one.waves.resize(1);
    auto v = alpha_zero_multiwave(one, pt);
    return {v[0], v[1]};
}

} // namespace rinv
