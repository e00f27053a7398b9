#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rinv/solver.hpp"
#include "rinv/types.hpp"

namespace rinv {

using Vec4 = std::array<double, 4>; // (t, x, y, z) components of a tangent vector

inline double pair(const WaveCovector& l, const Vec4& v) { return l.lam0 * v[0] + l.lam.x * v[1] + l.lam.y * v[2] + l.lam.z * v[3]; }

// A failed solvability condition on the data curve. condition() is 1 for monotonicity
// of the data and 2 for transversality; index() is the offending sample (-1 if none).
class CauchyConditionError : public PreconditionError {
public:
    CauchyConditionError(int condition, std::ptrdiff_t index, const std::string& what);
    int condition() const { return condition_; }
    std::ptrdiff_t index() const { return index_; }

private:
    int condition_;
    std::ptrdiff_t index_;
};

// Curve x = eta(s) in spacetime with data r0(s), r1(s) on it.
struct CauchyCurve {
    enum class Param { other, by_r0, by_r1 }; // by_rk: the parameter is rk itself

    std::function<SpacetimePoint(double)> eta;
    std::function<Vec4(double)> eta_dot; // optional; central differences otherwise
    Fn1 r0, r1; // either may be unset when the workflow needs only the other
    Fn1 r0_prime, r1_prime; // optional
    Interval s;
    Param param = Param::other;
    std::size_t samples = 201; // checks and seeding use this many equally spaced parameters

    double r0_at(double s) const;
    double r1_at(double s) const;
    double r0_dot(double s) const;
    double r1_dot(double s) const;
    Vec4 tangent(double s) const;
    std::vector<double> sample_params() const;
};

struct CurveSample {
    double s = 0, t = 0, x = 0, y = 0, z = 0;
    std::optional<double> r0, r1;
};

// Monotone cubic (PCHIP) interpolation of every column. Needs at least 4 rows and
// strictly increasing s; data columns must be strictly monotone (tolerance 1e-12).
CauchyCurve curve_from_samples(const std::vector<CurveSample>& rows);

// Throws CauchyConditionError(1, i) when r0 or r1 (those that are set) is not strictly
// monotone over the sample parameters.
void check_monotone(const CauchyCurve& curve);

using FormFn = std::function<WaveCovector(RiemannPair)>;

struct TransversalityReport {
    std::vector<double> params, margin0, margin1;
    double min0 = 0, min1 = 0;
    std::size_t worst0 = 0, worst1 = 0;
    double min() const { return std::min(min0, min1); }
};

// |lam_i(eta')| / (|lam_i| |eta'|) at each sample, i = 0, 1.
TransversalityReport transversality_check(const CauchyCurve& curve, const FormFn& lam0, const FormFn& lam1);

// The Pfaffian system dr0 ~ lam(r1) exp(phi), dr1 ~ lam(r1) phi_r1 + lam'(r1).
struct CauchyForms {
    CovectorFn lam, lam_dot;
    Fn2 phi;
    Fn2 phi_r1; // optional; central differences otherwise

    WaveCovector lam0(RiemannPair r) const;
    WaveCovector lam1(RiemannPair r) const;
    double dphi(double r0, double r1) const;
};

struct CauchyOptions {
    double min_margin = 1e-8;          // transversality threshold
    QuadOptions quad{1e-13, 1e-13, 1L << 20};
    PairOptions pair{1e-12, 100, 10, 1e10};
    bool discover_box = true;
    int box_probes = 5;                // interior curve points probed per box face
    int box_doublings = 8;
    double box_step = 0.01;            // first probe offset, relative to max(curve extent, 1)
    int continuation_steps = 8;
};

class CauchySolution {
public:
    // a(r0) and the free function Phi(r1), with integrals based at the curve's start.
    double a(double r0) const;
    double Phi(double r1) const;
    double Phi_dot(double r1) const;
    std::array<double, 2> G(RiemannPair r) const; // (G0, G1)
    // lam(r1).x - G0, lam'(r1).x - G1; NaN outside the data range.
    std::array<double, 2> residual(RiemannPair r, const SpacetimePoint& pt) const;

    const CauchyCurve& curve() const;
    const CauchyForms& forms() const;
    const TransversalityReport& margins() const;
    Interval r0_range() const;
    Interval r1_range() const;
    double base() const; // r0 at the start of the curve
    // Max |(a)|, |(b)| of the on-curve relations, recomputed from a and Phi by direct quadrature.
    double on_curve_defect() const;
    // Axis-aligned box (t, x, y, z) around the curve; empty margins when not discovered.
    const std::array<Interval, 4>& box() const;
    bool in_box(const SpacetimePoint& pt) const;

    struct Impl;
    explicit CauchySolution(std::shared_ptr<const Impl> p) : p_(std::move(p)) {}

private:
    std::shared_ptr<const Impl> p_;
    friend RiemannPair solve_cauchy(const CauchySolution&, const SpacetimePoint&);
    friend PairResult solve_cauchy_ex(const CauchySolution&, const SpacetimePoint&);
};

// Checks monotonicity (condition 1) and transversality (condition 2), then builds a and Phi.
CauchySolution build_from_curve(const CauchyCurve& curve, const CauchyForms& forms, const CauchyOptions& opt = {});

// Newton from the nearest curve sample, with continuation along the segment when the
// direct step fails. Throws PreconditionError outside the box.
RiemannPair solve_cauchy(const CauchySolution& sol, const SpacetimePoint& pt);
PairResult solve_cauchy_ex(const CauchySolution& sol, const SpacetimePoint& pt);

// ---- alpha1 = 0: r1 data on x = h(r1), one r0 anchor ----
struct AlphaZeroCauchy {
    AlphaZeroSpec spec;     // a0 and waves[0].psi filled in
    std::function<double(double)> r0_on_curve;
    std::vector<double> params, margins;
    double min_margin = 0;
    std::size_t worst = 0;
};

// `curve` must be parametrised by r1. spec.waves[0].psi is ignored and rebuilt;
// spec.a0 is set from the anchor r0(h(r1_anchor)) = r0_anchor.
AlphaZeroCauchy alpha_zero_cauchy(const CauchyCurve& curve, double r1_anchor, double r0_anchor, AlphaZeroSpec spec,
                                  double min_margin = 1e-8);

// ---- characteristics of r1_t + v1(r0, r1) r1_x = 0, r0_t = lam0_t, r0_x = lam0_x ----
using Lam0Fn = std::function<std::array<double, 2>(double r0, double r1)>; // (r0_t, r0_x)

struct CharacteristicProblem {
    Fn2 v1;
    Fn1 r1_initial;   // r1(t0, x), constant outside `support`
    Interval support; // contains supp r1_x(t0, .)
    Lam0Fn lam0;
    double r0_anchor = 0; // r0(t0, support.lo)
    double t0 = 0, t_span = 1;
    int steps = 1000;           // RK4 step t_span / steps
    int characteristics = 401;  // foot points spread over the support
};

class CharacteristicTrace {
public:
    CharacteristicTrace(CharacteristicProblem p, std::vector<double> times, std::vector<double> foot,
                        std::vector<double> r1, std::vector<std::vector<double>> x,
                        std::vector<std::vector<double>> r0, std::optional<double> crossing);

    const CharacteristicProblem& problem() const { return p_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& foot() const { return foot_; }
    const std::vector<double>& r1() const { return r1_; }
    // Positions and r0 per stored time, one entry per characteristic.
    const std::vector<std::vector<double>>& x() const { return x_; }
    const std::vector<std::vector<double>>& r0() const { return r0_; }
    // Time of the first characteristic crossing, when traced that far.
    std::optional<double> crossing_time() const { return crossing_; }
    double end_time() const { return times_.back(); }

    // The strip between the characteristics through the ends of the support.
    Interval strip(double t) const;
    // (r0, r1) at (t, x) for t0 <= t <= end_time(). Outside the strip r1 is the edge value
    // and r0 follows r0_x = lam0_x(r0, r1).
    RiemannPair sample(double t, double x) const;

private:
    CharacteristicProblem p_;
    std::vector<double> times_, foot_, r1_;
    std::vector<std::vector<double>> x_, r0_;
    std::optional<double> crossing_;
};

// Stops at the first crossing (loss of monotonicity of the foot-point map).
CharacteristicTrace trace_characteristics(const CharacteristicProblem& p);

// |d lam0/d r0 ^ lam0| / |lam0|^2, zero when the direction of lam0 does not depend on r0.
double lam0_direction_defect(const Lam0Fn& lam0, double r0, double r1);

} // namespace rinv
