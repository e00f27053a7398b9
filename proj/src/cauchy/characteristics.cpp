#include <algorithm>
#include <cmath>
#include <limits>

#include "rinv/cauchy.hpp"

namespace rinv {

namespace {

using State2 = std::array<double, 2>;

template <class F>
State2 rk4(const F& f, double t, State2 y, double h)
{
    auto add = [](State2 a, State2 b, double s) { return State2{a[0] + s * b[0], a[1] + s * b[1]}; };
    State2 k1 = f(t, y);
    State2 k2 = f(t + h / 2, add(y, k1, h / 2));
    State2 k3 = f(t + h / 2, add(y, k2, h / 2));
    State2 k4 = f(t + h, add(y, k3, h));
    return {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]), y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

// (x, r0) along dx/dt = v1, dr0/dt = r0_t + v1 r0_x with r1 frozen.
State2 char_rhs(const CharacteristicProblem& p, double r1, const State2& y)
{
    double v = p.v1(y[1], r1);
    auto l = p.lam0(y[1], r1);
    return {v, l[0] + v * l[1]};
}

// r0 along x at fixed t from (x_from, r0_from), r1 given as a function of x.
template <class R1>
double r0_along_x(const CharacteristicProblem& p, double x_from, double r0_from, double x_to, const R1& r1_of, double hmax)
{
    if (x_to == x_from) return r0_from;
    int n = std::max(1, static_cast<int>(std::ceil(std::abs(x_to - x_from) / hmax)));
    double h = (x_to - x_from) / n;
    // state (r0, unused)
    auto f = [&](double x, State2 y) { return State2{p.lam0(y[0], r1_of(x))[1], 0}; };
    State2 y{r0_from, 0};
    for (int i = 0; i < n; ++i) y = rk4(f, x_from + i * h, y, h);
    return y[0];
}

double x_step(const CharacteristicProblem& p)
{
    return p.support.width() / std::max(1, p.characteristics - 1) / 4;
}

double r0_initial(const CharacteristicProblem& p, double x)
{
    return r0_along_x(p, p.support.lo, p.r0_anchor, x, p.r1_initial, x_step(p));
}

State2 advance(const CharacteristicProblem& p, double foot, double t)
{
    double r1 = p.r1_initial(foot);
    State2 y{foot, r0_initial(p, foot)};
    double span = t - p.t0;
    if (span <= 0) return y;
    double dt = p.t_span / p.steps;
    int n = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
    double h = span / n;
    auto f = [&](double, const State2& s) { return char_rhs(p, r1, s); };
    for (int i = 0; i < n; ++i) y = rk4(f, p.t0 + i * h, y, h);
    return y;
}

void validate(const CharacteristicProblem& p)
{
    if (!p.v1 || !p.r1_initial || !p.lam0) throw ConfigError("characteristics: v1, r1_initial and lam0 are required");
    if (!(p.support.hi > p.support.lo)) throw ConfigError("characteristics: empty support interval");
    if (!(p.t_span > 0) || p.steps < 1) throw ConfigError("characteristics: t_span and steps must be positive");
    if (p.characteristics < 2) throw ConfigError("characteristics: need at least two characteristics");
}

} // namespace

CharacteristicTrace::CharacteristicTrace(CharacteristicProblem p, std::vector<double> times, std::vector<double> foot,
                                         std::vector<double> r1, std::vector<std::vector<double>> x,
                                         std::vector<std::vector<double>> r0, std::optional<double> crossing)
    : p_(std::move(p)), times_(std::move(times)), foot_(std::move(foot)), r1_(std::move(r1)), x_(std::move(x)),
      r0_(std::move(r0)), crossing_(crossing)
{
}

namespace {

void check_time(double t, double t0, double t1)
{
    double slack = 1e-12 * std::max(1.0, std::abs(t1));
    if (!(t >= t0 - slack && t <= t1 + slack)) throw PreconditionError("characteristics: time outside the traced interval");
}

} // namespace

Interval CharacteristicTrace::strip(double t) const
{
    check_time(t, p_.t0, end_time());
    return {advance(p_, p_.support.lo, t)[0], advance(p_, p_.support.hi, t)[0]};
}

RiemannPair CharacteristicTrace::sample(double t, double x) const
{
    check_time(t, p_.t0, end_time());
    const double a = p_.support.lo, b = p_.support.hi;
    State2 L = advance(p_, a, t), R = advance(p_, b, t);
    double hx = x_step(p_);
    if (x <= L[0]) {
        double r1 = p_.r1_initial(a);
        return {r0_along_x(p_, L[0], L[1], x, [&](double) { return r1; }, hx), r1};
    }
    if (x >= R[0]) {
        double r1 = p_.r1_initial(b);
        return {r0_along_x(p_, R[0], R[1], x, [&](double) { return r1; }, hx), r1};
    }
    // Foot point of the characteristic through (t, x); the foot map is monotone before crossing.
    double xi = solve_scalar({[&](double f) { return advance(p_, f, t)[0] - x; }, {a, b}, 1e-14, 1e-15});
    return {advance(p_, xi, t)[1], p_.r1_initial(xi)};
}

CharacteristicTrace trace_characteristics(const CharacteristicProblem& p)
{
    validate(p);
    const int n = p.characteristics;
    std::vector<double> foot(n), r1(n);
    std::vector<double> x(n), r0(n);
    for (int i = 0; i < n; ++i) {
        foot[i] = p.support.lo + p.support.width() * i / (n - 1);
        r1[i] = p.r1_initial(foot[i]);
        x[i] = foot[i];
    }
    // r0 at t0 by marching r0_x = lam0_x from the anchor
    r0[0] = p.r0_anchor;
    for (int i = 1; i < n; ++i) r0[i] = r0_along_x(p, foot[i - 1], r0[i - 1], foot[i], p.r1_initial, x_step(p));

    std::vector<double> times{p.t0};
    std::vector<std::vector<double>> xs{x}, r0s{r0};
    std::optional<double> crossing;
    const double dt = p.t_span / p.steps;
    for (int k = 0; k < p.steps; ++k) {
        double t = p.t0 + k * dt;
        std::vector<double> nx(n), nr(n);
        for (int i = 0; i < n; ++i) {
            auto f = [&](double, const State2& s) { return char_rhs(p, r1[i], s); };
            State2 y = rk4(f, t, {x[i], r0[i]}, dt);
            nx[i] = y[0];
            nr[i] = y[1];
        }
        // First pair of neighbours to meet; gaps are interpolated linearly over the step.
        double tc = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < n; ++i) {
            double g0 = x[i + 1] - x[i], g1 = nx[i + 1] - nx[i];
            if (g1 <= 0) tc = std::min(tc, t + dt * g0 / (g0 - g1));
        }
        if (std::isfinite(tc)) {
            crossing = tc;
            break;
        }
        x = std::move(nx);
        r0 = std::move(nr);
        times.push_back(k + 1 == p.steps ? p.t0 + p.t_span : p.t0 + (k + 1) * dt);
        xs.push_back(x);
        r0s.push_back(r0);
    }
    return CharacteristicTrace(p, std::move(times), std::move(foot), std::move(r1), std::move(xs), std::move(r0s),
                               crossing);
}

double lam0_direction_defect(const Lam0Fn& lam0, double r0, double r1)
{
    double h = 1e-6 * std::max(1.0, std::abs(r0));
    auto l = lam0(r0, r1), up = lam0(r0 + h, r1), dn = lam0(r0 - h, r1);
    double d0 = (up[0] - dn[0]) / (2 * h), d1 = (up[1] - dn[1]) / (2 * h);
    double n2 = l[0] * l[0] + l[1] * l[1];
    if (n2 == 0) throw PreconditionError("characteristics: lam0 vanishes");
    return std::abs(d0 * l[1] - d1 * l[0]) / n2;
}

} // namespace rinv
