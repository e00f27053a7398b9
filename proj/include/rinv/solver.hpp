#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rinv/types.hpp"

namespace rinv {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;
using CovectorFn = std::function<WaveCovector(double)>;

// ---- scalar roots ----

struct ScalarProblem {
    Fn1 f;
    Interval bracket;
    double tol_abs = 1e-14;
    double tol_rel = 1e-15;
    int max_iter = 200;
    Fn1 df; // optional; enables safeguarded Newton
};

// Brent, or bracketed Newton when df is set. The root never leaves the bracket.
double solve_scalar(const ScalarProblem& p);

// Sub-intervals of [lo, hi] (n samples, geometric spacing needs lo > 0) where f
// changes sign or hits zero. Non-finite samples break brackets.
std::vector<Interval> find_sign_changes(const Fn1& f, Interval range, int n, bool geometric = false);

// Scans, then solves. Throws PreconditionError when there is no sign change or
// when there are several (the message lists all brackets).
double solve_unique(const Fn1& f, Interval range, int n_scan = 64, bool geometric = false, double tol_abs = 1e-14,
                    const Fn1& df = {});

// ---- quadrature ----

struct QuadOptions {
    double tol_abs = 1e-10;
    double tol_rel = 1e-10;
    long max_intervals = 1L << 20;
};

struct QuadResult {
    double value = 0;
    double error = 0;
    long evaluations = 0;
    long intervals = 0;
};

// Adaptive Simpson with Richardson correction. Integral over [a, b]; a > b flips sign.
QuadResult quad_simpson(const Fn1& f, double a, double b, const QuadOptions& opt = {});
double quad_adaptive(const Fn1& f, double a, double b, double tol = 1e-10);

// Adaptive Gauss-Kronrod 7/15, largest-error-first bisection. Same contract.
QuadResult quad_gk(const Fn1& f, double a, double b, const QuadOptions& opt = {});

// ---- 2-D implicit systems ----

using PairResidual = std::function<std::array<double, 2>(RiemannPair, const SpacetimePoint&)>;
// d(F0,F1)/d(r0,r1) row-major: dF0/dr0, dF0/dr1, dF1/dr0, dF1/dr1
using PairJacobian = std::function<std::array<double, 4>(RiemannPair, const SpacetimePoint&)>;

struct ImplicitPair {
    PairResidual F;
    PairJacobian J; // optional; central differences otherwise
};

struct PairOptions {
    double tol = 1e-12;      // on max(|F0|, |F1|)
    int max_iter = 100;
    double trust_radius = 10; // max |dr| per step (infinity norm)
    double max_condition = 1e12;
};

struct PairResult {
    RiemannPair root;
    double residual = 0;
    int iterations = 0;
    double condition = 0;
    std::vector<double> history; // residual 2-norm per accepted iterate
};

PairResult solve_pair_ex(const ImplicitPair& sys, const SpacetimePoint& pt, RiemannPair seed,
                         const PairOptions& opt = {});
RiemannPair solve_pair(const ImplicitPair& sys, const SpacetimePoint& pt, RiemannPair seed,
                       const PairOptions& opt = {});

double condition_2x2(const std::array<double, 4>& m);

// ---- alpha1 != 0 family ----
//   lam(r1).x = Phi(r1) + Int_base^r0 exp(-phi(s, r1)) ds
//   lamdot(r1).x = Phidot(r1) - Int_base^r0 phi_r1(s, r1) exp(-phi(s, r1)) ds
struct AlphaNonzeroSpec {
    CovectorFn lam, lam_dot;
    Fn2 phi, phi_r1;
    Fn1 Phi, Phi_dot;
    double base = 0;
    QuadOptions quad{1e-13, 1e-13, 1L << 20};
};

std::array<double, 2> alpha_nonzero_residual(const AlphaNonzeroSpec& s, RiemannPair r, const SpacetimePoint& pt);
RiemannPair alpha_nonzero_invariants(const AlphaNonzeroSpec& s, const SpacetimePoint& pt, RiemannPair seed,
                                     const PairOptions& opt = {});

// ---- alpha1 = 0 family ----
//   C.x + a0 = Psi0(r0),  Psi0(r0) = Int_base^r0 exp(-phi(s)) ds
//   Int_base^r0 chi_k(s, r_k) exp(-phi(s)) ds + A_k(r_k).x = psi_k(r_k),  k = 1..p
struct AlphaZeroWave {
    Fn2 chi; // optional; zero when unset
    CovectorFn A;
    Fn1 psi;
    Interval bracket;
};

struct AlphaZeroSpec {
    WaveCovector C;
    double a0 = 0;
    Fn1 phi;
    Fn1 Psi0; // optional closed form; quadrature of exp(-phi) otherwise
    double base = 0;
    Interval r0_bracket;
    std::vector<AlphaZeroWave> waves;
    QuadOptions quad{1e-13, 1e-13, 1L << 20};
    int n_scan = 32;
};

double alpha_zero_psi0(const AlphaZeroSpec& s, double r0);
double alpha_zero_r0(const AlphaZeroSpec& s, const SpacetimePoint& pt);
double alpha_zero_relation(const AlphaZeroSpec& s, std::size_t wave, double r0, double rk, const SpacetimePoint& pt);
RiemannPair alpha_zero_invariants(const AlphaZeroSpec& s, const SpacetimePoint& pt);
// r0 followed by one invariant per wave.
std::vector<double> alpha_zero_multiwave(const AlphaZeroSpec& s, const SpacetimePoint& pt);

} // namespace rinv
