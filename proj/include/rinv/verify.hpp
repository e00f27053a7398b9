#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rinv/solver.hpp"
#include "rinv/types.hpp"

namespace rinv {

// u(t, x) as (rho, p, v1, v2, v3). May throw on points outside its domain.
using Field = std::function<State5(const SpacetimePoint&)>;

// Jacobian du_j/dx^mu, row j = rho, p, v1, v2, v3; column mu = t, x, y, z.
using Mat54 = std::array<std::array<double, 4>, 5>;

Mat54 outer(const State5& gamma, const WaveCovector& lam);
Mat54 numeric_jacobian(const Field& f, const SpacetimePoint& pt, double h);

// Equation order: momentum x, y, z, continuity, entropy transport.
inline constexpr std::array<const char*, 5> equation_names{"momentum_x", "momentum_y", "momentum_z", "continuity",
                                                            "entropy"};

struct ResidualReport {
    std::array<double, 5> max_abs{}, rms{};
    std::array<double, 5> scale{}; // largest single term of each equation over the grid
    std::array<double, 5> noise{}; // rounding floor of the difference quotients
    double h = 0;
    std::size_t points = 0;
    Grid4 grid;

    // Two-resolution run (h and h/2).
    bool has_order = false;
    std::array<double, 5> max_abs_half{};
    std::array<bool, 5> at_roundoff{}; // residual at step h below the rounding floor
    std::array<double, 5> order{};     // NaN where at_roundoff
    double min_order() const;          // over equations not at roundoff, NaN if none

    // max_i max_abs / scale over equations whose residual exceeds the rounding floor
    double max_relative() const;
    bool converges(double required_order) const;
};

// Central differences with step h on every grid point. h <= 0 picks 1e-5 times the
// coordinate scale of the grid.
ResidualReport euler_residual(const Field& f, const Grid4& grid, const PhysParams& params, double h = 0);
// Same at h and h/2; h <= 0 picks 1e-3 times the coordinate scale.
ResidualReport euler_residual_order(const Field& f, const Grid4& grid, const PhysParams& params, double h = 0);

double coordinate_scale(const Grid4& grid);

struct RankReport {
    std::array<double, 4> sigma{}; // descending
    int rank = 0;
    double ratio3 = 0; // sigma3 / sigma1 (0 when sigma1 = 0)
    Mat54 jacobian{};
};

std::array<double, 4> singular_values(const Mat54& m);
RankReport rank_of(const Mat54& j, double tol_ratio = 1e-6);
RankReport jacobian_rank(const Field& f, const SpacetimePoint& pt, double h = 1e-5, double tol_ratio = 1e-6);

struct DecompositionFit {
    double xi = 0;           // weight of gamma (x) lam
    double coeff0 = 0;       // weight of gamma0 (x) lam0
    double rel_residual = 0; // |J - fit|_F / |J|_F
};

// Least squares of J onto span{gamma (x) lam, gamma0 (x) lam0}. Throws
// PreconditionError when the two basis matrices are dependent.
DecompositionFit decomposition_fit(const Mat54& j, const State5& gamma, const WaveCovector& lam, const State5& gamma0,
                                   const WaveCovector& lam0);
DecompositionFit decomposition_fit(const Field& f, const SpacetimePoint& pt, const State5& gamma,
                                   const WaveCovector& lam, const State5& gamma0, const WaveCovector& lam0,
                                   double h = 1e-5);

// Sampling lattice in (r0, r1).
struct RGrid {
    Interval r0, r1;
    std::size_t n0 = 5, n1 = 5;
};

using CovectorField = std::function<WaveCovector(double r0, double r1)>;

struct InvolutivityReport {
    double res_a = 0, res_b = 0, res_c = 0; // max relative residuals of the three span conditions
    double alpha1_min = 0, alpha1_max = 0;  // |alpha1| range over the grid
    std::size_t points = 0;
};

// d lam0/d r0 = alpha0 lam0, d lam0/d r1 = alpha1 lam1, d lam1/d r0 = beta0 lam0 + beta1 lam1.
InvolutivityReport involutivity_check(const CovectorField& lam0, const CovectorField& lam1, const RGrid& g,
                                      double h = 1e-5);

// A vector field on the 5-dimensional state space.
using UField = std::function<State5(const State5&)>;
using Surface = std::function<State5(double r0, double r1)>;

struct CommutatorReport {
    double max_abs = 0;
    double max_relative = 0; // against the larger of the two directional derivatives
};

// Lie bracket D gamma1 . gamma0 - D gamma0 . gamma1 at the points f(r0, r1).
CommutatorReport commutator_check(const UField& gamma0, const UField& gamma1, const Surface& f, const RGrid& g,
                                  double h = 1e-5);

enum class GradientMonitor { state, velocity };

struct BlowupFit {
    bool detected = false;
    double t_star = 0;
    double ci = 0; // half-width of an approximate 95% interval
    double exponent = 0;
    double r2 = 0;
    std::size_t samples = 0;
    std::string reason; // why nothing was detected
};

struct CatastropheSample {
    double t = 0;
    double gradient = 0; // NaN when evaluation failed
    std::string error;
};

struct CatastropheReport {
    std::vector<CatastropheSample> samples;
    BlowupFit fit;
};

// Fits G = C (T - t)^-beta to the tail of the samples.
BlowupFit fit_blowup(const std::vector<double>& t, const std::vector<double>& g);

// Max over the spatial grid (t axis of the grid ignored) of the Frobenius norm of the
// spatial Jacobian, per time.
CatastropheReport catastrophe_scan(const Field& f, const Grid4& spatial, const std::vector<double>& times,
                                   double h = 1e-5, GradientMonitor monitor = GradientMonitor::state);

} // namespace rinv
