#pragma once

/// Potential-function machinery: the symmetric positive matrix D that turns
/// the update maps into gradient fields, scalar potentials F and G defined by
/// path-independent line integrals, the single-system and coupled potentials,
/// the energy gap, the potential threshold, and the coupling-width bound.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nbde/coupled.hpp"
#include "nbde/de.hpp"

namespace nbde {

/// Symmetric m x m matrix with strictly positive entries and nonzero
/// determinant, normalized so the largest entry is 1.
struct DMatrix {
    int m = 0;
    Eigen::MatrixXd mat;

    bool valid(double det_tol = 1e-10) const;
};

struct DConstructionOptions {
    /// Channel parameters at which the variable-node integrability constraints
    /// are stacked (the matrix itself must not depend on the channel).
    std::vector<double> eps_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    /// Sample points per side for the Jacobian-sampling route (used when the
    /// symbolic expansion guard m <= 4 does not apply).
    int sample_points = 48;
    unsigned seed = 12345;
    double rank_rel_tol = 1e-9;
    double positivity_tol = 1e-6;
    double validate_tol = 1e-8;
    int validate_eps_count = 20;
    /// Restrict the unknowns to the diagonal (existence probe; expected to be
    /// infeasible for m >= 2).
    bool diagonal_only = false;
};

struct DConstructionInfo {
    int nullspace_dim = 0;
    std::vector<DMatrix> candidates;  // positive solutions found; first one is returned
    Eigen::MatrixXd nullspace_basis;  // packed upper-triangle coordinates
    double residual = 0.0;            // worst Jacobian-symmetry defect across validation samples
    double path_mismatch = 0.0;       // worst two-path line-integral discrepancy
};

/// Builds D from the requirement that f(.;eps) D and g(.) D are gradient
/// fields: the Jacobian of either map, multiplied by D, must be symmetric
/// identically. For m <= 4 the constraints are assembled exactly from the
/// polynomial expansions (coefficient matching); otherwise they are sampled at
/// random states using exact Jacobians. The nullspace of the stacked system is
/// searched for an all-positive symmetric solution, which is then re-validated
/// at random channel parameters and by a two-path integral check.
/// Throws ConstructionError (with the nullspace attached to the message) when
/// no positive solution exists or validation fails.
DMatrix construct_D(const EnsembleParams& params, const DConstructionOptions& opts = {},
                    DConstructionInfo* info = nullptr);

/// Existence probe for a diagonal D under the same constraint system.
bool diagonal_D_feasible(const EnsembleParams& params, const DConstructionOptions& opts = {},
                         DConstructionInfo* info = nullptr);

/// F(y; eps) = integral over the straight segment 0 -> y of f(. ; eps) D,
/// by 64-node Gauss-Legendre quadrature. F(0) = 0 exactly.
double scalar_F(const Ccdf& y, double eps, const DMatrix& D, const EnsembleParams& params);

/// G(x) = integral over the straight segment 0 -> x of g(.) D.
double scalar_G(const Ccdf& x, const DMatrix& D, const EnsembleParams& params);

/// Same integrals along the axis-parallel staircase path; agrees with the
/// straight-path value exactly when D solves the integrability system.
double scalar_F_staircase(const Ccdf& y, double eps, const DMatrix& D,
                          const EnsembleParams& params);
double scalar_G_staircase(const Ccdf& x, const DMatrix& D, const EnsembleParams& params);

/// Worst two-path discrepancy of F and G over `samples` random states
/// (uniformly drawn valid CCDF vectors, channel parameters in (0,1)).
double path_independence_mismatch(const DMatrix& D, const EnsembleParams& params, int samples,
                                  unsigned seed);

/// Single-system potential U(x; eps) = g(x) D x^T - G(x) - F(g(x); eps).
double potential_U(const Ccdf& x, double eps, const DMatrix& D, const EnsembleParams& params);

/// Gradient of the potential: (x - f(g(x); eps)) D G_d(x), with the exact
/// Jacobian G_d. Vanishes exactly at density-evolution fixed points.
Eigen::RowVectorXd potential_gradient(const Ccdf& x, double eps, const DMatrix& D,
                                      const EnsembleParams& params);

struct DeltaEResult {
    bool infinite = false;  // no nonzero fixed point reachable: the gap is +infinity
    double value = 0.0;
    std::vector<Ccdf> fixed_points;
    std::vector<double> U_values;
};

/// Energy gap: minimum of U over the distinct nonzero fixed points reached
/// from the channel state and a grid of scaled starts, with a coarse boundary
/// scan as a safeguard at m <= 2. Returns the +infinity flag when only the
/// zero fixed point exists (e.g. below the BP threshold).
DeltaEResult delta_E(double eps, const DMatrix& D, const EnsembleParams& params,
                     const DeConfig& cfg);

/// Largest eps in (eps_BP, 1] with a nonnegative energy gap, by bisection to
/// bisect_tol. Computes the uncoupled BP threshold itself unless a
/// nonnegative hint is supplied.
double potential_threshold(const DMatrix& D, const EnsembleParams& params, const DeConfig& cfg,
                           double eps_bp_hint = -1.0);

/// Coupled potential: Tr(G(X) D X^T) - sum_i G(x_i) - sum_t F([A G(X)]_t; eps),
/// with the row sums running over the whole chain and the channel rows.
double coupled_potential(const CoupledState& X, double eps, const DMatrix& D,
                         const EnsembleParams& params, const CouplingMatrix& M);

struct KBoundReport {
    double eps = 0.0;
    double K = 0.0;       // sup of the entrywise max norm of the potential Hessian
    double delta_e = 0.0; // +infinity reported as w_min = 0
    bool delta_e_infinite = false;
    double w_min = 0.0;   // m K / (2 delta_E)
    /// Interpretation of the Hessian norm recorded with every report.
    static constexpr const char* norm = "entrywise_max";
};

/// Estimates K over a grid of scaled channel states plus random interior
/// points (finite-difference Hessian of U) and reports the smoothing-width
/// bound. Throws UndefinedBoundError when the energy gap is nonpositive.
KBoundReport k_bound(double eps, const DMatrix& D, const EnsembleParams& params,
                     const DeConfig& cfg, int random_points = 64, unsigned seed = 12345);

/// Everything the potential analysis produces at one channel parameter.
struct PotentialReport {
    double eps = 0.0;
    std::vector<Ccdf> fixed_points;
    std::vector<double> U_values;
    bool delta_E_infinite = false;
    double delta_E = 0.0;
    double eps_star = 0.0;
    double eps_bp = 0.0;
};

}  // namespace nbde
