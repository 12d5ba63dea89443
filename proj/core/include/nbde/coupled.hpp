#pragma once

/// Spatially-coupled density evolution. L copies of the ensemble are chained
/// with a width-w uniform averaging window; termination at the chain ends
/// seeds a decoding wave. State is the stack of per-position CCDF vectors,
/// updated in the matrix form X = A^T F(A G(X); eps) with the banded
/// averaging matrix A.

#include <vector>

#include "nbde/de.hpp"

namespace nbde {

/// The L x (L+w-1) averaging matrix: row t carries 1/w in columns t..t+w-1
/// (0-indexed), zero elsewhere. Stored implicitly.
struct CouplingMatrix {
    int L = 0;
    int w = 0;

    int rows() const { return L; }
    int cols() const { return L + w - 1; }
    double at(int r, int c) const {
        return (c >= r && c < r + w) ? 1.0 / w : 0.0;
    }
};

CouplingMatrix build_coupling_matrix(int L, int w);

/// Per-position CCDF stack: N = L+w-1 rows of m tail entries, row-major.
/// The channel parameter applies at positions 1..L; the matrix update form
/// handles the zero-eps tail positions implicitly.
struct CoupledState {
    int N = 0;
    int m = 0;
    std::vector<double> X;  // row-major N x m

    CoupledState() = default;
    CoupledState(int N_, int m_) : N(N_), m(m_), X(static_cast<std::size_t>(N_) * m_, 0.0) {}

    double* row(int i) { return X.data() + static_cast<std::size_t>(i) * m; }
    const double* row(int i) const { return X.data() + static_cast<std::size_t>(i) * m; }

    double max_abs() const;
    /// Largest tail entry in row i.
    double position_max(int i) const;
    Ccdf row_ccdf(int i) const;
};

/// All rows initialized to the channel CCDF at eps.
CoupledState coupled_init(double eps, const EnsembleParams& params, const CouplingMatrix& M);

/// One synchronous update of the whole chain. next and cur must not alias.
void coupled_update(CoupledState& next, const CoupledState& cur, double eps,
                    const EnsembleParams& params, const CouplingMatrix& M, DeEvaluator& ev);

/// Convenience allocating form.
CoupledState coupled_update(const CoupledState& cur, double eps, const EnsembleParams& params,
                            const CouplingMatrix& M);

struct CoupledProfileSnapshot {
    int iteration = 0;
    std::vector<double> X;  // copy of the row-major state
};

struct CoupledResult {
    CoupledState X;
    int iterations = 0;
    bool decoded = false;
    bool converged = false;
    std::vector<CoupledProfileSnapshot> profile;  // sampled every profile_stride iterations
};

/// Iterates from the all-channel initialization until the sup-norm change
/// drops below fp_tol, every entry drops below zero_tol (decoded; early exit),
/// or max_iters is reached. profile_stride > 0 records state snapshots.
CoupledResult coupled_fixed_point(double eps, const EnsembleParams& params, int L, int w,
                                  const DeConfig& cfg, int profile_stride = 0);

/// Bisection of the coupled decoded flag on [0, 1] to bisect_tol.
double bp_threshold_coupled(const EnsembleParams& params, int L, int w, const DeConfig& cfg);

}  // namespace nbde
