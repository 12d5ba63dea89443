#pragma once

/// Message algebra and density evolution for regular nonbinary LDPC ensembles
/// on the binary erasure channel. Messages are subspaces of GF(2)^m; density
/// evolution tracks their dimension distribution, either as a pmf over
/// dimensions 0..m or as the equivalent CCDF tail vector (x_1,...,x_m) with
/// x_i = P(dim >= i). The CCDF form is the canonical iteration state: the
/// variable- and check-node maps are componentwise increasing there.

#include <chrono>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nbde/errors.hpp"
#include "nbde/subspace.hpp"

namespace nbde {

/// Regular ensemble: variable degree dv >= 2, check degree dc > dv,
/// symbols from GF(2^m) transmitted as m-bit binary images.
struct EnsembleParams {
    int dv;
    int dc;
    int m;

    EnsembleParams(int dv_, int dc_, int m_);

    double rate() const { return 1.0 - static_cast<double>(dv) / dc; }
};

/// Dimension distribution: probs[i] = P(message dimension = i), i = 0..m.
struct Pmf {
    int m = 0;
    std::vector<double> probs;  // size m + 1

    Pmf() = default;
    Pmf(int m_, std::vector<double> p);

    double sum() const;
    bool valid(double tol = 1e-12) const;
};

/// Tail distribution: tail[i-1] = x_i = P(message dimension >= i), i = 1..m.
/// Valid states are monotone nonincreasing with entries in [0, 1]
/// (implicitly x_0 = 1 and x_{m+1} = 0).
struct Ccdf {
    int m = 0;
    std::vector<double> tail;  // size m

    Ccdf() = default;
    explicit Ccdf(int m_) : m(m_), tail(m_, 0.0) {}
    Ccdf(int m_, std::vector<double> t);

    static Ccdf zero(int m_) { return Ccdf(m_); }

    double max_abs() const;
    bool valid(double tol = 1e-12) const;
};

Pmf pmf_from_ccdf(const Ccdf& x);
Ccdf ccdf_from_pmf(const Pmf& p);

/// Channel message dimension distribution on BEC(eps):
/// probs[i] = binom(m, i) eps^i (1-eps)^{m-i}.
Pmf channel_pmf(double eps, int m);
Ccdf channel_ccdf(double eps, int m);

/// Variable-node combining: distribution of dim(U cap W) for independent
/// uniformly-oriented subspaces with dimensions drawn from a and b.
Pmf boxdot(const Pmf& a, const Pmf& b);

/// Check-node combining: distribution of dim(U + W).
Pmf boxtimes(const Pmf& a, const Pmf& b);

/// Solver knobs. fp_tol stops the iteration (sup-norm change), zero_tol
/// declares successful decoding, bisect_tol terminates threshold searches.
struct DeConfig {
    int max_iters = 50000;
    double fp_tol = 1e-12;
    double zero_tol = 1e-9;
    double bisect_tol = 1e-5;
    /// Optional cooperative deadline; iterative solves throw TimeoutError past it.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Evaluation engine for one ensemble: the CCDF-domain update maps f and g and
/// their exact Jacobians. Holds scratch buffers, so use one instance per
/// thread; the shared tensor tables are immutable and safe to share.
class DeEvaluator {
   public:
    explicit DeEvaluator(const EnsembleParams& params);

    const EnsembleParams& params() const { return params_; }

    /// Variable-node map in CCDF coordinates: channel combined with dv-1
    /// incoming check messages. y and out have m entries and may alias.
    void f(const double* y, double eps, double* out);

    /// Check-node map in CCDF coordinates: dc-1 incoming variable messages.
    void g(const double* x, double* out);

    /// Jacobian of f with respect to y at fixed eps (m x m; row = component).
    Eigen::MatrixXd f_jacobian(const double* y, double eps);

    /// Jacobian of g (m x m).
    Eigen::MatrixXd g_jacobian(const double* x);

   private:
    void channel_into(double eps, double* out) const;
    void fold_jacobian(const double* base_pmf, int count, bool variable_side,
                       double* result_pmf, Eigen::MatrixXd& jac);

    EnsembleParams params_;
    const CoeffTensors& tensors_;
    std::vector<double> pa_, pb_, pc_, chan_;  // pmf scratch, size m + 1
};

/// One-shot wrappers around DeEvaluator.
Ccdf f_ccdf(const Ccdf& y, double eps, const EnsembleParams& params);
Ccdf g_ccdf(const Ccdf& x, const EnsembleParams& params);

struct DeResult {
    Ccdf x;
    int iterations = 0;
    bool decoded = false;
    bool converged = false;  // sup-norm change fell below fp_tol
};

/// Iterates x <- f(g(x); eps) from x0 = channel CCDF until the change is below
/// fp_tol or max_iters is hit. decoded means the fixed point is (numerically)
/// the all-zero state. Non-convergence is reported via the flag, not thrown.
DeResult de_fixed_point(double eps, const EnsembleParams& params, const DeConfig& cfg);

/// Same iteration from a caller-supplied starting state.
DeResult de_fixed_point_from(Ccdf x0, double eps, const EnsembleParams& params,
                             const DeConfig& cfg);

/// Largest eps that still decodes, located by bisection of the decoded flag
/// on [0, 1] down to bisect_tol.
double bp_threshold_uncoupled(const EnsembleParams& params, const DeConfig& cfg);

/// Generic bisection helper on a monotone decoded(eps) predicate.
/// Returns the midpoint of the final undecided bracket.
template <typename Predicate>
double bisect_threshold(Predicate&& decoded, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (decoded(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace nbde
