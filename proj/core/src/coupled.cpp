#include "nbde/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace nbde {

CouplingMatrix build_coupling_matrix(int L, int w) {
    if (L < 1) throw ArgumentError("build_coupling_matrix: L must be >= 1");
    if (w < 1) throw ArgumentError("build_coupling_matrix: w must be >= 1");
    return CouplingMatrix{L, w};
}

double CoupledState::max_abs() const {
    double v = 0;
    for (double t : X) v = std::max(v, std::abs(t));
    return v;
}

double CoupledState::position_max(int i) const {
    const double* r = row(i);
    double v = 0;
    for (int k = 0; k < m; ++k) v = std::max(v, std::abs(r[k]));
    return v;
}

Ccdf CoupledState::row_ccdf(int i) const {
    return Ccdf(m, std::vector<double>(row(i), row(i) + m));
}

CoupledState coupled_init(double eps, const EnsembleParams& params, const CouplingMatrix& M) {
    const Ccdf p = channel_ccdf(eps, params.m);
    CoupledState s(M.cols(), params.m);
    for (int i = 0; i < s.N; ++i) {
        std::copy(p.tail.begin(), p.tail.end(), s.row(i));
    }
    return s;
}

void coupled_update(CoupledState& next, const CoupledState& cur, double eps,
                    const EnsembleParams& params, const CouplingMatrix& M, DeEvaluator& ev) {
    const int N = M.cols();
    const int L = M.L;
    const int w = M.w;
    const int m = params.m;
    if (cur.N != N || cur.m != m) throw ArgumentError("coupled_update: state/matrix mismatch");
    if (next.N != N || next.m != m) next = CoupledState(N, m);

    const double inv_w = 1.0 / w;
    static thread_local std::vector<double> gvals, y, fvals;
    gvals.assign(static_cast<std::size_t>(N) * m, 0.0);
    y.assign(m, 0.0);
    fvals.assign(static_cast<std::size_t>(L) * m, 0.0);

    for (int r = 0; r < N; ++r) {
        ev.g(cur.row(r), gvals.data() + static_cast<std::size_t>(r) * m);
    }
    // Y = A G(X): row t averages window t..t+w-1; channel applies at all L rows.
    for (int t = 0; t < L; ++t) {
        std::fill(y.begin(), y.end(), 0.0);
        for (int r = t; r < t + w; ++r) {
            const double* gr = gvals.data() + static_cast<std::size_t>(r) * m;
            for (int k = 0; k < m; ++k) y[k] += gr[k];
        }
        for (int k = 0; k < m; ++k) y[k] *= inv_w;
        ev.f(y.data(), eps, fvals.data() + static_cast<std::size_t>(t) * m);
    }
    // X' = A^T F: position i averages the f-rows t in [i-w+1, i] clipped to [0, L).
    for (int i = 0; i < N; ++i) {
        double* xi = next.row(i);
        std::fill(xi, xi + m, 0.0);
        const int tlo = std::max(0, i - w + 1);
        const int thi = std::min(L - 1, i);
        for (int t = tlo; t <= thi; ++t) {
            const double* ft = fvals.data() + static_cast<std::size_t>(t) * m;
            for (int k = 0; k < m; ++k) xi[k] += ft[k];
        }
        for (int k = 0; k < m; ++k) xi[k] *= inv_w;
    }
}

CoupledState coupled_update(const CoupledState& cur, double eps, const EnsembleParams& params,
                            const CouplingMatrix& M) {
    DeEvaluator ev(params);
    CoupledState next(cur.N, cur.m);
    coupled_update(next, cur, eps, params, M, ev);
    return next;
}

namespace {

void snapshot(std::vector<CoupledProfileSnapshot>& profile, int iteration,
              const CoupledState& s) {
    profile.push_back(CoupledProfileSnapshot{iteration, s.X});
}

}  // namespace

CoupledResult coupled_fixed_point(double eps, const EnsembleParams& params, int L, int w,
                                  const DeConfig& cfg, int profile_stride) {
    const CouplingMatrix M = build_coupling_matrix(L, w);
    DeEvaluator ev(params);

    CoupledResult res;
    CoupledState cur = coupled_init(eps, params, M);
    CoupledState next(cur.N, cur.m);
    if (profile_stride > 0) snapshot(res.profile, 0, cur);

    if (cur.max_abs() < cfg.zero_tol) {
        res.X = std::move(cur);
        res.decoded = true;
        res.converged = true;
        return res;
    }

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        if (cfg.deadline && (iter & 0xff) == 0 &&
            std::chrono::steady_clock::now() > *cfg.deadline) {
            throw TimeoutError("coupled density evolution: deadline expired at iteration " +
                               std::to_string(iter));
        }
        coupled_update(next, cur, eps, params, M, ev);
        double delta = 0.0, maxv = 0.0;
        for (std::size_t idx = 0; idx < cur.X.size(); ++idx) {
            delta = std::max(delta, std::abs(next.X[idx] - cur.X[idx]));
            maxv = std::max(maxv, std::abs(next.X[idx]));
        }
        cur.X.swap(next.X);
        res.iterations = iter;
        if (profile_stride > 0 && iter % profile_stride == 0) snapshot(res.profile, iter, cur);
        if (maxv < cfg.zero_tol) {
            res.decoded = true;
            res.converged = true;
            break;
        }
        if (delta < cfg.fp_tol) {
            res.converged = true;
            break;
        }
    }
    if (profile_stride > 0 &&
        (res.profile.empty() || res.profile.back().iteration != res.iterations)) {
        snapshot(res.profile, res.iterations, cur);
    }
    res.X = std::move(cur);
    return res;
}

double bp_threshold_coupled(const EnsembleParams& params, int L, int w, const DeConfig& cfg) {
    return bisect_threshold(
        [&](double eps) { return coupled_fixed_point(eps, params, L, w, cfg).decoded; }, 0.0,
        1.0, cfg.bisect_tol);
}

}  // namespace nbde
