#include "nbde/de.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nbde {

EnsembleParams::EnsembleParams(int dv_, int dc_, int m_) : dv(dv_), dc(dc_), m(m_) {
    if (dv < 2) throw ArgumentError("EnsembleParams: dv must be >= 2");
    if (dc <= dv) throw ArgumentError("EnsembleParams: dc must exceed dv (positive design rate)");
    if (m < 1 || m > kMaxM) throw ArgumentError("EnsembleParams: m must be in [1, 16]");
}

Pmf::Pmf(int m_, std::vector<double> p) : m(m_), probs(std::move(p)) {
    if (static_cast<int>(probs.size()) != m + 1) throw ArgumentError("Pmf: needs m + 1 entries");
}

double Pmf::sum() const {
    double s = 0;
    for (double v : probs) s += v;
    return s;
}

bool Pmf::valid(double tol) const {
    for (double v : probs) {
        if (!(v >= -tol && v <= 1 + tol)) return false;
    }
    return std::abs(sum() - 1.0) <= tol;
}

Ccdf::Ccdf(int m_, std::vector<double> t) : m(m_), tail(std::move(t)) {
    if (static_cast<int>(tail.size()) != m) throw ArgumentError("Ccdf: needs m entries");
}

double Ccdf::max_abs() const {
    double v = 0;
    for (double t : tail) v = std::max(v, std::abs(t));
    return v;
}

bool Ccdf::valid(double tol) const {
    double prev = 1.0 + tol;
    for (double t : tail) {
        if (!(t >= -tol && t <= prev + tol)) return false;
        prev = t;
    }
    return true;
}

namespace {

inline void pmf_from_ccdf_raw(const double* x, double* p, int m) {
    // prepend x_0 = 1, append x_{m+1} = 0
    p[0] = 1.0 - x[0];
    for (int i = 1; i < m; ++i) p[i] = x[i - 1] - x[i];
    p[m] = x[m - 1];
}

inline void ccdf_from_pmf_raw(const double* p, double* x, int m) {
    double acc = 0.0;
    for (int i = m; i >= 1; --i) {
        acc += p[i];
        x[i - 1] = acc;
    }
}

// out_k = sum_{i,j} V(i,j,k) a_i b_j over the feasible support
// (k <= min(i,j), i + j - k <= m). Only inputs with i >= k contribute.
inline void boxdot_raw(const double* a, const double* b, double* out, const CoeffTensors& t) {
    const int m = t.m();
    for (int k = 0; k <= m; ++k) {
        double acc = 0.0;
        for (int i = k; i <= m; ++i) {
            const double ai = a[i];
            if (ai == 0.0) continue;
            double inner = 0.0;
            const int jhi = m - i + k;
            for (int j = k; j <= jhi; ++j) inner += t.v(i, j, k) * b[j];
            acc += ai * inner;
        }
        out[k] = acc;
    }
}

// out_k = sum_{i,j} C(i,j,k) a_i b_j; support is max(i,j) <= k <= min(i+j, m),
// so only inputs with i <= k contribute.
inline void boxtimes_raw(const double* a, const double* b, double* out, const CoeffTensors& t) {
    const int m = t.m();
    for (int k = 0; k <= m; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double ai = a[i];
            if (ai == 0.0) continue;
            double inner = 0.0;
            for (int j = k - i; j <= k; ++j) inner += t.c(i, j, k) * b[j];
            acc += ai * inner;
        }
        out[k] = acc;
    }
}

}  // namespace

Pmf pmf_from_ccdf(const Ccdf& x) {
    Pmf p(x.m, std::vector<double>(x.m + 1, 0.0));
    pmf_from_ccdf_raw(x.tail.data(), p.probs.data(), x.m);
    return p;
}

Ccdf ccdf_from_pmf(const Pmf& p) {
    Ccdf x(p.m);
    ccdf_from_pmf_raw(p.probs.data(), x.tail.data(), p.m);
    return x;
}

Pmf channel_pmf(double eps, int m) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw ArgumentError("channel_pmf: eps outside [0, 1]");
    if (m < 1 || m > kMaxM) throw ArgumentError("channel_pmf: m outside [1, 16]");
    Pmf p(m, std::vector<double>(m + 1, 0.0));
    // binom(m, i) eps^i (1-eps)^{m-i}
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        if (i > 0) binom *= static_cast<double>(m - i + 1) / i;
        p.probs[i] = binom * std::pow(eps, i) * std::pow(1.0 - eps, m - i);
    }
    return p;
}

Ccdf channel_ccdf(double eps, int m) { return ccdf_from_pmf(channel_pmf(eps, m)); }

Pmf boxdot(const Pmf& a, const Pmf& b) {
    if (a.m != b.m) throw ArgumentError("boxdot: dimension mismatch");
    Pmf out(a.m, std::vector<double>(a.m + 1, 0.0));
    boxdot_raw(a.probs.data(), b.probs.data(), out.probs.data(), coeff_tensors(a.m));
    return out;
}

Pmf boxtimes(const Pmf& a, const Pmf& b) {
    if (a.m != b.m) throw ArgumentError("boxtimes: dimension mismatch");
    Pmf out(a.m, std::vector<double>(a.m + 1, 0.0));
    boxtimes_raw(a.probs.data(), b.probs.data(), out.probs.data(), coeff_tensors(a.m));
    return out;
}

DeEvaluator::DeEvaluator(const EnsembleParams& params)
    : params_(params),
      tensors_(coeff_tensors(params.m)),
      pa_(params.m + 1),
      pb_(params.m + 1),
      pc_(params.m + 1),
      chan_(params.m + 1) {}

void DeEvaluator::channel_into(double eps, double* out) const {
    const int m = params_.m;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        if (i > 0) binom *= static_cast<double>(m - i + 1) / i;
        out[i] = binom * std::pow(eps, i) * std::pow(1.0 - eps, m - i);
    }
}

void DeEvaluator::f(const double* y, double eps, double* out) {
    const int m = params_.m;
    pmf_from_ccdf_raw(y, pa_.data(), m);
    // left fold of dv - 1 copies under the intersection operator
    for (int r = 1; r < params_.dv - 1; ++r) {
        pmf_from_ccdf_raw(y, pb_.data(), m);
        boxdot_raw(pa_.data(), pb_.data(), pc_.data(), tensors_);
        std::swap(pa_, pc_);
    }
    channel_into(eps, chan_.data());
    boxdot_raw(chan_.data(), pa_.data(), pc_.data(), tensors_);
    ccdf_from_pmf_raw(pc_.data(), out, m);
}

void DeEvaluator::g(const double* x, double* out) {
    const int m = params_.m;
    pmf_from_ccdf_raw(x, pa_.data(), m);
    for (int r = 1; r < params_.dc - 1; ++r) {
        pmf_from_ccdf_raw(x, pb_.data(), m);
        boxtimes_raw(pa_.data(), pb_.data(), pc_.data(), tensors_);
        std::swap(pa_, pc_);
    }
    ccdf_from_pmf_raw(pa_.data(), out, m);
}

namespace {

// d(a (x) u)_k / d a_i with the second argument held fixed.
Eigen::MatrixXd op_jacobian_first(const double* u, const CoeffTensors& t, bool variable_side) {
    const int m = t.m();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int k = 0; k <= m; ++k) {
        for (int i = 0; i <= m; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= m; ++j) {
                acc += (variable_side ? t.v(i, j, k) : t.c(i, j, k)) * u[j];
            }
            J(k, i) = acc;
        }
    }
    return J;
}

// d(r (x) u)_k / d u_j with the first argument held fixed.
Eigen::MatrixXd op_jacobian_second(const double* r, const CoeffTensors& t, bool variable_side) {
    const int m = t.m();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int k = 0; k <= m; ++k) {
        for (int j = 0; j <= m; ++j) {
            double acc = 0.0;
            for (int i = 0; i <= m; ++i) {
                acc += (variable_side ? t.v(i, j, k) : t.c(i, j, k)) * r[i];
            }
            J(k, j) = acc;
        }
    }
    return J;
}

// pmf = B x + e_0 in CCDF coordinates
Eigen::MatrixXd pmf_of_ccdf_matrix(int m) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m);
    B(0, 0) = -1.0;
    for (int i = 1; i < m; ++i) {
        B(i, i - 1) = 1.0;
        B(i, i) = -1.0;
    }
    B(m, m - 1) = 1.0;
    return B;
}

// tail sums: ccdf_k = sum_{j >= k} pmf_j, k = 1..m
Eigen::MatrixXd ccdf_of_pmf_matrix(int m) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m + 1);
    for (int r = 0; r < m; ++r) {
        for (int j = r + 1; j <= m; ++j) S(r, j) = 1.0;
    }
    return S;
}

}  // namespace

void DeEvaluator::fold_jacobian(const double* base_pmf, int count, bool variable_side,
                                double* result_pmf, Eigen::MatrixXd& jac) {
    const int m = params_.m;
    std::vector<double> cur(base_pmf, base_pmf + m + 1);
    std::vector<double> next(m + 1);
    jac = Eigen::MatrixXd::Identity(m + 1, m + 1);
    for (int r = 1; r < count; ++r) {
        // product rule for r_next = r_cur (x) base
        Eigen::MatrixXd Ma = op_jacobian_first(base_pmf, tensors_, variable_side);
        Eigen::MatrixXd Nb = op_jacobian_second(cur.data(), tensors_, variable_side);
        jac = Ma * jac + Nb;
        if (variable_side) {
            boxdot_raw(cur.data(), base_pmf, next.data(), tensors_);
        } else {
            boxtimes_raw(cur.data(), base_pmf, next.data(), tensors_);
        }
        std::swap(cur, next);
    }
    std::copy(cur.begin(), cur.end(), result_pmf);
}

Eigen::MatrixXd DeEvaluator::f_jacobian(const double* y, double eps) {
    const int m = params_.m;
    std::vector<double> base(m + 1), folded(m + 1);
    pmf_from_ccdf_raw(y, base.data(), m);
    Eigen::MatrixXd Jfold;
    fold_jacobian(base.data(), params_.dv - 1, /*variable_side=*/true, folded.data(), Jfold);
    channel_into(eps, chan_.data());
    Eigen::MatrixXd Mchan = op_jacobian_second(chan_.data(), tensors_, /*variable_side=*/true);
    return ccdf_of_pmf_matrix(m) * Mchan * Jfold * pmf_of_ccdf_matrix(m);
}

Eigen::MatrixXd DeEvaluator::g_jacobian(const double* x) {
    const int m = params_.m;
    std::vector<double> base(m + 1), folded(m + 1);
    pmf_from_ccdf_raw(x, base.data(), m);
    Eigen::MatrixXd Jfold;
    fold_jacobian(base.data(), params_.dc - 1, /*variable_side=*/false, folded.data(), Jfold);
    return ccdf_of_pmf_matrix(m) * Jfold * pmf_of_ccdf_matrix(m);
}

Ccdf f_ccdf(const Ccdf& y, double eps, const EnsembleParams& params) {
    if (y.m != params.m) throw ArgumentError("f_ccdf: dimension mismatch");
    if (!(eps >= 0.0 && eps <= 1.0)) throw ArgumentError("f_ccdf: eps outside [0, 1]");
    DeEvaluator ev(params);
    Ccdf out(params.m);
    ev.f(y.tail.data(), eps, out.tail.data());
    return out;
}

Ccdf g_ccdf(const Ccdf& x, const EnsembleParams& params) {
    if (x.m != params.m) throw ArgumentError("g_ccdf: dimension mismatch");
    DeEvaluator ev(params);
    Ccdf out(params.m);
    ev.g(x.tail.data(), out.tail.data());
    return out;
}

namespace {

void check_deadline(const DeConfig& cfg, int iteration) {
    if (!cfg.deadline || (iteration & 0xff) != 0) return;
    if (std::chrono::steady_clock::now() > *cfg.deadline) {
        throw TimeoutError("density evolution: deadline expired at iteration " +
                           std::to_string(iteration));
    }
}

}  // namespace

DeResult de_fixed_point_from(Ccdf x0, double eps, const EnsembleParams& params,
                             const DeConfig& cfg) {
    if (x0.m != params.m) throw ArgumentError("de_fixed_point_from: dimension mismatch");
    if (!(eps >= 0.0 && eps <= 1.0)) throw ArgumentError("de_fixed_point_from: eps outside [0, 1]");
    DeEvaluator ev(params);
    const int m = params.m;
    std::vector<double> x = std::move(x0.tail);
    std::vector<double> gx(m), next(m);

    DeResult res;
    res.decoded = true;
    for (int i = 0; i < m; ++i) res.decoded = res.decoded && std::abs(x[i]) < cfg.zero_tol;
    if (res.decoded) {
        res.x = Ccdf(m, std::move(x));
        res.converged = true;
        return res;
    }

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        check_deadline(cfg, iter);
        ev.g(x.data(), gx.data());
        ev.f(gx.data(), eps, next.data());
        double delta = 0.0, maxv = 0.0;
        for (int i = 0; i < m; ++i) {
            delta = std::max(delta, std::abs(next[i] - x[i]));
            maxv = std::max(maxv, std::abs(next[i]));
        }
        x.swap(next);
        res.iterations = iter;
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
    res.x = Ccdf(m, std::move(x));
    return res;
}

DeResult de_fixed_point(double eps, const EnsembleParams& params, const DeConfig& cfg) {
    return de_fixed_point_from(channel_ccdf(eps, params.m), eps, params, cfg);
}

double bp_threshold_uncoupled(const EnsembleParams& params, const DeConfig& cfg) {
    return bisect_threshold(
        [&](double eps) { return de_fixed_point(eps, params, cfg).decoded; }, 0.0, 1.0,
        cfg.bisect_tol);
}

}  // namespace nbde
