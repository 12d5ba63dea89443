#include "nbde/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "nbde/poly.hpp"

namespace nbde {

namespace {

// 64-node Gauss-Legendre rule mapped to [0, 1].
const std::vector<std::pair<double, double>>& gl64() {
    static const std::vector<std::pair<double, double>> rule = [] {
        const int n = 64;
        std::vector<std::pair<double, double>> out(n);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 200; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            out[i] = {x, 2.0 / ((1.0 - x * x) * pp * pp)};
            out[n - 1 - i] = {-x, out[i].second};
        }
        for (auto& [node, weight] : out) {
            node = 0.5 * (node + 1.0);
            weight *= 0.5;
        }
        return out;
    }();
    return rule;
}

Ccdf random_ccdf(int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(m);
    for (auto& x : v) x = u(rng);
    std::sort(v.begin(), v.end(), std::greater<>());
    return Ccdf(m, std::move(v));
}

Ccdf scaled_ccdf(const Ccdf& base, double t) {
    Ccdf out = base;
    for (auto& x : out.tail) x *= t;
    return out;
}

// Packed coordinates for the unknown entries of a symmetric matrix.
struct SymmetricUnknowns {
    int m = 0;
    bool diagonal_only = false;

    int count() const { return diagonal_only ? m : m * (m + 1) / 2; }

    // column of the (a,b) entry, or -1 when that entry is pinned to zero
    int col(int a, int b) const {
        if (a > b) std::swap(a, b);
        if (diagonal_only) return a == b ? a : -1;
        return a * m - a * (a - 1) / 2 + (b - a);
    }

    Eigen::MatrixXd unpack(const Eigen::VectorXd& v) const {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
        for (int a = 0; a < m; ++a) {
            for (int b = a; b < m; ++b) {
                const int c = col(a, b);
                if (c >= 0) {
                    D(a, b) = v(c);
                    D(b, a) = v(c);
                }
            }
        }
        return D;
    }
};

struct ConstraintAssembler {
    SymmetricUnknowns unknowns;
    std::vector<Eigen::VectorXd> rows;

    // one row per symmetry defect entry (s,t), s < t: the (s,t) and (t,s)
    // entries of J^T-weighted D must match:
    //   sum_j d_{s j} J(j, t) - sum_j d_{t j} J(j, s) = 0
    void add_jacobian_rows(const Eigen::MatrixXd& J) {
        const int m = unknowns.m;
        for (int s = 0; s < m; ++s) {
            for (int t = s + 1; t < m; ++t) {
                Eigen::VectorXd row = Eigen::VectorXd::Zero(unknowns.count());
                for (int j = 0; j < m; ++j) {
                    const int c1 = unknowns.col(s, j);
                    if (c1 >= 0) row(c1) += J(j, t);
                    const int c2 = unknowns.col(t, j);
                    if (c2 >= 0) row(c2) -= J(j, s);
                }
                push(row);
            }
        }
    }

    // same constraints with exact polynomial coefficients: one row per monomial
    void add_polynomial_rows(const std::vector<std::vector<MultiPoly>>& partials) {
        const int m = unknowns.m;
        for (int s = 0; s < m; ++s) {
            for (int t = s + 1; t < m; ++t) {
                std::map<Exponents, Eigen::VectorXd> acc;
                auto row_for = [&](const Exponents& e) -> Eigen::VectorXd& {
                    auto it = acc.find(e);
                    if (it == acc.end()) {
                        it = acc.emplace(e, Eigen::VectorXd::Zero(unknowns.count())).first;
                    }
                    return it->second;
                };
                for (int j = 0; j < m; ++j) {
                    const int c1 = unknowns.col(s, j);
                    if (c1 >= 0) {
                        for (const auto& [e, c] : partials[j][t].terms()) {
                            row_for(e)(c1) += to_double(c);
                        }
                    }
                    const int c2 = unknowns.col(t, j);
                    if (c2 >= 0) {
                        for (const auto& [e, c] : partials[j][s].terms()) {
                            row_for(e)(c2) -= to_double(c);
                        }
                    }
                }
                for (auto& [e, row] : acc) push(row);
            }
        }
    }

    void push(const Eigen::VectorXd& row) {
        const double n = row.norm();
        if (n > 1e-14) rows.push_back(row / n);
    }

    Eigen::MatrixXd stacked() const {
        Eigen::MatrixXd A(rows.size(), unknowns.count());
        for (std::size_t r = 0; r < rows.size(); ++r) A.row(r) = rows[r];
        return A;
    }
};

Eigen::MatrixXd kernel_of(const Eigen::MatrixXd& A, int unknowns, double rel_tol) {
    if (A.rows() == 0) return Eigen::MatrixXd::Identity(unknowns, unknowns);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() ? sv(0) * rel_tol : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(unknowns - rank);
}

// Normalizes so the largest-magnitude entry equals +1; returns false when any
// entry fails strict positivity.
bool normalize_positive(Eigen::VectorXd& v, double tol) {
    int idx = 0;
    double best = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            idx = i;
        }
    }
    if (best == 0.0) return false;
    v /= v(idx);
    for (int i = 0; i < v.size(); ++i) {
        if (!(v(i) > tol)) return false;
    }
    return true;
}

std::vector<double> fold_eps_grid(const DConstructionOptions& opts) {
    return opts.eps_grid.empty()
               ? std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}
               : opts.eps_grid;
}

void assemble_symbolic(ConstraintAssembler& asmb, const EnsembleParams& params) {
    const int m = params.m;
    const auto g = expand_g(params);
    std::vector<std::vector<MultiPoly>> dg(m);
    for (int j = 0; j < m; ++j) {
        for (int n = 0; n < m; ++n) dg[j].push_back(g[j].derivative(n));
    }
    asmb.add_polynomial_rows(dg);

    const auto f = expand_f(params);
    for (int k = 1; k <= 9; ++k) {
        const Rational eps(k, 10);
        std::vector<std::vector<MultiPoly>> df(m);
        for (int j = 0; j < m; ++j) {
            const MultiPoly fj = f[j].at_eps(eps);
            for (int n = 0; n < m; ++n) df[j].push_back(fj.derivative(n));
        }
        asmb.add_polynomial_rows(df);
    }
}

void assemble_sampled(ConstraintAssembler& asmb, const EnsembleParams& params,
                      const DConstructionOptions& opts) {
    DeEvaluator ev(params);
    std::mt19937_64 rng(opts.seed);
    for (int s = 0; s < opts.sample_points; ++s) {
        const Ccdf x = random_ccdf(params.m, rng);
        asmb.add_jacobian_rows(ev.g_jacobian(x.tail.data()));
    }
    const auto grid = fold_eps_grid(opts);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int s = 0; s < opts.sample_points; ++s) {
        const Ccdf y = random_ccdf(params.m, rng);
        const double eps = s < static_cast<int>(grid.size()) ? grid[s] : u(rng);
        asmb.add_jacobian_rows(ev.f_jacobian(y.tail.data(), eps));
    }
}

std::string basis_to_string(const Eigen::MatrixXd& basis) {
    std::ostringstream os;
    os << basis;
    return os.str();
}

}  // namespace

bool DMatrix::valid(double det_tol) const {
    if (mat.rows() != m || mat.cols() != m) return false;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (!(mat(a, b) > 0.0)) return false;
            if (std::abs(mat(a, b) - mat(b, a)) > 1e-12) return false;
        }
    }
    return std::abs(mat.determinant()) > det_tol;
}

namespace {

struct NullspaceSolve {
    Eigen::MatrixXd kernel;
    std::vector<Eigen::VectorXd> positive;  // normalized positive candidates
};

NullspaceSolve solve_positive(const EnsembleParams& params, const DConstructionOptions& opts) {
    ConstraintAssembler asmb;
    asmb.unknowns = SymmetricUnknowns{params.m, opts.diagonal_only};
    if (params.m <= 4 && params.dc <= 16 && params.dv <= 8) {
        assemble_symbolic(asmb, params);
    } else {
        assemble_sampled(asmb, params, opts);
    }
    NullspaceSolve out;
    out.kernel = kernel_of(asmb.stacked(), asmb.unknowns.count(), opts.rank_rel_tol);
    const int dim = static_cast<int>(out.kernel.cols());
    if (dim == 0) return out;

    auto consider = [&](Eigen::VectorXd v) {
        if (!normalize_positive(v, opts.positivity_tol)) return;
        for (const auto& seen : out.positive) {
            if ((seen - v).lpNorm<Eigen::Infinity>() < 1e-9) return;
        }
        out.positive.push_back(std::move(v));
    };

    // projection of the all-ones direction onto the nullspace, then the basis
    // vectors, then random combinations
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(asmb.unknowns.count());
    consider(out.kernel * (out.kernel.transpose() * ones));
    for (int c = 0; c < dim; ++c) {
        consider(out.kernel.col(c));
        consider(-out.kernel.col(c));
    }
    if (dim > 1) {
        std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int trial = 0; trial < 512; ++trial) {
            Eigen::VectorXd mix(dim);
            for (int c = 0; c < dim; ++c) mix(c) = gauss(rng);
            consider(out.kernel * mix);
        }
    }
    return out;
}

}  // namespace

DMatrix construct_D(const EnsembleParams& params, const DConstructionOptions& opts,
                    DConstructionInfo* info) {
    if (opts.diagonal_only) {
        throw ArgumentError("construct_D: use diagonal_D_feasible for the diagonal probe");
    }
    const NullspaceSolve solve = solve_positive(params, opts);
    if (info) {
        info->nullspace_dim = static_cast<int>(solve.kernel.cols());
        info->nullspace_basis = solve.kernel;
        info->candidates.clear();
    }
    if (solve.positive.empty()) {
        throw ConstructionError(
            "construct_D: no strictly positive symmetric solution in a nullspace of dimension " +
            std::to_string(solve.kernel.cols()) + "; basis:\n" + basis_to_string(solve.kernel));
    }

    const SymmetricUnknowns unknowns{params.m, false};
    DMatrix D{params.m, unknowns.unpack(solve.positive.front())};
    if (info) {
        for (const auto& v : solve.positive) {
            info->candidates.push_back(DMatrix{params.m, unknowns.unpack(v)});
        }
    }
    if (!D.valid()) {
        throw ConstructionError("construct_D: candidate failed the symmetry/positivity/"
                                "determinant checks");
    }

    // revalidate: the matrix must symmetrize both Jacobians at fresh random
    // states and channel parameters, and the two-path integrals must agree
    DeEvaluator ev(params);
    std::mt19937_64 rng(opts.seed ^ 0xc2b2ae3d27d4eb4full);
    std::uniform_real_distribution<double> ueps(0.02, 0.98);
    double residual = 0.0;
    for (int s = 0; s < opts.validate_eps_count; ++s) {
        const Ccdf y = random_ccdf(params.m, rng);
        const Ccdf x = random_ccdf(params.m, rng);
        const double eps = ueps(rng);
        const Eigen::MatrixXd Jf = ev.f_jacobian(y.tail.data(), eps);
        const Eigen::MatrixXd Jg = ev.g_jacobian(x.tail.data());
        const double scale_f = 1.0 + Jf.cwiseAbs().maxCoeff();
        const double scale_g = 1.0 + Jg.cwiseAbs().maxCoeff();
        residual = std::max(residual,
                            (D.mat * Jf - Jf.transpose() * D.mat).cwiseAbs().maxCoeff() / scale_f);
        residual = std::max(residual,
                            (D.mat * Jg - Jg.transpose() * D.mat).cwiseAbs().maxCoeff() / scale_g);
    }
    const double mismatch = path_independence_mismatch(D, params, 8, opts.seed + 1);
    if (info) {
        info->residual = residual;
        info->path_mismatch = mismatch;
    }
    if (residual > opts.validate_tol || mismatch > opts.validate_tol) {
        std::ostringstream os;
        os << "construct_D: validation failed (symmetry residual " << residual
           << ", two-path mismatch " << mismatch << ")";
        throw ConstructionError(os.str());
    }
    return D;
}

bool diagonal_D_feasible(const EnsembleParams& params, const DConstructionOptions& opts,
                         DConstructionInfo* info) {
    DConstructionOptions diag = opts;
    diag.diagonal_only = true;
    const NullspaceSolve solve = solve_positive(params, diag);
    if (info) {
        info->nullspace_dim = static_cast<int>(solve.kernel.cols());
        info->nullspace_basis = solve.kernel;
        info->candidates.clear();
        const SymmetricUnknowns unknowns{params.m, true};
        for (const auto& v : solve.positive) {
            info->candidates.push_back(DMatrix{params.m, unknowns.unpack(v)});
        }
    }
    return !solve.positive.empty();
}

namespace {

// integral of v(p(t)) . D . dp/dt over one straight segment, 64-node GL
template <typename Field>
double segment_integral(Field&& field, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                        const Eigen::MatrixXd& D) {
    const Eigen::VectorXd dir = to - from;
    const Eigen::VectorXd Ddir = D * dir;
    const int m = static_cast<int>(from.size());
    std::vector<double> point(m), value(m);
    double acc = 0.0;
    for (const auto& [node, weight] : gl64()) {
        for (int i = 0; i < m; ++i) point[i] = from(i) + node * dir(i);
        field(point.data(), value.data());
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += value[i] * Ddir(i);
        acc += weight * dot;
    }
    return acc;
}

Eigen::VectorXd to_vec(const Ccdf& x) {
    return Eigen::Map<const Eigen::VectorXd>(x.tail.data(), x.m);
}

}  // namespace

double scalar_F(const Ccdf& y, double eps, const DMatrix& D, const EnsembleParams& params) {
    DeEvaluator ev(params);
    return segment_integral([&](const double* p, double* v) { ev.f(p, eps, v); },
                            Eigen::VectorXd::Zero(params.m), to_vec(y), D.mat);
}

double scalar_G(const Ccdf& x, const DMatrix& D, const EnsembleParams& params) {
    DeEvaluator ev(params);
    return segment_integral([&](const double* p, double* v) { ev.g(p, v); },
                            Eigen::VectorXd::Zero(params.m), to_vec(x), D.mat);
}

namespace {

template <typename Field>
double staircase_integral(Field&& field, const Eigen::VectorXd& target,
                          const Eigen::MatrixXd& D) {
    const int m = static_cast<int>(target.size());
    double acc = 0.0;
    Eigen::VectorXd from = Eigen::VectorXd::Zero(m);
    for (int a = 0; a < m; ++a) {
        Eigen::VectorXd to = from;
        to(a) = target(a);
        acc += segment_integral(field, from, to, D);
        from = to;
    }
    return acc;
}

}  // namespace

double scalar_F_staircase(const Ccdf& y, double eps, const DMatrix& D,
                          const EnsembleParams& params) {
    DeEvaluator ev(params);
    return staircase_integral([&](const double* p, double* v) { ev.f(p, eps, v); }, to_vec(y),
                              D.mat);
}

double scalar_G_staircase(const Ccdf& x, const DMatrix& D, const EnsembleParams& params) {
    DeEvaluator ev(params);
    return staircase_integral([&](const double* p, double* v) { ev.g(p, v); }, to_vec(x), D.mat);
}

double path_independence_mismatch(const DMatrix& D, const EnsembleParams& params, int samples,
                                  unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ueps(0.05, 0.95);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Ccdf y = random_ccdf(params.m, rng);
        const double eps = ueps(rng);
        worst = std::max(worst, std::abs(scalar_F(y, eps, D, params) -
                                         scalar_F_staircase(y, eps, D, params)));
        const Ccdf x = random_ccdf(params.m, rng);
        worst = std::max(worst,
                         std::abs(scalar_G(x, D, params) - scalar_G_staircase(x, D, params)));
    }
    return worst;
}

double potential_U(const Ccdf& x, double eps, const DMatrix& D, const EnsembleParams& params) {
    DeEvaluator ev(params);
    Ccdf gx(params.m);
    ev.g(x.tail.data(), gx.tail.data());
    const Eigen::VectorXd xv = to_vec(x);
    const Eigen::VectorXd gv = to_vec(gx);
    const double bilinear = gv.dot(D.mat * xv);
    return bilinear - scalar_G(x, D, params) - scalar_F(gx, eps, D, params);
}

Eigen::RowVectorXd potential_gradient(const Ccdf& x, double eps, const DMatrix& D,
                                      const EnsembleParams& params) {
    DeEvaluator ev(params);
    Ccdf gx(params.m), fgx(params.m);
    ev.g(x.tail.data(), gx.tail.data());
    ev.f(gx.tail.data(), eps, fgx.tail.data());
    const Eigen::MatrixXd Gd = ev.g_jacobian(x.tail.data());
    const Eigen::RowVectorXd diff = (to_vec(x) - to_vec(fgx)).transpose();
    return diff * D.mat * Gd;
}

DeltaEResult delta_E(double eps, const DMatrix& D, const EnsembleParams& params,
                     const DeConfig& cfg) {
    const double nonzero_tol = 1e-6;
    const Ccdf p = channel_ccdf(eps, params.m);

    DeltaEResult res;
    auto add_fixed_point = [&](const Ccdf& x) {
        if (x.max_abs() <= nonzero_tol) return;
        for (const auto& seen : res.fixed_points) {
            double dist = 0.0;
            for (int i = 0; i < x.m; ++i) dist = std::max(dist, std::abs(x.tail[i] - seen.tail[i]));
            if (dist <= 1e-6) return;
        }
        res.fixed_points.push_back(x);
        res.U_values.push_back(potential_U(x, eps, D, params));
    };

    for (int step = 1; step <= 10; ++step) {
        const DeResult r = de_fixed_point_from(scaled_ccdf(p, 0.1 * step), eps, params, cfg);
        if (r.converged && !r.decoded) add_fixed_point(r.x);
    }

    double boundary_min = std::numeric_limits<double>::infinity();
    if (params.m <= 2) {
        // coarse scan of the channel-box boundary; only points outside the
        // zero-decoding basin count toward the infimum
        std::vector<Ccdf> candidates;
        if (params.m == 1) {
            candidates.push_back(p);
        } else {
            const double p1 = p.tail[0], p2 = p.tail[1];
            for (int i = 0; i <= 20; ++i) {
                const double t = i / 20.0;
                candidates.push_back(Ccdf(2, {p1, t * std::min(p1, p2)}));
                candidates.push_back(Ccdf(2, {p2 + t * (p1 - p2), p2}));
            }
        }
        for (const auto& c : candidates) {
            if (c.max_abs() <= nonzero_tol) continue;
            const DeResult r = de_fixed_point_from(c, eps, params, cfg);
            if (r.decoded) continue;
            boundary_min = std::min(boundary_min, potential_U(c, eps, D, params));
            if (r.converged) add_fixed_point(r.x);
        }
    }

    if (res.fixed_points.empty() && !std::isfinite(boundary_min)) {
        res.infinite = true;
        return res;
    }
    double value = boundary_min;
    for (double u : res.U_values) value = std::min(value, u);
    res.value = value;
    return res;
}

double potential_threshold(const DMatrix& D, const EnsembleParams& params, const DeConfig& cfg,
                           double eps_bp_hint) {
    const double eps_bp =
        eps_bp_hint >= 0.0 ? eps_bp_hint : bp_threshold_uncoupled(params, cfg);
    auto nonneg_gap = [&](double eps) {
        const DeltaEResult r = delta_E(eps, D, params, cfg);
        return r.infinite || r.value >= 0.0;
    };
    if (nonneg_gap(1.0)) return 1.0;
    return bisect_threshold(nonneg_gap, eps_bp, 1.0, cfg.bisect_tol);
}

double coupled_potential(const CoupledState& X, double eps, const DMatrix& D,
                         const EnsembleParams& params, const CouplingMatrix& M) {
    const int N = M.cols();
    const int L = M.rows();
    const int m = params.m;
    if (X.N != N || X.m != m) throw ArgumentError("coupled_potential: state/matrix mismatch");
    DeEvaluator ev(params);

    std::vector<double> gvals(static_cast<std::size_t>(N) * m);
    for (int i = 0; i < N; ++i) {
        ev.g(X.row(i), gvals.data() + static_cast<std::size_t>(i) * m);
    }

    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double* gi = gvals.data() + static_cast<std::size_t>(i) * m;
        const Eigen::Map<const Eigen::VectorXd> gv(gi, m);
        const Eigen::Map<const Eigen::VectorXd> xv(X.row(i), m);
        acc += gv.dot(D.mat * xv);
        acc -= scalar_G(X.row_ccdf(i), D, params);
    }
    const double inv_w = 1.0 / M.w;
    Ccdf y(m);
    for (int t = 0; t < L; ++t) {
        std::fill(y.tail.begin(), y.tail.end(), 0.0);
        for (int r = t; r < t + M.w; ++r) {
            const double* gr = gvals.data() + static_cast<std::size_t>(r) * m;
            for (int k = 0; k < m; ++k) y.tail[k] += gr[k];
        }
        for (int k = 0; k < m; ++k) y.tail[k] *= inv_w;
        acc -= scalar_F(y, eps, D, params);
    }
    return acc;
}

KBoundReport k_bound(double eps, const DMatrix& D, const EnsembleParams& params,
                     const DeConfig& cfg, int random_points, unsigned seed) {
    const DeltaEResult gap = delta_E(eps, D, params, cfg);
    if (!gap.infinite && gap.value <= 0.0) {
        throw UndefinedBoundError("k_bound: nonpositive energy gap at eps = " +
                                  std::to_string(eps));
    }

    const int m = params.m;
    const Ccdf p = channel_ccdf(eps, m);
    std::vector<Ccdf> points;
    for (int i = 1; i <= 20; ++i) points.push_back(scaled_ccdf(p, i / 20.0));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < random_points; ++s) {
        std::vector<double> v(m);
        for (auto& t : v) t = u(rng);
        std::sort(v.begin(), v.end(), std::greater<>());
        for (int i = 0; i < m; ++i) v[i] *= p.tail[i];
        points.push_back(Ccdf(m, std::move(v)));
    }

    const double h = 1e-4;
    auto U_at = [&](Ccdf x) { return potential_U(x, eps, D, params); };
    double K = 0.0;
    for (const auto& x0 : points) {
        const double u0 = U_at(x0);
        for (int a = 0; a < m; ++a) {
            Ccdf xp = x0, xm = x0;
            xp.tail[a] += h;
            xm.tail[a] -= h;
            K = std::max(K, std::abs((U_at(xp) - 2.0 * u0 + U_at(xm)) / (h * h)));
            for (int b = a + 1; b < m; ++b) {
                Ccdf xpp = x0, xpm = x0, xmp = x0, xmm = x0;
                xpp.tail[a] += h;
                xpp.tail[b] += h;
                xpm.tail[a] += h;
                xpm.tail[b] -= h;
                xmp.tail[a] -= h;
                xmp.tail[b] += h;
                xmm.tail[a] -= h;
                xmm.tail[b] -= h;
                K = std::max(K, std::abs((U_at(xpp) - U_at(xpm) - U_at(xmp) + U_at(xmm)) /
                                         (4.0 * h * h)));
            }
        }
    }

    KBoundReport rep;
    rep.eps = eps;
    rep.K = K;
    rep.delta_e_infinite = gap.infinite;
    rep.delta_e = gap.infinite ? std::numeric_limits<double>::infinity() : gap.value;
    rep.w_min = gap.infinite ? 0.0 : m * K / (2.0 * gap.value);
    return rep;
}

}  // namespace nbde
