#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "nbde/de.hpp"
#include "test_helpers.hpp"

using namespace nbde;

namespace {

Pmf unit_mass(int m, int dim) {
    std::vector<double> p(m + 1, 0.0);
    p[dim] = 1.0;
    return Pmf(m, std::move(p));
}

Pmf boxdot_power(const Pmf& a, int count) {
    Pmf r = a;
    for (int i = 1; i < count; ++i) r = boxdot(r, a);
    return r;
}

Pmf boxtimes_power(const Pmf& a, int count) {
    Pmf r = a;
    for (int i = 1; i < count; ++i) r = boxtimes(r, a);
    return r;
}

}  // namespace

TEST_CASE("ensemble parameter validation") {
    CHECK_NOTHROW(EnsembleParams(2, 3, 1));  // dv = 2 is allowed
    CHECK_THROWS_AS(EnsembleParams(1, 3, 1), ArgumentError);
    CHECK_THROWS_AS(EnsembleParams(3, 3, 1), ArgumentError);  // zero design rate
    CHECK_THROWS_AS(EnsembleParams(2, 2, 1), ArgumentError);
    CHECK_THROWS_AS(EnsembleParams(3, 6, 0), ArgumentError);
    CHECK_THROWS_AS(EnsembleParams(3, 6, 17), ArgumentError);
    CHECK(EnsembleParams(3, 6, 1).rate() == doctest::Approx(0.5));
}

TEST_CASE("channel distribution") {
    const Pmf p = channel_pmf(0.5, 2);
    CHECK(p.probs[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p.probs[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.probs[2] == doctest::Approx(0.25).epsilon(1e-14));

    for (int m = 1; m <= 8; ++m) {
        const Pmf p0 = channel_pmf(0.0, m);
        CHECK(p0.probs[0] == 1.0);
        for (int i = 1; i <= m; ++i) CHECK(p0.probs[i] == 0.0);
    }

    const Pmf pb = channel_pmf(0.3, 1);
    CHECK(pb.probs[0] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(pb.probs[1] == doctest::Approx(0.3).epsilon(1e-14));

    CHECK_THROWS_AS(channel_pmf(-0.1, 2), ArgumentError);
    CHECK_THROWS_AS(channel_pmf(1.1, 2), ArgumentError);
}

TEST_CASE("pmf/ccdf conversions invert each other") {
    std::mt19937_64 rng(7);
    for (int m = 1; m <= 6; ++m) {
        for (int trial = 0; trial < 20; ++trial) {
            const Pmf p = testutil::random_pmf(m, rng);
            const Pmf back = pmf_from_ccdf(ccdf_from_pmf(p));
            CHECK(testutil::max_abs_diff(p.probs, back.probs) < 1e-14);
        }
    }
}

TEST_CASE("message combining: binary reduction and identities") {
    // m = 1: intersection acts as AND on erasures, sum as OR
    const Pmf half(1, {0.5, 0.5});
    const Pmf meet = boxdot(half, half);
    CHECK(meet.probs[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(meet.probs[1] == doctest::Approx(0.25).epsilon(1e-14));
    const Pmf join = boxtimes(half, half);
    CHECK(join.probs[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(join.probs[1] == doctest::Approx(0.75).epsilon(1e-14));

    // meeting the full space and joining the zero subspace are neutral
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 5; ++m) {
        const Pmf a = testutil::random_pmf(m, rng);
        const Pmf am = boxdot(a, unit_mass(m, m));
        const Pmf a0 = boxtimes(a, unit_mass(m, 0));
        CHECK(testutil::max_abs_diff(a.probs, am.probs) < 1e-14);
        CHECK(testutil::max_abs_diff(a.probs, a0.probs) < 1e-14);
    }

    // m = 2 one-dimensional inputs, enumerated by hand over the 3 lines
    const Pmf line(2, {0.0, 1.0, 0.0});
    const Pmf meet2 = boxdot(line, line);
    CHECK(meet2.probs[0] == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(meet2.probs[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(meet2.probs[2] == doctest::Approx(0.0));
    const Pmf join2 = boxtimes(line, line);
    CHECK(join2.probs[0] == doctest::Approx(0.0));
    CHECK(join2.probs[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(join2.probs[2] == doctest::Approx(2.0 / 3).epsilon(1e-14));

    CHECK_THROWS_AS(boxdot(half, line), ArgumentError);
    CHECK_THROWS_AS(boxtimes(half, line), ArgumentError);
}

TEST_CASE("combining operators stay on the probability simplex") {
    std::mt19937_64 rng(13);
    for (int m = 1; m <= 6; ++m) {
        for (int trial = 0; trial < 50; ++trial) {
            const Pmf a = testutil::random_pmf(m, rng);
            const Pmf b = testutil::random_pmf(m, rng);
            CHECK(boxdot(a, b).valid(1e-12));
            CHECK(boxtimes(a, b).valid(1e-12));
        }
    }
}

TEST_CASE("combining operators are commutative and associative") {
    std::mt19937_64 rng(17);
    for (int m = 1; m <= 3; ++m) {
        for (int trial = 0; trial < 30; ++trial) {
            const Pmf a = testutil::random_pmf(m, rng);
            const Pmf b = testutil::random_pmf(m, rng);
            const Pmf c = testutil::random_pmf(m, rng);
            CHECK(testutil::max_abs_diff(boxdot(a, b).probs, boxdot(b, a).probs) < 1e-12);
            CHECK(testutil::max_abs_diff(boxtimes(a, b).probs, boxtimes(b, a).probs) < 1e-12);
            CHECK(testutil::max_abs_diff(boxdot(boxdot(a, b), c).probs,
                                         boxdot(a, boxdot(b, c)).probs) < 1e-12);
            CHECK(testutil::max_abs_diff(boxtimes(boxtimes(a, b), c).probs,
                                         boxtimes(a, boxtimes(b, c)).probs) < 1e-12);
        }
    }
}

TEST_CASE("single-input node maps are transparent") {
    // a fold of one term is the message itself (degree-2 check node)
    std::mt19937_64 rng(19);
    const Pmf a = testutil::random_pmf(1, rng);
    CHECK(testutil::max_abs_diff(boxtimes_power(a, 1).probs, a.probs) == 0.0);
    CHECK(testutil::max_abs_diff(boxdot_power(a, 1).probs, a.probs) == 0.0);
}

TEST_CASE("variable-node map in CCDF coordinates") {
    const EnsembleParams p36(3, 6, 1);

    // zero input and zero channel both collapse to zero
    std::mt19937_64 rng(23);
    for (int m = 1; m <= 4; ++m) {
        const EnsembleParams pm(3, 6, m);
        const Ccdf fz = f_ccdf(Ccdf::zero(m), 0.37, pm);
        CHECK(fz.max_abs() < 1e-15);
        const Ccdf y = testutil::random_ccdf(m, rng);
        const Ccdf f0 = f_ccdf(y, 0.0, pm);
        CHECK(f0.max_abs() < 1e-15);
    }

    // binary reduction: f = eps y^{dv-1}
    for (double y = 0.0; y <= 1.0; y += 0.1) {
        for (double eps : {0.1, 0.45, 0.9}) {
            const Ccdf out = f_ccdf(Ccdf(1, {y}), eps, p36);
            CHECK(out.tail[0] == doctest::Approx(oracle::scalar_f(y, eps, 3)).epsilon(1e-12));
        }
    }

    // full-erasure absorbing point at m = 2, dv = 2
    const EnsembleParams p2(2, 3, 2);
    const Ccdf full = f_ccdf(Ccdf(2, {1.0, 1.0}), 1.0, p2);
    CHECK(full.tail[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(full.tail[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("check-node map in CCDF coordinates") {
    const EnsembleParams p36(3, 6, 1);
    for (int m = 1; m <= 4; ++m) {
        const EnsembleParams pm(3, 6, m);
        CHECK(g_ccdf(Ccdf::zero(m), pm).max_abs() < 1e-15);
    }
    // binary reduction: g = 1 - (1-x)^{dc-1}
    for (double x = 0.0; x <= 1.0; x += 0.1) {
        const Ccdf out = g_ccdf(Ccdf(1, {x}), p36);
        CHECK(out.tail[0] == doctest::Approx(oracle::scalar_g(x, 6)).epsilon(1e-12));
    }
}

TEST_CASE("update maps are increasing in the CCDF order") {
    std::mt19937_64 rng(29);
    for (int m = 1; m <= 3; ++m) {
        const EnsembleParams params(3, 6, m);
        int checked = 0;
        for (int trial = 0; trial < 200; ++trial) {
            auto [lo, hi] = testutil::random_ordered_pair(m, rng);
            const Ccdf glo = g_ccdf(lo, params);
            const Ccdf ghi = g_ccdf(hi, params);
            CHECK(testutil::leq_componentwise(glo.tail, ghi.tail, 1e-12));
            const double eps = 0.1 + 0.8 * (trial % 9) / 8.0;
            const Ccdf flo = f_ccdf(lo, eps, params);
            const Ccdf fhi = f_ccdf(hi, eps, params);
            CHECK(testutil::leq_componentwise(flo.tail, fhi.tail, 1e-12));
            ++checked;
        }
        CHECK(checked == 200);
    }
}

TEST_CASE("update maps produce nonnegative states") {
    std::mt19937_64 rng(31);
    for (int m = 1; m <= 3; ++m) {
        const EnsembleParams params(4, 7, m);
        for (int trial = 0; trial < 100; ++trial) {
            const Ccdf y = testutil::random_ccdf(m, rng);
            for (double v : f_ccdf(y, 0.6, params).tail) CHECK(v >= -1e-15);
            for (double v : g_ccdf(y, params).tail) CHECK(v >= -1e-15);
        }
    }
}

TEST_CASE("variable-node map is strictly increasing in the channel parameter") {
    std::mt19937_64 rng(37);
    for (int m = 1; m <= 3; ++m) {
        const EnsembleParams params(3, 6, m);
        for (int trial = 0; trial < 50; ++trial) {
            Ccdf y = testutil::random_ccdf(m, rng);
            y.tail[0] = std::max(y.tail[0], 0.05);  // keep the state away from zero
            const double e1 = 0.2 + 0.3 * (trial % 5) / 4.0;
            const double e2 = e1 + 0.2;
            const Ccdf f1 = f_ccdf(y, e1, params);
            const Ccdf f2 = f_ccdf(y, e2, params);
            CHECK(testutil::leq_componentwise(f1.tail, f2.tail, 1e-14));
            bool strict = false;
            for (int i = 0; i < m; ++i) strict = strict || f2.tail[i] > f1.tail[i] + 1e-12;
            CHECK(strict);
        }
    }
}

TEST_CASE("check-node Jacobian is positive on its support and invertible away from zero") {
    // The tail of a subspace sum at level k is a function of the input tails
    // x_1..x_k only, so G_d is lower triangular: entries above the diagonal
    // vanish identically, entries on and below it are strictly positive in the
    // interior, and the matrix is invertible there.
    std::mt19937_64 rng(41);
    for (int m = 1; m <= 3; ++m) {
        const EnsembleParams params(3, 6, m);
        DeEvaluator ev(params);
        for (int trial = 0; trial < 25; ++trial) {
            // interior state: strictly decreasing entries in (0.05, 0.95)
            Ccdf x = testutil::random_ccdf(m, rng);
            for (int i = 0; i < m; ++i) x.tail[i] = 0.05 + 0.9 * x.tail[i] * (m - i) / (m + 1.0);
            std::sort(x.tail.begin(), x.tail.end(), std::greater<>());

            auto gfun = [&](const std::vector<double>& v) {
                return g_ccdf(Ccdf(m, v), params).tail;
            };
            const auto J = testutil::fd_jacobian(gfun, x.tail, 1e-6);
            const Eigen::MatrixXd Je = ev.g_jacobian(x.tail.data());
            Eigen::MatrixXd Jm(m, m);
            for (int k = 0; k < m; ++k) {
                for (int n = 0; n < m; ++n) {
                    CHECK(J[k][n] > -1e-9);  // nonnegative within difference noise
                    CHECK(std::abs(J[k][n] - Je(k, n)) < 1e-6);
                    if (n <= k) {
                        CHECK(Je(k, n) > 1e-12);
                    } else {
                        CHECK(std::abs(Je(k, n)) < 1e-12);
                    }
                    Jm(k, n) = J[k][n];
                }
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jm);
            const auto& sv = svd.singularValues();
            CHECK(sv(sv.size() - 1) > 1e-12);  // finite condition estimate
            CHECK(std::isfinite(sv(0) / sv(sv.size() - 1)));
        }
    }
}

TEST_CASE("exact Jacobians match finite differences") {
    std::mt19937_64 rng(43);
    for (int m = 1; m <= 3; ++m) {
        const EnsembleParams params(3, 6, m);
        DeEvaluator ev(params);
        for (int trial = 0; trial < 20; ++trial) {
            const Ccdf x = testutil::random_ccdf(m, rng);
            const Eigen::MatrixXd Jg = ev.g_jacobian(x.tail.data());
            auto gfun = [&](const std::vector<double>& v) {
                return g_ccdf(Ccdf(m, v), params).tail;
            };
            const auto Jfd = testutil::fd_jacobian(gfun, x.tail, 1e-6);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    CHECK(Jg(r, c) == doctest::Approx(Jfd[r][c]).epsilon(1e-5).scale(1.0));
                }
            }
            const double eps = 0.55;
            const Eigen::MatrixXd Jf = ev.f_jacobian(x.tail.data(), eps);
            auto ffun = [&](const std::vector<double>& v) {
                return f_ccdf(Ccdf(m, v), eps, params).tail;
            };
            const auto JfdF = testutil::fd_jacobian(ffun, x.tail, 1e-6);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    CHECK(Jf(r, c) == doctest::Approx(JfdF[r][c]).epsilon(1e-5).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("fixed-point iteration basics") {
    const EnsembleParams p36(3, 6, 1);
    const DeConfig cfg;

    const DeResult r0 = de_fixed_point(0.0, p36, cfg);
    CHECK(r0.decoded);
    CHECK(r0.x.max_abs() < cfg.zero_tol);

    const DeResult rlow = de_fixed_point(0.40, p36, cfg);
    CHECK(rlow.decoded);
    const DeResult rhigh = de_fixed_point(0.45, p36, cfg);
    CHECK_FALSE(rhigh.decoded);
    CHECK(rhigh.converged);
    // the stalled state is a genuine fixed point of the scalar recursion
    CHECK(rhigh.x.tail[0] ==
          doctest::Approx(oracle::scalar_de(0.45, 3, 6, cfg).x).epsilon(1e-9));
}

TEST_CASE("iterates decrease monotonically from the channel state") {
    for (int m : {1, 2, 3}) {
        const EnsembleParams params(3, 6, m);
        DeEvaluator ev(params);
        for (double eps : {0.3, 0.45, 0.6}) {
            Ccdf x = channel_ccdf(eps, m);
            Ccdf gx(m), next(m);
            const Ccdf bound = x;
            for (int iter = 0; iter < 60; ++iter) {
                ev.g(x.tail.data(), gx.tail.data());
                ev.f(gx.tail.data(), eps, next.tail.data());
                CHECK(testutil::leq_componentwise(next.tail, x.tail, 1e-12));
                // every iterate stays a valid state inside the channel box
                CHECK(next.valid(1e-12));
                CHECK(testutil::leq_componentwise(next.tail, bound.tail, 1e-12));
                x = next;
            }
        }
    }
}

TEST_CASE("uncoupled BP threshold against the scalar recursion") {
    DeConfig cfg;
    cfg.bisect_tol = 1e-5;

    const double t36 = bp_threshold_uncoupled(EnsembleParams(3, 6, 1), cfg);
    CHECK(std::abs(t36 - 0.4294) < 1e-3);
    CHECK(std::abs(t36 - oracle::scalar_bp_threshold(3, 6, cfg)) < 1e-4);

    // degree-2 variable nodes: threshold set by stability of the zero state
    const double t23 = bp_threshold_uncoupled(EnsembleParams(2, 3, 1), cfg);
    CHECK(std::abs(t23 - oracle::scalar_bp_threshold(2, 3, cfg)) < 1e-4);

    // higher rate decodes strictly less
    const double t39 = bp_threshold_uncoupled(EnsembleParams(3, 9, 1), cfg);
    CHECK(t36 > t39);
}
