#include <cmath>

#include "doctest.h"
#include "nbde/potential.hpp"
#include "test_helpers.hpp"

using namespace nbde;

namespace {

const EnsembleParams kBinary36(3, 6, 1);

DMatrix unit_D() {
    DMatrix D;
    D.m = 1;
    D.mat = Eigen::MatrixXd::Ones(1, 1);
    return D;
}

}  // namespace

TEST_CASE("construction of the coupling matrix D") {
    // one dimension: the normalization pins the single entry to 1
    DConstructionInfo info1;
    const DMatrix D1 = construct_D(kBinary36, {}, &info1);
    CHECK(D1.m == 1);
    CHECK(D1.mat(0, 0) == doctest::Approx(1.0));
    CHECK(info1.nullspace_dim == 1);

    for (int m : {2, 3}) {
        DConstructionInfo info;
        const DMatrix D = construct_D(EnsembleParams(3, 6, m), {}, &info);
        CHECK(D.valid());
        CHECK(D.mat.maxCoeff() == doctest::Approx(1.0));
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) CHECK(D.mat(a, b) > 0.0);
        }
        CHECK(info.residual < 1e-8);
        CHECK(info.path_mismatch < 1e-8);
        CHECK(info.nullspace_dim >= 1);
    }

    // frozen solutions, validated by the path-independence check above; the
    // constraint nullspace is one-dimensional so they are unique up to scale
    const DMatrix D2 = construct_D(EnsembleParams(3, 6, 2));
    CHECK(D2.mat(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(D2.mat(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(D2.mat(1, 1) == doctest::Approx(0.5).epsilon(1e-9));

    const DMatrix D3 = construct_D(EnsembleParams(3, 6, 3));
    const double expected3[3][3] = {
        {0.25, 0.5, 1.0}, {0.5, 0.75, 0.5}, {1.0, 0.5, 0.25}};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(D3.mat(a, b) == doctest::Approx(expected3[a][b]).epsilon(1e-9));
        }
    }

    // the matrix is a property of the field dimension alone: other degree
    // pairs produce the same solution
    for (auto [dv, dc] : {std::pair{3, 9}, {4, 6}, {2, 5}}) {
        const DMatrix Dalt = construct_D(EnsembleParams(dv, dc, 2));
        CHECK((Dalt.mat - D2.mat).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("diagonal coupling matrices do not exist beyond one dimension") {
    CHECK(diagonal_D_feasible(kBinary36));
    CHECK_FALSE(diagonal_D_feasible(EnsembleParams(3, 6, 2)));
    CHECK_FALSE(diagonal_D_feasible(EnsembleParams(3, 6, 3)));
}

TEST_CASE("scalar potentials in closed form") {
    const DMatrix D = unit_D();
    CHECK(scalar_F(Ccdf::zero(1), 0.45, D, kBinary36) == 0.0);
    CHECK(scalar_G(Ccdf::zero(1), D, kBinary36) == 0.0);
    for (double y = 0.05; y <= 1.0; y += 0.05) {
        CHECK(scalar_F(Ccdf(1, {y}), 0.45, D, kBinary36) ==
              doctest::Approx(oracle::scalar_F(y, 0.45, 3)).epsilon(1e-12));
        CHECK(scalar_G(Ccdf(1, {y}), D, kBinary36) ==
              doctest::Approx(oracle::scalar_G(y, 6)).epsilon(1e-12));
    }
}

TEST_CASE("path independence holds for the constructed D and fails for a corrupted one") {
    const EnsembleParams params(3, 6, 2);
    const DMatrix D = construct_D(params);
    CHECK(path_independence_mismatch(D, params, 50, 123) < 1e-8);

    DMatrix bad = D;
    bad.mat(0, 1) *= 3.0;
    bad.mat(1, 0) *= 3.0;
    CHECK(path_independence_mismatch(bad, params, 50, 123) > 1e-6);
}

TEST_CASE("single-system potential values") {
    const DMatrix D = unit_D();
    CHECK(potential_U(Ccdf::zero(1), 0.45, D, kBinary36) == doctest::Approx(0.0).epsilon(1e-15));

    // frozen value, cross-checked against the scalar closed form
    const double u = potential_U(Ccdf(1, {0.1}), 0.45, D, kBinary36);
    CHECK(std::abs(u - 0.0087431) < 1e-6);
    CHECK(u == doctest::Approx(oracle::scalar_U(0.1, 0.45, 3, 6)).epsilon(1e-10));

    // strictly decreasing in the channel parameter away from zero
    for (double x = 0.1; x <= 0.9; x += 0.2) {
        double prev = potential_U(Ccdf(1, {x}), 0.2, D, kBinary36);
        for (double eps : {0.35, 0.5, 0.65, 0.8}) {
            const double cur = potential_U(Ccdf(1, {x}), eps, D, kBinary36);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("potential decreases with the channel parameter in higher dimension") {
    std::mt19937_64 rng(77);
    const EnsembleParams params(3, 6, 2);
    const DMatrix D = construct_D(params);
    for (int trial = 0; trial < 25; ++trial) {
        Ccdf x = testutil::random_ccdf(2, rng);
        x.tail[0] = std::max(x.tail[0], 0.05);
        double prev = potential_U(x, 0.15, D, params);
        for (double eps : {0.3, 0.45, 0.6, 0.75, 0.9}) {
            const double cur = potential_U(x, eps, D, params);
            CHECK(cur < prev);
            prev = cur;
        }
        // the gradient decreases as well (componentwise)
        const Eigen::RowVectorXd g1 = potential_gradient(x, 0.3, D, params);
        const Eigen::RowVectorXd g2 = potential_gradient(x, 0.6, D, params);
        for (int i = 0; i < 2; ++i) CHECK(g2(i) < g1(i) + 1e-12);
    }
}

TEST_CASE("gradient matches finite differences of the potential") {
    std::mt19937_64 rng(83);
    for (int m : {1, 2, 3}) {
        const EnsembleParams params(3, 6, m);
        const DMatrix D = construct_D(params);
        int checked = 0;
        for (int trial = 0; trial < (m == 3 ? 20 : 40); ++trial) {
            const Ccdf x = testutil::random_ccdf(m, rng);
            const double eps = 0.1 + 0.8 * trial / 40.0;
            const Eigen::RowVectorXd grad = potential_gradient(x, eps, D, params);
            const double h = 1e-6;
            for (int i = 0; i < m; ++i) {
                Ccdf xp = x, xm = x;
                xp.tail[i] += h;
                xm.tail[i] -= h;
                const double fd =
                    (potential_U(xp, eps, D, params) - potential_U(xm, eps, D, params)) /
                    (2.0 * h);
                CHECK(std::abs(grad(i) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
            }
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("gradient vanishes exactly at the origin") {
    for (int m : {1, 2, 3}) {
        const EnsembleParams params(3, 6, m);
        const DMatrix D = construct_D(params);
        const Eigen::RowVectorXd g = potential_gradient(Ccdf::zero(m), 0.5, D, params);
        CHECK(g.cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("fixed points are stationary points and vice versa") {
    DeConfig cfg;
    for (int m : {1, 2}) {
        const EnsembleParams params(3, 6, m);
        const DMatrix D = construct_D(params);
        for (double eps : {0.46, 0.48, 0.55, 0.7}) {
            const DeResult r = de_fixed_point(eps, params, cfg);
            if (!r.converged || r.decoded) continue;
            const Eigen::RowVectorXd grad = potential_gradient(r.x, eps, D, params);
            CHECK(grad.cwiseAbs().maxCoeff() < 1e-6);
        }
    }

    // scan the scalar system for stationary points; each must solve the
    // fixed-point equation
    const DMatrix D = unit_D();
    const double eps = 0.47;
    const Ccdf p = channel_ccdf(eps, 1);
    DeEvaluator ev(kBinary36);
    auto Uprime = [&](double x) {
        return potential_gradient(Ccdf(1, {x}), eps, D, kBinary36)(0);
    };
    int found = 0;
    const int grid = 400;
    for (int i = 1; i < grid; ++i) {
        double a = p.tail[0] * i / grid;
        double b = p.tail[0] * (i + 1) / grid;
        if (Uprime(a) == 0.0 || Uprime(a) * Uprime(b) > 0.0) continue;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b);
            (Uprime(a) * Uprime(mid) <= 0.0 ? b : a) = mid;
        }
        const double x = 0.5 * (a + b);
        double gx, fgx;
        ev.g(&x, &gx);
        ev.f(&gx, eps, &fgx);
        CHECK(std::abs(x - fgx) < 1e-6);
        ++found;
    }
    CHECK(found >= 2);  // unstable and stable nonzero fixed points at this eps
}

TEST_CASE("fixed points at different channel parameters differ") {
    DeConfig cfg;
    for (int m : {1, 2}) {
        const EnsembleParams params(3, 6, m);
        DeEvaluator ev(params);
        const double e1 = 0.5, e2 = 0.6;
        const DeResult r1 = de_fixed_point(e1, params, cfg);
        REQUIRE(r1.converged);
        REQUIRE_FALSE(r1.decoded);
        // apply the update at a different channel parameter: the state moves
        Ccdf gx(m), moved(m);
        ev.g(r1.x.tail.data(), gx.tail.data());
        ev.f(gx.tail.data(), e2, moved.tail.data());
        CHECK(testutil::max_abs_diff(moved.tail, r1.x.tail) > 1e-6);
    }
}

TEST_CASE("energy gap of the scalar system") {
    DeConfig cfg;
    const DMatrix D = unit_D();

    // below the BP threshold only the zero fixed point exists
    const DeltaEResult below = delta_E(0.40, D, kBinary36, cfg);
    CHECK(below.infinite);

    // at the potential threshold the gap crosses zero
    const DeltaEResult at = delta_E(0.48815, D, kBinary36, cfg);
    REQUIRE_FALSE(at.infinite);
    CHECK(std::abs(at.value) < 1e-4);
    CHECK(at.fixed_points.size() >= 1);

    // strictly decreasing in eps above the BP threshold
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.44, 0.46, 0.48, 0.50, 0.55}) {
        const DeltaEResult r = delta_E(eps, D, kBinary36, cfg);
        REQUIRE_FALSE(r.infinite);
        CHECK(r.value < prev);
        prev = r.value;
        // cross-check against the scalar oracle
        const oracle::ScalarGap gap = oracle::scalar_delta_E(eps, 3, 6, cfg);
        REQUIRE_FALSE(gap.infinite);
        CHECK(std::abs(r.value - gap.value) < 1e-8);
    }
}

TEST_CASE("potential threshold of the scalar system") {
    DeConfig cfg;
    const DMatrix D = unit_D();
    const double star = potential_threshold(D, kBinary36, cfg);
    CHECK(std::abs(star - 0.48815) < 1e-3);
    CHECK(std::abs(star - oracle::scalar_potential_threshold(3, 6, cfg)) < 2e-4);

    const double bp = bp_threshold_uncoupled(kBinary36, cfg);
    CHECK(star >= bp);

    // positive rescaling of D moves no stationary point, so the threshold is
    // unchanged
    DMatrix scaled = D;
    scaled.mat *= 7.5;
    CHECK(std::abs(potential_threshold(scaled, kBinary36, cfg) - star) <= cfg.bisect_tol);
}

TEST_CASE("coupled potential reduces to the single-system one") {
    std::mt19937_64 rng(91);
    for (int m : {1, 2}) {
        const EnsembleParams params(3, 6, m);
        const DMatrix D = construct_D(params);
        const CouplingMatrix M = build_coupling_matrix(1, 1);
        for (int trial = 0; trial < 10; ++trial) {
            const Ccdf x = testutil::random_ccdf(m, rng);
            CoupledState s(1, m);
            for (int k = 0; k < m; ++k) s.X[k] = x.tail[k];
            const double eps = 0.1 + 0.08 * trial;
            CHECK(std::abs(coupled_potential(s, eps, D, params, M) -
                           potential_U(x, eps, D, params)) < 1e-10);
        }
    }
}

TEST_CASE("coupled potential vanishes at the origin and decreases along trajectories") {
    const EnsembleParams params(3, 6, 1);
    const DMatrix D = unit_D();
    const CouplingMatrix M = build_coupling_matrix(12, 2);

    CoupledState zero(M.cols(), params.m);
    CHECK(std::abs(coupled_potential(zero, 0.5, D, params, M)) < 1e-14);

    // eps between the uncoupled and coupled thresholds: the chain decodes and
    // the potential acts as a Lyapunov function for the iteration
    const double eps = 0.46;
    DeEvaluator ev(params);
    CoupledState cur = coupled_init(eps, params, M);
    CoupledState next(cur.N, cur.m);
    double prev = coupled_potential(cur, eps, D, params, M);
    for (int iter = 0; iter < 120; ++iter) {
        coupled_update(next, cur, eps, params, M, ev);
        cur.X.swap(next.X);
        const double val = coupled_potential(cur, eps, D, params, M);
        CHECK(val <= prev + 1e-9);
        prev = val;
    }
}

TEST_CASE("coupling-width bound from the potential Hessian") {
    DeConfig cfg;
    const DMatrix D = unit_D();
    const double eps = 0.47;
    const KBoundReport rep = k_bound(eps, D, kBinary36, cfg);
    CHECK(rep.K >= 0.0);
    REQUIRE_FALSE(rep.delta_e_infinite);
    CHECK(rep.delta_e > 0.0);
    CHECK(rep.w_min == doctest::Approx(1 * rep.K / (2.0 * rep.delta_e)).epsilon(1e-12));

    // the scalar closed form bounds the same quantity
    const Ccdf p = channel_ccdf(eps, 1);
    double oracle_max = 0.0;
    const int grid = 4000;
    for (int i = 0; i <= grid; ++i) {
        const double x = p.tail[0] * i / grid;
        oracle_max = std::max(oracle_max, std::abs(oracle::scalar_U_second(x, eps, 3, 6)));
    }
    CHECK(rep.K <= oracle_max * 1.001);
    CHECK(rep.K >= oracle_max * 0.90);

    // undefined below the potential threshold boundary where the gap is negative
    CHECK_THROWS_AS(k_bound(0.55, D, kBinary36, cfg), UndefinedBoundError);
}
