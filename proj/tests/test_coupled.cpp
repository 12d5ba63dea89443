#include <cmath>

#include "doctest.h"
#include "nbde/coupled.hpp"
#include "test_helpers.hpp"

using namespace nbde;

TEST_CASE("coupling matrix shape") {
    const CouplingMatrix M = build_coupling_matrix(3, 2);
    CHECK(M.rows() == 3);
    CHECK(M.cols() == 4);
    const double expected[3][4] = {{0.5, 0.5, 0, 0}, {0, 0.5, 0.5, 0}, {0, 0, 0.5, 0.5}};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) CHECK(M.at(r, c) == doctest::Approx(expected[r][c]));
    }

    // width one degenerates to the identity
    const CouplingMatrix I = build_coupling_matrix(5, 1);
    CHECK(I.cols() == 5);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) CHECK(I.at(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));
    }

    const CouplingMatrix W = build_coupling_matrix(10, 3);
    for (int r = 0; r < 10; ++r) {
        double sum = 0;
        for (int c = 0; c < W.cols(); ++c) sum += W.at(r, c);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(build_coupling_matrix(0, 2), ArgumentError);
    CHECK_THROWS_AS(build_coupling_matrix(2, 0), ArgumentError);
}

TEST_CASE("coupled update fixed points at the extremes") {
    const EnsembleParams params(3, 6, 2);
    const CouplingMatrix M = build_coupling_matrix(6, 3);

    // zero channel parameter wipes the chain in one update
    CoupledState s = coupled_init(0.6, params, M);
    const CoupledState wiped = coupled_update(s, 0.0, params, M);
    CHECK(wiped.max_abs() < 1e-15);

    // the origin is a fixed point
    CoupledState zero(M.cols(), params.m);
    const CoupledState still = coupled_update(zero, 0.6, params, M);
    CHECK(still.max_abs() < 1e-15);
}

TEST_CASE("trivial chain reduces to the uncoupled update") {
    std::mt19937_64 rng(51);
    const EnsembleParams params(3, 6, 1);
    const CouplingMatrix M = build_coupling_matrix(1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const Ccdf x = testutil::random_ccdf(1, rng);
        CoupledState s(1, 1);
        s.X[0] = x.tail[0];
        const double eps = 0.05 + 0.9 * trial / 19.0;
        const CoupledState next = coupled_update(s, eps, params, M);
        const Ccdf expected = f_ccdf(g_ccdf(x, params), eps, params);
        CHECK(std::abs(next.X[0] - expected.tail[0]) < 1e-12);
    }
}

TEST_CASE("profiles are spatially symmetric and monotone") {
    const EnsembleParams params(3, 6, 2);
    DeConfig cfg;
    cfg.max_iters = 200;
    const CoupledResult r = coupled_fixed_point(0.48, params, 16, 3, cfg, /*profile_stride=*/1);
    REQUIRE(r.profile.size() > 10);
    const int N = 16 + 3 - 1;
    const int m = params.m;

    for (std::size_t snap = 0; snap < r.profile.size(); ++snap) {
        const auto& X = r.profile[snap].X;
        // mirror symmetry of the chain
        for (int i = 0; i < N; ++i) {
            for (int k = 0; k < m; ++k) {
                CHECK(std::abs(X[i * m + k] - X[(N - 1 - i) * m + k]) < 1e-12);
            }
        }
        // decoding starts from the ends: the boundary position never exceeds
        // the middle one
        double end_max = 0, mid_max = 0;
        for (int k = 0; k < m; ++k) {
            end_max = std::max(end_max, X[0 * m + k]);
            mid_max = std::max(mid_max, X[(N / 2) * m + k]);
        }
        CHECK(end_max <= mid_max + 1e-12);
        // componentwise monotone decrease from the all-channel start
        if (snap > 0) {
            const auto& prev = r.profile[snap - 1].X;
            for (std::size_t idx = 0; idx < X.size(); ++idx) CHECK(X[idx] <= prev[idx] + 1e-12);
        }
    }
}

TEST_CASE("coupled chain decodes above the uncoupled threshold") {
    const EnsembleParams params(3, 6, 1);
    DeConfig cfg;
    // between the uncoupled threshold (~0.4294) and the coupled one (~0.488)
    const CoupledResult r = coupled_fixed_point(0.47, params, 100, 3, cfg);
    CHECK(r.decoded);

    // anything below the uncoupled threshold decodes regardless of the chain
    const CoupledResult rlow = coupled_fixed_point(0.40, params, 24, 2, cfg);
    CHECK(rlow.decoded);
}

TEST_CASE("coupled threshold for the half-rate chain") {
    const EnsembleParams params(3, 6, 1);
    DeConfig cfg;
    const double t = bp_threshold_coupled(params, 100, 3, cfg);
    CHECK(std::abs(t - 0.4880) < 0.002);
}

TEST_CASE("threshold saturation trend in the smoothing width") {
    const EnsembleParams params(3, 6, 1);
    DeConfig cfg;
    cfg.bisect_tol = 1e-4;
    const double uncoupled = bp_threshold_uncoupled(params, cfg);
    double prev = 0.0;
    for (int w : {2, 3, 4, 5}) {
        const double t = bp_threshold_coupled(params, 50, w, cfg);
        CHECK(t >= prev - cfg.bisect_tol);
        CHECK(t > uncoupled);
        prev = t;
    }
}

TEST_CASE("threshold decreases toward the long-chain limit") {
    const EnsembleParams params(3, 6, 1);
    DeConfig cfg;
    cfg.bisect_tol = 1e-4;
    double prev = 1.0;
    for (int L : {20, 50, 100}) {
        const double t = bp_threshold_coupled(params, L, 3, cfg);
        CHECK(t <= prev + cfg.bisect_tol);
        prev = t;
    }
}
