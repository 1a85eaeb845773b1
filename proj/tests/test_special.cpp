#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "kzlab/special.hpp"

using namespace kzlab;

namespace {
double rel_err(cplx got, cplx want) {
    double scale = std::max(1.0, std::abs(want));
    return std::abs(got - want) / scale;
}
}  // namespace

TEST_CASE("log_gamma matches high-precision references") {
    struct Ref {
        cplx z, v;
    };
    // Reference values computed with 30-digit arithmetic.
    const Ref refs[] = {
        {{-0.5, 0.1}, {1.2216232551552816315, -3.1378058120793654896}},
        {{-3.2, -2.7}, {-7.7845256880041949102, 7.8772503826708380741}},
        {{0.25, 0.0}, {1.2880225246980774574, 0.0}},
        {{-7.5, 0.02}, {-8.4064850273116645582, -25.091139391614113673}},
        {{2.5, 3.0}, {-1.4709546103488416913, 2.82261563826079945}},
        {{0.5, 700.0}, {-1098.6384902232229607, 3885.7562940541998812}},
        {{-800.3, 12.0}, {-4589.7276859481486775, -2435.5596124080819321}},
        {{-0.5, -6.0}, {-10.301059118215048886, -3.1035750547750314148}},
        {{900.25, -450.0}, {5113.1188986674817698, -3078.4518833759146573}},
    };
    for (const auto& r : refs) {
        cplx got = log_gamma(r.z);
        INFO("z = (", r.z.real(), ",", r.z.imag(), ")");
        CHECK(rel_err(got, r.v) < 1e-12);
    }
}

TEST_CASE("log_gamma closed forms") {
    CHECK(std::abs(log_gamma(cplx(1.0, 0.0))) < 1e-14);
    CHECK(std::abs(log_gamma(cplx(0.5, 0.0)) - cplx(0.5 * log_pi_v, 0.0)) < 1e-14);
    // |Gamma(i)|^2 = pi / sinh(pi).
    double got = std::exp(2.0 * log_gamma(cplx(0.0, 1.0)).real());
    CHECK(std::abs(got - pi / std::sinh(pi)) < 1e-12);
}

TEST_CASE("log_gamma recurrence on a 10x10 grid") {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            cplx z(0.5 + 0.9 * i, -4.5 + 1.0 * j);
            cplx resid = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
            worst = std::max(worst, std::abs(resid));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("log_gamma pole guard") {
    CHECK_THROWS_AS(log_gamma(cplx(0.0, 0.0)), domain_error);
    CHECK_THROWS_AS(log_gamma(cplx(-3.0, 1e-12)), domain_error);
    CHECK_NOTHROW(log_gamma(cplx(-3.0, 1e-6)));
}

TEST_CASE("gamma_R closed forms and duplication") {
    CHECK(std::abs(std::exp(log_gamma_R(cplx(1.0, 0.0))) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(std::exp(log_gamma_R(cplx(2.0, 0.0))) - cplx(1.0 / pi, 0.0)) < 1e-14);
    // Gamma_R(s) Gamma_R(s+1) = 2 (2pi)^{-s} Gamma(s) at s = 2+3i.
    cplx s(2.0, 3.0);
    cplx lhs = log_gamma_R(s) + log_gamma_R(s + 1.0);
    cplx rhs = std::log(cplx(2.0, 0.0)) - s * log_2pi_v + log_gamma(s);
    CHECK(std::abs(std::exp(lhs) - std::exp(rhs)) < 1e-12 * std::abs(std::exp(rhs)));
}

TEST_CASE("zeta matches references") {
    struct Ref {
        cplx s, v;
    };
    const Ref refs[] = {
        {{3.0, 0.0}, {1.2020569031595942854, 0.0}},
        {{0.5, 14.134725}, {1.767429841384903915e-8, -1.1102028930923116747e-7}},
        {{-0.5, 2.0}, {0.2280949717165263298, -0.14452917173371359642}},
        {{1.5, 0.0}, {2.6123753486854883433, 0.0}},
        {{2.0, 0.0}, {1.6449340668482264365, 0.0}},
        {{0.0, 0.0}, {-0.5, 0.0}},
        {{1.75, -300.5}, {1.0796881769868940874, 0.24457626370572727324}},
    };
    for (const auto& r : refs) {
        INFO("s = (", r.s.real(), ",", r.s.imag(), ")");
        CHECK(rel_err(zeta(r.s), r.v) < 1e-10);
    }
    CHECK(std::abs(zeta(cplx(2.0, 0.0)) - cplx(pi * pi / 6.0, 0.0)) < 1e-12);
    CHECK_THROWS_AS(zeta(cplx(1.0, 1e-9)), domain_error);
}

TEST_CASE("zeta functional equation at random points") {
    std::mt19937_64 rng(20260825);
    std::uniform_real_distribution<double> re(-1.0, 2.0), im(-40.0, 40.0);
    for (int trial = 0; trial < 20; ++trial) {
        cplx s(re(rng), im(rng));
        if (std::abs(s - cplx(1.0, 0.0)) < 0.05 || std::abs(s) < 0.05) continue;
        cplx lhs = zeta(s);
        cplx rhs = std::exp(s * std::log(cplx(2.0, 0.0)) + (s - 1.0) * log_pi_v +
                            log_gamma(1.0 - s)) *
                   std::sin(0.5 * pi * s) * zeta(1.0 - s);
        INFO("s = (", s.real(), ",", s.imag(), ")");
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("tau from the sparse build matches the literal product expansion") {
    HeckeTable t12 = hecke_eigenvalues_holomorphic(12, 360);
    std::vector<double> tau = tau_by_product_expansion(360);
    CHECK(tau[1] == 1.0);
    CHECK(tau[2] == -24.0);
    CHECK(tau[3] == 252.0);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 360; ++n) {
        double a_rec = t12.lam[n].real() * std::pow(double(n), 5.5);
        double scale = std::max(1.0, std::abs(tau[n]));
        worst = std::max(worst, std::abs(a_rec - tau[n]) / scale);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("weight 16 arithmetic coefficients") {
    HeckeTable t16 = hecke_eigenvalues_holomorphic(16, 5000);
    // a(2) = 216 in arithmetic normalization.
    double a2 = t16.lam[2].real() * std::pow(2.0, 7.5);
    CHECK(std::abs(a2 - 216.0) < 1e-10);
    CHECK(std::abs(t16.lam[2].real() - 1.1932426932522988) < 1e-13);
    // lambda(6) = lambda(2) lambda(3).
    CHECK(std::abs(t16.lam[6] - t16.lam[2] * t16.lam[3]) < 1e-12);
    CHECK_NOTHROW(validate_table(t16));
    CHECK(deligne_check(t16));
}

TEST_CASE("all one-dimensional weights build and validate") {
    for (int k : {12, 16, 18, 20, 22, 26}) {
        HeckeTable t = hecke_eigenvalues_holomorphic(k, 1500);
        CHECK_NOTHROW(validate_table(t));
        CHECK(deligne_check(t));
    }
    CHECK_THROWS_AS(hecke_eigenvalues_holomorphic(14, 100), validation_error);
    CHECK_THROWS_AS(hecke_eigenvalues_holomorphic(16, 20001), budget_error);
}

TEST_CASE("table validation rejects a broken multiplicative relation") {
    HeckeTable t = hecke_eigenvalues_holomorphic(16, 100);
    t.lam[6] += cplx(1e-3, 0.0);
    CHECK_THROWS_AS(validate_table(t), validation_error);
}

TEST_CASE("synthetic chebyshev tables satisfy the Hecke relations") {
    HeckeTable t = synthetic_chebyshev_table(3000, 7);
    t.kind = table_kind::holomorphic;  // Chebyshev construction obeys the recursion
    CHECK_NOTHROW(validate_table(t));
    CHECK(deligne_check(t));
}

TEST_CASE("csv round trip") {
    HeckeTable t = hecke_eigenvalues_holomorphic(16, 200);
    const char* path = "hecke_roundtrip_test.csv";
    save_hecke_table(path, t);
    HeckeTable u = load_hecke_table(path);
    CHECK(u.kind == table_kind::holomorphic);
    CHECK(u.weight_or_spectral == 16.0);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 200; ++n) worst = std::max(worst, std::abs(u.lam[n] - t.lam[n]));
    CHECK(worst < 1e-15);
    std::remove(path);
}

TEST_CASE("dirichlet_eval against zeta and inverse zeta") {
    // Constant-one table: reduces to zeta(3).
    HeckeTable ones;
    ones.kind = table_kind::synthetic;
    ones.lam.assign(200001, cplx(1.0, 0.0));
    SeriesValue v = dirichlet_eval(ones, cplx(3.0, 0.0));
    CHECK(std::abs(v.value - cplx(1.2020569031595942854, 0.0)) < 2e-10);
    CHECK(v.tail_bound < 1e-6);
    CHECK(std::abs(v.value - cplx(1.2020569031595942854, 0.0)) < v.tail_bound);

    // Moebius table: 1/zeta(3).
    HeckeTable mob;
    mob.kind = table_kind::synthetic;
    std::size_t N = 200000;
    std::vector<int> mu(N + 1, 1);
    std::vector<bool> comp(N + 1, false);
    for (std::size_t i = 2; i <= N; ++i) {
        if (comp[i]) continue;
        for (std::size_t j = i; j <= N; j += i) {
            if (j > i) comp[j] = true;
            mu[j] *= -1;
        }
        if (i <= N / i)
            for (std::size_t j = i * i; j <= N; j += i * i) mu[j] = 0;
    }
    mob.lam.assign(N + 1, cplx(0.0, 0.0));
    for (std::size_t n = 1; n <= N; ++n) mob.lam[n] = cplx(double(mu[n]), 0.0);
    SeriesValue w = dirichlet_eval(mob, cplx(3.0, 0.0));
    CHECK(std::abs(w.value - cplx(0.83190737258070746868, 0.0)) < w.tail_bound);

    // Self-convergence: N vs 2N within the N-term tail bound.
    HeckeTable t16 = hecke_eigenvalues_holomorphic(16, 20000);
    SeriesAccuracy a1{10000, 0.0}, a2{20000, 0.0};
    SeriesValue s1 = dirichlet_eval(t16, cplx(3.0, 0.0), a1);
    SeriesValue s2 = dirichlet_eval(t16, cplx(3.0, 0.0), a2);
    CHECK(std::abs(s1.value - s2.value) < s1.tail_bound);
    CHECK(std::abs(s1.value - s2.value) < 1e-10);

    CHECK_THROWS_AS(dirichlet_eval(t16, cplx(1.2, 0.0)), validation_error);
    SeriesAccuracy strict{100, 1e-12};
    CHECK_THROWS_AS(dirichlet_eval(t16, cplx(3.0, 0.0), strict), accuracy_error);
}

TEST_CASE("rankin series normalizations") {
    HeckeTable t16 = hecke_eigenvalues_holomorphic(16, 20000);
    cplx s(3.0, 0.0);
    SeriesValue bare = rankin_selberg_series(t16, t16, s, rankin_normalization::bare);
    SeriesValue with = rankin_selberg_series(t16, t16, s, rankin_normalization::with_zeta2s);
    CHECK(std::abs(with.value - bare.value * zeta(2.0 * s)) < 1e-14);

    // Term-by-term accumulation oracle for the bare sum.
    kahan_sum_cplx acc;
    for (std::size_t n = 1; n <= t16.n_max(); ++n)
        acc.add(t16.lam[n] * t16.lam[n] * std::exp(-s * std::log(double(n))));
    CHECK(std::abs(bare.value - acc.value()) < 1e-13);

    // Constant-one tables: with_zeta2s equals the double sum over (n m^2)^{-s}.
    HeckeTable ones;
    ones.lam.assign(4001, cplx(1.0, 0.0));
    SeriesValue rs = rankin_selberg_series(ones, ones, s, rankin_normalization::with_zeta2s);
    kahan_sum dbl;
    for (std::size_t m = 1; m <= 2000; ++m)
        for (std::size_t n = 1; n <= 4000; ++n)
            dbl.add(std::pow(double(n) * double(m) * double(m), -3.0));
    CHECK(std::abs(rs.value.real() - dbl.value()) < 1e-9);
}

TEST_CASE("parallel map is deterministic and matches serial") {
    std::vector<double> serial(1000), par(1000);
    parallel_for(1000, 1, [&](std::size_t i) { serial[i] = std::sin(0.1 * double(i)); });
    parallel_for(1000, 7, [&](std::size_t i) { par[i] = std::sin(0.1 * double(i)); });
    CHECK(serial == par);
}

TEST_CASE("fft convolution matches direct convolution") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> a(3000), b(2500);
    for (auto& z : a) z = cplx(u(rng), u(rng));
    for (auto& z : b) z = cplx(u(rng), u(rng));
    auto direct = convolve_direct(a, b);
    auto fast = convolve(a, b);
    REQUIRE(direct.size() == fast.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
        worst = std::max(worst, std::abs(direct[i] - fast[i]));
    CHECK(worst < 1e-9);
}
