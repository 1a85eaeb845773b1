#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "kzlab/kloosterman.hpp"

using namespace kzlab;

namespace {

// Independent oracle: quadruple loop over (B1, C1, B2, C2) with its own
// Bezout solver, checking the congruence directly.  Only usable for tiny
// moduli, but it exercises none of the library's solve-for-C shortcuts.
cplx big_oracle(long long n1, long long m2, long long m1, long long n2,
                long long D1, long long D2) {
    auto eee = [](long long num, long long den) {
        double ang = 2.0 * pi * static_cast<double>(((num % den) + den) % den) /
                     static_cast<double>(den);
        return cplx{std::cos(ang), std::sin(ang)};
    };
    auto bez = [](long long B, long long C, long long D) {
        if (D == 1) return std::pair<long long, long long>{0, 0};
        long long g = std::gcd(B, C);
        long long old_r = B, r = C, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            long long q = old_r / r;
            long long tmp;
            tmp = old_r - q * r; old_r = r; r = tmp;
            tmp = old_s - q * s; old_s = s; s = tmp;
            tmp = old_t - q * t; old_t = t; t = tmp;
        }
        long long gi = 1;
        for (long long cand = 1; cand < D; ++cand)
            if ((cand * (g % D)) % D == 1 % D) { gi = cand; break; }
        auto norm = [D](long long x) { return ((x % D) + D) % D; };
        return std::pair<long long, long long>{norm(old_s * gi), norm(old_t * gi)};
    };
    cplx tot{0.0, 0.0};
    const long long M = D1 * D2;
    for (long long B1 = 0; B1 < D1; ++B1)
        for (long long C1 = 0; C1 < D1; ++C1) {
            if (std::gcd(std::gcd(B1, C1), D1) != 1) continue;
            auto [Y1, Z1] = bez(B1, C1, D1);
            for (long long B2 = 0; B2 < D2; ++B2)
                for (long long C2 = 0; C2 < D2; ++C2) {
                    if ((D1 * C2 + B1 * B2 + D2 * C1) % M != 0) continue;
                    if (std::gcd(std::gcd(B2, C2), D2) != 1) continue;
                    auto [Y2, Z2] = bez(B2, C2, D2);
                    tot += eee(n1 * B1 + m1 * (Y1 * D2 - Z1 * B2), D1) *
                           eee(m2 * B2 + n2 * (Y2 * D1 - Z2 * B1), D2);
                }
        }
    return tot;
}

cplx ramanujan_oracle(long long m, long long D) {
    cplx tot{0.0, 0.0};
    for (long long a = (D == 1 ? 0 : 1); a < std::max<long long>(D, 1); ++a) {
        if (D > 1 && std::gcd(a, D) != 1) continue;
        double ang = 2.0 * pi * static_cast<double>(a) *
                     static_cast<double>(m) / static_cast<double>(D);
        tot += cplx{std::cos(ang), std::sin(ang)};
    }
    if (D == 1) tot = {1.0, 0.0};
    return tot;
}

}  // namespace

TEST_CASE("tilde sum: pinned values") {
    for (auto [n1, n2, m1] : std::vector<std::array<long long, 3>>{
             {1, 1, 1}, {0, 0, 0}, {-3, 7, 2}}) {
        auto r = kloosterman_tilde(n1, n2, m1, 1, 1);
        CHECK(r.terms_enumerated == 1);
        CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(r.value.imag()) < 1e-14);
    }
    auto a = kloosterman_tilde(1, 1, 1, 1, 2);
    CHECK(a.value.real() == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(a.value.imag()) < 1e-13);
    auto b = kloosterman_tilde(1, 1, 1, 2, 2);
    CHECK(std::abs(b.value) < 1e-13);
    CHECK(b.terms_enumerated == 2);
}

TEST_CASE("tilde sum: Ramanujan reduction at D1 = 1") {
    // S~(1,1,1;1,D) collapses to c_D(1) = mu(D).
    const std::vector<std::pair<std::uint64_t, double>> cases{
        {2, -1.0}, {3, -1.0}, {5, -1.0}, {6, 1.0}, {30, -1.0}};
    for (auto [D, mu] : cases) {
        auto brute = kloosterman_tilde(1, 1, 1, 1, D);
        KloostermanQuery q;
        q.variant = kloosterman_variant::tilde;
        q.n1 = q.n2 = q.m1 = 1;
        q.D1 = 1;
        q.D2 = D;
        auto fast = kloosterman_fast(q);
        CHECK(brute.value.real() == doctest::Approx(mu).epsilon(1e-12));
        CHECK(std::abs(brute.value.imag()) < 1e-12);
        CHECK(std::abs(fast.value - brute.value) < 1e-12);
        CHECK(fast.method == kloosterman_method::crt);
        CHECK(ramanujan_sum(1, D) == mu);
    }
}

TEST_CASE("big sum: pinned values") {
    for (auto [n1, m2, m1, n2] : std::vector<std::array<long long, 4>>{
             {1, 1, 1, 1}, {2, 5, -1, 3}}) {
        auto r = kloosterman_big(n1, m2, m1, n2, 1, 1);
        CHECK(r.terms_enumerated == 1);
        CHECK(std::abs(r.value - cplx{1.0, 0.0}) < 1e-14);
    }
    auto a = kloosterman_big(1, 1, 1, 1, 1, 2);
    CHECK(std::abs(a.value - cplx{1.0, 0.0}) < 1e-13);
    auto b = kloosterman_big(1, 1, 1, 1, 2, 1);
    CHECK(std::abs(b.value - cplx{1.0, 0.0}) < 1e-13);
}

TEST_CASE("big sum: matches quadruple-loop oracle on tiny moduli") {
    for (long long D1 = 1; D1 <= 6; ++D1)
        for (long long D2 = 1; D2 <= 6; ++D2)
            for (auto [n1, m2, m1, n2] : std::vector<std::array<long long, 4>>{
                     {1, 1, 1, 1}, {2, 1, 3, 2}}) {
                auto lib = kloosterman_big(n1, m2, m1, n2,
                                           static_cast<std::uint64_t>(D1),
                                           static_cast<std::uint64_t>(D2));
                cplx ora = big_oracle(n1, m2, m1, n2, D1, D2);
                CHECK(std::abs(lib.value - ora) < 1e-10);
            }
}

TEST_CASE("ramanujan sum: closed form matches enumeration") {
    CHECK(ramanujan_sum(0, 1) == 1.0);
    CHECK(ramanujan_sum(7, 1) == 1.0);
    CHECK(ramanujan_sum(1, 2) == -1.0);
    CHECK(ramanujan_sum(2, 6) == doctest::Approx(ramanujan_oracle(2, 6).real())
                                     .epsilon(1e-12));
    for (std::uint64_t D = 1; D <= 60; ++D)
        for (long long m : {0LL, 1LL, 2LL, 3LL, 4LL, 6LL, 12LL, -5LL}) {
            cplx ora = ramanujan_oracle(m, static_cast<long long>(D));
            CHECK(std::abs(ora.imag()) < 1e-9);
            CHECK(std::abs(ramanujan_sum(m, D) - ora.real()) < 1e-9);
        }
}

TEST_CASE("tilde sum: fast CRT path equals brute force exhaustively") {
    // Every D1 | D2 <= 60 and all indices in [1,5]^3.
    double worst = 0.0;
    for (std::uint64_t D2 = 1; D2 <= 60; ++D2)
        for (std::uint64_t D1 = 1; D1 <= D2; ++D1) {
            if (D2 % D1 != 0) continue;
            for (long long n1 = 1; n1 <= 5; ++n1)
                for (long long n2 = 1; n2 <= 5; ++n2)
                    for (long long m1 = 1; m1 <= 5; ++m1) {
                        auto brute = kloosterman_tilde(n1, n2, m1, D1, D2);
                        KloostermanQuery q;
                        q.variant = kloosterman_variant::tilde;
                        q.n1 = n1;
                        q.n2 = n2;
                        q.m1 = m1;
                        q.D1 = D1;
                        q.D2 = D2;
                        auto fast = kloosterman_fast(q);
                        worst = std::max(worst,
                                         std::abs(fast.value - brute.value));
                        REQUIRE(std::abs(fast.value - brute.value) < 1e-9);
                        REQUIRE(fast.terms_enumerated ==
                                brute.terms_enumerated);
                        REQUIRE(std::abs(brute.value) <=
                                static_cast<double>(brute.terms_enumerated) +
                                    1e-9);
                        REQUIRE(brute.terms_enumerated <= D1 * D2);
                    }
        }
    MESSAGE("tilde brute-vs-crt worst deviation: ", worst);
    CHECK(worst < 1e-9);
}

TEST_CASE("big sum: fast CRT path equals brute force exhaustively") {
    // All D1, D2 <= 12 and indices in [1,3]^4.
    double worst = 0.0;
    for (std::uint64_t D1 = 1; D1 <= 12; ++D1)
        for (std::uint64_t D2 = 1; D2 <= 12; ++D2)
            for (long long n1 = 1; n1 <= 3; ++n1)
                for (long long m2 = 1; m2 <= 3; ++m2)
                    for (long long m1 = 1; m1 <= 3; ++m1)
                        for (long long n2 = 1; n2 <= 3; ++n2) {
                            auto brute =
                                kloosterman_big(n1, m2, m1, n2, D1, D2);
                            KloostermanQuery q;
                            q.variant = kloosterman_variant::big;
                            q.n1 = n1;
                            q.m2 = m2;
                            q.m1 = m1;
                            q.n2 = n2;
                            q.D1 = D1;
                            q.D2 = D2;
                            auto fast = kloosterman_fast(q);
                            worst = std::max(
                                worst, std::abs(fast.value - brute.value));
                            REQUIRE(std::abs(fast.value - brute.value) < 1e-9);
                            REQUIRE(fast.terms_enumerated ==
                                    brute.terms_enumerated);
                            REQUIRE(std::abs(brute.value) <=
                                    static_cast<double>(
                                        brute.terms_enumerated) +
                                        1e-9);
                            REQUIRE(brute.terms_enumerated <=
                                    (D1 * D2) * (D1 * D2));
                        }
    MESSAGE("big brute-vs-crt worst deviation: ", worst);
    CHECK(worst < 1e-9);
}

TEST_CASE("big sum: value independent of the Bezout solution") {
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> moduli{
        {8, 12}, {9, 3}, {12, 12}, {6, 4}, {7, 11}, {10, 25}};
    for (auto [D1, D2] : moduli) {
        auto canonical = kloosterman_big(2, 3, 1, 5, D1, D2);
        for (std::uint64_t twist : {0xabcdefULL, 7ULL, 0x51f15eedULL}) {
            auto twisted = kloosterman_big(2, 3, 1, 5, D1, D2, 0,
                                           1000000000ULL, twist);
            CHECK(std::abs(twisted.value - canonical.value) < 1e-10);
            CHECK(twisted.terms_enumerated == canonical.terms_enumerated);
        }
    }
}

TEST_CASE("tilde sum: periodicity in the indices is exact") {
    const std::uint64_t D1 = 6, D2 = 36, E = D2 / D1;
    auto base = kloosterman_tilde(2, 5, 4, D1, D2);
    auto sn1 = kloosterman_tilde(2 + static_cast<long long>(D1), 5, 4, D1, D2);
    auto sn2 = kloosterman_tilde(2, 5 + static_cast<long long>(D1), 4, D1, D2);
    auto sm1 = kloosterman_tilde(2, 5, 4 + static_cast<long long>(E), D1, D2);
    CHECK(base.value.real() == sn1.value.real());
    CHECK(base.value.imag() == sn1.value.imag());
    CHECK(base.value.real() == sn2.value.real());
    CHECK(base.value.imag() == sn2.value.imag());
    CHECK(base.value.real() == sm1.value.real());
    CHECK(base.value.imag() == sm1.value.imag());
}

TEST_CASE("negating all indices conjugates both sums") {
    auto t = kloosterman_tilde(2, 5, 4, 6, 36);
    auto tn = kloosterman_tilde(-2, -5, -4, 6, 36);
    CHECK(std::abs(tn.value - std::conj(t.value)) < 1e-10);
    auto b = kloosterman_big(2, 3, 1, 5, 8, 12);
    auto bn = kloosterman_big(-2, -3, -1, -5, 8, 12);
    CHECK(std::abs(bn.value - std::conj(b.value)) < 1e-10);
}

TEST_CASE("validation and budget errors") {
    CHECK_THROWS_AS(kloosterman_tilde(1, 1, 1, 6, 8), validation_error);
    CHECK_THROWS_AS(kloosterman_tilde(1, 1, 1, 0, 4), validation_error);
    CHECK_THROWS_AS(kloosterman_big(1, 1, 1, 1, 0, 3), validation_error);
    CHECK_THROWS_AS(ramanujan_sum(1, 0), validation_error);
    KloostermanQuery q;
    q.variant = kloosterman_variant::tilde;
    q.n1 = q.n2 = q.m1 = 1;
    q.D1 = 6;
    q.D2 = 8;
    CHECK_THROWS_AS(kloosterman_fast(q), validation_error);
    CHECK_THROWS_AS(kloosterman_tilde(1, 1, 1, 60, 3600, 0, 10), budget_error);
    CHECK_THROWS_AS(kloosterman_big(1, 1, 1, 1, 50, 60, 0, 10), budget_error);
    q.D1 = 60;
    q.D2 = 3600;
    CHECK_THROWS_AS(kloosterman_fast(q, 0, 10), budget_error);
}

TEST_CASE("worker count does not change the bits") {
    auto t1 = kloosterman_tilde(3, 2, 1, 12, 60, 1);
    auto t4 = kloosterman_tilde(3, 2, 1, 12, 60, 4);
    CHECK(t1.value.real() == t4.value.real());
    CHECK(t1.value.imag() == t4.value.imag());
    auto b1 = kloosterman_big(2, 3, 1, 5, 10, 12, 1);
    auto b4 = kloosterman_big(2, 3, 1, 5, 10, 12, 4);
    CHECK(b1.value.real() == b4.value.real());
    CHECK(b1.value.imag() == b4.value.imag());
    KloostermanQuery q;
    q.variant = kloosterman_variant::big;
    q.n1 = 2;
    q.m2 = 3;
    q.m1 = 1;
    q.n2 = 5;
    q.D1 = 10;
    q.D2 = 12;
    auto f1 = kloosterman_fast(q, 1);
    auto f4 = kloosterman_fast(q, 4);
    CHECK(f1.value.real() == f4.value.real());
    CHECK(f1.value.imag() == f4.value.imag());
}
