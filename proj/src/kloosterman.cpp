#include "kzlab/kloosterman.hpp"

#include <cassert>
#include <numeric>
#include <utility>
#include <vector>

namespace kzlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = long long;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 submod(u64 a, u64 b, u64 m) { return (a + m - b % m) % m; }

// Index reduced into [0, m); handles negative inputs.
u64 reduce_index(i64 n, u64 m) {
    i64 r = n % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

i64 egcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    i64 x1, y1;
    i64 g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Inverse of a modulo m; m = 1 yields 0.  Callers guarantee gcd(a, m) = 1.
u64 invmod(u64 a, u64 m) {
    if (m == 1) return 0;
    i64 x, y;
    i64 g = egcd(static_cast<i64>(a % m), static_cast<i64>(m), x, y);
    assert(g == 1 && "invmod: arguments must be coprime");
    (void)g;
    i64 r = x % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> f;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

u64 euler_phi(u64 n) {
    u64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

int mobius(u64 n) {
    int sign = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

// e(a/d1 + b/d2) with 0 <= a < d1, 0 <= b < d2 already reduced.
cplx unit_phase(u64 a, u64 d1, u64 b, u64 d2) {
    double angle = two_pi * (static_cast<double>(a) / static_cast<double>(d1) +
                             static_cast<double>(b) / static_cast<double>(d2));
    return {std::cos(angle), std::sin(angle)};
}

// gcd(gcd(B, C), D); gcd(0, 0) = 0, so B = C = 0 gives D.
u64 triple_gcd(u64 B, u64 C, u64 D) { return std::gcd(std::gcd(B, C), D); }

u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Y, Z with B*Y + C*Z = 1 (mod D) for B, C in [0, D), gcd(B, C, D) = 1.
// twist = 0 picks the canonical pair from the extended Euclid coefficients;
// otherwise shifts along the exact null direction (C/g, -B/g), which keeps
// the identity because B*(C/g) - C*(B/g) = 0.
std::pair<u64, u64> bezout_pair(u64 B, u64 C, u64 D, u64 twist) {
    if (D == 1) return {0, 0};
    u64 g = std::gcd(B, C);
    assert(g != 0 && "bezout_pair: B = C = 0 only allowed for D = 1");
    i64 u, v;
    egcd(static_cast<i64>(B), static_cast<i64>(C), u, v);
    u64 ginv = invmod(g % D, D);
    u64 Y = mulmod(reduce_index(u, D), ginv, D);
    u64 Z = mulmod(reduce_index(v, D), ginv, D);
    if (twist != 0) {
        u64 t = splitmix64(B * 0x9e3779b97f4a7c15ULL ^ (C << 1) ^ twist) % D;
        Y = (Y + mulmod(t, (C / g) % D, D)) % D;
        Z = submod(Z, mulmod(t, (B / g) % D, D), D);
    }
    assert((mulmod(B % D, Y, D) + mulmod(C % D, Z, D)) % D == 1 % D);
    return {Y, Z};
}

}  // namespace

KloostermanValue kloosterman_tilde(long long n1, long long n2, long long m1,
                                   std::uint64_t D1, std::uint64_t D2,
                                   int workers, std::uint64_t budget) {
    if (D1 == 0 || D2 == 0)
        throw validation_error("kloosterman_tilde: moduli must be positive");
    if (D2 % D1 != 0)
        throw validation_error("kloosterman_tilde: D1 must divide D2");
    const u64 E = D2 / D1;
    const u64 phiD1 = euler_phi(D1);
    if (u128(phiD1) * D1 * euler_phi(E) > budget)
        throw budget_error("kloosterman_tilde: enumeration exceeds term budget");

    const u64 n1r = reduce_index(n1, D1);
    const u64 n2r = reduce_index(n2, D1);
    const u64 m1r = reduce_index(m1, E);

    std::vector<u64> units;
    units.reserve(phiD1);
    if (D1 == 1) {
        units.push_back(0);
    } else {
        for (u64 c = 1; c < D1; ++c)
            if (std::gcd(c, D1) == 1) units.push_back(c);
    }

    std::vector<cplx> slot_val(units.size());
    std::vector<u64> slot_terms(units.size(), 0);
    parallel_for(units.size(), workers, [&](std::size_t idx) {
        const u64 C1 = units[idx];
        const u64 C1bar = invmod(C1 % D1, D1);
        const u64 base = mulmod(n1r, C1, D1);
        const u64 coef = mulmod(n2r, C1bar, D1);
        kahan_sum_cplx acc;
        u64 terms = 0;
        for (u64 C2 = 0; C2 < D2; ++C2) {
            if (std::gcd(C2, E) != 1) continue;
            const u64 a = (mulmod(coef, C2 % D1, D1) + base) % D1;
            const u64 b = mulmod(m1r, invmod(C2 % E, E), E);
            acc.add(unit_phase(a, D1, b, E));
            ++terms;
        }
        slot_val[idx] = acc.value();
        slot_terms[idx] = terms;
    });

    kahan_sum_cplx total;
    u64 terms = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
        total.add(slot_val[i]);
        terms += slot_terms[i];
    }
    return {total.value(), terms, kloosterman_method::brute};
}

KloostermanValue kloosterman_big(long long n1, long long m2, long long m1,
                                 long long n2, std::uint64_t D1,
                                 std::uint64_t D2, int workers,
                                 std::uint64_t budget,
                                 std::uint64_t bezout_twist) {
    if (D1 == 0 || D2 == 0)
        throw validation_error("kloosterman_big: moduli must be positive");
    const u64 g1 = std::gcd(D1, D2);
    if (u128(D1) * D2 * g1 > budget)
        throw budget_error("kloosterman_big: enumeration exceeds term budget");

    const u64 n1r = reduce_index(n1, D1);
    const u64 m1r = reduce_index(m1, D1);
    const u64 m2r = reduce_index(m2, D2);
    const u64 n2r = reduce_index(n2, D2);

    // Congruence mod D1 in C1: (D2 mod D1) * C1 = -B1*B2, solvable iff
    // g1 | B1*B2, with g1 solutions spaced D1/g1 apart.
    const u64 a = D2 % D1;
    const u64 Dg = D1 / g1;
    const u64 ainv = invmod((a / g1) % Dg, Dg);

    std::vector<cplx> slot_val(D1);
    std::vector<u64> slot_terms(D1, 0);
    parallel_for(D1, workers, [&](std::size_t b1i) {
        const u64 B1 = static_cast<u64>(b1i);
        kahan_sum_cplx acc;
        u64 terms = 0;
        for (u64 B2 = 0; B2 < D2; ++B2) {
            const u64 rhs = submod(0, mulmod(B1 % D1, B2 % D1, D1), D1);
            if (rhs % g1 != 0) continue;
            const u64 c0 = mulmod((rhs / g1) % Dg, ainv, Dg);
            for (u64 t = 0; t < g1; ++t) {
                const u64 C1 = c0 + t * Dg;
                if (triple_gcd(B1, C1, D1) != 1) continue;
                // D1*C2 = -(B1*B2 + D2*C1) mod D1*D2; the right side is
                // divisible by D1 by choice of C1, so C2 is unique mod D2.
                const u128 K = u128(B1) * B2 + u128(D2) * C1;
                const u64 C2 = submod(0, static_cast<u64>((K / D1) % D2), D2);
                if (triple_gcd(B2, C2, D2) != 1) continue;
                const auto [Y1, Z1] = bezout_pair(B1, C1, D1, bezout_twist);
                const auto [Y2, Z2] = bezout_pair(B2, C2, D2, bezout_twist);
                const u64 p1 =
                    (mulmod(n1r, B1, D1) +
                     mulmod(m1r,
                            submod(mulmod(Y1, D2 % D1, D1),
                                   mulmod(Z1, B2 % D1, D1), D1),
                            D1)) %
                    D1;
                const u64 p2 =
                    (mulmod(m2r, B2, D2) +
                     mulmod(n2r,
                            submod(mulmod(Y2, D1 % D2, D2),
                                   mulmod(Z2, B1 % D2, D2), D2),
                            D2)) %
                    D2;
                acc.add(unit_phase(p1, D1, p2, D2));
                ++terms;
            }
        }
        slot_val[b1i] = acc.value();
        slot_terms[b1i] = terms;
    });

    kahan_sum_cplx total;
    u64 terms = 0;
    for (std::size_t i = 0; i < D1; ++i) {
        total.add(slot_val[i]);
        terms += slot_terms[i];
    }
    return {total.value(), terms, kloosterman_method::brute};
}

double ramanujan_sum(long long m, std::uint64_t D) {
    if (D == 0) throw validation_error("ramanujan_sum: D must be positive");
    const u64 g = std::gcd(reduce_index(m, D), D);
    const u64 q = D / g;
    const int mu = mobius(q);
    if (mu == 0) return 0.0;
    return static_cast<double>(mu) *
           static_cast<double>(euler_phi(D) / euler_phi(q));
}

KloostermanValue kloosterman_fast(const KloostermanQuery& query, int workers,
                                  std::uint64_t budget) {
    const u64 D1 = query.D1;
    const u64 D2 = query.D2;
    if (D1 == 0 || D2 == 0)
        throw validation_error("kloosterman_fast: moduli must be positive");
    const bool tilde = query.variant == kloosterman_variant::tilde;
    if (tilde && D2 % D1 != 0)
        throw validation_error("kloosterman_fast: D1 must divide D2");

    // Union of the prime supports; exponent pairs (a, b) give the local
    // moduli (p^a, p^b).
    std::vector<std::pair<u64, std::pair<int, int>>> primes;
    for (auto [p, e] : factorize(D1)) primes.push_back({p, {e, 0}});
    for (auto [p, e] : factorize(D2)) {
        bool found = false;
        for (auto& q : primes)
            if (q.first == p) {
                q.second.second = e;
                found = true;
            }
        if (!found) primes.push_back({p, {0, e}});
    }

    cplx value{1.0, 0.0};
    u128 terms = 1;
    u64 spent = 0;
    for (auto& [p, ab] : primes) {
        u64 pa = 1, pb = 1;
        for (int i = 0; i < ab.first; ++i) pa *= p;
        for (int i = 0; i < ab.second; ++i) pb *= p;
        const u64 remaining = budget > spent ? budget - spent : 0;
        KloostermanValue local;
        if (tilde) {
            // S~(n1, n2, m1; D1, D2) = prod_p S~ of the CRT-twisted indices
            // at the local moduli: the partial-fraction weights r = (D1/p^a)^-1
            // mod p^a and s = ((D2/D1)/p^(b-a))^-1 mod p^(b-a) absorb the
            // cross-prime parts of the denominators.
            const u64 pe = pb / pa;
            const u64 r = invmod((D1 / pa) % pa, pa);
            const u64 s = invmod(((D2 / D1) / pe) % pe, pe);
            const u64 ln1 = mulmod(reduce_index(query.n1, pa), r, pa);
            const u64 ln2 = mulmod(reduce_index(query.n2, pa), r, pa);
            const u64 lm1 = mulmod(reduce_index(query.m1, pe), s, pe);
            local = kloosterman_tilde(static_cast<i64>(ln1),
                                      static_cast<i64>(ln2),
                                      static_cast<i64>(lm1), pa, pb, workers,
                                      remaining);
        } else {
            // S(n1, m2, m1, n2; D1, D2) = prod_p S of twisted indices: with
            // r = (D1/p^a)^-1 mod p^a and t = (D2/p^b)^-1 mod p^b, the m1/n2
            // slots additionally pick up the complementary cofactors D2/p^b
            // and D1/p^a from the cross terms of the congruence.
            const u64 r = invmod((D1 / pa) % pa, pa);
            const u64 t = invmod((D2 / pb) % pb, pb);
            const u64 D1p = D1 / pa;
            const u64 D2p = D2 / pb;
            const u64 ln1 = mulmod(reduce_index(query.n1, pa), r, pa);
            const u64 lm2 = mulmod(reduce_index(query.m2, pb), t, pb);
            const u64 lm1 =
                mulmod(mulmod(reduce_index(query.m1, pa), D2p % pa, pa), r, pa);
            const u64 ln2 =
                mulmod(mulmod(reduce_index(query.n2, pb), D1p % pb, pb), t, pb);
            local = kloosterman_big(static_cast<i64>(ln1),
                                    static_cast<i64>(lm2),
                                    static_cast<i64>(lm1),
                                    static_cast<i64>(ln2), pa, pb, workers,
                                    remaining);
        }
        value *= local.value;
        terms *= local.terms_enumerated;
        spent += local.terms_enumerated;
    }

    KloostermanValue out;
    out.value = value;
    out.terms_enumerated =
        terms > u128(~u64(0)) ? ~u64(0) : static_cast<u64>(terms);
    out.method = kloosterman_method::crt;
    return out;
}

}  // namespace kzlab
