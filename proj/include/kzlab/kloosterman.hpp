#pragma once

#include <cstdint>

#include "kzlab/numeric.hpp"

namespace kzlab {

enum class kloosterman_variant { tilde, big };
enum class kloosterman_method { brute, crt };

/// Query for either exponential sum. `tilde` uses (n1, n2, m1) and requires
/// D1 | D2; `big` uses all four indices and any positive moduli.
struct KloostermanQuery {
  kloosterman_variant variant = kloosterman_variant::tilde;
  long long n1 = 0;
  long long n2 = 0;
  long long m1 = 0;
  long long m2 = 0;
  std::uint64_t D1 = 1;
  std::uint64_t D2 = 1;
};

/// Result of an enumeration. Every summand has unit modulus, so
/// |value| <= terms_enumerated always holds.
struct KloostermanValue {
  cplx value{0.0, 0.0};
  std::uint64_t terms_enumerated = 0;
  kloosterman_method method = kloosterman_method::brute;
};

/// S~(n1, n2, m1; D1, D2) with D1 | D2: sum over C1 in (Z/D1)^* and C2 mod D2
/// with gcd(C2, D2/D1) = 1 of
///   e( (n2*inv(C1)*C2 + n1*C1)/D1 + m1*inv(C2)/(D2/D1) ),
/// inverses taken modulo the denominator they sit over. Rational phases are
/// reduced exactly in integer arithmetic before any floating-point call.
/// Throws validation_error if D1 does not divide D2 or a modulus is zero,
/// budget_error if the enumeration would exceed `budget` terms.
KloostermanValue kloosterman_tilde(long long n1, long long n2, long long m1,
                                   std::uint64_t D1, std::uint64_t D2,
                                   int workers = 0,
                                   std::uint64_t budget = 1000000000ULL);

/// S(n1, m2, m1, n2; D1, D2): sum over B1, C1 mod D1 and B2, C2 mod D2 with
///   D1*C2 + B1*B2 + D2*C1 = 0 (mod D1*D2),  gcd(Bj, Cj, Dj) = 1,
/// of e( (n1*B1 + m1*(Y1*D2 - Z1*B2))/D1 + (m2*B2 + n2*(Y2*D1 - Z2*B1))/D2 )
/// where Bj*Yj + Cj*Zj = 1 (mod Dj) is any Bezout solution; the value does
/// not depend on that choice. `bezout_twist` selects a different solution
/// family per (Bj, Cj) pair (testing knob; 0 keeps the canonical one).
/// Enumeration fixes (B1, B2) and solves the congruence for (C1, C2) rather
/// than quadruple-looping. gcd(0, 0, D) = D, so B = C = 0 only survives when
/// D = 1. Throws validation_error on a zero modulus, budget_error if the
/// work estimate exceeds `budget`.
KloostermanValue kloosterman_big(long long n1, long long m2, long long m1,
                                 long long n2, std::uint64_t D1,
                                 std::uint64_t D2, int workers = 0,
                                 std::uint64_t budget = 1000000000ULL,
                                 std::uint64_t bezout_twist = 0);

/// Ramanujan sum c_D(m) = sum over a in (Z/D)^* of e(a m / D), evaluated by
/// the closed form mu(D/g) * phi(D) / phi(D/g) with g = gcd(m, D). Exact
/// integer value. Throws validation_error if D = 0.
double ramanujan_sum(long long m, std::uint64_t D);

/// Fast path: factor the moduli into prime powers, evaluate one local sum per
/// prime with CRT-twisted indices, and multiply. Local blocks reuse the brute
/// enumerators (parallel across residue classes, fixed summation order).
/// terms_enumerated reports the term count of the equivalent global sum, i.e.
/// the product of the local counts; the budget bounds the work actually done.
KloostermanValue kloosterman_fast(const KloostermanQuery& query,
                                  int workers = 0,
                                  std::uint64_t budget = 1000000000ULL);

}  // namespace kzlab
