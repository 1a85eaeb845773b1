// Scalar special functions and Hecke coefficient tables: complex log-Gamma,
// the completed-Gamma factor, Euler-Maclaurin zeta, holomorphic cusp form
// q-expansions, and certified Dirichlet / Rankin-Selberg partial sums.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kzlab/numeric.hpp"

namespace kzlab {

// Principal-branch log Gamma.  Reflection below Re z = 1/2, otherwise
// recurrence shift into |z| >= 12 followed by a 12-term Stirling tail.
cplx log_gamma(cplx z);

// log of Gamma_R(s) = pi^{-s/2} Gamma(s/2).
inline cplx log_gamma_R(cplx s) { return -0.5 * s * log_pi_v + log_gamma(0.5 * s); }

// log sin(pi z), overflow-safe for large |Im z|; exp of it is exactly sin(pi z).
cplx log_sin_pi(cplx z);

// Riemann zeta by Euler-Maclaurin; valid for Re s >= -1, |Im s| <= 1e3.
cplx zeta(cplx s);

enum class table_kind { holomorphic, maass_gl2, synthetic };

// Multiplicative coefficient table in analytic normalization: lam[n] holds
// lambda(n) with lambda(1) = 1; index 0 is unused.
struct HeckeTable {
    std::string label;
    table_kind kind = table_kind::synthetic;
    double weight_or_spectral = 0.0;
    std::vector<cplx> lam;

    std::size_t n_max() const { return lam.empty() ? 0 : lam.size() - 1; }
    cplx at(std::size_t n) const {
        if (n == 0 || n > n_max()) throw validation_error("HeckeTable: index out of range");
        return lam[n];
    }
};

// Throws validation_error naming the first violated relation:
// lambda(1) = 1, multiplicativity at 1e-10 relative, and for holomorphic
// tables the Hecke recursion lambda(p^{r+1}) = lambda(p)lambda(p^r) - lambda(p^{r-1}).
void validate_table(const HeckeTable& t);

// True when |lambda(p)| <= 2 + 1e-9 for every prime p <= n_max.
bool deligne_check(const HeckeTable& t);

// Normalized eigenvalues lambda(n) = a(n)/n^{(k-1)/2} for the one-dimensional
// weights k in {12,16,18,20,22,26}, built from the Delta and Eisenstein
// q-expansions.  The weight-12 path is O(N sqrt N); other weights need a
// dense quad-precision product and are capped at N = 20000.
HeckeTable hecke_eigenvalues_holomorphic(int k, std::size_t N);

// Ramanujan tau values tau(1..N) by literal expansion of q*prod(1-q^n)^24
// with repeated polynomial multiplication.  Slow; kept as an independent
// cross-check path for the series-recurrence build.
std::vector<double> tau_by_product_expansion(std::size_t N);

// Multiplicative table with lambda(p^e) = U_e(x_p), x_p = cos(theta_p) drawn
// deterministically from `seed`.  Satisfies the Hecke recursion by
// construction and the Deligne bound with margin.
HeckeTable synthetic_chebyshev_table(std::size_t N, std::uint64_t seed);

// CSV persistence: header `n,re,im`, optional `# key=value` comment lines for
// label / kind / weight / t_f.  Loading validates the table.
HeckeTable load_hecke_table(const std::string& path);
void save_hecke_table(const std::string& path, const HeckeTable& t);

struct SeriesAccuracy {
    std::size_t truncation = 0;   // 0: use the full table
    double target_tol = 0.0;      // 0: no enforcement, report the bound only
};

struct SeriesValue {
    cplx value;
    double tail_bound = 0.0;
    std::size_t terms = 0;
};

// Partial sum of sum lambda(n) n^{-s} with a certified integral tail bound:
// coefficients are bounded by d(n) <= 2 sqrt(n) after Deligne validation and
// by n^{1/2} otherwise.  Requires Re s >= 2.
SeriesValue dirichlet_eval(const HeckeTable& table, cplx s, const SeriesAccuracy& acc = {});

enum class rankin_normalization { with_zeta2s, bare };

// sum lambda_g(n) lambda_f(n) n^{-s}, optionally multiplied by zeta(2s).
SeriesValue rankin_selberg_series(const HeckeTable& tg, const HeckeTable& tf, cplx s,
                                  rankin_normalization norm, const SeriesAccuracy& acc = {});

}  // namespace kzlab
