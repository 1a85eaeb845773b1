#include "kzlab/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace kzlab {

namespace {

cplx cpow(std::uint64_t n, cplx e) { return std::exp(e * std::log(static_cast<double>(n))); }

int mobius_of(std::uint64_t n) {
    int m = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
    }
    if (n > 1) m = -m;
    return m;
}

std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
    std::vector<std::uint64_t> d;
    for (std::uint64_t a = 1; a * a <= n; ++a) {
        if (n % a) continue;
        d.push_back(a);
        if (a != n / a) d.push_back(n / a);
    }
    std::sort(d.begin(), d.end());
    return d;
}

// B(1,n) for the minimal series by literal triple-divisor enumeration.
cplx b_min_first_row(const triple& mu, std::uint64_t n) {
    kahan_sum_cplx acc;
    for (std::uint64_t d1 : divisors_of(n))
        for (std::uint64_t d2 : divisors_of(n / d1))
            acc.add(cpow(d1, -mu[0]) * cpow(d2, -mu[1]) * cpow(n / d1 / d2, -mu[2]));
    return acc.value();
}

cplx d2_exponent(const MaximalEisenstein& e) {
    return e.sign == max_exponent_sign::plus_2u ? 2.0 * e.u : -2.0 * e.u;
}

cplx b_max_first_row(const MaximalEisenstein& e, std::uint64_t n) {
    const cplx e2 = d2_exponent(e);
    kahan_sum_cplx acc;
    for (std::uint64_t d1 : divisors_of(n)) acc.add(e.f.at(d1) * cpow(d1, -e.u) * cpow(n / d1, e2));
    return acc.value();
}

template <typename FirstRow>
cplx hecke_combine(FirstRow&& row, std::uint64_t m, std::uint64_t n) {
    kahan_sum_cplx acc;
    for (std::uint64_t d : divisors_of(std::gcd(m, n))) {
        int mob = mobius_of(d);
        if (mob == 0) continue;
        acc.add(static_cast<double>(mob) * std::conj(row(m / d)) * row(n / d));
    }
    return acc.value();
}

// exp of the m-dependence allowed by the coefficient bounds:
// |B^min(1,m)| <= d_3(m) m^{max_j |Re mu_j|} and
// |B^max(1,m)| <= d_3(m) m^{2|Re u|} (using sum_{d1 d2 = m} d(d1) = d_3(m)
// under the Deligne bound; +1/2 when the table is not Deligne-verified).
double coefficient_growth(const MinimalEisenstein& e) {
    double g = 0.0;
    for (const cplx& m : e.point.mu) g = std::max(g, std::abs(m.real()));
    return g;
}

double coefficient_growth(const MaximalEisenstein& e) {
    double g = 2.0 * std::abs(e.u.real());
    if (!deligne_check(e.f)) g += 0.5;
    return g;
}

// int_M^infty x^{-a} (1 + ln x)^k dx for a > 1, M >= 1, by parts.
double log_power_integral(double M, double a, int k) {
    double lead = std::pow(M, 1.0 - a) / (a - 1.0);
    double total = 0.0;
    double coeff = 1.0;
    double lg = 1.0 + std::log(M);
    for (int j = k; j >= 0; --j) {
        total += coeff * lead * std::pow(lg, j);
        coeff *= static_cast<double>(j) / (a - 1.0);
    }
    return total;
}

// Certified bound on sum_{m > N} d_r(m) m^{-a} from the hyperbola estimate
// sum_{m <= x} d_r(m) <= x (1 + ln x)^{r-1} and partial summation.
double divisor_tail(std::size_t N, double a, int r) {
    if (a <= 1.0) throw validation_error("check_identity: tail exponent must exceed 1");
    return a * log_power_integral(static_cast<double>(std::max<std::size_t>(N, 1)), a, r - 1);
}

double zeta_real(double s) { return zeta(cplx(s, 0.0)).real(); }

// Worst-case truncation error of a double sum over n m^2 > N with term bound
// d_6(n) n^{en - sn} d_6(m) m^{em - sm}, sn = Re s, sm = 2 Re s.  Splits at
// m0 = sqrt(N): below it the inner n-tail starts at N/m^2, above it the whole
// n-sum (at most zeta(an)^6) is missing.
double double_sum_tail(std::size_t N, double sn, double sm, double en, double em) {
    const double an = sn - en;
    const double am = sm - em;
    if (an <= 1.0 || am <= 1.0) throw validation_error("check_identity: tail exponent must exceed 1");
    const double full_n = std::pow(zeta_real(an), 6);
    const std::size_t m0 = static_cast<std::size_t>(std::sqrt(static_cast<double>(N)));
    std::vector<double> d6(m0 + 1, 0.0);
    {
        std::vector<double> cur(m0 + 1, 1.0), nxt(m0 + 1, 0.0);
        cur[0] = 0.0;
        for (int pass = 1; pass < 6; ++pass) {
            std::fill(nxt.begin(), nxt.end(), 0.0);
            for (std::size_t a = 1; a <= m0; ++a)
                for (std::size_t b = 1; a * b <= m0; ++b) nxt[a * b] += cur[a];
            cur.swap(nxt);
        }
        d6 = cur;
    }
    double total = 0.0;
    for (std::size_t m = 1; m <= m0; ++m) {
        const std::size_t from = static_cast<std::size_t>(static_cast<double>(N) /
                                                          (static_cast<double>(m) * m));
        const double inner = std::min(full_n, divisor_tail(from, an, 6));
        total += d6[m] * std::pow(static_cast<double>(m), -am) * inner;
    }
    total += full_n * divisor_tail(m0, am, 6);
    return total;
}

struct FactorValue {
    cplx value;
    double tail;
};

FactorValue product_of(const std::vector<FactorValue>& fs) {
    cplx v(1.0, 0.0);
    double hi = 1.0;
    double lo = 1.0;
    for (const auto& f : fs) {
        v *= f.value;
        hi *= std::abs(f.value) + f.tail;
        lo *= std::abs(f.value);
    }
    return {v, hi - lo};
}

// First-row coefficient table B(1, n) for n <= N by sieving over divisor
// pairs/triples; O(N log^2 N).
std::vector<cplx> first_row_table_min(const triple& mu, std::size_t N) {
    std::vector<cplx> p1(N + 1), p2(N + 1), p3(N + 1), out(N + 1, cplx(0, 0));
    for (std::size_t n = 1; n <= N; ++n) {
        p1[n] = cpow(n, -mu[0]);
        p2[n] = cpow(n, -mu[1]);
        p3[n] = cpow(n, -mu[2]);
    }
    for (std::size_t a = 1; a <= N; ++a)
        for (std::size_t b = 1; a * b <= N; ++b) {
            const cplx ab = p1[a] * p2[b];
            for (std::size_t c = 1; a * b * c <= N; ++c) out[a * b * c] += ab * p3[c];
        }
    return out;
}

std::vector<cplx> first_row_table_max(const MaximalEisenstein& e, std::size_t N) {
    const cplx e2 = d2_exponent(e);
    std::vector<cplx> p1(N + 1), p2(N + 1), out(N + 1, cplx(0, 0));
    for (std::size_t n = 1; n <= N; ++n) {
        p1[n] = e.f.at(n) * cpow(n, -e.u);
        p2[n] = cpow(n, e2);
    }
    for (std::size_t a = 1; a <= N; ++a)
        for (std::size_t b = 1; a * b <= N; ++b) out[a * b] += p1[a] * p2[b];
    return out;
}

// sum_{n m^2 <= N} lambda_g(n) conj(B(m,n)) (n m^2)^{-s} with B(m,n) expanded
// through the Hecke relation over the precomputed first row.
cplx rankin_lhs(const std::vector<cplx>& row, const HeckeTable& g, cplx s, std::size_t N,
                int workers) {
    const std::size_t m_top = static_cast<std::size_t>(std::sqrt(static_cast<double>(N)));
    std::vector<cplx> partial(m_top + 1, cplx(0, 0));
    parallel_for(m_top, resolve_workers(workers), [&](std::size_t idx) {
        const std::size_t m = idx + 1;
        const std::size_t n_top = N / (m * m);
        kahan_sum_cplx acc;
        for (std::size_t n = 1; n <= n_top; ++n) {
            kahan_sum_cplx bmn;
            for (std::uint64_t d : divisors_of(std::gcd<std::uint64_t>(m, n))) {
                int mob = mobius_of(d);
                if (mob == 0) continue;
                bmn.add(static_cast<double>(mob) * std::conj(row[m / d]) * row[n / d]);
            }
            acc.add(g.at(n) * std::conj(bmn.value()) *
                    cpow(static_cast<std::uint64_t>(n) * m * m, -s));
        }
        partial[m] = acc.value();
    });
    kahan_sum_cplx total;
    for (std::size_t m = 1; m <= m_top; ++m) total.add(partial[m]);
    return total.value();
}

cplx single_lhs(const std::vector<cplx>& row, cplx s, std::size_t N) {
    kahan_sum_cplx acc;
    for (std::size_t m = 1; m <= N; ++m) acc.add(row[m] * cpow(m, -s));
    return acc.value();
}

SeriesValue dirichlet_to(const HeckeTable& t, cplx s, std::size_t N) {
    SeriesAccuracy acc;
    acc.truncation = std::min(N, t.n_max());
    return dirichlet_eval(t, s, acc);
}

}  // namespace

cplx b_min(const MinimalEisenstein& e, std::uint64_t m, std::uint64_t n) {
    if (m == 0 || n == 0) throw validation_error("b_min: indices start at 1");
    return hecke_combine([&](std::uint64_t x) { return b_min_first_row(e.point.mu, x); }, m, n);
}

cplx b_max(const MaximalEisenstein& e, std::uint64_t m, std::uint64_t n) {
    if (m == 0 || n == 0) throw validation_error("b_max: indices start at 1");
    return hecke_combine([&](std::uint64_t x) { return b_max_first_row(e, x); }, m, n);
}

double n_min(const MinimalEisenstein& e) {
    double prod = 1.0 / 16.0;
    for (const cplx& nu : e.point.nu) {
        if (std::abs(nu) < 1e-8) throw domain_error("n_min: zeta pole at nu = 0");
        prod *= std::norm(zeta(1.0 + 3.0 * nu));
    }
    return prod;
}

double n_max(const MaximalEisenstein& e) {
    if (!e.ad_square_L1) throw validation_error("n_max: ad_square_L1 not supplied");
    const cplx s = 1.0 + 3.0 * e.u;
    SeriesValue L = dirichlet_eval(e.f, s);
    return 8.0 * *e.ad_square_L1 * std::norm(L.value);
}

HeckeTable load_gl2_form(const std::string& path) {
    HeckeTable t = load_hecke_table(path);
    if (t.kind != table_kind::maass_gl2)
        throw validation_error("load_gl2_form: file lacks the # t_f=<real> header");
    return t;
}

IdentityCheck check_identity(eisenstein_identity which, const IdentityParams& p, cplx s,
                             std::size_t N, int workers) {
    if (N < 4) throw validation_error("check_identity: truncation too small");
    const double sigma = s.real();
    const bool is_min = which == eisenstein_identity::Emin || which == eisenstein_identity::gEmin;
    const bool is_double =
        which == eisenstein_identity::gEmin || which == eisenstein_identity::gEmax;
    if (is_min && p.min == nullptr) throw validation_error("check_identity: missing minimal data");
    if (!is_min && p.max == nullptr) throw validation_error("check_identity: missing maximal data");
    if (is_double && p.g == nullptr) throw validation_error("check_identity: missing g table");
    if (is_double && p.g->n_max() < N)
        throw validation_error("check_identity: g table shorter than truncation");
    if (!is_min && p.max->f.n_max() < N)
        throw validation_error("check_identity: f table shorter than truncation");
    const double g_penalty = is_double && !deligne_check(*p.g) ? 0.5 : 0.0;

    auto evaluate = [&](max_exponent_sign sign, rankin_normalization norm) -> IdentityCheck {
        MaximalEisenstein emax;
        if (!is_min) {
            emax = *p.max;
            emax.sign = sign;
        }
        const double growth = is_min ? coefficient_growth(*p.min) : coefficient_growth(emax);
        cplx lhs, rhs;
        double lhs_tail = 0.0, rhs_tail = 0.0;
        switch (which) {
            case eisenstein_identity::Emin: {
                lhs = single_lhs(first_row_table_min(p.min->point.mu, N), s, N);
                lhs_tail = divisor_tail(N, sigma - growth, 3);
                std::vector<FactorValue> fs;
                for (const cplx& mu : p.min->point.mu) fs.push_back({zeta(s + mu), 0.0});
                auto pr = product_of(fs);
                rhs = pr.value;
                rhs_tail = pr.tail;
                break;
            }
            case eisenstein_identity::Emax: {
                lhs = single_lhs(first_row_table_max(emax, N), s, N);
                lhs_tail = divisor_tail(N, sigma - growth, 3);
                SeriesValue L = dirichlet_to(emax.f, s + emax.u, N);
                auto pr = product_of({{zeta(s - 2.0 * emax.u), 0.0}, {L.value, L.tail_bound}});
                rhs = pr.value;
                rhs_tail = pr.tail;
                break;
            }
            case eisenstein_identity::gEmin: {
                lhs = rankin_lhs(first_row_table_min(p.min->point.mu, N), *p.g, s, N, workers);
                lhs_tail = double_sum_tail(N, sigma, 2.0 * sigma, growth + g_penalty, growth);
                std::vector<FactorValue> fs;
                for (const cplx& mu : p.min->point.mu) {
                    SeriesValue L = dirichlet_to(*p.g, s - mu, N);
                    fs.push_back({L.value, L.tail_bound});
                }
                auto pr = product_of(fs);
                rhs = pr.value;
                rhs_tail = pr.tail;
                break;
            }
            case eisenstein_identity::gEmax: {
                lhs = rankin_lhs(first_row_table_max(emax, N), *p.g, s, N, workers);
                lhs_tail = double_sum_tail(N, sigma, 2.0 * sigma, growth + g_penalty, growth);
                SeriesValue Lg = dirichlet_to(*p.g, s + 2.0 * emax.u, N);
                SeriesValue Lrs = rankin_selberg_series(*p.g, emax.f, s - emax.u, norm);
                auto pr = product_of({{Lg.value, Lg.tail_bound}, {Lrs.value, Lrs.tail_bound}});
                rhs = pr.value;
                rhs_tail = pr.tail;
                break;
            }
        }
        IdentityCheck out;
        out.lhs = lhs;
        out.rhs = rhs;
        out.residual = std::abs(lhs - rhs);
        out.tail_bound = lhs_tail + rhs_tail;
        if (which == eisenstein_identity::Emax)
            out.resolved = sign == max_exponent_sign::plus_2u ? "d2-exponent=+2u" : "d2-exponent=-2u";
        else if (which == eisenstein_identity::gEmax)
            out.resolved = norm == rankin_normalization::with_zeta2s ? "rankin=with-zeta2s"
                                                                     : "rankin=bare";
        return out;
    };

    std::vector<IdentityCheck> attempts;
    if (which == eisenstein_identity::Emax) {
        attempts.push_back(evaluate(max_exponent_sign::plus_2u, rankin_normalization::bare));
        attempts.push_back(evaluate(max_exponent_sign::minus_2u, rankin_normalization::bare));
    } else if (which == eisenstein_identity::gEmax) {
        attempts.push_back(evaluate(p.max->sign, rankin_normalization::with_zeta2s));
        attempts.push_back(evaluate(p.max->sign, rankin_normalization::bare));
    } else {
        attempts.push_back(evaluate(max_exponent_sign::plus_2u, rankin_normalization::bare));
    }
    for (const auto& a : attempts)
        if (a.residual <= a.tail_bound) return a;
    const auto& best = *std::min_element(
        attempts.begin(), attempts.end(),
        [](const IdentityCheck& a, const IdentityCheck& b) { return a.residual < b.residual; });
    throw accuracy_error("check_identity: residual " + std::to_string(best.residual) +
                         " exceeds certified tail " + std::to_string(best.tail_bound));
}

}  // namespace kzlab
