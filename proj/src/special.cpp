#include "kzlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace kzlab {
namespace {

// Stirling coefficients B_{2n} / (2n (2n-1)) for n = 1..12.
constexpr double stirling_coef[12] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    854513.0 / 63756.0,
    -236364091.0 / 1506960.0,
};

// Bernoulli numbers B_2..B_24.
constexpr double bernoulli2k[12] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
};

cplx stirling_log_gamma(cplx z) {
    // Requires |z| >= 12 and Re z >= 0.5 (|arg z| < pi/2 + margin).
    cplx res = (z - 0.5) * std::log(z) - z + 0.5 * log_2pi_v;
    cplx zinv2 = 1.0 / (z * z);
    cplx zpow = 1.0 / z;
    for (double c : stirling_coef) {
        res += c * zpow;
        zpow *= zinv2;
    }
    return res;
}

}  // namespace

// log sin(pi z) on the branch that makes the reflection formula agree with
// the standard log-Gamma branch; safe for arbitrarily large |Im z|.
cplx log_sin_pi(cplx z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    const cplx i_unit(0.0, 1.0);
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}), |e^{2 pi i z}| <= 1 here.
    cplx q = std::exp(2.0 * pi * i_unit * z);
    return cplx(-std::log(2.0), 0.5 * pi) - i_unit * pi * z + std::log(1.0 - q);
}

cplx log_gamma(cplx z) {
    if (z.real() < 0.5) {
        double nearest = std::round(z.real());
        if (nearest <= 0.0 && std::abs(z.real() - nearest) < 1e-10 && std::abs(z.imag()) < 1e-10)
            throw domain_error("log_gamma: argument within 1e-10 of a pole");
        return log_pi_v - log_sin_pi(z) - log_gamma(1.0 - z);
    }
    cplx shift(0.0, 0.0);
    while (std::abs(z) < 12.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    return stirling_log_gamma(z) + shift;
}

cplx zeta(cplx s) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-8)
        throw domain_error("zeta: argument within 1e-8 of the pole at s = 1");
    const std::size_t N =
        static_cast<std::size_t>(std::max(24.0, std::ceil(1.6 * (std::abs(s.imag()) + 30.0))));
    kahan_sum_cplx acc;
    for (std::size_t n = 1; n < N; ++n)
        acc.add(std::exp(-s * std::log(static_cast<double>(n))));
    const double Nd = static_cast<double>(N);
    const cplx logN = std::log(cplx(Nd, 0.0));
    cplx res = acc.value();
    res += 0.5 * std::exp(-s * logN);
    res += std::exp((1.0 - s) * logN) / (s - 1.0);
    // Euler-Maclaurin correction: sum_k B_{2k}/(2k)! * (s)_{2k-1} * N^{1-s-2k}.
    cplx rising = s;                      // (s)_{2k-1} running product
    double fact = 2.0;                    // (2k)!
    cplx npow = std::exp(-(s + 1.0) * logN);
    const cplx n2 = 1.0 / cplx(Nd * Nd, 0.0);
    for (int k = 1; k <= 12; ++k) {
        res += bernoulli2k[k - 1] / fact * rising * npow;
        rising *= (s + cplx(2.0 * k - 1.0, 0.0)) * (s + cplx(2.0 * k, 0.0));
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        npow *= n2;
    }
    return res;
}

namespace {

// Coefficients of prod_n (1 - q^n) as sparse pentagonal-number entries.
struct pentagonal_series {
    std::vector<std::size_t> idx;
    std::vector<double> sign;
};

pentagonal_series euler_function(std::size_t N) {
    pentagonal_series e;
    e.idx.push_back(0);
    e.sign.push_back(1.0);
    for (long long j = 1;; ++j) {
        long long g1 = j * (3 * j - 1) / 2;
        long long g2 = j * (3 * j + 1) / 2;
        double s = (j % 2 == 1) ? -1.0 : 1.0;
        bool any = false;
        if (g1 <= static_cast<long long>(N)) {
            e.idx.push_back(static_cast<std::size_t>(g1));
            e.sign.push_back(s);
            any = true;
        }
        if (g2 <= static_cast<long long>(N)) {
            e.idx.push_back(static_cast<std::size_t>(g2));
            e.sign.push_back(s);
            any = true;
        }
        if (!any) break;
    }
    return e;
}

// Coefficients of euler^24 by 24 passes of the sparse pentagonal factor.
// Forward stable, unlike the log-derivative power recurrence, whose
// homogeneous solutions grow and amplify rounding catastrophically.
template <class T>
std::vector<T> euler_pow24(std::size_t N) {
    pentagonal_series e = euler_function(N);
    std::vector<T> cur(N + 1, T(0)), nxt(N + 1, T(0));
    cur[0] = T(1);
    for (int rep = 0; rep < 24; ++rep) {
        std::fill(nxt.begin(), nxt.end(), T(0));
        for (std::size_t t = 0; t < e.idx.size(); ++t) {
            const std::size_t k = e.idx[t];
            const T s = T(e.sign[t]);
            for (std::size_t i = k; i <= N; ++i) nxt[i] += s * cur[i - k];
        }
        cur.swap(nxt);
    }
    return cur;
}

template <class T>
std::vector<T> sigma_series(std::size_t N, int r) {
    std::vector<T> s(N + 1, T(0));
    for (std::size_t d = 1; d <= N; ++d) {
        T dr = T(1);
        for (int i = 0; i < r; ++i) dr *= T(static_cast<double>(d));
        for (std::size_t m = d; m <= N; m += d) s[m] += dr;
    }
    return s;
}

std::vector<std::size_t> smallest_prime_factor(std::size_t N) {
    std::vector<std::size_t> spf(N + 1, 0);
    for (std::size_t i = 2; i <= N; ++i) {
        if (spf[i] == 0)
            for (std::size_t j = i; j <= N; j += i)
                if (spf[j] == 0) spf[j] = i;
    }
    return spf;
}

}  // namespace

std::vector<double> tau_by_product_expansion(std::size_t N) {
    // Literal (1-q)^24 (1-q^2)^24 ... truncated at degree N-1, then shift by q.
    // Truncated partial products grow far beyond the final coefficients, so
    // this path runs in exact 128-bit integers; N = 360 keeps the largest
    // intermediate below 2^127 with a wide margin.
    if (N == 0 || N > 360)
        throw validation_error("tau_by_product_expansion: N must be in [1, 360]");
    std::vector<__int128> poly(N, 0);
    poly[0] = 1;
    for (std::size_t m = 1; m < N; ++m) {
        for (int rep = 0; rep < 24; ++rep) {
            for (std::size_t i = N - 1; i >= m; --i) poly[i] -= poly[i - m];
        }
    }
    std::vector<double> tau(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) tau[n] = static_cast<double>(poly[n - 1]);
    return tau;
}

HeckeTable hecke_eigenvalues_holomorphic(int k, std::size_t N) {
    static const int supported[] = {12, 16, 18, 20, 22, 26};
    if (std::find(std::begin(supported), std::end(supported), k) == std::end(supported))
        throw validation_error("hecke_eigenvalues_holomorphic: weight " + std::to_string(k) +
                               " is not in the one-dimensional range {12,16,18,20,22,26}");
    if (N == 0) throw validation_error("hecke_eigenvalues_holomorphic: N must be positive");
    if (N > 1000000) throw validation_error("hecke_eigenvalues_holomorphic: N exceeds 10^6");
    if (k != 12 && N > 20000)
        throw budget_error("hecke_eigenvalues_holomorphic: weight != 12 builds convolve "
                           "against an Eisenstein series and are capped at N = 20000");

    std::vector<double> a(N + 1, 0.0);
    if (k == 12) {
        std::vector<long double> B = euler_pow24<long double>(N);
        for (std::size_t n = 1; n <= N; ++n) a[n] = static_cast<double>(B[n - 1]);
    } else {
        // The Delta * E_{k-12} convolution cancels interior terms by up to
        // ~n^6 at weight 26, which swamps long double; accumulate in quad.
        int r = 0;
        double c = 0.0;
        switch (k) {
            case 16: r = 3;  c = 240.0;  break;
            case 18: r = 5;  c = -504.0; break;
            case 20: r = 7;  c = 480.0;  break;
            case 22: r = 9;  c = -264.0; break;
            case 26: r = 13; c = -24.0;  break;
        }
        std::vector<__float128> B = euler_pow24<__float128>(N);
        std::vector<__float128> sig = sigma_series<__float128>(N, r);
        const __float128 cq = c;
        for (std::size_t n = 1; n <= N; ++n) {
            __float128 acc = B[n - 1];
            for (std::size_t m = 1; m < n; ++m) acc += cq * B[m - 1] * sig[n - m];
            a[n] = static_cast<double>(acc);
        }
    }

    HeckeTable t;
    t.label = "holomorphic_k" + std::to_string(k);
    t.kind = table_kind::holomorphic;
    t.weight_or_spectral = static_cast<double>(k);
    t.lam.assign(N + 1, cplx(0.0, 0.0));
    const double half = (k - 1) / 2.0;
    for (std::size_t n = 1; n <= N; ++n)
        t.lam[n] = cplx(a[n] * std::pow(static_cast<double>(n), -half), 0.0);
    return t;
}

void validate_table(const HeckeTable& t) {
    const std::size_t N = t.n_max();
    if (N == 0) throw validation_error("HeckeTable: empty table");
    if (std::abs(t.lam[1] - cplx(1.0, 0.0)) > 1e-10)
        throw validation_error("HeckeTable: lambda(1) != 1");
    std::vector<std::size_t> spf = smallest_prime_factor(N);
    for (std::size_t n = 2; n <= N; ++n) {
        std::size_t p = spf[n];
        std::size_t pe = 1, rest = n;
        while (rest % p == 0) {
            pe *= p;
            rest /= p;
        }
        if (rest == 1) continue;  // prime power
        cplx lhs = t.lam[n];
        cplx rhs = t.lam[pe] * t.lam[rest];
        double scale = std::max(1.0, std::abs(lhs));
        if (std::abs(lhs - rhs) > 1e-10 * scale)
            throw validation_error("HeckeTable: multiplicativity fails at n=" + std::to_string(n) +
                                   " = " + std::to_string(pe) + " * " + std::to_string(rest));
    }
    if (t.kind == table_kind::holomorphic) {
        // lam(p^{r+1}) = lam(p) lam(p^r) - lam(p^{r-1}) with lam(p^0) = 1.
        for (std::size_t p = 2; p <= N; ++p) {
            if (spf[p] != p) continue;
            std::size_t prev = 1, pr = p;
            while (pr <= N / p) {
                std::size_t next = pr * p;
                cplx expect = t.lam[p] * t.lam[pr] - t.lam[prev];
                double scale = std::max(1.0, std::abs(t.lam[next]));
                if (std::abs(t.lam[next] - expect) > 1e-10 * scale)
                    throw validation_error("HeckeTable: Hecke recursion fails at p=" +
                                           std::to_string(p) + ", p^r=" + std::to_string(pr));
                prev = pr;
                pr = next;
            }
        }
    }
}

bool deligne_check(const HeckeTable& t) {
    const std::size_t N = t.n_max();
    std::vector<std::size_t> spf = smallest_prime_factor(N);
    for (std::size_t p = 2; p <= N; ++p)
        if (spf[p] == p && std::abs(t.lam[p]) > 2.0 + 1e-9) return false;
    return true;
}

HeckeTable synthetic_chebyshev_table(std::size_t N, std::uint64_t seed) {
    HeckeTable t;
    t.label = "synthetic_chebyshev_" + std::to_string(seed);
    t.kind = table_kind::synthetic;
    t.lam.assign(N + 1, cplx(0.0, 0.0));
    t.lam[1] = cplx(1.0, 0.0);
    std::vector<std::size_t> spf = smallest_prime_factor(N);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.25, pi - 0.25);
    std::vector<double> theta(N + 1, 0.0);
    for (std::size_t p = 2; p <= N; ++p)
        if (spf[p] == p) theta[p] = angle(rng);
    for (std::size_t n = 2; n <= N; ++n) {
        std::size_t p = spf[n];
        std::size_t rest = n;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (rest == 1) {
            double th = theta[p];
            t.lam[n] = cplx(std::sin((e + 1) * th) / std::sin(th), 0.0);
        } else {
            std::size_t pe = n / rest;
            t.lam[n] = t.lam[pe] * t.lam[rest];
        }
    }
    return t;
}

HeckeTable load_hecke_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("load_hecke_table: cannot open " + path);
    HeckeTable t;
    std::vector<std::pair<std::size_t, cplx>> rows;
    std::size_t max_n = 0;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            std::string key = body.substr(0, eq);
            std::string val = body.substr(eq + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t") + 1);
            };
            trim(key);
            trim(val);
            if (key == "label") t.label = val;
            else if (key == "weight") {
                t.kind = table_kind::holomorphic;
                t.weight_or_spectral = std::stod(val);
            } else if (key == "t_f") {
                t.kind = table_kind::maass_gl2;
                t.weight_or_spectral = std::stod(val);
            } else if (key == "kind") {
                if (val == "holomorphic") t.kind = table_kind::holomorphic;
                else if (val == "maass-gl2") t.kind = table_kind::maass_gl2;
                else if (val == "synthetic") t.kind = table_kind::synthetic;
                else throw validation_error("load_hecke_table: unknown kind " + val);
            }
            continue;
        }
        if (!header_seen) {
            std::string squashed;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) squashed += c;
            if (squashed != "n,re,im")
                throw validation_error("load_hecke_table: expected header n,re,im");
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::size_t n;
        double re, im;
        if (!std::getline(ls, field, ',')) continue;
        n = static_cast<std::size_t>(std::stoull(field));
        if (!std::getline(ls, field, ',')) throw validation_error("load_hecke_table: bad row");
        re = std::stod(field);
        if (!std::getline(ls, field, ',')) throw validation_error("load_hecke_table: bad row");
        im = std::stod(field);
        rows.emplace_back(n, cplx(re, im));
        max_n = std::max(max_n, n);
    }
    if (rows.empty()) throw validation_error("load_hecke_table: no data rows in " + path);
    t.lam.assign(max_n + 1, cplx(0.0, 0.0));
    for (auto& [n, v] : rows) {
        if (n == 0) throw validation_error("load_hecke_table: row with n = 0");
        t.lam[n] = v;
    }
    validate_table(t);
    return t;
}

void save_hecke_table(const std::string& path, const HeckeTable& t) {
    std::ofstream out(path);
    if (!out) throw validation_error("save_hecke_table: cannot open " + path);
    out.precision(17);
    if (!t.label.empty()) out << "# label=" << t.label << "\n";
    switch (t.kind) {
        case table_kind::holomorphic:
            out << "# kind=holomorphic\n# weight=" << t.weight_or_spectral << "\n";
            break;
        case table_kind::maass_gl2:
            out << "# kind=maass-gl2\n# t_f=" << t.weight_or_spectral << "\n";
            break;
        case table_kind::synthetic:
            out << "# kind=synthetic\n";
            break;
    }
    out << "n,re,im\n";
    for (std::size_t n = 1; n <= t.n_max(); ++n)
        out << n << "," << t.lam[n].real() << "," << t.lam[n].imag() << "\n";
}

namespace {

SeriesValue series_sum(const std::vector<cplx>& lam_a, const std::vector<cplx>* lam_b, cplx s,
                       const SeriesAccuracy& acc, double coef_bound_power, double coef_bound_const,
                       const char* what) {
    const double sigma = s.real();
    const double tail_exp = coef_bound_power + 1.0 - sigma;  // exponent of the integrand x^{..}
    if (sigma < 2.0)
        throw validation_error(std::string(what) + ": requires Re s >= 2");
    if (tail_exp >= -1e-9)
        throw validation_error(std::string(what) + ": tail bound diverges at this Re s");
    std::size_t N = lam_a.size() - 1;
    if (lam_b) N = std::min(N, lam_b->size() - 1);
    if (acc.truncation > 0) N = std::min(N, acc.truncation);
    kahan_sum_cplx sum;
    for (std::size_t n = 1; n <= N; ++n) {
        cplx c = lam_a[n];
        if (lam_b) c *= (*lam_b)[n];
        sum.add(c * std::exp(-s * std::log(static_cast<double>(n))));
    }
    // sum_{n>N} C n^{p - sigma} <= C N^{p+1-sigma} / (sigma - p - 1).
    const double tail =
        coef_bound_const * std::pow(static_cast<double>(N), tail_exp) / (-tail_exp);
    if (acc.target_tol > 0.0 && tail > acc.target_tol)
        throw accuracy_error(std::string(what) + ": achieved tail bound " + std::to_string(tail) +
                             " exceeds target " + std::to_string(acc.target_tol));
    return {sum.value(), tail, N};
}

}  // namespace

SeriesValue dirichlet_eval(const HeckeTable& table, cplx s, const SeriesAccuracy& acc) {
    const bool deligne = deligne_check(table);
    // d(n) <= 2 sqrt(n); without the Deligne bound fall back to |lambda| <= sqrt(n).
    const double cpow = 0.5;
    const double cconst = deligne ? 2.0 : 1.0;
    return series_sum(table.lam, nullptr, s, acc, cpow, cconst, "dirichlet_eval");
}

SeriesValue rankin_selberg_series(const HeckeTable& tg, const HeckeTable& tf, cplx s,
                                  rankin_normalization norm, const SeriesAccuracy& acc) {
    // |lambda_g lambda_f| <= d(n)^2 <= 4n.
    SeriesValue bare =
        series_sum(tg.lam, &tf.lam, s, acc, 1.0, 4.0, "rankin_selberg_series");
    if (norm == rankin_normalization::bare) return bare;
    cplx z = zeta(2.0 * s);
    bare.value *= z;
    bare.tail_bound *= std::abs(z);
    return bare;
}

}  // namespace kzlab
