#include "kzlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kzlab/special.hpp"

namespace kzlab {

namespace {

double dist_to_nonpos_int(cplx z) {
    double k = std::round(z.real());
    if (k > 0.0) k = 0.0;
    return std::abs(z - cplx(k, 0.0));
}

// Distance from the abscissa to the pole lines {r - k : k = 0, 1, ...}.
double sigma_line_distance(double sigma, double r) {
    double k = std::round(sigma - r);
    if (k < 0.0) k = 0.0;
    return std::abs(sigma - r + k);
}

// Cosine taper over the outer 20% of [-Heff, Heff]; zero at the endpoints,
// so truncation enters through the tail estimate rather than a hard cut.
double window(double t, double Heff) {
    const double frac = 0.2;
    const double a = (1.0 - frac) * Heff;
    const double at = std::abs(t);
    if (at <= a) return 1.0;
    if (at >= Heff) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (at - a) / (Heff - a)));
}

// 7-point Gauss-Legendre nodes/weights on [-1, 1], ascending.
constexpr double gl_x[7] = {-0.9491079123427585245261897,
                            -0.7415311855993944398638648,
                            -0.4058451513773971669066064,
                            0.0,
                            0.4058451513773971669066064,
                            0.7415311855993944398638648,
                            0.9491079123427585245261897};
constexpr double gl_w[7] = {0.1294849661688696932706114,
                            0.2797053914892766679014678,
                            0.3818300505051189449503698,
                            0.4179591836734693877551020,
                            0.3818300505051189449503698,
                            0.2797053914892766679014678,
                            0.1294849661688696932706114};

struct w4_pass_result {
    cplx value{0.0, 0.0};
    double endpoint_mag = 0.0;
    std::uint64_t evaluations = 0;
};

w4_pass_result w4_pass(double y, const triple& mu, int sign, double sigma,
                       double H, double step, quadrature_rule rule,
                       int workers) {
    const double logy = std::log(std::abs(y));
    auto f = [&](double t) {
        cplx s(sigma, t);
        return g_tilde(s, mu, sign) * std::exp(-s * logy);
    };

    std::vector<double> nodes;
    std::vector<double> weights;  // plain quadrature weights, window excluded
    double Heff;
    if (rule == quadrature_rule::trapezoid) {
        const std::size_t half = static_cast<std::size_t>(std::floor(H / step));
        Heff = static_cast<double>(half) * step;
        nodes.resize(2 * half + 1);
        weights.assign(2 * half + 1, step);
        for (std::size_t k = 0; k < nodes.size(); ++k)
            nodes[k] = (static_cast<double>(k) - static_cast<double>(half)) * step;
    } else {
        const std::size_t nseg = static_cast<std::size_t>(
            std::max(1.0, std::ceil(2.0 * H / (7.0 * step))));
        Heff = H;
        const double seg = 2.0 * H / static_cast<double>(nseg);
        nodes.reserve(7 * nseg);
        weights.reserve(7 * nseg);
        for (std::size_t i = 0; i < nseg; ++i) {
            const double a = -H + static_cast<double>(i) * seg;
            for (int g = 0; g < 7; ++g) {
                nodes.push_back(a + 0.5 * seg * (1.0 + gl_x[g]));
                weights.push_back(0.5 * seg * gl_w[g]);
            }
        }
    }
    if (nodes.size() > 50000000)
        throw budget_error("k_w4: contour grid exceeds 5e7 nodes");

    const std::size_t chunk = 4096;
    const std::size_t nslots = (nodes.size() + chunk - 1) / chunk;
    std::vector<cplx> slot(nslots, cplx{0.0, 0.0});
    parallel_for(nslots, workers, [&](std::size_t s) {
        kahan_sum_cplx acc;
        const std::size_t lo = s * chunk;
        const std::size_t hi = std::min(nodes.size(), lo + chunk);
        for (std::size_t k = lo; k < hi; ++k)
            acc.add(f(nodes[k]) * (weights[k] * window(nodes[k], Heff)));
        slot[s] = acc.value();
    });
    kahan_sum_cplx total;
    for (const cplx& v : slot) total.add(v);

    w4_pass_result out;
    out.value = total.value() / two_pi;
    out.endpoint_mag = std::abs(f(Heff)) + std::abs(f(-Heff));
    out.evaluations = nodes.size() + 2;
    return out;
}

struct w6_variant {
    std::vector<cplx> row_shifts;  // sin(pi(s1 - shift)) factors
    std::vector<cplx> col_shifts;  // sin(pi(s2 + shift)) factors
    bool diag_sin = false;         // divide by sin(pi(s1+s2)) on the diagonal
    cplx constant{0.0, 0.0};       // nu-only prefactor
};

w6_variant make_variant(int eps1, int eps2, const triple& mu,
                        const triple& nu) {
    auto cos15 = [](cplx z) { return std::cos(1.5 * pi * z); };
    auto sin15 = [&](cplx z, const char* name) {
        cplx v = std::sin(1.5 * pi * z);
        if (std::abs(v) < 1e-8)
            throw domain_error(std::string("k_w6: denominator ") + name +
                               " within 1e-8 of zero");
        return v;
    };
    const double c24 = 1.0 / (24.0 * pi * pi);
    const double c32 = 1.0 / (32.0 * pi * pi);
    w6_variant v;
    if (eps1 == 1 && eps2 == 1) {
        v.constant = c24 * cos15(nu[0]) * cos15(nu[1]) * cos15(nu[2]);
    } else if (eps1 == 1 && eps2 == -1) {
        v.row_shifts = {mu[0]};
        v.col_shifts = {mu[1], mu[2]};
        v.diag_sin = true;
        v.constant = -c32 * cos15(nu[1]) /
                     (sin15(nu[0], "sin(3 pi nu_1 / 2)") *
                      sin15(nu[2], "sin(3 pi nu_3 / 2)"));
    } else if (eps1 == -1 && eps2 == 1) {
        v.row_shifts = {mu[0], mu[1]};
        v.col_shifts = {mu[2]};
        v.diag_sin = true;
        v.constant = -c32 * cos15(nu[0]) /
                     (sin15(nu[1], "sin(3 pi nu_2 / 2)") *
                      sin15(nu[2], "sin(3 pi nu_3 / 2)"));
    } else {
        v.row_shifts = {mu[1]};
        v.col_shifts = {mu[1]};
        v.constant = c32 * cos15(nu[2]) /
                     (sin15(nu[1], "sin(3 pi nu_2 / 2)") *
                      sin15(nu[0], "sin(3 pi nu_1 / 2)"));
    }
    return v;
}

struct w6_pass_result {
    cplx value{0.0, 0.0};
    std::uint64_t evaluations = 0;
};

w6_pass_result w6_pass(double y1, double y2, const triple& mu,
                       const w6_variant& var, double sigma, double H,
                       double step, int workers) {
    const std::size_t half = static_cast<std::size_t>(std::floor(H / step));
    const std::size_t n = 2 * half + 1;
    if (n > 5000000) throw budget_error("k_w6: contour grid exceeds 5e6 nodes");
    const double Heff = static_cast<double>(half) * step;
    const double L1 = std::log(4.0 * pi * pi * std::abs(y1));
    const double L2 = std::log(4.0 * pi * pi * std::abs(y2));

    std::vector<cplx> row(n), col(n);
    parallel_for(n, workers, [&](std::size_t k) {
        const double t = (static_cast<double>(k) - static_cast<double>(half)) * step;
        const cplx s1(sigma, t);
        const cplx s2(sigma, t);
        cplx lr = -s1 * L1;
        cplx lc = -s2 * L2;
        for (int j = 0; j < 3; ++j) {
            lr += log_gamma(s1 - mu[j]);
            lc += log_gamma(s2 + mu[j]);
        }
        for (const cplx& sh : var.row_shifts) lr += log_sin_pi(s1 - sh);
        for (const cplx& sh : var.col_shifts) lc += log_sin_pi(s2 + sh);
        const double w = window(t, Heff);
        row[k] = std::exp(lr) * w;
        col[k] = std::exp(lc) * w;
    });

    std::vector<cplx> diag(2 * n - 1);
    parallel_for(diag.size(), workers, [&](std::size_t m) {
        const double u =
            (static_cast<double>(m) - 2.0 * static_cast<double>(half)) * step;
        const cplx su(2.0 * sigma, u);
        cplx ld = -log_gamma(su);
        if (var.diag_sin) ld -= log_sin_pi(su);
        diag[m] = std::exp(ld);
    });

    // The pairing with 1/Gamma(s1+s2) rules out FFT convolution: the true
    // convolution decays like exp(-3 pi |u| / 2) into the wings while the
    // diagonal grows like exp(pi |u| / 2), and the absolute noise floor of an
    // FFT (eps * |row| * |col|) lands on wing bins that get amplified by up
    // to exp(pi H), swamping the dot product by many orders of magnitude.
    // A direct sum over the banded row/col supports keeps every term exact.
    // Banding is sound when either the rows/cols decay at the full Gamma^3
    // rate (++: worst edge-times-center term is cut^{2/3}) or the diagonal
    // itself decays (mixed signs, 1/sin(pi(s1+s2))).  The -- variant has
    // neither: its sin-boosted rows pair with the growing diagonal at O(cut *
    // exp(pi t_edge / 2)) = O(1), so it keeps the full range.
    const bool bandable =
        var.diag_sin || (var.row_shifts.empty() && var.col_shifts.empty());
    auto support = [&](const std::vector<cplx>& v) {
        std::size_t lo = 0, hi = v.size();
        if (!bandable) return std::pair<std::size_t, std::size_t>(lo, hi);
        double vmax = 0.0;
        for (const cplx& z : v) vmax = std::max(vmax, std::abs(z));
        if (vmax > 0.0) {
            const double cut = 1e-27 * vmax;
            while (lo + 1 < hi && std::abs(v[lo]) < cut) ++lo;
            while (hi > lo + 1 && std::abs(v[hi - 1]) < cut) --hi;
        }
        return std::pair<std::size_t, std::size_t>(lo, hi);
    };
    const auto [rlo, rhi] = support(row);
    const auto [clo, chi] = support(col);
    std::vector<cplx> slot(rhi - rlo, cplx{0.0, 0.0});
    parallel_for(rhi - rlo, workers, [&](std::size_t i) {
        const std::size_t k = rlo + i;
        cplx inner(0.0, 0.0);
        for (std::size_t j = clo; j < chi; ++j) inner += col[j] * diag[k + j];
        slot[i] = row[k] * inner;
    });
    kahan_sum_cplx acc;
    for (const cplx& v : slot) acc.add(v);

    const double scale = step / two_pi;
    w6_pass_result out;
    out.value = acc.value() * (scale * scale) * var.constant;
    out.evaluations = 2 * n + diag.size();
    return out;
}

}  // namespace

cplx g_tilde(cplx s, const triple& mu, int sign) {
    if (sign != 1 && sign != -1)
        throw validation_error("g_tilde: sign must be +1 or -1");
    const cplx lp = -3.0 * s * log_pi_v - std::log(12288.0) - 3.5 * log_pi_v;
    auto product = [&](int which) -> cplx {
        cplx lg(0.0, 0.0);
        for (int j = 0; j < 3; ++j) {
            const cplx num = which == 0 ? 0.5 * (s - mu[j])
                                        : 0.5 * (1.0 + s - mu[j]);
            const cplx den = which == 0 ? 0.5 * (1.0 - s + mu[j])
                                        : 0.5 * (2.0 - s + mu[j]);
            if (dist_to_nonpos_int(num) < 1e-6)
                throw domain_error(
                    std::string("g_tilde: Gamma((") +
                    (which == 0 ? "s - mu_" : "1 + s - mu_") +
                    std::to_string(j + 1) + ")/2) within 1e-6 of a pole");
            // A pole of a denominator Gamma is a zero of the ratio.
            if (dist_to_nonpos_int(den) < 1e-9) return cplx(0.0, 0.0);
            lg += log_gamma(num) - log_gamma(den);
        }
        return std::exp(lp + lg);
    };
    return product(0) + cplx(0.0, static_cast<double>(sign)) * product(1);
}

cplx g_big(cplx s1, cplx s2, const triple& mu) {
    if (dist_to_nonpos_int(s1 + s2) < 1e-6)
        throw domain_error(
            "g_big: s1 + s2 within 1e-6 of a non-positive integer");
    cplx lg = -log_gamma(s1 + s2);
    for (int j = 0; j < 3; ++j) {
        if (dist_to_nonpos_int(s1 - mu[j]) < 1e-6)
            throw domain_error("g_big: Gamma(s1 - mu_" + std::to_string(j + 1) +
                               ") within 1e-6 of a pole");
        if (dist_to_nonpos_int(s2 + mu[j]) < 1e-6)
            throw domain_error("g_big: Gamma(s2 + mu_" + std::to_string(j + 1) +
                               ") within 1e-6 of a pole");
        lg += log_gamma(s1 - mu[j]) + log_gamma(s2 + mu[j]);
    }
    return std::exp(lg);
}

cplx s_trig(int eps1, int eps2, cplx s1, cplx s2, const triple& mu) {
    if ((eps1 != 1 && eps1 != -1) || (eps2 != 1 && eps2 != -1))
        throw validation_error("s_trig: signs must be +1 or -1");
    const triple nu = nu_from_mu(mu);
    auto sinp = [](cplx z) { return std::sin(pi * z); };
    auto cos15 = [](cplx z) { return std::cos(1.5 * pi * z); };
    auto need = [](cplx v, const char* name) {
        if (std::abs(v) < 1e-8)
            throw domain_error(std::string("s_trig: denominator ") + name +
                               " within 1e-8 of zero");
        return v;
    };
    auto sin15 = [&](cplx z, const char* name) {
        return need(std::sin(1.5 * pi * z), name);
    };
    const double c24 = 1.0 / (24.0 * pi * pi);
    const double c32 = 1.0 / (32.0 * pi * pi);
    if (eps1 == 1 && eps2 == 1)
        return c24 * cos15(nu[0]) * cos15(nu[1]) * cos15(nu[2]);
    if (eps1 == 1 && eps2 == -1)
        return -c32 * cos15(nu[1]) * sinp(s1 - mu[0]) * sinp(s2 + mu[1]) *
               sinp(s2 + mu[2]) /
               (sin15(nu[0], "sin(3 pi nu_1 / 2)") *
                sin15(nu[2], "sin(3 pi nu_3 / 2)") *
                need(sinp(s1 + s2), "sin(pi(s1 + s2))"));
    if (eps1 == -1 && eps2 == 1)
        return -c32 * cos15(nu[0]) * sinp(s1 - mu[0]) * sinp(s1 - mu[1]) *
               sinp(s2 + mu[2]) /
               (sin15(nu[1], "sin(3 pi nu_2 / 2)") *
                sin15(nu[2], "sin(3 pi nu_3 / 2)") *
                need(sinp(s1 + s2), "sin(pi(s1 + s2))"));
    return c32 * cos15(nu[2]) * sinp(s1 - mu[1]) * sinp(s2 + mu[1]) /
           (sin15(nu[1], "sin(3 pi nu_2 / 2)") *
            sin15(nu[0], "sin(3 pi nu_1 / 2)"));
}

QuadratureResult k_w4(double y, const triple& mu, ContourSpec contour,
                      int workers, double tolerance) {
    if (y == 0.0) throw validation_error("k_w4: y must be nonzero");
    if (contour.H <= 0.0) {
        double mmax = 0.0;
        for (const cplx& m : mu) mmax = std::max(mmax, std::abs(m.imag()));
        contour.H = 3.0 * mmax + 2.0 * pi * std::cbrt(std::abs(y)) * 1.7 + 80.0;
    }
    if (contour.step <= 0.0) contour.step = 0.02;
    if (contour.step > contour.H / 50.0)
        throw validation_error("k_w4: contour step must be <= H/50");
    // Pole lines of both Gamma products sit at Re s = Re mu_j - k, k >= 0.
    for (const cplx& m : mu)
        if (sigma_line_distance(contour.sigma, m.real()) < 1e-3)
            throw validation_error(
                "k_w4: sigma within 1e-3 of a Gamma pole line");

    const int sign = y > 0.0 ? 1 : -1;
    const auto base = w4_pass(y, mu, sign, contour.sigma, contour.H,
                              contour.step, contour.rule, workers);
    const auto fine = w4_pass(y, mu, sign, contour.sigma, 2.0 * contour.H,
                              0.5 * contour.step, contour.rule, workers);
    // Truncation tail folded into self_error: the Stirling phase of the
    // integrand is ~ 3 t log(t/2) - t log|y|, so past the stationary point
    // t = 2|y|^{1/3} one integration by parts bounds the tail by the refined
    // endpoint magnitude over the phase derivative.  If the requested contour
    // stops near the stationary point the modulus bound |f(2H)| * 2H is used
    // instead.
    const double phase_deriv =
        std::abs(3.0 * std::log(contour.H) - std::log(std::abs(y)));
    const double tail = fine.endpoint_mag *
                        std::min(2.0 * contour.H,
                                 1.0 / std::max(0.1, phase_deriv)) /
                        two_pi;

    QuadratureResult out;
    out.value = base.value;
    out.self_error = std::abs(base.value - fine.value) + tail;
    out.evaluations = base.evaluations + fine.evaluations;
    if (tolerance > 0.0 && out.self_error > tolerance)
        throw accuracy_error(
            "k_w4: self_error " + std::to_string(out.self_error) +
            " exceeds tolerance " + std::to_string(tolerance) + "; value=(" +
            std::to_string(base.value.real()) + "," +
            std::to_string(base.value.imag()) + "), refined=(" +
            std::to_string(fine.value.real()) + "," +
            std::to_string(fine.value.imag()) + ")");
    return out;
}

QuadratureResult k_w6(double y1, double y2, const triple& mu,
                      ContourSpec contour, int workers, double tolerance,
                      int force_eps1, int force_eps2) {
    if (y1 == 0.0 || y2 == 0.0)
        throw validation_error("k_w6: y1 and y2 must be nonzero");
    if (contour.rule != quadrature_rule::trapezoid)
        throw validation_error(
            "k_w6: only the trapezoid rule supports the convolution lattice");
    if (contour.H <= 0.0) {
        double mmax = 0.0;
        for (const cplx& m : mu) mmax = std::max(mmax, std::abs(m.imag()));
        contour.H = mmax + 40.0;
    }
    if (contour.step <= 0.0) contour.step = 0.05;
    if (contour.step > contour.H / 50.0)
        throw validation_error("k_w6: contour step must be <= H/50");
    for (const cplx& m : mu) {
        if (sigma_line_distance(contour.sigma, m.real()) < 1e-3)
            throw validation_error(
                "k_w6: sigma within 1e-3 of a Gamma pole line of s1");
        if (sigma_line_distance(contour.sigma, -m.real()) < 1e-3)
            throw validation_error(
                "k_w6: sigma within 1e-3 of a Gamma pole line of s2");
    }

    const int eps1 = force_eps1 != 0 ? force_eps1 : (y1 > 0.0 ? 1 : -1);
    const int eps2 = force_eps2 != 0 ? force_eps2 : (y2 > 0.0 ? 1 : -1);
    const triple nu = nu_from_mu(mu);
    const w6_variant var = make_variant(eps1, eps2, mu, nu);
    if (var.diag_sin &&
        std::abs(2.0 * contour.sigma -
                 std::round(2.0 * contour.sigma)) < 1e-3)
        throw validation_error(
            "k_w6: 2 sigma within 1e-3 of an integer (sin(pi(s1+s2)) zero)");

    const auto base = w6_pass(y1, y2, mu, var, contour.sigma, contour.H,
                              contour.step, workers);
    const auto fine = w6_pass(y1, y2, mu, var, contour.sigma, 2.0 * contour.H,
                              0.5 * contour.step, workers);

    QuadratureResult out;
    out.value = base.value;
    out.self_error = std::abs(base.value - fine.value);
    out.evaluations = base.evaluations + fine.evaluations;
    if (tolerance > 0.0 && out.self_error > tolerance)
        throw accuracy_error(
            "k_w6: self_error " + std::to_string(out.self_error) +
            " exceeds tolerance " + std::to_string(tolerance) + "; value=(" +
            std::to_string(base.value.real()) + "," +
            std::to_string(base.value.imag()) + "), refined=(" +
            std::to_string(fine.value.real()) + "," +
            std::to_string(fine.value.imag()) + ")");
    return out;
}

}  // namespace kzlab
