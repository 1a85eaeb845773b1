#include "kzlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

namespace kzlab {

namespace {

constexpr double gamma_pole_tol = 1e-9;

const char* kind_name(gamma_kind k) {
    switch (k) {
        case gamma_kind::gl3: return "gl3";
        case gamma_kind::gl3_dual: return "gl3-dual";
        case gamma_kind::rankin: return "rankin";
        case gamma_kind::rankin_dual: return "rankin-dual";
    }
    return "?";
}

// Gamma_R(z) = pi^{-z/2} Gamma(z/2) has poles at z = 0, -2, -4, ...
void guard_gamma_R(cplx z, gamma_kind kind, int j) {
    if (std::abs(z.imag()) > gamma_pole_tol) return;
    if (z.real() > gamma_pole_tol) return;
    const double nearest = 2.0 * std::round(0.5 * z.real());
    if (nearest <= gamma_pole_tol && std::abs(z.real() - nearest) < gamma_pole_tol)
        throw domain_error(std::string("gamma_factor: ") + kind_name(kind) +
                           " factor " + std::to_string(j + 1) +
                           " within 1e-9 of a Gamma_R pole");
}

// Plain Gamma(z) poles at the non-positive integers.
void guard_gamma(cplx z, const char* where) {
    if (std::abs(z.imag()) > gamma_pole_tol) return;
    if (z.real() > gamma_pole_tol) return;
    const double nearest = std::round(z.real());
    if (nearest <= gamma_pole_tol && std::abs(z.real() - nearest) < gamma_pole_tol)
        throw domain_error(std::string(where) + ": argument within 1e-9 of a Gamma pole");
}

void require_zero_sum(const triple& mu, const char* where) {
    if (std::abs(mu[0] + mu[1] + mu[2]) > 1e-9)
        throw validation_error(std::string(where) + ": mu must be zero-sum");
}

// ------------------------------------------------------- extended precision --
// The AFE quadratures sit on Re u = 3, where e^{u^2} magnifies the integrand
// mass ~ e^{sigma^2} * Gamma-growth above the final value by 1e6 and more.
// Plain double log-Gamma carries ~|z log z| * eps of per-point rounding
// jitter, which the oscillatory cancellation cannot remove; assembling the
// exponent in long double keeps the quadrature reproducible to ~1e-12 under
// step halving.

using lcplx = std::complex<long double>;
constexpr long double log_pi_l = 1.144729885849400174143427351353058712L;
constexpr long double half_log_2pi_l = 0.918938533204672741780329736405617640L;

class kahan_lc {
  public:
    void add(lcplx z) {
        add_part(re_, cre_, z.real());
        add_part(im_, cim_, z.imag());
    }
    lcplx value() const { return {re_ + cre_, im_ + cim_}; }

  private:
    static void add_part(long double& s, long double& c, long double x) {
        const long double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    long double re_ = 0.0L, cre_ = 0.0L;
    long double im_ = 0.0L, cim_ = 0.0L;
};

// Stirling with shift into |z| >= 16; 12 tail terms leave < 1e-22 there.
lcplx lgamma_l(lcplx z) {
    static constexpr long double c[12] = {
        1.0L / 12.0L,           -1.0L / 360.0L,
        1.0L / 1260.0L,         -1.0L / 1680.0L,
        1.0L / 1188.0L,         -691.0L / 360360.0L,
        1.0L / 156.0L,          -3617.0L / 122400.0L,
        43867.0L / 244188.0L,   -174611.0L / 125400.0L,
        77683.0L / 5796.0L,     -236364091.0L / 1506960.0L};
    kahan_lc shift;
    int guard = 0;
    while (std::abs(z) < 16.0L) {
        shift.add(std::log(z));
        z += 1.0L;
        if (++guard > 64) throw domain_error("lgamma_l: shift stalled near a pole");
    }
    const lcplx lz = std::log(z);
    lcplx s = (z - 0.5L) * lz - z + half_log_2pi_l;
    lcplx zi = 1.0L / z;
    const lcplx zi2 = zi * zi;
    for (int i = 0; i < 12; ++i) {
        s += c[i] * zi;
        zi *= zi2;
    }
    return s - shift.value();
}

inline lcplx lgamma_R_l(lcplx s) { return -0.5L * s * log_pi_l + lgamma_l(0.5L * s); }

// Numerator Gamma_R arguments (1/2 + u + off_i) and the constant non-dual
// denominator log value; exponent(u) is the full log-integrand except 1/u.
struct AfeEngine {
    std::vector<lcplx> offs;
    lcplx den{0.0L, 0.0L};
    long double ly = 0.0L;

    lcplx exponent(lcplx u) const {
        kahan_lc acc;
        for (const lcplx& off : offs) acc.add(lgamma_R_l(off + u));
        return acc.value() - den + u * u - u * ly;
    }
    cplx term(double sigma, double t) const {
        const lcplx u(sigma, t);
        const lcplx v = std::exp(exponent(u)) / u;
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    cplx at_point(cplx u_) const {
        const lcplx u(u_.real(), u_.imag());
        const lcplx v = std::exp(exponent(u)) / u;
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
};

lcplx to_l(cplx z) { return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())}; }

AfeEngine make_engine(afe_kind kind, const triple& mu, int k, double y) {
    const bool tensor = kind == afe_kind::W || kind == afe_kind::Wtilde;
    const bool dual = kind == afe_kind::Vtilde || kind == afe_kind::Wtilde;
    if (tensor && (k < 4 || k % 2 != 0))
        throw validation_error("afe_weight: W kinds need even k >= 4");
    AfeEngine e;
    e.ly = std::log(static_cast<long double>(y));
    const long double sign = dual ? 1.0L : -1.0L;
    kahan_lc den;
    for (int j = 0; j < 3; ++j) {
        const lcplx m = to_l(mu[j]);
        if (!tensor) {
            e.offs.push_back(0.5L + sign * m);
            den.add(lgamma_R_l(0.5L - m));
        } else {
            const long double a = 0.5L * (k - 1), b = 0.5L * (k + 1);
            e.offs.push_back(0.5L + a + sign * m);
            e.offs.push_back(0.5L + b + sign * m);
            den.add(lgamma_R_l(0.5L + a - m));
            den.add(lgamma_R_l(0.5L + b - m));
        }
    }
    e.den = den.value();
    return e;
}

}  // namespace

cplx gamma_factor(const GammaFactorSpec& spec, cplx s) {
    require_zero_sum(spec.mu, "gamma_factor");
    const bool dual =
        spec.kind == gamma_kind::gl3_dual || spec.kind == gamma_kind::rankin_dual;
    const bool tensor =
        spec.kind == gamma_kind::rankin || spec.kind == gamma_kind::rankin_dual;
    if (tensor && (spec.k < 4 || spec.k % 2 != 0))
        throw validation_error("gamma_factor: tensor kinds need even k >= 4");
    const double sign = dual ? 1.0 : -1.0;
    cplx total{0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
        const cplx m = sign * spec.mu[j];
        if (!tensor) {
            const cplx z = s + m;
            guard_gamma_R(z, spec.kind, j);
            total += log_gamma_R(z);
        } else {
            const cplx z1 = s + 0.5 * (spec.k - 1) + m;
            const cplx z2 = s + 0.5 * (spec.k + 1) + m;
            guard_gamma_R(z1, spec.kind, j);
            guard_gamma_R(z2, spec.kind, j);
            total += log_gamma_R(z1) + log_gamma_R(z2);
        }
    }
    return total;
}

QuadratureResult afe_weight(afe_kind kind, double y, const triple& mu, int k,
                            ContourSpec contour,
                            const std::vector<PoleCorrection>& poles,
                            double tolerance) {
    if (!(y > 0.0) || !std::isfinite(y))
        throw validation_error("afe_weight: y must be positive and finite");
    require_zero_sum(mu, "afe_weight");
    if (contour.rule != quadrature_rule::trapezoid)
        throw validation_error("afe_weight: trapezoid contours only");

    // Sentinel sigma (the ContourSpec default) selects Re u = 3, or Re u =
    // -1/4 plus the crossed u = 0 residue when y < 1, so y^{-u} never
    // magnifies the lattice.  -1/4 stays right of every Gamma_R pole line
    // (Re u = -1/2 for the gl3 kinds, Re u <= -2 for the tensor kinds), so
    // no Gamma residue is ever crossed.  Explicit sigmas stay right of u = 0
    // inside [1.5, 6].
    double sigma = contour.sigma;
    bool add_residue = false;
    if (sigma == 0.25) {
        if (y < 1.0) {
            sigma = -0.25;
            add_residue = true;
        } else {
            sigma = 3.0;
        }
    } else if (sigma < 1.5 || sigma > 6.0) {
        throw validation_error("afe_weight: explicit sigma must lie in [1.5, 6]");
    }
    const double H = contour.H > 0.0 ? contour.H : 20.0;
    const double ly = std::log(y);
    double step = contour.step;
    if (step <= 0.0) {
        // Alias guard: the integrand oscillates at 2|sigma| + |log y| plus
        // the slowly varying Gamma phases; keep pi/step above that with
        // margin.  On Re u = -1/4 the u = 0 pole sits 1/4 away from the
        // line, so the trapezoid needs step <= 0.05 to keep the pole's
        // e^{-2 pi d / step} contribution below rounding.
        const double cap = sigma < 0.0 ? 0.05 : 0.25;
        step = std::min({cap, pi / (2.0 * std::abs(sigma) + std::abs(ly) + 10.0),
                         H / 50.0});
    }
    if (step > H / 50.0)
        throw validation_error("afe_weight: step must satisfy step <= H / 50");

    const AfeEngine engine = make_engine(kind, mu, k, y);

    std::uint64_t evals = 0;
    auto pass = [&](double h_, double step_) {
        const auto half = static_cast<std::size_t>(std::floor(h_ / step_));
        kahan_lc acc;
        for (std::size_t i = 0; i <= 2 * half; ++i) {
            const double t =
                (static_cast<double>(i) - static_cast<double>(half)) * step_;
            const lcplx u(sigma, t);
            acc.add(std::exp(engine.exponent(u)) / u);
            ++evals;
        }
        const lcplx v = acc.value() * static_cast<long double>(step_ / two_pi);
        return cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    };

    const cplx base = pass(H, step);
    const cplx fine = pass(2.0 * H, 0.5 * step);
    // Beyond 2H the Gaussian decay makes the edge term an envelope for the
    // whole dropped tail.
    const double edge = std::abs(engine.term(sigma, 2.0 * H)) * step / two_pi;
    ++evals;

    QuadratureResult out;
    out.value = base;
    out.self_error = std::abs(base - fine) + edge;
    if (add_residue) {
        // exponent(0) is log ratio(0): the e^{u^2} and y^{-u} factors both
        // vanish from it, so this is exactly the small-y limit value.
        const lcplx res = std::exp(engine.exponent(lcplx(0.0L, 0.0L)));
        out.value += cplx(static_cast<double>(res.real()),
                          static_cast<double>(res.imag()));
        ++evals;
    }
    for (const PoleCorrection& p : poles) {
        if (std::abs(p.location) < 1e-12)
            throw validation_error("afe_weight: pole correction at u = 0");
        out.value += -p.residue * engine.at_point(p.location);
        ++evals;
    }
    out.evaluations = evals;
    if (tolerance > 0.0 && out.self_error > tolerance)
        throw accuracy_error("afe_weight: self_error " +
                             std::to_string(out.self_error) +
                             " exceeds tolerance " + std::to_string(tolerance));
    return out;
}

cplx m_main(const triple& mu, int k, double L1_g) {
    require_zero_sum(mu, "m_main");
    if (k < 4 || k % 2 != 0)
        throw validation_error("m_main: k must be even and >= 4");
    if (!(L1_g > 0.0))
        throw validation_error("m_main: L1_g must be positive");
    static const cplx zeta_32 = zeta(cplx(1.5, 0.0));
    cplx lp1{0.0, 0.0}, lp2{0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
        const cplx a = 0.25 + 0.5 * mu[j];
        const cplx b = 0.25 - 0.5 * mu[j];
        const cplx c = 0.5 * k + mu[j];
        const cplx d = 0.5 * k - mu[j];
        guard_gamma(a, "m_main");
        guard_gamma(b, "m_main");
        guard_gamma(c, "m_main");
        guard_gamma(d, "m_main");
        lp1 += log_gamma(a) - log_gamma(b);
        lp2 += log_gamma(c) - log_gamma(d);
    }
    const cplx P1 = std::exp(lp1);
    const cplx P2 = std::exp(lp2);
    return zeta_32 + L1_g * (P1 + P2) + zeta_32 * P1 * P2;
}

MainTermResult main_term_integral(const MainTermConfig& config) {
    const SpectralGrid& grid = config.grid;
    for (int j = 0; j < 3; ++j)
        if (std::abs(grid.center.mu[j] - config.tf.mu0.mu[j]) > 1e-12)
            throw validation_error("main_term_integral: grid must be centered at tf.mu0");

    double L1 = config.L1_g;
    if (L1 == 0.0 && !config.m_override) {
        const HeckeTable g = hecke_eigenvalues_holomorphic(config.k, 64);
        L1 = l_central_gl2(g, cplx(1.0, 0.0)).value.real();
    }
    const double norm = 1.0 / (192.0 * std::pow(pi, 5));

    struct RowSlot {
        cplx v{0.0, 0.0};
        double mass = 0.0;
        std::uint64_t n = 0;
    };
    auto pass = [&](const SpectralGrid& gr) {
        const auto nodes = gr.nodes();
        const std::size_t n = gr.points_per_axis();
        const double eta2 = gr.step * gr.step;
        std::vector<RowSlot> slots(n);
        parallel_for(n, config.workers, [&](std::size_t i1) {
            kahan_sum_cplx v;
            kahan_sum mass;
            std::uint64_t cnt = 0;
            for (std::size_t i2 = 0; i2 < n; ++i2) {
                const GridNode& node = nodes[i1 * n + i2];
                ++cnt;
                cplx h;
                if (config.h_override)
                    h = config.h_override(node.point);
                else
                    h = cplx(test_function_h(node.point.mu, config.tf), 0.0);
                if (h == cplx(0.0, 0.0)) continue;
                cplx w;
                if (config.measure_override)
                    w = config.measure_override(node.point) * eta2;
                else
                    w = cplx(node.weight, 0.0);
                cplx m;
                if (config.m_override)
                    m = config.m_override(node.point);
                else
                    m = m_main(node.point.mu, config.k, L1);
                const cplx term = m * h * w;
                v.add(term);
                mass.add(std::abs(term));
            }
            slots[i1] = {v.value(), mass.value(), cnt};
        });
        kahan_sum_cplx v;
        kahan_sum mass;
        std::uint64_t cnt = 0;
        for (const RowSlot& s : slots) {
            v.add(s.v);
            mass.add(s.mass);
            cnt += s.n;
        }
        return std::tuple<cplx, double, std::uint64_t>(v.value(), mass.value(), cnt);
    };

    const auto [vf, mass_f, cnt_f] = pass(grid);
    SpectralGrid coarse = grid;
    coarse.step = 2.0 * grid.step;
    const auto [vc, mass_c, cnt_c] = pass(coarse);
    (void)mass_c;

    MainTermResult out;
    out.value = norm * vf;
    out.self_error = std::abs(norm * (vf - vc)) + 1e-16 * norm * mass_f;
    out.evaluations = cnt_f + cnt_c;
    const double scale =
        std::pow(config.tf.T, 3.0) * config.tf.R * config.tf.R;
    out.per_T_ratio = norm * mass_f / scale;
    if (config.tolerance > 0.0 && out.self_error > config.tolerance)
        throw accuracy_error("main_term_integral: self_error " +
                             std::to_string(out.self_error) +
                             " exceeds tolerance " +
                             std::to_string(config.tolerance));
    return out;
}

DiagonalResult diagonal_weight(const triple& mu, int k, const HeckeTable& g,
                               ContourSpec contour, double L1_g,
                               double tolerance) {
    require_zero_sum(mu, "diagonal_weight");
    if (g.n_max() == 0)
        throw validation_error("diagonal_weight: empty coefficient table");
    if (contour.rule != quadrature_rule::trapezoid)
        throw validation_error("diagonal_weight: trapezoid contours only");
    double sigma = contour.sigma == 0.25 ? 3.0 : contour.sigma;
    sigma = std::clamp(sigma, 1.5, 6.0);
    const double H = contour.H > 0.0 ? contour.H : 15.0;
    double step = contour.step;
    if (step <= 0.0) step = std::min(0.25, H / 50.0);
    if (step > H / 50.0)
        throw validation_error("diagonal_weight: step must satisfy step <= H / 50");

    const AfeEngine row_engine = make_engine(afe_kind::Vtilde, mu, k, 1.0);
    const AfeEngine col_engine = make_engine(afe_kind::W, mu, k, 1.0);
    SeriesAccuracy acc;
    acc.truncation = std::min<std::size_t>(g.n_max(), 200);

    std::uint64_t evals = 0;
    double tail_mass = 0.0;
    auto pass = [&](double step_) {
        const auto half = static_cast<std::size_t>(std::floor(H / step_));
        const std::size_t n = 2 * half + 1;
        std::vector<cplx> a(n), b(n);
        double sum_a = 0.0, sum_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t =
                (static_cast<double>(i) - static_cast<double>(half)) * step_;
            a[i] = row_engine.term(sigma, t) * (step_ / two_pi);
            b[i] = col_engine.term(sigma, t) * (step_ / two_pi);
            sum_a += std::abs(a[i]);
            sum_b += std::abs(b[i]);
            evals += 2;
        }
        // One L value per sum-lattice diagonal: L(1 + u1 + u2) only depends
        // on i + j.
        std::vector<cplx> Ld(2 * n - 1);
        double tail = 0.0;
        for (std::size_t m = 0; m < Ld.size(); ++m) {
            const double tsum =
                (static_cast<double>(m) - 2.0 * static_cast<double>(half)) * step_;
            const SeriesValue sv =
                dirichlet_eval(g, cplx(1.0 + 2.0 * sigma, tsum), acc);
            Ld[m] = sv.value;
            tail = std::max(tail, sv.tail_bound);
            ++evals;
        }
        kahan_sum_cplx outer;
        for (std::size_t i = 0; i < n; ++i) {
            kahan_sum_cplx inner;
            for (std::size_t j = 0; j < n; ++j) inner.add(b[j] * Ld[i + j]);
            outer.add(a[i] * inner.value());
        }
        tail_mass = std::max(tail_mass, tail * sum_a * sum_b);
        return outer.value();
    };

    const cplx base = pass(step);
    const cplx fine = pass(0.5 * step);

    DiagonalResult out;
    out.value = base;
    out.self_error = std::abs(base - fine) + tail_mass;
    out.evaluations = evals;

    double L1 = L1_g;
    if (L1 == 0.0 && g.kind == table_kind::holomorphic &&
        std::abs(g.at(1) - cplx(1.0, 0.0)) < 1e-12)
        L1 = l_central_gl2(g, cplx(1.0, 0.0)).value.real();
    if (L1 != 0.0) {
        cplx lp{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            const cplx aa = 0.25 + 0.5 * mu[j];
            const cplx bb = 0.25 - 0.5 * mu[j];
            guard_gamma(aa, "diagonal_weight");
            guard_gamma(bb, "diagonal_weight");
            lp += log_gamma(aa) - log_gamma(bb);
        }
        out.prediction = L1 * std::exp(lp);
    }
    if (tolerance > 0.0 && out.self_error > tolerance)
        throw accuracy_error("diagonal_weight: self_error " +
                             std::to_string(out.self_error) +
                             " exceeds tolerance " + std::to_string(tolerance));
    return out;
}

namespace {

// F(S, x) = Gamma(S, x) e^x x^{-S}, the scaled upper incomplete Gamma.  The
// scaling cancels every (2 pi n)^{+-S} power in the completed-integral split,
// so no term can leave double range.
cplx upper_gamma_scaled(cplx S, double x) {
    if (x >= S.real() + 2.0) {
        // Modified Lentz continued fraction:
        // 1/(x+1-S - 1(1-S)/(x+3-S - 2(2-S)/(...))).
        const double tiny = 1e-300;
        cplx b = x + 1.0 - S;
        cplx f = std::abs(b) < tiny ? cplx(tiny, 0.0) : b;
        cplx C = f;
        cplx D{0.0, 0.0};
        for (int i = 1; i <= 300; ++i) {
            const double di = static_cast<double>(i);
            const cplx an = -di * (di - S);
            b += 2.0;
            D = b + an * D;
            if (std::abs(D) < tiny) D = tiny;
            C = b + an / C;
            if (std::abs(C) < tiny) C = tiny;
            D = 1.0 / D;
            const cplx delta = C * D;
            f *= delta;
            if (std::abs(delta - 1.0) < 1e-16) return 1.0 / f;
        }
        throw accuracy_error("upper_gamma_scaled: continued fraction stalled");
    }
    // Below the turning point: subtract the scaled lower series
    // sum_m x^m / (S (S+1) ... (S+m)) from Gamma(S) e^x x^{-S}.
    cplx term = 1.0 / S;
    kahan_sum_cplx sum;
    sum.add(term);
    for (int m = 1; m <= 500; ++m) {
        term *= x / (S + static_cast<double>(m));
        sum.add(term);
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum.value())))
            return std::exp(log_gamma(S) + x - S * std::log(x)) - sum.value();
    }
    throw accuracy_error("upper_gamma_scaled: lower series stalled");
}

}  // namespace

SeriesValue l_central_gl2(const HeckeTable& g, cplx s, std::size_t truncation) {
    if (g.kind != table_kind::holomorphic)
        throw validation_error("l_central_gl2: holomorphic table required");
    validate_table(g);
    const int k = static_cast<int>(std::llround(g.weight_or_spectral));
    if (k < 4 || k % 2 != 0 || std::abs(g.weight_or_spectral - k) > 1e-9)
        throw validation_error("l_central_gl2: table weight must be an even integer >= 4");
    const cplx S = s + 0.5 * (k - 1);
    if (S.real() <= 0.0 || S.real() >= static_cast<double>(k) ||
        std::abs(S.imag()) > 1e3)
        throw validation_error("l_central_gl2: s + (k-1)/2 outside (0, k)");
    const double eps_sign = (k % 4 == 0) ? 1.0 : -1.0;
    const std::size_t cap = truncation == 0
                                ? std::min<std::size_t>(g.n_max(), 80)
                                : std::min(truncation, g.n_max());
    const double half_k = 0.5 * (k - 1);

    kahan_sum_cplx lambda_s, lambda_dual;
    std::size_t used = 0;
    for (std::size_t n = 1; n <= cap; ++n) {
        const double x = two_pi * static_cast<double>(n);
        const double scale =
            std::exp(half_k * std::log(static_cast<double>(n)) - x);
        const cplx F1 = upper_gamma_scaled(S, x);
        const cplx F2 = upper_gamma_scaled(cplx(static_cast<double>(k), 0.0) - S, x);
        const cplx coeff = g.at(n) * scale;
        lambda_s.add(coeff * (F1 + eps_sign * F2));
        lambda_dual.add(coeff * (F2 + eps_sign * F1));
        ++used;
        if (truncation == 0 && n >= 8) {
            const double envelope = 2.0 * std::sqrt(static_cast<double>(n)) *
                                    scale * (std::abs(F1) + std::abs(F2));
            if (envelope < 1e-18 * std::max(1.0, std::abs(lambda_s.value())))
                break;
        }
    }
    const cplx Lambda = lambda_s.value();

    // The S <-> k-S swap permutes the two incomplete pieces term by term, so
    // this residual is exact zero up to rounding at every truncation; it
    // detects asymmetry bugs, not truncation error.
    const double fe_residual =
        std::abs(Lambda - eps_sign * lambda_dual.value());
    if (fe_residual > 1e-8 * std::max(1.0, std::abs(Lambda)))
        throw accuracy_error("l_central_gl2: functional-equation residual " +
                             std::to_string(fe_residual));

    // Deligne envelope of the dropped rows, |lambda(n)| <= 2 sqrt(n).
    kahan_sum tail;
    for (std::size_t n = used + 1; n <= used + 40; ++n) {
        const double x = two_pi * static_cast<double>(n);
        const double scale =
            2.0 * std::exp((half_k + 0.5) * std::log(static_cast<double>(n)) - x);
        tail.add(scale *
                 (std::abs(upper_gamma_scaled(S, x)) +
                  std::abs(upper_gamma_scaled(cplx(static_cast<double>(k), 0.0) - S, x))));
    }

    const cplx to_L = std::exp(S * log_2pi_v - log_gamma(S));
    SeriesValue out;
    out.value = Lambda * to_L;
    out.tail_bound = tail.value() * std::abs(to_L);
    out.terms = used;
    return out;
}

}  // namespace kzlab
