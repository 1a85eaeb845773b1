#include "kzlab/transforms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "kzlab/special.hpp"

namespace kzlab {

namespace {

// Same taper as the kernel quadratures: cosine rolloff over the outer 20%.
double window(double t, double Heff) {
    const double frac = 0.2;
    const double a = (1.0 - frac) * Heff;
    const double at = std::abs(t);
    if (at <= a) return 1.0;
    if (at >= Heff) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (at - a) / (Heff - a)));
}

double sigma_line_distance(double sigma, double r) {
    double k = std::round(sigma - r);
    if (k < 0.0) k = 0.0;
    return std::abs(sigma - r + k);
}

// The three imaginary-part lattices.  b3 is indexed by i1 + i2:
// b1[i1] + b2[i2] + b3[i1 + i2] = 0 exactly by construction.
struct AxisLattices {
    std::vector<double> b1, b2, b3;
    std::size_t n = 0;  // points per axis
    double eta = 0.0;
};

AxisLattices make_axes(const SpectralPoint& center, double half_width,
                       double eta) {
    const auto m = static_cast<std::size_t>(std::llround(half_width / eta));
    AxisLattices ax;
    ax.n = 2 * m + 1;
    ax.eta = eta;
    const double c1 = center.mu[0].imag();
    const double c2 = center.mu[1].imag();
    ax.b1.resize(ax.n);
    ax.b2.resize(ax.n);
    ax.b3.resize(2 * ax.n - 1);
    for (std::size_t i = 0; i < ax.n; ++i) {
        const double off = eta * (static_cast<double>(i) - static_cast<double>(m));
        ax.b1[i] = c1 + off;
        ax.b2[i] = c2 + off;
    }
    for (std::size_t k = 0; k < ax.b3.size(); ++k)
        ax.b3[k] = -(c1 + c2) -
                   eta * (static_cast<double>(k) - 2.0 * static_cast<double>(m));
    return ax;
}

SpectralPoint point_at(const AxisLattices& ax, std::size_t i1, std::size_t i2) {
    triple mu{cplx(0.0, ax.b1[i1]), cplx(0.0, ax.b2[i2]),
              cplx(0.0, ax.b3[i1 + i2])};
    return SpectralPoint::from_mu(mu);
}

// h combined with the measure and the optional weight on every lattice node,
// with a relative mask at 1e-18 of the peak so the contour work skips
// negligible nodes.  combine(pt, h) supplies the measure-specific product.
struct NodeField {
    std::vector<cplx> hs;  // row-major (i1, i2)
    std::vector<unsigned char> mask;
    std::size_t masked = 0;
};

template <class Combine>
NodeField node_field(const AxisLattices& ax, const TestFunctionSpec& tf,
                     const SpectralWeight& weight, Combine&& combine) {
    NodeField f;
    f.hs.resize(ax.n * ax.n);
    f.mask.assign(ax.n * ax.n, 0);
    double hmax = 0.0;
    for (std::size_t i1 = 0; i1 < ax.n; ++i1)
        for (std::size_t i2 = 0; i2 < ax.n; ++i2) {
            const SpectralPoint pt = point_at(ax, i1, i2);
            const double h = test_function_h(pt.mu, tf);
            cplx v = h == 0.0 ? cplx(0.0, 0.0) : combine(pt, h);
            if (weight && v != cplx(0.0, 0.0)) v *= weight(pt);
            f.hs[i1 * ax.n + i2] = v;
            hmax = std::max(hmax, std::abs(v));
        }
    const double cut = 1e-18 * hmax;
    for (std::size_t i = 0; i < f.hs.size(); ++i)
        if (std::abs(f.hs[i]) > cut) {
            f.mask[i] = 1;
            ++f.masked;
        }
    return f;
}

struct PhiPass {
    cplx value{0.0, 0.0};
    double mass = 0.0;  // sum of |node contribution|, the cancellation proxy
    std::uint64_t evaluations = 0;
};

// ---------------------------------------------------------------- w4 / w5 --

// One lattice pass of Phi_{w4-type}: the kernel integrand
// |y|^{-s} G~^{sgn y}(s, mu) factorizes over the mu coordinates, so each of
// the two Gamma-ratio products needs one table per axis lattice and every
// node costs nt fused products instead of a kernel call.  mu_sign = -1
// evaluates the reflected kernel K_w4(y; -mu).
PhiPass w4_pass_grid(double y, int mu_sign, const TestFunctionSpec& tf,
                     const AxisLattices& ax, const SpectralWeight& weight,
                     const ContourSpec& contour, int workers) {
    std::vector<double> ts, tw;
    double Heff;
    if (contour.rule == quadrature_rule::trapezoid) {
        const auto half =
            static_cast<std::size_t>(std::floor(contour.H / contour.step));
        Heff = static_cast<double>(half) * contour.step;
        ts.resize(2 * half + 1);
        tw.assign(2 * half + 1, contour.step);
        for (std::size_t k = 0; k < ts.size(); ++k)
            ts[k] = (static_cast<double>(k) - static_cast<double>(half)) *
                    contour.step;
    } else {
        static constexpr double gl_x[7] = {
            -0.9491079123427585245261897, -0.7415311855993944398638648,
            -0.4058451513773971669066064, 0.0,
            0.4058451513773971669066064,  0.7415311855993944398638648,
            0.9491079123427585245261897};
        static constexpr double gl_w[7] = {
            0.1294849661688696932706114, 0.2797053914892766679014678,
            0.3818300505051189449503698, 0.4179591836734693877551020,
            0.3818300505051189449503698, 0.2797053914892766679014678,
            0.1294849661688696932706114};
        const auto nseg = static_cast<std::size_t>(
            std::max(1.0, std::ceil(2.0 * contour.H / (7.0 * contour.step))));
        Heff = contour.H;
        const double seg = 2.0 * contour.H / static_cast<double>(nseg);
        ts.reserve(7 * nseg);
        tw.reserve(7 * nseg);
        for (std::size_t i = 0; i < nseg; ++i) {
            const double a = -contour.H + static_cast<double>(i) * seg;
            for (int g = 0; g < 7; ++g) {
                ts.push_back(a + 0.5 * seg * (1.0 + gl_x[g]));
                tw.push_back(0.5 * seg * gl_w[g]);
            }
        }
    }
    const std::size_t nt = ts.size();
    if (nt > 5000000)
        throw budget_error("phi_w4: contour grid exceeds 5e6 nodes");
    if ((4 * ax.n - 1) * nt > 30000000)
        throw budget_error(
            "phi_w4: Gamma-ratio tables exceed the 3e7-entry budget");

    NodeField field =
        node_field(ax, tf, weight, [](const SpectralPoint& pt, double h) {
            return spec_measure(pt.mu) * h;
        });

    // t-only prefactor pi^{-3s} / (12288 pi^{7/2}) * |y|^{-s}, with the
    // quadrature weight, taper and 1/(2 pi) folded in.
    const double logy = std::log(std::abs(y));
    const double sigma = contour.sigma;
    std::vector<cplx> pref(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        const cplx s(sigma, ts[k]);
        pref[k] = std::exp(-s * (3.0 * log_pi_v + logy) -
                           (std::log(12288.0) + 3.5 * log_pi_v)) *
                  (tw[k] * window(ts[k], Heff) / two_pi);
    }

    // Per-axis Gamma-ratio tables, column-major [col * nt + k].
    auto build = [&](const std::vector<double>& bs, bool second) {
        std::vector<cplx> tab(bs.size() * nt);
        parallel_for(bs.size(), workers, [&](std::size_t c) {
            const cplx ib(0.0, mu_sign * bs[c]);
            for (std::size_t k = 0; k < nt; ++k) {
                const cplx s(sigma, ts[k]);
                tab[c * nt + k] =
                    second ? std::exp(log_gamma(0.5 * (1.0 + s - ib)) -
                                      log_gamma(0.5 * (2.0 - s + ib)))
                           : std::exp(log_gamma(0.5 * (s - ib)) -
                                      log_gamma(0.5 * (1.0 - s + ib)));
            }
        });
        return tab;
    };
    const auto F1a = build(ax.b1, false);
    const auto F1b = build(ax.b2, false);
    const auto F1c = build(ax.b3, false);
    const auto F2a = build(ax.b1, true);
    const auto F2b = build(ax.b2, true);
    const auto F2c = build(ax.b3, true);

    const cplx isign(0.0, y > 0.0 ? 1.0 : -1.0);
    const std::size_t n = ax.n;
    std::vector<cplx> row_val(n, cplx(0.0, 0.0));
    std::vector<double> row_mass(n, 0.0);
    std::vector<std::uint64_t> row_ev(n, 0);
    parallel_for(n, workers, [&](std::size_t i1) {
        kahan_sum_cplx acc;
        kahan_sum mass;
        const cplx* a1 = &F1a[i1 * nt];
        const cplx* a2 = &F2a[i1 * nt];
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (!field.mask[i1 * n + i2]) continue;
            const cplx* b1 = &F1b[i2 * nt];
            const cplx* b2 = &F2b[i2 * nt];
            const cplx* c1 = &F1c[(i1 + i2) * nt];
            const cplx* c2 = &F2c[(i1 + i2) * nt];
            kahan_sum_cplx kv;
            for (std::size_t k = 0; k < nt; ++k)
                kv.add(pref[k] *
                       (a1[k] * b1[k] * c1[k] + isign * (a2[k] * b2[k] * c2[k])));
            const cplx term = field.hs[i1 * n + i2] * kv.value();
            acc.add(term);
            mass.add(std::abs(term));
            row_ev[i1] += nt;
        }
        row_val[i1] = acc.value();
        row_mass[i1] = mass.value();
    });

    kahan_sum_cplx total;
    kahan_sum tmass;
    PhiPass out;
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        total.add(row_val[i1]);
        tmass.add(row_mass[i1]);
        out.evaluations += row_ev[i1];
    }
    const double cell = ax.eta * ax.eta;
    out.value = total.value() * cell;
    out.mass = tmass.value() * cell;
    return out;
}

void validate_grid(const SpectralGrid& grid, const TestFunctionSpec& tf,
                   const char* name) {
    if (!(grid.step > 0.0))
        throw validation_error(std::string(name) + ": grid step must be positive");
    if (grid.half_width < 2.0 * grid.step)
        throw validation_error(std::string(name) +
                               ": grid needs at least two steps per side");
    if (!grid.center.on_spectral_line(1e-9))
        throw validation_error(std::string(name) +
                               ": grid center must sit on Re mu = 0");
    for (int j = 0; j < 3; ++j)
        if (std::abs(grid.center.mu[j] - tf.mu0.mu[j]) > 1e-9)
            throw validation_error(std::string(name) +
                                   ": grid must be centered at tf.mu0");
    const auto m = static_cast<std::size_t>(std::llround(grid.half_width / grid.step));
    if (2 * m + 1 > 4001)
        throw budget_error(std::string(name) +
                           ": spectral grid exceeds 4001 points per axis");
}

double center_im_max(const SpectralGrid& grid) {
    double mmax = 0.0;
    for (const cplx& m : grid.center.mu)
        mmax = std::max(mmax, std::abs(m.imag()));
    return mmax;
}

QuadratureResult phi_w4_like(double y_kernel, int mu_sign,
                             const TestFunctionSpec& tf,
                             const SpectralGrid& grid, ContourSpec contour,
                             int workers, double tolerance,
                             const SpectralWeight& weight, const char* name) {
    if (y_kernel == 0.0)
        throw validation_error(std::string(name) + ": y must be nonzero");
    validate_grid(grid, tf, name);
    if (contour.H <= 0.0)
        contour.H = std::max(3.0 * center_im_max(grid) + 3.0 * grid.half_width,
                             2.0 * pi * std::cbrt(std::abs(y_kernel)) * 1.7) +
                    80.0;
    if (contour.step <= 0.0) contour.step = 0.02;
    if (contour.step > contour.H / 50.0)
        throw validation_error(std::string(name) +
                               ": contour step must be <= H/50");
    // On the grid Re mu = 0, so the Gamma pole lines sit at Re s = -k.
    if (sigma_line_distance(contour.sigma, 0.0) < 1e-3)
        throw validation_error(std::string(name) +
                               ": sigma within 1e-3 of a Gamma pole line");

    const auto fine = make_axes(grid.center, grid.half_width, grid.step);
    const auto coarse = make_axes(grid.center, grid.half_width, 2.0 * grid.step);
    const PhiPass base =
        w4_pass_grid(y_kernel, mu_sign, tf, fine, weight, contour, workers);
    const PhiPass check =
        w4_pass_grid(y_kernel, mu_sign, tf, coarse, weight, contour, workers);

    QuadratureResult out;
    out.value = base.value;
    out.self_error = std::abs(base.value - check.value) + 1e-16 * base.mass;
    out.evaluations = base.evaluations + check.evaluations;
    if (tolerance > 0.0 && out.self_error > tolerance)
        throw accuracy_error(
            std::string(name) + ": self_error " + std::to_string(out.self_error) +
            " exceeds tolerance " + std::to_string(tolerance) + "; value=(" +
            std::to_string(base.value.real()) + "," +
            std::to_string(base.value.imag()) + "), coarse=(" +
            std::to_string(check.value.real()) + "," +
            std::to_string(check.value.imag()) + ")");
    return out;
}

// --------------------------------------------------------------------- w6 --

double log_sinh_abs(double x) {  // log |sinh x|, overflow-safe
    const double ax = std::abs(x);
    if (ax > 30.0) return ax - std::log(2.0) + std::log1p(-std::exp(-2.0 * ax));
    return std::log(std::abs(std::sinh(ax)));
}

double log_cosh(double x) {
    const double ax = std::abs(x);
    if (ax > 30.0) return ax - std::log(2.0) + std::log1p(std::exp(-2.0 * ax));
    return std::log(std::cosh(ax));
}

// spec(mu) * S^{eps1,eps2}-constant, fused in log space.  On the spectral
// line nu = i n the tangents of spec cancel the sin(3 pi nu / 2) denominators
// of the mixed variants, leaving sinh/cosh ratios that are regular (and zero)
// at n_j = 0.  Returns the signed value scaled by exp(logh), which keeps the
// huge sinh growth and the tiny Gaussian h from overflowing separately.
double fused_measure(int eps1, int eps2, const triple& nu, double logh) {
    const double c24 = 1.0 / (24.0 * pi * pi);
    const double c32 = 1.0 / (32.0 * pi * pi);
    double n[3];
    for (int j = 0; j < 3; ++j) {
        n[j] = nu[j].imag();
        if (n[j] == 0.0) return 0.0;  // regular zero of the fused measure
    }
    const double prod_n = n[0] * n[1] * n[2];
    double lg = std::log(std::abs(n[0])) + std::log(std::abs(n[1])) +
                std::log(std::abs(n[2]));
    double sign;
    if (eps1 == 1 && eps2 == 1) {
        // prod_j (-3 n_j sinh(1.5 pi n_j)): each factor is negative.
        lg += 3.0 * std::log(3.0) + std::log(c24);
        for (int j = 0; j < 3; ++j) lg += log_sinh_abs(1.5 * pi * n[j]);
        sign = -1.0;
    } else {
        lg += 3.0 * std::log(3.0) + std::log(c32);
        int sel, d0, d1;  // sinh axis and the two cosh axes
        double variant_sign;
        if (eps1 == 1 && eps2 == -1) {
            sel = 1; d0 = 0; d1 = 2; variant_sign = -1.0;
        } else if (eps1 == -1 && eps2 == 1) {
            sel = 0; d0 = 1; d1 = 2; variant_sign = -1.0;
        } else {
            sel = 2; d0 = 0; d1 = 1; variant_sign = 1.0;
        }
        lg += log_sinh_abs(1.5 * pi * n[sel]) - log_cosh(1.5 * pi * n[d0]) -
              log_cosh(1.5 * pi * n[d1]);
        sign = variant_sign * (prod_n < 0.0 ? -1.0 : 1.0) *
               (n[sel] < 0.0 ? -1.0 : 1.0);
    }
    return sign * std::exp(lg + logh);
}

PhiPass w6_pass_grid(double y1, double y2, int eps1, int eps2,
                     const TestFunctionSpec& tf, const AxisLattices& ax,
                     const SpectralWeight& weight, const ContourSpec& contour,
                     int workers) {
    const auto half =
        static_cast<std::size_t>(std::floor(contour.H / contour.step));
    const std::size_t nt = 2 * half + 1;
    if (nt > 5000000)
        throw budget_error("phi_w6: contour grid exceeds 5e6 nodes");
    if ((4 * ax.n - 1) * nt > 30000000)
        throw budget_error("phi_w6: Gamma tables exceed the 3e7-entry budget");
    const double Heff = static_cast<double>(half) * contour.step;
    const double sigma = contour.sigma;
    const double step = contour.step;

    bool rflag[3] = {false, false, false};
    bool cflag[3] = {false, false, false};
    bool diag_sin = false;
    if (eps1 == 1 && eps2 == -1) {
        rflag[0] = cflag[1] = cflag[2] = true;
        diag_sin = true;
    } else if (eps1 == -1 && eps2 == 1) {
        rflag[0] = rflag[1] = cflag[2] = true;
        diag_sin = true;
    } else if (eps1 == -1 && eps2 == -1) {
        rflag[1] = cflag[1] = true;
    }

    // The fused measure carries h in log space: the sinh factors alone can
    // overflow at the grid corners even though h * measure is tiny there.
    NodeField field =
        node_field(ax, tf, weight, [&](const SpectralPoint& pt, double h) {
            if (!(h > 0.0)) return cplx(0.0, 0.0);
            return cplx(fused_measure(eps1, eps2, pt.nu, std::log(h)), 0.0);
        });

    // t-only argument factors |4 pi^2 y|^{-s} with the taper folded in.
    const double L1 = std::log(4.0 * pi * pi * std::abs(y1));
    const double L2 = std::log(4.0 * pi * pi * std::abs(y2));
    std::vector<cplx> y1w(nt), y2w(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(half)) * step;
        const double w = window(t, Heff);
        y1w[k] = std::exp(-cplx(sigma, t) * L1) * w;
        y2w[k] = std::exp(-cplx(sigma, t) * L2) * w;
    }

    // Per-axis tables Gamma(s1 - i b) (rows) and Gamma(s2 + i b) (columns),
    // tagged with the sin(pi(s -+ i b)) shifts of the mixed-sign variants.
    auto build = [&](const std::vector<double>& bs, bool colside, bool shifted) {
        std::vector<cplx> tab(bs.size() * nt);
        parallel_for(bs.size(), workers, [&](std::size_t c) {
            const cplx ib(0.0, bs[c]);
            for (std::size_t k = 0; k < nt; ++k) {
                const cplx s(sigma,
                             (static_cast<double>(k) - static_cast<double>(half)) *
                                 step);
                const cplx z = colside ? s + ib : s - ib;
                cplx lg = log_gamma(z);
                if (shifted) lg += log_sin_pi(z);
                tab[c * nt + k] = std::exp(lg);
            }
        });
        return tab;
    };
    const auto Ra = build(ax.b1, false, rflag[0]);
    const auto Rb = build(ax.b2, false, rflag[1]);
    const auto Rc = build(ax.b3, false, rflag[2]);
    const auto Ca = build(ax.b1, true, cflag[0]);
    const auto Cb = build(ax.b2, true, cflag[1]);
    const auto Cc = build(ax.b3, true, cflag[2]);

    // Diagonal factor on the aligned sum lattice t1 + t2.
    std::vector<cplx> diag(2 * nt - 1);
    parallel_for(diag.size(), workers, [&](std::size_t m) {
        const double u =
            (static_cast<double>(m) - 2.0 * static_cast<double>(half)) * step;
        const cplx su(2.0 * sigma, u);
        cplx ld = -log_gamma(su);
        if (diag_sin) ld -= log_sin_pi(su);
        diag[m] = std::exp(ld);
    });

    // Pairing with 1/Gamma(s1+s2) forbids FFT convolution here: the true
    // convolution decays like exp(-3 pi |u| / 2) while the diagonal grows
    // like exp(pi |u| / 2), so the absolute FFT noise floor on wing bins is
    // amplified by up to exp(pi H) and dominates the dot product.  Each node
    // instead takes a direct double sum over the banded row/col supports.
    // Banding is sound when the rows/cols decay at the full Gamma^3 rate
    // (++) or the diagonal itself carries a decaying 1/sin (mixed signs);
    // the -- variant has neither and keeps the full range.
    const bool bandable = diag_sin || (eps1 == 1 && eps2 == 1);
    const std::size_t n = ax.n;
    std::vector<cplx> col_val(n, cplx(0.0, 0.0));
    std::vector<double> col_mass(n, 0.0);
    std::vector<std::uint64_t> col_ev(n, 0);
    parallel_for(n, workers, [&](std::size_t jj) {
        std::vector<cplx> rbuf(nt), cbuf(nt);
        kahan_sum_cplx acc;
        kahan_sum mass;
        for (std::size_t ii = 0; ii < n; ++ii) {
            if (!field.mask[ii * n + jj]) continue;
            const cplx hw = field.hs[ii * n + jj];
            const cplx* ra = &Ra[ii * nt];
            const cplx* rb = &Rb[jj * nt];
            const cplx* rc = &Rc[(ii + jj) * nt];
            const cplx* ca = &Ca[ii * nt];
            const cplx* cb = &Cb[jj * nt];
            const cplx* cc = &Cc[(ii + jj) * nt];
            double rmaxn = 0.0, cmaxn = 0.0;
            for (std::size_t k = 0; k < nt; ++k) {
                rbuf[k] = y1w[k] * ra[k] * rb[k] * rc[k];
                cbuf[k] = y2w[k] * ca[k] * cb[k] * cc[k];
                rmaxn = std::max(rmaxn, std::norm(rbuf[k]));
                cmaxn = std::max(cmaxn, std::norm(cbuf[k]));
            }
            std::size_t rlo = 0, rhi = nt, clo = 0, chi = nt;
            if (bandable) {
                const double rcut = 1e-54 * rmaxn;
                const double ccut = 1e-54 * cmaxn;
                while (rlo + 1 < rhi && std::norm(rbuf[rlo]) < rcut) ++rlo;
                while (rhi > rlo + 1 && std::norm(rbuf[rhi - 1]) < rcut) --rhi;
                while (clo + 1 < chi && std::norm(cbuf[clo]) < ccut) ++clo;
                while (chi > clo + 1 && std::norm(cbuf[chi - 1]) < ccut) --chi;
            }
            cplx node(0.0, 0.0);
            for (std::size_t i = rlo; i < rhi; ++i) {
                const cplx* dg = &diag[i];
                cplx inner(0.0, 0.0);
                for (std::size_t j = clo; j < chi; ++j) inner += cbuf[j] * dg[j];
                node += rbuf[i] * inner;
            }
            const cplx term = hw * node;
            acc.add(term);
            mass.add(std::abs(term));
            col_ev[jj] += 2 * nt;
        }
        col_val[jj] = acc.value();
        col_mass[jj] = mass.value();
    });

    kahan_sum_cplx total;
    kahan_sum tmass;
    PhiPass out;
    for (std::size_t jj = 0; jj < n; ++jj) {
        total.add(col_val[jj]);
        tmass.add(col_mass[jj]);
        out.evaluations += col_ev[jj];
    }
    const double scale = (step / two_pi) * (step / two_pi) * ax.eta * ax.eta;
    out.value = total.value() * scale;
    out.mass = tmass.value() * scale;
    return out;
}

}  // namespace

// ------------------------------------------------------------- public API --

SpectralGrid SpectralGrid::standard(const TestFunctionSpec& tf) {
    SpectralGrid g;
    g.center = tf.mu0;
    g.half_width = 5.0 * tf.R;
    g.step = tf.R / 8.0;
    return g;
}

std::size_t SpectralGrid::points_per_axis() const {
    if (!(step > 0.0)) return 0;
    const auto m = static_cast<std::size_t>(std::llround(half_width / step));
    return 2 * m + 1;
}

std::vector<GridNode> SpectralGrid::nodes() const {
    if (!(step > 0.0))
        throw validation_error("SpectralGrid: grid step must be positive");
    if (half_width < 2.0 * step)
        throw validation_error(
            "SpectralGrid: grid needs at least two steps per side");
    if (!center.on_spectral_line(1e-9))
        throw validation_error("SpectralGrid: center must sit on Re mu = 0");
    const std::size_t n = points_per_axis();
    if (n > 4001)
        throw budget_error("SpectralGrid: grid exceeds 4001 points per axis");
    const AxisLattices ax = make_axes(center, half_width, step);
    std::vector<GridNode> out;
    out.reserve(n * n);
    const double cell = step * step;
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            GridNode node;
            node.point = point_at(ax, i1, i2);
            node.weight = spec_measure(node.point.mu).real() * cell;
            out.push_back(node);
        }
    return out;
}

QuadratureResult phi_w4(double y, const TestFunctionSpec& tf,
                        const SpectralGrid& grid, ContourSpec contour,
                        int workers, double tolerance,
                        const SpectralWeight& weight) {
    return phi_w4_like(y, 1, tf, grid, contour, workers, tolerance, weight,
                       "phi_w4");
}

QuadratureResult phi_w5(double y, const TestFunctionSpec& tf,
                        const SpectralGrid& grid, ContourSpec contour,
                        int workers, double tolerance,
                        const SpectralWeight& weight) {
    return phi_w4_like(-y, -1, tf, grid, contour, workers, tolerance, weight,
                       "phi_w5");
}

QuadratureResult phi_w6(double y1, double y2, const TestFunctionSpec& tf,
                        const SpectralGrid& grid, ContourSpec contour,
                        int workers, double tolerance,
                        const SpectralWeight& weight) {
    if (y1 == 0.0 || y2 == 0.0)
        throw validation_error("phi_w6: y1 and y2 must be nonzero");
    if (contour.rule != quadrature_rule::trapezoid)
        throw validation_error(
            "phi_w6: only the trapezoid rule supports the convolution lattice");
    validate_grid(grid, tf, "phi_w6");
    if (contour.H <= 0.0)
        contour.H = center_im_max(grid) + 1.5 * grid.half_width + 40.0;
    if (contour.step <= 0.0) contour.step = 0.05;
    if (contour.step > contour.H / 50.0)
        throw validation_error("phi_w6: contour step must be <= H/50");
    if (sigma_line_distance(contour.sigma, 0.0) < 1e-3)
        throw validation_error("phi_w6: sigma within 1e-3 of a Gamma pole line");
    const int eps1 = y1 > 0.0 ? 1 : -1;
    const int eps2 = y2 > 0.0 ? 1 : -1;
    if ((eps1 != eps2) &&
        std::abs(2.0 * contour.sigma - std::round(2.0 * contour.sigma)) < 1e-3)
        throw validation_error(
            "phi_w6: 2 sigma within 1e-3 of an integer (sin(pi(s1+s2)) zero)");

    const auto fine = make_axes(grid.center, grid.half_width, grid.step);
    const auto coarse = make_axes(grid.center, grid.half_width, 2.0 * grid.step);
    const PhiPass base =
        w6_pass_grid(y1, y2, eps1, eps2, tf, fine, weight, contour, workers);
    const PhiPass check =
        w6_pass_grid(y1, y2, eps1, eps2, tf, coarse, weight, contour, workers);

    QuadratureResult out;
    out.value = base.value;
    out.self_error = std::abs(base.value - check.value) + 1e-16 * base.mass;
    out.evaluations = base.evaluations + check.evaluations;
    if (tolerance > 0.0 && out.self_error > tolerance)
        throw accuracy_error(
            "phi_w6: self_error " + std::to_string(out.self_error) +
            " exceeds tolerance " + std::to_string(tolerance) + "; value=(" +
            std::to_string(base.value.real()) + "," +
            std::to_string(base.value.imag()) + "), coarse=(" +
            std::to_string(check.value.real()) + "," +
            std::to_string(check.value.imag()) + ")");
    return out;
}

ScanGeometry ScanGeometry::default_for(scan_transform which) {
    return which == scan_transform::w4 ? ScanGeometry{2.5, 3.5}
                                       : ScanGeometry{0.8, 1.3};
}

ScanTable decay_scan(scan_transform which, const std::vector<double>& T_values,
                     ScanGeometry geometry, double theta, int A0,
                     double budget_seconds, int workers) {
    if (geometry.low_exponent == 0.0 && geometry.high_exponent == 0.0)
        geometry = ScanGeometry::default_for(which);
    if (!(geometry.low_exponent < geometry.high_exponent))
        throw validation_error(
            "decay_scan: geometry exponents must satisfy low < high");
    for (double T : T_values)
        if (!(T > 0.0) || T > 20.0)
            throw validation_error("decay_scan: every T must lie in (0, 20]");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    ScanTable out;
    for (double T : T_values) {
        const TestFunctionSpec tf = TestFunctionSpec::standard(T, theta, A0);
        const SpectralGrid grid = SpectralGrid::standard(tf);
        for (double e : {geometry.low_exponent, geometry.high_exponent}) {
            if (budget_seconds > 0.0 && !out.rows.empty() &&
                elapsed() > budget_seconds) {
                out.truncated = true;
                return out;
            }
            ScanRow row;
            row.T = T;
            if (which == scan_transform::w4) {
                row.y1 = std::pow(T, e);
                const QuadratureResult r = phi_w4(row.y1, tf, grid, {}, workers);
                row.abs_phi = std::abs(r.value);
                row.self_error = r.self_error;
                row.evaluations = r.evaluations;
            } else {
                const double ups = std::pow(T, e);
                row.y1 = row.y2 = ups * ups;
                const QuadratureResult r =
                    phi_w6(row.y1, row.y2, tf, grid, {}, workers);
                row.abs_phi = std::abs(r.value);
                row.self_error = r.self_error;
                row.evaluations = r.evaluations;
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace kzlab
