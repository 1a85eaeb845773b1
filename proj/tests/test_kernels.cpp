#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "kzlab/kernels.hpp"
#include "kzlab/special.hpp"

using namespace kzlab;

namespace {

const triple mu_spec{cplx(0.0, 3.7), cplx(0.0, -1.2), cplx(0.0, -2.5)};

double window_ref(double t, double Heff) {
    const double a = 0.8 * Heff;
    const double at = std::abs(t);
    if (at <= a) return 1.0;
    if (at >= Heff) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (at - a) / (Heff - a)));
}

}  // namespace

TEST_CASE("g_tilde: pinned high-precision values") {
    // mu = 0, s = 1/4, sign +:
    // pi^{-3/4}/(12288 pi^{7/2}) (Gamma(1/8)^3/Gamma(3/8)^3
    //                             + i Gamma(5/8)^3/Gamma(7/8)^3).
    cplx v = g_tilde(cplx(0.25, 0.0), {0.0, 0.0, 0.0}, +1);
    CHECK(v.real() == doctest::Approx(2.014715754275283164e-5).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(1.431814401872448749e-6).epsilon(1e-13));

    cplx w = g_tilde(cplx(0.25, 7.3), mu_spec, +1);
    CHECK(w.real() == doctest::Approx(4.498662801941986627e-7).epsilon(1e-12));
    CHECK(w.imag() == doctest::Approx(-2.351719303459752539e-7).epsilon(1e-12));
}

TEST_CASE("g_tilde: symmetric in mu and linear in the sign split") {
    const cplx s(0.3, 2.2);
    const triple a{cplx(0, 1.1), cplx(0, -0.4), cplx(0, -0.7)};
    const triple b{cplx(0, -0.4), cplx(0, 1.1), cplx(0, -0.7)};
    cplx va = g_tilde(s, a, +1);
    cplx vb = g_tilde(s, b, +1);
    CHECK(std::abs(va - vb) <= 1e-14 * std::abs(va));

    // g+ - g- = 2i * prefactor * second product.
    cplx lp = -3.0 * s * log_pi_v - std::log(12288.0) - 3.5 * log_pi_v;
    cplx lg(0.0, 0.0);
    for (int j = 0; j < 3; ++j)
        lg += log_gamma(0.5 * (1.0 + s - a[j])) -
              log_gamma(0.5 * (2.0 - s + a[j]));
    cplx expected = cplx(0.0, 2.0) * std::exp(lp + lg);
    cplx diff = g_tilde(s, a, +1) - g_tilde(s, a, -1);
    CHECK(std::abs(diff - expected) <= 1e-13 * std::abs(expected));
}

TEST_CASE("g_tilde: pole proximity raises a named domain error") {
    CHECK_THROWS_WITH_AS(g_tilde(cplx(1e-8, 0.0), {0.0, 0.0, 0.0}, +1),
                         doctest::Contains("mu_1"), domain_error);
    CHECK_THROWS_AS(g_tilde(cplx(0.25, 0.0), {0.0, 0.0, 0.0}, 2),
                    validation_error);
}

TEST_CASE("g_big: closed forms and symmetry") {
    CHECK(std::abs(g_big(cplx(1.0, 0.0), cplx(1.0, 0.0), {0.0, 0.0, 0.0}) -
                   cplx(1.0, 0.0)) < 1e-14);

    const cplx s(0.7, 0.3);
    cplx direct = std::exp(6.0 * log_gamma(s) - log_gamma(2.0 * s));
    cplx v = g_big(s, s, {0.0, 0.0, 0.0});
    CHECK(std::abs(v - direct) <= 1e-13 * std::abs(direct));

    const triple a{cplx(0, 0.9), cplx(0, -0.2), cplx(0, -0.7)};
    const triple b{cplx(0, -0.7), cplx(0, 0.9), cplx(0, -0.2)};
    cplx va = g_big(cplx(0.25, 1.0), cplx(0.25, -0.5), a);
    cplx vb = g_big(cplx(0.25, 1.0), cplx(0.25, -0.5), b);
    CHECK(std::abs(va - vb) <= 1e-13 * std::abs(va));
}

TEST_CASE("g_big: pole proximity raises domain errors") {
    const triple m{cplx(0.5, 0.0), cplx(-0.2, 0.0), cplx(-0.3, 0.0)};
    CHECK_THROWS_WITH_AS(g_big(cplx(0.5, 0.0), cplx(0.7, 0.0), m),
                         doctest::Contains("s1 - mu_1"), domain_error);
    CHECK_THROWS_WITH_AS(
        g_big(cplx(0.3, 0.0), cplx(-0.3, 1e-9), {0.0, 0.0, 0.0}),
        doctest::Contains("s1 + s2"), domain_error);
}

TEST_CASE("s_trig: pinned value, s-independence, forced zero, pole guards") {
    cplx v = s_trig(+1, +1, cplx(0.25, 1.0), cplx(0.25, -2.0),
                    {0.0, 0.0, 0.0});
    CHECK(v.real() == doctest::Approx(1.0 / (24.0 * pi * pi)).epsilon(1e-14));
    CHECK(v.imag() == 0.0);

    const triple m{cplx(0, 0.4), cplx(0, 0.1), cplx(0, -0.5)};
    cplx s1a = s_trig(+1, +1, cplx(0.25, 1.0), cplx(0.25, 2.0), m);
    cplx s1b = s_trig(+1, +1, cplx(0.7, -3.0), cplx(0.1, 0.5), m);
    CHECK(s1a.real() == s1b.real());
    CHECK(s1a.imag() == s1b.imag());

    // (-,-) with s1 - mu_2 an integer: the numerator sine vanishes.
    cplx z = s_trig(-1, -1, m[1] + 2.0, cplx(0.25, 0.7), m);
    CHECK(std::abs(z) < 1e-12);

    // nu_1 = 2/3 makes sin(3 pi nu_1 / 2) vanish in the mixed denominators.
    const triple bad{cplx(1.0, 0.0), cplx(-1.0, 0.0), cplx(0.0, 0.0)};
    CHECK_THROWS_WITH_AS(s_trig(+1, -1, cplx(0.25, 1.0), cplx(0.25, 2.0), bad),
                         doctest::Contains("nu_1"), domain_error);
    CHECK_THROWS_WITH_AS(s_trig(+1, -1, cplx(0.5, 0.0), cplx(0.5, 0.0), m),
                         doctest::Contains("s1 + s2"), domain_error);
}

// Expected values from the residue expansion of the contour integral: closing
// the contour left picks up the poles of Gamma((s - mu_j)/2) at s = mu_j - 2n
// and of Gamma((1 + s - mu_j)/2) at s = mu_j - 1 - 2n, giving a power series
// in |y|^2 that converges for every y != 0.  Computed at 80 significant digits
// and stable under doubling the truncation order.
TEST_CASE("k_w4: matches the residue-series expansion") {
    ContourSpec c;
    c.sigma = 0.25;
    c.H = 400.0;
    c.step = 0.02;
    auto r10 = k_w4(10.0, mu_spec, c);
    const cplx oracle10(-1.2280579596625081396e-7, 6.9114127156782459311e-8);
    CHECK(std::abs(r10.value - oracle10) < 1e-11);
    CHECK(std::abs(r10.value - oracle10) <= r10.self_error + 1e-12);

    auto rhalf = k_w4(0.5, mu_spec, c);
    const cplx oracle_half(-1.1391066944614705957e-8, -3.4985392053157878054e-7);
    CHECK(std::abs(rhalf.value - oracle_half) < 1e-11);
    CHECK(rhalf.evaluations > 0);
    CHECK(std::isfinite(rhalf.self_error));
}

TEST_CASE("k_w4: Weyl invariance, contour independence, conjugation") {
    const triple m{cplx(0, 2.0), cplx(0, -1.0), cplx(0, -1.0)};
    const triple m_swapped{cplx(0, -1.0), cplx(0, 2.0), cplx(0, -1.0)};
    auto a = k_w4(10.0, m);
    auto b = k_w4(10.0, m_swapped);
    CHECK(std::abs(a.value - b.value) <= 1e-8 * std::abs(a.value));

    ContourSpec c13;
    c13.sigma = 1.0 / 3.0;
    auto c = k_w4(10.0, m, c13);
    CHECK(std::abs(a.value - c.value) <= a.self_error + c.self_error + 1e-12);

    // For purely imaginary mu closed under negation the kernel is still
    // genuinely complex (the sign-split piece contributes +/- i times a real
    // series), but flipping the sign of y conjugates it.
    const triple sym{cplx(0, 2.0), cplx(0, 0.0), cplx(0, -2.0)};
    auto rp = k_w4(10.0, sym);
    auto rn = k_w4(-10.0, sym);
    CHECK(std::abs(rn.value - std::conj(rp.value)) <= rp.self_error + rn.self_error + 1e-13);
    const cplx sym_oracle(-7.22979882314403395e-8, 1.22212223251321098e-7);
    CHECK(std::abs(rp.value - sym_oracle) <= rp.self_error + 1e-11);
}

TEST_CASE("k_w4: refinement stays within the reported self_error") {
    const triple m{cplx(0, 2.0), cplx(0, -1.0), cplx(0, -1.0)};
    ContourSpec c1;
    c1.H = 150.0;
    c1.step = 0.05;
    ContourSpec c2;
    c2.H = 300.0;
    c2.step = 0.025;
    auto r1 = k_w4(10.0, m, c1);
    auto r2 = k_w4(10.0, m, c2);
    CHECK(std::abs(r1.value - r2.value) <= r1.self_error);
}

TEST_CASE("k_w4: gauss-segment rule agrees with trapezoid") {
    const triple m{cplx(0, 2.0), cplx(0, -1.0), cplx(0, -1.0)};
    ContourSpec ct;
    ct.H = 150.0;
    ct.step = 0.05;
    ContourSpec cg = ct;
    cg.rule = quadrature_rule::gauss_segment;
    auto rt = k_w4(10.0, m, ct);
    auto rg = k_w4(10.0, m, cg);
    CHECK(std::abs(rt.value - rg.value) <= rt.self_error + rg.self_error + 1e-12);
}

TEST_CASE("k_w4: errors and determinism") {
    CHECK_THROWS_AS(k_w4(0.0, mu_spec), validation_error);
    ContourSpec wide;
    wide.H = 100.0;
    wide.step = 3.0;  // violates step <= H/50
    CHECK_THROWS_AS(k_w4(10.0, mu_spec, wide), validation_error);
    ContourSpec onpole;
    onpole.sigma = 5e-4;
    CHECK_THROWS_AS(k_w4(10.0, mu_spec, onpole), validation_error);
    CHECK_THROWS_AS(k_w4(10.0, mu_spec, {}, 0, 1e-30), accuracy_error);

    auto r1 = k_w4(10.0, mu_spec, {}, 1);
    auto r3 = k_w4(10.0, mu_spec, {}, 3);
    CHECK(r1.value.real() == r3.value.real());
    CHECK(r1.value.imag() == r3.value.imag());
    CHECK(r1.self_error == r3.self_error);
}

TEST_CASE("k_w6: convolution path matches the direct double sum") {
    const triple m{cplx(0, 0.4), cplx(0, 0.1), cplx(0, -0.5)};
    ContourSpec c;
    c.sigma = 0.25;
    c.H = 30.0;
    c.step = 0.1;
    const std::size_t half = 300;
    const double Heff = static_cast<double>(half) * c.step;

    for (auto [y1, y2] : std::vector<std::pair<double, double>>{
             {0.02, 0.03}, {0.02, -0.03}, {-0.02, 0.03}, {-0.02, -0.03}}) {
        auto lib = k_w6(y1, y2, m, c);
        const int e1 = y1 > 0 ? 1 : -1;
        const int e2 = y2 > 0 ? 1 : -1;
        const double L1 = std::log(4.0 * pi * pi * std::abs(y1));
        const double L2 = std::log(4.0 * pi * pi * std::abs(y2));
        kahan_sum_cplx acc;
        kahan_sum mag;
        for (std::size_t i = 0; i <= 2 * half; ++i) {
            const double t1 = (static_cast<double>(i) - static_cast<double>(half)) * c.step;
            const cplx s1(c.sigma, t1);
            const double w1 = window_ref(t1, Heff);
            if (w1 == 0.0) continue;
            for (std::size_t j = 0; j <= 2 * half; ++j) {
                const double t2 = (static_cast<double>(j) - static_cast<double>(half)) * c.step;
                const cplx s2(c.sigma, t2);
                const double w2 = window_ref(t2, Heff);
                if (w2 == 0.0) continue;
                cplx f = std::exp(-s1 * L1 - s2 * L2) * g_big(s1, s2, m) *
                         s_trig(e1, e2, s1, s2, m);
                acc.add(f * (w1 * w2));
                mag.add(std::abs(f) * (w1 * w2));
            }
        }
        const double scale = c.step / two_pi;
        cplx oracle = acc.value() * (scale * scale);
        CHECK(std::abs(lib.value - oracle) <= 1e-9 * (1.0 + std::abs(oracle)));
        // triangle inequality of the quadrature sum
        CHECK(std::abs(lib.value) <= mag.value() * (scale * scale) + 1e-12);
    }
}

TEST_CASE("k_w6: swap (y1,y2) with mu -> -mu reproduces the ++ value") {
    const triple m{cplx(0, 0.4), cplx(0, 0.1), cplx(0, -0.5)};
    const triple mneg{-m[0], -m[1], -m[2]};
    auto a = k_w6(0.02, 0.03, m);
    auto b = k_w6(0.03, 0.02, mneg);
    CHECK(std::abs(a.value - b.value) <= a.self_error + b.self_error + 1e-12);
}

TEST_CASE("k_w6: epsilon variant selection is observable") {
    const triple m{cplx(0, 0.4), cplx(0, 0.1), cplx(0, -0.5)};
    auto mixed = k_w6(0.02, -0.03, m);
    auto forced = k_w6(0.02, -0.03, m, {}, 0, 0.0, +1, +1);
    CHECK(std::abs(mixed.value - forced.value) >
          1e-6 * (std::abs(mixed.value) + std::abs(forced.value)));
}

TEST_CASE("k_w6: refinement stays within the reported self_error") {
    const triple m{cplx(0, 0.4), cplx(0, 0.1), cplx(0, -0.5)};
    ContourSpec c1;
    c1.H = 30.0;
    c1.step = 0.1;
    ContourSpec c2;
    c2.H = 60.0;
    c2.step = 0.05;
    auto r1 = k_w6(0.02, 0.03, m, c1);
    auto r2 = k_w6(0.02, 0.03, m, c2);
    CHECK(std::abs(r1.value - r2.value) <= r1.self_error);
}

TEST_CASE("k_w6: errors and determinism") {
    const triple m{cplx(0, 0.4), cplx(0, 0.1), cplx(0, -0.5)};
    CHECK_THROWS_AS(k_w6(0.0, 0.03, m), validation_error);
    ContourSpec g;
    g.rule = quadrature_rule::gauss_segment;
    CHECK_THROWS_AS(k_w6(0.02, 0.03, m, g), validation_error);
    ContourSpec onpole;
    onpole.sigma = 5e-4;
    CHECK_THROWS_AS(k_w6(0.02, 0.03, m, onpole), validation_error);
    ContourSpec shalf;
    shalf.sigma = 0.5;  // sin(pi(s1+s2)) zero line for the mixed variants
    CHECK_THROWS_AS(k_w6(0.02, -0.03, m, shalf), validation_error);
    CHECK_THROWS_AS(k_w6(0.02, 0.03, m, {}, 0, 1e-30), accuracy_error);

    auto r1 = k_w6(0.02, -0.03, m, {}, 1);
    auto r3 = k_w6(0.02, -0.03, m, {}, 3);
    CHECK(r1.value.real() == r3.value.real());
    CHECK(r1.value.imag() == r3.value.imag());
}
