#pragma once

#include <cstdint>

#include "kzlab/numeric.hpp"
#include "kzlab/spectral.hpp"

namespace kzlab {

enum class quadrature_rule { trapezoid, gauss_segment };

/// Vertical-contour description for the Mellin kernels.  H = 0 or step = 0
/// pick automatic values from mu (and y).  After auto-fill the step must
/// satisfy step <= H / 50.
struct ContourSpec {
    double sigma = 0.25;
    double H = 0.0;
    double step = 0.0;
    quadrature_rule rule = quadrature_rule::trapezoid;
};

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double self_error = 0.0;  // |value(H, step) - value(2H, step/2)| + tail
    std::uint64_t evaluations = 0;
};

/// G~(s, mu)^sign, sign = +1 or -1:
///   pi^{-3s}/(12288 pi^{7/2}) *
///     ( prod_j Gamma((s-mu_j)/2)/Gamma((1-s+mu_j)/2)
///       + i*sign * prod_j Gamma((1+s-mu_j)/2)/Gamma((2-s+mu_j)/2) ).
/// Each product is formed as exp(sum log Gamma - sum log Gamma) with one
/// exponentiation, so it never overflows for |Im s|, |mu_j| <= 1e3.  Throws
/// domain_error naming the factor when s sits within 1e-6 of a pole of a
/// numerator Gamma.
cplx g_tilde(cplx s, const triple& mu, int sign);

/// G(s1, s2, mu) = (1/Gamma(s1+s2)) prod_j Gamma(s1-mu_j) Gamma(s2+mu_j),
/// in log space.  Throws domain_error near poles of the numerator Gammas and
/// near non-positive integers of s1+s2.
cplx g_big(cplx s1, cplx s2, const triple& mu);

/// Trigonometric factor S^{eps1,eps2}(s; mu); eps = +1/-1 per slot.  The ++
/// variant is independent of s.  Throws domain_error when a denominator
/// (sin(3 pi nu_j / 2), or sin(pi(s1+s2)) for the mixed-sign variants) is
/// within 1e-8 of zero.
cplx s_trig(int eps1, int eps2, cplx s1, cplx s2, const triple& mu);

/// K_{w4}(y; mu) = int |y|^{-s} G~^{sgn y}(s, mu) ds/(2 pi i) along
/// Re s = sigma.  The quadrature runs the requested (H, step) grid with a
/// cosine taper on the outer 20% of nodes, then repeats at (2H, step/2);
/// `value` is the requested-grid result and self_error the difference plus a
/// |t|^{-3/2} tail estimate from the refined endpoints.  A positive
/// `tolerance` turns self_error > tolerance into an accuracy_error carrying
/// both values.
QuadratureResult k_w4(double y, const triple& mu, ContourSpec contour = {},
                      int workers = 0, double tolerance = 0.0);

/// K_{w6}^{eps1,eps2}(y1, y2; mu) =
///   int int |4 pi^2 y1|^{-s1} |4 pi^2 y2|^{-s2} G(s,mu) S^{eps1,eps2}(s;mu)
///     ds1 ds2 / (2 pi i)^2
/// with eps_j = sgn(y_j), both contours at Re s = sigma.  The integrand
/// factorizes into row(t1) * col(t2) * diag(t1+t2) for every sign pair, so
/// the double sum is taken directly over the banded row/col supports against
/// the diagonal factor (FFT convolution would amplify wing bins, see
/// kernels.cpp); only the trapezoid rule supports this lattice and
/// gauss_segment is rejected.  force_eps1/force_eps2 override the sign
/// selection (regression knob; 0 = derive from y).
QuadratureResult k_w6(double y1, double y2, const triple& mu,
                      ContourSpec contour = {}, int workers = 0,
                      double tolerance = 0.0, int force_eps1 = 0,
                      int force_eps2 = 0);

}  // namespace kzlab
