// Archimedean Gamma factors of the degree-3 and degree-6 L-functions, the
// Gaussian-smoothed Mellin weights of their approximate functional equations,
// the four-term main-term density M(mu, k) with its spectral integral, and
// the diagonal weight D(mu) together with its residue prediction.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kzlab/kernels.hpp"
#include "kzlab/numeric.hpp"
#include "kzlab/special.hpp"
#include "kzlab/spectral.hpp"
#include "kzlab/transforms.hpp"

namespace kzlab {

/// Selector for the completed-factor products: gl3 is prod_j Gamma_R(s - mu_j),
/// rankin the degree-6 tensor product
/// prod_j Gamma_R(s + (k-1)/2 - mu_j) Gamma_R(s + (k+1)/2 - mu_j); the dual
/// kinds substitute mu -> -mu.
enum class gamma_kind { gl3, gl3_dual, rankin, rankin_dual };

struct GammaFactorSpec {
    gamma_kind kind = gamma_kind::gl3;
    triple mu{};
    int k = 0;  // tensor weight, even >= 4; ignored by the degree-3 kinds
};

/// log of the selected factor at s, formed as the sum of log Gamma_R values.
/// Throws domain_error naming the first constituent whose argument sits
/// within 1e-9 of a Gamma_R pole (the non-positive even integers), and
/// validation_error when a tensor kind is requested with an odd or small k
/// or when mu is not zero-sum.
cplx gamma_factor(const GammaFactorSpec& spec, cplx s);

enum class afe_kind { V, Vtilde, W, Wtilde };

/// Simple pole of a caller-supplied extra factor multiplying the afe_weight
/// integrand.  For each entry the engine adds
///   -residue * y^{-u} * ratio(u) * G(u) / u   at u = location,
/// i.e. the compensation a leftward shift of the defining contour across
/// that pole produces.  `residue` is the residue of the extra factor alone.
struct PoleCorrection {
    cplx location{0.0, 0.0};
    cplx residue{0.0, 0.0};
};

/// Smoothed Mellin weight of the approximate functional equation,
///   (1/2 pi i) int y^{-u} [gamma(1/2 + u, kind) / gamma(1/2, base)] G(u) du/u
/// with G(u) = e^{u^2}, where `base` is the non-dual companion of `kind`
/// (gl3 for V and Vtilde, rankin for W and Wtilde).  k is the tensor weight
/// for W/Wtilde and is ignored for V/Vtilde.
///
/// A default-initialized contour evaluates on Re u = 3 when y >= 1.  For
/// y < 1 the contour is moved to Re u = -1/4 and the crossed residue at u = 0
/// (the ratio at u = 0, i.e. the small-y limit of the weight) is added back:
/// same value, but the y^{-u} magnification never reaches the quadrature.
/// -1/4 stays right of every Gamma_R pole line (Re u = -1/2 for V/Vtilde,
/// Re u <= -2 for W/Wtilde), so u = 0 is the only crossed pole for any mu.
/// An explicit sigma must lie in [1.5, 6] and is used directly.  H = 0 and
/// step = 0 auto-fill to 20 and an alias-safe fraction of pi / (2 sigma +
/// |log y|); only the trapezoid rule is supported.  self_error is the
/// doubling difference |value(H, step) - value(2H, step/2)| plus the
/// endpoint tail.  A positive tolerance turns self_error > tolerance into
/// an accuracy_error.
QuadratureResult afe_weight(afe_kind kind, double y, const triple& mu, int k,
                            ContourSpec contour = {},
                            const std::vector<PoleCorrection>& poles = {},
                            double tolerance = 0.0);

/// M(mu, k) = zeta(3/2) + L1g * P1 + L1g * P2 + zeta(3/2) * P1 * P2 with
///   P1 = prod_j Gamma(1/4 + mu_j/2) / Gamma(1/4 - mu_j/2),
///   P2 = prod_j Gamma(k/2 + mu_j) / Gamma(k/2 - mu_j),
/// both formed in log space.  P1 is the dual/primal gl3 factor ratio at the
/// central point; P2 collapses the tensor ratio through the duplication
/// formula, which cancels the (2 pi)^{-2 mu_j} powers on zero-sum mu.
/// Throws domain_error near Gamma poles (unreachable on the spectral line)
/// and validation_error on odd k or non-positive L1g.
cplx m_main(const triple& mu, int k, double L1_g);

struct MainTermConfig {
    TestFunctionSpec tf;
    SpectralGrid grid;  // must be centered at tf.mu0
    int k = 16;
    double L1_g = 0.0;  // 0: computed from the built-in weight-k table
    double tolerance = 0.0;
    int workers = 0;

    // Test seams: replace the density M, the localization h, or the measure
    // spec(mu).  Each receives the lattice point; null keeps the default.
    std::function<cplx(const SpectralPoint&)> m_override;
    std::function<cplx(const SpectralPoint&)> h_override;
    std::function<cplx(const SpectralPoint&)> measure_override;
};

struct MainTermResult {
    cplx value{0.0, 0.0};
    double per_T_ratio = 0.0;  // accumulated |M h spec| / (192 pi^5 T^3 R^2)
    double self_error = 0.0;
    std::uint64_t evaluations = 0;
};

/// (1/192 pi^5) * sum over the grid of M(mu, k) h(mu) spec(mu) eta^2, the
/// lattice form of the main-term double integral.  per_T_ratio accumulates
/// absolute values instead, so cancellation cannot hide the magnitude of the
/// integrand mass.  self_error is the step-doubling difference plus a 1e-16
/// rounding floor on the accumulated mass; a positive tolerance promotes a
/// larger self_error to accuracy_error.  Deterministic reduction: rows are
/// computed into per-row slots in parallel and reduced in index order.
MainTermResult main_term_integral(const MainTermConfig& config);

struct DiagonalResult {
    cplx value{0.0, 0.0};
    // L(1, g) * prod_j Gamma(1/4 + mu_j/2) / Gamma(1/4 - mu_j/2): the
    // residue at u1 = u2 = 0.  Zero when no L(1, g) value is available.
    cplx prediction{0.0, 0.0};
    double self_error = 0.0;
    std::uint64_t evaluations = 0;
};

/// D(mu) = (1/2 pi i)^2 double integral of
///   L(1 + u1 + u2, g) * [gamma(1/2 + u1, gl3-dual) / gamma(1/2, gl3)]
///                     * [gamma(1/2 + u2, rankin) / gamma(1/2, rankin)]
///                     * G(u1) G(u2) du1 du2 / (u1 u2)
/// on Re u1 = Re u2 = sigma (default 3; explicit values clamped to [1.5, 6]
/// so the L-series argument stays in its certified region).  The integrand
/// separates into row(t1) * col(t2) * L(t1 + t2), so the lattice sum costs
/// one L evaluation per diagonal plus O(n^2) products.  The table only
/// supplies Dirichlet coefficients and is not re-validated here: the value
/// is linear in it, including non-normalized scalings.  L(1, g) for the
/// prediction comes from L1_g when nonzero, else from l_central_gl2 for a
/// unit-normalized holomorphic table, else the prediction is left at zero.
/// self_error is the step-doubling difference plus the certified L-series
/// tail mass; positive tolerance promotes it to accuracy_error.
DiagonalResult diagonal_weight(const triple& mu, int k, const HeckeTable& g,
                               ContourSpec contour = {}, double L1_g = 0.0,
                               double tolerance = 0.0);

/// L(s, g) for a level-1 holomorphic form in the analytic normalization
/// (L(s) = sum lambda(n) n^{-s}), evaluated through the two incomplete-Gamma
/// pieces of the completed integral split at its symmetry point:
///   Lambda(S) = sum_n a(n) e^{-2 pi n} [F(S, 2 pi n) + i^k F(k - S, 2 pi n)],
///   F(S, x) = Gamma(S, x) e^x x^{-S},  S = s + (k-1)/2,  a(n) = lambda(n)
///   n^{(k-1)/2},
/// then L(s) = Lambda(S) (2 pi)^S / Gamma(S).  The scaled F keeps every term
/// within double range and the sum converges like e^{-2 pi n}, so ~15 terms
/// reach 1e-12 at any s in the strip.  The S <-> k-S symmetry of the sum is
/// checked to 1e-8 as a structural guard (it is exact term by term, so it
/// detects asymmetry bugs, not truncation).  tail_bound is the Deligne
/// envelope of the dropped terms mapped through the same normalization.
/// Throws validation_error on a non-holomorphic or non-normalized table
/// (validate_table), odd k, or S outside (0, k).
SeriesValue l_central_gl2(const HeckeTable& g, cplx s,
                          std::size_t truncation = 0);

}  // namespace kzlab
