// Langlands / spectral parameter algebra: the mu <-> nu coordinate maps, the
// Weyl-group action, the localized test function h, and the spectral measure.
#pragma once

#include <array>

#include "kzlab/numeric.hpp"

namespace kzlab {

using triple = std::array<cplx, 3>;

// (nu1, nu2, nu3) = ((mu1-mu2)/3, (mu2-mu3)/3, -nu1-nu2); requires zero-sum mu.
triple nu_from_mu(const triple& mu);

// (mu1, mu2, mu3) = (2 nu1 + nu2, nu2 - nu1, -nu1 - 2 nu2).
triple mu_from_nu(cplx nu1, cplx nu2);

// Langlands triple with its derived spectral triple.
struct SpectralPoint {
    triple mu;
    triple nu;

    static SpectralPoint from_mu(const triple& m) { return {m, nu_from_mu(m)}; }
    static SpectralPoint from_nu(cplx n1, cplx n2) {
        triple m = mu_from_nu(n1, n2);
        return {m, {n1, n2, -n1 - n2}};
    }

    bool on_spectral_line(double tol = 1e-12) const {
        for (const cplx& m : mu)
            if (std::abs(m.real()) > tol) return false;
        return true;
    }

    // |Re mu_j| <= c and {-mu} = {conj mu} as multisets.
    bool in_lambda_prime(double c, double tol = 1e-12) const;
};

enum class weyl_id { I, w2, w3, w4, w5, w6 };

// Coordinate permutation induced by conjugating diag(a1,a2,a3) by the group
// representative: element `id` sends position j to perm[j].
struct WeylElement {
    weyl_id id;
    std::array<int, 3> perm;
};

const std::array<WeylElement, 6>& weyl_group();
const WeylElement& weyl_element(weyl_id id);
triple weyl_apply(const WeylElement& w, const triple& mu);

// The localizing Gaussian psi: the growing literal form is kept selectable
// next to the decaying form that actually concentrates mass near mu0.
enum class gaussian_sign { decaying, paper_literal };

struct TestFunctionSpec {
    SpectralPoint mu0;
    double T = 0.0;
    double theta = 0.0;
    double R = 0.0;  // = T^theta
    int A0 = 1;
    gaussian_sign sign_mode = gaussian_sign::decaying;

    // Validates R = T^theta, A0 >= 1, mu0 purely imaginary with
    // |mu0_j| in [T/10, 10T].
    static TestFunctionSpec make(const triple& mu0, double T, double theta, int A0,
                                 gaussian_sign mode = gaussian_sign::decaying);

    // Generic-position center i*T*(1.0, 0.3, -1.3).
    static TestFunctionSpec standard(double T, double theta, int A0,
                                     gaussian_sign mode = gaussian_sign::decaying);
};

// P(mu): for each n = 1..A0 and each j, a factor
// (nu_j^2 - ((1+2n)/3)^2) / |nu0_j|^2.  Dimensionless and O(1) near mu0.
cplx localization_polynomial(const triple& mu, const TestFunctionSpec& tf);

// h(mu) = P(mu)^2 (sum over the Weyl orbit of psi((w(mu)-mu0)/R))^2.
cplx test_function_h_complex(const triple& mu, const TestFunctionSpec& tf);

// Real-valued restriction to the spectral line (checks Im h ~ 0).
double test_function_h(const triple& mu, const TestFunctionSpec& tf);

// spec(mu) = prod_j 3 nu_j tan(3 pi nu_j / 2); real (and non-positive for
// generic points) on the spectral line.  Signed value is returned.
cplx spec_measure(const triple& mu);

}  // namespace kzlab
