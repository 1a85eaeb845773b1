#include "kzlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kzlab {

triple nu_from_mu(const triple& mu) {
    cplx sum = mu[0] + mu[1] + mu[2];
    if (std::abs(sum) > 1e-10)
        throw validation_error("nu_from_mu: mu does not sum to zero (residual " +
                               std::to_string(std::abs(sum)) + ")");
    cplx n1 = (mu[0] - mu[1]) / 3.0;
    cplx n2 = (mu[1] - mu[2]) / 3.0;
    return {n1, n2, -n1 - n2};
}

triple mu_from_nu(cplx nu1, cplx nu2) {
    return {2.0 * nu1 + nu2, nu2 - nu1, -nu1 - 2.0 * nu2};
}

bool SpectralPoint::in_lambda_prime(double c, double tol) const {
    for (const cplx& m : mu)
        if (std::abs(m.real()) > c + tol) return false;
    // Multiset equality of {-mu} and {conj mu} by greedy matching.
    std::array<cplx, 3> want = {-mu[0], -mu[1], -mu[2]};
    std::array<bool, 3> used = {false, false, false};
    for (const cplx& w : want) {
        bool matched = false;
        for (int j = 0; j < 3 && !matched; ++j) {
            if (used[j]) continue;
            if (std::abs(w - std::conj(mu[j])) <= tol * std::max(1.0, std::abs(w))) {
                used[j] = true;
                matched = true;
            }
        }
        if (!matched) return false;
    }
    return true;
}

const std::array<WeylElement, 6>& weyl_group() {
    static const std::array<WeylElement, 6> g = {{
        {weyl_id::I, {0, 1, 2}},
        {weyl_id::w2, {0, 2, 1}},
        {weyl_id::w3, {1, 0, 2}},
        {weyl_id::w4, {1, 2, 0}},
        {weyl_id::w5, {2, 0, 1}},
        {weyl_id::w6, {2, 1, 0}},
    }};
    return g;
}

const WeylElement& weyl_element(weyl_id id) {
    for (const WeylElement& w : weyl_group())
        if (w.id == id) return w;
    throw validation_error("weyl_element: unknown id");
}

triple weyl_apply(const WeylElement& w, const triple& mu) {
    return {mu[w.perm[0]], mu[w.perm[1]], mu[w.perm[2]]};
}

TestFunctionSpec TestFunctionSpec::make(const triple& mu0, double T, double theta, int A0,
                                        gaussian_sign mode) {
    if (T <= 0.0) throw validation_error("TestFunctionSpec: T must be positive");
    if (theta <= 0.0 || theta >= 1.0)
        throw validation_error("TestFunctionSpec: theta must lie in (0,1)");
    if (A0 < 1) throw validation_error("TestFunctionSpec: A0 must be a positive integer");
    SpectralPoint p = SpectralPoint::from_mu(mu0);
    if (!p.on_spectral_line(1e-10))
        throw validation_error("TestFunctionSpec: mu0 must be purely imaginary");
    for (const cplx& m : mu0) {
        double a = std::abs(m);
        if (a < T / 10.0 || a > 10.0 * T)
            throw validation_error("TestFunctionSpec: |mu0_j| outside [T/10, 10T]");
    }
    TestFunctionSpec tf;
    tf.mu0 = p;
    tf.T = T;
    tf.theta = theta;
    tf.R = std::pow(T, theta);
    tf.A0 = A0;
    tf.sign_mode = mode;
    return tf;
}

TestFunctionSpec TestFunctionSpec::standard(double T, double theta, int A0, gaussian_sign mode) {
    triple mu0 = {cplx(0.0, T), cplx(0.0, 0.3 * T), cplx(0.0, -1.3 * T)};
    return make(mu0, T, theta, A0, mode);
}

cplx localization_polynomial(const triple& mu, const TestFunctionSpec& tf) {
    triple nu = nu_from_mu(mu);
    cplx prod(1.0, 0.0);
    for (int n = 1; n <= tf.A0; ++n) {
        const double zero = (1.0 + 2.0 * n) / 3.0;
        for (int j = 0; j < 3; ++j) {
            double denom = std::norm(tf.mu0.nu[j]);
            prod *= (nu[j] * nu[j] - zero * zero) / denom;
        }
    }
    return prod;
}

namespace {

cplx psi_gaussian(const triple& z, gaussian_sign mode) {
    cplx q = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    return std::exp(mode == gaussian_sign::decaying ? q : -q);
}

}  // namespace

cplx test_function_h_complex(const triple& mu, const TestFunctionSpec& tf) {
    cplx p = localization_polynomial(mu, tf);
    kahan_sum_cplx bumps;
    for (const WeylElement& w : weyl_group()) {
        triple wmu = weyl_apply(w, mu);
        triple z = {(wmu[0] - tf.mu0.mu[0]) / tf.R, (wmu[1] - tf.mu0.mu[1]) / tf.R,
                    (wmu[2] - tf.mu0.mu[2]) / tf.R};
        bumps.add(psi_gaussian(z, tf.sign_mode));
    }
    cplx s = bumps.value();
    return p * p * s * s;
}

double test_function_h(const triple& mu, const TestFunctionSpec& tf) {
    cplx h = test_function_h_complex(mu, tf);
    if (std::abs(h.imag()) > 1e-10 * std::max(1.0, std::abs(h.real())))
        throw domain_error("test_function_h: non-real value off the spectral line");
    return h.real();
}

cplx spec_measure(const triple& mu) {
    triple nu = nu_from_mu(mu);
    cplx prod(1.0, 0.0);
    for (const cplx& n : nu) {
        // tan(3 pi nu/2) has poles at nu = (2k+1)/3 on the real axis.
        double t = 3.0 * n.real();
        double nearest_odd = 2.0 * std::round((t - 1.0) / 2.0) + 1.0;
        double dist = std::hypot(n.real() - nearest_odd / 3.0, n.imag());
        if (dist < 1e-8)
            throw domain_error("spec_measure: nu within 1e-8 of a tan pole");
        prod *= 3.0 * n * std::tan(1.5 * pi * n);
    }
    return prod;
}

}  // namespace kzlab
