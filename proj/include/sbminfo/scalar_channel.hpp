#pragma once

#include <functional>

#include "sbminfo/quadrature.hpp"

namespace sbminfo {

// Quantities of the binary-input Gaussian channel Y0 = sqrt(gamma)*X0 + Z0,
// X0 uniform on {+1,-1}, Z0 ~ N(0,1), all evaluated by deterministic
// quadrature against the standard normal.
//
// Evaluation is hybrid in gamma. The integrands tanh^2 / log cosh have their
// transition sqrt(gamma) deep in the Gaussian tail, where Gauss-Hermite nodes
// thin out; beyond gamma = 0.3 the caller's rule is bypassed in favor of the
// exact channel-output representation
//   E[f(gamma + sqrt(gamma) Z)]
//     = e^{-gamma/2}/sqrt(2 pi gamma) * int e^{v - v^2/(2 gamma)} f(v) dv,
// integrated by a trapezoid, which converges geometrically for integrands
// analytic in |Im v| < pi/2 (sech^2, sech^4, log1p(e^{-2v})) and is
// rule-order independent.

// Overflow-safe log(cosh(u)); exact for all u.
double log_cosh(double u);

// log(1 + e^{x}) without overflow.
double softplus(double x);

// E[f(gamma + sqrt(gamma) Z)] by the tail-stable trapezoid above; f(v) must
// be analytic in the strip |Im v| < pi and e^v f(v) integrable. Accurate to
// ~1e-13 for gamma >= 0.25.
double channel_output_expect(double gamma, const std::function<double(double)>& f);

// E[tanh(gamma + sqrt(gamma) Z)^power], exact at every gamma: binomial
// expansion of (1 - s)^power with s = 1 - tanh routed through the tail-stable
// integral (s^j decays on both sides once weighted by e^v).
double tanh_power_moment(double gamma, int power, const QuadratureRule& rule);

// mmse(gamma) = 1 - E{ tanh(gamma + sqrt(gamma) Z)^2 }, in [0, 1].
double mmse_scalar(double gamma, const QuadratureRule& rule);

// I(gamma) = gamma - E{ log cosh(gamma + sqrt(gamma) Z) }, in [0, log 2] nats.
double mi_scalar(double gamma, const QuadratureRule& rule);

// G(gamma) = 1 - mmse(gamma): the asymptotic overlap of the scalar channel.
double g_overlap(double gamma, const QuadratureRule& rule);

// mmse of the channel extended with erasure side information revealed with
// probability eps: (1 - eps) * mmse(gamma).
double mmse_eps(double gamma, double eps, const QuadratureRule& rule);

// One channel sample point with all linked quantities. mmse + g == 1 holds
// exactly (g is stored as 1 - mmse).
struct ScalarPoint {
    double gamma = 0.0;
    double mi = 0.0;
    double mmse = 1.0;
    double g = 0.0;
};

ScalarPoint scalar_point(double gamma, const QuadratureRule& rule);

}  // namespace sbminfo
