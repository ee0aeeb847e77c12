#pragma once

#include <vector>

namespace qgraph::series {

// Truncated Taylor series c_0 + c_1 h + ... + c_d h^d about a fixed point.
// Every operation takes the truncation degree d explicitly and returns d + 1
// coefficients; missing input coefficients count as zero.
using Series = std::vector<double>;

Series constant(double c, int degree);
Series add(const Series& a, const Series& b, int degree);
Series scale(const Series& a, double s, int degree);
Series mul(const Series& a, const Series& b, int degree);
Series pow_int(const Series& a, int p, int degree);

/// a^p for real p; needs a_0 > 0.
Series pow_real(const Series& a, double p, int degree);

Series derivative(const Series& a, int degree);
/// Antiderivative with constant term c0.
Series integrate(const Series& a, double c0, int degree);

/// sin(theta + c h) and cos(theta + c h).
Series sin_shift(double theta, double c, int degree);
Series cos_shift(double theta, double c, int degree);

/// arcsin(s(h)) from g' = s' (1 - s^2)^(-1/2); needs |s_0| < 1.
Series arcsin(const Series& s, int degree);

double evaluate(const Series& a, double h);

}  // namespace qgraph::series
