#include "qgraph/power_series.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qgraph::series {
namespace {

double at(const Series& a, int i) {
  return i < static_cast<int>(a.size()) ? a[static_cast<std::size_t>(i)] : 0.0;
}

void check_degree(int degree) {
  if (degree < 0) throw DomainError("series degree must be >= 0");
}

// Taylor coefficients of a function whose derivatives at 0 cycle through
// d0, d1, -d0, -d1 (scaled by c^j), as for sin and cos.
Series cyclic_series(double d0, double d1, double c, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1);
  const double cycle[4] = {d0, d1, -d0, -d1};
  double factor = 1.0;  // c^j / j!
  for (int j = 0; j <= degree; ++j) {
    out[j] = cycle[j % 4] * factor;
    factor *= c / (j + 1);
  }
  return out;
}

}  // namespace

Series constant(double c, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1, 0.0);
  out[0] = c;
  return out;
}

Series add(const Series& a, const Series& b, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i <= degree; ++i) out[i] = at(a, i) + at(b, i);
  return out;
}

Series scale(const Series& a, double s, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i <= degree; ++i) out[i] = s * at(a, i);
  return out;
}

Series mul(const Series& a, const Series& b, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) out[i + j] += at(a, i) * at(b, j);
  return out;
}

Series pow_int(const Series& a, int p, int degree) {
  if (p < 0) throw DomainError("pow_int needs a nonnegative exponent");
  Series result = constant(1.0, degree);
  Series base = a;
  base.resize(static_cast<std::size_t>(degree) + 1, 0.0);
  while (p > 0) {
    if (p & 1) result = mul(result, base, degree);
    p >>= 1;
    if (p > 0) base = mul(base, base, degree);
  }
  return result;
}

Series pow_real(const Series& a, double p, int degree) {
  check_degree(degree);
  const double a0 = at(a, 0);
  if (!(a0 > 0.0))
    throw DomainError(fmt::format("pow_real needs a positive constant term, got {}", a0));
  // J. C. P. Miller recurrence: j a0 v_j = sum_{i=1}^{j} ((p + 1) i - j) a_i v_{j-i}.
  Series v(static_cast<std::size_t>(degree) + 1, 0.0);
  v[0] = std::pow(a0, p);
  for (int j = 1; j <= degree; ++j) {
    double s = 0.0;
    for (int i = 1; i <= j; ++i) s += ((p + 1.0) * i - j) * at(a, i) * v[j - i];
    v[j] = s / (j * a0);
  }
  return v;
}

Series derivative(const Series& a, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i <= degree; ++i) out[i] = (i + 1) * at(a, i + 1);
  return out;
}

Series integrate(const Series& a, double c0, int degree) {
  check_degree(degree);
  Series out(static_cast<std::size_t>(degree) + 1);
  out[0] = c0;
  for (int i = 1; i <= degree; ++i) out[i] = at(a, i - 1) / i;
  return out;
}


Series sin_shift(double theta, double c, int degree) {
  return cyclic_series(std::sin(theta), std::cos(theta), c, degree);
}

Series cos_shift(double theta, double c, int degree) {
  return cyclic_series(std::cos(theta), -std::sin(theta), c, degree);
}

Series arcsin(const Series& s, int degree) {
  check_degree(degree);
  const double s0 = at(s, 0);
  if (!(std::abs(s0) < 1.0))
    throw DomainError(fmt::format("arcsin series needs |s_0| < 1, got {}", s0));
  if (degree == 0) return {std::asin(s0)};
  const Series one_minus = add(constant(1.0, degree - 1),
                               scale(mul(s, s, degree - 1), -1.0, degree - 1),
                               degree - 1);
  const Series g_prime = mul(derivative(s, degree - 1),
                             pow_real(one_minus, -0.5, degree - 1), degree - 1);
  return integrate(g_prime, std::asin(s0), degree);
}

double evaluate(const Series& a, double h) {
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * h + *it;
  return acc;
}

}  // namespace qgraph::series
