#include "wickprop/analytic.hpp"

#include <cmath>

namespace wickprop {
namespace analytic {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// falling factorial n (n-1) ... (n-k+1)
double falling(int n, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= static_cast<double>(n - i);
  return f;
}

}  // namespace

AnalyticFunction polynomial(std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  auto deriv = [coeffs](int k, double x) {
    double acc = 0.0;
    for (int n = static_cast<int>(coeffs.size()) - 1; n >= k; --n)
      acc = acc * x + coeffs[static_cast<std::size_t>(n)] * falling(n, k);
    return acc;
  };
  auto major = [coeffs](int k, double m) {
    double acc = 0.0;
    for (int n = static_cast<int>(coeffs.size()) - 1; n >= k; --n)
      acc = acc * m + std::abs(coeffs[static_cast<std::size_t>(n)]) * falling(n, k);
    return acc;
  };
  auto taylor = [coeffs](int n) {
    return n >= 0 && n < static_cast<int>(coeffs.size())
               ? coeffs[static_cast<std::size_t>(n)]
               : 0.0;
  };
  return AnalyticFunction("polynomial", deriv, major, taylor);
}

AnalyticFunction exp_family(double a, double b) {
  auto deriv = [a, b](int k, double x) {
    return k == 0 ? a + b * std::exp(x) : b * std::exp(x);
  };
  auto major = [a, b](int k, double m) {
    return k == 0 ? std::abs(a) + std::abs(b) * std::exp(m)
                  : std::abs(b) * std::exp(m);
  };
  auto taylor = [a, b](int n) {
    return n == 0 ? a + b : b * std::exp(-std::lgamma(n + 1.0));
  };
  return AnalyticFunction("exp_family(" + std::to_string(a) + "," + std::to_string(b) + ")",
                          deriv, major, taylor);
}

AnalyticFunction log1p_function() {
  // f^(k)(x) = (-1)^{k-1} (k-1)! / (1+x)^k
  auto deriv = [](int k, double x) {
    if (k == 0) return std::log1p(x);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * std::exp(std::lgamma(static_cast<double>(k)) -
                           k * std::log1p(x));
  };
  auto major = [](int k, double m) {
    if (m >= 1.0) return kInf;
    if (k == 0) return -std::log1p(-m);
    return std::exp(std::lgamma(static_cast<double>(k)) - k * std::log1p(-m));
  };
  auto taylor = [](int n) {
    if (n <= 0) return 0.0;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return sign / static_cast<double>(n);
  };
  return AnalyticFunction("log1p", deriv, major, taylor, 1.0);
}

AnalyticFunction cos_cosh_mean() {
  auto deriv = [](int k, double x) {
    const double hyper = (k % 2 == 0) ? std::cosh(x) : std::sinh(x);
    double trig = 0.0;
    switch (k % 4) {
      case 0: trig = std::cos(x); break;
      case 1: trig = -std::sin(x); break;
      case 2: trig = -std::cos(x); break;
      case 3: trig = std::sin(x); break;
    }
    return 0.5 * (trig + hyper);
  };
  auto major = [](int /*k*/, double m) { return 0.5 * (1.0 + std::cosh(m)); };
  auto taylor = [](int n) {
    return (n >= 0 && n % 4 == 0) ? std::exp(-std::lgamma(n + 1.0)) : 0.0;
  };
  return AnalyticFunction("cos_cosh_mean", deriv, major, taylor);
}

}  // namespace analytic
}  // namespace wickprop
