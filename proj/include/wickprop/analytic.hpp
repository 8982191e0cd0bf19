#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace wickprop {

// Scalar function with its whole derivative family and a growth majorant.
// derivative(0, x) is the function itself; majorant(k, m) bounds
// sup_{|x| <= m} |f^(k)(x)| (may be +inf outside the series radius);
// taylor(n) is the coefficient of x^n in the expansion at 0 when one is
// attached (has_taylor()).
class AnalyticFunction {
 public:
  AnalyticFunction() = default;
  AnalyticFunction(std::string name, std::function<double(int, double)> derivative,
                   std::function<double(int, double)> majorant,
                   std::function<double(int)> taylor = {},
                   double radius = std::numeric_limits<double>::infinity())
      : name_(std::move(name)),
        derivative_(std::move(derivative)),
        majorant_(std::move(majorant)),
        taylor_(std::move(taylor)),
        radius_(radius) {}

  const std::string& name() const { return name_; }
  double operator()(double x) const { return derivative_(0, x); }
  double derivative(int k, double x) const { return derivative_(k, x); }
  double majorant(int k, double bound) const { return majorant_(k, bound); }
  bool has_taylor() const { return static_cast<bool>(taylor_); }
  double taylor(int n) const { return taylor_(n); }
  // Convergence radius of the series at 0.
  double radius() const { return radius_; }
  bool valid() const { return static_cast<bool>(derivative_); }

 private:
  std::string name_;
  std::function<double(int, double)> derivative_;
  std::function<double(int, double)> majorant_;
  std::function<double(int)> taylor_;
  double radius_ = std::numeric_limits<double>::infinity();
};

namespace analytic {

// sum_n coeffs[n] x^n
AnalyticFunction polynomial(std::vector<double> coeffs);
// a + b e^x
AnalyticFunction exp_family(double a, double b);
// ln(1 + x); series radius 1
AnalyticFunction log1p_function();
// (cos x + cosh x)/2 = sum_n x^{4n}/(4n)!
AnalyticFunction cos_cosh_mean();

}  // namespace analytic

}  // namespace wickprop
