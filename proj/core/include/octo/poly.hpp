#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace octo {

/// Dense univariate polynomial in the shifted variable (x - origin).
///
/// Coefficients are stored low-to-high. Keeping an explicit origin lets
/// boundary values of interpolants come out bit-exact: p(origin) == c[0].
class Poly {
 public:
  Poly() = default;
  Poly(std::vector<double> coeffs, double origin)
      : c_(std::move(coeffs)), origin_(origin) {}

  double operator()(double x) const {
    const double u = x - origin_;
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * u + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly({0.0}, origin_);
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Poly(std::move(d), origin_);
  }

  /// Antiderivative with zero constant term, so the result vanishes at the origin.
  Poly antiderivative() const {
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
    return Poly(std::move(a), origin_);
  }

  Poly& operator+=(double v) {
    if (c_.empty()) c_.push_back(0.0);
    c_[0] += v;
    return *this;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double origin() const { return origin_; }
  const std::vector<double>& coeffs() const { return c_; }

 private:
  std::vector<double> c_{0.0};
  double origin_ = 0.0;
};

}  // namespace octo
