#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace octo {

/// Small dense symmetric matrix (full storage, row-major).
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}

  int size() const { return n_; }
  double operator()(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, double v) {
    a_[idx(i, j)] = v;
    a_[idx(j, i)] = v;
  }
  void add(int i, int j, double v) {
    a_[idx(i, j)] += v;
    if (i != j) a_[idx(j, i)] += v;
  }
  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<double> a_;
};

/// Smallest eigenvalue of a symmetric matrix (dense solver).
double lambda_min(const SymMat& m);

/// Operator (spectral) norm of a symmetric matrix.
double operator_norm(const SymMat& m);

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace octo
