#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pssc {

/// Dense component array of a tensor at one point. Every slot ranges over
/// 0..n-1; `variance` holds one character per slot, 'u' for a vector
/// (upper) index and 'l' for a covector (lower) index. Storage is row-major
/// with the first slot slowest.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, std::string variance)
      : n_(n), variance_(std::move(variance)), data_(flat_size(n, variance_.size()), 0.0) {
    for (char c : variance_)
      if (c != 'u' && c != 'l') throw std::invalid_argument("variance must be made of 'u'/'l'");
  }

  int dim() const { return n_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::string& variance() const { return variance_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  double& at(std::span<const int> idx) { return data_[offset_span(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset_span(idx)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Tensor& operator+=(const Tensor& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, double s) { return a *= s; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

  /// Visits every multi-index in storage order.
  template <typename F>
  void for_each_index(F&& f) const {
    std::vector<int> idx(variance_.size(), 0);
    for (std::size_t k = 0; k < data_.size(); ++k) {
      f(std::span<const int>(idx), k);
      for (int s = static_cast<int>(idx.size()) - 1; s >= 0; --s) {
        if (++idx[static_cast<std::size_t>(s)] < n_) break;
        idx[static_cast<std::size_t>(s)] = 0;
      }
    }
  }

 private:
  static std::size_t flat_size(int n, std::size_t rank) {
    std::size_t s = 1;
    for (std::size_t r = 0; r < rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
  }

  template <typename... I>
  std::size_t offset(I... idx) const {
    assert(sizeof...(I) == variance_.size());
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  std::size_t offset_span(std::span<const int> idx) const {
    assert(idx.size() == variance_.size());
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    return off;
  }

  void check_same(const Tensor& o) const {
    if (o.n_ != n_ || o.variance_ != variance_) throw std::invalid_argument("tensor shape mismatch");
  }

  int n_ = 0;
  std::string variance_;
  std::vector<double> data_;
};

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim() || a.size() != b.size()) throw std::invalid_argument("tensor shape mismatch");
  double m = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

using Vector = std::vector<double>;

}  // namespace pssc
