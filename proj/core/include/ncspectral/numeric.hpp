#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <type_traits>

namespace ncspectral {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Neumaier compensated accumulator. The order of add() calls fixes the
// result bit-for-bit, which the parallel drivers rely on.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_floating_point_v<T>) {
      comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    } else {
      comp_ += component(sum_, x, t);
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static T component(T s, T x, T t) {
    auto part = [](auto a, auto b, auto c) {
      return std::abs(a) >= std::abs(b) ? (a - c) + b : (b - c) + a;
    };
    return T(part(s.real(), x.real(), t.real()), part(s.imag(), x.imag(), t.imag()));
  }
  T sum_{};
  T comp_{};
};

/// Worker count from NCSPECTRAL_THREADS, else hardware concurrency; at least 1.
unsigned default_thread_count();
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() workers.
/// Indices are split into contiguous chunks; callers write into slot i so the
/// combined result does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ncspectral
