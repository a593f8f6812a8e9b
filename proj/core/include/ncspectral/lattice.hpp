#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ncspectral {

inline constexpr int kMaxDim = 8;

/// A point of Z^n with n <= kMaxDim, stored inline.
///
/// Arithmetic is overflow-checked: adding two points whose coordinates would
/// wrap throws Error{Overflow} instead of silently producing garbage.
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<std::int64_t> coords);
  explicit Point(std::span<const std::int64_t> coords);

  static Point zero(int dim) { return Point(dim); }
  static Point unit(int dim, int axis);

  int dim() const noexcept { return dim_; }
  std::int64_t operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const noexcept;
  std::int64_t max_norm() const noexcept;
  std::int64_t norm2() const;  // checked sum of squares
  std::int64_t dot(const Point& other) const;

  Point operator-() const;
  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(std::int64_t s, const Point& p);

  friend bool operator==(const Point& a, const Point& b) noexcept;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) noexcept;

  std::vector<std::int64_t> to_vector() const;
  std::string to_string() const;

 private:
  std::array<std::int64_t, kMaxDim> c_{};
  int dim_ = 0;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

void require_same_dim(const Point& a, const Point& b);

/// All points with |k|_inf <= radius, lexicographically sorted.
std::vector<Point> box_points(int dim, std::int64_t radius);

/// All points with |k|_2 <= radius, lexicographically sorted.
std::vector<Point> ball_points(int dim, double radius);

}  // namespace ncspectral
