#include "ncspectral/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "ncspectral/error.hpp"
#include "ncspectral/numeric.hpp"

namespace ncspectral {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::NotUnitary: return "not unitary";
    case ErrorKind::PrecisionExhausted: return "precision exhausted";
    case ErrorKind::Guard: return "guard";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

namespace {

void check_dim(int dim) {
  if (dim < 0 || dim > kMaxDim) {
    throw Error(ErrorKind::OutOfRange,
                "lattice dimension " + std::to_string(dim) + " outside [0, " +
                    std::to_string(kMaxDim) + "]");
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorKind::Overflow, "lattice coordinate overflow in addition");
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorKind::Overflow, "lattice coordinate overflow in product");
  }
  return r;
}

}  // namespace

Point::Point(int dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<std::int64_t> coords)
    : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point::Point(std::span<const std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point Point::unit(int dim, int axis) {
  if (axis < 0 || axis >= dim) {
    throw Error(ErrorKind::OutOfRange, "unit vector axis out of range");
  }
  Point p(dim);
  p[axis] = 1;
  return p;
}

bool Point::is_zero() const noexcept {
  for (int i = 0; i < dim_; ++i) {
    if (c_[i] != 0) return false;
  }
  return true;
}

std::int64_t Point::max_norm() const noexcept {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, c_[i] < 0 ? -c_[i] : c_[i]);
  return m;
}

std::int64_t Point::norm2() const { return dot(*this); }

std::int64_t Point::dot(const Point& other) const {
  require_same_dim(*this, other);
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s = checked_add(s, checked_mul(c_[i], other.c_[i]));
  return s;
}

Point Point::operator-() const {
  Point r(dim_);
  for (int i = 0; i < dim_; ++i) r.c_[i] = checked_mul(-1, c_[i]);
  return r;
}

Point operator+(const Point& a, const Point& b) {
  require_same_dim(a, b);
  Point r(a.dim_);
  for (int i = 0; i < a.dim_; ++i) r.c_[i] = checked_add(a.c_[i], b.c_[i]);
  return r;
}

Point operator-(const Point& a, const Point& b) { return a + (-b); }

Point operator*(std::int64_t s, const Point& p) {
  Point r(p.dim_);
  for (int i = 0; i < p.dim_; ++i) r.c_[i] = checked_mul(s, p.c_[i]);
  return r;
}

bool operator==(const Point& a, const Point& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Point& a, const Point& b) noexcept {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  for (int i = 0; i < a.dim_; ++i) {
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<std::int64_t> Point::to_vector() const {
  return {c_.begin(), c_.begin() + dim_};
}

std::string Point::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint64_t>(p[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "lattice points of dimension " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
}

namespace {

template <typename Keep>
std::vector<Point> enumerate_box(int dim, std::int64_t radius, Keep keep) {
  check_dim(dim);
  std::vector<Point> out;
  if (radius < 0) return out;
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = -radius;
  if (dim == 0) {
    out.push_back(p);
    return out;
  }
  while (true) {
    if (keep(p)) out.push_back(p);
    int i = dim - 1;
    while (i >= 0 && p[i] == radius) {
      p[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++p[i];
  }
  return out;
}

}  // namespace

std::vector<Point> box_points(int dim, std::int64_t radius) {
  return enumerate_box(dim, radius, [](const Point&) { return true; });
}

std::vector<Point> ball_points(int dim, double radius) {
  if (radius < 0) return {};
  const auto r = static_cast<std::int64_t>(std::floor(radius));
  const double r2 = radius * radius * (1.0 + 1e-12);
  return enumerate_box(dim, r, [r2](const Point& p) {
    return static_cast<double>(p.norm2()) <= r2;
  });
}

// ---------------------------------------------------------------------------
// Threading

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("NCSPECTRAL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  return t == 0 ? default_thread_count() : t;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ncspectral
