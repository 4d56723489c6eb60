#pragma once

#include <complex>
#include <type_traits>

namespace kpb {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
constexpr T conj_if_complex(const T& v) {
  if constexpr (is_complex<T>::value) {
    return std::conj(v);
  } else {
    return v;
  }
}

template <typename T>
struct Vector2 {
  T x0{};
  T x1{};

  friend constexpr Vector2 operator+(const Vector2& a, const Vector2& b) { return {a.x0 + b.x0, a.x1 + b.x1}; }
  friend constexpr Vector2 operator-(const Vector2& a, const Vector2& b) { return {a.x0 - b.x0, a.x1 - b.x1}; }
  friend constexpr Vector2 operator*(const T& s, const Vector2& v) { return {s * v.x0, s * v.x1}; }
};

/// Inner product a^dagger b (conjugates the left operand).
template <typename T>
constexpr T dot_adjoint(const Vector2<T>& a, const Vector2<T>& b) {
  return conj_if_complex(a.x0) * b.x0 + conj_if_complex(a.x1) * b.x1;
}

/// 2x2 matrix stored row-major as [[m00, m01], [m10, m11]].
template <typename T>
struct Matrix2 {
  T m00{};
  T m01{};
  T m10{};
  T m11{};

  static constexpr Matrix2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static constexpr Matrix2 zero() { return {}; }

  constexpr T trace() const { return m00 + m11; }
  constexpr T det() const { return m00 * m11 - m01 * m10; }

  constexpr Matrix2 transpose() const { return {m00, m10, m01, m11}; }
  constexpr Matrix2 adjoint() const {
    return {conj_if_complex(m00), conj_if_complex(m10), conj_if_complex(m01), conj_if_complex(m11)};
  }

  /// Inverse via the adjugate; caller guarantees det() != 0.
  constexpr Matrix2 inverse() const {
    const T d = det();
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
  }

  friend constexpr Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
  }
  friend constexpr Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
  }
  friend constexpr Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
  }
  friend constexpr Matrix2 operator*(const T& s, const Matrix2& a) {
    return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
  }
  friend constexpr Vector2<T> operator*(const Matrix2& a, const Vector2<T>& v) {
    return {a.m00 * v.x0 + a.m01 * v.x1, a.m10 * v.x0 + a.m11 * v.x1};
  }
  friend constexpr bool operator==(const Matrix2&, const Matrix2&) = default;
};

using RealMatrix2 = Matrix2<double>;
using ComplexMatrix2 = Matrix2<std::complex<double>>;
using ComplexVector2 = Vector2<std::complex<double>>;

inline ComplexMatrix2 to_complex(const RealMatrix2& m) { return {m.m00, m.m01, m.m10, m.m11}; }

/// Largest absolute entry difference.
template <typename T>
double max_abs_diff(const Matrix2<T>& a, const Matrix2<T>& b) {
  using std::abs;
  const auto d = a - b;
  double r = abs(d.m00);
  for (double v : {static_cast<double>(abs(d.m01)), static_cast<double>(abs(d.m10)),
                   static_cast<double>(abs(d.m11))}) {
    r = v > r ? v : r;
  }
  return r;
}

template <typename T>
double max_abs_entry(const Matrix2<T>& a) {
  return max_abs_diff(a, Matrix2<T>::zero());
}

}  // namespace kpb
