#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace dinglab {

using Complex = std::complex<double>;

/// Truncated (Order,Order)-jet in the Wirtinger pair (w, wbar).
///
/// Coefficients c(i,j) store (1/i!j!) d^i_w d^j_wbar of the represented
/// function, i.e. the function equals sum c(i,j) eps^i epsbar^j with
/// eps^{Order+1} = epsbar^{Order+1} = 0. All derivatives used by the
/// geometric operators come out of this algebra; no finite differences.
template <int Order>
class Jet {
 public:
  static constexpr int kSize = Order + 1;

  Jet() { c_.fill(Complex{0.0, 0.0}); }
  explicit Jet(Complex value) : Jet() { c_[0] = value; }
  explicit Jet(double value) : Jet(Complex{value, 0.0}) {}

  /// The chart coordinate itself: w0 + eps.
  static Jet variable(Complex w0) {
    Jet j(w0);
    j.at(1, 0) = Complex{1.0, 0.0};
    return j;
  }
  /// Its conjugate as an independent variable: conj(w0) + epsbar.
  static Jet covariable(Complex w0) {
    Jet j(std::conj(w0));
    j.at(0, 1) = Complex{1.0, 0.0};
    return j;
  }

  Complex& at(int i, int j) { return c_[i * kSize + j]; }
  const Complex& at(int i, int j) const { return c_[i * kSize + j]; }

  Complex value() const { return c_[0]; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < kSize * kSize; ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < kSize * kSize; ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }
  Jet operator-() const {
    Jet r;
    for (int i = 0; i < kSize * kSize; ++i) r.c_[i] = -c_[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < kSize; ++i)
      for (int j = 0; j < kSize; ++j) {
        Complex s{0.0, 0.0};
        for (int p = 0; p <= i; ++p)
          for (int q = 0; q <= j; ++q) s += a.at(p, q) * b.at(i - p, j - q);
        r.at(i, j) = s;
      }
    return r;
  }
  friend Jet operator*(Complex s, const Jet& a) {
    Jet r;
    for (int i = 0; i < Jet::kSize * Jet::kSize; ++i) r.c_[i] = s * a.c_[i];
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return Complex(s, 0.0) * a; }
  friend Jet operator+(const Jet& a, Complex s) { Jet r = a; r.c_[0] += s; return r; }
  friend Jet operator+(const Jet& a, double s) { return a + Complex(s, 0.0); }
  friend Jet operator-(const Jet& a, double s) { return a + Complex(-s, 0.0); }

  Jet& operator+=(const Jet& b) { *this = *this + b; return *this; }
  Jet& operator-=(const Jet& b) { *this = *this - b; return *this; }
  Jet& operator*=(const Jet& b) { *this = *this * b; return *this; }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

  /// 1/x, x with nonzero constant term.
  friend Jet inverse(const Jet& x) {
    const Complex c0 = x.value();
    Jet n = (1.0 / c0) * x;
    n.c_[0] -= Complex{1.0, 0.0};
    std::array<double, 2 * Order + 1> coeffs{};
    double sign = 1.0;
    for (int m = 0; m <= 2 * Order; ++m, sign = -sign) coeffs[m] = sign;
    return (1.0 / c0) * series(n, coeffs);
  }

  friend Jet log(const Jet& x) {
    const Complex c0 = x.value();
    Jet n = (1.0 / c0) * x;
    n.c_[0] -= Complex{1.0, 0.0};
    std::array<double, 2 * Order + 1> coeffs{};
    double sign = 1.0;
    for (int m = 1; m <= 2 * Order; ++m, sign = -sign) coeffs[m] = sign / m;
    Jet r = series(n, coeffs);
    r.c_[0] += std::log(c0);
    return r;
  }

  friend Jet exp(const Jet& x) {
    Jet n = x;
    const Complex c0 = x.value();
    n.c_[0] = Complex{0.0, 0.0};
    std::array<double, 2 * Order + 1> coeffs{};
    double fact = 1.0;
    coeffs[0] = 1.0;
    for (int m = 1; m <= 2 * Order; ++m) {
      fact *= m;
      coeffs[m] = 1.0 / fact;
    }
    return std::exp(c0) * series(n, coeffs);
  }

  friend Jet conj(const Jet& a) {
    Jet r;
    for (int i = 0; i < kSize; ++i)
      for (int j = 0; j < kSize; ++j) r.at(i, j) = std::conj(a.at(j, i));
    return r;
  }

  friend Jet pow_int(const Jet& a, int n) {
    Jet r(Complex{1.0, 0.0});
    Jet base = a;
    int e = n;
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

 private:
  /// sum_m coeffs[m] * n^m, n nilpotent-safe (nonzero constant term allowed
  /// only when the series is exact at the truncation order used here).
  static Jet series(const Jet& n, const std::array<double, 2 * Order + 1>& coeffs) {
    Jet acc(Complex{1.0, 0.0});
    Jet r(Complex{coeffs[0], 0.0});
    for (int m = 1; m <= 2 * Order; ++m) {
      acc *= n;
      r += coeffs[m] * acc;
    }
    return r;
  }

  std::array<Complex, kSize * kSize> c_;
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

/// Order-(1,1) jet of a function in a chart: value, d/dw, d/dwbar, mixed.
struct Jet11 {
  Complex v{};
  Complex d_w{};
  Complex d_wbar{};
  Complex d_wwbar{};
};

inline Jet11 to_jet11(const Jet1& j) {
  return Jet11{j.at(0, 0), j.at(1, 0), j.at(0, 1), j.at(1, 1)};
}

/// (1,1)-jet of d_w d_wbar of a (2,2)-jet.
inline Jet1 mixed_derivative(const Jet2& j) {
  Jet1 r;
  r.at(0, 0) = j.at(1, 1);
  r.at(1, 0) = 2.0 * j.at(2, 1);
  r.at(0, 1) = 2.0 * j.at(1, 2);
  r.at(1, 1) = 4.0 * j.at(2, 2);
  return r;
}

/// Restriction of a (2,2)-jet to its (1,1) part.
inline Jet1 truncate11(const Jet2& j) {
  Jet1 r;
  r.at(0, 0) = j.at(0, 0);
  r.at(1, 0) = j.at(1, 0);
  r.at(0, 1) = j.at(0, 1);
  r.at(1, 1) = j.at(1, 1);
  return r;
}

}  // namespace dinglab
