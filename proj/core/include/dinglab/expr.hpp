#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dinglab/chart.hpp"
#include "dinglab/jet.hpp"

namespace dinglab {

/// Real polynomial in the ambient sphere coordinates (x1, x2, x3).
/// Closed under ring operations; jets in either chart come from exact
/// substitution of the chart's ambient-coordinate jets.
class SmoothFunction {
 public:
  struct Term {
    std::array<int, 3> e{0, 0, 0};
    double coeff = 0.0;
  };

  SmoothFunction() = default;
  static SmoothFunction constant(double c);
  static SmoothFunction coordinate(int axis);  // 0,1,2 -> x1,x2,x3

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  double value(const std::array<double, 3>& x) const;
  double value(const ChartPoint& p) const { return value(ambient(p)); }

  template <int Order>
  Jet<Order> jet(const ChartPoint& p) const;

  friend SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b);
  friend SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b);
  friend SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b);
  friend SmoothFunction operator*(double s, const SmoothFunction& a);
  SmoothFunction pow(int n) const;

 private:
  void add_term(const std::array<int, 3>& e, double coeff);
  void normalize();

  std::vector<Term> terms_;  // sorted by exponent triple, nonzero coeffs
};

/// Maximum total degree accepted by the parser.
inline constexpr int kMaxExprDegree = 16;

/// Grammar: identifiers x1,x2,x3; decimal literals; + - * ^ (nonnegative
/// integer exponents); parentheses; whitespace insensitive.
/// Throws ParseError with a byte offset on malformed input or degree > 16.
SmoothFunction parse_expr(std::string_view text);

extern template Jet<1> SmoothFunction::jet<1>(const ChartPoint&) const;
extern template Jet<2> SmoothFunction::jet<2>(const ChartPoint&) const;

}  // namespace dinglab
