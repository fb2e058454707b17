#include "dinglab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "dinglab/errors.hpp"

namespace dinglab {

SmoothFunction SmoothFunction::constant(double c) {
  SmoothFunction f;
  f.add_term({0, 0, 0}, c);
  f.normalize();
  return f;
}

SmoothFunction SmoothFunction::coordinate(int axis) {
  SmoothFunction f;
  std::array<int, 3> e{0, 0, 0};
  e[axis] = 1;
  f.add_term(e, 1.0);
  return f;
}

int SmoothFunction::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.e[0] + t.e[1] + t.e[2]);
  return d;
}

double SmoothFunction::value(const std::array<double, 3>& x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < t.e[a]; ++i) m *= x[a];
    s += m;
  }
  return s;
}

template <int Order>
Jet<Order> SmoothFunction::jet(const ChartPoint& p) const {
  const auto x = ambient_jets<Order>(p);
  // Power tables up to the max exponent per axis.
  std::array<int, 3> maxe{0, 0, 0};
  for (const auto& t : terms_)
    for (int a = 0; a < 3; ++a) maxe[a] = std::max(maxe[a], t.e[a]);
  std::array<std::vector<Jet<Order>>, 3> pw;
  for (int a = 0; a < 3; ++a) {
    pw[a].resize(maxe[a] + 1);
    pw[a][0] = Jet<Order>(Complex{1.0, 0.0});
    for (int i = 1; i <= maxe[a]; ++i) pw[a][i] = pw[a][i - 1] * x[a];
  }
  Jet<Order> s;
  for (const auto& t : terms_)
    s += t.coeff * (pw[0][t.e[0]] * pw[1][t.e[1]] * pw[2][t.e[2]]);
  return s;
}

template Jet<1> SmoothFunction::jet<1>(const ChartPoint&) const;
template Jet<2> SmoothFunction::jet<2>(const ChartPoint&) const;

void SmoothFunction::add_term(const std::array<int, 3>& e, double coeff) {
  terms_.push_back(Term{e, coeff});
}

void SmoothFunction::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.e < b.e; });
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().e == t.e)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b) {
  SmoothFunction r = a;
  for (const auto& t : b.terms_) r.add_term(t.e, t.coeff);
  r.normalize();
  return r;
}

SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b) {
  return a + (-1.0 * b);
}

SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b) {
  SmoothFunction r;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_)
      r.add_term({ta.e[0] + tb.e[0], ta.e[1] + tb.e[1], ta.e[2] + tb.e[2]},
                 ta.coeff * tb.coeff);
  r.normalize();
  return r;
}

SmoothFunction operator*(double s, const SmoothFunction& a) {
  SmoothFunction r = a;
  for (auto& t : r.terms_) t.coeff *= s;
  r.normalize();
  return r;
}

SmoothFunction SmoothFunction::pow(int n) const {
  SmoothFunction r = constant(1.0);
  for (int i = 0; i < n; ++i) r = r * (*this);
  return r;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  SmoothFunction parse() {
    SmoothFunction f = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    if (f.degree() > kMaxExprDegree)
      throw ParseError("polynomial degree exceeds " + std::to_string(kMaxExprDegree), 0);
    return f;
  }

 private:
  SmoothFunction expr() {
    SmoothFunction f = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        f = f + term();
      else if (accept('-'))
        f = f - term();
      else
        return f;
    }
  }

  SmoothFunction term() {
    SmoothFunction f = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        f = f * factor();
      else
        return f;
    }
  }

  SmoothFunction factor() {
    skip_ws();
    if (accept('-')) return -1.0 * factor();
    SmoothFunction base = atom();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("expected nonnegative integer exponent", at);
      long n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        n = n * 10 + (text_[pos_] - '0');
        if (n > 1000) throw ParseError("exponent too large", at);
        ++pos_;
      }
      if (base.degree() * n > kMaxExprDegree)
        throw ParseError("polynomial degree exceeds " + std::to_string(kMaxExprDegree), at);
      return base.pow(static_cast<int>(n));
    }
    return base;
  }

  SmoothFunction atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SmoothFunction f = expr();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return f;
    }
    if (c == 'x') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] >= '1' && text_[pos_ + 1] <= '3') {
        const int axis = text_[pos_ + 1] - '1';
        pos_ += 2;
        return SmoothFunction::coordinate(axis);
      }
      throw ParseError("unknown identifier (expected x1, x2 or x3)", pos_);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.data() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw ParseError("malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      return SmoothFunction::constant(v);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SmoothFunction parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace dinglab
