#pragma once

#include "wz/multipoly.hpp"

#include <map>
#include <string>

namespace wz {

/// Reduced quotient of two polynomials over a shared ring.
///
/// Canonical form: numerator and denominator are coprime, both carry integer
/// coefficients with no common integer factor, and the denominator's leading
/// coefficient (graded lex) is positive. Zero is 0/1.
class RatFun {
 public:
  RatFun();
  explicit RatFun(Vars vars);
  explicit RatFun(MultiPoly num);
  RatFun(MultiPoly num, MultiPoly den);

  static RatFun constant(const Vars& vars, const BigRational& c);
  static RatFun variable(const Vars& vars, std::string_view name);

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  const Vars& vars() const { return num_.vars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool depends_on(std::size_t var) const { return num_.depends_on(var) || den_.depends_on(var); }

  RatFun operator-() const;
  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b);
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator/(const RatFun& a, const RatFun& b);
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

  RatFun inverse() const;
  RatFun pow(long e) const;
  RatFun derivative(std::size_t var) const;

  /// Applies a variable-to-polynomial substitution; throws "degenerate
  /// substitution" if the denominator vanishes identically.
  RatFun substitute(const std::map<std::size_t, MultiPoly>& map) const;
  RatFun substitute(const std::map<std::string, MultiPoly>& map) const;
  /// Substitutes rational values for some variables (by index).
  RatFun specialize(const std::map<std::size_t, BigRational>& values) const;

  /// Throws "pole" if the denominator vanishes at the point.
  BigRational evaluate(std::span<const BigRational> point) const;
  RatFun rebase(const Vars& target) const;

  friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

  std::string to_string() const;

 private:
  struct Raw {};
  RatFun(MultiPoly num, MultiPoly den, Raw) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();
  void normalize_scale();
  static RatFun reduced(MultiPoly num, MultiPoly den);

  MultiPoly num_;
  MultiPoly den_;
};

enum class RatOp { add, sub, mul, div };
RatFun ratfun_ops(const RatFun& a, const RatFun& b, RatOp op);

}  // namespace wz
