#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wz {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Base class for every error raised by the engine. The message is the
/// user-facing diagnostic.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered list of symbol names shared by polynomials living in the same ring.
using Vars = std::shared_ptr<const std::vector<std::string>>;

Vars make_vars(std::vector<std::string> names);
bool same_vars(const Vars& a, const Vars& b);
/// Position of `name` in `vars`, or nullopt.
std::optional<std::size_t> var_index(const Vars& vars, std::string_view name);

using Exponents = std::vector<std::uint32_t>;

/// Graded lexicographic order, larger monomials first.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent vectors under the graded
/// lexicographic order, with zero coefficients never stored, so structural
/// and mathematical equality coincide.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, BigRational, GrlexGreater>;

  MultiPoly();
  explicit MultiPoly(Vars vars);
  MultiPoly(Vars vars, const BigRational& c);

  static MultiPoly variable(const Vars& vars, std::size_t index);
  static MultiPoly variable(const Vars& vars, std::string_view name);
  static MultiPoly monomial(const Vars& vars, Exponents exps, const BigRational& c);

  const Vars& vars() const { return vars_; }
  std::size_t nvars() const { return vars_->size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  /// Constant term (coefficient of the zero monomial).
  BigRational constant_term() const;

  int total_degree() const;
  int degree(std::size_t var) const;
  bool depends_on(std::size_t var) const;

  const Exponents& leading_monomial() const;
  const BigRational& leading_coeff() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const BigRational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const BigRational& c) { return a *= c; }
  friend MultiPoly operator*(const BigRational& c, MultiPoly a) { return a *= c; }

  MultiPoly pow(unsigned e) const;

  BigRational evaluate(std::span<const BigRational> point) const;
  /// Replaces the listed variables (by index) with polynomials over the same ring.
  MultiPoly substitute(const std::map<std::size_t, MultiPoly>& map) const;
  MultiPoly derivative(std::size_t var) const;
  /// Re-expresses the polynomial over another ring, matching symbols by name.
  MultiPoly rebase(const Vars& target) const;

  /// Positive rational c such that p / c has coprime integer coefficients.
  BigRational content() const;
  /// p / content, with positive leading coefficient.
  MultiPoly primitive() const;
  /// Coefficients of p viewed as univariate in `var`; entry i holds the
  /// coefficient of var^i (still over the full ring, free of var).
  std::vector<MultiPoly> coefficients_in(std::size_t var) const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void check_same(const MultiPoly& o) const;

  Vars vars_;
  TermMap terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<MultiPoly> try_exact_div(const MultiPoly& a, const MultiPoly& b);
/// Exact quotient; throws "inexact division" when b does not divide a.
MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b);
/// Primitive gcd with positive leading coefficient (gcd(0, 0) = 0).
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

enum class PolyOp { add, sub, mul, exact_div, gcd };
MultiPoly poly_ops(const MultiPoly& a, const MultiPoly& b, PolyOp op);

std::string to_string(const BigRational& q);
/// Parses "p", "-p", "+p" or "p/q" into a canonical rational.
BigRational parse_rational(std::string_view text);

}  // namespace wz
