#pragma once

#include "wz/ratfun.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wz {

/// Rational constant plus a rational combination of parameters.
struct Affine {
  BigRational constant = 0;
  std::map<std::string, BigRational> params;  // no zero entries

  bool is_rational() const { return params.empty(); }
  bool is_integer() const { return params.empty() && constant.get_den() == 1; }

  Affine& operator+=(const Affine& o);
  Affine& operator*=(const BigRational& c);
  friend Affine operator+(Affine a, const Affine& b) { return a += b; }
  friend Affine operator-(Affine a) { return a *= -1; }
  friend bool operator==(const Affine&, const Affine&) = default;
  friend std::weak_ordering operator<=>(const Affine& a, const Affine& b) {
    if (auto c = a.params <=> b.params; c != 0) return c;
    return cmp(a.constant, b.constant) <=> 0;
  }

  MultiPoly to_poly(const Vars& ring) const;
};

/// Integer-linear form in the discrete variables with an affine constant.
/// Discrete coefficients are integers; zero coefficients are never stored.
struct LinForm {
  std::map<std::string, long> coeffs;
  Affine constant;

  static LinForm of_constant(const BigRational& c);
  static LinForm of_variable(const std::string& v, long c = 1);

  long coeff(const std::string& v) const;
  bool is_constant() const { return coeffs.empty(); }

  LinForm& operator+=(const LinForm& o);
  LinForm& operator*=(long c);
  friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
  friend LinForm operator-(LinForm a, const LinForm& b) { return a += (b * -1); }
  friend LinForm operator*(LinForm a, long c) { return a *= c; }
  friend LinForm operator-(LinForm a) { return a *= -1; }
  friend bool operator==(const LinForm&, const LinForm&) = default;
  friend std::weak_ordering operator<=>(const LinForm& a, const LinForm& b) {
    if (auto c = a.coeffs <=> b.coeffs; c != 0) return c;
    return a.constant <=> b.constant;
  }

  /// Value once every discrete variable is fixed (missing ones count as 0).
  Affine evaluate(const std::map<std::string, BigInt>& discrete) const;
  MultiPoly to_poly(const Vars& ring) const;
};

/// Variable roles of a term. The rational-function ring of the term lists the
/// outer variable, then inner discrete, inner continuous, then parameters.
struct TermSignature {
  std::string outer;
  bool outer_continuous = false;
  std::vector<std::string> inner_discrete;
  std::vector<std::string> inner_continuous;
  std::vector<std::string> params;

  Vars ring() const;
  bool is_discrete(const std::string& v) const;
  bool is_continuous(const std::string& v) const;
  bool is_param(const std::string& v) const;
  bool declares(const std::string& v) const;
  friend bool operator==(const TermSignature&, const TermSignature&) = default;
};

/// Gamma(arg)^exponent. factorial(x) is stored as Gamma(x + 1).
struct GammaFactor {
  LinForm arg;
  long exponent = 1;
  friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
};

/// base^exponent with a base free of discrete variables.
struct PowerFactor {
  RatFun base;
  LinForm exponent;
  friend bool operator==(const PowerFactor&, const PowerFactor&) = default;
};

/// exp(argument) with an argument free of discrete variables.
struct ExpFactor {
  RatFun argument;
  friend bool operator==(const ExpFactor&, const ExpFactor&) = default;
};

/// Proper-hypergeometric / hyperexponential term: a product of gamma, power
/// and exponential factors times a rational function.
class HyperTerm {
 public:
  HyperTerm() = default;
  explicit HyperTerm(TermSignature sig);

  const TermSignature& signature() const { return sig_; }
  const Vars& ring() const { return ring_; }

  void add_gamma(LinForm arg, long exponent);
  void add_power(RatFun base, LinForm exponent);
  void add_exp(RatFun argument);
  void multiply_rational(const RatFun& r);

  const std::vector<GammaFactor>& gammas() const { return gammas_; }
  const std::vector<PowerFactor>& powers() const { return powers_; }
  const std::vector<ExpFactor>& exps() const { return exps_; }
  const RatFun& rational() const { return rational_; }

  /// Same factors re-expressed under a signature that declares every symbol
  /// this term uses.
  HyperTerm with_signature(const TermSignature& sig) const;
  /// Product of this term and the reciprocal of `other` (other's factors are
  /// appended with negated exponents); other must fit this signature.
  HyperTerm divided_by(const HyperTerm& other) const;
  /// Product of this term with a rational multiplier.
  HyperTerm times(const RatFun& r) const;
  /// Term with the discrete variable v fixed to `value` (v dropped from the
  /// signature's inner variables if present there).
  HyperTerm substitute_discrete(const std::string& v, long value, const TermSignature& target) const;

  friend bool operator==(const HyperTerm& a, const HyperTerm& b);

 private:
  void check_linform(const LinForm& f) const;
  void check_free_of_discrete(const RatFun& f, const char* what) const;

  TermSignature sig_;
  Vars ring_;
  std::vector<GammaFactor> gammas_;
  std::vector<PowerFactor> powers_;
  std::vector<ExpFactor> exps_;
  RatFun rational_;
};

using Assignment = std::map<std::string, BigRational>;

/// Exact value of a term: cofactor * exp(exp_argument).
struct TermValue {
  BigRational cofactor;
  BigRational exp_argument;
};

/// Symbolic value in the symbols left unassigned.
struct SymbolicValue {
  RatFun cofactor;
  RatFun exp_argument;
};

RatFun shift_quotient(const HyperTerm& f, const std::string& v);
RatFun derivative_quotient(const HyperTerm& f, const std::string& y);

/// One operator of a word: "N" (or the outer derivative), a shift K_v, or a
/// derivative D_y.
struct WordOp {
  enum class Kind { outer, shift, diff } kind;
  std::string var;  // unused for outer
};
/// Quotient (w F) / F for a word applied right-to-left.
RatFun word_quotient(const HyperTerm& f, const std::vector<WordOp>& word);

/// Exact value at a point assigning every symbol of the term.
TermValue eval_term(const HyperTerm& f, const Assignment& point);
/// Value with every discrete variable fixed; continuous variables and
/// parameters may stay symbolic.
SymbolicValue eval_symbolic(const HyperTerm& f, const Assignment& point);

/// Integer box [lo, hi] per inner discrete variable; lo > hi means empty.
struct SupportBox {
  std::vector<std::string> vars;
  std::vector<long> lo;
  std::vector<long> hi;
  bool empty() const;
  bool contains(const std::vector<long>& p) const;
};

/// Box outside which the term vanishes for outer value n0, or nullopt when
/// the vanishing denominator factors do not bound every inner variable.
std::optional<SupportBox> support_bounds(const HyperTerm& f, long n0);

/// A linear constraint sum(coeffs * vars) + constant >= 0 on integers.
struct LatticeConstraint {
  std::map<std::string, long> coeffs;
  long constant = 0;
};
/// Bounding box of the integer points satisfying all constraints, by interval
/// propagation; nullopt when some variable stays unbounded.
std::optional<SupportBox> propagate_box(const std::vector<std::string>& vars,
                                        const std::vector<LatticeConstraint>& constraints);

}  // namespace wz
