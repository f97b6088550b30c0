#pragma once

#include "wz/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wz {

/// Variable roles of a q-term. Its ring is (q, q^n, q^k1, ..., params): each
/// discrete variable v is tracked through the symbol named "q^v".
struct QSignature {
  std::string outer;
  std::vector<std::string> inner;
  std::vector<std::string> params;

  Vars ring() const;
  /// Ring of the discrete variables themselves (outer, inner...), used for
  /// quadratic exponents.
  Vars discrete_ring() const;
  bool is_discrete(const std::string& v) const;
  bool is_param(const std::string& v) const;
  static std::string symbol_for(const std::string& v) { return "q^" + v; }
  friend bool operator==(const QSignature&, const QSignature&) = default;
};

/// (base * q^offset; q)_length ^ exponent.
struct QPochFactor {
  RatFun base;  // in q and parameters only
  LinForm offset;
  LinForm length;
  long exponent = 1;
  friend bool operator==(const QPochFactor&, const QPochFactor&) = default;
};

/// q^exponent with an integer-valued polynomial exponent of degree <= 2 in the
/// discrete variables.
struct QPowerFactor {
  MultiPoly exponent;  // over QSignature::discrete_ring()
  friend bool operator==(const QPowerFactor&, const QPowerFactor&) = default;
};

/// base^exponent with a base in the parameters (and q).
struct GeometricFactor {
  RatFun base;
  LinForm exponent;
  friend bool operator==(const GeometricFactor&, const GeometricFactor&) = default;
};

class QHyperTerm {
 public:
  QHyperTerm() = default;
  explicit QHyperTerm(QSignature sig);

  const QSignature& signature() const { return sig_; }
  const Vars& ring() const { return ring_; }
  const Vars& discrete_ring() const { return dring_; }

  void add_qpoch(RatFun base, LinForm offset, LinForm length, long exponent);
  void add_qpower(MultiPoly exponent);
  void add_geometric(RatFun base, LinForm exponent);
  void multiply_rational(const RatFun& r);

  const std::vector<QPochFactor>& qpochs() const { return qpochs_; }
  const std::vector<QPowerFactor>& qpowers() const { return qpowers_; }
  const std::vector<GeometricFactor>& geometrics() const { return geometrics_; }
  const RatFun& rational() const { return rational_; }

  QHyperTerm with_signature(const QSignature& sig) const;

  friend bool operator==(const QHyperTerm& a, const QHyperTerm& b);

 private:
  void check_linform(const LinForm& f, bool integer_constant) const;
  void check_parametric(const RatFun& f, const char* what) const;

  QSignature sig_;
  Vars ring_;
  Vars dring_;
  std::vector<QPochFactor> qpochs_;
  std::vector<QPowerFactor> qpowers_;
  std::vector<GeometricFactor> geometrics_;
  RatFun rational_;
};

/// q^L as a rational function of (q, q^v...).
RatFun q_power(const Vars& ring, const LinForm& f);

/// K_v F / F as a rational function of (q, q^n, q^k..., params).
RatFun q_shift_quotient(const QHyperTerm& f, const std::string& v);

/// Value with all discrete variables fixed; q and parameters may be assigned
/// (by name, "q" for q) or stay symbolic. Tails of vanishing q-Pochhammer
/// denominators give 0.
RatFun q_eval_symbolic(const QHyperTerm& f, const Assignment& point);
/// Exact value at a point assigning q, every parameter and discrete variable.
BigRational q_eval_term(const QHyperTerm& f, const Assignment& point);

std::optional<SupportBox> q_support_bounds(const QHyperTerm& f, long n0);

}  // namespace wz
