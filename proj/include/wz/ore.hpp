#pragma once

#include "wz/qterm.hpp"
#include "wz/term.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace wz {

/// A monomial N^outer K^shifts D^diffs in commuting operators. The outer
/// operator is the shift N for a discrete outer variable and D_x for a
/// continuous one.
struct Word {
  int outer = 0;
  std::vector<int> shifts;
  std::vector<int> diffs;

  bool is_empty() const;
  friend auto operator<=>(const Word&, const Word&) = default;
};

/// A term as seen by operators: its ring, the symbols the operators act on,
/// and the first-order quotients. Classical shifts act by v -> v + 1, q-shifts
/// by s -> q*s on the symbol s = q^v.
///
/// Word quotients are memoized, so one instance should not be shared between
/// threads.
class OreTerm {
 public:
  explicit OreTerm(const HyperTerm& f);
  explicit OreTerm(const QHyperTerm& f);

  const Vars& ring() const { return ring_; }
  bool q_mode() const { return q_mode_; }
  bool outer_continuous() const { return outer_continuous_; }
  const std::string& outer_name() const { return outer_name_; }
  std::size_t outer_symbol() const { return outer_symbol_; }
  const std::vector<std::string>& shift_names() const { return shift_names_; }
  const std::vector<std::string>& diff_names() const { return diff_names_; }
  const std::vector<std::size_t>& shift_symbols() const { return shift_symbols_; }
  const std::vector<std::size_t>& diff_symbols() const { return diff_symbols_; }
  /// Ring indices of all inner symbols (shift then diff).
  std::vector<std::size_t> inner_symbols() const;

  /// sigma: the substitution an inner or outer shift applies to a coefficient.
  RatFun shift(const RatFun& f, std::size_t symbol) const;
  /// Inverse of shift.
  RatFun unshift(const RatFun& f, std::size_t symbol) const;
  const RatFun& outer_quotient() const { return outer_q_; }
  const RatFun& shift_quotient(std::size_t i) const { return shift_q_[i]; }
  const RatFun& diff_quotient(std::size_t j) const { return diff_q_[j]; }

  /// (w F) / F.
  const RatFun& word_quotient(const Word& w) const;
  Word empty_word() const;

  /// Operator names used in rendering: "N" or "D_x", "K_k", "D_u".
  std::string outer_operator_name() const;
  std::string shift_operator_name(std::size_t i) const { return "K_" + shift_names_[i]; }
  std::string diff_operator_name(std::size_t j) const { return "D_" + diff_names_[j]; }

 private:
  Vars ring_;
  bool q_mode_ = false;
  bool outer_continuous_ = false;
  std::string outer_name_;
  std::size_t outer_symbol_ = 0;
  std::vector<std::string> shift_names_, diff_names_;
  std::vector<std::size_t> shift_symbols_, diff_symbols_;
  RatFun outer_q_;
  std::vector<RatFun> shift_q_, diff_q_;
  mutable std::map<Word, RatFun> cache_;
};

/// Sum of words with coefficients over the term ring that are free of the
/// inner symbols.
struct OreOperator {
  Vars ring;
  std::map<Word, MultiPoly> terms;  // no zero coefficients

  bool is_zero() const { return terms.empty(); }
  int outer_order() const;
  void add(const Word& w, const MultiPoly& c);
  std::string to_string(const OreTerm& term) const;
  friend bool operator==(const OreOperator& a, const OreOperator& b) { return a.terms == b.terms; }
};

/// (T F) / F.
RatFun apply_quotient(const OreTerm& term, const OreOperator& op);

}  // namespace wz
