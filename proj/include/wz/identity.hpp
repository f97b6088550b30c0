#pragma once

#include "wz/certifier.hpp"
#include "wz/q_engine.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wz {

/// sum/int over the inner variables of lhs = sum of the rhs terms, each summed
/// over its own inner variables (a closed form when it has none). All terms
/// share the outer variable; rhs symbols must appear in the lhs ring.
struct IdentityStatement {
  HyperTerm lhs;
  std::vector<HyperTerm> rhs;
  friend bool operator==(const IdentityStatement&, const IdentityStatement&) = default;
};

struct QIdentityStatement {
  QHyperTerm lhs;
  std::vector<QHyperTerm> rhs;
  friend bool operator==(const QIdentityStatement&, const QIdentityStatement&) = default;
};

/// P(N, n) f = 0 (or P(D_x, x) f = 0) for the sum f of the term.
struct Recurrence {
  std::vector<MultiPoly> p;
  std::string outer;
  bool continuous = false;

  int order() const { return static_cast<int>(p.size()) - 1; }
  std::string operator_name() const { return continuous ? "D_" + outer : "N"; }
  std::string to_string() const;
};

/// Values of both sides at an outer value (discrete), or Taylor coefficients
/// of index `index` at `point` (continuous outer).
struct InitialValue {
  long index = 0;
  std::string lhs;
  std::string rhs;
};

struct Proof {
  std::optional<TelescopeCertificate> certificate;
  std::optional<QTelescopeCertificate> q_certificate;
  Recurrence recurrence;
  std::vector<InitialValue> initial;
  long point = 0;              // expansion point for a continuous outer variable
  bool rhs_symbolic = false;   // rhs annihilated symbolically (else checked on a range)
  long checked_upto = 0;       // exact agreement of both sides on [0, checked_upto]
  std::string text;
};

struct Refutation {
  long index = 0;  // outer value, or Taylor index for a continuous outer
  std::string lhs;
  std::string rhs;
  std::string text;
};

using ProofResult = std::variant<Proof, Refutation, NotFound>;

/// Recurrence for f(n) = sum_k F(n, k). Checks compact support and that each
/// G_i = R_i F is finite on the support and vanishes on the boundary of the
/// summation box, for n in [0, upto] (default order + 10); the recurrence is
/// then checked on the box sums. Errors: "compact-support hypothesis fails",
/// "certificate pole on support: ...".
Recurrence recurrence_for_sum(const TelescopeCertificate& cert, const HyperTerm& f, long upto = -1);
Recurrence recurrence_for_sum(const QTelescopeCertificate& cert, const QHyperTerm& f, long upto = -1);

ProofResult prove_identity(const IdentityStatement& stmt, const TelescopeBudget& budget = {});
ProofResult prove_identity(const QIdentityStatement& stmt, const TelescopeBudget& budget = {});

struct NumericRow {
  long outer = 0;
  BigRational lhs;
  BigRational rhs;
  bool equal() const { return lhs == rhs; }
};

struct NumericReport {
  std::vector<NumericRow> rows;
  bool all_equal() const;
  std::string to_string() const;
};

/// Exact values of both sides for outer in [lo, hi] with every parameter (and
/// q) assigned. Errors: "assign parameters for numeric check".
NumericReport numeric_check(const IdentityStatement& stmt, long lo, long hi, const Assignment& params = {});
NumericReport numeric_check(const QIdentityStatement& stmt, long lo, long hi, const Assignment& params = {});

struct NotApplicable {
  std::vector<MultiPoly> p;
  std::string reason;
};

/// F' = lhs / rhs for a single closed-form rhs; a WZ tuple when the operator
/// found for F' is a unit multiple of N - 1 (D_x for a continuous outer).
/// Error: "cannot normalize by zero right side".
std::variant<WZTuple, NotApplicable> to_wz_tuple(const IdentityStatement& stmt, const TelescopeBudget& budget = {});

/// Sum of the tuple relation over every variable except `keep`.
///
/// keep = outer: sum_k F is independent of n, so sum_k F equals its value at
/// n = 0 (a closed form when that sum evaluates). keep = k_i: summing over
/// n >= 0 and the other inner variables gives sum Delta_{k_i}(G_i F) =
/// -sum F(0, k), assuming F(n, k) -> 0 as n -> infinity; keep = y_j is the
/// same with D_{y_j}(H_j F). There the outer variable becomes an inner one,
/// summed from 0 (`from_zero`). Error: "unknown variable".
struct Companion {
  WZTuple tuple;
  std::string keep;
  IdentityStatement statement;
  std::string from_zero;
  std::string text;
};
Companion companion(const WZTuple& t, const std::string& keep);

/// Partial sums over n in [0, upto] of the lhs of a companion with a discrete
/// keep at keep = value, and the value of its right side. Needs a purely
/// discrete tuple.
struct PartialSums {
  std::vector<BigRational> sums;
  BigRational limit;
};
PartialSums companion_partial_sums(const Companion& c, long value, long upto, const Assignment& params = {});

/// Two lines: the certified relation divided by F, then how the identity
/// follows. Flags "vacuous" certificates.
std::string proof_text(const Proof& p);
std::string certificate_text(const HyperTerm& f, const TelescopeCertificate& c);
std::string certificate_text(const QHyperTerm& f, const QTelescopeCertificate& c);

/// Signature of a closed form in the outer variable of `sig`.
TermSignature closed_signature(const TermSignature& sig);
QSignature closed_signature(const QSignature& sig);

}  // namespace wz
