#pragma once

#include "wz/certifier.hpp"
#include "wz/qterm.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace wz {

/// P(N, q^n) F = sum_i Delta_{k_i}(R_i F) for a q-hypergeometric term, with
/// p[a] the coefficient of N^a over (q, q^n, parameters).
struct QTelescopeCertificate {
  QHyperTerm term;
  std::vector<MultiPoly> p;
  std::map<std::string, RatFun> r;

  int order() const { return static_cast<int>(p.size()) - 1; }
  bool is_vacuous() const;
};

std::variant<QTelescopeCertificate, NotFound> q_creative_telescope(const QHyperTerm& f,
                                                                   const TelescopeBudget& budget = {});

/// Certificate in operator form; absent R entries are zero. Throws
/// "term/certificate mismatch" when the terms or variables disagree.
OreCertificate to_ore_certificate(const OreTerm& f, const QHyperTerm& term, const QTelescopeCertificate& c);

MultiPoly q_residual(const QHyperTerm& f, const QTelescopeCertificate& c);
Verdict q_verify(const QHyperTerm& f, const QTelescopeCertificate& c);

}  // namespace wz
