#pragma once

#include "wz/telescoper.hpp"

#include <map>
#include <string>

namespace wz {

struct Verdict {
  bool valid = false;
  MultiPoly residual;  // zero iff valid
  std::string trace;   // two lines
};

/// Multipliers with Delta_n F = sum_i Delta_{k_i}(G_i F) + sum_j D_{y_j}(H_j F),
/// the WZ-pair sign (D_x F in place of Delta_n F for a continuous outer
/// variable). A certificate with P = N - 1 gives G_i = R_i, H_j = S_j.
struct WZTuple {
  HyperTerm f;
  std::map<std::string, RatFun> g;
  std::map<std::string, RatFun> h;
};

/// Numerator of P F / F - sum_i Delta_i(R_i F) / F - sum_j D_j(S_j F) / F.
MultiPoly residual(const OreTerm& f, const OreCertificate& c);
Verdict verify(const OreTerm& f, const OreCertificate& c);

/// Certificate in operator form; absent R/S entries are zero. Throws
/// "term/certificate mismatch" when the terms or variables disagree.
OreCertificate to_ore_certificate(const OreTerm& f, const HyperTerm& term, const TelescopeCertificate& c);

MultiPoly residual(const HyperTerm& f, const TelescopeCertificate& c);
Verdict verify(const HyperTerm& f, const TelescopeCertificate& c);
Verdict verify_wz_tuple(const WZTuple& t);

}  // namespace wz
