#pragma once

#include "wz/linsolve.hpp"
#include "wz/ore.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wz {

/// Orders of the ansatz: N (or D_x) up to max_outer, K_i up to max_shift[i],
/// D_j up to max_diff[j]. Unknown coefficients range over the rational
/// functions in the outer variable and parameters, so coeff_degree is only
/// reported, never enforced.
struct AnsatzBounds {
  int max_outer = 1;
  std::vector<int> max_shift;
  std::vector<int> max_diff;
  int coeff_degree = 1;

  std::size_t unknowns() const;
  std::string to_string() const;
  friend bool operator==(const AnsatzBounds&, const AnsatzBounds&) = default;
};

class AnsatzTooLarge : public Error {
 public:
  AnsatzTooLarge(std::size_t size, std::size_t cap);
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
};

struct TelescopeBudget {
  std::size_t max_unknowns = 40;
  std::size_t max_steps = 64;
};

/// T = P + sum (K_i - 1) T_i + sum D_j That_j.
struct Decomposition {
  OreOperator p;
  std::vector<OreOperator> t;
  std::vector<OreOperator> t_hat;
};

/// P F = sum_i Delta_i(R_i F) + sum_j D_j(S_j F), with p[a] the coefficient
/// of N^a (or D_x^a).
struct OreCertificate {
  std::vector<MultiPoly> p;
  std::vector<RatFun> r;
  std::vector<RatFun> s;
};

struct NotFound {
  AnsatzBounds last;
  std::size_t steps = 0;
  std::string reason;
};

/// Nonzero operator within the bounds that annihilates the term, or nullopt.
/// Among the nullspace basis the operator with nonzero telescoped part is
/// preferred, then the smallest (outer order, word count, coefficient degree).
/// Throws AnsatzTooLarge when the bounds exceed `cap` unknowns.
std::optional<OreOperator> find_annihilator(const OreTerm& f, const AnsatzBounds& bounds, std::size_t cap = 40);

/// All bounds with every component >= 1 and at most `cap` unknowns, by
/// increasing unknown count, then outer order, then larger leading shift
/// orders first.
std::vector<AnsatzBounds> ansatz_schedule(const OreTerm& f, std::size_t cap = 40);

Decomposition decompose(const OreTerm& f, const OreOperator& t);
OreOperator recompose(const OreTerm& f, const Decomposition& d);

/// R_i = -(T_i F)/F and S_j = -(That_j F)/F.
OreCertificate extract_certificates(const OreTerm& f, const Decomposition& d);

/// Divides P by the gcd of its coefficients (with rational content) so its
/// top coefficient has a positive leading coefficient; R and S follow.
OreCertificate normalize_certificate(const OreTerm& f, OreCertificate c);

std::variant<OreCertificate, NotFound> telescope(const OreTerm& f, const TelescopeBudget& budget = {});

struct TelescopeCertificate {
  HyperTerm term;
  std::vector<MultiPoly> p;
  std::map<std::string, RatFun> r;
  std::map<std::string, RatFun> s;

  int order() const { return static_cast<int>(p.size()) - 1; }
  bool is_vacuous() const;
};

std::variant<TelescopeCertificate, NotFound> creative_telescope(const HyperTerm& f, const TelescopeBudget& budget = {});

/// Renders sum p[a] * op^a with op "N" or "D_x".
std::string render_operator(const std::vector<MultiPoly>& p, const std::string& op);

}  // namespace wz
