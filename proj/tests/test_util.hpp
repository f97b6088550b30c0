#pragma once

#include "wz/ratfun.hpp"

#include <random>
#include <vector>

namespace wz::testing {

inline BigRational random_rational(std::mt19937_64& rng, int range = 9, int den_range = 4) {
  std::uniform_int_distribution<int> num(-range, range), den(1, den_range);
  BigRational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline MultiPoly random_poly(std::mt19937_64& rng, const Vars& vars, int max_deg, int max_terms = 5) {
  MultiPoly p(vars);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coef(-6, 6);
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Exponents e(vars->size(), 0);
    int budget = std::uniform_int_distribution<int>(0, max_deg)(rng);
    for (int d = 0; d < budget; ++d) ++e[std::uniform_int_distribution<std::size_t>(0, vars->size() - 1)(rng)];
    p += MultiPoly::monomial(vars, e, coef(rng));
  }
  return p;
}

inline MultiPoly random_nonzero_poly(std::mt19937_64& rng, const Vars& vars, int max_deg, int max_terms = 5) {
  for (;;) {
    MultiPoly p = random_poly(rng, vars, max_deg, max_terms);
    if (!p.is_zero()) return p;
  }
}

inline std::vector<BigRational> random_point(std::mt19937_64& rng, std::size_t n) {
  std::vector<BigRational> pt;
  for (std::size_t i = 0; i < n; ++i) pt.push_back(random_rational(rng, 20, 7));
  return pt;
}

}  // namespace wz::testing

#include "wz/qterm.hpp"
#include "wz/term.hpp"

namespace wz::testing {

inline LinForm lin(std::initializer_list<std::pair<const char*, long>> coeffs, long constant = 0) {
  LinForm f = LinForm::of_constant(constant);
  for (const auto& [v, c] : coeffs) f += LinForm::of_variable(v, c);
  return f;
}

/// Multiplies t by binom(top, bottom)^e as gamma factors.
inline void add_binom(HyperTerm& t, const LinForm& top, const LinForm& bottom, long e = 1) {
  t.add_gamma(top + LinForm::of_constant(1), e);
  t.add_gamma(bottom + LinForm::of_constant(1), -e);
  t.add_gamma(top - bottom + LinForm::of_constant(1), -e);
}

/// Multiplies t by qbin(top, bottom)^e as q-Pochhammer factors (q; q)_L.
inline void add_qbin(QHyperTerm& t, const LinForm& top, const LinForm& bottom, long e = 1) {
  RatFun one = RatFun::constant(t.ring(), 1);
  LinForm c1 = LinForm::of_constant(1);
  t.add_qpoch(one, c1, top, e);
  t.add_qpoch(one, c1, bottom, -e);
  t.add_qpoch(one, c1, top - bottom, -e);
}

inline TermSignature discrete_sig(std::string outer, std::vector<std::string> inner,
                                  std::vector<std::string> params = {}) {
  TermSignature s;
  s.outer = std::move(outer);
  s.inner_discrete = std::move(inner);
  s.params = std::move(params);
  return s;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// Gaussian binomial by the q-Pascal rule, exact at a rational q.
inline BigRational qbinomial(long n, long k, const BigRational& q) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::vector<std::vector<BigRational>> c(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) {
    c[i].assign(static_cast<std::size_t>(i + 1), 0);
    c[i][0] = c[i][i] = 1;
    BigRational qk = 1;
    for (long j = 1; j < i; ++j) {
      qk *= q;
      c[i][j] = c[i - 1][j - 1] + qk * c[i - 1][j];
    }
  }
  return c[n][k];
}

}  // namespace wz::testing

namespace wz::testing {

/// The Hille-Hardy integrand in (x; m; u) with parameters alpha, y, n.
inline HyperTerm hille_hardy_term() {
  TermSignature s;
  s.outer = "x";
  s.outer_continuous = true;
  s.inner_discrete = {"m"};
  s.inner_continuous = {"u"};
  s.params = {"alpha", "y", "n"};
  HyperTerm t(s);
  const Vars& r = t.ring();
  RatFun one = RatFun::constant(r, 1);
  RatFun x = RatFun::variable(r, "x"), y = RatFun::variable(r, "y"), u = RatFun::variable(r, "u");
  LinForm alpha;
  alpha.constant.params["alpha"] = 1;
  LinForm n;
  n.constant.params["n"] = 1;
  t.add_power(one - u, -alpha - LinForm::of_constant(1));
  t.add_exp(-(x + y) * u / (one - u));
  t.add_power(x * y * u / ((one - u) * (one - u)), LinForm::of_variable("m"));
  t.add_power(u, -n - LinForm::of_constant(1));
  t.add_gamma(lin({{"m", 1}}, 1), -1);
  t.add_gamma(alpha + lin({{"m", 1}}, 1), -1);
  return t;
}

}  // namespace wz::testing

namespace wz::testing {

// Random proper term: products of binomials with small integer-linear entries,
// an optional geometric factor and an optional polynomial.
inline HyperTerm random_proper(std::mt19937_64& rng) {
  HyperTerm t(discrete_sig("n", {"j", "k"}, {"z"}));
  std::uniform_int_distribution<int> co(-1, 2), cnt(1, 3), cst(0, 2);
  int nb = cnt(rng);
  for (int i = 0; i < nb; ++i) {
    LinForm top = lin({{"n", 1}, {"j", co(rng) > 0 ? 1 : 0}}, cst(rng));
    LinForm bot = lin({{"k", 1}, {"j", co(rng) > 1 ? -1 : 0}}, cst(rng) - 1);
    add_binom(t, top, bot, rng() % 3 == 0 ? 2 : 1);
  }
  if (rng() % 2) t.add_power(RatFun::variable(t.ring(), "z"), lin({{"k", static_cast<long>(rng() % 3)}, {"n", 1}}));
  if (rng() % 2) t.multiply_rational(RatFun::variable(t.ring(), "n") + RatFun::variable(t.ring(), "k") * RatFun::constant(t.ring(), 2) + RatFun::constant(t.ring(), 1));
  return t;
}

// Random terms of the shapes the parser builds.
struct TermGenerator {
  std::mt19937_64 rng;

  long pick(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  bool coin() { return pick(0, 1) == 1; }

  LinForm linform(const std::vector<std::string>& discrete, const std::vector<std::string>& params,
                  bool integer_constant) {
    LinForm f;
    for (const auto& v : discrete) {
      long c = pick(-2, 2);
      if (c != 0) f += LinForm::of_variable(v, c);
    }
    if (!integer_constant) {
      for (const auto& p : params) {
        if (coin()) f.constant.params[p] = random_rational(rng, 3, 2);
        if (f.constant.params.count(p) && f.constant.params[p] == 0) f.constant.params.erase(p);
      }
      f.constant.constant = random_rational(rng, 5, 3);
    } else {
      f.constant.constant = pick(-3, 3);
    }
    return f;
  }

  RatFun ratfun(const Vars& ring, const std::vector<std::string>& allowed) {
    std::vector<std::string> names(allowed);
    Vars sub = make_vars(names.empty() ? std::vector<std::string>{"__none"} : names);
    MultiPoly num = random_nonzero_poly(rng, sub, 2, 3);
    MultiPoly den = coin() ? MultiPoly(sub, 1) : random_nonzero_poly(rng, sub, 2, 2);
    if (names.empty()) {
      num = MultiPoly(sub, num.constant_term() == 0 ? BigRational(3) : num.constant_term());
      den = MultiPoly(sub, 1);
    }
    RatFun r(num.rebase(ring), den.rebase(ring));
    return r;
  }

  HyperTerm classical() {
    TermSignature s;
    s.outer_continuous = coin();
    s.outer = s.outer_continuous ? "x" : "n";
    s.inner_discrete = coin() ? std::vector<std::string>{"k"} : std::vector<std::string>{"j", "k"};
    if (coin()) s.inner_continuous = {"u"};
    s.params = coin() ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{"a"};
    HyperTerm t(s);
    std::vector<std::string> discrete = s.inner_discrete;
    if (!s.outer_continuous) discrete.insert(discrete.begin(), s.outer);
    std::vector<std::string> smooth = s.params;
    if (s.outer_continuous) smooth.push_back(s.outer);
    for (const auto& u : s.inner_continuous) smooth.push_back(u);
    long ng = pick(0, 3);
    for (long i = 0; i < ng; ++i) {
      long e = pick(-2, 2);
      t.add_gamma(linform(discrete, s.params, false), e == 0 ? 1 : e);
    }
    long np = pick(0, 2);
    for (long i = 0; i < np; ++i) {
      LinForm e = linform(discrete, s.params, false);
      if (e.coeffs.empty() && e.constant.params.empty()) e += LinForm::of_variable("k");
      t.add_power(ratfun(t.ring(), smooth), e);
    }
    if (coin()) t.add_exp(ratfun(t.ring(), smooth));
    if (coin()) t.multiply_rational(ratfun(t.ring(), *t.ring()));
    return t;
  }

  QHyperTerm quantum() {
    QSignature s{"n", coin() ? std::vector<std::string>{"k"} : std::vector<std::string>{"j", "k"}, {"z"}};
    QHyperTerm t(s);
    std::vector<std::string> discrete{"n"};
    discrete.insert(discrete.end(), s.inner.begin(), s.inner.end());
    std::vector<std::string> smooth{"q", "z"};
    long nq = pick(0, 3);
    for (long i = 0; i < nq; ++i) {
      LinForm offset = coin() ? LinForm{} : linform(discrete, {}, true);
      long e = pick(-2, 2);
      t.add_qpoch(ratfun(t.ring(), smooth), offset, linform(discrete, {}, true), e == 0 ? 1 : e);
    }
    if (coin()) {
      MultiPoly e = random_poly(rng, t.discrete_ring(), 2, 3);
      MultiPoly integral(t.discrete_ring());
      for (const auto& [exps, c] : e.terms()) integral += MultiPoly::monomial(t.discrete_ring(), exps, c.get_num());
      t.add_qpower(integral);
    }
    if (coin()) {
      LinForm e = linform(discrete, {}, true);
      if (e.coeffs.empty()) e += LinForm::of_variable("k");
      t.add_geometric(ratfun(t.ring(), {"z"}), e);
    }
    if (coin()) t.multiply_rational(ratfun(t.ring(), smooth));
    return t;
  }
};

}  // namespace wz::testing

#include "wz/linsolve.hpp"

namespace wz::testing {

inline std::size_t numeric_rank(std::vector<std::vector<BigRational>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      BigRational f = m[r][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<BigRational>> evaluate(const SymMatrix& m, const std::vector<BigRational>& pt) {
  std::vector<std::vector<BigRational>> out(m.rows(), std::vector<BigRational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m.at(i, j).evaluate(pt);
  }
  return out;
}

inline SymMatrix product(const SymMatrix& a, const SymMatrix& b) {
  SymMatrix m(a.ring(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t t = 0; t < a.cols(); ++t) m.at(i, j) += a.at(i, t) * b.at(t, j);
    }
  }
  return m;
}

}  // namespace wz::testing
