#include "test_util.hpp"
#include "wz/q_engine.hpp"

#include <gtest/gtest.h>

using namespace wz;
using namespace wz::testing;

namespace {

QHyperTerm gauss_term() {
  QHyperTerm t(QSignature{"n", {"k"}, {"z"}});
  add_qbin(t, lin({{"n", 1}}), lin({{"k", 1}}));
  MultiPoly e = MultiPoly::variable(t.discrete_ring(), "k");
  t.add_qpower(e * (e - MultiPoly(t.discrete_ring(), 1)) * BigRational(1, 2));
  t.add_geometric(RatFun::variable(t.ring(), "z"), lin({{"k", 1}}));
  return t;
}

QHyperTerm qbin_term() {
  QHyperTerm t(QSignature{"n", {"k"}, {}});
  add_qbin(t, lin({{"n", 1}}), lin({{"k", 1}}));
  return t;
}

BigRational power(const BigRational& b, long e) {
  BigRational r = 1;
  for (long i = 0; i < std::abs(e); ++i) r *= b;
  return e < 0 ? BigRational(1 / r) : r;
}

// Ring point (q, q^n, q^k..., params...) for integer n, k.
std::vector<BigRational> ring_point(const QHyperTerm& t, const BigRational& q0, const Assignment& at) {
  std::vector<BigRational> pt;
  for (const auto& name : *t.ring()) {
    if (name == "q") {
      pt.push_back(q0);
    } else if (name.rfind("q^", 0) == 0) {
      pt.push_back(power(q0, static_cast<long>(at.at(name.substr(2)).get_num().get_si())));
    } else {
      pt.push_back(at.at(name));
    }
  }
  return pt;
}

// The certified relation at q = q0 and a lattice point; nullopt at a pole of R.
std::optional<bool> q_relation_holds(const QTelescopeCertificate& c, const BigRational& q0, Assignment at) {
  const QHyperTerm& f = c.term;
  const std::string& n = f.signature().outer;
  at["q"] = q0;
  std::vector<BigRational> pt = ring_point(f, q0, at);
  BigRational lhs = 0;
  for (std::size_t a = 0; a < c.p.size(); ++a) {
    Assignment s = at;
    s[n] += static_cast<long>(a);
    lhs += c.p[a].evaluate(pt) * q_eval_term(f, s);
  }
  BigRational rhs = 0;
  for (const auto& [k, r] : c.r) {
    Assignment up = at;
    up[k] += 1;
    auto pu = ring_point(f, q0, up);
    if (r.den().evaluate(pu) == 0 || r.den().evaluate(pt) == 0) return std::nullopt;
    rhs += r.evaluate(pu) * q_eval_term(f, up) - r.evaluate(pt) * q_eval_term(f, at);
  }
  return lhs == rhs;
}

}  // namespace

TEST(QTelescope, GaussBinomialTheorem) {
  QHyperTerm f = gauss_term();
  auto res = q_creative_telescope(f);
  ASSERT_TRUE(std::holds_alternative<QTelescopeCertificate>(res));
  const auto& c = std::get<QTelescopeCertificate>(res);
  const Vars& r = f.ring();
  MultiPoly one(r, 1), z = MultiPoly::variable(r, "z"), w = MultiPoly::variable(r, "q^n");
  ASSERT_EQ(c.p.size(), 2u);
  EXPECT_EQ(c.p[1], one);
  EXPECT_EQ(c.p[0], -(one + z * w));
  EXPECT_TRUE(q_verify(f, c).valid);
  // oracle: exact partial products at q = 2/3
  const BigRational q0(2, 3);
  for (const BigRational& z0 : {BigRational(1), BigRational(5, 7)}) {
    BigRational prod = 1;
    for (long n = 0; n <= 12; ++n) {
      BigRational sum = 0;
      for (long k = 0; k <= n; ++k) sum += qbinomial(n, k, q0) * power(q0, k * (k - 1) / 2) * power(z0, k);
      EXPECT_EQ(sum, prod) << n;
      prod *= 1 + z0 * power(q0, n);
    }
  }
}

TEST(QTelescope, GeometricTermHasCertificate) {
  QHyperTerm f(QSignature{"n", {"k"}, {"z"}});
  f.add_geometric(RatFun::variable(f.ring(), "z"), lin({{"k", 1}}));
  auto res = q_creative_telescope(f);
  ASSERT_TRUE(std::holds_alternative<QTelescopeCertificate>(res));
  const auto& c = std::get<QTelescopeCertificate>(res);
  EXPECT_FALSE(c.is_vacuous());
  EXPECT_TRUE(q_verify(f, c).valid);
  EXPECT_FALSE(q_support_bounds(f, 3).has_value());
}

TEST(QTelescope, GaussianBinomialRowSums) {
  QHyperTerm f = qbin_term();
  auto res = q_creative_telescope(f);
  ASSERT_TRUE(std::holds_alternative<QTelescopeCertificate>(res));
  const auto& c = std::get<QTelescopeCertificate>(res);
  EXPECT_FALSE(c.is_vacuous());
  EXPECT_TRUE(q_residual(f, c).is_zero());
  // Galois numbers: G(n+2) = 2 G(n+1) - (1 - q^(n+1)) G(n)
  EXPECT_EQ(render_operator(c.p, "N"), "N^2 - 2*N + (-q*(q^n) + 1)");
  // the recurrence holds for the exact row sums at q = 2/3
  const BigRational q0(2, 3);
  auto row = [&](long n) {
    BigRational s = 0;
    for (long k = 0; k <= n; ++k) s += qbinomial(n, k, q0);
    return s;
  };
  for (long n = 0; n <= 12; ++n) {
    Assignment at{{"n", n}, {"k", 0}};
    std::vector<BigRational> pt = ring_point(f, q0, at);
    BigRational acc = 0;
    for (std::size_t a = 0; a < c.p.size(); ++a) acc += c.p[a].evaluate(pt) * row(n + static_cast<long>(a));
    EXPECT_EQ(acc, 0) << n;
  }
}

TEST(QVerify, PerturbedIsInvalid) {
  QHyperTerm f = gauss_term();
  auto c = std::get<QTelescopeCertificate>(q_creative_telescope(f));
  QTelescopeCertificate bad = c;
  bad.r.at("k") += RatFun::constant(f.ring(), 1);
  Verdict v = q_verify(f, bad);
  EXPECT_FALSE(v.valid);
  EXPECT_FALSE(v.residual.is_zero());
  QTelescopeCertificate bad_p = c;
  bad_p.p[0] += MultiPoly::variable(f.ring(), "q");
  EXPECT_FALSE(q_verify(f, bad_p).valid);
}

TEST(QVerify, VacuousOnConstantInN) {
  QHyperTerm f(QSignature{"n", {"k"}, {"z"}});
  f.add_geometric(RatFun::variable(f.ring(), "z"), lin({{"k", 1}}));
  QTelescopeCertificate c{f, {}, {}};
  Verdict v = q_verify(f, c);
  EXPECT_TRUE(v.valid);
  EXPECT_NE(v.trace.find("vacuous"), std::string::npos);
}

TEST(QVerify, Mismatch) {
  QHyperTerm f = gauss_term();
  auto c = std::get<QTelescopeCertificate>(q_creative_telescope(f));
  try {
    q_verify(qbin_term(), c);
    FAIL() << "expected mismatch";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "term/certificate mismatch");
  }
}

TEST(QVerify, SpecializationCoherence) {
  QHyperTerm f = gauss_term();
  auto c = std::get<QTelescopeCertificate>(q_creative_telescope(f));
  std::mt19937_64 rng(13);
  for (const BigRational& q0 : {BigRational(2, 3), BigRational(-3, 5), BigRational(7, 2)}) {
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      long n = static_cast<long>(rng() % 10);
      long k = static_cast<long>(rng() % 14) - 2;
      BigRational z0 = random_rational(rng, 5, 3);
      auto ok = q_relation_holds(c, q0, {{"n", n}, {"k", k}, {"z", z0}});
      if (!ok) continue;
      ++checked;
      EXPECT_TRUE(*ok) << n << "," << k;
    }
    EXPECT_GT(checked, 150);
  }
}
