#include "test_util.hpp"
#include "wz/dsl.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <sstream>

using namespace wz;
using namespace wz::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

HyperTerm binom_nk() {
  HyperTerm t(discrete_sig("n", {"k"}));
  add_binom(t, lin({{"n", 1}}), lin({{"k", 1}}));
  return t;
}

ParseError parse_error(std::string_view text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  throw Error("expected a parse error");
}

std::string spanned(std::string_view text, const SourceSpan& s) { return std::string(text.substr(s.begin, s.end - s.begin)); }

void expect_same(const TelescopeCertificate& a, const TelescopeCertificate& b) {
  EXPECT_EQ(a.term, b.term);
  EXPECT_EQ(a.p, b.p);
  EXPECT_EQ(a.r, b.r);
  EXPECT_EQ(a.s, b.s);
}


}  // namespace

TEST(Parse, BinomialSum) {
  Parsed p = parse("param none; sum(k) binom(n,k) = 2^n");
  ASSERT_TRUE(std::holds_alternative<IdentityStatement>(p));
  const auto& st = std::get<IdentityStatement>(p);
  EXPECT_EQ(st.lhs, binom_nk());
  ASSERT_EQ(st.rhs.size(), 1u);
  HyperTerm two(closed_signature(st.lhs.signature()));
  two.add_power(RatFun::constant(two.ring(), 2), lin({{"n", 1}}));
  EXPECT_EQ(st.rhs[0], two);
}

TEST(Parse, SugarMatchesPrimitives) {
  auto term = [](const char* text) { return std::get<HyperTerm>(parse(text)); };
  EXPECT_EQ(term("sum(k) binom(n, k)"), term("sum(k) factorial(n) / (factorial(k) * gamma(n - k + 1))"));
  EXPECT_EQ(term("param a; outer n; sum(k) pochhammer(a, k)"), term("param a; outer n; sum(k) gamma(a + k) * gamma(a)^(-1)"));
  EXPECT_EQ(term("sum(k) binom(n, k)^2"), term("sum(k) gamma(n + 1)^2 / gamma(k + 1)^2 * gamma(n - k + 1)^(-2)"));
  EXPECT_EQ(term("let C = binom(n, k); sum(k) C^2"), term("sum(k) binom(n, k)^2"));
  EXPECT_EQ(term("sum(k) (k + 1)^2 * binom(n, k)"), term("sum(k) (k^2 + 2*k + 1) * binom(n, k)"));
}

TEST(Parse, HilleHardyFixture) {
  Parsed p = parse(slurp("fixtures/hille_hardy.id"));
  ASSERT_TRUE(std::holds_alternative<HyperTerm>(p));
  EXPECT_EQ(std::get<HyperTerm>(p), hille_hardy_term());
}

TEST(Parse, GaussFixture) {
  Parsed p = parse(slurp("fixtures/gauss.id"));
  ASSERT_TRUE(std::holds_alternative<QIdentityStatement>(p));
  const auto& st = std::get<QIdentityStatement>(p);
  QHyperTerm prod(QSignature{"n", {}, {"z"}});
  prod.add_qpoch(-RatFun::variable(prod.ring(), "z"), {}, lin({{"n", 1}}), 1);
  ASSERT_EQ(st.rhs.size(), 1u);
  EXPECT_EQ(st.rhs[0], prod);
  EXPECT_EQ(st.lhs.qpochs().size(), 3u);
  EXPECT_EQ(st.lhs.qpowers().size(), 1u);
  EXPECT_EQ(st.lhs.geometrics().size(), 1u);
  Assignment at{{"q", BigRational(2, 3)}, {"z", BigRational(5, 7)}, {"n", 6}, {"k", 2}};
  EXPECT_EQ(q_eval_term(st.lhs, at), qbinomial(6, 2, BigRational(2, 3)) * BigRational(2, 3) * BigRational(25, 49));
}

TEST(Parse, ContinuousOuterAndRhsForms) {
  auto st = std::get<IdentityStatement>(parse("param x; sum(k) binom(n, k) * x^k = (x + 1)^n - 0 + 0"));
  EXPECT_EQ(st.lhs.signature().outer, "n");
  EXPECT_EQ(st.rhs.size(), 1u);
  auto st2 = std::get<IdentityStatement>(parse("param n; cont x; sum(k) binom(n, k) * x^k = (x + 1)^n"));
  EXPECT_EQ(st2.lhs.signature().outer, "x");
  EXPECT_TRUE(st2.lhs.signature().outer_continuous);
  auto zero = std::get<IdentityStatement>(parse("sum(k) (-1)^k * binom(n, k) = 0"));
  EXPECT_TRUE(zero.rhs.empty());
  auto two = std::get<IdentityStatement>(parse("sum(k) binom(n, k) = 2^n - sum(j) binom(n, j) / 2"));
  ASSERT_EQ(two.rhs.size(), 2u);
  EXPECT_EQ(two.rhs[1].signature().inner_discrete, std::vector<std::string>{"j"});
  EXPECT_EQ(two.rhs[1].rational(), RatFun::constant(two.rhs[1].ring(), BigRational(-1, 2)));
  auto outer = std::get<HyperTerm>(parse("outer n; sum(k) 2^k"));
  EXPECT_EQ(outer.signature().outer, "n");
}

TEST(ParseErrors, NonIntegerDiscreteCoefficient) {
  std::string text = "sum(k) binom(n, k/2)";
  ParseError e = parse_error(text);
  EXPECT_EQ(e.message(), "non-integer coefficient of discrete variable k");
  EXPECT_EQ(spanned(text, e.span()), "k/2");
  EXPECT_EQ(e.span().line, 1u);
  EXPECT_EQ(e.span().column, 17u);
}

TEST(ParseErrors, SpansLieInsideInput) {
  struct Case {
    std::string text;
    std::string message;
    std::string at;
  };
  std::vector<Case> cases{
      {"sum(k) binom(n, k) = 2^m", "undeclared symbol 'm'", "m"},
      {"sum(k) binom(n, k", "expected ')' at end of input", ""},
      {"sum(k) binom(n, k) * j", "undeclared symbol 'j'", "j"},
      {"sum(k) binom(n)", "binom expects 2 arguments", "binom(n)"},
      {"sum(k) foo(n)", "unknown function 'foo'", "foo(n)"},
      {"sum(k) binom(n, k) ^ k", "'binom' takes only integer powers", "binom(n, k) ^ k"},
      {"param a;\nsum(k) gamma(a*k) * n", "expected a linear form", "a*k"},
      {"cont u;\nsum(k) gamma(u + k)", "continuous variable 'u' in a linear form", "u + k"},
      {"sum(k) n*2^(k^2)", "expected a linear form", "(k^2)"},
      {"sum(k) n*k^(1/2)", "power base depends on discrete variable 'k'", "k^(1/2)"},
      {"sum(k) binom(n, k) / 0", "division by zero", "0"},
      {"param k; sum(k) binom(n, k)", "symbol 'k' declared twice", "k"},
      {"sum(k) binom(n, k) @", "unexpected character '@'", "@"},
      {"param z;\nsum(k) qpoch(z, k) * binom(n, k)", "'binom' is not available in a q-term", "binom(n, k)"},
      {"param z;\nsum(k) qpoch(z*q^k, n) * k", "discrete variable 'k' can appear only in linear arguments and q-exponents", "k"},
      {"outer n; sum(k) 0", "the summand is identically zero", "0"},
      {"sum(k) 1", "cannot determine the outer variable; declare it with 'outer'", "1"},
      {"sum(k) binom(n, k) = sum(n) 1", "symbol 'n' declared twice", "n"},
  };
  for (const auto& c : cases) {
    ParseError e = parse_error(c.text);
    EXPECT_EQ(e.message(), c.message) << c.text;
    EXPECT_LE(e.span().begin, e.span().end);
    EXPECT_LE(e.span().end, c.text.size());
    if (!c.at.empty()) {
      EXPECT_EQ(spanned(c.text, e.span()), c.at) << c.text;
    }
  }
}

TEST(Render, CanonicalText) {
  auto st = std::get<IdentityStatement>(parse(slurp("fixtures/binomial_sum.id")));
  EXPECT_EQ(render(st), "sum(k) gamma(n + 1)*gamma(k + 1)^(-1)*gamma(-k + n + 1)^(-1) = 2^n\n");
  EXPECT_EQ(render(binom_nk()), "sum(k) gamma(n + 1)*gamma(k + 1)^(-1)*gamma(-k + n + 1)^(-1)");
  HyperTerm c(discrete_sig("n", {"k"}));
  c.add_power(RatFun::constant(c.ring(), 2), lin({{"k", 1}}));
  EXPECT_EQ(render(c), "outer n; sum(k) 2^k");
  EXPECT_EQ(std::get<HyperTerm>(parse(render(c))), c);
}

TEST(Render, RoundTripOfGeneratedTerms) {
  TermGenerator g{std::mt19937_64(21)};
  for (int i = 0; i < 150; ++i) {
    HyperTerm t = g.classical();
    std::string text = render(t);
    Parsed back = parse(text);
    ASSERT_TRUE(std::holds_alternative<HyperTerm>(back)) << text;
    EXPECT_EQ(std::get<HyperTerm>(back), t) << text;
    EXPECT_EQ(render(std::get<HyperTerm>(back)), text);
  }
}

TEST(Render, RoundTripOfGeneratedQTerms) {
  TermGenerator g{std::mt19937_64(22)};
  for (int i = 0; i < 150; ++i) {
    QHyperTerm t = g.quantum();
    std::string text = render(t);
    Parsed back = parse(text, ParseOptions{true});
    ASSERT_TRUE(std::holds_alternative<QHyperTerm>(back)) << text;
    EXPECT_EQ(std::get<QHyperTerm>(back), t) << text;
  }
}

TEST(Render, RoundTripOfStatements) {
  TermGenerator g{std::mt19937_64(23)};
  for (int i = 0; i < 100; ++i) {
    HyperTerm lhs = g.classical();
    IdentityStatement st{lhs, {}};
    long nr = g.pick(0, 2);
    for (long r = 0; r < nr; ++r) {
      HyperTerm c(closed_signature(lhs.signature()));
      const TermSignature& s = lhs.signature();
      if (!s.outer_continuous) c.add_power(RatFun::constant(c.ring(), g.pick(2, 5)), lin({{"n", 1}}));
      c.multiply_rational(RatFun::variable(c.ring(), s.outer) + RatFun::constant(c.ring(), g.pick(-3, 3)));
      st.rhs.push_back(c);
    }
    std::string text = render(st);
    Parsed back = parse(text);
    ASSERT_TRUE(std::holds_alternative<IdentityStatement>(back)) << text;
    EXPECT_EQ(std::get<IdentityStatement>(back), st) << text;
  }
}

TEST(CertificateFile, BinomialRoundTrip) {
  HyperTerm f = binom_nk();
  auto c = std::get<TelescopeCertificate>(creative_telescope(f));
  std::string bytes = write_certificate(c);
  Certificate back = read_certificate(bytes);
  ASSERT_TRUE(std::holds_alternative<TelescopeCertificate>(back));
  expect_same(std::get<TelescopeCertificate>(back), c);
  EXPECT_EQ(write_certificate(std::get<TelescopeCertificate>(back)), bytes);
  EXPECT_NE(bytes.find("\"mode\": \"classical\""), std::string::npos);
}

TEST(CertificateFile, QRoundTrip) {
  auto st = std::get<QIdentityStatement>(parse(slurp("fixtures/gauss.id")));
  auto c = std::get<QTelescopeCertificate>(q_creative_telescope(st.lhs));
  std::string bytes = write_certificate(c);
  auto back = std::get<QTelescopeCertificate>(read_certificate(bytes));
  EXPECT_EQ(back.term, c.term);
  EXPECT_EQ(back.p, c.p);
  EXPECT_EQ(back.r, c.r);
  EXPECT_EQ(write_certificate(back), bytes);
  EXPECT_TRUE(q_verify(back.term, back).valid);
}

TEST(CertificateFile, RandomCertificatesRoundTrip) {
  TermGenerator g{std::mt19937_64(24)};
  for (int i = 0; i < 120; ++i) {
    HyperTerm f = g.classical();
    TelescopeCertificate c{f, {}, {}, {}};
    long order = g.pick(0, 3);
    for (long a = 0; a <= order; ++a) c.p.push_back(a == 1 ? MultiPoly(f.ring()) : random_poly(g.rng, f.ring(), 2));
    for (const auto& k : f.signature().inner_discrete) {
      c.r.emplace(k, RatFun(random_poly(g.rng, f.ring(), 2), random_nonzero_poly(g.rng, f.ring(), 1)));
    }
    for (const auto& u : f.signature().inner_continuous) c.s.emplace(u, RatFun(random_poly(g.rng, f.ring(), 2)));
    std::string bytes = write_certificate(c);
    auto back = std::get<TelescopeCertificate>(read_certificate(bytes));
    expect_same(back, c);
    EXPECT_EQ(write_certificate(back), bytes);
  }
}

TEST(CertificateFile, HilleHardyFixtures) {
  for (const char* name : {"hille_hardy", "hille_hardy_y"}) {
    std::string dir = "fixtures/";
    auto c = std::get<TelescopeCertificate>(read_certificate(slurp(dir + name + ".cert.json")));
    HyperTerm f = std::get<HyperTerm>(parse(slurp(dir + name + ".id")));
    EXPECT_EQ(c.term, f);
    Verdict v = verify(f, c);
    EXPECT_TRUE(v.valid) << name;
    EXPECT_TRUE(v.residual.is_zero());
    EXPECT_EQ(c.order(), 2);
  }
  auto c = std::get<TelescopeCertificate>(read_certificate(slurp("fixtures/hille_hardy.cert.json")));
  EXPECT_EQ(c.term, hille_hardy_term());
}

TEST(CertificateFile, MalformedFilesNamePaths) {
  std::string good = slurp("fixtures/hille_hardy.cert.json");
  auto path_of = [](const std::string& bytes) -> std::string {
    try {
      read_certificate(bytes);
    } catch (const CertificateError& e) {
      return e.path();
    }
    return "accepted";
  };
  EXPECT_EQ(path_of(good.substr(0, good.size() / 2)), "$");
  EXPECT_EQ(path_of(""), "$");
  auto edit = [&](const std::function<void(nlohmann::json&)>& f) {
    nlohmann::json j = nlohmann::json::parse(good);
    f(j);
    return j.dump();
  };
  EXPECT_EQ(path_of(edit([](auto& j) { j.erase("mode"); })), "$.mode");
  EXPECT_EQ(path_of(edit([](auto& j) { j["format_version"] = 7; })), "$.format_version");
  EXPECT_EQ(path_of(edit([](auto& j) { j["term"] = "sum(m) binom(n, m/2)"; })), "$.term");
  EXPECT_EQ(path_of(edit([](auto& j) { j["variables"][0] = "z"; })), "$.variables");
  EXPECT_EQ(path_of(edit([](auto& j) { j["operator"][1]["coeff"][0]["exponents"].push_back(0); })),
            "$.operator[1].coeff[0].exponents");
  EXPECT_EQ(path_of(edit([](auto& j) { j["operator"][2]["coeff"][0]["coeff"] = "1/0"; })),
            "$.operator[2].coeff[0].coeff");
  EXPECT_EQ(path_of(edit([](auto& j) { j["operator"][0]["n_power"] = -1; })), "$.operator[0].n_power");
  EXPECT_EQ(path_of(edit([](auto& j) { j["certificates"]["m"]["den"] = nlohmann::json::array(); })),
            "$.certificates.m.den");
  EXPECT_EQ(path_of(edit([](auto& j) { j["certificates"]["z"] = j["certificates"]["m"]; })), "$.certificates.z");
  EXPECT_EQ(path_of(edit([](auto& j) { j["certificates"]["u"].erase("num"); })), "$.certificates.u.num");
  EXPECT_EQ(path_of(good), "accepted");
}
