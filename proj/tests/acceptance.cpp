// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include "cli.hpp"
#include "test_util.hpp"
#include "wz/dsl.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace wz;
using namespace wz::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Failed : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failed(what);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failed("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(2) << s << " s";
  return o.str();
}

template <class T>
T parse_as(const std::string& path) {
  Parsed p = parse(slurp(path));
  require(std::holds_alternative<T>(p), path + ": unexpected statement kind");
  return std::get<T>(p);
}

template <class T, class V>
T expect(const V& v, const std::string& what) {
  const T* x = std::get_if<T>(&v);
  if (!x) throw Failed(what);
  return *x;
}

// Evaluates r at named values; every symbol of r must be assigned.
BigRational at(const RatFun& r, const Assignment& a) {
  std::vector<BigRational> pt;
  for (const auto& name : *r.vars()) {
    auto it = a.find(name);
    if (it == a.end()) throw Failed("unassigned symbol " + name);
    pt.push_back(it->second);
  }
  return r.evaluate(pt);
}

BigRational at(const MultiPoly& p, const Assignment& a) { return at(RatFun(p), a); }

// Value of a polynomial that depends on `v` alone.
BigRational at_only(const MultiPoly& p, const std::string& v, long value) {
  std::size_t idx = *var_index(p.vars(), v);
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) require(i == idx || e[i] == 0, p.to_string() + " involves more than " + v);
  }
  std::vector<BigRational> pt(p.nvars(), BigRational(0));
  pt[idx] = value;
  return p.evaluate(pt);
}

int wzcert(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "wzcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = static_cast<int>(cli::run(static_cast<int>(argv.size()), argv.data(), o, e));
  if (out) *out = o.str();
  return code;
}

Outcome hille_hardy() {
  std::string detail;
  for (const char* name : {"hille_hardy", "hille_hardy_y"}) {
    auto t0 = std::chrono::steady_clock::now();
    auto f = parse_as<HyperTerm>(std::string("fixtures/") + name + ".id");
    auto c = std::get<TelescopeCertificate>(read_certificate(slurp(std::string("fixtures/") + name + ".cert.json")));
    Verdict v = verify(f, c);
    double s = seconds_since(t0);
    require(v.valid && v.residual.is_zero(), std::string(name) + ": residual " + v.residual.to_string());
    require(s < 2, std::string(name) + " took " + fmt(s));
    detail += (detail.empty() ? "" : ", ") + std::string(name) + " " + fmt(s);
  }
  return {true, "residual identically zero (" + detail + ")"};
}

Outcome binomial_sum() {
  auto t0 = std::chrono::steady_clock::now();
  auto st = parse_as<IdentityStatement>("fixtures/binomial_sum.id");
  auto c = expect<TelescopeCertificate>(creative_telescope(st.lhs), "no certificate found");
  const Vars& r = st.lhs.ring();
  require(c.p.size() == 2 && c.p[1].is_constant() && !c.p[1].is_zero(), "operator is not first order with constant lead");
  require(c.p[0] == MultiPoly(r, -2) * c.p[1], "operator is not a unit multiple of N - 2");
  RatFun n = RatFun::variable(r, "n"), k = RatFun::variable(r, "k"), one = RatFun::constant(r, 1);
  require(c.r.at("k") == -k / (n - k + one), "R = " + c.r.at("k").to_string());
  require(verify(st.lhs, c).valid, "verify failed");
  expect<Proof>(prove_identity(st), "identity not proven");
  require(numeric_check(st, 0, 20).all_equal(), "numeric mismatch on [0, 20]");
  double s = seconds_since(t0);
  require(s < 2, "took " + fmt(s));
  return {true, "P = N - 2, R = " + c.r.at("k").to_string() + ", numeric n <= 20 (" + fmt(s) + ")"};
}

Outcome binomial_squared() {
  auto t0 = std::chrono::steady_clock::now();
  auto st = parse_as<IdentityStatement>("fixtures/binomial_squared.id");
  const Proof p = expect<Proof>(prove_identity(st), "identity not proven");
  require(verify(st.lhs, *p.certificate).valid, "verify failed");
  const auto& rec = p.recurrence.p;
  for (long n = 0; n <= 30; ++n) {
    BigRational sum = 0;
    for (std::size_t a = 0; a < rec.size(); ++a) {
      long m = n + static_cast<long>(a);
      sum += at_only(rec[a], "n", n) * BigRational(binomial(2 * m, m));
    }
    require(sum == 0, "recurrence fails on C(2n, n) at n = " + std::to_string(n));
  }
  double s = seconds_since(t0);
  require(s < 10, "took " + fmt(s));
  return {true, p.recurrence.to_string() + " annihilates C(2n, n) for n <= 30 (" + fmt(s) + ")"};
}

Outcome double_sum() {
  auto t0 = std::chrono::steady_clock::now();
  auto st = parse_as<IdentityStatement>("fixtures/double_sum.id");
  const Proof p = expect<Proof>(prove_identity(st), "identity not proven");
  const auto& c = *p.certificate;
  require(c.r.size() == 2 && !c.r.at("j").is_zero() && !c.r.at("k").is_zero(), "expected two nonzero certificates");
  require(verify(st.lhs, c).valid, "verify failed");
  require(numeric_check(st, 0, 15).all_equal(), "numeric mismatch on [0, 15]");
  double s = seconds_since(t0);
  require(s < 30, "took " + fmt(s));
  return {true, "R_j, R_k certified, numeric n <= 15 (" + fmt(s) + ")"};
}

Outcome gauss() {
  auto t0 = std::chrono::steady_clock::now();
  auto st = parse_as<QIdentityStatement>("fixtures/gauss.id");
  const Proof p = expect<Proof>(prove_identity(st), "identity not proven");
  require(q_verify(st.lhs, *p.q_certificate).valid, "q-verify failed");
  const auto& rec = p.recurrence.p;
  require(rec.size() == 2, "expected a first-order recurrence");
  const Vars& r = rec[0].vars();
  MultiPoly step = MultiPoly(r, 1) + MultiPoly::variable(r, "z") * MultiPoly::variable(r, "q^n");
  require(RatFun(-rec[0], rec[1]) == RatFun(step), "recurrence is " + p.recurrence.to_string());
  for (const BigRational& z : {BigRational(1), BigRational(5, 7)}) {
    require(numeric_check(st, 0, 12, {{"q", BigRational(2, 3)}, {"z", z}}).all_equal(), "numeric mismatch");
  }
  double s = seconds_since(t0);
  require(s < 30, "took " + fmt(s));
  return {true, "f(n + 1) = (1 + z q^n) f(n), numeric q = 2/3, z in {1, 5/7}, n <= 12 (" + fmt(s) + ")"};
}

template <class Cert, class Term, class Check>
int perturb_all(const Term& f, const Cert& c, Check check, const std::string& name) {
  int broken = 0;
  for (const auto& [var, rf] : c.r) {
    Cert bad = c;
    bad.r.at(var) = RatFun(rf.num() + MultiPoly(rf.vars(), 1), rf.den());
    Verdict v = check(f, bad);
    require(!v.valid && !v.residual.is_zero(), name + ": perturbed R_" + var + " still verifies");
    ++broken;
  }
  if constexpr (requires { c.s; }) {
    for (const auto& [var, sf] : c.s) {
      Cert bad = c;
      bad.s.at(var) = RatFun(sf.num() + MultiPoly(sf.vars(), 1), sf.den());
      Verdict v = check(f, bad);
      require(!v.valid && !v.residual.is_zero(), name + ": perturbed S_" + var + " still verifies");
      ++broken;
    }
  }
  return broken;
}

Outcome perturbations() {
  int broken = 0;
  auto classical = [](const HyperTerm& f, const TelescopeCertificate& c) { return verify(f, c); };
  for (const char* name : {"hille_hardy", "hille_hardy_y"}) {
    auto f = parse_as<HyperTerm>(std::string("fixtures/") + name + ".id");
    auto c = std::get<TelescopeCertificate>(read_certificate(slurp(std::string("fixtures/") + name + ".cert.json")));
    broken += perturb_all(f, c, classical, name);
  }
  for (const char* name : {"binomial_sum", "binomial_squared", "double_sum", "vandermonde", "wz_pair"}) {
    auto st = parse_as<IdentityStatement>(std::string("fixtures/") + name + ".id");
    auto c = expect<TelescopeCertificate>(creative_telescope(st.lhs), std::string(name) + ": no certificate");
    broken += perturb_all(st.lhs, c, classical, name);
  }
  auto gst = parse_as<QIdentityStatement>("fixtures/gauss.id");
  auto gc = expect<QTelescopeCertificate>(q_creative_telescope(gst.lhs), "gauss: no certificate");
  broken += perturb_all(gst.lhs, gc, [](const QHyperTerm& f, const QTelescopeCertificate& c) { return q_verify(f, c); },
                        "gauss");
  auto wrong = parse_as<IdentityStatement>("fixtures/wrong.id");
  const Refutation ref = expect<Refutation>(prove_identity(wrong), "wrong.id not refuted");
  require(ref.index == 0, "wrong.id refuted at n = " + std::to_string(ref.index));
  std::string out;
  int code = wzcert({"prove", "fixtures/wrong.id"}, &out);
  require(code == 1 && out.rfind("n = 0:", 0) == 0, "wzcert prove wrong.id exited " + std::to_string(code));
  return {true, std::to_string(broken) + " perturbed certificates rejected, wrong.id refuted at n = 0 (exit 1)"};
}

// Property suites.

int shift_soundness(std::mt19937_64& rng) {
  int checked = 0;
  while (checked < 150) {
    HyperTerm t = random_proper(rng);
    const char* vars[] = {"n", "j", "k"};
    std::string v = vars[rng() % 3];
    Assignment p{{"n", long(rng() % 8)}, {"j", long(rng() % 6)}, {"k", long(rng() % 6)}, {"z", BigRational(2, 3)}};
    Assignment up = p;
    up[v] += 1;
    BigRational f0 = eval_term(t, p).cofactor;
    if (f0 == 0) continue;
    BigRational qv;
    try {
      qv = at(shift_quotient(t, v), p);
    } catch (const Error&) {
      continue;
    }
    require(qv * f0 == eval_term(t, up).cofactor, "shift quotient unsound for " + render(t));
    ++checked;
  }
  return checked;
}

// Continuous terms whose value at a fixed m is a rational function.
HyperTerm smooth_term(std::mt19937_64& rng) {
  TermSignature s;
  s.outer = "x";
  s.outer_continuous = true;
  s.inner_discrete = {"m"};
  s.inner_continuous = {"u"};
  s.params = {"a"};
  HyperTerm t(s);
  Vars sub = make_vars({"x", "u", "a"});
  auto ratfun = [&] {
    return RatFun(random_nonzero_poly(rng, sub, 2, 3).rebase(t.ring()), random_nonzero_poly(rng, sub, 1, 2).rebase(t.ring()));
  };
  if (rng() % 2) t.add_gamma(lin({{"m", 1}}, 1 + long(rng() % 3)), rng() % 2 ? 1 : -1);
  long np = 1 + rng() % 2;
  for (long i = 0; i < np; ++i) t.add_power(ratfun(), lin({{"m", 1 + long(rng() % 2)}}, long(rng() % 3) - 1));
  if (rng() % 2) t.add_exp(ratfun());
  if (rng() % 2) t.multiply_rational(ratfun());
  return t;
}

int derivative_soundness(std::mt19937_64& rng) {
  int checked = 0;
  while (checked < 120) {
    HyperTerm t = smooth_term(rng);
    std::string y = rng() % 2 ? "x" : "u";
    long m = 1 + long(rng() % 4);
    Assignment pt{{"m", m}, {"x", random_rational(rng, 9, 5)}, {"u", random_rational(rng, 9, 5)},
                  {"a", random_rational(rng, 9, 5)}};
    BigRational got, want;
    try {
      SymbolicValue v = eval_symbolic(t, {{"m", m}});
      std::size_t idx = *var_index(v.cofactor.vars(), y);
      std::size_t ide = *var_index(v.exp_argument.vars(), y);
      RatFun expected = v.cofactor.derivative(idx) / v.cofactor;
      want = at(expected, pt) + at(v.exp_argument.derivative(ide), pt);
      got = at(derivative_quotient(t, y), pt);
    } catch (const Error&) {
      continue;
    }
    require(got == want, "derivative quotient unsound for " + render(t));
    ++checked;
  }
  return checked;
}

int word_soundness(std::mt19937_64& rng) {
  using K = WordOp::Kind;
  int checked = 0;
  while (checked < 150) {
    HyperTerm t = random_proper(rng);
    long dn = rng() % 2, dj = rng() % 2, dk = rng() % 3;
    std::vector<WordOp> w;
    for (long a = 0; a < dn; ++a) w.push_back({K::outer, ""});
    for (long a = 0; a < dj; ++a) w.push_back({K::shift, "j"});
    for (long a = 0; a < dk; ++a) w.push_back({K::shift, "k"});
    Assignment p{{"n", long(rng() % 8)}, {"j", long(rng() % 6)}, {"k", long(rng() % 6)}, {"z", BigRational(2, 3)}};
    Assignment ps = p;
    ps["n"] += dn;
    ps["j"] += dj;
    ps["k"] += dk;
    BigRational f0 = eval_term(t, p).cofactor, qv;
    if (f0 == 0) continue;
    try {
      qv = at(word_quotient(t, w), p);
    } catch (const Error&) {
      continue;
    }
    require(qv * f0 == eval_term(t, ps).cofactor, "word quotient unsound for " + render(t));
    ++checked;
  }
  return checked;
}

int nullspace_exactness(std::mt19937_64& rng) {
  auto v = make_vars({"n", "a"});
  int trials = 110;
  for (int trial = 0; trial < trials; ++trial) {
    std::size_t inner = 1 + rng() % 4, cols = 3 + rng() % 3, rows = 2 + rng() % 4;
    SymMatrix a(v, rows, inner), b(v, inner, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < inner; ++j) a.at(i, j) = random_poly(rng, v, 2, 3);
    for (std::size_t i = 0; i < inner; ++i)
      for (std::size_t j = 0; j < cols; ++j) b.at(i, j) = random_poly(rng, v, 2, 3);
    SymMatrix m = product(a, b);
    auto basis = nullspace(m);
    for (const auto& vec : basis) {
      for (const auto& e : m.apply(vec)) require(e.is_zero(), "nullspace vector not annihilated");
    }
    std::size_t rank = 0;
    for (int k = 0; k < 3; ++k) rank = std::max(rank, numeric_rank(evaluate(m, random_point(rng, 2))));
    require(basis.size() == cols - rank, "nullspace dimension differs from columns - rank");
    if (!basis.empty()) {
      auto pt = random_point(rng, 2);
      std::vector<std::vector<BigRational>> bm;
      for (const auto& vec : basis) {
        std::vector<BigRational> row;
        for (const auto& e : vec) row.push_back(e.evaluate(pt));
        bm.push_back(row);
      }
      require(numeric_rank(bm) == basis.size(), "nullspace basis dependent");
    }
  }
  return trials;
}

int decomposition_reexpansion(std::mt19937_64& rng) {
  HyperTerm f(discrete_sig("n", {"j", "k"}));
  add_binom(f, lin({{"n", 1}}), lin({{"j", 1}}));
  add_binom(f, lin({{"j", 1}}), lin({{"k", 1}}));
  OreTerm ore(f);
  Vars coeff_ring = make_vars({"n"});
  int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    OreOperator t{f.ring(), {}};
    for (int i = 0; i < 6; ++i) {
      Word w{static_cast<int>(rng() % 3), {static_cast<int>(rng() % 3), static_cast<int>(rng() % 4)}, {}};
      t.add(w, random_poly(rng, coeff_ring, 2).rebase(f.ring()));
    }
    require(recompose(ore, decompose(ore, t)) == t, "decomposition does not re-expand");
  }
  return trials;
}

int prove_verify_round_trip() {
  int cases = 0;
  const char* ratios[] = {"2", "3", "1/2", "-3", "a"};
  for (int s = 0; s < 5; ++s) {
    for (int t = 0; t < 2; ++t) {
      for (const char* c : ratios) {
        for (int extra = 0; extra < 2; ++extra) {
          std::ostringstream text;
          text << "param a; outer n; sum(k) binom(n + " << s << ", k + " << t << ") * (" << c << ")^k";
          if (extra) text << " * (k + 1)";
          auto f = std::get<HyperTerm>(parse(text.str()));
          auto cert = expect<TelescopeCertificate>(creative_telescope(f), "no certificate for " + text.str());
          require(verify(f, cert).valid, "verify failed for " + text.str());
          auto back = std::get<TelescopeCertificate>(read_certificate(write_certificate(cert)));
          require(verify(back.term, back).valid && back.term == f, "file round trip failed for " + text.str());
          ++cases;
        }
      }
    }
  }
  return cases;
}

int dsl_round_trip(std::mt19937_64& rng) {
  TermGenerator g{std::mt19937_64(rng())};
  int cases = 0;
  for (int i = 0; i < 100; ++i, ++cases) {
    HyperTerm t = g.classical();
    require(std::get<HyperTerm>(parse(render(t))) == t, "classical round trip failed: " + render(t));
  }
  for (int i = 0; i < 100; ++i, ++cases) {
    QHyperTerm t = g.quantum();
    require(std::get<QHyperTerm>(parse(render(t), ParseOptions{true})) == t, "q round trip failed: " + render(t));
  }
  return cases;
}

int certificate_round_trip(std::mt19937_64& rng) {
  TermGenerator g{std::mt19937_64(rng())};
  int trials = 100;
  for (int i = 0; i < trials; ++i) {
    HyperTerm f = g.classical();
    TelescopeCertificate c{f, {}, {}, {}};
    long order = g.pick(0, 3);
    for (long a = 0; a <= order; ++a) c.p.push_back(random_poly(g.rng, f.ring(), 2));
    for (const auto& k : f.signature().inner_discrete) {
      c.r.emplace(k, RatFun(random_poly(g.rng, f.ring(), 2), random_nonzero_poly(g.rng, f.ring(), 1)));
    }
    for (const auto& u : f.signature().inner_continuous) c.s.emplace(u, RatFun(random_poly(g.rng, f.ring(), 2)));
    std::string bytes = write_certificate(c);
    auto back = std::get<TelescopeCertificate>(read_certificate(bytes));
    require(back.term == c.term && back.p == c.p && back.r == c.r && back.s == c.s, "certificate round trip failed");
    require(write_certificate(back) == bytes, "certificate bytes not stable");
  }
  return trials;
}

Outcome properties() {
  std::mt19937_64 rng(2024);
  std::vector<std::pair<std::string, std::function<int()>>> suites{
      {"shift", [&] { return shift_soundness(rng); }},
      {"derivative", [&] { return derivative_soundness(rng); }},
      {"word", [&] { return word_soundness(rng); }},
      {"nullspace", [&] { return nullspace_exactness(rng); }},
      {"decomposition", [&] { return decomposition_reexpansion(rng); }},
      {"prove/verify", [&] { return prove_verify_round_trip(); }},
      {"dsl", [&] { return dsl_round_trip(rng); }},
      {"certificate file", [&] { return certificate_round_trip(rng); }},
  };
  std::string detail;
  for (const auto& [name, run] : suites) {
    int n = run();
    require(n >= 100, name + ": only " + std::to_string(n) + " cases");
    detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(n);
  }
  return {true, "cases: " + detail};
}

Outcome wz_pair() {
  auto st = parse_as<IdentityStatement>("fixtures/wz_pair.id");
  const WZTuple t = expect<WZTuple>(to_wz_tuple(st), "no WZ tuple");
  const Vars& r = t.f.ring();
  RatFun n = RatFun::variable(r, "n"), k = RatFun::variable(r, "k"), one = RatFun::constant(r, 1);
  require(t.g.at("k") == -k / (RatFun::constant(r, 2) * (n - k + one)), "G = " + t.g.at("k").to_string());
  require(verify_wz_tuple(t).valid, "tuple does not verify");
  Companion same = companion(t, "n");
  require(same.statement == st, "keep = n does not reproduce the identity: " + render(same.statement));
  Companion dual = companion(t, "k");
  double worst = 0;
  for (long kv = 0; kv <= 5; ++kv) {
    PartialSums ps = companion_partial_sums(dual, kv, 40);
    require(ps.sums.size() == 41, "expected partial sums for n <= 40");
    std::vector<BigRational> dist;
    for (const auto& s : ps.sums) dist.push_back(abs(BigRational(s - ps.limit)));
    for (long i = 2 * kv + 2; i < 40; ++i) {
      require(dist[i + 1] <= dist[i], "k = " + std::to_string(kv) + ": distance grows at n = " + std::to_string(i + 1));
    }
    double err = dist[40].get_d();
    require(err < 1e-6, "k = " + std::to_string(kv) + ": |S_40 - limit| = " + std::to_string(err));
    worst = std::max(worst, err);
  }
  std::ostringstream o;
  o << "G = " << t.g.at("k").to_string() << ", keep = n reproduces the identity, keep = k converges (max error "
    << std::scientific << std::setprecision(1) << worst << ")";
  return {true, o.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hille-Hardy certificates verify", hille_hardy},
      {"sum C(n, k) = 2^n", binomial_sum},
      {"sum C(n, k)^2 = C(2n, n)", binomial_squared},
      {"sum C(n, j) C(j, k) = 3^n", double_sum},
      {"q-binomial theorem", gauss},
      {"perturbations and refutation", perturbations},
      {"property suites", properties},
      {"WZ pair and companions", wz_pair},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << "\n";
  }
  return failures ? 1 : 0;
}
