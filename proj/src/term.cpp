#include "wz/term.hpp"

#include <algorithm>
#include <numeric>

namespace wz {

Affine& Affine::operator+=(const Affine& o) {
  constant += o.constant;
  for (const auto& [p, c] : o.params) {
    auto& slot = params[p];
    slot += c;
    if (slot == 0) params.erase(p);
  }
  return *this;
}

Affine& Affine::operator*=(const BigRational& c) {
  constant *= c;
  if (c == 0) {
    params.clear();
  } else {
    for (auto& [p, v] : params) v *= c;
  }
  return *this;
}

MultiPoly Affine::to_poly(const Vars& ring) const {
  MultiPoly r(ring, constant);
  for (const auto& [p, c] : params) r += MultiPoly::variable(ring, p) * c;
  return r;
}

LinForm LinForm::of_constant(const BigRational& c) {
  LinForm f;
  f.constant.constant = c;
  return f;
}

LinForm LinForm::of_variable(const std::string& v, long c) {
  LinForm f;
  if (c != 0) f.coeffs[v] = c;
  return f;
}

long LinForm::coeff(const std::string& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? 0 : it->second;
}

LinForm& LinForm::operator+=(const LinForm& o) {
  for (const auto& [v, c] : o.coeffs) {
    long& slot = coeffs[v];
    slot += c;
    if (slot == 0) coeffs.erase(v);
  }
  constant += o.constant;
  return *this;
}

LinForm& LinForm::operator*=(long c) {
  if (c == 0) {
    coeffs.clear();
  } else {
    for (auto& [v, x] : coeffs) x *= c;
  }
  constant *= c;
  return *this;
}

Affine LinForm::evaluate(const std::map<std::string, BigInt>& discrete) const {
  Affine a = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = discrete.find(v);
    if (it != discrete.end()) a.constant += BigRational(it->second * c);
  }
  return a;
}

MultiPoly LinForm::to_poly(const Vars& ring) const {
  MultiPoly r = constant.to_poly(ring);
  for (const auto& [v, c] : coeffs) r += MultiPoly::variable(ring, v) * BigRational(c);
  return r;
}

Vars TermSignature::ring() const {
  std::vector<std::string> names;
  if (!outer.empty()) names.push_back(outer);
  names.insert(names.end(), inner_discrete.begin(), inner_discrete.end());
  names.insert(names.end(), inner_continuous.begin(), inner_continuous.end());
  names.insert(names.end(), params.begin(), params.end());
  return make_vars(std::move(names));
}

bool TermSignature::is_discrete(const std::string& v) const {
  if (!outer.empty() && v == outer) return !outer_continuous;
  return std::find(inner_discrete.begin(), inner_discrete.end(), v) != inner_discrete.end();
}

bool TermSignature::is_continuous(const std::string& v) const {
  if (!outer.empty() && v == outer) return outer_continuous;
  return std::find(inner_continuous.begin(), inner_continuous.end(), v) != inner_continuous.end();
}

bool TermSignature::is_param(const std::string& v) const {
  return std::find(params.begin(), params.end(), v) != params.end();
}

bool TermSignature::declares(const std::string& v) const {
  return is_discrete(v) || is_continuous(v) || is_param(v);
}

HyperTerm::HyperTerm(TermSignature sig)
    : sig_(std::move(sig)), ring_(sig_.ring()), rational_(RatFun::constant(ring_, 1)) {
  std::vector<std::string> names = *ring_;
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw Error("symbol declared twice in term signature");
  }
}

void HyperTerm::check_linform(const LinForm& f) const {
  for (const auto& [v, c] : f.coeffs) {
    if (!sig_.is_discrete(v)) {
      throw Error("'" + v + "' is not a discrete variable of the term");
    }
  }
  for (const auto& [p, c] : f.constant.params) {
    if (!sig_.is_param(p)) throw Error("'" + p + "' is not a declared parameter");
  }
}

void HyperTerm::check_free_of_discrete(const RatFun& f, const char* what) const {
  for (std::size_t i = 0; i < ring_->size(); ++i) {
    if (sig_.is_discrete((*ring_)[i]) && f.depends_on(i)) {
      throw Error(std::string(what) + " depends on discrete variable '" + (*ring_)[i] + "'");
    }
  }
}

void HyperTerm::add_gamma(LinForm arg, long exponent) {
  check_linform(arg);
  if (exponent == 0) return;
  gammas_.push_back({std::move(arg), exponent});
}

void HyperTerm::add_power(RatFun base, LinForm exponent) {
  base = base.rebase(ring_);
  check_linform(exponent);
  if (base.is_zero()) throw Error("power factor with zero base");
  check_free_of_discrete(base, "power base");
  powers_.push_back({std::move(base), std::move(exponent)});
}

void HyperTerm::add_exp(RatFun argument) {
  argument = argument.rebase(ring_);
  check_free_of_discrete(argument, "exponential argument");
  exps_.push_back({std::move(argument)});
}

void HyperTerm::multiply_rational(const RatFun& r) {
  RatFun x = r.rebase(ring_);
  if (x.is_zero()) throw Error("term multiplied by zero");
  rational_ *= x;
}

HyperTerm HyperTerm::with_signature(const TermSignature& sig) const {
  HyperTerm t(sig);
  for (const auto& g : gammas_) t.add_gamma(g.arg, g.exponent);
  for (const auto& p : powers_) t.add_power(p.base.rebase(t.ring_), p.exponent);
  for (const auto& e : exps_) t.add_exp(e.argument.rebase(t.ring_));
  t.multiply_rational(rational_.rebase(t.ring_));
  return t;
}

HyperTerm HyperTerm::divided_by(const HyperTerm& other) const {
  HyperTerm t = *this;
  for (const auto& g : other.gammas_) t.add_gamma(g.arg, -g.exponent);
  for (const auto& p : other.powers_) t.add_power(p.base.rebase(ring_), -p.exponent);
  for (const auto& e : other.exps_) t.add_exp(-e.argument.rebase(ring_));
  t.multiply_rational(other.rational_.rebase(ring_).inverse());
  return t;
}

HyperTerm HyperTerm::times(const RatFun& r) const {
  HyperTerm t = *this;
  t.multiply_rational(r);
  return t;
}

HyperTerm HyperTerm::substitute_discrete(const std::string& v, long value, const TermSignature& target) const {
  HyperTerm t(target);
  auto fix = [&](LinForm f) {
    long c = f.coeff(v);
    f.coeffs.erase(v);
    f.constant.constant += BigRational(c * value);
    return f;
  };
  for (const auto& g : gammas_) t.add_gamma(fix(g.arg), g.exponent);
  for (const auto& p : powers_) t.add_power(p.base.rebase(t.ring_), fix(p.exponent));
  for (const auto& e : exps_) t.add_exp(e.argument.rebase(t.ring_));
  auto idx = var_index(ring_, v);
  RatFun r = rational_;
  if (idx) r = r.substitute(std::map<std::size_t, MultiPoly>{{*idx, MultiPoly(ring_, value)}});
  t.multiply_rational(r.rebase(t.ring_));
  return t;
}

bool operator==(const HyperTerm& a, const HyperTerm& b) {
  return a.sig_ == b.sig_ && a.gammas_ == b.gammas_ && a.powers_ == b.powers_ && a.exps_ == b.exps_ &&
         a.rational_ == b.rational_;
}

namespace {

std::size_t ring_index(const HyperTerm& f, const std::string& v) {
  auto idx = var_index(f.ring(), v);
  if (!idx) throw Error("unknown variable '" + v + "'");
  return *idx;
}

}  // namespace

RatFun shift_quotient(const HyperTerm& f, const std::string& v) {
  if (!f.signature().is_discrete(v)) throw Error("'" + v + "' is not a discrete variable of the term");
  const Vars& ring = f.ring();
  MultiPoly num(ring, 1), den(ring, 1);
  for (const auto& g : f.gammas()) {
    long c = g.arg.coeff(v);
    if (c == 0) continue;
    MultiPoly arg = g.arg.to_poly(ring);
    MultiPoly prod(ring, 1);
    if (c > 0) {
      for (long t = 0; t < c; ++t) prod *= arg + MultiPoly(ring, t);
    } else {
      for (long t = 1; t <= -c; ++t) prod *= arg - MultiPoly(ring, t);
    }
    // Gamma(L + c)/Gamma(L) is prod for c > 0 and 1/prod for c < 0.
    long e = c > 0 ? g.exponent : -g.exponent;
    if (e > 0) {
      num *= prod.pow(static_cast<unsigned>(e));
    } else {
      den *= prod.pow(static_cast<unsigned>(-e));
    }
  }
  for (const auto& p : f.powers()) {
    long c = p.exponent.coeff(v);
    if (c == 0) continue;
    if (c > 0) {
      num *= p.base.num().pow(static_cast<unsigned>(c));
      den *= p.base.den().pow(static_cast<unsigned>(c));
    } else {
      num *= p.base.den().pow(static_cast<unsigned>(-c));
      den *= p.base.num().pow(static_cast<unsigned>(-c));
    }
  }
  RatFun q(std::move(num), std::move(den));
  const RatFun& r = f.rational();
  std::size_t idx = ring_index(f, v);
  if (r.depends_on(idx)) {
    MultiPoly shifted = MultiPoly::variable(ring, idx) + MultiPoly(ring, 1);
    q *= r.substitute(std::map<std::size_t, MultiPoly>{{idx, shifted}}) / r;
  }
  return q;
}

RatFun derivative_quotient(const HyperTerm& f, const std::string& y) {
  if (!f.signature().is_continuous(y)) throw Error("'" + y + "' is not a continuous variable of the term");
  const Vars& ring = f.ring();
  std::size_t idx = ring_index(f, y);
  RatFun sum(ring);
  for (const auto& p : f.powers()) {
    if (!p.base.depends_on(idx)) continue;
    sum += RatFun(p.exponent.to_poly(ring)) * p.base.derivative(idx) / p.base;
  }
  for (const auto& e : f.exps()) {
    if (e.argument.depends_on(idx)) sum += e.argument.derivative(idx);
  }
  if (f.rational().depends_on(idx)) sum += f.rational().derivative(idx) / f.rational();
  return sum;
}

RatFun word_quotient(const HyperTerm& f, const std::vector<WordOp>& word) {
  const Vars& ring = f.ring();
  RatFun q = RatFun::constant(ring, 1);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    std::string v = it->kind == WordOp::Kind::outer ? f.signature().outer : it->var;
    bool shift = it->kind == WordOp::Kind::shift ||
                 (it->kind == WordOp::Kind::outer && !f.signature().outer_continuous);
    std::size_t idx = ring_index(f, v);
    if (shift) {
      MultiPoly shifted = MultiPoly::variable(ring, idx) + MultiPoly(ring, 1);
      q = q.substitute(std::map<std::size_t, MultiPoly>{{idx, shifted}}) * shift_quotient(f, v);
    } else {
      q = q.derivative(idx) + q * derivative_quotient(f, v);
    }
  }
  return q;
}

namespace {

BigInt factorial(long m) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
  return r;
}

BigRational frac_part(const BigRational& x) {
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - BigRational(fl);
}

// Substitutes assigned parameter values into an affine value.
Affine specialize_affine(Affine a, const Assignment& point) {
  for (auto it = a.params.begin(); it != a.params.end();) {
    auto v = point.find(it->first);
    if (v != point.end()) {
      a.constant += it->second * v->second;
      it = a.params.erase(it);
    } else {
      ++it;
    }
  }
  return a;
}

}  // namespace

SymbolicValue eval_symbolic(const HyperTerm& f, const Assignment& point) {
  const TermSignature& sig = f.signature();
  const Vars& ring = f.ring();
  std::map<std::string, BigInt> discrete;
  for (const auto& name : *ring) {
    if (!sig.is_discrete(name)) continue;
    auto it = point.find(name);
    if (it == point.end()) throw Error("unbound variable '" + name + "'");
    if (it->second.get_den() != 1) throw Error("discrete variable '" + name + "' needs an integer value");
    discrete.emplace(name, it->second.get_num());
  }
  std::map<std::size_t, BigRational> fixed;
  for (std::size_t i = 0; i < ring->size(); ++i) {
    auto it = point.find((*ring)[i]);
    if (it != point.end()) fixed.emplace(i, it->second);
  }

  // Gamma factors: integer arguments are evaluated directly (poles counted);
  // the rest must pair up into rising factorials within classes that differ
  // by integers.
  long num_poles = 0, den_poles = 0;
  BigRational int_part = 1;
  struct Member {
    BigRational constant;
    long exponent;
  };
  std::map<std::pair<std::map<std::string, BigRational>, BigRational>, std::vector<Member>> classes;
  for (const auto& g : f.gammas()) {
    Affine a = specialize_affine(g.arg.evaluate(discrete), point);
    if (a.is_integer()) {
      BigInt c = a.constant.get_num();
      if (c >= 1) {
        BigInt fac = factorial(c.get_si() - 1);
        BigRational v(fac);
        for (long e = 0; e < std::abs(g.exponent); ++e) {
          if (g.exponent > 0) {
            int_part *= v;
          } else {
            int_part /= v;
          }
        }
      } else if (g.exponent > 0) {
        num_poles += g.exponent;
      } else {
        den_poles += -g.exponent;
      }
      continue;
    }
    classes[{a.params, frac_part(a.constant)}].push_back({a.constant, g.exponent});
  }
  if (den_poles > num_poles) return {RatFun(ring), RatFun(ring)};
  if (num_poles > 0) throw Error("pole of term");

  RatFun value = RatFun::constant(ring, int_part);
  for (const auto& [key, members] : classes) {
    long total = 0;
    for (const auto& m : members) total += m.exponent;
    if (total != 0) {
      if (!key.first.empty()) {
        throw Error("unbound parameter '" + key.first.begin()->first + "' in gamma factor");
      }
      throw Error("non-integer gamma argument");
    }
    BigRational base = members.front().constant;
    for (const auto& m : members) base = std::min(base, m.constant);
    Affine param_part;
    param_part.params = key.first;
    MultiPoly x = param_part.to_poly(ring);
    MultiPoly num(ring, 1), den(ring, 1);
    for (const auto& m : members) {
      BigRational d = m.constant - base;
      long steps = d.get_num().get_si();
      MultiPoly rising(ring, 1);
      for (long t = 0; t < steps; ++t) rising *= x + MultiPoly(ring, base + t);
      if (m.exponent > 0) {
        num *= rising.pow(static_cast<unsigned>(m.exponent));
      } else {
        den *= rising.pow(static_cast<unsigned>(-m.exponent));
      }
    }
    value *= RatFun(std::move(num), std::move(den));
  }

  try {
    for (const auto& p : f.powers()) {
      Affine e = specialize_affine(p.exponent.evaluate(discrete), point);
      if (!e.is_integer()) {
        if (!e.params.empty()) throw Error("unbound parameter '" + e.params.begin()->first + "' in exponent");
        throw Error("non-integer exponent");
      }
      RatFun b = p.base.specialize(fixed);
      long k = e.constant.get_num().get_si();
      if (b.is_zero() && k < 0) throw Error("pole of term");
      value *= b.pow(k);
    }
    RatFun arg(ring);
    for (const auto& e : f.exps()) arg += e.argument.specialize(fixed);
    value *= f.rational().specialize(fixed);
    return {value, arg};
  } catch (const Error& e) {
    if (std::string(e.what()) == "pole") throw Error("pole of term");
    throw;
  }
}

TermValue eval_term(const HyperTerm& f, const Assignment& point) {
  const TermSignature& sig = f.signature();
  for (const auto& name : *f.ring()) {
    if (point.count(name)) continue;
    if (sig.is_param(name)) throw Error("unbound parameter '" + name + "'");
    throw Error("unbound variable '" + name + "'");
  }
  SymbolicValue v = eval_symbolic(f, point);
  return {v.cofactor.num().constant_term() / v.cofactor.den().constant_term(),
          v.exp_argument.num().constant_term() / v.exp_argument.den().constant_term()};
}

bool SupportBox::empty() const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) return true;
  }
  return false;
}

bool SupportBox::contains(const std::vector<long>& p) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

}  // namespace

std::optional<SupportBox> propagate_box(const std::vector<std::string>& vars,
                                        const std::vector<LatticeConstraint>& constraints) {
  const std::size_t r = vars.size();
  std::vector<std::optional<long>> lo(r), hi(r);
  auto index = [&](const std::string& v) {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
  };
  for (int round = 0; round < 256; ++round) {
    bool changed = false;
    for (const auto& c : constraints) {
      for (const auto& [v, a] : c.coeffs) {
        std::size_t i = index(v);
        if (i == r || a == 0) continue;
        // a * v >= -(rest); need an upper bound on rest.
        std::optional<long> rest = c.constant;
        for (const auto& [u, b] : c.coeffs) {
          if (u == v || b == 0) continue;
          std::size_t j = index(u);
          if (j == r) {
            rest.reset();
            break;
          }
          const auto& bound = b > 0 ? hi[j] : lo[j];
          if (!bound) {
            rest.reset();
            break;
          }
          *rest += b * *bound;
        }
        if (!rest) continue;
        if (a > 0) {
          long nl = ceil_div(-*rest, a);
          if (!lo[i] || nl > *lo[i]) {
            lo[i] = nl;
            changed = true;
          }
        } else {
          long nh = floor_div(*rest, -a);
          if (!hi[i] || nh < *hi[i]) {
            hi[i] = nh;
            changed = true;
          }
        }
      }
    }
    bool infeasible = false;
    for (std::size_t i = 0; i < r; ++i) {
      if (lo[i] && hi[i] && *lo[i] > *hi[i]) infeasible = true;
    }
    if (!changed || infeasible) break;
  }
  SupportBox box;
  box.vars = vars;
  for (std::size_t i = 0; i < r; ++i) {
    if (!lo[i] || !hi[i]) return std::nullopt;
    box.lo.push_back(*lo[i]);
    box.hi.push_back(*hi[i]);
  }
  return box;
}

std::optional<SupportBox> support_bounds(const HyperTerm& f, long n0) {
  const TermSignature& sig = f.signature();
  std::map<LinForm, long> net;
  for (const auto& g : f.gammas()) net[g.arg] += g.exponent;
  std::map<std::string, BigInt> outer;
  if (!sig.outer_continuous && !sig.outer.empty()) outer.emplace(sig.outer, n0);
  std::vector<LatticeConstraint> constraints;
  for (const auto& [arg, e] : net) {
    if (e >= 0) continue;
    Affine c = arg.evaluate(outer);
    if (!c.is_integer()) continue;
    LatticeConstraint lc;
    for (const auto& [v, a] : arg.coeffs) {
      if (v != sig.outer) lc.coeffs[v] = a;
    }
    // 1/Gamma(L) vanishes for L <= 0, so nonzero values need L - 1 >= 0.
    lc.constant = c.constant.get_num().get_si() - 1;
    constraints.push_back(std::move(lc));
  }
  return propagate_box(sig.inner_discrete, constraints);
}

}  // namespace wz
