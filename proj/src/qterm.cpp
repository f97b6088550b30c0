#include "wz/qterm.hpp"

#include <algorithm>

namespace wz {

Vars QSignature::ring() const {
  std::vector<std::string> names{"q", symbol_for(outer)};
  for (const auto& k : inner) names.push_back(symbol_for(k));
  names.insert(names.end(), params.begin(), params.end());
  return make_vars(std::move(names));
}

Vars QSignature::discrete_ring() const {
  std::vector<std::string> names{outer};
  names.insert(names.end(), inner.begin(), inner.end());
  return make_vars(std::move(names));
}

bool QSignature::is_discrete(const std::string& v) const {
  return v == outer || std::find(inner.begin(), inner.end(), v) != inner.end();
}

bool QSignature::is_param(const std::string& v) const {
  return std::find(params.begin(), params.end(), v) != params.end();
}

QHyperTerm::QHyperTerm(QSignature sig)
    : sig_(std::move(sig)), ring_(sig_.ring()), dring_(sig_.discrete_ring()),
      rational_(RatFun::constant(ring_, 1)) {
  if (sig_.outer.empty()) throw Error("q-term needs an outer variable");
  std::vector<std::string> names = *ring_;
  names.insert(names.end(), sig_.inner.begin(), sig_.inner.end());
  names.push_back(sig_.outer);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw Error("symbol declared twice in q-term signature");
  }
}

void QHyperTerm::check_linform(const LinForm& f, bool integer_constant) const {
  for (const auto& [v, c] : f.coeffs) {
    if (!sig_.is_discrete(v)) throw Error("'" + v + "' is not a discrete variable of the q-term");
  }
  if (integer_constant && !f.constant.is_integer()) {
    throw Error("q-exponent constants must be integers");
  }
}

void QHyperTerm::check_parametric(const RatFun& f, const char* what) const {
  for (std::size_t i = 1; i < 2 + sig_.inner.size(); ++i) {
    if (f.depends_on(i)) throw Error(std::string(what) + " depends on a discrete variable");
  }
}

void QHyperTerm::add_qpoch(RatFun base, LinForm offset, LinForm length, long exponent) {
  base = base.rebase(ring_);
  check_parametric(base, "q-Pochhammer base");
  if (base.is_zero()) throw Error("q-Pochhammer with zero base");
  check_linform(offset, true);
  check_linform(length, true);
  if (exponent == 0) return;
  qpochs_.push_back({std::move(base), std::move(offset), std::move(length), exponent});
}

void QHyperTerm::add_qpower(MultiPoly exponent) {
  exponent = exponent.rebase(dring_);
  if (exponent.total_degree() > 2) throw Error("q-power exponent must have degree at most 2");
  // Integer-valued quadratic: integer value at 0 and integer first differences.
  BigRational c0 = exponent.constant_term();
  if (c0.get_den() != 1) throw Error("q-power exponent must be integer-valued");
  for (std::size_t i = 0; i < dring_->size(); ++i) {
    MultiPoly x = MultiPoly::variable(dring_, i);
    MultiPoly diff = exponent.substitute({{i, x + MultiPoly(dring_, 1)}}) - exponent;
    for (const auto& [e, c] : diff.terms()) {
      if (c.get_den() != 1) throw Error("q-power exponent must be integer-valued");
    }
  }
  if (!exponent.is_zero()) qpowers_.push_back({std::move(exponent)});
}

void QHyperTerm::add_geometric(RatFun base, LinForm exponent) {
  base = base.rebase(ring_);
  check_parametric(base, "geometric base");
  if (base.is_zero()) throw Error("geometric factor with zero base");
  check_linform(exponent, true);
  geometrics_.push_back({std::move(base), std::move(exponent)});
}

void QHyperTerm::multiply_rational(const RatFun& r) {
  RatFun x = r.rebase(ring_);
  check_parametric(x, "rational factor");
  if (x.is_zero()) throw Error("term multiplied by zero");
  rational_ *= x;
}

QHyperTerm QHyperTerm::with_signature(const QSignature& sig) const {
  QHyperTerm t(sig);
  for (const auto& p : qpochs_) t.add_qpoch(p.base.rebase(t.ring_), p.offset, p.length, p.exponent);
  for (const auto& p : qpowers_) t.add_qpower(p.exponent.rebase(t.dring_));
  for (const auto& g : geometrics_) t.add_geometric(g.base.rebase(t.ring_), g.exponent);
  t.multiply_rational(rational_.rebase(t.ring_));
  return t;
}

bool operator==(const QHyperTerm& a, const QHyperTerm& b) {
  return a.sig_ == b.sig_ && a.qpochs_ == b.qpochs_ && a.qpowers_ == b.qpowers_ &&
         a.geometrics_ == b.geometrics_ && a.rational_ == b.rational_;
}

RatFun q_power(const Vars& ring, const LinForm& f) {
  if (!f.constant.is_integer()) throw Error("q-exponent constants must be integers");
  MultiPoly num(ring, 1), den(ring, 1);
  MultiPoly q = MultiPoly::variable(ring, 0);
  auto mul = [&](const MultiPoly& x, long e) {
    if (e > 0) num *= x.pow(static_cast<unsigned>(e));
    if (e < 0) den *= x.pow(static_cast<unsigned>(-e));
  };
  mul(q, f.constant.constant.get_num().get_si());
  for (const auto& [v, c] : f.coeffs) mul(MultiPoly::variable(ring, QSignature::symbol_for(v)), c);
  return RatFun(std::move(num), std::move(den));
}

namespace {

// (b q^c; q)_inf / (b; q)_inf for integer c.
RatFun inf_ratio(const RatFun& b, long c) {
  const Vars& ring = b.vars();
  RatFun one = RatFun::constant(ring, 1);
  RatFun q = RatFun::variable(ring, "q");
  RatFun prod = one;
  if (c > 0) {
    RatFun qt = one;
    for (long t = 0; t < c; ++t) {
      prod *= one - b * qt;
      qt *= q;
    }
    return prod.inverse();
  }
  RatFun qinv = q.inverse();
  RatFun qt = qinv;
  for (long t = 1; t <= -c; ++t) {
    prod *= one - b * qt;
    qt *= qinv;
  }
  return prod;
}

}  // namespace

RatFun q_shift_quotient(const QHyperTerm& f, const std::string& v) {
  const QSignature& sig = f.signature();
  if (!sig.is_discrete(v)) throw Error("'" + v + "' is not a discrete variable of the q-term");
  const Vars& ring = f.ring();
  RatFun result = RatFun::constant(ring, 1);
  for (const auto& p : f.qpochs()) {
    long c1 = p.offset.coeff(v);
    long c2 = p.length.coeff(v);
    if (c1 == 0 && c2 == 0) continue;
    RatFun b = p.base * q_power(ring, p.offset);
    RatFun ratio = inf_ratio(b, c1) / inf_ratio(b * q_power(ring, p.length), c1 + c2);
    result *= ratio.pow(p.exponent);
  }
  const Vars& dring = f.discrete_ring();
  std::size_t di = *var_index(dring, v);
  for (const auto& p : f.qpowers()) {
    MultiPoly x = MultiPoly::variable(dring, di);
    MultiPoly diff = p.exponent.substitute({{di, x + MultiPoly(dring, 1)}}) - p.exponent;
    if (diff.is_zero()) continue;
    LinForm lf;
    for (const auto& [e, c] : diff.terms()) {
      std::size_t j = 0;
      while (j < e.size() && e[j] == 0) ++j;
      if (j == e.size()) {
        lf.constant.constant += c;
      } else {
        lf.coeffs[(*dring)[j]] += c.get_num().get_si();
      }
    }
    result *= q_power(ring, lf);
  }
  for (const auto& g : f.geometrics()) {
    long c = g.exponent.coeff(v);
    if (c != 0) result *= g.base.pow(c);
  }
  return result;
}

RatFun q_eval_symbolic(const QHyperTerm& f, const Assignment& point) {
  const QSignature& sig = f.signature();
  const Vars& ring = f.ring();
  std::map<std::string, BigInt> discrete;
  std::vector<BigRational> dpoint;
  for (const auto& name : *f.discrete_ring()) {
    auto it = point.find(name);
    if (it == point.end()) throw Error("unbound variable '" + name + "'");
    if (it->second.get_den() != 1) throw Error("discrete variable '" + name + "' needs an integer value");
    discrete.emplace(name, it->second.get_num());
    dpoint.push_back(it->second);
  }
  std::map<std::size_t, BigRational> fixed;
  if (auto it = point.find("q"); it != point.end()) fixed.emplace(0, it->second);
  for (std::size_t i = 2 + sig.inner.size(); i < ring->size(); ++i) {
    auto it = point.find((*ring)[i]);
    if (it != point.end()) fixed.emplace(i, it->second);
  }
  // q^v symbols take the value q^(v's integer value).
  RatFun q = RatFun::variable(ring, "q").specialize(fixed);
  auto qpow = [&](const BigInt& e) {
    return q.pow(e.get_si());
  };

  long zeros = 0, poles = 0;
  RatFun value = RatFun::constant(ring, 1);
  RatFun one = RatFun::constant(ring, 1);
  for (const auto& p : f.qpochs()) {
    Affine off = p.offset.evaluate(discrete);
    Affine len = p.length.evaluate(discrete);
    long l1 = off.constant.get_num().get_si();
    long m = len.constant.get_num().get_si();
    RatFun a = p.base.specialize(fixed);
    RatFun num = one, den = one;
    long nz = 0, dz = 0;
    auto factor = [&](long t, RatFun& into, long& zero_count) {
      RatFun x = one - a * qpow(BigInt(l1 + t));
      if (x.is_zero()) {
        ++zero_count;
      } else {
        into *= x;
      }
    };
    if (m >= 0) {
      for (long t = 0; t < m; ++t) factor(t, num, nz);
    } else {
      for (long t = 1; t <= -m; ++t) factor(-t, den, dz);
    }
    RatFun poch = num / den;
    value *= poch.pow(p.exponent);
    long e = p.exponent;
    if (e > 0) {
      zeros += nz * e;
      poles += dz * e;
    } else {
      zeros += dz * -e;
      poles += nz * -e;
    }
  }
  if (zeros > poles) return RatFun(ring);
  if (poles > 0) throw Error("pole of term");
  for (const auto& p : f.qpowers()) {
    BigRational e = p.exponent.evaluate(dpoint);
    value *= qpow(e.get_num());
  }
  for (const auto& g : f.geometrics()) {
    Affine e = g.exponent.evaluate(discrete);
    RatFun b = g.base.specialize(fixed);
    long k = e.constant.get_num().get_si();
    if (b.is_zero() && k < 0) throw Error("pole of term");
    value *= b.pow(k);
  }
  value *= f.rational().specialize(fixed);
  return value;
}

BigRational q_eval_term(const QHyperTerm& f, const Assignment& point) {
  if (!point.count("q")) throw Error("unbound parameter 'q'");
  for (const auto& p : f.signature().params) {
    if (!point.count(p)) throw Error("unbound parameter '" + p + "'");
  }
  RatFun v = q_eval_symbolic(f, point);
  return v.num().constant_term() / v.den().constant_term();
}

std::optional<SupportBox> q_support_bounds(const QHyperTerm& f, long n0) {
  const QSignature& sig = f.signature();
  std::map<std::string, BigInt> outer{{sig.outer, BigInt(n0)}};
  std::map<std::tuple<std::string, LinForm, LinForm>, long> net;
  std::map<std::tuple<std::string, LinForm, LinForm>, const QPochFactor*> rep;
  for (const auto& p : f.qpochs()) {
    auto key = std::make_tuple(p.base.to_string(), p.offset, p.length);
    net[key] += p.exponent;
    rep[key] = &p;
  }
  std::vector<LatticeConstraint> constraints;
  for (const auto& [key, e] : net) {
    if (e >= 0) continue;
    const QPochFactor& p = *rep[key];
    // (q^c; q)_L with constant c >= 1 is infinite once L <= -c, which sends a
    // denominator factor to zero.
    if (!p.base.is_one() || !p.offset.is_constant()) continue;
    long c = p.offset.constant.constant.get_num().get_si();
    if (c < 1) continue;
    Affine len = p.length.evaluate(outer);
    LatticeConstraint lc;
    for (const auto& [v, a] : p.length.coeffs) {
      if (v != sig.outer) lc.coeffs[v] = a;
    }
    lc.constant = len.constant.get_num().get_si() + c - 1;
    constraints.push_back(std::move(lc));
  }
  return propagate_box(sig.inner, constraints);
}

}  // namespace wz
