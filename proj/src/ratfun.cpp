#include "wz/ratfun.hpp"

namespace wz {

RatFun::RatFun() : num_(), den_(num_.vars(), 1) {}

RatFun::RatFun(Vars vars) : num_(vars), den_(vars, 1) {}

RatFun::RatFun(MultiPoly num) : num_(std::move(num)), den_(num_.vars(), 1) { normalize(); }

RatFun::RatFun(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (!same_vars(num_.vars(), den_.vars())) throw Error("variable universe mismatch");
  if (den_.is_zero()) throw Error("zero denominator");
  normalize();
}

RatFun RatFun::constant(const Vars& vars, const BigRational& c) { return RatFun(MultiPoly(vars, c)); }

RatFun RatFun::variable(const Vars& vars, std::string_view name) {
  return RatFun(MultiPoly::variable(vars, name));
}

void RatFun::normalize() {
  if (num_.is_zero()) {
    den_ = MultiPoly(num_.vars(), 1);
    return;
  }
  if (!den_.is_constant()) {
    MultiPoly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
  }
  normalize_scale();
}

void RatFun::normalize_scale() {
  if (num_.is_zero()) {
    den_ = MultiPoly(num_.vars(), 1);
    return;
  }
  // Scale so that both sides are integral with no shared integer factor.
  BigRational cn = num_.content();
  BigRational cd = den_.content();
  BigInt g, l;
  mpz_gcd(g.get_mpz_t(), cn.get_num_mpz_t(), cd.get_num_mpz_t());
  mpz_lcm(l.get_mpz_t(), cn.get_den_mpz_t(), cd.get_den_mpz_t());
  BigRational scale(l, g);
  scale.canonicalize();
  if (den_.leading_coeff() < 0) scale = -scale;
  if (scale != 1) {
    num_ *= scale;
    den_ *= scale;
  }
}

RatFun RatFun::operator-() const { return RatFun(-num_, den_, Raw{}); }

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (!same_vars(a.vars(), b.vars())) throw Error("variable universe mismatch");
  if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
  // With g = gcd(da, db), the sum's numerator can only share factors with g.
  MultiPoly g = gcd(a.den_, b.den_);
  MultiPoly ad = exact_div(a.den_, g);
  MultiPoly bd = exact_div(b.den_, g);
  MultiPoly t = a.num_ * bd + b.num_ * ad;
  if (g.is_constant()) return RatFun::reduced(std::move(t), a.den_ * bd);
  MultiPoly h = gcd(t, g);
  if (h.is_one()) return RatFun::reduced(std::move(t), a.den_ * bd);
  return RatFun::reduced(exact_div(t, h), ad * exact_div(b.den_, h));
}

RatFun RatFun::reduced(MultiPoly num, MultiPoly den) {
  RatFun r(std::move(num), std::move(den), Raw{});
  r.normalize_scale();
  return r;
}

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  if (a.is_zero() || b.is_zero()) return RatFun(a.vars());
  if (!same_vars(a.vars(), b.vars())) throw Error("variable universe mismatch");
  if (a.is_polynomial() && b.is_polynomial()) return RatFun::reduced(a.num_ * b.num_, a.den_ * b.den_);
  // Both operands are reduced, so cross-cancelling gives a reduced product.
  MultiPoly g1 = gcd(a.num_, b.den_);
  MultiPoly g2 = gcd(b.num_, a.den_);
  MultiPoly n = exact_div(a.num_, g1) * exact_div(b.num_, g2);
  MultiPoly d = exact_div(a.den_, g2) * exact_div(b.den_, g1);
  return RatFun::reduced(std::move(n), std::move(d));
}

RatFun operator/(const RatFun& a, const RatFun& b) {
  if (b.is_zero()) throw Error("zero denominator");
  return a * b.inverse();
}

RatFun RatFun::inverse() const {
  if (is_zero()) throw Error("zero denominator");
  return RatFun(den_, num_);
}

RatFun RatFun::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  return RatFun(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)), Raw{});
}

RatFun RatFun::derivative(std::size_t var) const {
  if (is_polynomial()) return RatFun(num_.derivative(var) * (1 / den_.leading_coeff()));
  return RatFun(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

RatFun RatFun::substitute(const std::map<std::size_t, MultiPoly>& map) const {
  MultiPoly d = den_.substitute(map);
  if (d.is_zero()) throw Error("degenerate substitution");
  return RatFun(num_.substitute(map), std::move(d));
}

RatFun RatFun::substitute(const std::map<std::string, MultiPoly>& map) const {
  std::map<std::size_t, MultiPoly> idx;
  for (const auto& [name, p] : map) {
    auto i = var_index(vars(), name);
    if (!i) throw Error("substitution of unknown symbol '" + name + "'");
    idx.emplace(*i, p);
  }
  return substitute(idx);
}

RatFun RatFun::specialize(const std::map<std::size_t, BigRational>& values) const {
  std::map<std::size_t, MultiPoly> map;
  for (const auto& [i, v] : values) map.emplace(i, MultiPoly(vars(), v));
  MultiPoly d = den_.substitute(map);
  if (d.is_zero()) throw Error("pole");
  return RatFun(num_.substitute(map), std::move(d));
}

BigRational RatFun::evaluate(std::span<const BigRational> point) const {
  BigRational d = den_.evaluate(point);
  if (d == 0) throw Error("pole");
  return num_.evaluate(point) / d;
}

RatFun RatFun::rebase(const Vars& target) const {
  return RatFun(num_.rebase(target), den_.rebase(target));
}

std::string RatFun::to_string() const {
  if (den_.is_one()) return num_.to_string();
  std::string n = num_.size() > 1 ? "(" + num_.to_string() + ")" : num_.to_string();
  std::string d = den_.size() > 1 || !den_.is_constant() ? "(" + den_.to_string() + ")" : den_.to_string();
  return n + "/" + d;
}

RatFun ratfun_ops(const RatFun& a, const RatFun& b, RatOp op) {
  if (!same_vars(a.vars(), b.vars())) throw Error("variable universe mismatch");
  switch (op) {
    case RatOp::add: return a + b;
    case RatOp::sub: return a - b;
    case RatOp::mul: return a * b;
    case RatOp::div: return a / b;
  }
  throw Error("unknown rational-function operation");
}

}  // namespace wz
