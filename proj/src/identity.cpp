#include "wz/identity.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <memory>
#include <sstream>

namespace wz {

namespace {

// sum of coefficient * exp(argument), one entry per distinct argument
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(Vars ring) : ring_(std::move(ring)) {}

  const Vars& ring() const { return ring_; }

  void add(const RatFun& arg, const RatFun& coef) {
    if (coef.is_zero()) return;
    std::string key = arg.to_string();
    auto it = parts_.find(key);
    if (it == parts_.end()) {
      parts_.emplace(key, std::make_pair(arg, coef));
      return;
    }
    it->second.second += coef;
    if (it->second.second.is_zero()) parts_.erase(it);
  }

  ExpSum& operator+=(const ExpSum& o) {
    for (const auto& [key, part] : o.parts_) add(part.first, part.second);
    return *this;
  }

  ExpSum scaled(const RatFun& c) const {
    ExpSum out(ring_);
    for (const auto& [key, part] : parts_) out.add(part.first, part.second * c);
    return out;
  }

  ExpSum derivative(std::size_t var) const {
    ExpSum out(ring_);
    for (const auto& [key, part] : parts_) {
      out.add(part.first, part.second.derivative(var) + part.second * part.first.derivative(var));
    }
    return out;
  }

  ExpSum specialized(const std::map<std::size_t, BigRational>& values) const {
    ExpSum out(ring_);
    for (const auto& [key, part] : parts_) out.add(part.first.specialize(values), part.second.specialize(values));
    return out;
  }

  ExpSum rebased(const Vars& target) const {
    ExpSum out(target);
    for (const auto& [key, part] : parts_) out.add(part.first.rebase(target), part.second.rebase(target));
    return out;
  }

  bool is_zero() const { return parts_.empty(); }
  friend bool operator==(const ExpSum& a, const ExpSum& b) { return a.parts_ == b.parts_; }

  RatFun plain() const {
    if (parts_.empty()) return RatFun(ring_);
    if (parts_.size() == 1 && parts_.begin()->second.first.is_zero()) return parts_.begin()->second.second;
    throw Error("numeric check needs exp-free terms");
  }

  bool finite_at(const std::map<std::size_t, BigRational>& values) const {
    for (const auto& [key, part] : parts_) {
      for (const RatFun* r : {&part.first, &part.second}) {
        std::map<std::size_t, MultiPoly> sub;
        for (const auto& [i, v] : values) sub.emplace(i, MultiPoly(ring_, v));
        if (r->den().substitute(sub).is_zero()) return false;
      }
    }
    return true;
  }

  std::string to_string() const {
    if (parts_.empty()) return "0";
    std::string out;
    for (const auto& [key, part] : parts_) {
      if (!out.empty()) out += " + ";
      if (part.first.is_zero()) {
        out += part.second.to_string();
      } else {
        out += "(" + part.second.to_string() + ")*exp(" + part.first.to_string() + ")";
      }
    }
    return out;
  }

 private:
  Vars ring_;
  std::map<std::string, std::pair<RatFun, RatFun>> parts_;
};

BigInt factorial(long m) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
  return r;
}

Affine specialized(const Affine& a, const Assignment& point) {
  Affine out;
  out.constant = a.constant;
  for (const auto& [p, c] : a.params) {
    auto it = point.find(p);
    if (it != point.end()) {
      out.constant += c * it->second;
    } else {
      out.params.emplace(p, c);
    }
  }
  return out;
}

bool is_pole_error(const Error& e) { return std::string(e.what()).find("pole") != std::string::npos; }

// Value of r F at a lattice point as the limit along outer = n0 + eps, which
// keeps the certified relation valid at every integer point. Throws "pole of
// term" when the limit is infinite.
ExpSum limit_value(const HyperTerm& f, const RatFun* r, const Assignment& point) {
  const TermSignature& sig = f.signature();
  const Vars& ring = f.ring();
  std::map<std::string, BigInt> discrete;
  for (const auto& [name, v] : point) {
    if (sig.is_discrete(name)) discrete.emplace(name, v.get_num());
  }
  const bool generic = !sig.outer_continuous;
  std::map<LinForm, long> net;
  for (const auto& g : f.gammas()) net[g.arg] += g.exponent;

  HyperTerm rest(sig);
  long order = 0;
  bool hard_zero = false, hard_pole = false;
  BigRational residue = 1;
  for (const auto& [arg, e] : net) {
    if (e == 0) continue;
    Affine a = specialized(arg.evaluate(discrete), point);
    if (a.is_integer() && a.constant <= 0) {
      long c = generic ? arg.coeff(sig.outer) : 0;
      if (c == 0) {
        (e > 0 ? hard_pole : hard_zero) = true;
        continue;
      }
      // Gamma(-m + c eps) ~ (-1)^m / (m! c eps)
      long m = -a.constant.get_num().get_si();
      BigRational res(m % 2 ? -1 : 1);
      res /= BigRational(factorial(m) * c);
      res.canonicalize();
      for (long i = 0; i < std::abs(e); ++i) residue = e > 0 ? BigRational(residue * res) : BigRational(residue / res);
      order -= e;
      continue;
    }
    rest.add_gamma(arg, e);
  }
  ExpSum out(ring);
  if (hard_pole) throw Error("pole of term");
  if (hard_zero) return out;
  for (const auto& p : f.powers()) rest.add_power(p.base, p.exponent);
  for (const auto& x : f.exps()) rest.add_exp(x.argument);

  RatFun total = r ? f.rational() * *r : f.rational();
  std::map<std::size_t, MultiPoly> sub;
  std::size_t outer_index = 0;
  for (std::size_t i = 0; i < ring->size(); ++i) {
    const std::string& name = (*ring)[i];
    auto it = point.find(name);
    if (it == point.end()) continue;
    if (generic && name == sig.outer) {
      outer_index = i;
      sub.emplace(i, MultiPoly::variable(ring, i) + MultiPoly(ring, it->second));
    } else {
      sub.emplace(i, MultiPoly(ring, it->second));
    }
  }
  MultiPoly num = total.num().substitute(sub), den = total.den().substitute(sub);
  if (den.is_zero()) throw Error("pole of term");
  if (num.is_zero()) return out;
  RatFun lead;
  if (generic) {
    auto first = [](const std::vector<MultiPoly>& c) {
      std::size_t i = 0;
      while (c[i].is_zero()) ++i;
      return i;
    };
    auto cn = num.coefficients_in(outer_index), cd = den.coefficients_in(outer_index);
    std::size_t vn = first(cn), vd = first(cd);
    order += static_cast<long>(vn) - static_cast<long>(vd);
    lead = RatFun(cn[vn], cd[vd]);
  } else {
    lead = RatFun(num, den);
  }
  if (order > 0) return out;
  if (order < 0) throw Error("pole of term");
  SymbolicValue v = eval_symbolic(rest, point);
  out.add(v.exp_argument, v.cofactor * lead * RatFun::constant(ring, residue));
  return out;
}

// q^v -> q^value for the given symbols, clearing negative powers of q.
std::optional<RatFun> q_specialize(const RatFun& r, const std::map<std::size_t, long>& values) {
  const Vars& ring = r.vars();
  std::map<std::size_t, int> top;
  for (const auto& [i, v] : values) top[i] = std::max(r.num().degree(i), r.den().degree(i));
  auto apply = [&](const MultiPoly& p) {
    MultiPoly out(ring);
    for (const auto& [e, c] : p.terms()) {
      Exponents x = e;
      long q = x[0];
      for (const auto& [i, v] : values) {
        long ei = x[i];
        q += v >= 0 ? v * ei : -v * (top[i] - ei);
        x[i] = 0;
      }
      x[0] = static_cast<std::uint32_t>(q);
      out += MultiPoly::monomial(ring, std::move(x), c);
    }
    return out;
  };
  MultiPoly d = apply(r.den());
  if (d.is_zero()) return std::nullopt;
  return RatFun(apply(r.num()), d);
}

std::optional<RatFun> specialize_or_pole(const RatFun& r, const std::map<std::size_t, BigRational>& values) {
  std::map<std::size_t, MultiPoly> sub;
  for (const auto& [i, v] : values) sub.emplace(i, MultiPoly(r.vars(), v));
  MultiPoly d = r.den().substitute(sub);
  if (d.is_zero()) return std::nullopt;
  return RatFun(r.num().substitute(sub), d);
}

// Summand family of a lattice sum; values are returned in the target ring.
class Family {
 public:
  explicit Family(Vars target) : target_(std::move(target)) {}
  virtual ~Family() = default;

  const Vars& target() const { return target_; }
  virtual const std::vector<std::string>& inner() const = 0;
  virtual std::optional<SupportBox> support(long n0) const = 0;
  /// r F at the lattice point; throws on a pole.
  virtual ExpSum value(long n0, const std::vector<long>& k, const RatFun* r) const = 0;
  /// r (over the term ring) at the lattice point; nullopt at a pole.
  virtual std::optional<RatFun> at(const RatFun& r, long n0, const std::vector<long>& k) const = 0;

  Assignment extra;

 protected:
  Vars target_;
};

class ClassicalFamily : public Family {
 public:
  ClassicalFamily(const HyperTerm& f, Vars target) : Family(std::move(target)), f_(f) {}

  const std::vector<std::string>& inner() const override { return f_.signature().inner_discrete; }
  std::optional<SupportBox> support(long n0) const override { return support_bounds(f_, n0); }

  ExpSum value(long n0, const std::vector<long>& k, const RatFun* r) const override {
    return limit_value(f_, r, point(n0, k)).rebased(target_);
  }

  std::optional<RatFun> at(const RatFun& r, long n0, const std::vector<long>& k) const override {
    const TermSignature& sig = f_.signature();
    std::map<std::size_t, BigRational> values;
    if (!sig.outer_continuous) values.emplace(*var_index(f_.ring(), sig.outer), n0);
    for (std::size_t i = 0; i < k.size(); ++i) values.emplace(*var_index(f_.ring(), sig.inner_discrete[i]), k[i]);
    return specialize_or_pole(r, values);
  }

 private:
  Assignment point(long n0, const std::vector<long>& k) const {
    Assignment a = extra;
    const TermSignature& sig = f_.signature();
    if (!sig.outer_continuous) a[sig.outer] = n0;
    for (std::size_t i = 0; i < k.size(); ++i) a[sig.inner_discrete[i]] = k[i];
    return a;
  }

  HyperTerm f_;
};

class QFamily : public Family {
 public:
  QFamily(const QHyperTerm& f, Vars target) : Family(std::move(target)), f_(f) {}

  const std::vector<std::string>& inner() const override { return f_.signature().inner; }
  std::optional<SupportBox> support(long n0) const override { return q_support_bounds(f_, n0); }

  ExpSum value(long n0, const std::vector<long>& k, const RatFun* r) const override {
    const QSignature& sig = f_.signature();
    Assignment a = extra;
    a[sig.outer] = n0;
    for (std::size_t i = 0; i < k.size(); ++i) a[sig.inner[i]] = k[i];
    RatFun v = q_eval_symbolic(f_, a);
    if (r) {
      auto x = at(*r, n0, k);
      if (x) x = specialize_or_pole(*x, extra_values());
      if (!x) throw Error("pole of term");
      v = v * *x;
    }
    ExpSum out(f_.ring());
    out.add(RatFun(f_.ring()), v);
    return out.rebased(target_);
  }

  std::optional<RatFun> at(const RatFun& r, long n0, const std::vector<long>& k) const override {
    const QSignature& sig = f_.signature();
    std::map<std::size_t, long> values;
    values.emplace(*var_index(f_.ring(), QSignature::symbol_for(sig.outer)), n0);
    for (std::size_t i = 0; i < k.size(); ++i) {
      values.emplace(*var_index(f_.ring(), QSignature::symbol_for(sig.inner[i])), k[i]);
    }
    return q_specialize(r, values);
  }

 private:
  std::map<std::size_t, BigRational> extra_values() const {
    std::map<std::size_t, BigRational> out;
    for (const auto& [name, v] : extra) {
      if (auto i = var_index(f_.ring(), name)) out.emplace(*i, v);
    }
    return out;
  }

  QHyperTerm f_;
};

void for_each_point(const std::vector<long>& lo, const std::vector<long>& hi,
                    const std::function<void(const std::vector<long>&)>& fn) {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) return;
  }
  std::vector<long> p = lo;
  while (true) {
    fn(p);
    std::size_t i = 0;
    for (; i < p.size(); ++i) {
      if (p[i] < hi[i]) {
        ++p[i];
        break;
      }
      p[i] = lo[i];
    }
    if (i == p.size()) break;
  }
}

std::optional<SupportBox> checked_support(const Family& fam, long n0) {
  auto b = fam.support(n0);
  if (!b) throw Error("compact-support hypothesis fails");
  return b;
}

// Sums over the support box, memoized by outer value.
class LatticeSums {
 public:
  explicit LatticeSums(const Family& fam) : fam_(fam) {}

  const ExpSum& at(long n0) {
    auto it = cache_.find(n0);
    if (it != cache_.end()) return it->second;
    ExpSum s(fam_.target());
    auto box = checked_support(fam_, n0);
    if (!box->empty()) for_each_point(box->lo, box->hi, [&](const std::vector<long>& k) { s += fam_.value(n0, k, nullptr); });
    return cache_.emplace(n0, std::move(s)).first->second;
  }

 private:
  const Family& fam_;
  std::map<long, ExpSum> cache_;
};

struct CertView {
  std::vector<MultiPoly> p;
  std::vector<std::pair<std::string, RatFun>> r;  // nonzero entries in inner order
  std::string outer;
  bool continuous = false;
  std::size_t outer_index = 0;
};

std::string describe_point(const CertView& c, const std::vector<std::string>& inner, long n0, const std::vector<long>& k) {
  std::ostringstream os;
  if (!c.continuous) os << c.outer << " = " << n0;
  for (std::size_t i = 0; i < k.size(); ++i) os << (i || !c.continuous ? ", " : "") << inner[i] << " = " << k[i];
  return os.str();
}

// G_i = R_i F vanishes on the faces of a box enclosing the supports.
void check_boundary(const Family& fam, const CertView& c, long n0, const std::vector<long>& lo,
                    const std::vector<long>& hi) {
  const auto& inner = fam.inner();
  for (long ext = 1; ext <= 4; ++ext) {
    std::vector<long> blo = lo, bhi = hi;
    for (auto& x : blo) x -= ext;
    for (auto& x : bhi) x += ext;
    bool pole = false;
    for (const auto& [name, r] : c.r) {
      std::size_t i = std::find(inner.begin(), inner.end(), name) - inner.begin();
      for (long side : {blo[i], bhi[i] + 1}) {
        std::vector<long> flo = blo, fhi = bhi;
        flo[i] = fhi[i] = side;
        for_each_point(flo, fhi, [&](const std::vector<long>& k) {
          if (pole) return;
          std::optional<ExpSum> g;
          try {
            g = fam.value(n0, k, &r);
          } catch (const Error& e) {
            if (!is_pole_error(e)) throw;
            pole = true;
            return;
          }
          if (!g->is_zero()) {
            throw Error("boundary term R_" + name + " F does not vanish at " + describe_point(c, inner, n0, k));
          }
        });
      }
    }
    if (!pole) return;
  }
  throw Error("certificate pole on support: R has poles on the summation boundary at " +
              describe_point(c, inner, n0, {}));
}

RatFun poly_at(const Family& fam, const MultiPoly& p, long n0) {
  auto v = fam.at(RatFun(p), n0, std::vector<long>(fam.inner().size(), 0));
  return v->rebase(fam.target());
}

// Hypotheses of the lattice-sum recurrence for n0 in [0, upto] and the
// recurrence itself on the box sums.
void check_sum_relation(const Family& fam, LatticeSums& sums, const CertView& c, long upto) {
  const auto& inner = fam.inner();
  const std::size_t d = c.p.size() - 1;
  const long last = c.continuous ? 0 : upto;
  for (long n0 = 0; n0 <= last; ++n0) {
    std::vector<long> lo(inner.size(), LONG_MAX), hi(inner.size(), LONG_MIN);
    bool any = false;
    for (std::size_t a = 0; a <= d; ++a) {
      auto b = checked_support(fam, n0 + static_cast<long>(a));
      if (b->empty()) continue;
      any = true;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        lo[i] = std::min(lo[i], b->lo[i]);
        hi[i] = std::max(hi[i], b->hi[i]);
      }
    }
    if (any) {
      auto own = checked_support(fam, n0);
      if (!own->empty()) {
        for_each_point(own->lo, own->hi, [&](const std::vector<long>& k) {
          if (fam.value(n0, k, nullptr).is_zero()) return;
          for (const auto& [name, r] : c.r) {
            if (!fam.at(r, n0, k)) {
              throw Error("certificate pole on support: denominator " + r.den().to_string() + " of R_" + name +
                          " vanishes at " + describe_point(c, inner, n0, k));
            }
          }
        });
      }
      check_boundary(fam, c, n0, lo, hi);
    }
    ExpSum acc(fam.target());
    if (c.continuous) {
      ExpSum dk = sums.at(0);
      for (std::size_t a = 0; a <= d; ++a) {
        acc += dk.scaled(RatFun(c.p[a]).rebase(fam.target()));
        dk = dk.derivative(c.outer_index);
      }
    } else {
      for (std::size_t a = 0; a <= d; ++a) acc += sums.at(n0 + static_cast<long>(a)).scaled(poly_at(fam, c.p[a], n0));
    }
    if (!acc.is_zero()) {
      throw Error("recurrence fails on the lattice sums at " + c.outer + " = " + std::to_string(n0));
    }
  }
}

CertView view_of(const HyperTerm& f, const TelescopeCertificate& c) {
  CertView v;
  v.p = c.p;
  for (const auto& k : f.signature().inner_discrete) {
    auto it = c.r.find(k);
    if (it != c.r.end() && !it->second.is_zero()) v.r.emplace_back(k, it->second);
  }
  v.outer = f.signature().outer;
  v.continuous = f.signature().outer_continuous;
  v.outer_index = *var_index(f.ring(), v.outer);
  return v;
}

CertView view_of(const QHyperTerm& f, const QTelescopeCertificate& c) {
  CertView v;
  v.p = c.p;
  for (const auto& k : f.signature().inner) {
    auto it = c.r.find(k);
    if (it != c.r.end() && !it->second.is_zero()) v.r.emplace_back(k, it->second);
  }
  v.outer = f.signature().outer;
  return v;
}

long default_upto(const std::vector<MultiPoly>& p) { return static_cast<long>(p.size()) - 1 + 10; }

// Cauchy bound on the nonnegative integer roots of p in the outer variable,
// after fixing the other symbols at sample values.
long cauchy_bound(const MultiPoly& p, std::size_t outer) {
  std::map<std::size_t, MultiPoly> sub;
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    if (i != outer) sub.emplace(i, MultiPoly(p.vars(), BigRational(static_cast<long>(2 * i + 3), 7)));
  }
  MultiPoly u = p.substitute(sub);
  auto c = u.coefficients_in(outer);
  if (c.size() < 2) return 0;
  BigRational top = c.back().constant_term(), best = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    BigRational x = abs(c[i].constant_term() / top);
    if (x > best) best = x;
  }
  BigInt b = 1 + best.get_num() / best.get_den();
  return std::min<long>(b.fits_slong_p() ? b.get_si() : 1000, 1000);
}

std::string p_text(const std::vector<MultiPoly>& p, const std::string& op) { return render_operator(p, op); }

struct CoreInput {
  const Family* lhs;
  std::vector<const Family*> rhs;
  CertView cert;
  bool rhs_symbolic = false;
  long singular_bound = 0;
};

std::variant<Proof, Refutation, NotFound> prove_core(const CoreInput& in) {
  const Family& lhs = *in.lhs;
  const CertView& c = in.cert;
  const long d = static_cast<long>(c.p.size()) - 1;
  LatticeSums lsums(lhs);
  std::vector<std::unique_ptr<LatticeSums>> rsums;
  for (const Family* f : in.rhs) rsums.push_back(std::make_unique<LatticeSums>(*f));
  auto rhs_at = [&](long n) {
    ExpSum s(lhs.target());
    for (auto& r : rsums) s += r->at(n);
    return s;
  };

  Proof proof;
  proof.recurrence = Recurrence{c.p, c.outer, c.continuous};
  proof.rhs_symbolic = in.rhs_symbolic;

  if (!c.continuous) {
    std::vector<long> needed;
    for (long n = 0; n < d; ++n) needed.push_back(n);
    for (long n0 = 0; n0 <= in.singular_bound; ++n0) {
      if (poly_at(lhs, c.p.back(), n0).is_zero()) needed.push_back(n0 + d);
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    long upto = std::max(d + 10, needed.empty() ? 0 : needed.back());
    check_sum_relation(lhs, lsums, c, upto);
    for (long n = 0; n <= upto; ++n) {
      const ExpSum& l = lsums.at(n);
      ExpSum r = rhs_at(n);
      if (!(l == r)) {
        return Refutation{n, l.to_string(), r.to_string(),
                          c.outer + " = " + std::to_string(n) + ": left side " + l.to_string() +
                              " differs from right side " + r.to_string()};
      }
    }
    for (long n : needed) proof.initial.push_back({n, lsums.at(n).to_string(), rhs_at(n).to_string()});
    proof.checked_upto = upto;
    return proof;
  }

  check_sum_relation(lhs, lsums, c, 0);
  const ExpSum& l = lsums.at(0);
  ExpSum r = rhs_at(0);
  const std::size_t x = c.outer_index;
  // P applied to the right side
  ExpSum acc(lhs.target()), dk = r;
  for (long a = 0; a <= d; ++a) {
    acc += dk.scaled(RatFun(c.p[a]).rebase(lhs.target()));
    dk = dk.derivative(x);
  }
  proof.rhs_symbolic = acc.is_zero();
  long x0 = -1;
  for (long t = 0; t <= 64 && x0 < 0; ++t) {
    std::map<std::size_t, BigRational> at{{x, BigRational(t)}};
    auto lead = specialize_or_pole(RatFun(c.p.back()), at);
    if (lead->is_zero() || !l.finite_at(at) || !r.finite_at(at)) continue;
    x0 = t;
  }
  if (x0 < 0) return NotFound{AnsatzBounds{}, 0, "no ordinary point for the initial conditions"};
  proof.point = x0;
  std::map<std::size_t, BigRational> at{{x, BigRational(x0)}};
  const long horizon = proof.rhs_symbolic ? d : d + 20;
  ExpSum dl = l, dr = r;
  for (long j = 0; j < horizon; ++j) {
    ExpSum lj = dl.specialized(at), rj = dr.specialized(at);
    if (!(lj == rj)) {
      return Refutation{j, lj.to_string(), rj.to_string(),
                        "derivative of order " + std::to_string(j) + " at " + c.outer + " = " + std::to_string(x0) +
                            ": left side " + lj.to_string() + " differs from right side " + rj.to_string()};
    }
    if (j < d) proof.initial.push_back({j, lj.to_string(), rj.to_string()});
    dl = dl.derivative(x);
    dr = dr.derivative(x);
  }
  if (!proof.rhs_symbolic) return NotFound{AnsatzBounds{}, 0, "right side is not annihilated by the operator"};
  proof.checked_upto = d - 1;
  return proof;
}

bool closed(const HyperTerm& t) { return t.signature().inner_discrete.empty() && t.signature().inner_continuous.empty(); }

void check_ring_inclusion(const Vars& small, const Vars& big) {
  for (const auto& name : *small) {
    if (!var_index(big, name)) throw Error("right side uses symbols not in the left side");
  }
}

// P annihilates every closed-form rhs term.
bool annihilates(const OreTerm& o, const std::vector<MultiPoly>& p, const Vars& ring) {
  RatFun acc(ring);
  Word w = o.empty_word();
  for (std::size_t a = 0; a < p.size(); ++a) {
    w.outer = static_cast<int>(a);
    acc += RatFun(p[a]) * o.word_quotient(w).rebase(ring);
  }
  return acc.is_zero();
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

struct CertParts {
  std::vector<MultiPoly> p;
  std::string op;
  std::vector<std::pair<std::string, RatFun>> r, s;
};

std::string first_line(const CertParts& c) {
  std::vector<std::string> rhs, with;
  for (const auto& [k, r] : c.r) {
    if (r.is_zero()) continue;
    rhs.push_back("Delta_" + k + "(R_" + k + " F)");
    with.push_back("R_" + k + " = " + r.to_string());
  }
  for (const auto& [y, s] : c.s) {
    if (s.is_zero()) continue;
    rhs.push_back("D_" + y + "(S_" + y + " F)");
    with.push_back("S_" + y + " = " + s.to_string());
  }
  std::string out = "It is routinely verifiable that (" + render_operator(c.p, c.op) + ") F = " +
                    (rhs.empty() ? std::string("0") : join(rhs, " + "));
  if (!with.empty()) out += ", with " + join(with, ", ");
  bool vacuous = std::all_of(c.p.begin(), c.p.end(), [](const MultiPoly& x) { return x.is_zero(); });
  if (vacuous) out += " (vacuous: P = 0)";
  return out;
}

std::string follows(const std::vector<std::string>& sums, const std::vector<std::string>& ints) {
  std::vector<std::string> parts;
  if (!ints.empty()) parts.push_back("integrating w.r.t. " + join(ints, ", "));
  if (!sums.empty()) parts.push_back("summing w.r.t. " + join(sums, ", "));
  if (parts.empty()) return "and the result follows directly";
  return "and the result follows by " + join(parts, " and ");
}

CertParts parts_of(const HyperTerm& f, const TelescopeCertificate& c) {
  const TermSignature& sig = f.signature();
  CertParts out{c.p, sig.outer_continuous ? "D_" + sig.outer : "N", {}, {}};
  for (const auto& k : sig.inner_discrete) {
    auto it = c.r.find(k);
    if (it != c.r.end()) out.r.emplace_back(k, it->second);
  }
  for (const auto& y : sig.inner_continuous) {
    auto it = c.s.find(y);
    if (it != c.s.end()) out.s.emplace_back(y, it->second);
  }
  return out;
}

CertParts parts_of(const QHyperTerm& f, const QTelescopeCertificate& c) {
  CertParts out{c.p, "N", {}, {}};
  for (const auto& k : f.signature().inner) {
    auto it = c.r.find(k);
    if (it != c.r.end()) out.r.emplace_back(k, it->second);
  }
  return out;
}

void check_statement(const IdentityStatement& stmt) {
  const TermSignature& sig = stmt.lhs.signature();
  for (const auto& t : stmt.rhs) {
    if (t.signature().outer != sig.outer || t.signature().outer_continuous != sig.outer_continuous) {
      throw Error("right side has a different outer variable");
    }
    check_ring_inclusion(t.ring(), stmt.lhs.ring());
  }
}

void check_statement(const QIdentityStatement& stmt) {
  for (const auto& t : stmt.rhs) {
    if (t.signature().outer != stmt.lhs.signature().outer) throw Error("right side has a different outer variable");
    check_ring_inclusion(t.ring(), stmt.lhs.ring());
  }
}

BigRational constant_of(const RatFun& v) {
  if (!v.is_constant()) throw Error("assign parameters for numeric check");
  BigRational r = v.num().constant_term() / v.den().constant_term();
  r.canonicalize();
  return r;
}

NumericReport numeric_rows(Family& lhs, std::vector<std::unique_ptr<Family>>& rhs, const Assignment& params, long lo,
                           long hi, const std::string& continuous_outer) {
  NumericReport report;
  for (long n = lo; n <= hi; ++n) {
    Assignment a = params;
    if (!continuous_outer.empty()) a[continuous_outer] = n;
    lhs.extra = a;
    for (auto& f : rhs) f->extra = a;
    LatticeSums l(lhs);
    BigRational rv = 0;
    for (auto& f : rhs) {
      LatticeSums s(*f);
      rv += constant_of(s.at(n).plain());
    }
    report.rows.push_back({n, constant_of(l.at(n).plain()), rv});
  }
  return report;
}

}  // namespace

std::string Recurrence::to_string() const {
  return "(" + render_operator(p, operator_name()) + ") f(" + outer + ") = 0";
}

TermSignature closed_signature(const TermSignature& sig) {
  return TermSignature{sig.outer, sig.outer_continuous, {}, {}, sig.params};
}

QSignature closed_signature(const QSignature& sig) { return QSignature{sig.outer, {}, sig.params}; }

Recurrence recurrence_for_sum(const TelescopeCertificate& cert, const HyperTerm& f, long upto) {
  if (!f.signature().inner_continuous.empty()) throw Error("lattice sums need a purely discrete summand");
  if (cert.is_vacuous()) throw Error("vacuous certificate");
  if (!verify(f, cert).valid) throw Error("certificate does not verify");
  ClassicalFamily fam(f, f.ring());
  LatticeSums sums(fam);
  check_sum_relation(fam, sums, view_of(f, cert), upto < 0 ? default_upto(cert.p) : upto);
  return Recurrence{cert.p, f.signature().outer, f.signature().outer_continuous};
}

Recurrence recurrence_for_sum(const QTelescopeCertificate& cert, const QHyperTerm& f, long upto) {
  if (cert.is_vacuous()) throw Error("vacuous certificate");
  if (!q_verify(f, cert).valid) throw Error("certificate does not verify");
  QFamily fam(f, f.ring());
  LatticeSums sums(fam);
  check_sum_relation(fam, sums, view_of(f, cert), upto < 0 ? default_upto(cert.p) : upto);
  return Recurrence{cert.p, f.signature().outer, false};
}

ProofResult prove_identity(const IdentityStatement& stmt, const TelescopeBudget& budget) {
  check_statement(stmt);
  const HyperTerm& f = stmt.lhs;
  if (!f.signature().inner_continuous.empty()) {
    return NotFound{AnsatzBounds{}, 0, "initial values of integrals are not evaluated; verify a certificate instead"};
  }
  auto res = creative_telescope(f, budget);
  if (auto* nf = std::get_if<NotFound>(&res)) return *nf;
  const auto& cert = std::get<TelescopeCertificate>(res);

  ClassicalFamily lhs(f, f.ring());
  std::vector<std::unique_ptr<Family>> rhs;
  bool symbolic = true;
  for (const auto& t : stmt.rhs) {
    rhs.push_back(std::make_unique<ClassicalFamily>(t, f.ring()));
    if (!closed(t) || !annihilates(OreTerm(t), cert.p, f.ring())) symbolic = false;
  }
  CoreInput in;
  in.lhs = &lhs;
  for (auto& r : rhs) in.rhs.push_back(r.get());
  in.cert = view_of(f, cert);
  in.rhs_symbolic = symbolic;
  in.singular_bound = f.signature().outer_continuous ? 0 : cauchy_bound(cert.p.back(), in.cert.outer_index);
  auto out = prove_core(in);
  if (auto* p = std::get_if<Proof>(&out)) {
    p->certificate = cert;
    p->text = proof_text(*p);
    return *p;
  }
  if (auto* r = std::get_if<Refutation>(&out)) return *r;
  return std::get<NotFound>(out);
}

ProofResult prove_identity(const QIdentityStatement& stmt, const TelescopeBudget& budget) {
  check_statement(stmt);
  const QHyperTerm& f = stmt.lhs;
  auto res = q_creative_telescope(f, budget);
  if (auto* nf = std::get_if<NotFound>(&res)) return *nf;
  const auto& cert = std::get<QTelescopeCertificate>(res);

  QFamily lhs(f, f.ring());
  std::vector<std::unique_ptr<Family>> rhs;
  bool symbolic = true;
  for (const auto& t : stmt.rhs) {
    rhs.push_back(std::make_unique<QFamily>(t, f.ring()));
    if (!t.signature().inner.empty() || !annihilates(OreTerm(t), cert.p, f.ring())) symbolic = false;
  }
  CoreInput in;
  in.lhs = &lhs;
  for (auto& r : rhs) in.rhs.push_back(r.get());
  in.cert = view_of(f, cert);
  in.rhs_symbolic = symbolic;
  // p(q, q^n0) == 0 identically needs two monomials with equal q-degree,
  // which bounds n0 by the q-degree of p
  in.singular_bound = cert.p.back().degree(0);
  auto out = prove_core(in);
  if (auto* p = std::get_if<Proof>(&out)) {
    p->q_certificate = cert;
    p->text = proof_text(*p);
    return *p;
  }
  if (auto* r = std::get_if<Refutation>(&out)) return *r;
  return std::get<NotFound>(out);
}

bool NumericReport::all_equal() const {
  return std::all_of(rows.begin(), rows.end(), [](const NumericRow& r) { return r.equal(); });
}

std::string NumericReport::to_string() const {
  if (all_equal()) return "all equal";
  std::ostringstream os;
  os << "outer\tlhs\trhs";
  for (const auto& r : rows) {
    if (!r.equal()) os << "\n" << r.outer << "\t" << r.lhs.get_str() << "\t" << r.rhs.get_str();
  }
  return os.str();
}

NumericReport numeric_check(const IdentityStatement& stmt, long lo, long hi, const Assignment& params) {
  check_statement(stmt);
  const TermSignature& sig = stmt.lhs.signature();
  if (!sig.inner_continuous.empty()) throw Error("numeric check needs a purely discrete summand");
  for (const auto& p : sig.params) {
    if (!params.count(p)) throw Error("assign parameters for numeric check");
  }
  ClassicalFamily lhs(stmt.lhs, stmt.lhs.ring());
  std::vector<std::unique_ptr<Family>> rhs;
  for (const auto& t : stmt.rhs) {
    if (!t.signature().inner_continuous.empty()) throw Error("numeric check needs a purely discrete summand");
    rhs.push_back(std::make_unique<ClassicalFamily>(t, stmt.lhs.ring()));
  }
  return numeric_rows(lhs, rhs, params, lo, hi, sig.outer_continuous ? sig.outer : "");
}

NumericReport numeric_check(const QIdentityStatement& stmt, long lo, long hi, const Assignment& params) {
  check_statement(stmt);
  if (!params.count("q")) throw Error("assign parameters for numeric check");
  for (const auto& p : stmt.lhs.signature().params) {
    if (!params.count(p)) throw Error("assign parameters for numeric check");
  }
  QFamily lhs(stmt.lhs, stmt.lhs.ring());
  std::vector<std::unique_ptr<Family>> rhs;
  for (const auto& t : stmt.rhs) rhs.push_back(std::make_unique<QFamily>(t, stmt.lhs.ring()));
  return numeric_rows(lhs, rhs, params, lo, hi, "");
}

std::variant<WZTuple, NotApplicable> to_wz_tuple(const IdentityStatement& stmt, const TelescopeBudget& budget) {
  check_statement(stmt);
  if (stmt.rhs.empty()) throw Error("cannot normalize by zero right side");
  if (stmt.rhs.size() != 1 || !closed(stmt.rhs[0])) throw Error("right side is not a single closed form");
  const TermSignature& sig = stmt.lhs.signature();
  HyperTerm f = stmt.lhs.divided_by(stmt.rhs[0].with_signature(sig));
  auto res = creative_telescope(f, budget);
  if (auto* nf = std::get_if<NotFound>(&res)) return NotApplicable{{}, "no certificate: " + nf->reason};
  const auto& c = std::get<TelescopeCertificate>(res);
  bool unit = c.p.size() == 2 && (sig.outer_continuous ? c.p[0].is_zero() : c.p[0] == -c.p[1]);
  if (!unit) return NotApplicable{c.p, "operator " + render_operator(c.p, sig.outer_continuous ? "D_" + sig.outer : "N") +
                                           " is not a multiple of " + (sig.outer_continuous ? "D_" + sig.outer : "N - 1")};
  WZTuple t{f, {}, {}};
  RatFun lead(c.p[1]);
  for (const auto& [k, r] : c.r) t.g.emplace(k, r / lead);
  for (const auto& [y, s] : c.s) t.h.emplace(y, s / lead);
  return t;
}

Companion companion(const WZTuple& t, const std::string& keep) {
  const HyperTerm& f = t.f;
  const TermSignature& sig = f.signature();
  const bool is_shift = std::count(sig.inner_discrete.begin(), sig.inner_discrete.end(), keep) > 0;
  const bool is_diff = std::count(sig.inner_continuous.begin(), sig.inner_continuous.end(), keep) > 0;
  if (keep != sig.outer && !is_shift && !is_diff) throw Error("unknown variable '" + keep + "'");
  Companion out;
  out.tuple = t;
  out.keep = keep;

  if (keep == sig.outer) {
    HyperTerm rhs(closed_signature(sig));
    ClassicalFamily fam(f, f.ring());
    LatticeSums sums(fam);
    RatFun c = sums.at(0).plain();
    if (c.is_zero()) {
      out.statement = IdentityStatement{f, {}};
    } else {
      rhs.multiply_rational(c.rebase(rhs.ring()));
      out.statement = IdentityStatement{f, {rhs}};
    }
    out.text = "sum over " + join(sig.inner_discrete, ", ") + " of F is independent of " + sig.outer + ": it equals " +
               c.to_string();
    return out;
  }

  OreTerm ore(f);
  RatFun mult(f.ring());
  std::string shape;
  if (is_shift) {
    std::size_t i = std::find(ore.shift_names().begin(), ore.shift_names().end(), keep) - ore.shift_names().begin();
    auto it = t.g.find(keep);
    if (it != t.g.end()) mult = ore.shift(it->second, ore.shift_symbols()[i]) * ore.shift_quotient(i) - it->second;
    shape = "Delta_" + keep + "(G_" + keep + " F)";
  } else {
    std::size_t j = std::find(ore.diff_names().begin(), ore.diff_names().end(), keep) - ore.diff_names().begin();
    auto it = t.h.find(keep);
    if (it != t.h.end()) {
      mult = it->second.derivative(ore.diff_symbols()[j]) + it->second * ore.diff_quotient(j);
    }
    shape = "D_" + keep + "(H_" + keep + " F)";
  }

  TermSignature nsig{keep, is_diff, {}, {}, sig.params};
  TermSignature rsig{keep, is_diff, {}, {}, sig.params};
  if (!sig.outer_continuous) {
    nsig.inner_discrete.push_back(sig.outer);
    out.from_zero = sig.outer;
  } else {
    nsig.inner_continuous.push_back(sig.outer);
  }
  for (const auto& k : sig.inner_discrete) {
    if (k == keep) continue;
    nsig.inner_discrete.push_back(k);
    rsig.inner_discrete.push_back(k);
  }
  for (const auto& y : sig.inner_continuous) {
    if (y == keep) continue;
    nsig.inner_continuous.push_back(y);
    rsig.inner_continuous.push_back(y);
  }
  if (mult.is_zero()) throw Error("tuple has no multiplier for '" + keep + "'");
  std::vector<HyperTerm> rhs_terms;
  HyperTerm lhs = f.times(mult).with_signature(nsig);
  if (!sig.outer_continuous) {
    HyperTerm at0 = f.substitute_discrete(sig.outer, 0, rsig);
    rhs_terms.push_back(at0.times(RatFun::constant(at0.ring(), -1)));
  }
  out.statement = IdentityStatement{lhs, rhs_terms};
  std::vector<std::string> others;
  for (const auto& v : nsig.inner_discrete) others.push_back(v == sig.outer ? v + " >= 0" : v);
  for (const auto& v : nsig.inner_continuous) others.push_back(v);
  out.text = "sum over " + join(others, ", ") + " of " + shape + " = " +
             (sig.outer_continuous ? std::string("0") : "-sum F(0, ...)") + ", assuming F -> 0 as " + sig.outer +
             " -> infinity";
  return out;
}

PartialSums companion_partial_sums(const Companion& c, long value, long upto, const Assignment& params) {
  const HyperTerm& f = c.tuple.f;
  const TermSignature& sig = f.signature();
  if (sig.outer_continuous || !sig.inner_continuous.empty() ||
      std::count(sig.inner_discrete.begin(), sig.inner_discrete.end(), c.keep) == 0) {
    throw Error("partial sums need a discrete companion of a purely discrete tuple");
  }
  for (const auto& p : sig.params) {
    if (!params.count(p)) throw Error("assign parameters for numeric check");
  }
  const auto& inner = sig.inner_discrete;
  const std::size_t ki = std::find(inner.begin(), inner.end(), c.keep) - inner.begin();
  auto git = c.tuple.g.find(c.keep);
  ClassicalFamily fam(f, f.ring());
  fam.extra = params;

  auto over_others = [&](long n0, long margin, const std::function<void(std::vector<long>&)>& fn) {
    std::vector<long> lo(inner.size()), hi(inner.size());
    auto a = checked_support(fam, n0), b = checked_support(fam, n0 + 1);
    for (std::size_t i = 0; i < inner.size(); ++i) {
      long l = LONG_MAX, h = LONG_MIN;
      for (const auto* box : {&*a, &*b}) {
        if (box->empty()) continue;
        l = std::min(l, box->lo[i]);
        h = std::max(h, box->hi[i]);
      }
      if (l > h) return;
      lo[i] = l - margin;
      hi[i] = h + margin;
    }
    lo[ki] = hi[ki] = value;
    for_each_point(lo, hi, [&](const std::vector<long>& k) {
      std::vector<long> p = k;
      fn(p);
    });
  };

  PartialSums out;
  BigRational acc = 0;
  for (long n = 0; n <= upto; ++n) {
    if (git != c.tuple.g.end()) {
      over_others(n, 2, [&](std::vector<long>& k) {
        BigRational here = constant_of(fam.value(n, k, &git->second).plain());
        ++k[ki];
        BigRational up = constant_of(fam.value(n, k, &git->second).plain());
        acc += up - here;
      });
    }
    out.sums.push_back(acc);
  }
  BigRational limit = 0;
  over_others(0, 0, [&](std::vector<long>& k) { limit -= constant_of(fam.value(0, k, nullptr).plain()); });
  out.limit = limit;
  return out;
}

std::string certificate_text(const HyperTerm& f, const TelescopeCertificate& c) {
  const TermSignature& sig = f.signature();
  return first_line(parts_of(f, c)) + "\n" + follows(sig.inner_discrete, sig.inner_continuous) + ".";
}

std::string certificate_text(const QHyperTerm& f, const QTelescopeCertificate& c) {
  return first_line(parts_of(f, c)) + "\n" + follows(f.signature().inner, {}) + ".";
}

std::string proof_text(const Proof& p) {
  std::string line1;
  std::vector<std::string> sums, ints;
  if (p.certificate) {
    line1 = first_line(parts_of(p.certificate->term, *p.certificate));
    sums = p.certificate->term.signature().inner_discrete;
    ints = p.certificate->term.signature().inner_continuous;
  } else if (p.q_certificate) {
    line1 = first_line(parts_of(p.q_certificate->term, *p.q_certificate));
    sums = p.q_certificate->term.signature().inner;
  }
  const Recurrence& rec = p.recurrence;
  std::ostringstream os;
  os << follows(sums, ints) << ", since both sides satisfy " << rec.to_string();
  std::vector<std::string> vals;
  if (rec.continuous) {
    for (const auto& iv : p.initial) {
      vals.push_back("f" + std::string(static_cast<std::size_t>(iv.index), '\'') + "(" + std::to_string(p.point) +
                     ") = " + iv.lhs);
    }
    os << " and agree in their first " << p.initial.size() << " derivatives at " << rec.outer << " = " << p.point;
  } else {
    for (const auto& iv : p.initial) vals.push_back("f(" + std::to_string(iv.index) + ") = " + iv.lhs);
    os << " and agree at " << rec.outer << " = ";
    std::vector<std::string> idx;
    for (const auto& iv : p.initial) idx.push_back(std::to_string(iv.index));
    os << (idx.empty() ? std::string("no initial values") : join(idx, ", "));
  }
  if (!vals.empty()) os << " (" << join(vals, ", ") << ")";
  if (!p.rhs_symbolic) os << "; the right side was checked against the recurrence for " << rec.outer << " <= "
                          << p.checked_upto << " only";
  os << ".";
  return line1 + "\n" + os.str();
}

}  // namespace wz
