#include "wz/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace wz {

Vars make_vars(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

bool same_vars(const Vars& a, const Vars& b) {
  return a == b || (a && b && *a == *b);
}

std::optional<std::size_t> var_index(const Vars& vars, std::string_view name) {
  for (std::size_t i = 0; i < vars->size(); ++i) {
    if ((*vars)[i] == name) return i;
  }
  return std::nullopt;
}

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
  std::uint64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

const Vars& empty_vars() {
  static const Vars v = make_vars({});
  return v;
}

bool plain_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

MultiPoly::MultiPoly() : vars_(empty_vars()) {}

MultiPoly::MultiPoly(Vars vars) : vars_(std::move(vars)) {}

MultiPoly::MultiPoly(Vars vars, const BigRational& c) : vars_(std::move(vars)) {
  if (c != 0) terms_.emplace(Exponents(vars_->size(), 0), c);
}

MultiPoly MultiPoly::variable(const Vars& vars, std::size_t index) {
  if (index >= vars->size()) throw Error("variable index out of range");
  Exponents e(vars->size(), 0);
  e[index] = 1;
  return monomial(vars, std::move(e), 1);
}

MultiPoly MultiPoly::variable(const Vars& vars, std::string_view name) {
  auto idx = var_index(vars, name);
  if (!idx) throw Error("unknown symbol '" + std::string(name) + "'");
  return variable(vars, *idx);
}

MultiPoly MultiPoly::monomial(const Vars& vars, Exponents exps, const BigRational& c) {
  MultiPoly p(vars);
  if (exps.size() != vars->size()) throw Error("exponent vector length mismatch");
  if (c != 0) p.terms_.emplace(std::move(exps), c);
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

bool MultiPoly::is_one() const { return is_constant() && !is_zero() && terms_.begin()->second == 1; }

BigRational MultiPoly::constant_term() const {
  auto it = terms_.find(Exponents(nvars(), 0));
  return it == terms_.end() ? BigRational(0) : it->second;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (auto e : terms_.begin()->first) d += static_cast<int>(e);
  return d;
}

int MultiPoly::degree(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

bool MultiPoly::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first[var] != 0; });
}

const Exponents& MultiPoly::leading_monomial() const {
  if (terms_.empty()) throw Error("leading monomial of zero polynomial");
  return terms_.begin()->first;
}

const BigRational& MultiPoly::leading_coeff() const {
  if (terms_.empty()) throw Error("leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

void MultiPoly::check_same(const MultiPoly& o) const {
  if (!same_vars(vars_, o.vars_)) throw Error("variable universe mismatch");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(e, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_same(b);
  MultiPoly r(a.vars_);
  if (a.is_zero() || b.is_zero()) return r;
  const std::size_t n = a.nvars();
  Exponents e(n);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = r.terms_.emplace(e, ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
  }
  return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const BigRational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [e, v] : terms_) v *= c;
  }
  return *this;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result(vars_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

BigRational MultiPoly::evaluate(std::span<const BigRational> point) const {
  if (point.size() != nvars()) throw Error("evaluation point has wrong dimension");
  BigRational sum = 0;
  for (const auto& [e, c] : terms_) {
    BigRational t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      BigRational p;
      mpz_pow_ui(p.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(p.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
      t *= p;
    }
    sum += t;
  }
  return sum;
}

MultiPoly MultiPoly::substitute(const std::map<std::size_t, MultiPoly>& map) const {
  for (const auto& [idx, p] : map) {
    if (idx >= nvars()) throw Error("substitution of unknown variable");
    check_same(p);
  }
  // Cache powers of the replacement polynomials.
  std::map<std::pair<std::size_t, std::uint32_t>, MultiPoly> powers;
  auto power_of = [&](std::size_t idx, std::uint32_t e) -> const MultiPoly& {
    auto key = std::make_pair(idx, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    return powers.emplace(key, map.at(idx).pow(e)).first->second;
  };
  MultiPoly result(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    MultiPoly factor(vars_, 1);
    for (const auto& [idx, p] : map) {
      if (rest[idx] == 0) continue;
      factor *= power_of(idx, rest[idx]);
      rest[idx] = 0;
    }
    result += factor * monomial(vars_, std::move(rest), c);
  }
  return result;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MultiPoly r(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.terms_.emplace(std::move(d), c * e[var]);
  }
  return r;
}

MultiPoly MultiPoly::rebase(const Vars& target) const {
  if (same_vars(vars_, target)) {
    MultiPoly r = *this;
    r.vars_ = target;
    return r;
  }
  std::vector<std::optional<std::size_t>> map(nvars());
  for (std::size_t i = 0; i < nvars(); ++i) map[i] = var_index(target, (*vars_)[i]);
  MultiPoly r(target);
  for (const auto& [e, c] : terms_) {
    Exponents t(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!map[i]) throw Error("symbol '" + (*vars_)[i] + "' not in target universe");
      t[*map[i]] += e[i];
    }
    r.terms_.emplace(std::move(t), c);
  }
  return r;
}

BigRational MultiPoly::content() const {
  if (terms_.empty()) return 0;
  BigInt g = 0, l = 1;
  for (const auto& [e, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  BigRational r(g, l);
  r.canonicalize();
  return abs(r);
}

MultiPoly MultiPoly::primitive() const {
  if (terms_.empty()) return *this;
  BigRational c = content();
  if (leading_coeff() < 0) c = -c;
  MultiPoly r = *this;
  BigRational inv = 1 / c;
  for (auto& [e, v] : r.terms_) v *= inv;
  return r;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(std::size_t var) const {
  int d = degree(var);
  std::vector<MultiPoly> out(d < 0 ? 0 : static_cast<std::size_t>(d) + 1, MultiPoly(vars_));
  for (const auto& [e, c] : terms_) {
    Exponents r = e;
    std::uint32_t k = r[var];
    r[var] = 0;
    out[k].terms_.emplace(std::move(r), c);
  }
  return out;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  return same_vars(a.vars_, b.vars_) && a.terms_ == b.terms_;
}

std::string to_string(const BigRational& q) { return q.get_str(); }

BigRational parse_rational(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (s.empty()) throw Error("empty rational literal");
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-') throw Error("malformed rational '" + s + "'");
  BigInt n_int(num), d_int(den);
  if (d_int == 0) throw Error("zero denominator in rational '" + s + "'");
  BigRational r(n_int, d_int);
  r.canonicalize();
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    BigRational mag = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
    bool wrote = false;
    if (constant || mag != 1) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      const std::string& name = (*vars_)[i];
      if (plain_identifier(name)) {
        os << name;
      } else {
        os << "(" << name << ")";
      }
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

std::optional<MultiPoly> try_exact_div(const MultiPoly& a, const MultiPoly& b) {
  if (!same_vars(a.vars(), b.vars())) throw Error("variable universe mismatch");
  if (b.is_zero()) throw Error("division by zero polynomial");
  MultiPoly q(a.vars());
  if (a.is_zero()) return q;
  if (b.is_constant()) return a * (1 / b.leading_coeff());
  const std::size_t n = a.nvars();
  const Exponents& lb = b.leading_monomial();
  const BigRational inv = 1 / b.leading_coeff();
  // Quick rejection on degree bounds.
  for (std::size_t i = 0; i < n; ++i) {
    if (lb[i] > 0 && a.degree(i) < static_cast<int>(lb[i])) return std::nullopt;
  }
  MultiPoly r = a;
  Exponents t(n);
  while (!r.is_zero()) {
    const Exponents& lr = r.leading_monomial();
    for (std::size_t i = 0; i < n; ++i) {
      if (lr[i] < lb[i]) return std::nullopt;
      t[i] = lr[i] - lb[i];
    }
    MultiPoly term = MultiPoly::monomial(a.vars(), t, r.leading_coeff() * inv);
    r -= term * b;
    q += term;
  }
  return q;
}

MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b) {
  auto q = try_exact_div(a, b);
  if (!q) throw Error("inexact division");
  return *q;
}

namespace {

using UPoly = std::vector<MultiPoly>;  // coefficient i multiplies var^i

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

MultiPoly assemble(const UPoly& p, std::size_t var) {
  MultiPoly x = MultiPoly::variable(p.front().vars(), var);
  MultiPoly r(p.front().vars());
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

MultiPoly gcd_of_all(std::vector<MultiPoly> ps);

MultiPoly content_of(const UPoly& p) { return gcd_of_all(p); }

UPoly divide_all(const UPoly& p, const MultiPoly& c) {
  UPoly r;
  r.reserve(p.size());
  for (const auto& x : p) r.push_back(exact_div(x, c));
  return r;
}

// Pseudo-remainder of a by b in the main variable.
UPoly prem(UPoly a, const UPoly& b) {
  const std::size_t db = b.size() - 1;
  const MultiPoly& lc = b.back();
  while (a.size() >= b.size()) {
    MultiPoly top = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& c : a) c *= lc;
    for (std::size_t i = 0; i <= db; ++i) a[i + shift] -= top * b[i];
    trim(a);
  }
  return a;
}

// Univariate images over Q at a point for the other variables.
using QPoly = std::vector<BigRational>;

QPoly specialize_upoly(const UPoly& p, std::span<const BigRational> point) {
  QPoly r;
  r.reserve(p.size());
  for (const auto& c : p) r.push_back(c.is_zero() ? BigRational(0) : c.evaluate(point));
  return r;
}

std::size_t qpoly_gcd_degree(QPoly a, QPoly b) {
  auto strip = [](QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  strip(a);
  strip(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    while (a.size() >= b.size()) {
      BigRational f = a.back() / b.back();
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
      strip(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// True when the images at some good point show the gcd has degree 0 in var.
bool coprime_in(const UPoly& A, const UPoly& B, std::size_t var) {
  const std::size_t n = A.front().nvars();
  static const long kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<BigRational> point(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != var) point[i] = BigRational(kPrimes[(i + 5 * attempt) % 12] * (attempt + 1) + static_cast<long>(i));
    }
    if (A.back().evaluate(point) == 0 || B.back().evaluate(point) == 0) continue;
    return qpoly_gcd_degree(specialize_upoly(A, point), specialize_upoly(B, point)) == 0;
  }
  return false;
}

MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b, std::size_t var) {
  UPoly A = a.coefficients_in(var);
  UPoly B = b.coefficients_in(var);
  MultiPoly ca = content_of(A);
  MultiPoly cb = content_of(B);
  MultiPoly c = gcd(ca, cb);
  A = assemble(divide_all(A, ca), var).primitive().coefficients_in(var);
  B = assemble(divide_all(B, cb), var).primitive().coefficients_in(var);
  if (coprime_in(A, B, var)) return c;
  if (A.size() < B.size()) std::swap(A, B);
  while (true) {
    UPoly R = prem(A, B);
    if (R.empty()) break;
    if (R.size() == 1) {
      B = UPoly{MultiPoly(a.vars(), 1)};
      break;
    }
    R = assemble(divide_all(R, content_of(R)), var).primitive().coefficients_in(var);
    trim(R);
    A = std::move(B);
    B = std::move(R);
  }
  return (c * assemble(B, var)).primitive();
}

BigInt max_norm(const MultiPoly& p) {
  BigInt m = 0;
  for (const auto& [e, c] : p.terms()) {
    BigInt a = abs(c.get_num());
    if (a > m) m = a;
  }
  return m;
}

BigInt integer_content(const MultiPoly& p) {
  BigInt g = 0;
  for (const auto& [e, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  return g;
}

MultiPoly eval_at_integer(const MultiPoly& p, std::size_t var, const BigInt& xi) {
  std::vector<MultiPoly> cs = p.coefficients_in(var);
  MultiPoly r(p.vars());
  for (std::size_t i = cs.size(); i-- > 0;) {
    r *= BigRational(xi);
    r += cs[i];
  }
  return r;
}

// Rebuilds a polynomial in var from its value at xi by balanced xi-adic
// expansion of every integer coefficient.
MultiPoly xi_adic_interpolate(MultiPoly h, std::size_t var, const BigInt& xi) {
  const Vars& vars = h.vars();
  MultiPoly result(vars);
  BigInt half = xi / 2;
  for (std::uint32_t i = 0; !h.is_zero(); ++i) {
    MultiPoly digit(vars);
    for (const auto& [e, c] : h.terms()) {
      BigInt r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_num_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      if (r != 0) {
        Exponents ex = e;
        ex[var] = i;
        result += MultiPoly::monomial(vars, ex, BigRational(r));
        digit += MultiPoly::monomial(vars, e, BigRational(r));
      }
    }
    h -= digit;
    h *= BigRational(1) / BigRational(xi);
  }
  return result;
}

// Heuristic gcd of integer polynomials over the listed variables, including
// the integer content; nullopt when the heuristic gives up. Every result is
// confirmed by exact division.
std::optional<MultiPoly> heu_gcd(const MultiPoly& f, const MultiPoly& g, std::vector<std::size_t> vars) {
  const Vars& ring = f.vars();
  BigInt cf = integer_content(f), cg = integer_content(g);
  BigInt c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  if (f.is_constant() || g.is_constant()) return MultiPoly(ring, BigRational(c));
  while (!vars.empty() && !f.depends_on(vars.back()) && !g.depends_on(vars.back())) vars.pop_back();
  if (vars.empty()) return MultiPoly(ring, BigRational(c));
  const std::size_t v = vars.back();
  vars.pop_back();
  MultiPoly fp = f * (BigRational(1) / BigRational(cf));
  MultiPoly gp = g * (BigRational(1) / BigRational(cg));
  BigInt fn = max_norm(fp), gn = max_norm(gp);
  BigInt xi = 2 * std::min(fn, gn) + 2;
  auto lc_ratio = [&](const MultiPoly& p, const BigInt& norm) {
    BigInt lc = abs(p.coefficients_in(v).back().leading_coeff().get_num());
    return BigInt(norm / lc);
  };
  BigInt alt = 2 * std::min(lc_ratio(fp, fn), lc_ratio(gp, gn)) + 2;
  if (alt > xi) xi = alt;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) > 4096) return std::nullopt;
    MultiPoly ff = eval_at_integer(fp, v, xi), gg = eval_at_integer(gp, v, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      if (auto h = heu_gcd(ff, gg, vars)) {
        MultiPoly cand = xi_adic_interpolate(*h, v, xi);
        if (!cand.is_zero()) {
          cand = cand.primitive();
          if (try_exact_div(fp, cand) && try_exact_div(gp, cand)) return cand * BigRational(c);
        }
      }
    }
    BigInt r4;
    mpz_root(r4.get_mpz_t(), xi.get_mpz_t(), 4);
    xi = xi * 73794 * r4 / 27011;
  }
  return std::nullopt;
}

MultiPoly monomial_gcd(const MultiPoly& mono, const MultiPoly& p) {
  Exponents e = mono.leading_monomial();
  for (const auto& [pe, c] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], pe[i]);
  }
  return MultiPoly::monomial(mono.vars(), std::move(e), 1);
}

}  // namespace

namespace {

// gcd of a list, smallest entries first so that trivial results show early.
MultiPoly gcd_of_all(std::vector<MultiPoly> ps) {
  std::erase_if(ps, [](const MultiPoly& p) { return p.is_zero(); });
  std::sort(ps.begin(), ps.end(), [](const MultiPoly& x, const MultiPoly& y) {
    return std::make_pair(x.size(), x.total_degree()) < std::make_pair(y.size(), y.total_degree());
  });
  MultiPoly g(ps.empty() ? Vars() : ps.front().vars());
  if (ps.empty()) return g;
  g = ps.front().primitive();
  for (std::size_t i = 1; i < ps.size() && !g.is_one(); ++i) g = gcd(g, ps[i]);
  return g;
}

}  // namespace

MultiPoly gcd(const MultiPoly& a0, const MultiPoly& b0) {
  if (!same_vars(a0.vars(), b0.vars())) throw Error("variable universe mismatch");
  if (a0.is_zero()) return b0.primitive();
  if (b0.is_zero()) return a0.primitive();
  if (a0.is_constant() || b0.is_constant()) return MultiPoly(a0.vars(), 1);
  if (a0.size() == 1) return monomial_gcd(a0, b0);
  if (b0.size() == 1) return monomial_gcd(b0, a0);
  MultiPoly a = a0.primitive();
  MultiPoly b = b0.primitive();
  if (a == b) return a;
  if (a.total_degree() >= b.total_degree()) {
    if (try_exact_div(a, b)) return b;
  } else if (try_exact_div(b, a)) {
    return a;
  }
  // A variable present in only one argument: the gcd divides each of that
  // argument's coefficients with respect to it.
  const std::size_t n = a.nvars();
  for (std::size_t v = 0; v < n; ++v) {
    bool da = a.depends_on(v), dbv = b.depends_on(v);
    if (da == dbv) continue;
    std::vector<MultiPoly> ps = da ? a.coefficients_in(v) : b.coefficients_in(v);
    ps.push_back(da ? b : a);
    return gcd_of_all(std::move(ps));
  }
  // Main variable: lowest degree first.
  std::optional<std::size_t> main;
  std::pair<int, int> best{0, 0};
  for (std::size_t v = 0; v < n; ++v) {
    if (!a.depends_on(v)) continue;
    int da = a.degree(v), dbv = b.degree(v);
    std::pair<int, int> key{std::min(da, dbv), std::max(da, dbv)};
    if (!main || key < best) {
      main = v;
      best = key;
    }
  }
  if (!main) return MultiPoly(a.vars(), 1);
  UPoly A = a.coefficients_in(*main), B = b.coefficients_in(*main);
  if (coprime_in(A, B, *main)) {
    A.insert(A.end(), B.begin(), B.end());
    return gcd_of_all(std::move(A));
  }
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < n; ++v) {
    if (a.depends_on(v) || b.depends_on(v)) vars.push_back(v);
  }
  if (auto h = heu_gcd(a, b, vars)) return h->primitive();
  return univariate_gcd(a, b, *main);
}

MultiPoly poly_ops(const MultiPoly& a, const MultiPoly& b, PolyOp op) {
  if (!same_vars(a.vars(), b.vars())) throw Error("variable universe mismatch");
  switch (op) {
    case PolyOp::add: return a + b;
    case PolyOp::sub: return a - b;
    case PolyOp::mul: return a * b;
    case PolyOp::exact_div: return exact_div(a, b);
    case PolyOp::gcd: return gcd(a, b);
  }
  throw Error("unknown polynomial operation");
}

}  // namespace wz
