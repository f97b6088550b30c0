#include "wz/telescoper.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace wz {

std::size_t AnsatzBounds::unknowns() const {
  std::size_t n = static_cast<std::size_t>(max_outer) + 1;
  for (int b : max_shift) n *= static_cast<std::size_t>(b) + 1;
  for (int c : max_diff) n *= static_cast<std::size_t>(c) + 1;
  return n;
}

std::string AnsatzBounds::to_string() const {
  std::ostringstream os;
  auto list = [&](const std::vector<int>& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
  };
  os << "(" << max_outer << ", ";
  list(max_shift);
  os << ", ";
  list(max_diff);
  os << ", " << coeff_degree << ")";
  return os.str();
}

AnsatzTooLarge::AnsatzTooLarge(std::size_t size, std::size_t cap)
    : Error("ansatz too large: " + std::to_string(size) + " unknowns (cap " + std::to_string(cap) + ")"),
      size_(size) {}

namespace {

void check_bounds(const OreTerm& f, const AnsatzBounds& b) {
  if (b.max_shift.size() != f.shift_names().size() || b.max_diff.size() != f.diff_names().size()) {
    throw Error("ansatz bounds do not match the term's variables");
  }
  auto negative = [](int x) { return x < 0; };
  if (b.max_outer < 0 || b.coeff_degree < 0 || std::any_of(b.max_shift.begin(), b.max_shift.end(), negative) ||
      std::any_of(b.max_diff.begin(), b.max_diff.end(), negative)) {
    throw Error("ansatz bounds must be non-negative");
  }
}

std::vector<Word> words_within(const OreTerm& f, const AnsatzBounds& b) {
  std::vector<Word> out;
  Word w = f.empty_word();
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    const std::size_t r = w.shifts.size(), s = w.diffs.size();
    if (pos == 1 + r + s) {
      out.push_back(w);
      return;
    }
    int limit = pos == 0 ? b.max_outer : pos <= r ? b.max_shift[pos - 1] : b.max_diff[pos - 1 - r];
    for (int e = 0; e <= limit; ++e) {
      if (pos == 0) {
        w.outer = e;
      } else if (pos <= r) {
        w.shifts[pos - 1] = e;
      } else {
        w.diffs[pos - 1 - r] = e;
      }
      rec(pos + 1);
    }
  };
  rec(0);
  return out;
}

MultiPoly lcm(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_constant()) return a;
  if (a.is_constant()) return b;
  return a * exact_div(b, gcd(a, b));
}

OreOperator telescoped_part(const OreTerm& f, const OreOperator& t) { return decompose(f, t).p; }

int max_coeff_degree(const OreOperator& t) {
  int d = 0;
  for (const auto& [w, c] : t.terms) d = std::max(d, c.total_degree());
  return d;
}

}  // namespace

std::optional<OreOperator> find_annihilator(const OreTerm& f, const AnsatzBounds& bounds, std::size_t cap) {
  check_bounds(f, bounds);
  const std::size_t size = bounds.unknowns();
  if (size > cap) throw AnsatzTooLarge(size, cap);
  const Vars& ring = f.ring();
  std::vector<Word> words = words_within(f, bounds);

  MultiPoly common(ring, 1);
  for (const auto& w : words) common = lcm(common, f.word_quotient(w).den());

  // Column j holds the numerator of word j over the common denominator, split
  // by monomials in the inner symbols.
  const std::vector<std::size_t> inner = f.inner_symbols();
  std::map<Exponents, std::map<std::size_t, MultiPoly>> rows;
  for (std::size_t j = 0; j < words.size(); ++j) {
    const RatFun& q = f.word_quotient(words[j]);
    if (q.is_zero()) continue;
    MultiPoly col = q.num() * exact_div(common, q.den());
    for (const auto& [e, c] : col.terms()) {
      Exponents key(inner.size());
      Exponents rest = e;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        key[i] = e[inner[i]];
        rest[inner[i]] = 0;
      }
      auto& cell = rows[key].try_emplace(j, ring).first->second;
      cell += MultiPoly::monomial(ring, rest, c);
    }
  }
  SymMatrix m(ring, rows.size(), words.size());
  std::size_t i = 0;
  for (auto& [key, row] : rows) {
    for (auto& [j, c] : row) m.at(i, j) = std::move(c);
    ++i;
  }

  std::optional<OreOperator> best;
  std::tuple<bool, int, std::size_t, int> best_key;
  for (const auto& v : nullspace(m)) {
    OreOperator t{ring, {}};
    for (std::size_t j = 0; j < words.size(); ++j) t.add(words[j], v[j]);
    if (t.is_zero()) continue;
    auto key = std::make_tuple(telescoped_part(f, t).is_zero(), t.outer_order(), t.terms.size(), max_coeff_degree(t));
    if (!best || key < best_key) {
      best = std::move(t);
      best_key = key;
    }
  }
  return best;
}

std::vector<AnsatzBounds> ansatz_schedule(const OreTerm& f, std::size_t cap) {
  const std::size_t r = f.shift_names().size(), s = f.diff_names().size();
  const std::size_t dims = 1 + r + s;
  std::vector<std::vector<int>> found;
  std::vector<int> cur(dims, 1);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t size) {
    if (pos == dims) {
      found.push_back(cur);
      return;
    }
    for (int e = 1; size * static_cast<std::size_t>(e + 1) <= cap; ++e) {
      cur[pos] = e;
      rec(pos + 1, size * static_cast<std::size_t>(e + 1));
    }
  };
  rec(0, 1);
  std::vector<AnsatzBounds> out;
  for (const auto& v : found) {
    AnsatzBounds b;
    b.max_outer = v[0];
    b.max_shift.assign(v.begin() + 1, v.begin() + 1 + static_cast<long>(r));
    b.max_diff.assign(v.begin() + 1 + static_cast<long>(r), v.end());
    out.push_back(std::move(b));
  }
  std::stable_sort(out.begin(), out.end(), [](const AnsatzBounds& a, const AnsatzBounds& b) {
    if (a.unknowns() != b.unknowns()) return a.unknowns() < b.unknowns();
    if (a.max_outer != b.max_outer) return a.max_outer < b.max_outer;
    if (a.max_shift != b.max_shift) return a.max_shift > b.max_shift;
    return a.max_diff > b.max_diff;
  });
  return out;
}

Decomposition decompose(const OreTerm& f, const OreOperator& t) {
  const Vars& ring = f.ring();
  Decomposition d{OreOperator{ring, {}}, std::vector<OreOperator>(f.shift_names().size(), OreOperator{ring, {}}),
                  std::vector<OreOperator>(f.diff_names().size(), OreOperator{ring, {}})};
  for (const auto& [w, c] : t.terms) {
    auto j = std::find_if(w.diffs.begin(), w.diffs.end(), [](int e) { return e > 0; });
    if (j != w.diffs.end()) {
      Word rest = w;
      --rest.diffs[static_cast<std::size_t>(j - w.diffs.begin())];
      d.t_hat[static_cast<std::size_t>(j - w.diffs.begin())].add(rest, c);
      continue;
    }
    Word base = f.empty_word();
    base.outer = w.outer;
    d.p.add(base, c);
    // prod_i K_i^b_i - 1 = sum_i (K_i^b_i - 1) prod_{l<i} K_l^b_l
    Word prefix = base;
    for (std::size_t i = 0; i < w.shifts.size(); ++i) {
      for (int e = 0; e < w.shifts[i]; ++e) {
        Word u = prefix;
        u.shifts[i] = e;
        d.t[i].add(u, c);
      }
      prefix.shifts[i] = w.shifts[i];
    }
  }
  return d;
}

OreOperator recompose(const OreTerm& f, const Decomposition& d) {
  OreOperator out{f.ring(), {}};
  for (const auto& [w, c] : d.p.terms) out.add(w, c);
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    for (const auto& [w, c] : d.t[i].terms) {
      Word up = w;
      ++up.shifts[i];
      out.add(up, c);
      out.add(w, -c);
    }
  }
  for (std::size_t j = 0; j < d.t_hat.size(); ++j) {
    for (const auto& [w, c] : d.t_hat[j].terms) {
      Word up = w;
      ++up.diffs[j];
      out.add(up, c);
    }
  }
  return out;
}

OreCertificate extract_certificates(const OreTerm& f, const Decomposition& d) {
  OreCertificate c;
  int order = d.p.outer_order();
  c.p.assign(order < 0 ? 0 : static_cast<std::size_t>(order) + 1, MultiPoly(f.ring()));
  for (const auto& [w, coeff] : d.p.terms) c.p[static_cast<std::size_t>(w.outer)] += coeff;
  for (const auto& t : d.t) c.r.push_back(-apply_quotient(f, t));
  for (const auto& t : d.t_hat) c.s.push_back(-apply_quotient(f, t));
  return c;
}

namespace {

// A discrete P with p[0] = 0 is N P'; the identity shifted back one step in
// the outer variable certifies P' with R' = R(n-1) F(n-1) / F(n).
OreCertificate strip_outer_shifts(const OreTerm& f, OreCertificate c) {
  if (f.outer_continuous()) return c;
  const std::size_t n = f.outer_symbol();
  while (c.p.size() > 1 && c.p[0].is_zero()) {
    const RatFun back = f.unshift(f.outer_quotient(), n);
    std::vector<RatFun> p;
    MultiPoly common(f.ring(), 1);
    for (std::size_t a = 1; a < c.p.size(); ++a) {
      p.push_back(f.unshift(RatFun(c.p[a]), n));
      common = lcm(common, p.back().den());
    }
    const RatFun scale(common);
    c.p.clear();
    for (const auto& x : p) c.p.push_back(x.is_zero() ? MultiPoly(f.ring()) : x.num() * exact_div(common, x.den()));
    for (auto& x : c.r) x = f.unshift(x, n) / back * scale;
    for (auto& x : c.s) x = f.unshift(x, n) / back * scale;
  }
  return c;
}

}  // namespace

OreCertificate normalize_certificate(const OreTerm& f, OreCertificate c) {
  (void)f;
  if (c.p.empty()) return c;
  std::vector<const MultiPoly*> order;
  for (const auto& x : c.p) {
    if (!x.is_zero()) order.push_back(&x);
  }
  std::sort(order.begin(), order.end(), [](const MultiPoly* a, const MultiPoly* b) { return a->size() < b->size(); });
  MultiPoly g = order.front()->primitive();
  for (std::size_t i = 1; i < order.size() && !g.is_constant(); ++i) g = gcd(g, *order[i]);
  if (g.is_constant()) g = MultiPoly(g.vars(), 1);
  for (auto& x : c.p) {
    if (!x.is_zero()) x = exact_div(x, g);
  }
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& x : c.p) {
    for (const auto& [e, q] : x.terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t());
    }
  }
  BigRational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (c.p.back().leading_coeff() < 0) scale = -scale;
  for (auto& x : c.p) x *= scale;
  RatFun factor = RatFun(MultiPoly(g.vars(), scale)) / RatFun(g);
  for (auto& x : c.r) x = x * factor;
  for (auto& x : c.s) x = x * factor;
  return c;
}

std::variant<OreCertificate, NotFound> telescope(const OreTerm& f, const TelescopeBudget& budget) {
  if (budget.max_unknowns == 0 || budget.max_steps == 0) throw Error("telescoping budget must be positive");
  NotFound nf;
  nf.reason = "no annihilator with nonzero telescoped part within the budget";
  for (const auto& bounds : ansatz_schedule(f, budget.max_unknowns)) {
    if (nf.steps == budget.max_steps) {
      nf.reason = "step budget exhausted";
      return nf;
    }
    ++nf.steps;
    nf.last = bounds;
    auto t = find_annihilator(f, bounds, budget.max_unknowns);
    if (!t) continue;
    Decomposition d = decompose(f, *t);
    if (d.p.is_zero()) continue;
    return normalize_certificate(f, strip_outer_shifts(f, extract_certificates(f, d)));
  }
  return nf;
}

bool TelescopeCertificate::is_vacuous() const {
  return std::all_of(p.begin(), p.end(), [](const MultiPoly& x) { return x.is_zero(); });
}

std::variant<TelescopeCertificate, NotFound> creative_telescope(const HyperTerm& f, const TelescopeBudget& budget) {
  OreTerm ore(f);
  auto result = telescope(ore, budget);
  if (auto* nf = std::get_if<NotFound>(&result)) return *nf;
  auto& core = std::get<OreCertificate>(result);
  TelescopeCertificate cert{f, std::move(core.p), {}, {}};
  for (std::size_t i = 0; i < core.r.size(); ++i) cert.r.emplace(ore.shift_names()[i], std::move(core.r[i]));
  for (std::size_t j = 0; j < core.s.size(); ++j) cert.s.emplace(ore.diff_names()[j], std::move(core.s[j]));
  return cert;
}

std::string render_operator(const std::vector<MultiPoly>& p, const std::string& op) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t a = p.size(); a-- > 0;) {
    if (p[a].is_zero()) continue;
    std::string coeff = p[a].to_string();
    bool negative = p[a].size() == 1 && coeff[0] == '-';
    if (negative) coeff.erase(0, 1);
    if (!first) os << (negative ? " - " : " + ");
    if (first && negative) os << "-";
    std::string word = a == 0 ? "" : a == 1 ? op : op + "^" + std::to_string(a);
    if (p[a].size() > 1) coeff = "(" + coeff + ")";
    if (word.empty()) {
      os << coeff;
    } else if (coeff == "1") {
      os << word;
    } else {
      os << coeff << "*" << word;
    }
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace wz
