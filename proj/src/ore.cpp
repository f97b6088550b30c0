#include "wz/ore.hpp"

#include <sstream>

namespace wz {

bool Word::is_empty() const {
  if (outer != 0) return false;
  for (int s : shifts) {
    if (s != 0) return false;
  }
  for (int d : diffs) {
    if (d != 0) return false;
  }
  return true;
}

OreTerm::OreTerm(const HyperTerm& f) : ring_(f.ring()) {
  const TermSignature& sig = f.signature();
  if (sig.outer.empty()) throw Error("term has no outer variable");
  outer_name_ = sig.outer;
  outer_continuous_ = sig.outer_continuous;
  outer_symbol_ = *var_index(ring_, sig.outer);
  outer_q_ = outer_continuous_ ? derivative_quotient(f, sig.outer) : wz::shift_quotient(f, sig.outer);
  for (const auto& k : sig.inner_discrete) {
    shift_names_.push_back(k);
    shift_symbols_.push_back(*var_index(ring_, k));
    shift_q_.push_back(wz::shift_quotient(f, k));
  }
  for (const auto& y : sig.inner_continuous) {
    diff_names_.push_back(y);
    diff_symbols_.push_back(*var_index(ring_, y));
    diff_q_.push_back(derivative_quotient(f, y));
  }
}

OreTerm::OreTerm(const QHyperTerm& f) : ring_(f.ring()), q_mode_(true) {
  const QSignature& sig = f.signature();
  outer_name_ = sig.outer;
  outer_symbol_ = *var_index(ring_, QSignature::symbol_for(sig.outer));
  outer_q_ = q_shift_quotient(f, sig.outer);
  for (const auto& k : sig.inner) {
    shift_names_.push_back(k);
    shift_symbols_.push_back(*var_index(ring_, QSignature::symbol_for(k)));
    shift_q_.push_back(q_shift_quotient(f, k));
  }
}

std::vector<std::size_t> OreTerm::inner_symbols() const {
  std::vector<std::size_t> out = shift_symbols_;
  out.insert(out.end(), diff_symbols_.begin(), diff_symbols_.end());
  return out;
}

RatFun OreTerm::shift(const RatFun& f, std::size_t symbol) const {
  if (!f.depends_on(symbol)) return f;
  MultiPoly s = MultiPoly::variable(ring_, symbol);
  MultiPoly image = q_mode_ ? MultiPoly::variable(ring_, 0) * s : s + MultiPoly(ring_, 1);
  return f.substitute(std::map<std::size_t, MultiPoly>{{symbol, image}});
}

namespace {

// p(s / q) * q^deg_s(p), a polynomial.
MultiPoly scale_down(const MultiPoly& p, std::size_t symbol) {
  const int d = p.degree(symbol);
  MultiPoly out(p.vars());
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    f[0] += static_cast<std::uint32_t>(d) - e[symbol];
    out += MultiPoly::monomial(p.vars(), f, c);
  }
  return out;
}

}  // namespace

RatFun OreTerm::unshift(const RatFun& f, std::size_t symbol) const {
  if (!f.depends_on(symbol)) return f;
  if (!q_mode_) {
    MultiPoly image = MultiPoly::variable(ring_, symbol) - MultiPoly(ring_, 1);
    return f.substitute(std::map<std::size_t, MultiPoly>{{symbol, image}});
  }
  const int dn = f.num().degree(symbol), dd = f.den().degree(symbol);
  MultiPoly q = MultiPoly::variable(ring_, 0);
  MultiPoly num = scale_down(f.num(), symbol), den = scale_down(f.den(), symbol);
  if (dd > dn) num *= q.pow(static_cast<unsigned>(dd - dn));
  if (dn > dd) den *= q.pow(static_cast<unsigned>(dn - dd));
  return RatFun(num, den);
}

Word OreTerm::empty_word() const {
  Word w;
  w.shifts.assign(shift_names_.size(), 0);
  w.diffs.assign(diff_names_.size(), 0);
  return w;
}

const RatFun& OreTerm::word_quotient(const Word& w) const {
  if (w.shifts.size() != shift_names_.size() || w.diffs.size() != diff_names_.size()) {
    throw Error("word does not match the term's operators");
  }
  if (auto it = cache_.find(w); it != cache_.end()) return it->second;
  RatFun q;
  if (w.is_empty()) {
    q = RatFun::constant(ring_, 1);
  } else {
    // Peel one operator off the front: the outer one first, then shifts,
    // then derivatives.
    Word rest = w;
    if (w.outer > 0) {
      --rest.outer;
      const RatFun& r = word_quotient(rest);
      q = outer_continuous_ ? r.derivative(outer_symbol_) + r * outer_q_ : shift(r, outer_symbol_) * outer_q_;
    } else {
      std::size_t i = 0;
      while (i < w.shifts.size() && w.shifts[i] == 0) ++i;
      if (i < w.shifts.size()) {
        --rest.shifts[i];
        q = shift(word_quotient(rest), shift_symbols_[i]) * shift_q_[i];
      } else {
        std::size_t j = 0;
        while (w.diffs[j] == 0) ++j;
        --rest.diffs[j];
        const RatFun& r = word_quotient(rest);
        q = r.derivative(diff_symbols_[j]) + r * diff_q_[j];
      }
    }
  }
  return cache_.emplace(w, std::move(q)).first->second;
}

std::string OreTerm::outer_operator_name() const { return outer_continuous_ ? "D_" + outer_name_ : "N"; }

int OreOperator::outer_order() const {
  int order = -1;
  for (const auto& [w, c] : terms) order = std::max(order, w.outer);
  return order;
}

void OreOperator::add(const Word& w, const MultiPoly& c) {
  if (c.is_zero()) return;
  auto it = terms.find(w);
  if (it == terms.end()) {
    terms.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

std::string OreOperator::to_string(const OreTerm& term) const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [w, c] = *it;
    std::string word;
    auto put = [&](const std::string& name, int e) {
      if (e == 0) return;
      if (!word.empty()) word += "*";
      word += name;
      if (e > 1) word += "^" + std::to_string(e);
    };
    put(term.outer_operator_name(), w.outer);
    for (std::size_t i = 0; i < w.shifts.size(); ++i) put(term.shift_operator_name(i), w.shifts[i]);
    for (std::size_t j = 0; j < w.diffs.size(); ++j) put(term.diff_operator_name(j), w.diffs[j]);
    std::string coeff = c.to_string();
    bool negative = coeff[0] == '-' && c.size() == 1;
    if (negative) coeff.erase(0, 1);
    if (!first) os << (negative ? " - " : " + ");
    if (first && negative) os << "-";
    if (word.empty()) {
      os << (c.size() > 1 ? "(" + coeff + ")" : coeff);
    } else if (coeff == "1") {
      os << word;
    } else {
      os << (c.size() > 1 ? "(" + coeff + ")" : coeff) << "*" << word;
    }
    first = false;
  }
  return os.str();
}

RatFun apply_quotient(const OreTerm& term, const OreOperator& op) {
  RatFun sum(term.ring());
  for (const auto& [w, c] : op.terms) sum += RatFun(c) * term.word_quotient(w);
  return sum;
}

}  // namespace wz
