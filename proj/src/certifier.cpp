#include "wz/certifier.hpp"

#include <algorithm>
#include <sstream>

namespace wz {

namespace {

struct Sides {
  RatFun lhs;
  RatFun rhs;
};

void check_ring(const OreTerm& f, const RatFun& x) {
  if (!same_vars(f.ring(), x.vars())) throw Error("term/certificate mismatch");
}

Sides divided_sides(const OreTerm& f, const OreCertificate& c) {
  if (c.r.size() != f.shift_names().size() || c.s.size() != f.diff_names().size()) {
    throw Error("term/certificate mismatch");
  }
  RatFun lhs(f.ring()), rhs(f.ring());
  Word w = f.empty_word();
  for (std::size_t a = 0; a < c.p.size(); ++a) {
    if (!same_vars(f.ring(), c.p[a].vars())) throw Error("term/certificate mismatch");
    if (c.p[a].is_zero()) continue;
    w.outer = static_cast<int>(a);
    lhs += RatFun(c.p[a]) * f.word_quotient(w);
  }
  for (std::size_t i = 0; i < c.r.size(); ++i) {
    check_ring(f, c.r[i]);
    if (c.r[i].is_zero()) continue;
    rhs += f.shift(c.r[i], f.shift_symbols()[i]) * f.shift_quotient(i) - c.r[i];
  }
  for (std::size_t j = 0; j < c.s.size(); ++j) {
    check_ring(f, c.s[j]);
    if (c.s[j].is_zero()) continue;
    rhs += c.s[j].derivative(f.diff_symbols()[j]) + c.s[j] * f.diff_quotient(j);
  }
  return {lhs, rhs};
}

std::string rhs_shape(const OreTerm& f, const OreCertificate& c) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < c.r.size(); ++i) {
    if (!c.r[i].is_zero()) parts.push_back("Delta_" + f.shift_names()[i] + "(R_" + f.shift_names()[i] + " F)");
  }
  for (std::size_t j = 0; j < c.s.size(); ++j) {
    if (!c.s[j].is_zero()) parts.push_back("D_" + f.diff_names()[j] + "(S_" + f.diff_names()[j] + " F)");
  }
  if (parts.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

std::string certificate_poles(const OreTerm& f, const OreCertificate& c) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < c.r.size(); ++i) {
    if (!c.r[i].den().is_constant()) parts.push_back("R_" + f.shift_names()[i] + ": " + c.r[i].den().to_string() + " = 0");
  }
  for (std::size_t j = 0; j < c.s.size(); ++j) {
    if (!c.s[j].den().is_constant()) parts.push_back("S_" + f.diff_names()[j] + ": " + c.s[j].den().to_string() + " = 0");
  }
  if (parts.empty()) return "";
  std::string out = " [poles ";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out + "]";
}

}  // namespace

MultiPoly residual(const OreTerm& f, const OreCertificate& c) {
  Sides s = divided_sides(f, c);
  return (s.lhs - s.rhs).num();
}

Verdict verify(const OreTerm& f, const OreCertificate& c) {
  Sides s = divided_sides(f, c);
  Verdict v;
  v.residual = (s.lhs - s.rhs).num();
  v.valid = v.residual.is_zero();
  bool vacuous = std::all_of(c.p.begin(), c.p.end(), [](const MultiPoly& x) { return x.is_zero(); });
  std::ostringstream os;
  os << "(" << render_operator(c.p, f.outer_operator_name()) << ") F = " << rhs_shape(f, c) << ", divided by F: "
     << s.lhs.to_string() << " = " << s.rhs.to_string();
  if (vacuous) os << " (vacuous: P = 0)";
  os << "\n";
  if (v.valid) {
    os << "numerator after clearing denominators ≡ 0" << certificate_poles(f, c);
  } else {
    os << "numerator after clearing denominators = " << v.residual.to_string() << " (nonzero)";
  }
  v.trace = os.str();
  return v;
}

OreCertificate to_ore_certificate(const OreTerm& f, const HyperTerm& term, const TelescopeCertificate& c) {
  if (!(c.term == term)) throw Error("term/certificate mismatch");
  OreCertificate out;
  out.p = c.p;
  for (const auto& [name, x] : c.r) {
    if (std::find(f.shift_names().begin(), f.shift_names().end(), name) == f.shift_names().end()) {
      throw Error("term/certificate mismatch");
    }
  }
  for (const auto& [name, x] : c.s) {
    if (std::find(f.diff_names().begin(), f.diff_names().end(), name) == f.diff_names().end()) {
      throw Error("term/certificate mismatch");
    }
  }
  for (const auto& k : f.shift_names()) {
    auto it = c.r.find(k);
    out.r.push_back(it == c.r.end() ? RatFun(f.ring()) : it->second);
  }
  for (const auto& y : f.diff_names()) {
    auto it = c.s.find(y);
    out.s.push_back(it == c.s.end() ? RatFun(f.ring()) : it->second);
  }
  return out;
}

MultiPoly residual(const HyperTerm& f, const TelescopeCertificate& c) {
  OreTerm ore(f);
  return residual(ore, to_ore_certificate(ore, f, c));
}

Verdict verify(const HyperTerm& f, const TelescopeCertificate& c) {
  OreTerm ore(f);
  return verify(ore, to_ore_certificate(ore, f, c));
}

Verdict verify_wz_tuple(const WZTuple& t) {
  OreTerm ore(t.f);
  TelescopeCertificate c{t.f, {}, t.g, t.h};
  const Vars& r = t.f.ring();
  c.p = ore.outer_continuous() ? std::vector<MultiPoly>{MultiPoly(r), MultiPoly(r, 1)}
                               : std::vector<MultiPoly>{MultiPoly(r, -1), MultiPoly(r, 1)};
  return verify(ore, to_ore_certificate(ore, t.f, c));
}

}  // namespace wz
