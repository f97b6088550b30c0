#include "wz/q_engine.hpp"

#include <algorithm>

namespace wz {

bool QTelescopeCertificate::is_vacuous() const {
  return std::all_of(p.begin(), p.end(), [](const MultiPoly& x) { return x.is_zero(); });
}

std::variant<QTelescopeCertificate, NotFound> q_creative_telescope(const QHyperTerm& f,
                                                                   const TelescopeBudget& budget) {
  OreTerm ore(f);
  auto result = telescope(ore, budget);
  if (auto* nf = std::get_if<NotFound>(&result)) return *nf;
  auto& core = std::get<OreCertificate>(result);
  QTelescopeCertificate cert{f, std::move(core.p), {}};
  for (std::size_t i = 0; i < core.r.size(); ++i) cert.r.emplace(ore.shift_names()[i], std::move(core.r[i]));
  return cert;
}

OreCertificate to_ore_certificate(const OreTerm& f, const QHyperTerm& term, const QTelescopeCertificate& c) {
  if (!(c.term == term)) throw Error("term/certificate mismatch");
  for (const auto& [name, x] : c.r) {
    if (std::find(f.shift_names().begin(), f.shift_names().end(), name) == f.shift_names().end()) {
      throw Error("term/certificate mismatch");
    }
  }
  OreCertificate out;
  out.p = c.p;
  for (const auto& k : f.shift_names()) {
    auto it = c.r.find(k);
    out.r.push_back(it == c.r.end() ? RatFun(f.ring()) : it->second);
  }
  return out;
}

MultiPoly q_residual(const QHyperTerm& f, const QTelescopeCertificate& c) {
  OreTerm ore(f);
  return residual(ore, to_ore_certificate(ore, f, c));
}

Verdict q_verify(const QHyperTerm& f, const QTelescopeCertificate& c) {
  OreTerm ore(f);
  return verify(ore, to_ore_certificate(ore, f, c));
}

}  // namespace wz
