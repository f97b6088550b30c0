#include "wz/linsolve.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <tuple>

namespace wz {

SymMatrix::SymMatrix(Vars ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, MultiPoly(ring_)) {}

std::vector<MultiPoly> SymMatrix::apply(const std::vector<MultiPoly>& v) const {
  if (v.size() != cols_) throw Error("vector length does not match matrix columns");
  std::vector<MultiPoly> out(rows_, MultiPoly(ring_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] += at(i, j) * v[j];
    }
  }
  return out;
}

namespace {

struct Echelon {
  SymMatrix a;
  std::vector<std::size_t> colperm;  // position -> original column
  std::size_t rank = 0;
};

Echelon eliminate(const SymMatrix& m) {
  Echelon e{m, {}, 0};
  SymMatrix& a = e.a;
  const std::size_t rows = a.rows(), cols = a.cols();
  e.colperm.resize(cols);
  std::iota(e.colperm.begin(), e.colperm.end(), 0);
  MultiPoly prev(a.ring(), 1);
  for (std::size_t s = 0; s < std::min(rows, cols); ++s) {
    // Pivot: lowest total degree, then fewest terms, then column, then row.
    std::optional<std::tuple<int, std::size_t, std::size_t, std::size_t>> best;
    for (std::size_t j = s; j < cols; ++j) {
      for (std::size_t i = s; i < rows; ++i) {
        const MultiPoly& x = a.at(i, j);
        if (x.is_zero()) continue;
        auto key = std::make_tuple(x.total_degree(), x.size(), j, i);
        if (!best || key < *best) best = key;
      }
    }
    if (!best) break;
    std::size_t pj = std::get<2>(*best), pi = std::get<3>(*best);
    if (pi != s) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(pi, j), a.at(s, j));
    }
    if (pj != s) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(a.at(i, pj), a.at(i, s));
      std::swap(e.colperm[pj], e.colperm[s]);
    }
    const MultiPoly piv = a.at(s, s);
    for (std::size_t i = s + 1; i < rows; ++i) {
      const MultiPoly lead = a.at(i, s);
      for (std::size_t j = s + 1; j < cols; ++j) {
        MultiPoly v = piv * a.at(i, j);
        if (!lead.is_zero()) v -= lead * a.at(s, j);
        a.at(i, j) = prev.is_one() ? std::move(v) : exact_div(v, prev);
      }
      a.at(i, s) = MultiPoly(a.ring());
    }
    prev = piv;
    e.rank = s + 1;
  }
  return e;
}

}  // namespace

namespace {

// Divides a polynomial vector by the gcd of its entries and normalizes
// rational content and sign.
std::vector<MultiPoly> make_primitive(std::vector<MultiPoly> out) {
  std::vector<const MultiPoly*> order;
  for (const auto& x : out) {
    if (!x.is_zero()) order.push_back(&x);
  }
  if (order.empty()) return out;
  std::sort(order.begin(), order.end(), [](const MultiPoly* a, const MultiPoly* b) { return a->size() < b->size(); });
  MultiPoly g = order.front()->primitive();
  for (std::size_t i = 1; i < order.size() && !g.is_constant(); ++i) g = gcd(g, *order[i]);
  if (!g.is_constant()) {
    for (auto& x : out) {
      if (!x.is_zero()) x = exact_div(x, g);
    }
  }
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& x : out) {
    for (const auto& [e, c] : x.terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
  }
  BigRational scale(den_lcm, num_gcd);
  scale.canonicalize();
  for (const auto& x : out) {
    if (x.is_zero()) continue;
    if (x.leading_coeff() < 0) scale = -scale;
    break;
  }
  for (auto& x : out) x *= scale;
  return out;
}

}  // namespace

std::vector<std::vector<MultiPoly>> nullspace(const SymMatrix& m) {
  if (m.cols() == 0) throw Error("nullspace of a matrix without columns");
  Echelon e = eliminate(m);
  const SymMatrix& a = e.a;
  const std::size_t r = e.rank, cols = a.cols();
  const Vars& ring = a.ring();
  // The last pivot is the determinant of the pivot block, so with the free
  // entry set to it every solution entry is a polynomial (Cramer's rule) and
  // each back-substitution step divides exactly.
  const MultiPoly det = r == 0 ? MultiPoly(ring, 1) : a.at(r - 1, r - 1);
  std::vector<std::vector<MultiPoly>> basis;
  for (std::size_t f = r; f < cols; ++f) {
    std::vector<MultiPoly> x(cols, MultiPoly(ring));
    x[f] = det;
    for (std::size_t i = r; i-- > 0;) {
      MultiPoly acc = a.at(i, f) * det;
      for (std::size_t j = i + 1; j < r; ++j) {
        if (!a.at(i, j).is_zero() && !x[j].is_zero()) acc += a.at(i, j) * x[j];
      }
      x[i] = exact_div(-acc, a.at(i, i));
    }
    std::vector<MultiPoly> original(cols, MultiPoly(ring));
    for (std::size_t p = 0; p < cols; ++p) original[e.colperm[p]] = std::move(x[p]);
    basis.push_back(make_primitive(std::move(original)));
  }
  return basis;
}

std::size_t symbolic_rank(const SymMatrix& m) { return eliminate(m).rank; }

std::vector<MultiPoly> primitive_vector(const std::vector<RatFun>& v) {
  if (v.empty()) return {};
  const Vars& ring = v.front().vars();
  MultiPoly l(ring, 1);
  for (const auto& x : v) {
    if (x.is_zero() || x.den().is_constant()) continue;
    l = exact_div(l * x.den(), gcd(l, x.den()));
  }
  std::vector<MultiPoly> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    out.push_back(x.is_zero() ? MultiPoly(ring) : exact_div(x.num() * l, x.den()));
  }
  return make_primitive(std::move(out));
}

}  // namespace wz
