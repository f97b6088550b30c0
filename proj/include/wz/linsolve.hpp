#pragma once

#include "wz/ratfun.hpp"

#include <vector>

namespace wz {

/// Dense matrix of polynomials over a shared coefficient ring.
class SymMatrix {
 public:
  SymMatrix(Vars ring, std::size_t rows, std::size_t cols);

  const Vars& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  MultiPoly& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const MultiPoly& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// M * v, entrywise over the ring.
  std::vector<MultiPoly> apply(const std::vector<MultiPoly>& v) const;

 private:
  Vars ring_;
  std::size_t rows_, cols_;
  std::vector<MultiPoly> data_;
};

/// Basis of the right nullspace over the fraction field of the ring.
///
/// Fraction-free (Bareiss) elimination with full pivoting on the nonzero
/// entry of lowest total degree (ties: leftmost column, then topmost row),
/// followed by back substitution. Each basis vector is cleared of
/// denominators, made primitive, and its first nonzero entry has a positive
/// leading coefficient. The result is deterministic.
std::vector<std::vector<MultiPoly>> nullspace(const SymMatrix& m);

/// Rank over the fraction field (same elimination).
std::size_t symbolic_rank(const SymMatrix& m);

/// Clears denominators and normalizes a vector of rational functions as the
/// nullspace basis vectors are normalized.
std::vector<MultiPoly> primitive_vector(const std::vector<RatFun>& v);

}  // namespace wz
