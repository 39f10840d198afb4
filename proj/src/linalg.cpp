#include "gaslie/linalg.hpp"

#include <stdexcept>

namespace gaslie {

RowEchelon row_reduce(RationalMatrix m) {
  RowEchelon out;
  if (m.empty()) return out;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

int rank(const RationalMatrix& m) { return static_cast<int>(row_reduce(m).pivots.size()); }

std::optional<RationalVector> solve_in_span(const RationalMatrix& rows, const RationalVector& target) {
  // Solve A^T c = target with A = rows, via elimination on the augmented system.
  const std::size_t m = rows.size();
  if (m == 0) {
    for (const auto& v : target) {
      if (sgn(v) != 0) return std::nullopt;
    }
    return RationalVector{};
  }
  const std::size_t n = target.size();
  RationalMatrix aug(n, RationalVector(m + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug[i][j] = rows[j][i];
    aug[i][m] = target[i];
  }
  RowEchelon e = row_reduce(std::move(aug));
  RationalVector c(m);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == static_cast<int>(m)) return std::nullopt;
    c[e.pivots[i]] = e.rows[i][m];
  }
  if (e.pivots.size() != m) throw std::invalid_argument("solve_in_span: rows are dependent");
  return c;
}

RationalMatrix nullspace(const RationalMatrix& m) {
  if (m.empty()) return {};
  const std::size_t cols = m[0].size();
  RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  RationalMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix aug(n, RationalVector(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("inverse: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != static_cast<int>(n - 1)) return std::nullopt;
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  }
  return inv;
}

Rational determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  return det;
}

Signature signature(RationalMatrix m) {
  const std::size_t n = m.size();
  Signature s;
  std::size_t k = 0;
  while (k < n) {
    // Bring a nonzero diagonal entry to position k.
    std::size_t p = k;
    while (p < n && sgn(m[p][p]) == 0) ++p;
    if (p == n) {
      // No nonzero diagonal: find an off-diagonal m[i][j] != 0 and add row/col j to i.
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i) {
        for (std::size_t j = i + 1; j < n && !found; ++j) {
          if (sgn(m[i][j]) == 0) continue;
          for (std::size_t c = 0; c < n; ++c) m[i][c] += m[j][c];
          for (std::size_t r = 0; r < n; ++r) m[r][i] += m[r][j];
          p = i;
          found = true;
        }
      }
      if (!found) break;
    }
    if (p != k) {
      std::swap(m[p], m[k]);
      for (auto& row : m) std::swap(row[p], row[k]);
    }
    const Rational d = m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(m[i][k]) == 0) continue;
      Rational f = m[i][k] / d;
      for (std::size_t c = k; c < n; ++c) m[i][c] -= f * m[k][c];
      for (std::size_t r = k; r < n; ++r) m[r][i] -= f * m[r][k];
    }
    if (sgn(d) > 0) {
      ++s.positive;
    } else {
      ++s.negative;
    }
    ++k;
  }
  s.zero = static_cast<int>(n) - s.positive - s.negative;
  return s;
}

}  // namespace gaslie
