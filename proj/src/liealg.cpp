#include "gaslie/liealg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gaslie {

LieAlgebra::LieAlgebra(std::vector<std::string> labels)
    : labels_(std::move(labels)), c_(labels_.size() * labels_.size() * labels_.size()) {}

int LieAlgebra::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown basis label " + label);
  return static_cast<int>(it - labels_.begin());
}

void LieAlgebra::set_bracket(int i, int j, const RationalVector& v) {
  if (static_cast<int>(v.size()) != dim()) throw std::invalid_argument("set_bracket: dimension mismatch");
  for (int k = 0; k < dim(); ++k) {
    set_constant(i, j, k, v[k]);
    set_constant(j, i, k, -v[k]);
  }
}

RationalVector LieAlgebra::basis_bracket(int i, int j) const {
  RationalVector out(dim());
  for (int k = 0; k < dim(); ++k) out[k] = constant(i, j, k);
  return out;
}

RationalVector LieAlgebra::bracket(const RationalVector& a, const RationalVector& b) const {
  const int n = dim();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("bracket: dimension mismatch");
  RationalVector out(n);
  for (int i = 0; i < n; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (sgn(b[j]) == 0) continue;
      Rational w = a[i] * b[j];
      for (int k = 0; k < n; ++k) {
        if (sgn(constant(i, j, k)) != 0) out[k] += w * constant(i, j, k);
      }
    }
  }
  return out;
}

ExprVector LieAlgebra::bracket(const ExprVector& a, const ExprVector& b) const {
  const int n = dim();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("bracket: dimension mismatch");
  std::vector<std::vector<Expr>> terms(n);
  for (int i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      for (int k = 0; k < n; ++k) {
        const Rational& c = constant(i, j, k);
        if (sgn(c) != 0) terms[k].push_back(Expr(c) * a[i] * b[j]);
      }
    }
  }
  ExprVector out(n);
  for (int k = 0; k < n; ++k) out[k] = canonicalize(sum(terms[k]));
  return out;
}

bool LieAlgebra::is_abelian() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& v) { return sgn(v) == 0; });
}

RationalVector unit_vector(int dim, int i) {
  RationalVector v(dim);
  v.at(i) = 1;
  return v;
}

ExprVector to_expr(const RationalVector& v) {
  ExprVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.emplace_back(c);
  return out;
}

namespace {
bool is_zero_vector(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}
void add_to(RationalVector& acc, const RationalVector& v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}
}  // namespace

std::vector<Triple> jacobi_report(const LieAlgebra& alg) {
  std::vector<Triple> bad;
  const int n = alg.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        RationalVector ei = unit_vector(n, i), ej = unit_vector(n, j), ek = unit_vector(n, k);
        RationalVector s = alg.bracket(ei, alg.bracket(ej, ek));
        add_to(s, alg.bracket(ej, alg.bracket(ek, ei)));
        add_to(s, alg.bracket(ek, alg.bracket(ei, ej)));
        if (!is_zero_vector(s)) bad.push_back({i, j, k, std::move(s)});
      }
    }
  }
  return bad;
}

std::vector<Triple> antisymmetry_report(const LieAlgebra& alg) {
  std::vector<Triple> bad;
  const int n = alg.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      RationalVector s = alg.basis_bracket(i, j);
      add_to(s, alg.basis_bracket(j, i));
      if (!is_zero_vector(s)) bad.push_back({i, j, -1, std::move(s)});
    }
  }
  return bad;
}

// --- L12 -----------------------------------------------------------------------

const std::vector<std::string>& l12_labels() {
  static const std::vector<std::string> labels = {"Y",  "X1", "X2", "X3", "X4",  "X5",
                                                  "X6", "X7", "X8", "X9", "X10", "X11"};
  return labels;
}

LieAlgebra l12_table() {
  // Row i, column j, signed generator index of [X_i, X_j]. Every row of the
  // commutator table is keyed in, including the antisymmetric halves; a
  // disagreement between the two halves is caught by antisymmetry_report().
  struct Cell {
    int row, col, value;
  };
  static constexpr Cell cells[] = {
      {1, 8, -3},   {1, 9, 2},    {1, 11, 1},                                     //
      {2, 7, 3},    {2, 9, -1},   {2, 11, 2},                                     //
      {3, 7, -2},   {3, 8, 1},    {3, 11, 3},                                     //
      {4, 8, -6},   {4, 9, 5},    {4, 10, -1},                                    //
      {5, 7, 6},    {5, 9, -4},   {5, 10, -2},                                    //
      {6, 7, -5},   {6, 8, 4},    {6, 10, -3},                                    //
      {7, 2, -3},   {7, 3, 2},    {7, 5, -6},   {7, 6, 5},   {7, 8, -9}, {7, 9, 8},  //
      {8, 1, 3},    {8, 3, -1},   {8, 4, 6},    {8, 6, -4},  {8, 7, 9},  {8, 9, -7},  //
      {9, 1, -2},   {9, 2, 1},    {9, 4, -5},   {9, 5, 4},   {9, 7, -8}, {9, 8, 7},   //
      {10, 4, 1},   {10, 5, 2},   {10, 6, 3},   {10, 11, 10},                     //
      {11, 1, -1},  {11, 2, -2},  {11, 3, -3},  {11, 10, -10},
  };
  LieAlgebra alg(l12_labels());
  for (const auto& c : cells) {
    int k = c.value > 0 ? c.value : -c.value;
    alg.set_constant(c.row, c.col, k, Rational(c.value > 0 ? 1 : -1));
  }
  return alg;
}

// --- subalgebras ---------------------------------------------------------------

ClosureResult is_closed(const LieAlgebra& alg, const RationalMatrix& rows) {
  ClosureResult out;
  const int m = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != alg.dim()) throw std::invalid_argument("is_closed: dimension mismatch");
  }
  if (rank(rows) != m) return out;
  out.independent = true;
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back("E" + std::to_string(i + 1));
  LieAlgebra induced(labels);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      RationalVector b = alg.bracket(rows[i], rows[j]);
      auto coeffs = solve_in_span(rows, b);
      if (!coeffs) {
        out.failing_i = i;
        out.failing_j = j;
        out.failing_bracket = std::move(b);
        return out;
      }
      induced.set_bracket(i, j, *coeffs);
    }
  }
  out.closed = true;
  out.induced = std::move(induced);
  return out;
}

// --- automorphisms ---------------------------------------------------------------

Automorphism Automorphism::space_translation(const Vec3& a) {
  Automorphism x;
  x.kind = Kind::SpaceTranslation;
  x.vec = a;
  return x;
}
Automorphism Automorphism::galilean(const Vec3& b) {
  Automorphism x;
  x.kind = Kind::Galilean;
  x.vec = b;
  return x;
}
Automorphism Automorphism::rotation(const Mat3& r) {
  Automorphism x;
  x.kind = Kind::Rotation;
  x.rot = r;
  return x;
}
Automorphism Automorphism::time_translation(const Rational& tau) {
  Automorphism x;
  x.kind = Kind::TimeTranslation;
  x.scalar = tau;
  return x;
}
Automorphism Automorphism::dilation(const Rational& lambda) {
  Automorphism x;
  x.kind = Kind::Dilation;
  x.scalar = lambda;
  return x;
}
Automorphism Automorphism::inversion1() {
  Automorphism x;
  x.kind = Kind::I1;
  return x;
}
Automorphism Automorphism::inversion2() {
  Automorphism x;
  x.kind = Kind::I2;
  return x;
}
Automorphism Automorphism::outer_scale(const Rational& mu) {
  Automorphism x;
  x.kind = Kind::OuterScale;
  x.scalar = mu;
  return x;
}

Automorphism Automorphism::inverse() const {
  Automorphism x = *this;
  switch (kind) {
    case Kind::SpaceTranslation:
    case Kind::Galilean:
      for (auto& v : x.vec) v = -v;
      break;
    case Kind::Rotation:
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) x.rot[i][j] = rot[j][i];
      }
      break;
    case Kind::TimeTranslation:
      x.scalar = -scalar;
      break;
    case Kind::Dilation:
    case Kind::OuterScale:
      if (sgn(scalar) == 0) throw std::invalid_argument("automorphism scale must be nonzero");
      x.scalar = 1 / scalar;
      break;
    case Kind::I1:
    case Kind::I2:
      break;
  }
  return x;
}

std::string Automorphism::name() const {
  auto v3 = [](const Vec3& v) {
    return "(" + v[0].get_str() + "," + v[1].get_str() + "," + v[2].get_str() + ")";
  };
  switch (kind) {
    case Kind::SpaceTranslation:
      return "ST" + v3(vec);
    case Kind::Galilean:
      return "GT" + v3(vec);
    case Kind::Rotation:
      return "R[" + v3(rot[0]) + v3(rot[1]) + v3(rot[2]) + "]";
    case Kind::TimeTranslation:
      return "TT(" + scalar.get_str() + ")";
    case Kind::Dilation:
      return "D(" + scalar.get_str() + ")";
    case Kind::I1:
      return "I1";
    case Kind::I2:
      return "I2";
    case Kind::OuterScale:
      return "Outer(" + scalar.get_str() + ")";
  }
  return "?";
}

void validate(const Automorphism& a) {
  using Kind = Automorphism::Kind;
  if ((a.kind == Kind::Dilation || a.kind == Kind::OuterScale) && sgn(a.scalar) == 0)
    throw std::invalid_argument(a.name() + ": scale must be nonzero");
  if (a.kind == Kind::Rotation) {
    RationalMatrix r(3, RationalVector(3));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        Rational dot = 0;
        for (int k = 0; k < 3; ++k) dot += a.rot[k][i] * a.rot[k][j];
        if (dot != (i == j ? 1 : 0)) throw std::invalid_argument("rotation is not orthogonal");
        r[i][j] = a.rot[i][j];
      }
    }
    if (determinant(r) != 1) throw std::invalid_argument("rotation has determinant -1");
  }
}

namespace {

Vec3 block(const RationalVector& c, int b) { return {c[3 * b + 1], c[3 * b + 2], c[3 * b + 3]}; }
void set_block(RationalVector& c, int b, const Vec3& v) {
  for (int i = 0; i < 3; ++i) c[3 * b + 1 + i] = v[i];
}
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

RationalVector apply_automorphism(const Automorphism& a, const RationalVector& c) {
  using Kind = Automorphism::Kind;
  if (c.size() != static_cast<std::size_t>(kL12Dim)) throw std::invalid_argument("apply_automorphism: need 12 coefficients");
  validate(a);
  RationalVector out = c;
  Vec3 c1 = block(c, 0), c2 = block(c, 1), c3 = block(c, 2);
  const Rational& c10 = c[10];
  const Rational& c11 = c[11];
  switch (a.kind) {
    case Kind::SpaceTranslation: {
      Vec3 axc = cross(a.vec, c3);
      for (int i = 0; i < 3; ++i) c1[i] += c11 * a.vec[i] - axc[i];
      set_block(out, 0, c1);
      break;
    }
    case Kind::Galilean: {
      Vec3 bxc = cross(a.vec, c3);
      for (int i = 0; i < 3; ++i) {
        c1[i] -= c10 * a.vec[i];
        c2[i] -= bxc[i];
      }
      set_block(out, 0, c1);
      set_block(out, 1, c2);
      break;
    }
    case Kind::Rotation:
      for (int b = 0; b < 3; ++b) {
        Vec3 v = block(c, b), r{};
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) r[i] += a.rot[i][j] * v[j];
        }
        set_block(out, b, r);
      }
      break;
    case Kind::TimeTranslation:
      for (int i = 0; i < 3; ++i) c1[i] += a.scalar * c2[i];
      set_block(out, 0, c1);
      out[10] = c10 + a.scalar * c11;
      break;
    case Kind::Dilation:
      for (auto& v : c1) v *= a.scalar;
      set_block(out, 0, c1);
      out[10] = a.scalar * c10;
      break;
    case Kind::I1:
      for (int i = 0; i < 3; ++i) {
        c1[i] = -c1[i];
        c2[i] = -c2[i];
      }
      set_block(out, 0, c1);
      set_block(out, 1, c2);
      break;
    case Kind::I2:
      for (auto& v : c2) v = -v;
      set_block(out, 1, c2);
      out[10] = -c10;
      break;
    case Kind::OuterScale:
      out[0] = a.scalar * c[0];
      break;
  }
  return out;
}

Mat3 rotation_from_quaternion(long w, long x, long y, long z) {
  Rational n = w * w + x * x + y * y + z * z;
  if (sgn(n) == 0) throw std::invalid_argument("zero quaternion");
  Mat3 r{{{Rational(w * w + x * x - y * y - z * z), Rational(2 * (x * y - w * z)), Rational(2 * (x * z + w * y))},
          {Rational(2 * (x * y + w * z)), Rational(w * w - x * x + y * y - z * z), Rational(2 * (y * z - w * x))},
          {Rational(2 * (x * z - w * y)), Rational(2 * (y * z + w * x)), Rational(w * w - x * x - y * y + z * z)}}};
  for (auto& row : r) {
    for (auto& v : row) v /= n;
  }
  return r;
}

std::optional<HomomorphismFailure> check_homomorphism(
    const LieAlgebra& alg, const Automorphism& a,
    const std::vector<std::pair<RationalVector, RationalVector>>& pairs) {
  for (const auto& [v, w] : pairs) {
    RationalVector lhs = apply_automorphism(a, alg.bracket(v, w));
    RationalVector rhs = alg.bracket(apply_automorphism(a, v), apply_automorphism(a, w));
    if (lhs != rhs) return HomomorphismFailure{v, w, std::move(lhs), std::move(rhs)};
  }
  return std::nullopt;
}

// --- fingerprints ----------------------------------------------------------------

namespace {

RationalMatrix brackets_of(const LieAlgebra& alg, const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      RationalVector z = alg.bracket(x, y);
      if (!is_zero_vector(z)) out.push_back(std::move(z));
    }
  }
  return row_reduce(std::move(out)).rows;
}

RationalMatrix identity_rows(int n) {
  RationalMatrix m;
  for (int i = 0; i < n; ++i) m.push_back(unit_vector(n, i));
  return m;
}

}  // namespace

RationalMatrix killing_form(const LieAlgebra& alg) {
  const int n = alg.dim();
  RationalMatrix k(n, RationalVector(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Rational tr = 0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) tr += alg.constant(i, b, a) * alg.constant(j, a, b);
      }
      k[i][j] = tr;
      k[j][i] = tr;
    }
  }
  return k;
}

Fingerprint fingerprint(const LieAlgebra& alg) {
  const int n = alg.dim();
  Fingerprint f;
  const RationalMatrix whole = identity_rows(n);

  RationalMatrix d = whole;
  f.derived_series.push_back(n);
  while (!d.empty()) {
    RationalMatrix next = brackets_of(alg, d, d);
    if (static_cast<int>(next.size()) == f.derived_series.back()) break;
    f.derived_series.push_back(static_cast<int>(next.size()));
    d = std::move(next);
  }

  RationalMatrix c = whole;
  f.lower_central_series.push_back(n);
  while (!c.empty()) {
    RationalMatrix next = brackets_of(alg, whole, c);
    if (static_cast<int>(next.size()) == f.lower_central_series.back()) break;
    f.lower_central_series.push_back(static_cast<int>(next.size()));
    c = std::move(next);
  }

  // x is central iff sum_i x_i C[i][j][k] = 0 for all j, k.
  RationalMatrix eqs;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      RationalVector row(n);
      for (int i = 0; i < n; ++i) row[i] = alg.constant(i, j, k);
      eqs.push_back(std::move(row));
    }
  }
  f.center_dim = n == 0 ? 0 : static_cast<int>(nullspace(eqs).size());

  RationalMatrix kf = killing_form(alg);
  f.killing_rank = rank(kf);
  f.killing_signature = signature(kf);
  return f;
}

std::string to_string(const Fingerprint& f) {
  std::ostringstream os;
  auto seq = [&](const std::vector<int>& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
  };
  os << "derived=";
  seq(f.derived_series);
  os << " lower_central=";
  seq(f.lower_central_series);
  os << " center=" << f.center_dim << " killing_rank=" << f.killing_rank << " signature=("
     << f.killing_signature.positive << "," << f.killing_signature.negative << ","
     << f.killing_signature.zero << ")";
  return os.str();
}

}  // namespace gaslie
