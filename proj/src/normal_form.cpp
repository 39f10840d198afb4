#include "normal_form.hpp"

#include <algorithm>
#include <stdexcept>

namespace gaslie::detail {
namespace {

bool is_poly_kernel(const Expr& k) { return k.kind() == ExprKind::Sum; }

Expr make_kernel(ExprKind kind, std::vector<Expr> args, int integer = 0, std::string name = {}) {
  return make_node(kind, std::move(args), integer, std::move(name), /*canonical=*/true);
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size()) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size()) {
      out.factors.push_back(b.factors[j++]);
    } else {
      int c = compare(a.factors[i].first, b.factors[j].first);
      if (c < 0) {
        out.factors.push_back(a.factors[i++]);
      } else if (c > 0) {
        out.factors.push_back(b.factors[j++]);
      } else {
        int e = a.factors[i].second + b.factors[j].second;
        if (e != 0) out.factors.emplace_back(a.factors[i].first, e);
        ++i;
        ++j;
      }
    }
  }
  return out;
}

Monomial mono_inverse(const Monomial& m) {
  Monomial out = m;
  for (auto& f : out.factors) f.second = -f.second;
  return out;
}

int exponent_of(const Monomial& m, const Expr& k) {
  for (const auto& [kk, e] : m.factors) {
    if (kk == k) return e;
  }
  return 0;
}

Monomial with_exponent(const Monomial& m, const Expr& k, int e) {
  Monomial out;
  bool placed = false;
  for (const auto& f : m.factors) {
    int c = compare(f.first, k);
    if (c == 0) {
      if (e != 0) out.factors.emplace_back(k, e);
      placed = true;
    } else {
      if (c > 0 && !placed) {
        if (e != 0) out.factors.emplace_back(k, e);
        placed = true;
      }
      out.factors.push_back(f);
    }
  }
  if (!placed && e != 0) out.factors.emplace_back(k, e);
  return out;
}

void add_term(Terms& t, const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = t.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) t.erase(it);
  }
}

Terms raw_mul(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  }
  return out;
}

Terms raw_scale_mono(const Terms& a, const Monomial& m, const Rational& c) {
  Terms out;
  for (const auto& [ma, ca] : a) add_term(out, mono_mul(ma, m), ca * c);
  return out;
}

Terms raw_power(const Terms& base, int n) {
  Terms result;
  result.emplace(Monomial{}, Rational(1));
  for (int i = 0; i < n; ++i) result = raw_mul(result, base);
  return result;
}

// Reads the terms of a canonical tree without re-normalizing.
bool read_term(const Expr& e, Monomial& m, Rational& c);

bool read_factor(const Expr& e, Monomial& m) {
  switch (e.kind()) {
    case ExprKind::Symbol:
    case ExprKind::LogAbs:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Sqrt:
    case ExprKind::Atan2:
    case ExprKind::Function:
      m = mono_mul(m, Monomial{{{e, 1}}});
      return true;
    case ExprKind::Power:
      m = mono_mul(m, Monomial{{{e.args()[0], e.exponent()}}});
      return true;
    default:
      return false;
  }
}

bool read_term(const Expr& e, Monomial& m, Rational& c) {
  if (e.kind() == ExprKind::Constant) {
    c = e.constant();
    return true;
  }
  if (e.kind() == ExprKind::Product) {
    c = 1;
    for (const auto& f : e.args()) {
      if (f.kind() == ExprKind::Constant) {
        c *= f.constant();
      } else if (!read_factor(f, m)) {
        return false;
      }
    }
    return true;
  }
  c = 1;
  return read_factor(e, m);
}

Poly read_canonical(const Expr& e) {
  Poly p;
  if (e.kind() == ExprKind::Sum) {
    for (const auto& t : e.args()) {
      Monomial m;
      Rational c;
      if (!read_term(t, m, c)) throw std::logic_error("malformed canonical sum");
      add_term(p.terms, m, c);
    }
    return p;
  }
  Monomial m;
  Rational c;
  if (!read_term(e, m, c)) throw std::logic_error("malformed canonical term");
  add_term(p.terms, m, c);
  return p;
}

const Terms& kernel_terms(const Expr& poly_kernel) {
  // Poly kernels are canonical sums with nonnegative exponents.
  thread_local std::map<Expr, Terms, ExprLess> cache;
  auto it = cache.find(poly_kernel);
  if (it != cache.end()) return it->second;
  return cache.emplace(poly_kernel, read_canonical(poly_kernel).terms).first->second;
}

// --- fractions ----------------------------------------------------------------

struct Frac {
  Terms num;  // nonnegative exponents, atomic kernels only
  std::map<Expr, int, ExprLess> den_atoms;
  std::map<Expr, int, ExprLess> den_polys;
};

Frac to_frac(const Terms& t) {
  Frac f;
  std::map<Expr, std::pair<int, std::size_t>, ExprLess> stats;  // min exponent, count
  for (const auto& [m, c] : t) {
    for (const auto& [k, e] : m.factors) {
      auto [it, inserted] = stats.try_emplace(k, e, 0);
      if (!inserted) it->second.first = std::min(it->second.first, e);
      ++it->second.second;
    }
  }
  std::map<Expr, int, ExprLess> shift;  // exponent added to every term
  for (const auto& [k, s] : stats) {
    int mn = s.second == t.size() ? s.first : std::min(s.first, 0);
    if (mn < 0) {
      if (is_poly_kernel(k)) {
        f.den_polys[k] = -mn;
      } else {
        f.den_atoms[k] = -mn;
      }
      shift[k] = -mn;
    }
  }
  std::map<Expr, std::map<int, Terms>, ExprLess> power_cache;
  for (const auto& [m, c] : t) {
    Monomial atoms;
    std::vector<std::pair<Expr, int>> poly_powers;
    auto place = [&](const Expr& k, int e) {
      if (e == 0) return;
      if (is_poly_kernel(k)) {
        poly_powers.emplace_back(k, e);
      } else {
        atoms = mono_mul(atoms, Monomial{{{k, e}}});
      }
    };
    for (const auto& [k, sh] : shift) {
      if (exponent_of(m, k) == 0) place(k, sh);
    }
    for (const auto& [k, e0] : m.factors) {
      auto s = shift.find(k);
      place(k, e0 + (s == shift.end() ? 0 : s->second));
    }
    Terms term;
    term.emplace(atoms, c);
    for (const auto& [k, e] : poly_powers) {
      auto& slot = power_cache[k];
      auto it = slot.find(e);
      if (it == slot.end()) it = slot.emplace(e, raw_power(kernel_terms(k), e)).first;
      term = raw_mul(term, it->second);
    }
    for (const auto& [mm, cc] : term) add_term(f.num, mm, cc);
  }
  return f;
}

Terms from_frac(const Frac& f) {
  Monomial den;
  for (const auto& [k, e] : f.den_atoms) den = mono_mul(den, Monomial{{{k, -e}}});
  for (const auto& [k, e] : f.den_polys) den = mono_mul(den, Monomial{{{k, -e}}});
  return raw_scale_mono(f.num, den, Rational(1));
}

// sin(a)^n with n >= 2 -> sin(a)^(n-2) * (1 - cos(a)^2)
bool reduce_pythagorean(Terms& t) {
  bool any = false;
  bool changed = true;
  while (changed) {
    changed = false;
    Terms out;
    for (const auto& [m, c] : t) {
      const Factor* hit = nullptr;
      for (const auto& f : m.factors) {
        if (f.first.kind() == ExprKind::Sin && f.second >= 2) {
          hit = &f;
          break;
        }
      }
      if (!hit) {
        add_term(out, m, c);
        continue;
      }
      Expr cosk = make_kernel(ExprKind::Cos, {hit->first.args()[0]});
      Monomial lowered = with_exponent(m, hit->first, hit->second - 2);
      add_term(out, lowered, c);
      add_term(out, mono_mul(lowered, Monomial{{{cosk, 2}}}), -c);
      changed = true;
      any = true;
    }
    t = std::move(out);
  }
  return any;
}

// sqrt(g)^n with |n| >= 2 -> g^(n div 2) * sqrt(g)^(n mod 2)
bool rewrite_sqrt_powers(Terms& t) {
  bool found = false;
  for (const auto& [m, c] : t) {
    for (const auto& f : m.factors) {
      if (f.first.kind() == ExprKind::Sqrt && std::abs(f.second) >= 2) found = true;
    }
  }
  if (!found) return false;
  Terms out;
  for (const auto& [m, c] : t) {
    Terms term;
    Monomial rest;
    std::vector<std::pair<Expr, int>> roots;
    for (const auto& f : m.factors) {
      if (f.first.kind() == ExprKind::Sqrt && std::abs(f.second) >= 2) {
        roots.push_back(f);
      } else {
        rest.factors.push_back(f);
      }
    }
    term.emplace(rest, c);
    for (const auto& [k, e] : roots) {
      int q = e >= 0 ? e / 2 : -((-e + 1) / 2);
      int r = e - 2 * q;
      Poly g = power(to_poly(k.args()[0]), q);
      term = raw_mul(term, g.terms);
      if (r != 0) term = raw_scale_mono(term, Monomial{{{k, r}}}, Rational(1));
    }
    for (const auto& [mm, cc] : term) add_term(out, mm, cc);
  }
  t = std::move(out);
  return true;
}

bool mono_divides(const Monomial& d, const Monomial& n) {
  for (const auto& [k, e] : d.factors) {
    if (exponent_of(n, k) < e) return false;
  }
  return true;
}

// Exact polynomial division; both operands have nonnegative exponents.
bool exact_divide(const Terms& n, const Terms& d, Terms* q) {
  if (d.empty()) return false;
  Terms r = n;
  Terms quot;
  const auto& [ld_m, ld_c] = *d.rbegin();
  int guard = 0;
  while (!r.empty()) {
    if (++guard > 100000) return false;
    const auto& [lr_m, lr_c] = *r.rbegin();
    if (!mono_divides(ld_m, lr_m)) return false;
    Monomial tm = mono_mul(lr_m, mono_inverse(ld_m));
    Rational tc = lr_c / ld_c;
    add_term(quot, tm, tc);
    for (const auto& [dm, dc] : d) add_term(r, mono_mul(dm, tm), -tc * dc);
  }
  *q = std::move(quot);
  return true;
}

// Divides by sin(a) modulo sin^2 + cos^2 = 1: N = A + s B is divisible iff
// (1 - c^2) | A, and then N / s = B + s A / (1 - c^2).
bool divide_by_sin(const Terms& num, const Expr& s, Terms* out) {
  Terms a, b;
  for (const auto& [m, c] : num) {
    int e = exponent_of(m, s);
    if (e == 0) {
      add_term(a, m, c);
    } else if (e == 1) {
      add_term(b, with_exponent(m, s, 0), c);
    } else {
      return false;
    }
  }
  Terms qa;
  if (!a.empty()) {
    Expr cosk = make_kernel(ExprKind::Cos, {s.args()[0]});
    Terms one_minus_c2;
    add_term(one_minus_c2, Monomial{}, Rational(1));
    add_term(one_minus_c2, Monomial{{{cosk, 2}}}, Rational(-1));
    if (!exact_divide(a, one_minus_c2, &qa)) return false;
  }
  Terms res = b;
  for (const auto& [m, c] : qa) add_term(res, mono_mul(m, Monomial{{{s, 1}}}), c);
  *out = std::move(res);
  return true;
}

void cancel(Frac& f) {
  bool changed = true;
  while (changed) {
    changed = false;
    reduce_pythagorean(f.num);
    if (f.num.empty()) {
      f.den_atoms.clear();
      f.den_polys.clear();
      return;
    }
    for (auto it = f.den_atoms.begin(); it != f.den_atoms.end();) {
      const Expr& k = it->first;
      int mn = it->second;
      for (const auto& [m, c] : f.num) mn = std::min(mn, exponent_of(m, k));
      if (mn > 0) {
        Terms t;
        for (const auto& [m, c] : f.num) add_term(t, with_exponent(m, k, exponent_of(m, k) - mn), c);
        f.num = std::move(t);
        it->second -= mn;
        changed = true;
      }
      if (it->second > 0 && k.kind() == ExprKind::Sin) {
        Terms q;
        if (divide_by_sin(f.num, k, &q)) {
          f.num = std::move(q);
          it->second -= 1;
          changed = true;
        }
      }
      if (it->second == 0) {
        it = f.den_atoms.erase(it);
      } else {
        ++it;
      }
    }
    for (auto it = f.den_polys.begin(); it != f.den_polys.end();) {
      Terms q;
      while (it->second > 0 && exact_divide(f.num, kernel_terms(it->first), &q)) {
        f.num = std::move(q);
        it->second -= 1;
        changed = true;
      }
      if (it->second == 0) {
        it = f.den_polys.erase(it);
      } else {
        ++it;
      }
    }
  }
}

Rational content_of(const Terms& t) {
  mpz_class g = 0, l = 1;
  for (const auto& [m, c] : t) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational r(g, l);
  r.canonicalize();
  if (sgn(t.rbegin()->second) < 0) r = -r;
  return r;
}

Monomial monomial_content(const Terms& t) {
  // Minimum exponent (>= 0) of each kernel over all terms.
  Monomial out = t.begin()->first;
  for (const auto& [m, c] : t) {
    Monomial next;
    for (const auto& [k, e] : out.factors) {
      int mn = std::min(e, exponent_of(m, k));
      if (mn > 0) next.factors.emplace_back(k, mn);
    }
    out = std::move(next);
  }
  return out;
}

Expr poly_kernel_from(const Terms& prim) {
  Poly p;
  p.terms = prim;
  return from_poly(p);
}

// Splits a multi-term numerator into content * monomial * primitive kernel.
void split_numerator(const Terms& num, Rational& rc, Monomial& mc, Expr& kernel) {
  mc = monomial_content(num);
  rc = content_of(num);
  Terms prim = raw_scale_mono(num, mono_inverse(mc), Rational(1 / rc));
  kernel = poly_kernel_from(prim);
}

Poly ln_of_rational(const Rational& c) {
  Poly out;
  auto ln_int = [&](const mpz_class& n, int sign) {
    mpz_class a = abs(n);
    if (a == 1) return;
    add_term(out.terms, Monomial{{{make_kernel(ExprKind::LogAbs, {Expr(Rational(a))}), 1}}},
             Rational(sign));
  };
  ln_int(c.get_num(), 1);
  ln_int(c.get_den(), -1);
  return out;
}

Poly ln_of_kernel(const Expr& k) {
  if (k.kind() == ExprKind::Sqrt) return scale(ln_poly(to_poly(k.args()[0])), Rational(1, 2));
  return Poly::kernel(make_kernel(ExprKind::LogAbs, {k}));
}

bool leading_negative(const Poly& p) { return sgn(p.terms.rbegin()->second) < 0; }

}  // namespace

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors) d += f.second;
  return d;
}

int compare_monomials(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    int c = compare(a.factors[i].first, b.factors[j].first);
    if (c == 0) {
      if (a.factors[i].second != b.factors[j].second)
        return a.factors[i].second < b.factors[j].second ? -1 : 1;
      ++i;
      ++j;
    } else if (c < 0) {
      return a.factors[i].second > 0 ? 1 : -1;
    } else {
      return b.factors[j].second > 0 ? -1 : 1;
    }
  }
  if (i < a.factors.size()) return a.factors[i].second > 0 ? 1 : -1;
  if (j < b.factors.size()) return b.factors[j].second > 0 ? -1 : 1;
  return 0;
}

Poly Poly::constant(const Rational& c) {
  Poly p;
  add_term(p.terms, Monomial{}, c);
  return p;
}

Poly Poly::kernel(const Expr& k, int exponent) {
  Poly p;
  p.terms.emplace(Monomial{{{k, exponent}}}, Rational(1));
  return p;
}

bool Poly::is_constant(Rational* value) const {
  if (terms.empty()) {
    if (value) *value = 0;
    return true;
  }
  if (terms.size() == 1 && terms.begin()->first.factors.empty()) {
    if (value) *value = terms.begin()->second;
    return true;
  }
  return false;
}

Poly normalize(Terms t) {
  while (rewrite_sqrt_powers(t)) {
  }
  if (t.empty()) return {};
  Frac f = to_frac(t);
  cancel(f);
  Poly p;
  p.terms = from_frac(f);
  return p;
}

Poly add(const Poly& a, const Poly& b) {
  Terms t = a.terms;
  for (const auto& [m, c] : b.terms) add_term(t, m, c);
  return normalize(std::move(t));
}

Poly sub(const Poly& a, const Poly& b) {
  Terms t = a.terms;
  for (const auto& [m, c] : b.terms) add_term(t, m, -c);
  return normalize(std::move(t));
}

Poly mul(const Poly& a, const Poly& b) { return normalize(raw_mul(a.terms, b.terms)); }

Poly scale(const Poly& a, const Rational& c) {
  Poly p;
  if (sgn(c) == 0) return p;
  for (const auto& [m, cc] : a.terms) p.terms.emplace(m, cc * c);
  return p;
}

Poly invert(const Poly& p) {
  if (p.is_zero()) throw std::domain_error("division by zero");
  Frac f = to_frac(p.terms);
  cancel(f);
  Terms inv;
  if (f.num.size() == 1) {
    const auto& [m, c] = *f.num.begin();
    inv.emplace(mono_inverse(m), Rational(1 / c));
  } else {
    Rational rc;
    Monomial mc;
    Expr kernel;
    split_numerator(f.num, rc, mc, kernel);
    inv.emplace(mono_mul(mono_inverse(mc), Monomial{{{kernel, -1}}}), Rational(1 / rc));
  }
  Monomial den;
  for (const auto& [k, e] : f.den_atoms) den = mono_mul(den, Monomial{{{k, e}}});
  inv = raw_scale_mono(inv, den, Rational(1));
  for (const auto& [k, e] : f.den_polys) inv = raw_mul(inv, raw_power(kernel_terms(k), e));
  return normalize(std::move(inv));
}

Poly power(const Poly& p, int n) {
  if (n == 0) return Poly::constant(1);
  if (n < 0) return power(invert(p), -n);
  Poly result = Poly::constant(1);
  Poly base = p;
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n) base = mul(base, base);
  }
  return result;
}

Poly ln_poly(const Poly& p) {
  if (p.is_zero()) throw std::domain_error("ln|0|");
  Frac f = to_frac(p.terms);
  cancel(f);
  Poly out;
  auto accumulate = [&](const Poly& q, const Rational& w) {
    for (const auto& [m, c] : q.terms) add_term(out.terms, m, c * w);
  };
  if (f.num.size() == 1) {
    const auto& [m, c] = *f.num.begin();
    accumulate(ln_of_rational(c), 1);
    for (const auto& [k, e] : m.factors) accumulate(ln_of_kernel(k), e);
  } else {
    Rational rc;
    Monomial mc;
    Expr kernel;
    split_numerator(f.num, rc, mc, kernel);
    accumulate(ln_of_rational(rc), 1);
    for (const auto& [k, e] : mc.factors) accumulate(ln_of_kernel(k), e);
    accumulate(Poly::kernel(make_kernel(ExprKind::LogAbs, {kernel})), 1);
  }
  for (const auto& [k, e] : f.den_atoms) accumulate(ln_of_kernel(k), -e);
  for (const auto& [k, e] : f.den_polys) {
    accumulate(Poly::kernel(make_kernel(ExprKind::LogAbs, {k})), -e);
  }
  return normalize(std::move(out.terms));
}

Poly sin_poly(const Poly& p) {
  if (p.is_zero()) return {};
  if (leading_negative(p)) return scale(sin_poly(scale(p, -1)), -1);
  return Poly::kernel(make_kernel(ExprKind::Sin, {from_poly(p)}));
}

Poly cos_poly(const Poly& p) {
  if (p.is_zero()) return Poly::constant(1);
  if (leading_negative(p)) return cos_poly(scale(p, -1));
  return Poly::kernel(make_kernel(ExprKind::Cos, {from_poly(p)}));
}

Poly sqrt_poly(const Poly& p) {
  if (p.is_zero()) return {};
  if (p.terms.size() == 1) {
    const auto& [m, c] = *p.terms.begin();
    bool even = std::all_of(m.factors.begin(), m.factors.end(),
                            [](const Factor& f) { return f.second % 2 == 0; });
    if (even && sgn(c) > 0 && mpz_perfect_square_p(c.get_num_mpz_t()) &&
        mpz_perfect_square_p(c.get_den_mpz_t())) {
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), c.get_num_mpz_t());
      mpz_sqrt(d.get_mpz_t(), c.get_den_mpz_t());
      Monomial half;
      for (const auto& [k, e] : m.factors) half.factors.emplace_back(k, e / 2);
      Poly out;
      out.terms.emplace(half, Rational(n, d));
      return out;
    }
  }
  return Poly::kernel(make_kernel(ExprKind::Sqrt, {from_poly(p)}));
}

Poly atan2_poly(const Poly& y, const Poly& x) {
  return Poly::kernel(make_kernel(ExprKind::Atan2, {from_poly(y), from_poly(x)}));
}

Poly function_poly(const std::string& name, int order, const Poly& arg) {
  return Poly::kernel(make_kernel(ExprKind::Function, {from_poly(arg)}, order, name));
}

Poly to_poly(const Expr& e) {
  if (e.is_canonical()) return read_canonical(e);
  switch (e.kind()) {
    case ExprKind::Constant:
      return Poly::constant(e.constant());
    case ExprKind::Symbol:
      return Poly::kernel(e);
    case ExprKind::Sum: {
      Terms t;
      for (const auto& a : e.args()) {
        for (const auto& [m, c] : to_poly(a).terms) add_term(t, m, c);
      }
      return normalize(std::move(t));
    }
    case ExprKind::Product: {
      Poly acc = Poly::constant(1);
      for (const auto& a : e.args()) {
        acc = mul(acc, to_poly(a));
        if (acc.is_zero()) break;
      }
      return acc;
    }
    case ExprKind::Power:
      return power(to_poly(e.args()[0]), e.exponent());
    case ExprKind::LogAbs:
      return ln_poly(to_poly(e.args()[0]));
    case ExprKind::Sin:
      return sin_poly(to_poly(e.args()[0]));
    case ExprKind::Cos:
      return cos_poly(to_poly(e.args()[0]));
    case ExprKind::Sqrt:
      return sqrt_poly(to_poly(e.args()[0]));
    case ExprKind::Atan2:
      return atan2_poly(to_poly(e.args()[0]), to_poly(e.args()[1]));
    case ExprKind::Function:
      return function_poly(e.name(), e.order(), to_poly(e.args()[0]));
  }
  throw std::logic_error("unreachable");
}

Expr from_poly(const Poly& p) {
  if (p.terms.empty()) return Expr(0);
  std::vector<Expr> terms;
  terms.reserve(p.terms.size());
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    std::vector<Expr> factors;
    if (c != 1 || m.factors.empty()) factors.emplace_back(c);
    for (const auto& [k, e] : m.factors) {
      factors.push_back(e == 1 ? k : make_kernel(ExprKind::Power, {k}, e));
    }
    if (factors.size() == 1) {
      terms.push_back(factors[0]);
    } else {
      terms.push_back(make_kernel(ExprKind::Product, std::move(factors)));
    }
  }
  if (terms.size() == 1) return terms[0];
  return make_kernel(ExprKind::Sum, std::move(terms));
}

Poly derivative(const Poly& p, std::string_view var) {
  std::map<Expr, Poly, ExprLess> memo;
  auto dkernel = [&](const Expr& k) -> const Poly& {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    Poly d;
    switch (k.kind()) {
      case ExprKind::Symbol:
        if (k.name() == var) d = Poly::constant(1);
        break;
      case ExprKind::Sum: {
        Poly kp;
        kp.terms = kernel_terms(k);
        d = derivative(kp, var);
        break;
      }
      case ExprKind::LogAbs: {
        Poly g = to_poly(k.args()[0]);
        Poly dg = derivative(g, var);
        if (!dg.is_zero()) d = mul(dg, invert(g));
        break;
      }
      case ExprKind::Sin: {
        Poly g = to_poly(k.args()[0]);
        Poly dg = derivative(g, var);
        if (!dg.is_zero()) d = mul(dg, cos_poly(g));
        break;
      }
      case ExprKind::Cos: {
        Poly g = to_poly(k.args()[0]);
        Poly dg = derivative(g, var);
        if (!dg.is_zero()) d = scale(mul(dg, sin_poly(g)), -1);
        break;
      }
      case ExprKind::Sqrt: {
        Poly g = to_poly(k.args()[0]);
        Poly dg = derivative(g, var);
        if (!dg.is_zero()) d = scale(mul(dg, Poly::kernel(k, -1)), Rational(1, 2));
        break;
      }
      case ExprKind::Atan2: {
        Poly y = to_poly(k.args()[0]);
        Poly x = to_poly(k.args()[1]);
        Poly dy = derivative(y, var);
        Poly dx = derivative(x, var);
        if (!dy.is_zero() || !dx.is_zero()) {
          Poly numer = sub(mul(x, dy), mul(y, dx));
          d = mul(numer, invert(add(mul(x, x), mul(y, y))));
        }
        break;
      }
      case ExprKind::Function: {
        Poly g = to_poly(k.args()[0]);
        Poly dg = derivative(g, var);
        if (!dg.is_zero()) {
          d = mul(dg, Poly::kernel(make_kernel(ExprKind::Function, {k.args()[0]}, k.order() + 1,
                                               k.name())));
        }
        break;
      }
      default:
        throw std::logic_error("not a kernel");
    }
    return memo.emplace(k, std::move(d)).first->second;
  };

  Terms acc;
  for (const auto& [m, c] : p.terms) {
    for (const auto& [k, e] : m.factors) {
      const Poly& dk = dkernel(k);
      if (dk.is_zero()) continue;
      Monomial rest = with_exponent(m, k, e - 1);
      for (const auto& [dm, dc] : dk.terms) add_term(acc, mono_mul(rest, dm), c * e * dc);
    }
  }
  return normalize(std::move(acc));
}

}  // namespace gaslie::detail
