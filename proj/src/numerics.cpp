#include "gaslie/numerics.hpp"

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace gaslie {

std::vector<double> singular_values(const Matrix& m) {
  if (m.empty() || m[0].empty()) return {};
  Eigen::MatrixXd a(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m[0].size()) throw std::invalid_argument("ragged matrix");
    for (std::size_t j = 0; j < m[i].size(); ++j) a(i, j) = m[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int numeric_rank(const Matrix& m, double tol) {
  auto s = singular_values(m);
  if (s.empty() || s[0] == 0.0) return 0;
  int r = 0;
  for (double v : s) {
    if (v > tol * s[0]) ++r;
  }
  return r;
}

// --- RNG ---------------------------------------------------------------------

Rng::Rng(std::uint64_t seed) {
  for (auto& w : s_) {
    seed += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    w = z ^ (z >> 31);
  }
}

std::uint64_t Rng::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform(double lo, double hi) {
  double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal() {
  double u1 = uniform(0.0, 1.0);
  double u2 = uniform(0.0, 1.0);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// --- RK4 ---------------------------------------------------------------------

Trajectory integrate(const std::array<Expr, 3>& velocity, const std::array<double, 3>& x0, double t0, double t1,
                     double h, const Assignment& constants) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(t1 > t0)) throw std::invalid_argument("empty time range");
  Trajectory tr;
  tr.start = x0;
  for (const auto& [k, v] : constants.values) tr.constants[k] = v;
  Assignment a = constants;
  auto rhs = [&](double t, const std::array<double, 3>& p) {
    a.values["t"] = t;
    a.values["x"] = p[0];
    a.values["y"] = p[1];
    a.values["z"] = p[2];
    std::array<double, 3> out;
    for (int i = 0; i < 3; ++i) {
      try {
        out[i] = eval(velocity[i], a);
      } catch (const EvalError& e) {
        std::ostringstream msg;
        msg << std::setprecision(17) << e.what() << " at t = " << t;
        throw EvalError(msg.str(), e.culprit());
      }
      if (!std::isfinite(out[i])) {
        std::ostringstream msg;
        msg << std::setprecision(17) << "velocity is not finite at t = " << t;
        throw EvalError(msg.str(), "");
      }
    }
    return out;
  };
  auto axpy = [](const std::array<double, 3>& p, double s, const std::array<double, 3>& k) {
    return std::array<double, 3>{p[0] + s * k[0], p[1] + s * k[1], p[2] + s * k[2]};
  };
  const auto steps = static_cast<long>(std::ceil((t1 - t0) / h - 1e-9));
  std::array<double, 3> p = x0;
  tr.samples.push_back({t0, p[0], p[1], p[2]});
  for (long n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    const double dt = n + 1 == steps ? t1 - t : h;
    auto k1 = rhs(t, p);
    auto k2 = rhs(t + dt / 2, axpy(p, dt / 2, k1));
    auto k3 = rhs(t + dt / 2, axpy(p, dt / 2, k2));
    auto k4 = rhs(t + dt, axpy(p, dt, k3));
    for (int i = 0; i < 3; ++i) p[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    tr.samples.push_back({n + 1 == steps ? t1 : t + dt, p[0], p[1], p[2]});
  }
  return tr;
}

namespace {

std::array<double, 3> closed_form(const FlowMap& fm, Assignment a, double t) {
  a.values["t"] = t;
  return {eval(fm.position[0], a), eval(fm.position[1], a), eval(fm.position[2], a)};
}

}  // namespace

double compare_to_closed_form(const Trajectory& tr, const FlowMap& fm, const Assignment& labels) {
  double err = 0.0;
  for (const auto& s : tr.samples) {
    auto c = closed_form(fm, labels, s[0]);
    err = std::max(err, std::hypot(s[1] - c[0], s[2] - c[1], s[3] - c[2]));
  }
  return err;
}

double max_component_error(const Trajectory& tr, const FlowMap& fm, const Assignment& labels) {
  double err = 0.0;
  for (const auto& s : tr.samples) {
    auto c = closed_form(fm, labels, s[0]);
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(s[i + 1] - c[i]));
  }
  return err;
}

void write_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,x,y,z\n";
  os << std::setprecision(17);
  for (const auto& s : tr.samples) os << s[0] << ',' << s[1] << ',' << s[2] << ',' << s[3] << '\n';
}

ConvergenceStudy convergence_order(const std::array<Expr, 3>& velocity, const FlowMap& fm,
                                   const Assignment& labels, double t0, double t1,
                                   const std::vector<double>& steps) {
  ConvergenceStudy out;
  out.steps = steps;
  auto start = closed_form(fm, labels, t0);
  auto end = closed_form(fm, labels, t1);
  for (double h : steps) {
    Trajectory tr = integrate(velocity, start, t0, t1, h, labels);
    const auto& last = tr.samples.back();
    out.errors.push_back(std::hypot(last[1] - end[0], last[2] - end[1], last[3] - end[2]));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    double lx = std::log(steps[i]);
    double ly = std::log(out.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

// --- sphere transport --------------------------------------------------------

double Quadric::value(const std::array<double, 3>& p) const {
  double v = c;
  for (int i = 0; i < 3; ++i) {
    v += b[i] * p[i];
    for (int j = 0; j < 3; ++j) v += a[i][j] * p[i] * p[j];
  }
  return v;
}

namespace {

// Exact rational of the shortest decimal that round-trips to v, so 1.6 becomes 8/5.
Rational decimal_rational(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string text(buf, res.ptr);
  const auto e = text.find('e');
  const int exponent = std::stoi(text.substr(e + 1));
  std::string mantissa = text.substr(0, e);
  int digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = static_cast<int>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  Rational r(mantissa);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent - digits)));
  if (exponent - digits >= 0) r *= scale; else r /= scale;
  r.canonicalize();
  return r;
}

}  // namespace

SphereTransport sphere_transport(const FlowMap& fm, const Assignment& constants, int points, double t,
                                 std::uint64_t seed) {
  if (!is_isochoric(fm.kind)) throw std::invalid_argument("sphere transport uses the isochoric flow map");
  SphereTransport out;
  out.t = t;
  out.points = points;
  out.seed = seed;

  // The map is affine in the labels: position = M labels + c.
  Expr m[3][3];
  Expr c[3];
  std::map<std::string, Expr> zero_labels;
  for (const auto& l : fm.labels) zero_labels[l] = Expr(0);
  for (int i = 0; i < 3; ++i) {
    c[i] = substitute(fm.position[i], zero_labels);
    for (int j = 0; j < 3; ++j) m[i][j] = differentiate(fm.position[i], fm.labels[j]);
  }
  // Inverse by the adjugate; the determinant is the Jacobian.
  Expr det = canonicalize(fm.jacobian);
  const char* xyz[3] = {"x", "y", "z"};
  Expr quad(-1);
  std::array<Expr, 3> inv;
  for (int i = 0; i < 3; ++i) {
    Expr li(0);
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      Expr cof = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
      li = li + cof * (Expr::variable(xyz[j]) - c[j]);
    }
    inv[i] = canonicalize(li / det);
    quad = quad + inv[i] * inv[i];
  }
  Assignment at = constants;
  at.values["t"] = t;
  std::map<std::string, Expr> tb;
  for (const auto& [k, v] : at.values) {
    if (k == "t" || k == "rho0" || k == "k0" || k == "m0") {
      tb[k] = Expr(decimal_rational(v));
    }
  }
  out.quadric_expr = substitute(quad, tb);
  // Coefficients from derivatives at the origin.
  Assignment origin = at;
  for (const char* v : xyz) origin.values[v] = 0.0;
  out.quadric.c = eval(out.quadric_expr, origin);
  for (int i = 0; i < 3; ++i) {
    Expr di = differentiate(out.quadric_expr, xyz[i]);
    out.quadric.b[i] = eval(di, origin);
    for (int j = 0; j < 3; ++j) {
      double h = eval(differentiate(di, xyz[j]), origin);
      out.quadric.a[i][j] = h / 2;
    }
  }
  out.jacobian = eval(det, at);
  out.volume = 4.0 / 3.0 * std::numbers::pi * std::abs(out.jacobian);
  {
    Eigen::Matrix3d A;
    Eigen::Vector3d B;
    for (int i = 0; i < 3; ++i) {
      B(i) = out.quadric.b[i];
      for (int j = 0; j < 3; ++j) A(i, j) = out.quadric.a[i][j];
    }
    double k = B.dot(A.ldlt().solve(B)) / 4.0 - out.quadric.c;
    out.volume_from_quadric = 4.0 / 3.0 * std::numbers::pi * std::pow(k, 1.5) / std::sqrt(A.determinant());
  }

  Rng rng(seed);
  Assignment a = at;
  for (int n = 0; n < points; ++n) {
    std::array<double, 3> s{rng.normal(), rng.normal(), rng.normal()};
    const double norm = std::hypot(s[0], s[1], s[2]);
    for (auto& v : s) v /= norm;
    for (int i = 0; i < 3; ++i) a.values[fm.labels[i]] = s[i];
    std::array<double, 3> img{eval(fm.position[0], a), eval(fm.position[1], a), eval(fm.position[2], a)};
    out.max_residual = std::max(out.max_residual, std::abs(out.quadric.value(img)));
    Assignment b = at;
    for (int i = 0; i < 3; ++i) b.values[xyz[i]] = img[i];
    for (int i = 0; i < 3; ++i) out.max_label_error = std::max(out.max_label_error, std::abs(eval(inv[i], b) - s[i]));
    out.images.push_back(img);
  }
  return out;
}

}  // namespace gaslie
