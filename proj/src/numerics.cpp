#include "otlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "otlab/errors.hpp"

namespace otlab {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * double(i) / double(n - 1);
  out.back() = b;
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (lo <= 0.0 || hi <= lo) throw DomainError("logspace requires 0 < lo < hi");
  std::vector<double> out(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::size_t bracket_index(const std::vector<double>& xs, double x) {
  if (xs.size() < 2) throw DomainError("bracket_index needs at least two abscissae");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t j = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
  return std::min(j, xs.size() - 2);
}

double pl_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  std::size_t j = bracket_index(xs, x);
  const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
  return ys[j] + t * (ys[j + 1] - ys[j]);
}

ScalarMin minimize_scalar(const Fn& f, double a, double b, int scan_points, double x_tol) {
  if (!(b > a)) throw DomainError("minimize_scalar requires a < b");
  double best_x = a, best_v = f(a);
  for (int i = 1; i < scan_points; ++i) {
    const double x = a + (b - a) * double(i) / double(scan_points - 1);
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double step = (b - a) / double(scan_points - 1);
  double lo = std::max(a, best_x - step), hi = std::min(b, best_x + step);

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > x_tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (lo + hi);
  const double vm = f(xm);
  if (vm <= best_v) return {xm, vm};
  return {best_x, best_v};
}

double bisect_root(const Fn& f, double a, double b, double x_tol) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw DomainError("bisect_root requires a sign change");
  for (int it = 0; it < 200 && b - a > x_tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

double invert_increasing(const Fn& f, double y, double a, double b, double x_tol) {
  return bisect_root([&](double x) { return f(x) - y; }, a, b, x_tol);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const Fn& f, double a, double fa, double b, double fb, double m, double fm,
                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Fn& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace otlab
