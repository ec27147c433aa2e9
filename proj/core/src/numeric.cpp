#include "smallball/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>

#include "smallball/errors.hpp"

namespace smallball {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.node.resize(n);
  gl.weight.resize(n);
  const double pi = 3.14159265358979323846;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.node[i] = -x;
    gl.node[n - 1 - i] = x;
    gl.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weight[n - 1 - i] = gl.weight[i];
  }
  return gl;
}

// Kronrod 15 / Gauss 7 abscissae and weights (positive half).
constexpr double kGk15X[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kGk15WK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kG7W[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
  double value;
  double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  if (std::isnan(fc)) raise(errc::quadrature_failure, "integrand returned NaN");
  double resk = fc * kGk15WK[7];
  double resg = fc * kG7W[3];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    double x = h * kGk15X[j];
    double f1 = f(c - x);
    double f2 = f(c + x);
    if (std::isnan(f1) || std::isnan(f2)) raise(errc::quadrature_failure, "integrand returned NaN");
    double fsum = f1 + f2;
    resk += kGk15WK[j] * fsum;
    resabs += kGk15WK[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kG7W[j / 2] * fsum;
  }
  double err = std::abs(resk - resg) * h;
  // QUADPACK-style sharpening of the raw difference.
  err = std::min(err, std::pow(200.0 * err / std::max(resabs * h, 1e-300), 1.5) *
                          std::max(resabs * h, 1e-300));
  return {resk * h, std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs * h)};
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
  const GaussLegendre& gl = gauss_legendre(order);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  NeumaierSum acc;
  for (int i = 0; i < order; ++i) acc.add(gl.weight[i] * f(c + h * gl.node[i]));
  return acc.value() * h;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, std::size_t max_intervals) {
  QuadratureResult out;
  if (a == b) return out;
  struct Seg {
    double a, b, value, error;
    bool operator<(const Seg& o) const { return error < o.error; }
  };
  std::priority_queue<Seg> heap;
  GkEstimate first = gk15(f, a, b);
  out.evaluations = 15;
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;
  std::size_t n = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n >= max_intervals)
      raise(errc::quadrature_failure, "adaptive quadrature did not reach tolerance");
    Seg top = heap.top();
    heap.pop();
    double mid = 0.5 * (top.a + top.b);
    if (mid <= top.a || mid >= top.b) {
      // interval at rounding limit; accept its contribution as is
      total_err -= top.error;
      heap.push({top.a, top.b, top.value, 0.0});
      if (heap.top().error == 0.0) break;
      continue;
    }
    GkEstimate left = gk15(f, top.a, mid);
    GkEstimate right = gk15(f, mid, top.b);
    out.evaluations += 30;
    total += left.value + right.value - top.value;
    total_err += left.error + right.error - top.error;
    heap.push({top.a, mid, left.value, left.error});
    heap.push({mid, top.b, right.value, right.error});
    ++n;
  }
  out.value = total;
  out.error = total_err;
  return out;
}

TailIntegral integrate_dyadic_to_inf(const std::function<double(double)>& f, double a,
                                     const std::function<double(double)>& upper_remainder,
                                     double stop_rel, int max_windows) {
  TailIntegral out;
  NeumaierSum acc;
  double slack = 0.0;
  double b = a;
  for (int w = 0; w < max_windows; ++w) {
    double rem = upper_remainder(b);
    if (rem <= std::max(1e-300, stop_rel * std::abs(acc.value()))) {
      // remainder bracket [0, rem]: take the midpoint
      acc.add(0.5 * rem);
      out.value = acc.value();
      out.slack = slack + 0.5 * rem + 4e-16 * std::abs(out.value);
      return out;
    }
    double b2 = b * 2.0;
    if (!(b2 > b)) b2 = b + 1.0;
    double piece = integrate_gl(f, b, b2, 32);
    acc.add(piece);
    slack += 3e-16 * std::abs(piece);
    b = b2;
  }
  raise(errc::quadrature_failure, "dyadic tail integral did not converge");
}

RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double f_lo, double f_hi, double f_tol, double x_rel_tol,
                               int max_iter) {
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if ((f_lo > 0) == (f_hi > 0)) raise(errc::no_convergence, "root bracket does not straddle zero");
  double a = lo, b = hi, fa = f_lo, fb = f_hi;
  bool last_bisect = true;
  for (int it = 1; it <= max_iter; ++it) {
    double x;
    // secant through the bracket endpoints, clamped to the interior
    double denom = fb - fa;
    if (denom != 0.0 && !last_bisect) {
      x = a - fa * (b - a) / denom;
      double margin = 0.01 * (b - a);
      x = std::clamp(x, a + margin, b - margin);
    } else {
      x = 0.5 * (a + b);
    }
    double fx = f(x);
    if (std::isnan(fx)) raise(errc::no_convergence, "function value NaN during root finding");
    if (std::abs(fx) <= f_tol) return {x, fx, it};
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    last_bisect = !last_bisect;
    if (b - a <= x_rel_tol * (std::abs(a) + std::abs(b)) + 1e-300) {
      double xm = 0.5 * (a + b);
      return {xm, f(xm), it};
    }
  }
  raise(errc::no_convergence, "root finder iteration cap reached");
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& y, double* rms_residual) {
  if (rows.empty() || rows.size() != y.size())
    raise(errc::bad_parameter, "least_squares: empty or mismatched inputs");
  const std::size_t m = rows.size();
  const std::size_t n = rows.front().size();
  // normal equations A^T A x = A^T y
  std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
  std::vector<double> aty(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      aty[i] += rows[r][i] * y[r];
      for (std::size_t j = 0; j < n; ++j) ata[i][j] += rows[r][i] * rows[r][j];
    }
  }
  // Gaussian elimination with partial pivoting
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(ata[r][col]) > std::abs(ata[best][col])) best = r;
    std::swap(ata[col], ata[best]);
    std::swap(aty[col], aty[best]);
    if (ata[col][col] == 0.0) raise(errc::poor_fit, "least_squares: singular design matrix");
    for (std::size_t r = col + 1; r < n; ++r) {
      double fct = ata[r][col] / ata[col][col];
      for (std::size_t j = col; j < n; ++j) ata[r][j] -= fct * ata[col][j];
      aty[r] -= fct * aty[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = aty[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= ata[i][j] * x[j];
    x[i] = s / ata[i][i];
  }
  if (rms_residual) {
    double ss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      double pred = 0.0;
      for (std::size_t j = 0; j < n; ++j) pred += rows[r][j] * x[j];
      ss += (y[r] - pred) * (y[r] - pred);
    }
    *rms_residual = std::sqrt(ss / m);
  }
  return x;
}

}  // namespace smallball
