#include "emden/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "emden/errors.hpp"

namespace emden {

double quintic_hermite(double y0, double d0, double s0, double y1, double d1, double s1, double h,
                       double x) {
  const double u = x / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double u4 = u3 * u;
  const double u5 = u4 * u;
  const double h00 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
  const double h10 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
  const double h20 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
  const double h21 = 0.5 * u3 - u4 + 0.5 * u5;
  const double h11 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
  const double h01 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
  return y0 * h00 + h * d0 * h10 + h * h * s0 * h20 + h * h * s1 * h21 + h * d1 * h11 + y1 * h01;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorCode::InvalidArgument, "fit_line needs two or more matching samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) {
    fail(ErrorCode::InvalidArgument, "fit_line abscissae are all equal");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.count = x.size();
  if (x.size() > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      sse += e * e;
    }
    fit.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return fit;
}

std::vector<double> central_derivative6(std::span<const double> y, double h) {
  std::vector<double> d(y.size(), 0.0);
  if (y.size() < 7) {
    return d;
  }
  for (std::size_t i = 3; i + 3 < y.size(); ++i) {
    d[i] = (-y[i - 3] + 9.0 * y[i - 2] - 45.0 * y[i - 1] + 45.0 * y[i + 1] - 9.0 * y[i + 2] +
            y[i + 3]) /
           (60.0 * h);
  }
  return d;
}

std::vector<double> geometric_space(double lo, double hi, std::size_t n) {
  if (n < 2 || lo <= 0.0 || hi <= lo) {
    fail(ErrorCode::InvalidArgument, "geometric_space needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(llo + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_space(double lo, double hi, std::size_t n) {
  if (n < 2) {
    fail(ErrorCode::InvalidArgument, "linear_space needs n >= 2");
  }
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + step * static_cast<double>(i);
  }
  out.back() = hi;
  return out;
}

}  // namespace emden

namespace emden {

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes, int max_order) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

Derivatives differentiate(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 5 || y.size() != n) {
    fail(ErrorCode::GridTooCoarse, "differentiation needs five or more samples");
  }
  const std::size_t edge = n >= 6 ? 6 : 5;
  Derivatives d;
  d.first.assign(n, 0.0);
  d.second.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo;
    std::size_t len;
    if (i < 2) {
      lo = 0;
      len = edge;
    } else if (i + 2 >= n) {
      lo = n - edge;
      len = edge;
    } else {
      lo = i - 2;
      len = 5;
    }
    const auto w = fd_weights(x[i], x.subspan(lo, len), 2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      d1 += w[1][k] * y[lo + k];
      d2 += w[2][k] * y[lo + k];
    }
    d.first[i] = d1;
    d.second[i] = d2;
  }
  return d;
}

}  // namespace emden
