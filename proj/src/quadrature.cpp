#include "uwoc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace uwoc::quad {
namespace {

// QUADPACK qk21 nodes and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel rule21(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double l1 = std::abs(fc) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    l1 += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double err = std::abs((resk - resg) * h);
  return {a, b, resk * h, err, l1 * std::abs(h)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Options& opt) {
  Result r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  std::priority_queue<Panel> heap;
  Panel first = rule21(f, a, b);
  r.evals = 21;
  double total = first.value, err = first.error, l1 = first.l1;
  heap.push(first);
  auto done = [&] {
    return err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) ||
           err <= 50.0 * std::numeric_limits<double>::epsilon() * l1;
  };
  while (!done() && r.evals + 42 <= opt.max_evals) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted
      heap.push(worst);
      break;
    }
    Panel left = rule21(f, worst.a, mid);
    Panel right = rule21(f, mid, worst.b);
    r.evals += 42;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated rounding from the running updates.
  total = 0.0;
  err = 0.0;
  l1 = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  r.value = total;
  r.error = err;
  r.l1 = l1;
  r.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) ||
                err <= 50.0 * std::numeric_limits<double>::epsilon() * l1;
  return r;
}

Result integrate_log(const std::function<double(double)>& f, double lo, double hi,
                     const Options& opt) {
  auto g = [&f](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  return gauss_kronrod(g, std::log(lo), std::log(hi), opt);
}

Result integrate_half_line(const std::function<double(double)>& f, double center,
                           const Options& opt) {
  auto g = [&f](double u) {
    const double x = std::exp(u);
    if (!std::isfinite(x) || x == 0.0) return 0.0;
    const double v = f(x) * x;
    return std::isfinite(v) ? v : 0.0;
  };
  const double u0 = std::log(center);
  double lo = u0 - 6.0, hi = u0 + 6.0;
  Result r = gauss_kronrod(g, lo, hi, opt);
  const double step = 6.0;
  bool grow_lo = true, grow_hi = true;
  while ((grow_lo || grow_hi) && r.evals < 8 * opt.max_evals) {
    const double target = std::max(opt.abs_tol, 0.1 * opt.rel_tol * std::abs(r.value));
    // Tail panels are judged against the running total, not their own size.
    Options tail = opt;
    tail.abs_tol = std::max(opt.abs_tol, 0.25 * opt.rel_tol * std::abs(r.value));
    if (grow_lo) {
      Result piece = gauss_kronrod(g, lo - step, lo, tail);
      lo -= step;
      r.value += piece.value;
      r.error += piece.error;
      r.l1 += piece.l1;
      r.evals += piece.evals;
      r.converged = r.converged && piece.converged;
      grow_lo = piece.l1 > target && lo > -745.0;
    }
    if (grow_hi) {
      Result piece = gauss_kronrod(g, hi, hi + step, tail);
      hi += step;
      r.value += piece.value;
      r.error += piece.error;
      r.l1 += piece.l1;
      r.evals += piece.evals;
      r.converged = r.converged && piece.converged;
      grow_hi = piece.l1 > target && hi < 700.0;
    }
  }
  return r;
}

}  // namespace uwoc::quad
