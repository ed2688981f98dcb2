#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature over finite panels.
// The integrand may be vector valued (std::array<double, N>); panels are
// bisected in order of largest error until every component meets
// max(abs_tol, rel_tol * |integral|).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace gaussmart::quadrature {

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Panel {
  double lo;
  double hi;
  Vec<N> value;
  Vec<N> error;

  double worst() const { return *std::max_element(error.begin(), error.end()); }
};

template <std::size_t N>
struct Result {
  Vec<N> value{};
  Vec<N> error{};
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<Panel<N>> panels;
};

/// One 15-point Kronrod panel with the embedded 7-point Gauss error estimate.
template <std::size_t N, class F>
Panel<N> kronrod_panel(F&& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Vec<N> kronrod{};
  Vec<N> gauss{};
  const Vec<N> fc = f(center);
  for (std::size_t k = 0; k < N; ++k) {
    kronrod[k] = fc[k] * detail::kronrod_weights[7];
    gauss[k] = fc[k] * detail::gauss_weights[3];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * detail::kronrod_nodes[j];
    const Vec<N> f1 = f(center - dx);
    const Vec<N> f2 = f(center + dx);
    for (std::size_t k = 0; k < N; ++k) {
      const double sum = f1[k] + f2[k];
      kronrod[k] += detail::kronrod_weights[j] * sum;
      if (j % 2 == 1) {
        gauss[k] += detail::gauss_weights[j / 2] * sum;
      }
    }
  }
  Panel<N> p{lo, hi, {}, {}};
  for (std::size_t k = 0; k < N; ++k) {
    p.value[k] = kronrod[k] * half;
    p.error[k] = std::abs((kronrod[k] - gauss[k]) * half);
  }
  return p;
}

/// Adaptive integration over the listed breakpoints (at least two, increasing).
template <std::size_t N, class F>
Result<N> integrate(F&& f, const std::vector<double>& breakpoints, double abs_tol, double rel_tol,
                    std::size_t max_panels = 2000) {
  auto cmp = [](const Panel<N>& l, const Panel<N>& r) { return l.worst() < r.worst(); };
  std::priority_queue<Panel<N>, std::vector<Panel<N>>, decltype(cmp)> heap(cmp);
  Result<N> out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    heap.push(kronrod_panel<N>(f, breakpoints[i], breakpoints[i + 1]));
    out.evaluations += 15;
  }
  auto totals = [&heap]() {
    // priority_queue hides its container; copy to sum.
    auto copy = heap;
    Vec<N> v{};
    Vec<N> e{};
    while (!copy.empty()) {
      const auto& p = copy.top();
      for (std::size_t k = 0; k < N; ++k) {
        v[k] += p.value[k];
        e[k] += p.error[k];
      }
      copy.pop();
    }
    return std::pair{v, e};
  };
  Vec<N> value{};
  Vec<N> error{};
  {
    auto [v, e] = totals();
    value = v;
    error = e;
  }
  auto satisfied = [&]() {
    for (std::size_t k = 0; k < N; ++k) {
      if (error[k] > std::max(abs_tol, rel_tol * std::abs(value[k]))) {
        return false;
      }
    }
    return true;
  };
  while (!satisfied() && heap.size() < max_panels) {
    const Panel<N> worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      break;
    }
    heap.pop();
    const Panel<N> left = kronrod_panel<N>(f, worst.lo, mid);
    const Panel<N> right = kronrod_panel<N>(f, mid, worst.hi);
    out.evaluations += 30;
    for (std::size_t k = 0; k < N; ++k) {
      value[k] += left.value[k] + right.value[k] - worst.value[k];
      error[k] += left.error[k] + right.error[k] - worst.error[k];
    }
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the panels to shed the drift of incremental updates.
  auto [v, e] = totals();
  out.value = v;
  out.error = e;
  out.converged = true;
  for (std::size_t k = 0; k < N; ++k) {
    if (e[k] > std::max(abs_tol, rel_tol * std::abs(v[k]))) {
      out.converged = false;
    }
  }
  out.panels.reserve(heap.size());
  while (!heap.empty()) {
    out.panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(out.panels.begin(), out.panels.end(),
            [](const Panel<N>& l, const Panel<N>& r) { return l.lo < r.lo; });
  return out;
}

/// Scalar convenience wrapper.
struct ScalarResult {
  double value;
  double error;
  bool converged;
};

template <class F>
ScalarResult integrate_scalar(F&& f, const std::vector<double>& breakpoints, double abs_tol,
                              double rel_tol, std::size_t max_panels = 2000) {
  auto r = integrate<1>([&f](double x) { return Vec<1>{f(x)}; }, breakpoints, abs_tol, rel_tol,
                        max_panels);
  return {r.value[0], r.error[0], r.converged};
}

/// Weighted nodes of the 15-point Kronrod rule on each panel, in order.
struct Node {
  double x;
  double w;
};

template <std::size_t N>
std::vector<Node> panel_nodes(const std::vector<Panel<N>>& panels) {
  std::vector<Node> nodes;
  nodes.reserve(panels.size() * 15);
  for (const auto& p : panels) {
    const double center = 0.5 * (p.lo + p.hi);
    const double half = 0.5 * (p.hi - p.lo);
    for (std::size_t j = 0; j < 7; ++j) {
      nodes.push_back({center - half * detail::kronrod_nodes[j], half * detail::kronrod_weights[j]});
    }
    nodes.push_back({center, half * detail::kronrod_weights[7]});
    for (std::size_t j = 7; j-- > 0;) {
      nodes.push_back({center + half * detail::kronrod_nodes[j], half * detail::kronrod_weights[j]});
    }
  }
  return nodes;
}

}  // namespace gaussmart::quadrature
