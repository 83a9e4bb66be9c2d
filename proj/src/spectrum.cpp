#include "tg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "tg/eigen_sym.hpp"
#include "tg/errors.hpp"

namespace tg {

namespace {

constexpr std::size_t kMaxDense = 4096;

std::vector<double> unique_sorted(std::vector<double> v, double eps = 1e-12) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  return out;
}

}  // namespace

std::vector<double> laplace_matrix(const SchreierGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kMaxDense) throw ResourceBound("Hecke-Laplace matrix of order " + std::to_string(n) + " is too large");
  std::vector<double> m(n * n, 0.0);
  for (std::size_t s = 0; s < g.labels.size(); ++s)
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t w = g.perms[s][v];
      m[v * n + w] += 1.0;
      if (!g.involution[s]) m[w * n + v] += 1.0;
    }
  return m;
}

std::vector<double> graph_spectrum(const SchreierGraph& g, bool parallel) {
  auto m = laplace_matrix(g);
  return parallel ? symmetric_eigenvalues_parallel(std::move(m), g.vertex_count())
                  : symmetric_eigenvalues_serial(std::move(m), g.vertex_count());
}

std::vector<double> gg_closed_form(std::size_t n) {
  std::vector<double> vals;
  const std::size_t m = std::size_t(1) << n;
  for (std::size_t j = 0; j < m; ++j) {
    double r = std::sqrt(5.0 - 4.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m)));
    vals.push_back(1.0 + r);
    vals.push_back(1.0 - r);
  }
  vals = unique_sorted(std::move(vals), 1e-9);
  std::erase_if(vals, [](double x) { return std::fabs(x) < 1e-9 || std::fabs(x + 2.0) < 1e-9; });
  return vals;
}

std::vector<double> julia_set_approx(double lambda, std::size_t depth) {
  if (lambda < 0) throw ValidationError("julia_set_approx needs lambda >= 0");
  if (depth == 0) throw ValidationError("julia_set_approx needs depth >= 1");
  // level k holds the values of the innermost k radicals sqrt(lambda +- ...)
  std::vector<double> inner{std::sqrt(lambda)};
  std::vector<double> all;
  for (std::size_t k = 1; k <= depth; ++k) {
    for (double x : inner) {
      all.push_back(x);
      all.push_back(-x);
    }
    if (k == depth) break;
    std::vector<double> next;
    for (double x : inner)
      for (double s : {1.0, -1.0}) {
        double rad = lambda + s * x;
        if (rad >= 0) next.push_back(std::sqrt(rad));
      }
    inner = unique_sorted(std::move(next));
  }
  return unique_sorted(std::move(all));
}

double one_sided_distance(const std::vector<double>& xs, const std::vector<double>& ref) {
  if (ref.empty()) return xs.empty() ? 0.0 : INFINITY;
  double worst = 0.0;
  for (double x : xs) {
    auto it = std::lower_bound(ref.begin(), ref.end(), x);
    double best = INFINITY;
    if (it != ref.end()) best = std::min(best, std::fabs(*it - x));
    if (it != ref.begin()) best = std::min(best, std::fabs(*std::prev(it) - x));
    worst = std::max(worst, best);
  }
  return worst;
}

SpectralReport spectrum(const Group& g, std::size_t n, bool parallel) {
  SpectralReport r;
  r.group = g.name();
  r.level = n;
  r.eigenvalues = graph_spectrum(schreier_graph(g, n, parallel), parallel);
  const std::size_t depth = std::max<std::size_t>(n, 1);
  if (g.name() == "Gg") {
    r.reference = gg_closed_form(n);
    r.exact_reference = true;
  } else if (g.name() == "FGg") {
    r.reference = {4.0, 1.0};
    for (double x : julia_set_approx(6.0, depth)) r.reference.push_back(1.0 + x);
  } else if (g.name() == "BGg" || g.name() == "GSg") {
    r.reference = {4.0, -2.0, 1.0};
    for (double x : julia_set_approx(45.0 / 16.0, depth))
      for (double s : {2.0, -2.0}) {
        double rad = 4.5 + s * x;
        if (rad < 0) continue;
        r.reference.push_back(1.0 + std::sqrt(rad));
        r.reference.push_back(1.0 - std::sqrt(rad));
      }
  }
  r.reference = unique_sorted(std::move(r.reference));
  if (r.reference.empty()) return r;
  if (r.exact_reference && r.reference.size() == r.eigenvalues.size()) {
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      double dev = std::fabs(r.eigenvalues[i] - r.reference[i]);
      r.max_deviation = std::max(r.max_deviation, dev);
      r.matched.push_back(dev < kSpectrumTolerance);
    }
  } else {
    r.exact_reference = false;
    r.max_deviation = one_sided_distance(r.eigenvalues, r.reference);
    for (double x : r.eigenvalues) r.matched.push_back(one_sided_distance({x}, r.reference) < kSpectrumTolerance);
  }
  return r;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectralReport>& reports) {
  os << "level,index,eigenvalue,closed_form_match\n";
  os.precision(15);
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      os << r.level << "," << i << "," << r.eigenvalues[i] << ",";
      if (r.matched.empty())
        os << "";
      else
        os << (r.matched[i] ? "true" : "false");
      os << "\n";
    }
}

// ---------------------------------------------------------------- Phi recursion

std::vector<Rational> phi_sequence(std::size_t n, const Rational& lambda, const Rational& mu) {
  std::vector<Rational> phi;
  phi.push_back(2 - mu - lambda);
  if (n >= 1) phi.push_back(2 - mu + lambda);
  if (n >= 2) phi.push_back(mu * mu - 4 - lambda * lambda);
  for (std::size_t k = 3; k <= n; ++k) {
    Rational t = 2 * lambda;
    Rational pw = 1;
    for (std::size_t e = 0; e < (std::size_t(1) << (k - 2)); ++e) pw *= t;
    phi.push_back(phi.back() * phi.back() - 2 * pw);
  }
  return phi;
}

std::vector<Rational> q_matrix(const SchreierGraph& g, const Rational& lambda, const Rational& mu) {
  const std::size_t n = g.vertex_count();
  std::vector<Rational> m(n * n, Rational(0));
  std::size_t a = g.labels.size();
  for (std::size_t s = 0; s < g.labels.size(); ++s) {
    if (g.labels[s] == "a") a = s;
    for (std::size_t v = 0; v < n; ++v) {
      m[v * n + g.perms[s][v]] += 1;
      if (!g.involution[s]) m[g.perms[s][v] * n + v] += 1;
    }
  }
  if (a == g.labels.size()) throw ValidationError("graph has no a-label");
  for (std::size_t v = 0; v < n; ++v) {
    m[v * n + g.perms[a][v]] -= lambda + 1;
    m[v * n + v] -= mu + 1;
  }
  return m;
}

Rational determinant(std::vector<Rational> a, std::size_t n) {
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv * n + c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    const Rational p = a[c * n + c];
    det *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r * n + c] == 0) continue;
      Rational f = a[r * n + c] / p;
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

Rational phi_check(const SchreierGraph& g, const Rational& lambda, const Rational& mu) {
  Rational det = determinant(q_matrix(g, lambda, mu), g.vertex_count());
  Rational prod = 1;
  for (const auto& p : phi_sequence(g.level, lambda, mu)) prod *= p;
  Rational diff = det - prod;
  return diff < 0 ? Rational(-diff) : diff;
}

}  // namespace tg
