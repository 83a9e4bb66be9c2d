#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <iosfwd>
#include <string>
#include <vector>

#include "tg/group.hpp"
#include "tg/schreier.hpp"

namespace tg {

using Rational = boost::multiprecision::cpp_rational;

/// Hecke-Laplace operator: sum of the permutation matrices of S = S^-1
/// (each non-involutive label counted with its inverse), row-major.
std::vector<double> laplace_matrix(const SchreierGraph& g);

/// Eigenvalues of the Hecke-Laplace operator, ascending.
std::vector<double> graph_spectrum(const SchreierGraph& g, bool parallel = true);

/// {1 +- sqrt(5 - 4 cos(2 pi j / 2^n))} minus {0, -2}, as a sorted set.
std::vector<double> gg_closed_form(std::size_t n);

/// Real values +-sqrt(lambda +- sqrt(lambda +- ...)) with 1..depth radicals, sorted.
std::vector<double> julia_set_approx(double lambda, std::size_t depth);

/// Reference set for the level-n spectrum, where one is known: Gg closed form,
/// {4,1} u 1+J(6) for FGg, {4,-2,1} u 1 +- sqrt(9/2 +- 2 J(45/16)) for BGg, GSg.
struct SpectralReport {
  std::string group;
  std::size_t level = 0;
  std::vector<double> eigenvalues;
  std::vector<double> reference;
  bool exact_reference = false;  // compare elementwise; otherwise nearest-point distance
  double max_deviation = 0;
  std::vector<bool> matched;  // per eigenvalue, within tolerance of the reference
};

/// Tolerance used for the per-eigenvalue match flag.
constexpr double kSpectrumTolerance = 1e-6;

SpectralReport spectrum(const Group& g, std::size_t n, bool parallel = true);

/// Largest distance from a value of xs to the nearest value of ref (ref sorted).
double one_sided_distance(const std::vector<double>& xs, const std::vector<double>& ref);

void write_spectrum_csv(std::ostream& os, const std::vector<SpectralReport>& reports);

/// Phi_0 .. Phi_n for the first Grigorchuk group.
std::vector<Rational> phi_sequence(std::size_t n, const Rational& lambda, const Rational& mu);
/// Q_n(lambda, mu) = Delta_n - (lambda+1) a_n - (mu+1) for the level-n graph of Gg.
std::vector<Rational> q_matrix(const SchreierGraph& gg_level_n, const Rational& lambda, const Rational& mu);
Rational determinant(std::vector<Rational> a, std::size_t n);
/// |det Q_n - Phi_0 ... Phi_n|, computed exactly.
Rational phi_check(const SchreierGraph& gg_level_n, const Rational& lambda, const Rational& mu);

}  // namespace tg
