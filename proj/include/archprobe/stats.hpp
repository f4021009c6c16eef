#pragma once

#include <cstddef>
#include <vector>

namespace archprobe {

// Mean of a sample. Empty input is an error.
double mean(const std::vector<double>& xs);

// Sample standard deviation (n-1 denominator); 0 for a single value.
double sample_std(const std::vector<double>& xs);

// Coefficient of variation: sample_std / |mean|. Errors when mean == 0.
double coefficient_of_variation(const std::vector<double>& xs);

// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the
// pooled sample points.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Two-sample KS critical value at level alpha:
//   D_crit = c(alpha) * sqrt((n + m) / (n * m)),  c(alpha) = sqrt(-ln(alpha/2)/2)
double ks_critical(double alpha, std::size_t n, std::size_t m);

// Spearman rank correlation with average ranks for ties.
// Errors when either input is constant (undefined correlation).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct QuadraticFit {
  double a = 0.0;  // y ~ a x^2 + b x + c
  double b = 0.0;
  double c = 0.0;
  // Stationary point -b / (2a). Meaningful as a peak only when a < 0.
  double peak = 0.0;
};

// Least-squares quadratic through (x, y). Needs >= 3 points and >= 3
// distinct x values.
QuadraticFit quadratic_fit(const std::vector<double>& x,
                           const std::vector<double>& y);

}  // namespace archprobe
