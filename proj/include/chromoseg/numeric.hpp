#ifndef CHROMOSEG_NUMERIC_HPP
#define CHROMOSEG_NUMERIC_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace chromoseg {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(std::span<const double> values);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Strict parse of the whole token; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

// Linear-interpolation quantile (type 7) of an already sorted sample.
double sorted_quantile(std::span<const double> sorted, double prob);

}  // namespace chromoseg

#endif
