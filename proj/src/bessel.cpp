#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sandlab/errors.hpp"
#include "sandlab/special.hpp"

namespace sandlab {

namespace {

// Power series, used for small z.
double series_small(int k, double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int j = 1; j < 60; ++j) {
    term *= q / (j * static_cast<double>(k + j));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  double lead = (k == 0) ? 0.0 : k * std::log(0.5 * z) - std::lgamma(k + 1.0);
  return std::exp(lead - z) * sum;
}

// Large-z expansion e^{-z} I_k(z) ~ (2 pi z)^{-1/2} sum_j (-1)^j a_j(k) / z^j.
// Returns false if the series does not settle without heavy cancellation.
bool hankel(int k, double z, double& out) {
  const double mu = 4.0 * k * static_cast<double>(k);
  double term = 1.0, sum = 1.0, biggest = 1.0;
  for (int j = 1; j < 200; ++j) {
    double odd = 2.0 * j - 1.0;
    double next = -term * (mu - odd * odd) / (8.0 * j * z);
    if (std::abs(next) > std::abs(term) && std::abs(term) < 1e-3) return false;
    term = next;
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (biggest > 4.0) return false;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      out = sum / std::sqrt(2.0 * std::numbers::pi * z);
      return true;
    }
  }
  return false;
}

// Miller backward recurrence normalised by I_0 + 2 sum_{k>=1} I_k = e^z.
void miller(int max_order, double z, std::span<double> out) {
  const double top = std::max<double>(max_order, std::ceil(z));
  const int N = static_cast<int>(top) + 40 + static_cast<int>(std::ceil(8.0 * std::sqrt(top)));
  std::fill(out.begin(), out.end(), 0.0);
  double f_next = 0.0, f = 1e-280, sum = 0.0;
  for (int k = N; k >= 1; --k) {
    if (k <= max_order) out[k] = f;
    sum += 2.0 * f;
    double f_prev = (2.0 * k / z) * f + f_next;
    f_next = f;
    f = f_prev;
    if (f > 1e250) {
      const double s = 1e-250;
      f *= s;
      f_next *= s;
      sum *= s;
      for (int j = k; j <= max_order; ++j) out[j] *= s;
    }
  }
  out[0] = f;
  sum += f;
  for (int j = 0; j <= max_order; ++j) out[j] /= sum;
}

}  // namespace

void scaled_bessel_sequence(int max_order, double z, std::span<double> out) {
  if (max_order < 0 || static_cast<int>(out.size()) != max_order + 1)
    throw InputError("scaled_bessel_sequence: output span must hold max_order + 1 values");
  if (!(z >= 0.0)) throw InputError("scaled_bessel: z must be >= 0");
  if (z == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
    return;
  }
  if (z < 1e-3) {
    for (int k = 0; k <= max_order; ++k) out[k] = series_small(k, z);
    return;
  }
  if (z >= 30.0) {
    bool ok = true;
    for (int k = 0; k <= max_order && ok; ++k) ok = hankel(k, z, out[k]);
    if (ok) return;
  }
  miller(max_order, z, out);
}

double scaled_bessel(int order, double z) {
  if (order < 0) throw InputError("scaled_bessel: order must be >= 0");
  if (!(z >= 0.0)) throw InputError("scaled_bessel: z must be >= 0");
  if (z == 0.0) return order == 0 ? 1.0 : 0.0;
  if (z < 1e-3) return series_small(order, z);
  double v;
  if (z >= 30.0 && hankel(order, z, v)) return v;
  std::vector<double> seq(order + 1);
  miller(order, z, seq);
  return seq[order];
}

}  // namespace sandlab
