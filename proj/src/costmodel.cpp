#include "splitconv/costmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace splitconv {

namespace {

void check_positive(double v, const char* name) {
  if (!(v > 0)) {
    throw std::invalid_argument(std::string("costmodel: ") + name +
                                " must be positive");
  }
}

// All four counts share the block term 2*L^2*log2(L^2) with L the
// transform-side idealization (no power-of-two rounding).
double fft_block_term(double side) {
  return 2.0 * side * side * std::log2(side * side);
}

}  // namespace

const char* cost_method_name(CostMethod method) {
  switch (method) {
    case CostMethod::Spatial: return "SPATIAL";
    case CostMethod::FullFft: return "FULL_FFT";
    case CostMethod::Oaa: return "OAA";
    case CostMethod::Split: return "SPLIT";
  }
  return "?";
}

double mul_oaa(double n, double k) {
  check_positive(n, "N");
  check_positive(k, "k");
  const double l = 2.0 * k - 1.0;
  return (n * n) / (k * k) * (fft_block_term(l) + l * l);
}

double add_oaa(double n, double k) {
  check_positive(n, "N");
  check_positive(k, "k");
  const double l = 2.0 * k - 1.0;
  return (n * n) / (k * k) * (fft_block_term(l) + k * k - k);
}

double mul_split(double n, double s, double k) {
  check_positive(n, "N");
  check_positive(s, "s");
  check_positive(k, "k");
  const double l = s + k - 1.0;
  return (n * n) / (s * s) * (fft_block_term(l) + l * l);
}

double add_split(double n, double s, double k) {
  check_positive(n, "N");
  check_positive(s, "s");
  check_positive(k, "k");
  const double l = s + k - 1.0;
  return (n * n) / (s * s) * fft_block_term(l);
}

CostRow spatial_cost(double n, double k) {
  check_positive(n, "N");
  check_positive(k, "k");
  if (k > n) {
    throw std::invalid_argument("spatial_cost: k must not exceed N");
  }
  CostRow row;
  row.method = CostMethod::Spatial;
  row.n = n;
  row.k = k;
  const double windows = (n - k + 1) * (n - k + 1);
  row.mults = windows * k * k;
  row.adds = windows * k * k;
  row.total = row.mults + row.adds;
  row.storage_elems = n * n + k * k;
  row.access_note = "each input element accessed K times";
  return row;
}

std::map<CostMethod, std::string> asymptotic_costs(double n, double k,
                                                   double s) {
  check_positive(n, "N");
  check_positive(k, "k");
  check_positive(s, "s");
  return {
      {CostMethod::Spatial,
       "(N-k+1)^2 K^2 multiplications; storage N^2 + K^2"},
      {CostMethod::FullFft, "N^2 log N; storage 2N^2"},
      {CostMethod::Oaa, "N^2 log k; storage N^2 + K^2"},
      {CostMethod::Split, "N^2 log S; storage N^2 + S^2"},
  };
}

std::vector<CostRow> sweep(double n, const std::vector<double>& k_values,
                           const std::vector<double>& s_values) {
  if (k_values.empty() || s_values.empty()) {
    throw std::invalid_argument("sweep: empty parameter list");
  }
  std::vector<CostRow> rows;
  rows.reserve(k_values.size() * (1 + s_values.size()));
  for (double k : k_values) {
    CostRow oaa;
    oaa.method = CostMethod::Oaa;
    oaa.n = n;
    oaa.k = k;
    oaa.mults = mul_oaa(n, k);
    oaa.adds = add_oaa(n, k);
    oaa.total = oaa.mults + oaa.adds;
    oaa.storage_elems = n * n + k * k;
    oaa.access_note = "each input element accessed once";
    rows.push_back(std::move(oaa));
    for (double s : s_values) {
      CostRow split;
      split.method = CostMethod::Split;
      split.n = n;
      split.k = k;
      split.s = s;
      split.mults = mul_split(n, s, k);
      split.adds = add_split(n, s, k);
      split.total = split.mults + split.adds;
      split.storage_elems = n * n + s * s;
      split.access_note = "each input element accessed once (idealized)";
      rows.push_back(std::move(split));
    }
  }
  return rows;
}

}  // namespace splitconv
