#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace splitconv {

enum class CostMethod { Spatial, FullFft, Oaa, Split };

const char* cost_method_name(CostMethod method);

/// One row of the analytic model. Values are real-valued, never rounded:
/// the formulas are continuous in k and s, and N^2/k^2, N^2/s^2 are taken
/// as real division (the idealization assumes divisibility).
struct CostRow {
  CostMethod method = CostMethod::Spatial;
  double n = 0;
  double k = 0;
  std::optional<double> s;  // split rows only
  double mults = 0;
  double adds = 0;
  double total = 0;  // mults + adds
  double storage_elems = 0;
  std::string access_note;
};

/// Analytic multiply count of overlap-and-add block convolution:
/// (N^2/k^2) * (2*(2k-1)^2*log2((2k-1)^2) + (2k-1)^2).
double mul_oaa(double n, double k);

/// Analytic addition count of overlap-and-add block convolution:
/// (N^2/k^2) * (2*(2k-1)^2*log2((2k-1)^2) + k^2 - k).
double add_oaa(double n, double k);

/// Analytic multiply count of split convolution with patch side s:
/// (N^2/s^2) * (2*(s+k-1)^2*log2((s+k-1)^2) + (s+k-1)^2).
double mul_split(double n, double s, double k);

/// Analytic addition count of split convolution:
/// (N^2/s^2) * 2*(s+k-1)^2*log2((s+k-1)^2).
double add_split(double n, double s, double k);

/// Sliding-window model: (N-k+1)^2 * k^2 multiplies and as many adds;
/// storage N^2 + k^2.
CostRow spatial_cost(double n, double k);

/// Big-O summaries per method, for documentation and CSV footers.
std::map<CostMethod, std::string> asymptotic_costs(double n, double k,
                                                   double s);

/// Model table: one Oaa row per k, one Split row per (k, s).
std::vector<CostRow> sweep(double n, const std::vector<double>& k_values,
                           const std::vector<double>& s_values);

}  // namespace splitconv
