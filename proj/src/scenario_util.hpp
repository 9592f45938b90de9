#pragma once
// helpers shared by the scenario translation units
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wv::detail {

std::string csv_columns(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols);

// local maxima above rel * max
std::vector<int> local_maxima(const std::vector<double>& d, double rel = 1e-3);

// p-quantile of a density sampled on a uniform coordinate grid
double quantile(const std::vector<double>& coord, const std::vector<double>& density, double p);

inline std::vector<double> dvec(const nlohmann::json& p, const char* key) {
  return p.at(key).get<std::vector<double>>();
}
inline double dnum(const nlohmann::json& p, const char* key) { return p.at(key).get<double>(); }
inline int inum(const nlohmann::json& p, const char* key) { return p.at(key).get<int>(); }

// log-log least-squares slope
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wv::detail
