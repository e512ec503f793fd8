#include "culturestream/oracles.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace culturestream::oracle {

double focus(std::span<const std::int64_t> counts) {
  double total = 0.0;
  int n = 0;
  for (std::int64_t c : counts)
    if (c > 0) {
      total += static_cast<double>(c);
      ++n;
    }
  if (n == 0) throw std::invalid_argument("focus of empty counts");
  if (n == 1) return 1.0;
  double h = 0.0;
  for (std::int64_t c : counts)
    if (c > 0) h += static_cast<double>(c) / total * std::log(total / static_cast<double>(c));
  return 1.0 - h / std::log(static_cast<double>(n));
}

double cosine(const std::map<std::string, std::int64_t>& a,
              const std::map<std::string, std::int64_t>& b) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  std::vector<double> x, y;
  for (const std::string& k : keys) {
    auto ia = a.find(k);
    auto ib = b.find(k);
    x.push_back(ia == a.end() ? 0.0 : static_cast<double>(ia->second));
    y.push_back(ib == b.end() ? 0.0 : static_cast<double>(ib->second));
  }
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return dot / std::sqrt(xx * yy);
}

double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b, double p,
           int terms) {
  const std::size_t longest = std::max(a.size(), b.size());
  double sum = 0.0;
  double last = 0.0;
  for (int d = 1; d <= terms; ++d) {
    if (static_cast<std::size_t>(d) <= longest) {
      std::size_t da = std::min<std::size_t>(d, a.size());
      std::size_t db = std::min<std::size_t>(d, b.size());
      std::set<std::string> top_a(a.begin(), a.begin() + da);
      std::set<std::string> top_b(b.begin(), b.begin() + db);
      std::size_t common = 0;
      for (const std::string& s : top_a) common += top_b.count(s);
      last = 2.0 * static_cast<double>(common) / static_cast<double>(da + db);
    }
    sum += (1.0 - p) * last * std::pow(p, d - 1);
  }
  return sum;
}

int institutionness(std::span<const std::int64_t> r, std::span<const std::optional<double>> h0,
                    InstitutionVariant variant) {
  const int n = static_cast<int>(r.size());
  int best = 0;
  for (int h = 0; h <= n; ++h) {
    int weeks = 0;
    for (int t = 0; t < n; ++t) {
      bool ok;
      if (h == 0)
        ok = true;
      else if (!h0[t] || *h0[t] <= 0.0)
        ok = false;
      else if (variant == InstitutionVariant::literal)
        ok = static_cast<double>(r[t]) >= static_cast<double>(h) / *h0[t];
      else
        ok = static_cast<double>(r[t]) / *h0[t] >= static_cast<double>(h);
      weeks += ok ? 1 : 0;
    }
    if (weeks >= h && h > best) best = h;
  }
  return best;
}

double burst_improvement(std::int64_t r, std::int64_t d, double p0, double p1) {
  double log_choose = 0.0;
  for (std::int64_t i = 1; i <= r; ++i)
    log_choose += std::log(static_cast<double>(d - r + i) / static_cast<double>(i));
  auto cost = [&](double p) {
    double ll = log_choose;
    for (std::int64_t i = 0; i < r; ++i) ll += std::log(p);
    for (std::int64_t i = 0; i < d - r; ++i) ll += std::log(1.0 - p);
    return -ll;
  };
  return cost(p0) - cost(p1);
}

}  // namespace culturestream::oracle
