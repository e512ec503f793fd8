#pragma once

// Reference computations by direct enumeration. They share no code with the
// measure implementations and exist to cross-check them (selftest, tests).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "culturestream/fact_measures.hpp"

namespace culturestream::oracle {

/// 1 - H / ln(n) with natural logarithms; 1 for a single fact.
double focus(std::span<const std::int64_t> counts);

/// Cosine over dense vectors laid out on the sorted union of keys.
double cosine(const std::map<std::string, std::int64_t>& a,
              const std::map<std::string, std::int64_t>& b);

/// RBO summed term by term to `terms` depths, agreement held at its last value
/// beyond the longer list.
double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b, double p,
           int terms = 20000);

/// Largest h in [0, n] whose threshold holds in at least h windows, checking every h.
int institutionness(std::span<const std::int64_t> r, std::span<const std::optional<double>> h0,
                    InstitutionVariant variant);

/// Difference of the two binomial log-likelihoods, evaluated with explicit products.
double burst_improvement(std::int64_t r, std::int64_t d, double p0, double p1);

}  // namespace culturestream::oracle
