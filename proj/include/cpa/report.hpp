#pragma once
// Verification reports and the seeded generator behind every sampled check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace cpa {

/// Portable draws from std::mt19937_64: bounded values use rejection
/// sampling rather than std::uniform_int_distribution, whose output is
/// implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

struct Failure {
  std::string kind;
  nlohmann::json spec;
  nlohmann::json witness;
};

struct VerificationReport {
  std::size_t checked = 0;
  std::vector<Failure> failures;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const noexcept { return failures.empty(); }

  void fail(std::string kind, nlohmann::json spec, nlohmann::json witness) {
    // Keep reports bounded; the count of checks still reflects everything.
    if (failures.size() < 100) failures.push_back({std::move(kind), std::move(spec), std::move(witness)});
    else details["truncated_failures"] = details.value("truncated_failures", 0) + 1;
  }

  void merge(const VerificationReport& other) {
    checked += other.checked;
    exhaustive = exhaustive && other.exhaustive;
    for (const auto& f : other.failures) fail(f.kind, f.spec, f.witness);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["checked"] = checked;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures) j["failures"].push_back({{"spec", f.spec}, {"kind", f.kind}, {"witness", f.witness}});
    j["exhaustive"] = exhaustive;
    j["seed"] = seed;
    if (!details.empty()) j["details"] = details;
    return j;
  }
};

}  // namespace cpa
