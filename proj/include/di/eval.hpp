#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "di/corpus.hpp"
#include "json.hpp"

namespace di {

enum class EvalMode { Direct, Aligned };

struct IntentMetrics {
  int intent = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct EvalReport {
  double accuracy = 0.0;
  std::vector<IntentMetrics> per_intent;
  // confusion[g][p]: gold g, prediction p after alignment
  std::vector<std::vector<std::int64_t>> confusion;
  std::vector<int> alignment;  // raw predicted intent -> evaluated intent
  std::string mode;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string corpus_hash;

  nlohmann::json to_json() const;
};

// Accuracy and per-intent metrics of predictions against gold ids.
// Aligned mode resolves label switching by optimal assignment first;
// direct mode compares ids as given.
EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& gold, int intents,
                    EvalMode mode);

}  // namespace di
