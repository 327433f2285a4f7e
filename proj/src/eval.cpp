#include "di/eval.hpp"

#include "di/common.hpp"
#include "di/synth.hpp"

namespace di {

using nlohmann::json;

json EvalReport::to_json() const {
  json doc;
  doc["accuracy"] = accuracy;
  json per = json::array();
  for (const auto& m : per_intent) {
    per.push_back({{"intent", m.intent},
                   {"precision", m.precision},
                   {"recall", m.recall},
                   {"f1", m.f1},
                   {"support", m.support}});
  }
  doc["per_intent"] = std::move(per);
  doc["confusion"] = confusion;
  doc["alignment"] = alignment;
  doc["mode"] = mode;
  doc["metadata"] = {{"seed", seed}, {"config_hash", config_hash}, {"corpus_hash", corpus_hash}};
  return doc;
}

EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& gold, int intents,
                    EvalMode mode) {
  if (predicted.size() != gold.size())
    throw ValidationError("evaluate: prediction and gold lengths differ");
  if (intents < 1) throw ValidationError("evaluate: intents must be >= 1");

  EvalReport report;
  report.mode = mode == EvalMode::Direct ? "direct" : "aligned";
  report.alignment.resize(static_cast<std::size_t>(intents));
  for (int k = 0; k < intents; ++k) report.alignment[static_cast<std::size_t>(k)] = k;
  if (mode == EvalMode::Aligned) {
    report.alignment = align_intents(predicted, gold, intents).permutation;
  }

  report.confusion.assign(static_cast<std::size_t>(intents),
                          std::vector<std::int64_t>(static_cast<std::size_t>(intents), 0));
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p_raw = predicted[i];
    const int g = gold[i];
    if (p_raw < 0 || p_raw >= intents || g < 0 || g >= intents)
      throw ValidationError("evaluate: label out of range");
    const int p = report.alignment[static_cast<std::size_t>(p_raw)];
    ++report.confusion[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)];
    if (p == g) ++hits;
  }
  report.accuracy =
      predicted.empty() ? 1.0 : static_cast<double>(hits) / static_cast<double>(predicted.size());

  for (int k = 0; k < intents; ++k) {
    IntentMetrics m;
    m.intent = k;
    std::int64_t tp = report.confusion[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    std::int64_t pred_k = 0, gold_k = 0;
    for (int j = 0; j < intents; ++j) {
      pred_k += report.confusion[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      gold_k += report.confusion[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
    m.support = gold_k;
    m.precision = pred_k > 0 ? static_cast<double>(tp) / static_cast<double>(pred_k) : 0.0;
    m.recall = gold_k > 0 ? static_cast<double>(tp) / static_cast<double>(gold_k) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    report.per_intent.push_back(m);
  }
  return report;
}

}  // namespace di
