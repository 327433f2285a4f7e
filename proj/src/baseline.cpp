#include "di/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "di/common.hpp"
#include "di/rng.hpp"

namespace di {

LogRegBaseline LogRegBaseline::train(const Corpus& corpus, const Vocabulary& vocab,
                                     const Config& cfg) {
  std::map<std::string, int> label_ids;
  std::vector<std::pair<const std::vector<std::int32_t>*, int>> samples;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      if (!u.gold_intent || u.gold_intent->empty())
        throw ValidationError("baseline: unlabeled utterance in dialogue \"" + dlg.dialogue_id + "\"");
      label_ids.emplace(*u.gold_intent, 0);
    }
  }
  int next = 0;
  for (auto& [label, id] : label_ids) id = next++;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      samples.emplace_back(&u.tokens, label_ids.at(*u.gold_intent));
    }
  }
  if (samples.empty()) throw ValidationError("baseline: empty corpus");

  LogRegBaseline model;
  model.vocab_size_ = vocab.size();
  model.labels_.resize(label_ids.size());
  for (const auto& [label, id] : label_ids) model.labels_[static_cast<std::size_t>(id)] = label;
  const int C = static_cast<int>(model.labels_.size());
  const int F = model.vocab_size_ + 1;
  model.weights_.assign(static_cast<std::size_t>(C) * static_cast<std::size_t>(F), 0.0);

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> logits(static_cast<std::size_t>(C));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    const double lr = cfg.learning_rate / (1.0 + epoch);
    for (std::size_t s : order) {
      const auto& tokens = *samples[s].first;
      const int gold = samples[s].second;
      for (int c = 0; c < C; ++c) {
        double v = model.weights_[static_cast<std::size_t>(c) * static_cast<std::size_t>(F) +
                                  static_cast<std::size_t>(F - 1)];
        for (std::int32_t t : tokens) {
          if (t >= 0)
            v += model.weights_[static_cast<std::size_t>(c) * static_cast<std::size_t>(F) +
                                static_cast<std::size_t>(t)];
        }
        logits[static_cast<std::size_t>(c)] = v;
      }
      const double m = *std::max_element(logits.begin(), logits.end());
      double total = 0.0;
      for (double& v : logits) {
        v = std::exp(v - m);
        total += v;
      }
      for (int c = 0; c < C; ++c) {
        const double p = logits[static_cast<std::size_t>(c)] / total;
        const double g = (c == gold ? 1.0 : 0.0) - p;
        auto* row = model.weights_.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(F);
        row[F - 1] += lr * g;
        for (std::int32_t t : tokens) {
          if (t >= 0) row[t] += lr * (g - cfg.l2 * row[t]);
        }
      }
    }
  }
  return model;
}

int LogRegBaseline::predict(const std::vector<std::int32_t>& tokens) const {
  const int C = static_cast<int>(labels_.size());
  const int F = vocab_size_ + 1;
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < C; ++c) {
    const auto* row = weights_.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(F);
    double v = row[F - 1];
    for (std::int32_t t : tokens) {
      if (t >= 0) v += row[t];
    }
    if (v > best_v) {
      best_v = v;
      best = c;
    }
  }
  return best;
}

}  // namespace di
