#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "di/corpus.hpp"

namespace di {

// Bag-of-words multinomial logistic regression, trained by SGD. A cheap
// sanity yardstick for synthetic corpora, not a serious classifier.
class LogRegBaseline {
 public:
  struct Config {
    int epochs = 20;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::uint64_t seed = 1;
  };

  // Labels are taken from gold intents; classes ordered by label.
  static LogRegBaseline train(const Corpus& corpus, const Vocabulary& vocab, const Config& cfg);

  int predict(const std::vector<std::int32_t>& tokens) const;
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  int vocab_size_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> weights_;  // classes x (V + 1), last column is the bias
};

}  // namespace di
