#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "di/corpus.hpp"

namespace di {

enum class Provenance { NaiveBayes, TopicModel, Transferred };

const char* provenance_name(Provenance p);
Provenance provenance_from(const std::string& s);

// A semantic intent: a normalized multinomial over the vocabulary.
struct Intent {
  std::int32_t intent_id = -1;
  std::optional<std::string> name;       // class tag when from labeled data
  std::vector<double> word_probs;        // dense over vocabulary ids
  Provenance provenance = Provenance::TopicModel;

  // (word id, prob) pairs sorted by descending prob, id ascending on ties,
  // zero-probability words excluded; at most t entries.
  std::vector<std::pair<std::int32_t, double>> top_words(int t) const;
};

// Overlap of the two intents' top-T word lists: shared min-mass over the
// union mass of both lists. 1 when the lists agree as weighted sets, 0 when
// they are disjoint.
double weighted_jaccard(const Intent& a, const Intent& b, int top_t);

struct AddOutcome {
  bool added = false;
  std::int32_t intent_id = -1;   // new id when added, closest member otherwise
  double similarity = 0.0;       // max similarity against existing members
};

// Compact collection of intents: no two members reach similarity
// threshold delta over their top-T word lists.
class IntentSet {
 public:
  IntentSet(int top_t, double delta) : top_t_(top_t), delta_(delta) {}

  // Appends the candidate iff its max similarity against all members is
  // below delta (>= delta is redundant, so delta=1 still rejects exact
  // duplicates). Ties in the closest member go to the lowest id.
  AddOutcome add(Intent candidate);

  const std::vector<Intent>& intents() const { return intents_; }
  std::int32_t size() const { return static_cast<std::int32_t>(intents_.size()); }
  const Intent& operator[](std::int32_t i) const { return intents_.at(static_cast<std::size_t>(i)); }
  int top_t() const { return top_t_; }
  double delta() const { return delta_; }

 private:
  std::vector<Intent> intents_;
  int top_t_;
  double delta_;
};

// One intent per distinct gold label, additively smoothed word
// distributions, ordered by label. Every utterance must carry a label.
std::vector<Intent> train_naive_bayes(const Corpus& corpus, const Vocabulary& vocab,
                                      double smoothing);

struct LdaConfig {
  int topics = 10;
  double alpha = 0.1;     // document-topic prior
  double beta = 0.01;     // topic-word prior
  int sweeps = 100;
  int average_last = 1;   // posterior mean from this many trailing sweeps
  std::uint64_t seed = 1;
};

// Collapsed Gibbs LDA over dialogues as documents (utterances pooled into
// one token bag per dialogue). Deterministic given the seed.
std::vector<Intent> train_topic_model(const Corpus& corpus, const Vocabulary& vocab,
                                      const LdaConfig& cfg);

// Versioned JSON with words stored as strings, independent of any
// particular vocabulary.
void save_intent_set(const IntentSet& set, const Vocabulary& vocab, const std::string& path);
IntentSet load_intent_set(const std::string& path, const Vocabulary& vocab);

}  // namespace di
