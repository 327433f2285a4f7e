#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "di/corpus.hpp"
#include "di/embedding.hpp"
#include "di/intent_set.hpp"
#include "di/rng.hpp"

namespace di {

struct Hyperparams {
  int intents = 0;            // K; must equal the intent set size
  double alpha = 0.0;         // document-intent prior; 0 means 50/K
  double alpha_prime = 0.1;   // transition pseudo-count
  double beta = 0.01;         // word-distribution prior, reserved
  double tau = 0.5;           // document-path probability of the switch
  double rho = 0.0;           // generative transition-row prior; 0 means alpha_prime
  int sweeps = 200;
  int burn_in = 100;
  std::uint64_t seed = 1;
  double variance_floor = 1e-4;
  bool randomized_order = false;

  double alpha_eff() const { return alpha > 0.0 ? alpha : 50.0 / intents; }
  double rho_eff() const { return rho > 0.0 ? rho : alpha_prime; }
  void validate() const;  // throws ValidationError
};

// Pseudo-count priors the sampler conditions on. The plain path uses
// uniform cells built from Hyperparams; the transfer path swaps in
// estimates from labeled data. One code path serves both.
struct PriorSpec {
  int intents = 0;
  std::vector<double> doc;        // K cells
  double doc_total = 0.0;
  std::vector<double> trans;      // K x K cells
  std::vector<double> trans_row;  // K row totals

  static PriorSpec uniform(int intents, double alpha, double alpha_prime);
  double trans_cell(int r, int c) const {
    return trans[static_cast<std::size_t>(r) * static_cast<std::size_t>(intents) + static_cast<std::size_t>(c)];
  }
};

// Sufficient statistics. Every utterance lands in exactly one table:
// document-path draws (a dialogue's first utterance, or indicator = 1) in
// doc, transition-path draws (indicator = 0 with a predecessor) as an
// adjacent pair in trans. Indicators are tallied for all utterances.
struct CountTables {
  int dialogues = 0;
  int intents = 0;
  std::vector<std::int32_t> doc;        // dialogues x K document-path draws
  std::vector<std::int32_t> doc_total;  // per dialogue
  std::vector<std::int32_t> trans;      // K x K transition-path pairs
  std::vector<std::int32_t> trans_row;  // per row
  std::int64_t indicator_zero = 0;
  std::int64_t indicator_one = 0;

  std::int32_t& doc_at(int d, int k) {
    return doc[static_cast<std::size_t>(d) * static_cast<std::size_t>(intents) + static_cast<std::size_t>(k)];
  }
  std::int32_t doc_at(int d, int k) const {
    return doc[static_cast<std::size_t>(d) * static_cast<std::size_t>(intents) + static_cast<std::size_t>(k)];
  }
  std::int32_t& trans_at(int r, int c) {
    return trans[static_cast<std::size_t>(r) * static_cast<std::size_t>(intents) + static_cast<std::size_t>(c)];
  }
  std::int32_t trans_at(int r, int c) const {
    return trans[static_cast<std::size_t>(r) * static_cast<std::size_t>(intents) + static_cast<std::size_t>(c)];
  }
  bool operator==(const CountTables&) const = default;
};

// Flattened utterance view: utterance i belongs to dialogue dlg[i] at
// position pos[i]; dialogue d spans [offset[d], offset[d+1]).
struct CorpusLayout {
  int dialogues = 0;
  std::vector<int> offset;
  std::vector<int> dlg;
  std::vector<int> pos;

  static CorpusLayout from(const Corpus& corpus);
  int utterances() const { return static_cast<int>(dlg.size()); }
  int dialogue_size(int d) const { return offset[static_cast<std::size_t>(d) + 1] - offset[static_cast<std::size_t>(d)]; }
};

struct SamplerState {
  CorpusLayout layout;
  const UtteranceEmbeddings* embeddings = nullptr;  // borrowed, immutable
  std::vector<int> z;              // per-utterance intent
  std::vector<std::uint8_t> x;     // per-utterance indicator (1 = document path)
  CountTables counts;
  GaussianIntentStats gaussians;
  PriorSpec priors;
  Hyperparams hyper;
  Rng rng{1};
  bool debug_checks = false;

  CountTables recount() const;       // full scan over (z, x)
  void check_consistency() const;    // throws if incremental tables drift

  // Remove / restore one utterance's contributions to the count tables:
  // its document count, the incoming pair when it took the transition
  // path, and the outgoing pair when its successor did.
  void remove_utterance(int utt);
  void add_utterance(int utt);
};

// Assignments start at the best word-overlap intent (ties to the lowest
// id); indicators are Bernoulli(tau) draws; count tables are built to match.
SamplerState init_state(const Corpus& corpus, const IntentSet& intents,
                        const UtteranceEmbeddings& embeddings, const Hyperparams& hyper,
                        const PriorSpec* priors = nullptr);

// Unnormalized sampling weights over intents for utterance u of dialogue d,
// with the utterance's own contributions already removed from the tables.
// The indicator is integrated out: each intent's weight mixes the document
// path and, when a predecessor exists, the transition path; the successor's
// transition factor applies exactly when the successor took the transition
// path. Computed against the max Gaussian log-density for stability.
std::vector<double> conditional_intent_weights(const SamplerState& state, int d, int u);

// Two-point conditional for the indicator given the current intent; counts
// must already exclude the target utterance. A dialogue's first utterance
// has no predecessor, so its indicator is a pure Bernoulli(tau) draw.
struct IndicatorDistribution {
  double p_zero = 0.0;
  double p_one = 1.0;
};
IndicatorDistribution indicator_distribution(const SamplerState& state, int d, int u,
                                             int z_current);
int sample_indicator(SamplerState& state, int d, int u, int z_current);

// One full pass in corpus order: remove, resample indicator then intent,
// re-add; Gaussian statistics are re-estimated from the new assignments.
void gibbs_sweep(SamplerState& state);

// Log of the complete likelihood at the current (z, x): indicator term,
// Gaussian emissions, and the collapsed document and transition components.
double complete_log_likelihood(const SamplerState& state);

struct ParsedTurn {
  int intent = 0;
  double confidence = 0.0;
};

struct FittedModel {
  IntentSet intents{20, 0.5};
  Vocabulary vocab;
  TokenizerConfig tokenizer;
  GaussianIntentStats gaussians;
  Hyperparams hyper;
  PriorSpec priors;
  bool transfer_used = false;
  std::vector<double> transition;     // K x K rows, posterior mean, each sums to 1
  std::vector<double> theta;          // dialogues x K, posterior mean
  std::vector<std::string> dialogue_ids;
  std::vector<int> final_z;
  std::vector<std::uint8_t> final_x;
  std::vector<double> log_likelihood_trace;  // one entry per sweep
  std::string embedding_path;
  std::uint64_t embedding_hash = 0;
  int embedding_dim = 0;
  std::shared_ptr<EmbeddingModel> embedding;  // attached on load/fit, not serialized

  const double* transition_row(int r) const {
    return transition.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(hyper.intents);
  }
};

// init_state + sweeps, posterior means averaged over post-burn-in sweeps.
// Deterministic given the seed.
FittedModel fit(const Corpus& corpus, const IntentSet& intents,
                const UtteranceEmbeddings& embeddings, const Hyperparams& hyper,
                const PriorSpec* priors = nullptr);

// Decode one dialogue against a fitted model: Gaussians and the transition
// matrix stay frozen, only this dialogue's document counts move. Runs
// 2 * decode_sweeps passes and reports each utterance's modal intent over
// the trailing decode_sweeps samples with its empirical frequency.
std::vector<ParsedTurn> parse(const FittedModel& model, const Dialogue& dialogue,
                              const UtteranceEmbeddings& dialogue_embeddings,
                              int decode_sweeps, std::uint64_t seed);

}  // namespace di
