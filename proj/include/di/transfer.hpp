#pragma once

#include <map>
#include <string>
#include <vector>

#include "di/corpus.hpp"
#include "di/inference.hpp"

namespace di {

// Pseudo-count priors estimated from a few labeled dialogues: a global
// intent-frequency vector and an adjacent-pair transition matrix, each
// rescaled so the total (per row for the matrix) is prior_strength * K.
struct TransferPriors {
  int intents = 0;
  std::vector<double> theta;    // K cells, strictly positive
  std::vector<double> omega;    // K x K cells, strictly positive
  int source_count = 0;         // labeled dialogues used
  double prior_strength = 1.0;

  static TransferPriors uniform(int intents, double theta_cell, double omega_cell);
};

TransferPriors estimate_priors(const Corpus& labeled,
                               const std::map<std::string, int>& label_to_intent, int intents,
                               double smoothing, double prior_strength);

// Substitute the learned pseudo-counts into the sampler's conditional:
// omega cells replace the transition prior, theta cells replace the
// document prior. With uniform cells this reproduces the plain path
// exactly. scalar_rows collapses each omega row to a single per-row value.
PriorSpec apply_priors(const Hyperparams& hyper, const TransferPriors& priors,
                       bool scalar_rows = false);

}  // namespace di
