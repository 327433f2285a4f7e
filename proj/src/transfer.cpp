#include "di/transfer.hpp"

#include <numeric>

#include "di/common.hpp"

namespace di {

TransferPriors TransferPriors::uniform(int intents, double theta_cell, double omega_cell) {
  TransferPriors p;
  p.intents = intents;
  p.theta.assign(static_cast<std::size_t>(intents), theta_cell);
  p.omega.assign(static_cast<std::size_t>(intents) * static_cast<std::size_t>(intents), omega_cell);
  p.prior_strength = theta_cell;
  return p;
}

TransferPriors estimate_priors(const Corpus& labeled,
                               const std::map<std::string, int>& label_to_intent, int intents,
                               double smoothing, double prior_strength) {
  if (smoothing <= 0.0) throw ValidationError("estimate_priors: smoothing must be > 0");
  if (prior_strength <= 0.0) throw ValidationError("estimate_priors: prior_strength must be > 0");
  if (intents < 1) throw ValidationError("estimate_priors: intents must be >= 1");

  const std::size_t K = static_cast<std::size_t>(intents);
  std::vector<double> theta(K, smoothing);
  std::vector<double> omega(K * K, smoothing);

  auto intent_of = [&](const Utterance& u, const std::string& dialogue_id) -> int {
    if (!u.gold_intent || u.gold_intent->empty())
      throw ValidationError("estimate_priors: unlabeled utterance in dialogue \"" + dialogue_id + "\"");
    auto it = label_to_intent.find(*u.gold_intent);
    if (it == label_to_intent.end())
      throw ValidationError("estimate_priors: label \"" + *u.gold_intent +
                            "\" is not mapped to an intent");
    if (it->second < 0 || it->second >= intents)
      throw ValidationError("estimate_priors: label \"" + *u.gold_intent +
                            "\" maps outside 0..K-1");
    return it->second;
  };

  for (const auto& dlg : labeled.dialogues) {
    int prev = -1;
    for (const auto& u : dlg.utterances) {
      const int z = intent_of(u, dlg.dialogue_id);
      theta[static_cast<std::size_t>(z)] += 1.0;
      if (prev >= 0) omega[static_cast<std::size_t>(prev) * K + static_cast<std::size_t>(z)] += 1.0;
      prev = z;
    }
  }

  const double target = prior_strength * static_cast<double>(intents);
  const double theta_total = std::accumulate(theta.begin(), theta.end(), 0.0);
  for (double& v : theta) v *= target / theta_total;
  for (std::size_t r = 0; r < K; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < K; ++c) row += omega[r * K + c];
    for (std::size_t c = 0; c < K; ++c) omega[r * K + c] *= target / row;
  }

  TransferPriors out;
  out.intents = intents;
  out.theta = std::move(theta);
  out.omega = std::move(omega);
  out.source_count = static_cast<int>(labeled.dialogues.size());
  out.prior_strength = prior_strength;
  return out;
}

PriorSpec apply_priors(const Hyperparams& hyper, const TransferPriors& priors,
                       bool scalar_rows) {
  if (priors.intents != hyper.intents)
    throw ValidationError("apply_priors: prior dimensions differ from hyperparameter K");
  const std::size_t K = static_cast<std::size_t>(hyper.intents);
  if (priors.theta.size() != K || priors.omega.size() != K * K)
    throw ValidationError("apply_priors: malformed transfer priors");

  PriorSpec spec;
  spec.intents = hyper.intents;
  spec.doc = priors.theta;
  spec.doc_total = std::accumulate(spec.doc.begin(), spec.doc.end(), 0.0);
  spec.trans = priors.omega;
  if (scalar_rows) {
    for (std::size_t r = 0; r < K; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < K; ++c) row += spec.trans[r * K + c];
      const double cell = row / static_cast<double>(K);
      for (std::size_t c = 0; c < K; ++c) spec.trans[r * K + c] = cell;
    }
  }
  spec.trans_row.assign(K, 0.0);
  for (std::size_t r = 0; r < K; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < K; ++c) row += spec.trans[r * K + c];
    spec.trans_row[r] = row;
  }
  return spec;
}

}  // namespace di
