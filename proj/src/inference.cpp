#include "di/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "di/common.hpp"
#include "di/log.hpp"

namespace di {

void Hyperparams::validate() const {
  if (intents < 1) throw ValidationError("hyperparams: intents must be >= 1");
  if (tau < 0.0 || tau > 1.0) throw ValidationError("hyperparams: tau must be in [0, 1]");
  if (alpha < 0.0 || alpha_prime <= 0.0 || beta <= 0.0)
    throw ValidationError("hyperparams: priors must be strictly positive");
  if (rho < 0.0) throw ValidationError("hyperparams: rho must be >= 0");
  if (sweeps < 1) throw ValidationError("hyperparams: sweeps must be >= 1");
  if (burn_in < 0 || burn_in >= sweeps)
    throw ValidationError("hyperparams: burn_in must be < sweeps");
  if (variance_floor <= 0.0) throw ValidationError("hyperparams: variance floor must be > 0");
}

PriorSpec PriorSpec::uniform(int intents, double alpha, double alpha_prime) {
  PriorSpec p;
  p.intents = intents;
  p.doc.assign(static_cast<std::size_t>(intents), alpha);
  p.doc_total = alpha * intents;
  p.trans.assign(static_cast<std::size_t>(intents) * static_cast<std::size_t>(intents), alpha_prime);
  p.trans_row.assign(static_cast<std::size_t>(intents), alpha_prime * intents);
  return p;
}

CorpusLayout CorpusLayout::from(const Corpus& corpus) {
  CorpusLayout layout;
  layout.dialogues = static_cast<int>(corpus.dialogues.size());
  layout.offset.reserve(corpus.dialogues.size() + 1);
  layout.offset.push_back(0);
  int d = 0;
  for (const auto& dlg : corpus.dialogues) {
    int p = 0;
    for (std::size_t i = 0; i < dlg.utterances.size(); ++i) {
      layout.dlg.push_back(d);
      layout.pos.push_back(p++);
    }
    layout.offset.push_back(static_cast<int>(layout.dlg.size()));
    ++d;
  }
  return layout;
}

CountTables SamplerState::recount() const {
  const int K = hyper.intents;
  CountTables t;
  t.dialogues = layout.dialogues;
  t.intents = K;
  t.doc.assign(static_cast<std::size_t>(t.dialogues) * static_cast<std::size_t>(K), 0);
  t.doc_total.assign(static_cast<std::size_t>(t.dialogues), 0);
  t.trans.assign(static_cast<std::size_t>(K) * static_cast<std::size_t>(K), 0);
  t.trans_row.assign(static_cast<std::size_t>(K), 0);
  const int n = layout.utterances();
  for (int i = 0; i < n; ++i) {
    const int d = layout.dlg[static_cast<std::size_t>(i)];
    if (x[static_cast<std::size_t>(i)]) {
      ++t.indicator_one;
    } else {
      ++t.indicator_zero;
    }
    if (layout.pos[static_cast<std::size_t>(i)] > 0 && !x[static_cast<std::size_t>(i)]) {
      const int zp = z[static_cast<std::size_t>(i) - 1];
      ++t.trans_at(zp, z[static_cast<std::size_t>(i)]);
      ++t.trans_row[static_cast<std::size_t>(zp)];
    } else {
      ++t.doc_at(d, z[static_cast<std::size_t>(i)]);
      ++t.doc_total[static_cast<std::size_t>(d)];
    }
  }
  return t;
}

void SamplerState::check_consistency() const {
  if (!(recount() == counts))
    throw std::runtime_error("sampler state: incremental count tables drifted from recount");
}

namespace {

int best_overlap_intent(const IntentSet& intents, const std::vector<std::int32_t>& tokens) {
  int best = 0;
  double best_score = -1.0;
  for (std::int32_t k = 0; k < intents.size(); ++k) {
    double score = 0.0;
    const auto& probs = intents[k].word_probs;
    for (std::int32_t t : tokens) {
      if (t >= 0 && static_cast<std::size_t>(t) < probs.size())
        score += probs[static_cast<std::size_t>(t)];
    }
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

}  // namespace

void SamplerState::remove_utterance(int i) {
  SamplerState& s = *this;
  const int d = s.layout.dlg[static_cast<std::size_t>(i)];
  const int zi = s.z[static_cast<std::size_t>(i)];
  if (s.x[static_cast<std::size_t>(i)]) {
    --s.counts.indicator_one;
  } else {
    --s.counts.indicator_zero;
  }
  if (s.layout.pos[static_cast<std::size_t>(i)] > 0 && !s.x[static_cast<std::size_t>(i)]) {
    const int zp = s.z[static_cast<std::size_t>(i) - 1];
    --s.counts.trans_at(zp, zi);
    --s.counts.trans_row[static_cast<std::size_t>(zp)];
  } else {
    --s.counts.doc_at(d, zi);
    --s.counts.doc_total[static_cast<std::size_t>(d)];
  }
  const int last = s.layout.offset[static_cast<std::size_t>(d) + 1] - 1;
  if (i < last && !s.x[static_cast<std::size_t>(i) + 1]) {
    const int zs = s.z[static_cast<std::size_t>(i) + 1];
    --s.counts.trans_at(zi, zs);
    --s.counts.trans_row[static_cast<std::size_t>(zi)];
  }
}

void SamplerState::add_utterance(int i) {
  SamplerState& s = *this;
  const int d = s.layout.dlg[static_cast<std::size_t>(i)];
  const int zi = s.z[static_cast<std::size_t>(i)];
  if (s.x[static_cast<std::size_t>(i)]) {
    ++s.counts.indicator_one;
  } else {
    ++s.counts.indicator_zero;
  }
  if (s.layout.pos[static_cast<std::size_t>(i)] > 0 && !s.x[static_cast<std::size_t>(i)]) {
    const int zp = s.z[static_cast<std::size_t>(i) - 1];
    ++s.counts.trans_at(zp, zi);
    ++s.counts.trans_row[static_cast<std::size_t>(zp)];
  } else {
    ++s.counts.doc_at(d, zi);
    ++s.counts.doc_total[static_cast<std::size_t>(d)];
  }
  const int last = s.layout.offset[static_cast<std::size_t>(d) + 1] - 1;
  if (i < last && !s.x[static_cast<std::size_t>(i) + 1]) {
    const int zs = s.z[static_cast<std::size_t>(i) + 1];
    ++s.counts.trans_at(zi, zs);
    ++s.counts.trans_row[static_cast<std::size_t>(zi)];
  }
}

namespace {

std::vector<double> intent_weights_removed(const SamplerState& s, int i) {
  const int K = s.hyper.intents;
  const int d = s.layout.dlg[static_cast<std::size_t>(i)];
  const double tau = s.hyper.tau;
  const PriorSpec& pr = s.priors;
  const CountTables& c = s.counts;

  const bool has_pred = s.layout.pos[static_cast<std::size_t>(i)] > 0;
  const int zp = has_pred ? s.z[static_cast<std::size_t>(i) - 1] : -1;
  const int last = s.layout.offset[static_cast<std::size_t>(d) + 1] - 1;
  const bool succ_trans = i < last && !s.x[static_cast<std::size_t>(i) + 1];
  const int zs = succ_trans ? s.z[static_cast<std::size_t>(i) + 1] : -1;

  const double doc_denom = static_cast<double>(c.doc_total[static_cast<std::size_t>(d)]) + pr.doc_total;
  const double* e = s.embeddings->row(static_cast<std::size_t>(i));

  std::vector<double> glog(static_cast<std::size_t>(K));
  double gmax = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    glog[static_cast<std::size_t>(k)] = log_gaussian_likelihood(e, s.gaussians, k);
    gmax = std::max(gmax, glog[static_cast<std::size_t>(k)]);
  }

  std::vector<double> w(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double doc_term =
        (static_cast<double>(c.doc_at(d, k)) + pr.doc[static_cast<std::size_t>(k)]) / doc_denom;
    double mix;
    if (!has_pred) {
      // Both indicator values route the first utterance through the
      // document path; only the successor factor can differ, and it does
      // not, so the mixture collapses.
      double succ = 1.0;
      if (succ_trans) {
        succ = (static_cast<double>(c.trans_at(k, zs)) + pr.trans_cell(k, zs)) /
               (static_cast<double>(c.trans_row[static_cast<std::size_t>(k)]) +
                pr.trans_row[static_cast<std::size_t>(k)]);
      }
      mix = doc_term * succ;
    } else {
      const double pred =
          (static_cast<double>(c.trans_at(zp, k)) + pr.trans_cell(zp, k)) /
          (static_cast<double>(c.trans_row[static_cast<std::size_t>(zp)]) +
           pr.trans_row[static_cast<std::size_t>(zp)]);
      double succ_doc = 1.0, succ_tr = 1.0;
      if (succ_trans) {
        const double cell = static_cast<double>(c.trans_at(k, zs)) + pr.trans_cell(k, zs);
        const double row = static_cast<double>(c.trans_row[static_cast<std::size_t>(k)]) +
                           pr.trans_row[static_cast<std::size_t>(k)];
        succ_doc = cell / row;
        // When this utterance itself transitions into row k, the row
        // already holds that extra pair by the time the successor draws.
        const double self_num = (zp == k && k == zs) ? 1.0 : 0.0;
        const double self_den = (zp == k) ? 1.0 : 0.0;
        succ_tr = (cell + self_num) / (row + self_den);
      }
      mix = tau * doc_term * succ_doc + (1.0 - tau) * pred * succ_tr;
    }
    const double weight = std::exp(glog[static_cast<std::size_t>(k)] - gmax) * mix;
    if (!std::isfinite(weight))
      throw std::runtime_error("conditional intent weight is not finite (broken Gaussian stats?)");
    w[static_cast<std::size_t>(k)] = weight;
  }
  return w;
}

IndicatorDistribution indicator_probs_removed(const SamplerState& s, int i, int z_current) {
  const double tau = s.hyper.tau;
  IndicatorDistribution out;
  if (s.layout.pos[static_cast<std::size_t>(i)] == 0) {
    out.p_zero = 1.0 - tau;
    out.p_one = tau;
    return out;
  }
  const int d = s.layout.dlg[static_cast<std::size_t>(i)];
  const int zp = s.z[static_cast<std::size_t>(i) - 1];
  const PriorSpec& pr = s.priors;
  const CountTables& c = s.counts;
  const double pred =
      (static_cast<double>(c.trans_at(zp, z_current)) + pr.trans_cell(zp, z_current)) /
      (static_cast<double>(c.trans_row[static_cast<std::size_t>(zp)]) +
       pr.trans_row[static_cast<std::size_t>(zp)]);
  const double doc =
      (static_cast<double>(c.doc_at(d, z_current)) + pr.doc[static_cast<std::size_t>(z_current)]) /
      (static_cast<double>(c.doc_total[static_cast<std::size_t>(d)]) + pr.doc_total);
  const double m0 = (1.0 - tau) * pred;
  const double m1 = tau * doc;
  const double total = m0 + m1;
  if (!(total > 0.0))
    throw std::runtime_error("indicator distribution degenerate (both masses zero)");
  out.p_zero = m0 / total;
  out.p_one = m1 / total;
  return out;
}

}  // namespace

SamplerState init_state(const Corpus& corpus, const IntentSet& intents,
                        const UtteranceEmbeddings& embeddings, const Hyperparams& hyper,
                        const PriorSpec* priors) {
  hyper.validate();
  if (intents.size() == 0) throw ValidationError("init_state: empty intent set");
  if (intents.size() != hyper.intents)
    throw ValidationError("init_state: hyperparams K differs from intent set size");
  if (embeddings.count != corpus.utterance_count())
    throw ValidationError("init_state: embedding count differs from corpus utterances");
  if (priors && priors->intents != hyper.intents)
    throw ValidationError("init_state: prior dimensions differ from K");

  SamplerState s;
  s.layout = CorpusLayout::from(corpus);
  s.embeddings = &embeddings;
  s.hyper = hyper;
  s.priors = priors ? *priors : PriorSpec::uniform(hyper.intents, hyper.alpha_eff(), hyper.alpha_prime);
  s.rng = Rng(hyper.seed);

  const int n = s.layout.utterances();
  s.z.resize(static_cast<std::size_t>(n));
  s.x.resize(static_cast<std::size_t>(n));
  int i = 0;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      s.z[static_cast<std::size_t>(i)] = best_overlap_intent(intents, u.tokens);
      s.x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(s.rng.bernoulli(hyper.tau));
      ++i;
    }
  }
  s.counts = s.recount();
  s.gaussians = estimate_gaussians(embeddings, s.z, hyper.intents, hyper.variance_floor);
  return s;
}

std::vector<double> conditional_intent_weights(const SamplerState& state, int d, int u) {
  const int i = state.layout.offset[static_cast<std::size_t>(d)] + u;
  return intent_weights_removed(state, i);
}

IndicatorDistribution indicator_distribution(const SamplerState& state, int d, int u,
                                             int z_current) {
  const int i = state.layout.offset[static_cast<std::size_t>(d)] + u;
  return indicator_probs_removed(state, i, z_current);
}

int sample_indicator(SamplerState& state, int d, int u, int z_current) {
  const auto dist = indicator_distribution(state, d, u, z_current);
  return state.rng.bernoulli(dist.p_one);
}

void gibbs_sweep(SamplerState& state) {
  const int n = state.layout.utterances();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (state.hyper.randomized_order) {
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(state.rng.below(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
  }

  for (int idx : order) {
    state.remove_utterance(idx);
    const auto ind = indicator_probs_removed(state, idx, state.z[static_cast<std::size_t>(idx)]);
    const int x_new = state.rng.bernoulli(ind.p_one);
    const auto w = intent_weights_removed(state, idx);
    const int z_new = state.rng.categorical(w.data(), state.hyper.intents);
    state.z[static_cast<std::size_t>(idx)] = z_new;
    state.x[static_cast<std::size_t>(idx)] = static_cast<std::uint8_t>(x_new);
    state.add_utterance(idx);
  }

  state.gaussians = estimate_gaussians(*state.embeddings, state.z, state.hyper.intents,
                                       state.hyper.variance_floor);
  if (state.debug_checks) state.check_consistency();
}

double complete_log_likelihood(const SamplerState& state) {
  const int K = state.hyper.intents;
  const double tau = state.hyper.tau;
  const PriorSpec& pr = state.priors;
  const CountTables& c = state.counts;

  double ll = 0.0;
  if (c.indicator_zero > 0) ll += static_cast<double>(c.indicator_zero) * std::log(1.0 - tau);
  if (c.indicator_one > 0) ll += static_cast<double>(c.indicator_one) * std::log(tau);

  const int n = state.layout.utterances();
  for (int i = 0; i < n; ++i) {
    ll += log_gaussian_likelihood(state.embeddings->row(static_cast<std::size_t>(i)),
                                  state.gaussians, state.z[static_cast<std::size_t>(i)]);
  }

  for (int d = 0; d < c.dialogues; ++d) {
    ll += std::lgamma(pr.doc_total) -
          std::lgamma(static_cast<double>(c.doc_total[static_cast<std::size_t>(d)]) + pr.doc_total);
    for (int k = 0; k < K; ++k) {
      const std::int32_t cnt = c.doc_at(d, k);
      if (cnt > 0)
        ll += std::lgamma(static_cast<double>(cnt) + pr.doc[static_cast<std::size_t>(k)]) -
              std::lgamma(pr.doc[static_cast<std::size_t>(k)]);
    }
  }
  for (int r = 0; r < K; ++r) {
    const std::int32_t row = c.trans_row[static_cast<std::size_t>(r)];
    if (row > 0) {
      ll += std::lgamma(pr.trans_row[static_cast<std::size_t>(r)]) -
            std::lgamma(static_cast<double>(row) + pr.trans_row[static_cast<std::size_t>(r)]);
      for (int j = 0; j < K; ++j) {
        const std::int32_t cnt = c.trans_at(r, j);
        if (cnt > 0)
          ll += std::lgamma(static_cast<double>(cnt) + pr.trans_cell(r, j)) -
                std::lgamma(pr.trans_cell(r, j));
      }
    }
  }
  return ll;
}

FittedModel fit(const Corpus& corpus, const IntentSet& intents,
                const UtteranceEmbeddings& embeddings, const Hyperparams& hyper,
                const PriorSpec* priors) {
  SamplerState state = init_state(corpus, intents, embeddings, hyper, priors);
  const int K = hyper.intents;
  const int D = state.layout.dialogues;

  std::vector<double> theta_acc(static_cast<std::size_t>(D) * static_cast<std::size_t>(K), 0.0);
  std::vector<double> omega_acc(static_cast<std::size_t>(K) * static_cast<std::size_t>(K), 0.0);
  int samples = 0;

  FittedModel model;
  model.log_likelihood_trace.reserve(static_cast<std::size_t>(hyper.sweeps));

  for (int sweep = 1; sweep <= hyper.sweeps; ++sweep) {
    gibbs_sweep(state);
    model.log_likelihood_trace.push_back(complete_log_likelihood(state));
    if (sweep <= hyper.burn_in) continue;
    ++samples;
    for (int d = 0; d < D; ++d) {
      const double denom =
          static_cast<double>(state.counts.doc_total[static_cast<std::size_t>(d)]) +
          state.priors.doc_total;
      for (int k = 0; k < K; ++k) {
        theta_acc[static_cast<std::size_t>(d) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] +=
            (static_cast<double>(state.counts.doc_at(d, k)) +
             state.priors.doc[static_cast<std::size_t>(k)]) /
            denom;
      }
    }
    for (int r = 0; r < K; ++r) {
      const double denom =
          static_cast<double>(state.counts.trans_row[static_cast<std::size_t>(r)]) +
          state.priors.trans_row[static_cast<std::size_t>(r)];
      for (int j = 0; j < K; ++j) {
        omega_acc[static_cast<std::size_t>(r) * static_cast<std::size_t>(K) + static_cast<std::size_t>(j)] +=
            (static_cast<double>(state.counts.trans_at(r, j)) + state.priors.trans_cell(r, j)) /
            denom;
      }
    }
  }

  for (double& v : theta_acc) v /= samples;
  for (double& v : omega_acc) v /= samples;

  model.intents = intents;
  model.gaussians = state.gaussians;
  model.hyper = hyper;
  model.priors = state.priors;
  model.transfer_used = priors != nullptr;
  model.transition = std::move(omega_acc);
  model.theta = std::move(theta_acc);
  model.dialogue_ids.reserve(corpus.dialogues.size());
  for (const auto& dlg : corpus.dialogues) model.dialogue_ids.push_back(dlg.dialogue_id);
  model.final_z = std::move(state.z);
  model.final_x = std::move(state.x);
  model.embedding_dim = embeddings.dim;
  return model;
}

std::vector<ParsedTurn> parse(const FittedModel& model, const Dialogue& dialogue,
                              const UtteranceEmbeddings& emb, int decode_sweeps,
                              std::uint64_t seed) {
  if (dialogue.utterances.empty()) throw ValidationError("parse: empty dialogue");
  if (decode_sweeps < 1) throw ValidationError("parse: decode_sweeps must be >= 1");
  const int K = model.hyper.intents;
  const int n = static_cast<int>(dialogue.utterances.size());
  if (emb.count != static_cast<std::size_t>(n) || emb.dim != model.gaussians.dim)
    throw ValidationError("parse: embedding shape mismatch");
  const double tau = model.hyper.tau;
  const PriorSpec& pr = model.priors;

  Rng rng(seed);
  std::vector<int> z(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
  std::vector<std::int32_t> doc(static_cast<std::size_t>(K), 0);
  std::int32_t doc_total = 0;
  for (int i = 0; i < n; ++i) {
    z[static_cast<std::size_t>(i)] = best_overlap_intent(model.intents, dialogue.utterances[static_cast<std::size_t>(i)].tokens);
    x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.bernoulli(tau));
    if (i == 0 || x[static_cast<std::size_t>(i)]) {
      ++doc[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
      ++doc_total;
    }
  }

  // Gaussian log-densities are fixed, so compute them once.
  std::vector<double> glog(static_cast<std::size_t>(n) * static_cast<std::size_t>(K));
  std::vector<double> gmax(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      const double v = log_gaussian_likelihood(emb.row(static_cast<std::size_t>(i)), model.gaussians, k);
      glog[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] = v;
      gmax[static_cast<std::size_t>(i)] = std::max(gmax[static_cast<std::size_t>(i)], v);
    }
  }

  std::vector<std::int64_t> freq(static_cast<std::size_t>(n) * static_cast<std::size_t>(K), 0);
  std::vector<double> w(static_cast<std::size_t>(K));
  const int total_sweeps = 2 * decode_sweeps;

  for (int sweep = 1; sweep <= total_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      if (i == 0 || x[static_cast<std::size_t>(i)]) {
        --doc[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
        --doc_total;
      }
      const bool has_pred = i > 0;
      const int zp = has_pred ? z[static_cast<std::size_t>(i) - 1] : -1;
      const bool succ_trans = i + 1 < n && !x[static_cast<std::size_t>(i) + 1];
      const int zs = succ_trans ? z[static_cast<std::size_t>(i) + 1] : -1;
      const double doc_denom = static_cast<double>(doc_total) + pr.doc_total;

      int x_new;
      if (!has_pred) {
        x_new = rng.bernoulli(tau);
      } else {
        const double m0 = (1.0 - tau) * model.transition_row(zp)[z[static_cast<std::size_t>(i)]];
        const double m1 =
            tau *
            (static_cast<double>(doc[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])]) +
             pr.doc[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])]) /
            doc_denom;
        x_new = rng.bernoulli(m1 / (m0 + m1));
      }

      for (int k = 0; k < K; ++k) {
        const double doc_term =
            (static_cast<double>(doc[static_cast<std::size_t>(k)]) + pr.doc[static_cast<std::size_t>(k)]) /
            doc_denom;
        // The frozen transition matrix decouples the successor factor from
        // this utterance's indicator.
        const double succ = succ_trans ? model.transition_row(k)[zs] : 1.0;
        const double mix = has_pred
                               ? (tau * doc_term + (1.0 - tau) * model.transition_row(zp)[k]) * succ
                               : doc_term * succ;
        w[static_cast<std::size_t>(k)] =
            std::exp(glog[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] -
                     gmax[static_cast<std::size_t>(i)]) *
            mix;
      }
      const int z_new = rng.categorical(w.data(), K);
      z[static_cast<std::size_t>(i)] = z_new;
      x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x_new);
      if (i == 0 || x_new) {
        ++doc[static_cast<std::size_t>(z_new)];
        ++doc_total;
      }
    }
    if (sweep > total_sweeps - decode_sweeps) {
      for (int i = 0; i < n; ++i)
        ++freq[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) +
               static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
    }
  }

  std::vector<ParsedTurn> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int best = 0;
    std::int64_t best_count = -1;
    for (int k = 0; k < K; ++k) {
      const std::int64_t cnt =
          freq[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)];
      if (cnt > best_count) {
        best_count = cnt;
        best = k;
      }
    }
    out[static_cast<std::size_t>(i)].intent = best;
    out[static_cast<std::size_t>(i)].confidence =
        static_cast<double>(best_count) / static_cast<double>(decode_sweeps);
  }
  return out;
}

}  // namespace di
