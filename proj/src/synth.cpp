#include "di/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "di/common.hpp"
#include "di/rng.hpp"
#include "json.hpp"

namespace di {

using nlohmann::json;

void TruthParams::validate() const {
  if (intents < 1 || vocab < 1 || dialogues < 1 || dim < 1)
    throw ValidationError("truth params: sizes must be positive");
  if (tau < 0.0 || tau > 1.0) throw ValidationError("truth params: tau must be in [0, 1]");
  if (doc_alpha <= 0.0) throw ValidationError("truth params: doc_alpha must be > 0");
  if (min_utterances < 1 || max_utterances < min_utterances)
    throw ValidationError("truth params: bad utterance range");
  if (min_words < 1 || max_words < min_words)
    throw ValidationError("truth params: bad word range");
  const std::size_t K = static_cast<std::size_t>(intents);
  if (phi.size() != K * static_cast<std::size_t>(vocab) ||
      mean.size() != K * static_cast<std::size_t>(dim) ||
      var.size() != K * static_cast<std::size_t>(dim) || transition.size() != K * K)
    throw ValidationError("truth params: parameter shapes do not match sizes");
  for (std::size_t k = 0; k < K; ++k) {
    double ps = 0.0, ts = 0.0;
    for (int v = 0; v < vocab; ++v) ps += phi[k * static_cast<std::size_t>(vocab) + static_cast<std::size_t>(v)];
    for (std::size_t j = 0; j < K; ++j) ts += transition[k * K + j];
    if (std::abs(ps - 1.0) > 1e-9) throw ValidationError("truth params: phi row does not sum to 1");
    if (std::abs(ts - 1.0) > 1e-9)
      throw ValidationError("truth params: transition row does not sum to 1");
    for (int d = 0; d < dim; ++d) {
      if (var[k * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] <= 0.0)
        throw ValidationError("truth params: variances must be > 0");
    }
  }
}

TruthParams TruthParams::make(int intents, int vocab, int dialogues, int dim, double tau,
                              double separation, double cycle_mass, std::uint64_t seed,
                              double word_background) {
  TruthParams t;
  t.intents = intents;
  t.vocab = vocab;
  t.dialogues = dialogues;
  t.dim = dim;
  t.tau = tau;
  t.seed = seed;
  const std::size_t K = static_cast<std::size_t>(intents);
  const std::size_t V = static_cast<std::size_t>(vocab);
  const std::size_t Dm = static_cast<std::size_t>(dim);

  Rng rng(Rng::mix(seed, 0xd15e));
  std::vector<double> background(V, 0.0);
  {
    double total = 0.0;
    for (auto& b : background) {
      b = rng.gamma(1.0);
      total += b;
    }
    for (auto& b : background) b /= total;
  }
  t.phi.resize(K * V);
  for (std::size_t k = 0; k < K; ++k) {
    double total = 0.0;
    std::vector<double> specific(V);
    for (auto& p : specific) {
      p = rng.gamma(0.3);
      total += p;
    }
    for (std::size_t v = 0; v < V; ++v) {
      t.phi[k * V + v] = word_background * background[v] + (1.0 - word_background) * specific[v] / total;
    }
  }

  // Unit-variance Gaussians with means on a line, adjacent means exactly
  // separation sigma apart, so each intent overlaps its cycle neighbors.
  t.mean.assign(K * Dm, 0.0);
  t.var.assign(K * Dm, 1.0);
  for (std::size_t k = 0; k < K; ++k) {
    t.mean[k * Dm] = separation * static_cast<double>(k);
  }

  t.transition.assign(K * K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < K; ++j) t.transition[k * K + j] = (1.0 - cycle_mass) / intents;
    t.transition[k * K + (k + 1) % K] += cycle_mass;
  }
  return t;
}

SynthData generate_corpus(const TruthParams& truth) {
  truth.validate();
  const int K = truth.intents;
  const int V = truth.vocab;
  const int dim = truth.dim;
  Rng rng(truth.seed);

  SynthData out;
  out.corpus.dialogues.reserve(static_cast<std::size_t>(truth.dialogues));

  std::vector<double> theta(static_cast<std::size_t>(K));
  std::vector<std::int64_t> tf(static_cast<std::size_t>(V), 0), df(static_cast<std::size_t>(V), 0);
  std::vector<std::uint8_t> in_dialogue(static_cast<std::size_t>(V), 0);

  for (int d = 0; d < truth.dialogues; ++d) {
    Dialogue dlg;
    dlg.dialogue_id = "d" + std::to_string(d);
    rng.dirichlet(truth.doc_alpha, K, theta.data());
    const int n_utts = truth.min_utterances +
                       static_cast<int>(rng.below(static_cast<std::uint64_t>(
                           truth.max_utterances - truth.min_utterances + 1)));
    std::fill(in_dialogue.begin(), in_dialogue.end(), 0);
    int prev = -1;
    for (int s = 0; s < n_utts; ++s) {
      const int x = rng.bernoulli(truth.tau);
      int z;
      if (s == 0 || x == 1) {
        z = rng.categorical(theta.data(), K);
      } else {
        z = rng.categorical(truth.transition.data() + static_cast<std::size_t>(prev) * static_cast<std::size_t>(K), K);
      }
      Utterance utt;
      utt.speaker = (s % 2 == 0) ? Speaker::Customer : Speaker::Service;
      utt.gold_intent = "i" + std::to_string(z);
      const int n_words = truth.min_words +
                          static_cast<int>(rng.below(static_cast<std::uint64_t>(
                              truth.max_words - truth.min_words + 1)));
      const double* phi_z = truth.phi.data() + static_cast<std::size_t>(z) * static_cast<std::size_t>(V);
      for (int w = 0; w < n_words; ++w) {
        const int word = rng.categorical(phi_z, V);
        utt.tokens.push_back(word);
        utt.words.push_back("w" + std::to_string(word));
        if (w > 0) utt.raw_text += ' ';
        utt.raw_text += utt.words.back();
        ++tf[static_cast<std::size_t>(word)];
        if (!in_dialogue[static_cast<std::size_t>(word)]) {
          in_dialogue[static_cast<std::size_t>(word)] = 1;
          ++df[static_cast<std::size_t>(word)];
        }
      }
      for (int c = 0; c < dim; ++c) {
        out.embeddings.data.push_back(
            truth.mean[static_cast<std::size_t>(z) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)] +
            std::sqrt(truth.var[static_cast<std::size_t>(z) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)]) *
                rng.normal());
      }
      out.gold_z.push_back(z);
      out.gold_x.push_back(static_cast<std::uint8_t>(x));
      dlg.utterances.push_back(std::move(utt));
      prev = z;
    }
    out.corpus.dialogues.push_back(std::move(dlg));
  }

  out.embeddings.dim = dim;
  out.embeddings.count = out.gold_z.size();
  std::vector<std::string> words(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) words[static_cast<std::size_t>(v)] = "w" + std::to_string(v);
  out.vocab = Vocabulary(std::move(words), std::move(tf), std::move(df));
  return out;
}

IntentSet truth_intents(const TruthParams& truth) {
  IntentSet set(20, 1.0);
  for (int k = 0; k < truth.intents; ++k) {
    Intent intent;
    intent.name = "i" + std::to_string(k);
    intent.provenance = Provenance::TopicModel;
    intent.word_probs.assign(
        truth.phi.begin() + static_cast<std::ptrdiff_t>(k) * truth.vocab,
        truth.phi.begin() + static_cast<std::ptrdiff_t>(k + 1) * truth.vocab);
    const auto got = set.add(std::move(intent));
    if (!got.added) throw ValidationError("truth word distributions are not distinct");
  }
  return set;
}

void save_truth(const TruthParams& truth, const std::string& path) {
  json doc;
  doc["version"] = 1;
  doc["intents"] = truth.intents;
  doc["vocab"] = truth.vocab;
  doc["dialogues"] = truth.dialogues;
  doc["dim"] = truth.dim;
  doc["tau"] = truth.tau;
  doc["doc_alpha"] = truth.doc_alpha;
  doc["phi"] = truth.phi;
  doc["mean"] = truth.mean;
  doc["var"] = truth.var;
  doc["transition"] = truth.transition;
  doc["min_utterances"] = truth.min_utterances;
  doc["max_utterances"] = truth.max_utterances;
  doc["min_words"] = truth.min_words;
  doc["max_words"] = truth.max_words;
  doc["seed"] = truth.seed;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TruthParams load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open truth file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("truth file " + path + ": malformed JSON: " + e.what());
  }
  TruthParams t;
  t.intents = doc["intents"].get<int>();
  t.vocab = doc["vocab"].get<int>();
  t.dialogues = doc["dialogues"].get<int>();
  t.dim = doc["dim"].get<int>();
  t.tau = doc["tau"].get<double>();
  t.doc_alpha = doc["doc_alpha"].get<double>();
  t.phi = doc["phi"].get<std::vector<double>>();
  t.mean = doc["mean"].get<std::vector<double>>();
  t.var = doc["var"].get<std::vector<double>>();
  t.transition = doc["transition"].get<std::vector<double>>();
  t.min_utterances = doc["min_utterances"].get<int>();
  t.max_utterances = doc["max_utterances"].get<int>();
  t.min_words = doc["min_words"].get<int>();
  t.max_words = doc["max_words"].get<int>();
  t.seed = doc["seed"].get<std::uint64_t>();
  t.validate();
  return t;
}

std::vector<std::vector<double>> brute_force_posterior(
    const CorpusLayout& layout, const UtteranceEmbeddings& embeddings,
    const GaussianIntentStats& gaussians, double tau, const PriorSpec& priors,
    const std::vector<int>& ref_z, const std::vector<std::uint8_t>& ref_x) {
  const int n = layout.utterances();
  const int K = priors.intents;
  const int D = layout.dialogues;
  if (n > 8 || K > 3)
    throw ValidationError("brute_force_posterior: instance above the enumeration bound");
  if (static_cast<int>(ref_z.size()) != n || static_cast<int>(ref_x.size()) != n)
    throw ValidationError("brute_force_posterior: reference size mismatch");
  if (tau < 0.0 || tau > 1.0) throw ValidationError("brute_force_posterior: bad tau");

  // Per-utterance Gaussian log-densities, computed once with a plain loop.
  std::vector<double> gtab(static_cast<std::size_t>(n) * static_cast<std::size_t>(K));
  for (int i = 0; i < n; ++i) {
    const double* e = embeddings.row(static_cast<std::size_t>(i));
    for (int k = 0; k < K; ++k) {
      double ll = 0.0;
      const double* mu = gaussians.mean_row(k);
      const double* var = gaussians.var_row(k);
      for (int c = 0; c < gaussians.dim; ++c) {
        const double diff = e[c] - mu[c];
        ll += -0.5 * std::log(2.0 * M_PI * var[c]) - diff * diff / (2.0 * var[c]);
      }
      gtab[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] = ll;
    }
  }

  // Log-gamma lookup tables over every count value a configuration can
  // produce (integer offsets 0..n above each pseudo-count).
  const int C = n + 1;
  std::vector<double> lg_doc(static_cast<std::size_t>(K) * static_cast<std::size_t>(C));
  std::vector<double> lg_doc_tot(static_cast<std::size_t>(C));
  std::vector<double> lg_trans(static_cast<std::size_t>(K) * static_cast<std::size_t>(K) * static_cast<std::size_t>(C));
  std::vector<double> lg_trans_row(static_cast<std::size_t>(K) * static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    lg_doc_tot[static_cast<std::size_t>(c)] = std::lgamma(priors.doc_total + c);
    for (int k = 0; k < K; ++k) {
      lg_doc[static_cast<std::size_t>(k) * static_cast<std::size_t>(C) + static_cast<std::size_t>(c)] =
          std::lgamma(priors.doc[static_cast<std::size_t>(k)] + c);
      lg_trans_row[static_cast<std::size_t>(k) * static_cast<std::size_t>(C) + static_cast<std::size_t>(c)] =
          std::lgamma(priors.trans_row[static_cast<std::size_t>(k)] + c);
      for (int j = 0; j < K; ++j) {
        lg_trans[(static_cast<std::size_t>(k) * static_cast<std::size_t>(K) + static_cast<std::size_t>(j)) * static_cast<std::size_t>(C) +
                 static_cast<std::size_t>(c)] = std::lgamma(priors.trans_cell(k, j) + c);
      }
    }
  }

  const double log_tau = tau > 0.0 ? std::log(tau) : -std::numeric_limits<double>::infinity();
  const double log_one_minus_tau =
      tau < 1.0 ? std::log(1.0 - tau) : -std::numeric_limits<double>::infinity();

  // Streaming log-sum-exp accumulators per (utterance, intent).
  std::vector<double> bucket_max(static_cast<std::size_t>(n) * static_cast<std::size_t>(K),
                                 -std::numeric_limits<double>::infinity());
  std::vector<double> bucket_sum(static_cast<std::size_t>(n) * static_cast<std::size_t>(K), 0.0);
  auto accumulate = [&](int i, int k, double logv) {
    const std::size_t b = static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k);
    if (logv == -std::numeric_limits<double>::infinity()) return;
    if (logv > bucket_max[b]) {
      bucket_sum[b] = bucket_sum[b] * std::exp(bucket_max[b] - logv) + 1.0;
      bucket_max[b] = logv;
    } else {
      bucket_sum[b] += std::exp(logv - bucket_max[b]);
    }
  };

  std::vector<int> z(static_cast<std::size_t>(n), 0);
  std::vector<std::int32_t> doc_counts(static_cast<std::size_t>(D) * static_cast<std::size_t>(K));
  std::vector<std::int32_t> trans_counts(static_cast<std::size_t>(K) * static_cast<std::size_t>(K));
  std::vector<std::int32_t> trans_rows(static_cast<std::size_t>(K));

  std::vector<std::int32_t> doc_totals(static_cast<std::size_t>(D));

  for (;;) {
    // Gaussian emissions depend on z only.
    double base = 0.0;
    for (int i = 0; i < n; ++i) {
      base += gtab[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) +
                   static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
    }

    const std::uint32_t x_limit = 1u << n;
    for (std::uint32_t xm = 0; xm < x_limit; ++xm) {
      // Split every utterance onto its path: first utterances and
      // indicator-one draws feed the document tables, the rest feed the
      // transition tables as adjacent pairs.
      int ones = 0;
      std::fill(doc_counts.begin(), doc_counts.end(), 0);
      std::fill(doc_totals.begin(), doc_totals.end(), 0);
      std::fill(trans_counts.begin(), trans_counts.end(), 0);
      std::fill(trans_rows.begin(), trans_rows.end(), 0);
      for (int i = 0; i < n; ++i) {
        if (xm & (1u << i)) ++ones;
        const bool doc_path = layout.pos[static_cast<std::size_t>(i)] == 0 || (xm & (1u << i));
        if (doc_path) {
          const int d = layout.dlg[static_cast<std::size_t>(i)];
          ++doc_counts[static_cast<std::size_t>(d) * static_cast<std::size_t>(K) +
                       static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
          ++doc_totals[static_cast<std::size_t>(d)];
        } else {
          const int zp = z[static_cast<std::size_t>(i) - 1];
          ++trans_counts[static_cast<std::size_t>(zp) * static_cast<std::size_t>(K) +
                         static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
          ++trans_rows[static_cast<std::size_t>(zp)];
        }
      }
      const int zeros = n - ones;
      if ((zeros > 0 && log_one_minus_tau == -std::numeric_limits<double>::infinity()) ||
          (ones > 0 && log_tau == -std::numeric_limits<double>::infinity()))
        continue;

      double ll = base;
      if (zeros > 0) ll += zeros * log_one_minus_tau;
      if (ones > 0) ll += ones * log_tau;
      for (int d = 0; d < D; ++d) {
        ll += lg_doc_tot[0] - lg_doc_tot[static_cast<std::size_t>(doc_totals[static_cast<std::size_t>(d)])];
        for (int k = 0; k < K; ++k) {
          const std::int32_t cnt =
              doc_counts[static_cast<std::size_t>(d) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)];
          if (cnt > 0) {
            ll += lg_doc[static_cast<std::size_t>(k) * static_cast<std::size_t>(C) + static_cast<std::size_t>(cnt)] -
                  lg_doc[static_cast<std::size_t>(k) * static_cast<std::size_t>(C)];
          }
        }
      }
      for (int r = 0; r < K; ++r) {
        const std::int32_t row = trans_rows[static_cast<std::size_t>(r)];
        if (row == 0) continue;
        ll += lg_trans_row[static_cast<std::size_t>(r) * static_cast<std::size_t>(C)] -
              lg_trans_row[static_cast<std::size_t>(r) * static_cast<std::size_t>(C) + static_cast<std::size_t>(row)];
        for (int j = 0; j < K; ++j) {
          const std::int32_t cnt = trans_counts[static_cast<std::size_t>(r) * static_cast<std::size_t>(K) + static_cast<std::size_t>(j)];
          if (cnt > 0) {
            const std::size_t cell = (static_cast<std::size_t>(r) * static_cast<std::size_t>(K) + static_cast<std::size_t>(j)) * static_cast<std::size_t>(C);
            ll += lg_trans[cell + static_cast<std::size_t>(cnt)] - lg_trans[cell];
          }
        }
      }

      // Route this configuration to the utterance (if any) where it is the
      // reference with only that utterance's assignment changed.
      int diff = -2;  // -2: none so far, -1: more than one, >=0: the index
      for (int i = 0; i < n && diff != -1; ++i) {
        const bool zd = z[static_cast<std::size_t>(i)] != ref_z[static_cast<std::size_t>(i)];
        const bool xd = ((xm >> i) & 1u) != (ref_x[static_cast<std::size_t>(i)] ? 1u : 0u);
        if (zd || xd) diff = (diff == -2) ? i : -1;
      }
      if (diff == -1) continue;
      if (diff >= 0) {
        accumulate(diff, z[static_cast<std::size_t>(diff)], ll);
      } else {
        for (int i = 0; i < n; ++i) accumulate(i, z[static_cast<std::size_t>(i)], ll);
      }
    }

    // Next z configuration.
    int pos = 0;
    while (pos < n) {
      if (++z[static_cast<std::size_t>(pos)] < K) break;
      z[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
  }

  std::vector<std::vector<double>> out(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(K)));
  for (int i = 0; i < n; ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k)
      m = std::max(m, bucket_max[static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)]);
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::size_t b = static_cast<std::size_t>(i) * static_cast<std::size_t>(K) + static_cast<std::size_t>(k);
      const double v = bucket_max[b] == -std::numeric_limits<double>::infinity()
                           ? 0.0
                           : bucket_sum[b] * std::exp(bucket_max[b] - m);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = v;
      total += v;
    }
    for (int k = 0; k < K; ++k) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /= total;
  }
  return out;
}

std::vector<int> max_assignment(const std::vector<std::vector<double>>& score) {
  const int n = static_cast<int>(score.size());
  if (n == 0) return {};
  double top = 0.0;
  for (const auto& row : score) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("max_assignment: matrix must be square");
    for (double v : row) top = std::max(top, std::abs(v));
  }

  // Potential-based assignment on costs, 1-indexed with a dummy row 0.
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(n) + 1,
                                        std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          top - score[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];

  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    assign[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return assign;
}

Alignment align_intents(const std::vector<int>& predicted, const std::vector<int>& gold, int intents) {
  if (predicted.size() != gold.size())
    throw ValidationError("align_intents: sequences differ in length");
  std::vector<std::vector<double>> agree(static_cast<std::size_t>(intents),
                                         std::vector<double>(static_cast<std::size_t>(intents), 0.0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p = predicted[i], g = gold[i];
    if (p < 0 || p >= intents || g < 0 || g >= intents)
      throw ValidationError("align_intents: label out of range");
    agree[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)] += 1.0;
  }
  Alignment out;
  out.permutation = max_assignment(agree);
  double hits = 0.0;
  for (int p = 0; p < intents; ++p)
    hits += agree[static_cast<std::size_t>(p)][static_cast<std::size_t>(out.permutation[static_cast<std::size_t>(p)])];
  out.accuracy = predicted.empty() ? 1.0 : hits / static_cast<double>(predicted.size());
  return out;
}

}  // namespace di
