#include "di/intent_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "di/common.hpp"
#include "di/log.hpp"
#include "di/rng.hpp"
#include "json.hpp"

namespace di {

using nlohmann::json;

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::NaiveBayes: return "naive_bayes";
    case Provenance::TopicModel: return "topic_model";
    default: return "transferred";
  }
}

Provenance provenance_from(const std::string& s) {
  if (s == "naive_bayes") return Provenance::NaiveBayes;
  if (s == "topic_model") return Provenance::TopicModel;
  if (s == "transferred") return Provenance::Transferred;
  throw ValidationError("unknown provenance: " + s);
}

std::vector<std::pair<std::int32_t, double>> Intent::top_words(int t) const {
  std::vector<std::pair<std::int32_t, double>> entries;
  entries.reserve(word_probs.size());
  for (std::size_t w = 0; w < word_probs.size(); ++w) {
    if (word_probs[w] > 0.0) entries.emplace_back(static_cast<std::int32_t>(w), word_probs[w]);
  }
  const std::size_t keep = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(t));
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    entries.end(), [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  entries.resize(keep);
  return entries;
}

double weighted_jaccard(const Intent& a, const Intent& b, int top_t) {
  if (top_t < 1) throw ValidationError("top_t must be >= 1");
  const auto ta = a.top_words(top_t);
  const auto tb = b.top_words(top_t);
  if (ta.empty() || tb.empty()) throw ValidationError("weighted_jaccard: empty word distribution");

  std::unordered_map<std::int32_t, double> in_a;
  double sum_a = 0.0;
  for (const auto& [w, p] : ta) {
    in_a.emplace(w, p);
    sum_a += p;
  }
  double sum_b = 0.0;
  std::vector<std::pair<std::int32_t, double>> shared;
  for (const auto& [w, p] : tb) {
    sum_b += p;
    auto it = in_a.find(w);
    if (it != in_a.end()) shared.emplace_back(w, std::min(it->second, p));
  }
  // Sum the shared mass in word-id order so the result is exactly
  // symmetric in the arguments.
  std::sort(shared.begin(), shared.end());
  double shared_min = 0.0;
  for (const auto& [w, p] : shared) shared_min += p;
  const double denom = std::min(sum_a, sum_b) + std::max(sum_a, sum_b) - shared_min;
  return denom > 0.0 ? shared_min / denom : 0.0;
}

AddOutcome IntentSet::add(Intent candidate) {
  AddOutcome out;
  double best = -1.0;
  std::int32_t best_id = -1;
  for (const auto& member : intents_) {
    const double sim = weighted_jaccard(member, candidate, top_t_);
    if (sim > best) {
      best = sim;
      best_id = member.intent_id;
    }
  }
  if (best_id >= 0 && best >= delta_) {
    out.added = false;
    out.intent_id = best_id;
    out.similarity = best;
    return out;
  }
  candidate.intent_id = static_cast<std::int32_t>(intents_.size());
  out.added = true;
  out.intent_id = candidate.intent_id;
  out.similarity = best < 0.0 ? 0.0 : best;
  intents_.push_back(std::move(candidate));
  return out;
}

std::vector<Intent> train_naive_bayes(const Corpus& corpus, const Vocabulary& vocab,
                                      double smoothing) {
  if (smoothing <= 0.0) throw ValidationError("naive bayes smoothing must be > 0");
  const std::int32_t V = vocab.size();

  // label -> per-word counts; std::map fixes the output order.
  std::map<std::string, std::vector<std::int64_t>> counts;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      if (!u.gold_intent || u.gold_intent->empty())
        throw ValidationError("train_naive_bayes: unlabeled utterance in dialogue \"" +
                              dlg.dialogue_id + "\"");
      auto& row = counts[*u.gold_intent];
      if (row.empty()) row.assign(static_cast<std::size_t>(V), 0);
      for (std::int32_t t : u.tokens) {
        if (t >= 0) ++row[static_cast<std::size_t>(t)];
      }
    }
  }
  if (counts.empty()) throw ValidationError("train_naive_bayes: corpus has no utterances");

  std::vector<Intent> out;
  out.reserve(counts.size());
  std::int32_t next_id = 0;
  for (const auto& [label, row] : counts) {
    std::int64_t total = 0;
    for (std::int64_t c : row) total += c;
    Intent intent;
    intent.intent_id = next_id++;
    intent.name = label;
    intent.provenance = Provenance::NaiveBayes;
    intent.word_probs.resize(static_cast<std::size_t>(V));
    const double denom = static_cast<double>(total) + smoothing * static_cast<double>(V);
    for (std::int32_t w = 0; w < V; ++w) {
      intent.word_probs[static_cast<std::size_t>(w)] =
          (static_cast<double>(row[static_cast<std::size_t>(w)]) + smoothing) / denom;
    }
    out.push_back(std::move(intent));
  }
  return out;
}

std::vector<Intent> train_topic_model(const Corpus& corpus, const Vocabulary& vocab,
                                      const LdaConfig& cfg) {
  if (cfg.topics < 1) throw ValidationError("lda: topics must be >= 1");
  if (cfg.sweeps < 1) throw ValidationError("lda: sweeps must be >= 1");
  if (cfg.alpha <= 0.0 || cfg.beta <= 0.0) throw ValidationError("lda: priors must be > 0");
  if (corpus.dialogues.empty()) throw ValidationError("lda: empty corpus");
  const int K = cfg.topics;
  const std::int32_t V = vocab.size();

  // One token bag per dialogue.
  std::vector<std::vector<std::int32_t>> docs;
  docs.reserve(corpus.dialogues.size());
  for (const auto& dlg : corpus.dialogues) {
    std::vector<std::int32_t> bag;
    for (const auto& u : dlg.utterances) {
      for (std::int32_t t : u.tokens) {
        if (t >= 0) bag.push_back(t);
      }
    }
    docs.push_back(std::move(bag));
  }

  const std::size_t D = docs.size();
  std::vector<std::int32_t> n_dk(D * static_cast<std::size_t>(K), 0);
  std::vector<std::int32_t> n_kw(static_cast<std::size_t>(K) * static_cast<std::size_t>(V), 0);
  std::vector<std::int32_t> n_k(static_cast<std::size_t>(K), 0);
  std::vector<std::vector<std::int32_t>> z(D);

  Rng rng(cfg.seed);
  for (std::size_t d = 0; d < D; ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
      z[d][i] = k;
      ++n_dk[d * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)];
      ++n_kw[static_cast<std::size_t>(k) * static_cast<std::size_t>(V) +
             static_cast<std::size_t>(docs[d][i])];
      ++n_k[static_cast<std::size_t>(k)];
    }
  }

  std::vector<double> w(static_cast<std::size_t>(K));
  const double vbeta = static_cast<double>(V) * cfg.beta;
  std::vector<double> phi_acc;
  int acc_sweeps = 0;
  const int avg_from = cfg.sweeps - std::max(1, cfg.average_last) + 1;

  for (int sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const std::int32_t word = docs[d][i];
        const int old_k = z[d][i];
        --n_dk[d * static_cast<std::size_t>(K) + static_cast<std::size_t>(old_k)];
        --n_kw[static_cast<std::size_t>(old_k) * static_cast<std::size_t>(V) +
               static_cast<std::size_t>(word)];
        --n_k[static_cast<std::size_t>(old_k)];
        for (int k = 0; k < K; ++k) {
          w[static_cast<std::size_t>(k)] =
              (n_dk[d * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] + cfg.alpha) *
              (n_kw[static_cast<std::size_t>(k) * static_cast<std::size_t>(V) +
                    static_cast<std::size_t>(word)] +
               cfg.beta) /
              (n_k[static_cast<std::size_t>(k)] + vbeta);
        }
        const int new_k = rng.categorical(w.data(), K);
        z[d][i] = new_k;
        ++n_dk[d * static_cast<std::size_t>(K) + static_cast<std::size_t>(new_k)];
        ++n_kw[static_cast<std::size_t>(new_k) * static_cast<std::size_t>(V) +
               static_cast<std::size_t>(word)];
        ++n_k[static_cast<std::size_t>(new_k)];
      }
    }
    if (sweep >= avg_from) {
      if (phi_acc.empty()) phi_acc.assign(n_kw.size(), 0.0);
      for (int k = 0; k < K; ++k) {
        const double denom = n_k[static_cast<std::size_t>(k)] + vbeta;
        for (std::int32_t v = 0; v < V; ++v) {
          const std::size_t idx = static_cast<std::size_t>(k) * static_cast<std::size_t>(V) +
                                  static_cast<std::size_t>(v);
          phi_acc[idx] += (n_kw[idx] + cfg.beta) / denom;
        }
      }
      ++acc_sweeps;
    }
  }

  std::vector<Intent> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    Intent intent;
    intent.intent_id = k;
    intent.provenance = Provenance::TopicModel;
    intent.word_probs.resize(static_cast<std::size_t>(V));
    for (std::int32_t v = 0; v < V; ++v) {
      intent.word_probs[static_cast<std::size_t>(v)] =
          phi_acc[static_cast<std::size_t>(k) * static_cast<std::size_t>(V) +
                  static_cast<std::size_t>(v)] /
          static_cast<double>(acc_sweeps);
    }
    out.push_back(std::move(intent));
  }
  return out;
}

void save_intent_set(const IntentSet& set, const Vocabulary& vocab, const std::string& path) {
  json doc;
  doc["version"] = 1;
  doc["T"] = set.top_t();
  doc["delta"] = set.delta();
  json intents = json::array();
  for (const auto& intent : set.intents()) {
    json item;
    item["id"] = intent.intent_id;
    if (intent.name) item["name"] = *intent.name;
    item["provenance"] = provenance_name(intent.provenance);
    json dist = json::object();
    for (std::size_t w = 0; w < intent.word_probs.size(); ++w) {
      if (intent.word_probs[w] > 0.0)
        dist[vocab.word(static_cast<std::int32_t>(w))] = intent.word_probs[w];
    }
    item["word_dist"] = std::move(dist);
    intents.push_back(std::move(item));
  }
  doc["intents"] = std::move(intents);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

IntentSet load_intent_set(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open intent set: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("intent set " + path + ": malformed JSON: " + e.what());
  }
  if (!doc.contains("version") || doc["version"].get<int>() != 1)
    throw ValidationError("intent set " + path + ": unsupported version");

  IntentSet set(doc.value("T", 20), doc.value("delta", 0.5));
  std::size_t dropped_words = 0;
  for (const auto& item : doc["intents"]) {
    Intent intent;
    if (item.contains("name")) intent.name = item["name"].get<std::string>();
    intent.provenance = provenance_from(item.value("provenance", "topic_model"));
    intent.word_probs.assign(static_cast<std::size_t>(vocab.size()), 0.0);
    double mass = 0.0;
    for (const auto& [word, prob] : item["word_dist"].items()) {
      const std::int32_t id = vocab.id(word);
      if (id < 0) {
        ++dropped_words;
        continue;
      }
      intent.word_probs[static_cast<std::size_t>(id)] = prob.get<double>();
      mass += prob.get<double>();
    }
    if (mass <= 0.0)
      throw ValidationError("intent set " + path + ": an intent has no in-vocabulary words");
    for (auto& p : intent.word_probs) p /= mass;
    intent.intent_id = set.size();
    // Re-adding through the gate re-checks compactness of the stored set.
    AddOutcome got = set.add(std::move(intent));
    if (!got.added)
      throw ValidationError("intent set " + path + ": stored set violates compactness");
  }
  if (dropped_words > 0)
    log::warn("intent set ", path, ": dropped ", dropped_words, " out-of-vocabulary words");
  return set;
}

}  // namespace di
