#include "di/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "di/common.hpp"
#include "di/hash.hpp"
#include "di/log.hpp"
#include "json.hpp"

namespace di {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'D', 'I', 'P', 'M'};
constexpr std::uint32_t kVersion = 1;

json tokenizer_to_json(const TokenizerConfig& cfg) {
  json j;
  j["lowercase"] = cfg.lowercase;
  j["strip_punct"] = cfg.strip_punct;
  std::vector<std::string> stop(cfg.stopwords.begin(), cfg.stopwords.end());
  std::sort(stop.begin(), stop.end());
  j["stopwords"] = stop;
  return j;
}

TokenizerConfig tokenizer_from_json(const json& j) {
  TokenizerConfig cfg;
  cfg.lowercase = j.value("lowercase", true);
  cfg.strip_punct = j.value("strip_punct", true);
  for (const auto& w : j.value("stopwords", std::vector<std::string>{})) cfg.stopwords.insert(w);
  return cfg;
}

}  // namespace

void save_model(const FittedModel& model, const std::string& path) {
  json doc;
  doc["hyper"] = {{"intents", model.hyper.intents},
                  {"alpha", model.hyper.alpha},
                  {"alpha_prime", model.hyper.alpha_prime},
                  {"beta", model.hyper.beta},
                  {"tau", model.hyper.tau},
                  {"rho", model.hyper.rho},
                  {"sweeps", model.hyper.sweeps},
                  {"burn_in", model.hyper.burn_in},
                  {"seed", model.hyper.seed},
                  {"variance_floor", model.hyper.variance_floor},
                  {"randomized_order", model.hyper.randomized_order}};

  json intents = json::array();
  for (const auto& intent : model.intents.intents()) {
    json item;
    item["id"] = intent.intent_id;
    if (intent.name) item["name"] = *intent.name;
    item["provenance"] = provenance_name(intent.provenance);
    item["word_probs"] = intent.word_probs;
    intents.push_back(std::move(item));
  }
  doc["intent_set"] = {{"T", model.intents.top_t()}, {"delta", model.intents.delta()}, {"intents", std::move(intents)}};

  json vocab = json::array();
  std::vector<std::int64_t> tf, df;
  for (std::int32_t w = 0; w < model.vocab.size(); ++w) {
    vocab.push_back(model.vocab.word(w));
    tf.push_back(model.vocab.term_freq(w));
    df.push_back(model.vocab.doc_freq(w));
  }
  doc["vocab"] = {{"words", std::move(vocab)}, {"term_freq", tf}, {"doc_freq", df}};
  doc["tokenizer"] = tokenizer_to_json(model.tokenizer);

  doc["gaussians"] = {{"intents", model.gaussians.intents},
                      {"dim", model.gaussians.dim},
                      {"variance_floor", model.gaussians.variance_floor},
                      {"mean", model.gaussians.mean},
                      {"var", model.gaussians.var},
                      {"count", model.gaussians.count}};

  doc["priors"] = {{"doc", model.priors.doc},
                   {"trans", model.priors.trans},
                   {"transfer_used", model.transfer_used}};
  doc["transition"] = model.transition;
  doc["theta"] = model.theta;
  doc["dialogue_ids"] = model.dialogue_ids;
  doc["final_z"] = model.final_z;
  doc["final_x"] = model.final_x;
  doc["log_likelihood_trace"] = model.log_likelihood_trace;
  doc["embedding"] = {{"path", model.embedding_path},
                      {"hash", to_hex(model.embedding_hash)},
                      {"dim", model.embedding_dim}};

  const std::string payload = doc.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t len = payload.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  const std::uint64_t checksum = fnv1a(payload);
  out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
  if (!out) throw std::runtime_error("write failed: " + path);
}

FittedModel load_model(const std::string& path, const std::string& embedding_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("model file " + path + ": corrupt (bad header)");
  if (version != kVersion)
    throw std::runtime_error("model file " + path + ": unsupported version " +
                             std::to_string(version) + " (this build reads version " +
                             std::to_string(kVersion) + ")");
  std::string payload(len, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(len));
  if (!in || in.gcount() != static_cast<std::streamsize>(len))
    throw std::runtime_error("model file " + path + ": corrupt (truncated payload)");
  std::uint64_t checksum = 0;
  in.read(reinterpret_cast<char*>(&checksum), sizeof(checksum));
  if (!in || checksum != fnv1a(payload))
    throw std::runtime_error("model file " + path + ": corrupt (checksum mismatch)");

  json doc;
  try {
    doc = json::parse(payload);
  } catch (const json::exception& e) {
    throw std::runtime_error("model file " + path + ": corrupt payload: " + std::string(e.what()));
  }

  FittedModel model;
  const auto& h = doc["hyper"];
  model.hyper.intents = h["intents"].get<int>();
  model.hyper.alpha = h["alpha"].get<double>();
  model.hyper.alpha_prime = h["alpha_prime"].get<double>();
  model.hyper.beta = h["beta"].get<double>();
  model.hyper.tau = h["tau"].get<double>();
  model.hyper.rho = h["rho"].get<double>();
  model.hyper.sweeps = h["sweeps"].get<int>();
  model.hyper.burn_in = h["burn_in"].get<int>();
  model.hyper.seed = h["seed"].get<std::uint64_t>();
  model.hyper.variance_floor = h["variance_floor"].get<double>();
  model.hyper.randomized_order = h["randomized_order"].get<bool>();

  const auto& vj = doc["vocab"];
  model.vocab = Vocabulary(vj["words"].get<std::vector<std::string>>(),
                           vj["term_freq"].get<std::vector<std::int64_t>>(),
                           vj["doc_freq"].get<std::vector<std::int64_t>>());
  model.tokenizer = tokenizer_from_json(doc["tokenizer"]);

  const auto& is = doc["intent_set"];
  IntentSet set(is["T"].get<int>(), is["delta"].get<double>());
  for (const auto& item : is["intents"]) {
    Intent intent;
    if (item.contains("name")) intent.name = item["name"].get<std::string>();
    intent.provenance = provenance_from(item["provenance"].get<std::string>());
    intent.word_probs = item["word_probs"].get<std::vector<double>>();
    intent.intent_id = set.size();
    set.add(std::move(intent));
  }
  model.intents = std::move(set);

  const auto& g = doc["gaussians"];
  model.gaussians.intents = g["intents"].get<int>();
  model.gaussians.dim = g["dim"].get<int>();
  model.gaussians.variance_floor = g["variance_floor"].get<double>();
  model.gaussians.mean = g["mean"].get<std::vector<double>>();
  model.gaussians.var = g["var"].get<std::vector<double>>();
  model.gaussians.count = g["count"].get<std::vector<std::int64_t>>();
  model.gaussians.inv_var.resize(model.gaussians.var.size());
  model.gaussians.log_norm.assign(static_cast<std::size_t>(model.gaussians.intents), 0.0);
  for (int z = 0; z < model.gaussians.intents; ++z) {
    double log_norm = 0.0;
    for (int d = 0; d < model.gaussians.dim; ++d) {
      const std::size_t idx = static_cast<std::size_t>(z) * static_cast<std::size_t>(model.gaussians.dim) +
                              static_cast<std::size_t>(d);
      model.gaussians.inv_var[idx] = 1.0 / model.gaussians.var[idx];
      log_norm += std::log(2.0 * M_PI * model.gaussians.var[idx]);
    }
    model.gaussians.log_norm[static_cast<std::size_t>(z)] = -0.5 * log_norm;
  }

  model.priors.intents = model.hyper.intents;
  model.priors.doc = doc["priors"]["doc"].get<std::vector<double>>();
  model.priors.trans = doc["priors"]["trans"].get<std::vector<double>>();
  model.transfer_used = doc["priors"]["transfer_used"].get<bool>();
  model.priors.doc_total = 0.0;
  for (double v : model.priors.doc) model.priors.doc_total += v;
  model.priors.trans_row.assign(static_cast<std::size_t>(model.hyper.intents), 0.0);
  for (int r = 0; r < model.hyper.intents; ++r) {
    double row = 0.0;
    for (int c = 0; c < model.hyper.intents; ++c) row += model.priors.trans_cell(r, c);
    model.priors.trans_row[static_cast<std::size_t>(r)] = row;
  }

  model.transition = doc["transition"].get<std::vector<double>>();
  model.theta = doc["theta"].get<std::vector<double>>();
  model.dialogue_ids = doc["dialogue_ids"].get<std::vector<std::string>>();
  model.final_z = doc["final_z"].get<std::vector<int>>();
  model.final_x = doc["final_x"].get<std::vector<std::uint8_t>>();
  model.log_likelihood_trace = doc["log_likelihood_trace"].get<std::vector<double>>();
  model.embedding_path = doc["embedding"]["path"].get<std::string>();
  model.embedding_hash = std::stoull(doc["embedding"]["hash"].get<std::string>(), nullptr, 16);
  model.embedding_dim = doc["embedding"]["dim"].get<int>();

  // Resolve the referenced embedding model.
  std::string emb_path = embedding_override.empty() ? model.embedding_path : embedding_override;
  if (!emb_path.empty()) {
    namespace fs = std::filesystem;
    if (!fs::exists(emb_path)) {
      const fs::path beside = fs::path(path).parent_path() / fs::path(emb_path).filename();
      if (fs::exists(beside)) emb_path = beside.string();
    }
    if (!fs::exists(emb_path))
      throw std::runtime_error("model file " + path + ": referenced embedding model not found: " +
                               emb_path);
    const std::uint64_t got = hash_file(emb_path);
    if (got != model.embedding_hash)
      throw std::runtime_error("model file " + path + ": embedding model hash mismatch for " +
                               emb_path + " (expected " + to_hex(model.embedding_hash) +
                               ", found " + to_hex(got) + ")");
    model.embedding = std::make_shared<EmbeddingModel>(load_embedding_model(emb_path));
  }
  return model;
}

}  // namespace di
