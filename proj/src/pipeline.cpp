#include "di/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "di/baseline.hpp"
#include "di/common.hpp"
#include "di/embedding.hpp"
#include "di/eval.hpp"
#include "di/hash.hpp"
#include "di/inference.hpp"
#include "di/intent_set.hpp"
#include "di/log.hpp"
#include "di/model_io.hpp"
#include "di/transfer.hpp"

namespace di {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string(what) + " not found: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + " " + path + ": malformed JSON: " + e.what());
  }
  return doc;
}

struct Manifest {
  json entries = json::object();
  std::string path;

  void load(const std::string& p) {
    path = p;
    if (fs::exists(p)) {
      try {
        entries = load_json(p, "manifest");
      } catch (const std::exception&) {
        entries = json::object();
      }
    }
  }
  void save() const {
    std::ofstream out(path, std::ios::binary);
    out << entries.dump(2) << '\n';
  }
  bool fresh(const std::string& stage, const std::string& key, const std::string& artifact) const {
    if (!entries.contains(stage)) return false;
    const auto& e = entries[stage];
    return e.value("key", "") == key && fs::exists(artifact) &&
           e.value("output_hash", "") == to_hex(hash_file(artifact));
  }
  void record(const std::string& stage, const std::string& key, const std::string& artifact) {
    entries[stage] = {{"key", key},
                      {"artifact", fs::path(artifact).filename().string()},
                      {"output_hash", to_hex(hash_file(artifact))}};
  }
};

std::string stage_key(const json& params, const std::vector<std::string>& input_files) {
  std::uint64_t h = fnv1a(params.dump());
  for (const auto& f : input_files) {
    h = fnv1a(f, h);
    std::uint64_t fh = hash_file(f);
    h = fnv1a(&fh, sizeof(fh), h);
  }
  return to_hex(h);
}

}  // namespace

json run_pipeline(const std::string& config_path) {
  const json cfg = load_json(config_path, "pipeline config");

  // ---- validate everything before doing any work ----
  const std::uint64_t seed = cfg.value("seed", 1ull);
  if (!cfg.contains("out_dir") || !cfg["out_dir"].is_string())
    throw ValidationError("pipeline config: missing \"out_dir\"");
  const std::string out_dir = cfg["out_dir"].get<std::string>();
  if (!cfg.contains("corpus") || !cfg["corpus"].contains("train"))
    throw ValidationError("pipeline config: missing corpus.train");
  const json corpus_cfg = cfg["corpus"];
  const json intents_cfg = cfg.value("intents", json::object());
  const json emb_cfg = cfg.value("embedding", json::object());
  const json transfer_cfg = cfg.value("transfer", json::object());
  const json fit_cfg = cfg.value("fit", json::object());
  const json parse_cfg = cfg.value("parse", json::object());
  const json eval_cfg = cfg.value("eval", json::object());

  const std::string train_path = corpus_cfg["train"].get<std::string>();
  const std::string labeled_path = corpus_cfg.value("labeled", "");
  const bool transfer_enabled = transfer_cfg.value("enabled", false);

  Hyperparams hyper;
  hyper.alpha = fit_cfg.value("alpha", 0.0);
  hyper.alpha_prime = fit_cfg.value("alpha_prime", 0.1);
  hyper.beta = fit_cfg.value("beta", 0.01);
  hyper.tau = fit_cfg.value("tau", 0.5);
  hyper.rho = fit_cfg.value("rho", 0.0);
  hyper.sweeps = fit_cfg.value("sweeps", 200);
  hyper.burn_in = fit_cfg.value("burn_in", 100);
  hyper.variance_floor = fit_cfg.value("variance_floor", 1e-4);
  hyper.seed = seed;
  if (hyper.tau < 0.0 || hyper.tau > 1.0)
    throw ValidationError("pipeline config: fit.tau must be in [0, 1]");
  if (hyper.sweeps < 1 || hyper.burn_in < 0 || hyper.burn_in >= hyper.sweeps)
    throw ValidationError("pipeline config: fit.burn_in must be < fit.sweeps");

  const bool use_nb = intents_cfg.value("use_naive_bayes", !labeled_path.empty());
  const int k_lda = intents_cfg.value("k_lda", 0);
  if (use_nb && labeled_path.empty())
    throw ValidationError("pipeline config: naive bayes intents need corpus.labeled");
  if (!use_nb && k_lda <= 0 && !intents_cfg.contains("transfer_from"))
    throw ValidationError("pipeline config: no intent source configured");
  if (transfer_enabled && labeled_path.empty() && !transfer_cfg.contains("few_shot"))
    throw ValidationError("pipeline config: transfer needs a labeled corpus");

  const std::string parse_input =
      parse_cfg.value("input", eval_cfg.value("gold", std::string()));
  if (parse_input.empty())
    throw ValidationError("pipeline config: parse.input or eval.gold required");
  for (const std::string& p : {train_path, parse_input}) {
    if (!fs::exists(p)) throw ValidationError("pipeline config: input file not found: " + p);
  }
  if (!labeled_path.empty() && !fs::exists(labeled_path))
    throw ValidationError("pipeline config: input file not found: " + labeled_path);

  fs::create_directories(out_dir);
  Manifest manifest;
  manifest.load((fs::path(out_dir) / "manifest.json").string());

  TokenizerConfig tok;
  tok.lowercase = corpus_cfg.value("lowercase", true);
  tok.strip_punct = corpus_cfg.value("strip_punct", true);
  const int min_count = corpus_cfg.value("min_count", 1);

  // ---- corpus ----
  Corpus train = ingest_jsonl(train_path, SchemaMode::Unlabeled, tok);
  Vocabulary vocab = build_vocabulary(train, min_count);
  index_tokens(train, vocab);
  Corpus labeled;
  if (!labeled_path.empty()) {
    labeled = ingest_jsonl(labeled_path, SchemaMode::Labeled, tok);
    index_tokens(labeled, vocab);
  }

  // ---- intent set ----
  const std::string intents_path = (fs::path(out_dir) / "intents.json").string();
  std::vector<std::string> intent_inputs = {train_path};
  if (!labeled_path.empty()) intent_inputs.push_back(labeled_path);
  if (intents_cfg.contains("transfer_from") && !intents_cfg["transfer_from"].is_null())
    intent_inputs.push_back(intents_cfg["transfer_from"].get<std::string>());
  json intent_params = intents_cfg;
  intent_params["min_count"] = min_count;
  intent_params["seed"] = seed;
  const std::string intents_key = stage_key(intent_params, intent_inputs);

  IntentSet intent_set(intents_cfg.value("top_words", 20), intents_cfg.value("delta", 0.5));
  if (manifest.fresh("intents", intents_key, intents_path)) {
    log::info("pipeline: intents cached");
    intent_set = load_intent_set(intents_path, vocab);
  } else {
    if (use_nb) {
      for (auto& intent : train_naive_bayes(labeled, vocab, intents_cfg.value("nb_smoothing", 1.0))) {
        intent_set.add(std::move(intent));
      }
    }
    if (k_lda > 0) {
      LdaConfig lda;
      lda.topics = k_lda;
      lda.alpha = intents_cfg.value("lda_alpha", 0.1);
      lda.beta = intents_cfg.value("lda_beta", 0.01);
      lda.sweeps = intents_cfg.value("lda_sweeps", 100);
      lda.seed = Rng::mix(seed, 0x1da);
      for (auto& intent : train_topic_model(train, vocab, lda)) {
        intent_set.add(std::move(intent));
      }
    }
    if (intents_cfg.contains("transfer_from") && !intents_cfg["transfer_from"].is_null()) {
      IntentSet transferred =
          load_intent_set(intents_cfg["transfer_from"].get<std::string>(), vocab);
      for (const auto& intent : transferred.intents()) {
        Intent copy = intent;
        copy.provenance = Provenance::Transferred;
        intent_set.add(std::move(copy));
      }
    }
    save_intent_set(intent_set, vocab, intents_path);
    manifest.record("intents", intents_key, intents_path);
  }
  if (intent_set.size() == 0) throw ValidationError("pipeline: intent set came out empty");

  // ---- embeddings ----
  const std::string emb_path = (fs::path(out_dir) / "emb.bin").string();
  json emb_params = emb_cfg;
  emb_params["min_count"] = min_count;
  emb_params["seed"] = seed;
  std::vector<std::string> emb_inputs = {train_path};
  if (emb_cfg.contains("pretrained") && !emb_cfg["pretrained"].is_null())
    emb_inputs.push_back(emb_cfg["pretrained"].get<std::string>());
  const std::string emb_key = stage_key(emb_params, emb_inputs);

  EmbeddingModel emb_model;
  if (manifest.fresh("embedding", emb_key, emb_path)) {
    log::info("pipeline: embeddings cached");
    emb_model = load_embedding_model(emb_path);
  } else {
    if (emb_cfg.contains("pretrained") && !emb_cfg["pretrained"].is_null()) {
      emb_model = load_word_vectors_text(emb_cfg["pretrained"].get<std::string>(), vocab);
    } else {
      EmbeddingConfig ec;
      ec.dim = emb_cfg.value("dim", 16);
      ec.epochs = emb_cfg.value("epochs", 5);
      ec.window = emb_cfg.value("window", 5);
      ec.negatives = emb_cfg.value("negatives", 5);
      ec.learning_rate = emb_cfg.value("learning_rate", 0.05);
      ec.seed = Rng::mix(seed, 0xe3b);
      emb_model = train_embeddings(train, vocab, ec);
    }
    save_embedding_model(emb_model, emb_path);
    manifest.record("embedding", emb_key, emb_path);
  }

  // ---- fit (with optional few-shot priors) ----
  hyper.intents = intent_set.size();
  hyper.validate();
  const std::string model_path = (fs::path(out_dir) / "model.bin").string();
  json fit_params = fit_cfg;
  fit_params["transfer"] = transfer_cfg;
  fit_params["seed"] = seed;
  fit_params["intents_key"] = intents_key;
  fit_params["embedding_key"] = emb_key;
  const std::string model_key = stage_key(fit_params, {train_path});

  FittedModel model;
  if (manifest.fresh("model", model_key, model_path)) {
    log::info("pipeline: model cached");
    model = load_model(model_path);
  } else {
    PriorSpec priors;
    const PriorSpec* priors_ptr = nullptr;
    if (transfer_enabled) {
      const std::string few_shot = transfer_cfg.value("few_shot", labeled_path);
      Corpus few = ingest_jsonl(few_shot, SchemaMode::Labeled, tok);
      index_tokens(few, vocab);
      std::map<std::string, int> label_map;
      for (const auto& intent : intent_set.intents()) {
        if (intent.name) label_map[*intent.name] = intent.intent_id;
      }
      TransferPriors tp = estimate_priors(few, label_map, hyper.intents,
                                          transfer_cfg.value("smoothing", 1.0),
                                          transfer_cfg.value("prior_strength", 1.0));
      priors = apply_priors(hyper, tp, transfer_cfg.value("scalar_rows", false));
      priors_ptr = &priors;
    }
    UtteranceEmbeddings train_emb = embed_corpus(emb_model, train);
    model = fit(train, intent_set, train_emb, hyper, priors_ptr);
    model.vocab = vocab;
    model.tokenizer = tok;
    model.embedding_path = emb_path;
    model.embedding_hash = hash_file(emb_path);
    model.embedding = std::make_shared<EmbeddingModel>(emb_model);
    save_model(model, model_path);
    manifest.record("model", model_key, model_path);
  }

  // ---- parse ----
  const std::string parsed_path = (fs::path(out_dir) / "parsed.jsonl").string();
  json parse_params = parse_cfg;
  parse_params["seed"] = seed;
  parse_params["model_key"] = model_key;
  const std::string parsed_key = stage_key(parse_params, {parse_input});
  const int decode_sweeps = parse_cfg.value("decode_sweeps", 50);

  Corpus to_parse = ingest_jsonl(parse_input, SchemaMode::Unlabeled, model.tokenizer);
  index_tokens(to_parse, model.vocab);
  std::vector<int> predictions;
  if (manifest.fresh("parsed", parsed_key, parsed_path)) {
    log::info("pipeline: parse cached");
    const json parsed = [&] {
      json arr = json::array();
      std::ifstream in(parsed_path);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) arr.push_back(json::parse(line));
      }
      return arr;
    }();
    for (const auto& dlg : parsed) {
      for (const auto& turn : dlg["turns"]) predictions.push_back(turn["intent_id"].get<int>());
    }
  } else {
    std::ofstream out(parsed_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + parsed_path);
    std::size_t dlg_index = 0;
    for (const auto& dlg : to_parse.dialogues) {
      UtteranceEmbeddings demb;
      demb.dim = model.embedding->dim();
      demb.count = dlg.utterances.size();
      for (const auto& u : dlg.utterances) {
        const auto e = model.embedding->embed(u.tokens);
        demb.data.insert(demb.data.end(), e.begin(), e.end());
      }
      const auto turns =
          parse(model, dlg, demb, decode_sweeps, Rng::mix(seed, 0xabcd00 + dlg_index));
      json turns_json = json::array();
      for (std::size_t i = 0; i < turns.size(); ++i) {
        const auto& u = dlg.utterances[i];
        json t;
        t["speaker"] = speaker_name(u.speaker);
        t["text"] = u.raw_text;
        if (u.gold_intent) t["intent_gold"] = *u.gold_intent;
        const auto& intent = model.intents[turns[i].intent];
        t["intent"] = intent.name ? *intent.name : ("intent_" + std::to_string(turns[i].intent));
        t["intent_id"] = turns[i].intent;
        t["confidence"] = turns[i].confidence;
        turns_json.push_back(std::move(t));
        predictions.push_back(turns[i].intent);
      }
      json obj;
      obj["dialogue_id"] = dlg.dialogue_id;
      obj["turns"] = std::move(turns_json);
      out << obj.dump() << '\n';
      ++dlg_index;
    }
    out.close();
    manifest.record("parsed", parsed_key, parsed_path);
  }

  // ---- evaluate ----
  json report;
  report["config_hash"] = to_hex(fnv1a(cfg.dump()));
  report["seed"] = seed;
  report["stages"] = manifest.entries;
  report["intent_count"] = intent_set.size();

  if (eval_cfg.contains("gold")) {
    const std::string gold_path = eval_cfg["gold"].get<std::string>();
    Corpus gold = ingest_jsonl(gold_path, SchemaMode::Labeled, model.tokenizer);
    std::vector<int> gold_ids;
    const EvalMode mode = eval_cfg.value("mode", "aligned") == std::string("direct")
                              ? EvalMode::Direct
                              : EvalMode::Aligned;
    std::map<std::string, int> label_map;
    for (const auto& intent : intent_set.intents()) {
      if (intent.name) label_map[*intent.name] = intent.intent_id;
    }
    int next_id = intent_set.size();
    for (const auto& dlg : gold.dialogues) {
      for (const auto& u : dlg.utterances) {
        auto it = label_map.find(*u.gold_intent);
        if (it == label_map.end()) {
          if (mode == EvalMode::Direct)
            throw ValidationError("eval: gold label \"" + *u.gold_intent +
                                  "\" has no intent mapping (use aligned mode)");
          it = label_map.emplace(*u.gold_intent, next_id++).first;
        }
        gold_ids.push_back(it->second);
      }
    }
    const int k_eval = std::max<int>(intent_set.size(), next_id);
    EvalReport eval_report = evaluate(predictions, gold_ids, k_eval, mode);
    eval_report.seed = seed;
    eval_report.config_hash = report["config_hash"].get<std::string>();
    eval_report.corpus_hash = to_hex(hash_file(gold_path));
    report["eval"] = eval_report.to_json();
  }

  manifest.save();
  std::ofstream rep((fs::path(out_dir) / "report.json").string(), std::ios::binary);
  rep << report.dump(2) << '\n';
  return report;
}

}  // namespace di
