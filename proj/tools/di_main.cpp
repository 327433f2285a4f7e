// di: dialogue intent parser CLI.
//
// Verbs: corpus stats, intents build, embed train, synth, fit, parse,
// eval, run. Exit codes: 0 success, 1 validation error, 2 runtime error.
// DI_LOG=error|warn|info|debug controls verbosity.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "di/baseline.hpp"
#include "di/common.hpp"
#include "di/embedding.hpp"
#include "di/eval.hpp"
#include "di/hash.hpp"
#include "di/inference.hpp"
#include "di/intent_set.hpp"
#include "di/log.hpp"
#include "di/model_io.hpp"
#include "di/pipeline.hpp"
#include "di/synth.hpp"
#include "di/transfer.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CorpusStatsArgs {
  std::string path;
  int min_count = 1;
};

void cmd_corpus_stats(const CorpusStatsArgs& args) {
  di::Corpus corpus = di::ingest_jsonl(args.path, di::SchemaMode::Unlabeled);
  std::size_t labeled = 0;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      if (u.gold_intent) ++labeled;
    }
  }
  std::cout << "dialogues:  " << corpus.dialogues.size() << "\n"
            << "utterances: " << corpus.utterance_count() << "\n"
            << "tokens:     " << corpus.token_count() << "\n"
            << "labeled:    " << labeled << "\n";
  if (!corpus.dialogues.empty()) {
    const di::Vocabulary vocab = di::build_vocabulary(corpus, args.min_count);
    std::cout << "vocabulary: " << vocab.size() << " (min_count " << args.min_count << ")\n";
  }
}

struct IntentsArgs {
  std::string labeled, unlabeled, transfer_from, out;
  int k_lda = 0;
  int top_words = 20;
  double delta = 0.5;
  double nb_smoothing = 1.0;
  double lda_alpha = 0.1, lda_beta = 0.01;
  int lda_sweeps = 100;
  int min_count = 1;
  std::uint64_t seed = 1;
};

void cmd_intents_build(const IntentsArgs& args) {
  if (args.labeled.empty() && args.unlabeled.empty() && args.transfer_from.empty())
    throw di::ValidationError("intents build: need --labeled, --unlabeled, or --transfer-from");

  di::Corpus base;
  if (!args.unlabeled.empty()) {
    base = di::ingest_jsonl(args.unlabeled, di::SchemaMode::Unlabeled);
  }
  di::Corpus labeled;
  if (!args.labeled.empty()) {
    labeled = di::ingest_jsonl(args.labeled, di::SchemaMode::Labeled);
  }

  // Vocabulary over everything the sources will see.
  di::Corpus merged = base;
  for (const auto& dlg : labeled.dialogues) merged.dialogues.push_back(dlg);
  if (merged.dialogues.empty())
    throw di::ValidationError("intents build: no corpus data given");
  const di::Vocabulary vocab = di::build_vocabulary(merged, args.min_count);
  di::index_tokens(base, vocab);
  di::index_tokens(labeled, vocab);

  di::IntentSet set(args.top_words, args.delta);
  if (!args.labeled.empty()) {
    for (auto& intent : di::train_naive_bayes(labeled, vocab, args.nb_smoothing)) {
      const auto got = set.add(std::move(intent));
      if (!got.added)
        di::log::info("intents: dropped redundant labeled intent (similarity ",
                      got.similarity, " vs intent ", got.intent_id, ")");
    }
  }
  if (args.k_lda > 0) {
    if (base.dialogues.empty())
      throw di::ValidationError("intents build: --k-lda needs --unlabeled data");
    di::LdaConfig lda;
    lda.topics = args.k_lda;
    lda.alpha = args.lda_alpha;
    lda.beta = args.lda_beta;
    lda.sweeps = args.lda_sweeps;
    lda.seed = args.seed;
    for (auto& intent : di::train_topic_model(base, vocab, lda)) {
      const auto got = set.add(std::move(intent));
      if (!got.added)
        di::log::info("intents: dropped redundant topic (similarity ", got.similarity,
                      " vs intent ", got.intent_id, ")");
    }
  }
  if (!args.transfer_from.empty()) {
    const di::IntentSet transferred = di::load_intent_set(args.transfer_from, vocab);
    for (const auto& intent : transferred.intents()) {
      di::Intent copy = intent;
      copy.provenance = di::Provenance::Transferred;
      const auto got = set.add(std::move(copy));
      if (!got.added)
        di::log::info("intents: dropped redundant transferred intent (similarity ",
                      got.similarity, " vs intent ", got.intent_id, ")");
    }
  }
  if (set.size() == 0) throw di::ValidationError("intents build: produced an empty intent set");
  di::save_intent_set(set, vocab, args.out);
  std::cout << "intent set: " << set.size() << " intents -> " << args.out << "\n";
}

struct EmbedArgs {
  std::string corpus, out, pretrained;
  int dim = 64, epochs = 10, window = 5, negatives = 5;
  double learning_rate = 0.05;
  int min_count = 1;
  std::uint64_t seed = 1;
};

void cmd_embed_train(const EmbedArgs& args) {
  di::Corpus corpus = di::ingest_jsonl(args.corpus, di::SchemaMode::Unlabeled);
  const di::Vocabulary vocab = di::build_vocabulary(corpus, args.min_count);
  di::index_tokens(corpus, vocab);
  di::EmbeddingModel model;
  if (!args.pretrained.empty()) {
    model = di::load_word_vectors_text(args.pretrained, vocab);
  } else {
    di::EmbeddingConfig cfg;
    cfg.dim = args.dim;
    cfg.epochs = args.epochs;
    cfg.window = args.window;
    cfg.negatives = args.negatives;
    cfg.learning_rate = args.learning_rate;
    cfg.seed = args.seed;
    model = di::train_embeddings(corpus, vocab, cfg);
  }
  di::save_embedding_model(model, args.out);
  std::cout << "embeddings: " << model.vocab_size() << " words x " << model.dim() << " -> "
            << args.out << "\n";
}

struct SynthArgs {
  std::string out, truth_out, emb_out;
  int k = 5, vocab = 200, dialogues = 500, dim = 16;
  double tau = 0.5;
  double separation = 6.0, cycle_mass = 0.6, word_background = 0.0, doc_alpha = 1.0;
  int min_utts = 8, max_utts = 15, min_words = 3, max_words = 8;
  std::uint64_t seed = 1;
};

void cmd_synth(const SynthArgs& args) {
  di::TruthParams truth =
      di::TruthParams::make(args.k, args.vocab, args.dialogues, args.dim, args.tau,
                            args.separation, args.cycle_mass, args.seed, args.word_background);
  truth.doc_alpha = args.doc_alpha;
  truth.min_utterances = args.min_utts;
  truth.max_utterances = args.max_utts;
  truth.min_words = args.min_words;
  truth.max_words = args.max_words;
  const di::SynthData data = di::generate_corpus(truth);
  di::write_jsonl(data.corpus, args.out);
  if (!args.truth_out.empty()) di::save_truth(truth, args.truth_out);
  if (!args.emb_out.empty()) {
    std::ofstream out(args.emb_out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + args.emb_out);
    for (std::size_t i = 0; i < data.embeddings.count; ++i) {
      for (int c = 0; c < data.embeddings.dim; ++c) {
        if (c) out << ' ';
        out << data.embeddings.row(i)[c];
      }
      out << '\n';
    }
  }
  std::cout << "synth: " << data.corpus.dialogues.size() << " dialogues, "
            << data.corpus.utterance_count() << " utterances -> " << args.out << "\n";
}

struct FitArgs {
  std::string corpus, intents, emb, out, few_shot, utt_emb;
  double tau = 0.5, alpha = 0.0, alpha_prime = 0.1, beta = 0.01, rho = 0.0;
  double variance_floor = 1e-4;
  int sweeps = 200, burn_in = 100;
  double prior_strength = 1.0, transfer_smoothing = 1.0;
  int min_count = 1;
  std::uint64_t seed = 1;
};

void cmd_fit(const FitArgs& args) {
  di::Corpus corpus = di::ingest_jsonl(args.corpus, di::SchemaMode::Unlabeled);
  if (corpus.dialogues.empty()) throw di::ValidationError("fit: corpus is empty");
  const di::Vocabulary vocab = di::build_vocabulary(corpus, args.min_count);
  di::index_tokens(corpus, vocab);
  const di::IntentSet intents = di::load_intent_set(args.intents, vocab);

  di::Hyperparams hyper;
  hyper.intents = intents.size();
  hyper.alpha = args.alpha;
  hyper.alpha_prime = args.alpha_prime;
  hyper.beta = args.beta;
  hyper.tau = args.tau;
  hyper.rho = args.rho;
  hyper.sweeps = args.sweeps;
  hyper.burn_in = args.burn_in;
  hyper.variance_floor = args.variance_floor;
  hyper.seed = args.seed;
  hyper.validate();

  di::EmbeddingModel emb_model;
  di::UtteranceEmbeddings emb;
  if (!args.utt_emb.empty()) {
    // One whitespace-separated vector per utterance, corpus order.
    std::ifstream in(args.utt_emb);
    if (!in) throw di::ValidationError("fit: cannot open --utt-emb file: " + args.utt_emb);
    std::string line;
    std::vector<double> vals;
    int dim = -1;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      double v;
      int n = 0;
      while (ls >> v) {
        vals.push_back(v);
        ++n;
      }
      if (dim < 0) dim = n;
      if (n != dim) throw di::ValidationError("fit: inconsistent --utt-emb dimensions");
    }
    emb.dim = dim;
    emb.data = std::move(vals);
    emb.count = dim > 0 ? emb.data.size() / static_cast<std::size_t>(dim) : 0;
  } else {
    if (args.emb.empty()) throw di::ValidationError("fit: --emb or --utt-emb required");
    emb_model = di::load_embedding_model(args.emb);
    if (emb_model.vocab_size() != vocab.size())
      throw di::ValidationError("fit: embedding vocabulary size (" +
                                std::to_string(emb_model.vocab_size()) +
                                ") differs from corpus vocabulary (" +
                                std::to_string(vocab.size()) + ")");
    emb = di::embed_corpus(emb_model, corpus);
  }

  di::PriorSpec priors;
  const di::PriorSpec* priors_ptr = nullptr;
  if (!args.few_shot.empty()) {
    di::Corpus few = di::ingest_jsonl(args.few_shot, di::SchemaMode::Labeled);
    di::index_tokens(few, vocab);
    std::map<std::string, int> label_map;
    for (const auto& intent : intents.intents()) {
      if (intent.name) label_map[*intent.name] = intent.intent_id;
    }
    const di::TransferPriors tp = di::estimate_priors(few, label_map, hyper.intents,
                                                      args.transfer_smoothing, args.prior_strength);
    priors = di::apply_priors(hyper, tp);
    priors_ptr = &priors;
  }

  di::FittedModel model = di::fit(corpus, intents, emb, hyper, priors_ptr);
  model.vocab = vocab;
  model.tokenizer = corpus.tokenizer;
  if (!args.emb.empty()) {
    model.embedding_path = args.emb;
    model.embedding_hash = di::hash_file(args.emb);
  }
  di::save_model(model, args.out);
  std::cout << "model: K=" << hyper.intents << ", " << corpus.dialogues.size()
            << " dialogues, " << args.sweeps << " sweeps -> " << args.out << "\n";
}

struct ParseArgs {
  std::string model, input, out, emb_override;
  int decode_sweeps = 50;
  std::uint64_t seed = 1;
};

void cmd_parse(const ParseArgs& args) {
  const di::FittedModel model = di::load_model(args.model, args.emb_override);
  if (!model.embedding)
    throw di::ValidationError("parse: model carries no embedding reference; pass --emb");
  di::Corpus corpus = di::ingest_jsonl(args.input, di::SchemaMode::Unlabeled, model.tokenizer);
  di::index_tokens(corpus, model.vocab);

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + args.out);
  std::size_t dlg_index = 0;
  for (const auto& dlg : corpus.dialogues) {
    di::UtteranceEmbeddings demb;
    demb.dim = model.embedding->dim();
    demb.count = dlg.utterances.size();
    for (const auto& u : dlg.utterances) {
      const auto e = model.embedding->embed(u.tokens);
      demb.data.insert(demb.data.end(), e.begin(), e.end());
    }
    const auto turns = di::parse(model, dlg, demb, args.decode_sweeps,
                                 di::Rng::mix(args.seed, 0xabcd00 + dlg_index));
    json turns_json = json::array();
    for (std::size_t i = 0; i < turns.size(); ++i) {
      const auto& u = dlg.utterances[i];
      json t;
      t["speaker"] = di::speaker_name(u.speaker);
      t["text"] = u.raw_text;
      if (u.gold_intent) t["intent_gold"] = *u.gold_intent;
      const auto& intent = model.intents[turns[i].intent];
      t["intent"] = intent.name ? *intent.name : ("intent_" + std::to_string(turns[i].intent));
      t["intent_id"] = turns[i].intent;
      t["confidence"] = turns[i].confidence;
      turns_json.push_back(std::move(t));
    }
    json obj;
    obj["dialogue_id"] = dlg.dialogue_id;
    obj["turns"] = std::move(turns_json);
    out << obj.dump() << '\n';
    ++dlg_index;
  }
  std::cout << "parsed " << corpus.dialogues.size() << " dialogues -> " << args.out << "\n";
}

struct EvalArgs {
  std::string pred, gold, mode = "aligned", map_file, out;
};

void cmd_eval(const EvalArgs& args) {
  std::map<std::string, int> label_map;
  if (!args.map_file.empty()) {
    std::ifstream in(args.map_file);
    if (!in) throw di::ValidationError("eval: cannot open --map file: " + args.map_file);
    json m;
    in >> m;
    for (const auto& [label, id] : m.items()) label_map[label] = id.get<int>();
  }

  // Predictions from a parsed JSONL (intent_id per turn).
  std::vector<int> pred;
  int max_id = 0;
  {
    std::ifstream in(args.pred);
    if (!in) throw di::ValidationError("eval: cannot open predictions: " + args.pred);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::exception& e) {
        throw di::ValidationError(args.pred + ":" + std::to_string(line_no) +
                                  ": malformed JSON: " + e.what());
      }
      for (const auto& t : obj["turns"]) {
        if (!t.contains("intent_id"))
          throw di::ValidationError(args.pred + ": turn without \"intent_id\" (not a parse output?)");
        pred.push_back(t["intent_id"].get<int>());
        max_id = std::max(max_id, pred.back());
      }
    }
  }

  const di::Corpus gold = di::ingest_jsonl(args.gold, di::SchemaMode::Labeled);
  std::vector<int> gold_ids;
  const bool direct = args.mode == "direct";
  int next_id = 0;
  for (const auto& [label, id] : label_map) next_id = std::max(next_id, id + 1);
  for (const auto& dlg : gold.dialogues) {
    for (const auto& u : dlg.utterances) {
      auto it = label_map.find(*u.gold_intent);
      if (it == label_map.end()) {
        if (direct)
          throw di::ValidationError("eval: direct mode needs --map entry for label \"" +
                                    *u.gold_intent + "\"");
        it = label_map.emplace(*u.gold_intent, next_id++).first;
      }
      gold_ids.push_back(it->second);
      max_id = std::max(max_id, it->second);
    }
  }

  di::EvalReport report = di::evaluate(pred, gold_ids, max_id + 1,
                                       direct ? di::EvalMode::Direct : di::EvalMode::Aligned);
  report.corpus_hash = di::to_hex(di::hash_file(args.gold));
  const json doc = report.to_json();
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    out << doc.dump(2) << '\n';
  }
  std::cout << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"di: dialogue intent parser"};
  app.require_subcommand(1);

  // corpus stats
  auto* corpus_cmd = app.add_subcommand("corpus", "corpus utilities");
  corpus_cmd->require_subcommand(1);
  CorpusStatsArgs stats_args;
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "print corpus statistics");
  stats_cmd->add_option("path", stats_args.path, "dialogue JSONL file")->required();
  stats_cmd->add_option("--min-count", stats_args.min_count, "vocabulary frequency threshold");

  // intents build
  auto* intents_cmd = app.add_subcommand("intents", "intent set compilation");
  intents_cmd->require_subcommand(1);
  IntentsArgs intents_args;
  auto* build_cmd = intents_cmd->add_subcommand("build", "compile an intent set");
  build_cmd->add_option("--labeled", intents_args.labeled, "labeled dialogue JSONL");
  build_cmd->add_option("--unlabeled", intents_args.unlabeled, "unlabeled dialogue JSONL");
  build_cmd->add_option("--transfer-from", intents_args.transfer_from, "existing intent set JSON");
  build_cmd->add_option("--k-lda", intents_args.k_lda, "topics to mine from unlabeled data");
  build_cmd->add_option("--top-words", intents_args.top_words, "top-T words for similarity");
  build_cmd->add_option("--delta", intents_args.delta, "redundancy threshold");
  build_cmd->add_option("--nb-smoothing", intents_args.nb_smoothing, "additive smoothing");
  build_cmd->add_option("--lda-alpha", intents_args.lda_alpha, "LDA document prior");
  build_cmd->add_option("--lda-beta", intents_args.lda_beta, "LDA word prior");
  build_cmd->add_option("--lda-sweeps", intents_args.lda_sweeps, "LDA Gibbs sweeps");
  build_cmd->add_option("--min-count", intents_args.min_count, "vocabulary threshold");
  build_cmd->add_option("--seed", intents_args.seed, "random seed");
  build_cmd->add_option("-o,--out", intents_args.out, "output path")->required();

  // embed train
  auto* embed_cmd = app.add_subcommand("embed", "embedding model");
  embed_cmd->require_subcommand(1);
  EmbedArgs embed_args;
  auto* train_cmd = embed_cmd->add_subcommand("train", "train or import word vectors");
  train_cmd->add_option("--corpus", embed_args.corpus, "dialogue JSONL")->required();
  train_cmd->add_option("--dim", embed_args.dim, "vector dimension");
  train_cmd->add_option("--epochs", embed_args.epochs, "training epochs");
  train_cmd->add_option("--window", embed_args.window, "context window");
  train_cmd->add_option("--negatives", embed_args.negatives, "negative samples");
  train_cmd->add_option("--lr", embed_args.learning_rate, "initial learning rate");
  train_cmd->add_option("--pretrained", embed_args.pretrained, "text vectors to import instead");
  train_cmd->add_option("--min-count", embed_args.min_count, "vocabulary threshold");
  train_cmd->add_option("--seed", embed_args.seed, "random seed");
  train_cmd->add_option("-o,--out", embed_args.out, "output path")->required();

  // synth
  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--k", synth_args.k, "intent count");
  synth_cmd->add_option("--vocab", synth_args.vocab, "vocabulary size");
  synth_cmd->add_option("--dialogues", synth_args.dialogues, "dialogue count");
  synth_cmd->add_option("--dim", synth_args.dim, "embedding dimension");
  synth_cmd->add_option("--tau", synth_args.tau, "document-path probability");
  synth_cmd->add_option("--separation", synth_args.separation, "Gaussian mean separation (sigma)");
  synth_cmd->add_option("--cycle-mass", synth_args.cycle_mass, "transition cycle strength");
  synth_cmd->add_option("--word-background", synth_args.word_background, "shared word mass");
  synth_cmd->add_option("--doc-alpha", synth_args.doc_alpha, "dialogue mix concentration");
  synth_cmd->add_option("--min-utts", synth_args.min_utts, "min utterances per dialogue");
  synth_cmd->add_option("--max-utts", synth_args.max_utts, "max utterances per dialogue");
  synth_cmd->add_option("--min-words", synth_args.min_words, "min words per utterance");
  synth_cmd->add_option("--max-words", synth_args.max_words, "max words per utterance");
  synth_cmd->add_option("--seed", synth_args.seed, "random seed");
  synth_cmd->add_option("-o,--out", synth_args.out, "corpus output path")->required();
  synth_cmd->add_option("--truth", synth_args.truth_out, "write truth parameters here");
  synth_cmd->add_option("--emb-out", synth_args.emb_out, "write per-utterance embeddings here");

  // fit
  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model");
  fit_cmd->add_option("--corpus", fit_args.corpus, "training dialogue JSONL")->required();
  fit_cmd->add_option("--intents", fit_args.intents, "intent set JSON")->required();
  fit_cmd->add_option("--emb", fit_args.emb, "embedding model binary");
  fit_cmd->add_option("--utt-emb", fit_args.utt_emb, "per-utterance embedding text file");
  fit_cmd->add_option("--tau", fit_args.tau, "document-path probability");
  fit_cmd->add_option("--alpha", fit_args.alpha, "document-intent prior (0 = 50/K)");
  fit_cmd->add_option("--alpha-prime", fit_args.alpha_prime, "transition prior");
  fit_cmd->add_option("--beta", fit_args.beta, "word prior (reserved)");
  fit_cmd->add_option("--rho", fit_args.rho, "generative transition prior (0 = alpha')");
  fit_cmd->add_option("--variance-floor", fit_args.variance_floor, "Gaussian variance floor");
  fit_cmd->add_option("--sweeps", fit_args.sweeps, "Gibbs sweeps");
  fit_cmd->add_option("--burn-in", fit_args.burn_in, "burn-in sweeps");
  fit_cmd->add_option("--few-shot", fit_args.few_shot, "labeled JSONL for prior transfer");
  fit_cmd->add_option("--prior-strength", fit_args.prior_strength, "transferred prior mass per cell");
  fit_cmd->add_option("--transfer-smoothing", fit_args.transfer_smoothing, "prior smoothing");
  fit_cmd->add_option("--min-count", fit_args.min_count, "vocabulary threshold");
  fit_cmd->add_option("--seed", fit_args.seed, "random seed");
  fit_cmd->add_option("-o,--out", fit_args.out, "model output path")->required();

  // parse
  ParseArgs parse_args;
  auto* parse_cmd = app.add_subcommand("parse", "parse dialogues with a fitted model");
  parse_cmd->add_option("--model", parse_args.model, "model file")->required();
  parse_cmd->add_option("--in", parse_args.input, "dialogue JSONL to parse")->required();
  parse_cmd->add_option("--emb", parse_args.emb_override, "embedding model override path");
  parse_cmd->add_option("--decode-sweeps", parse_args.decode_sweeps, "samples per utterance");
  parse_cmd->add_option("--seed", parse_args.seed, "random seed");
  parse_cmd->add_option("-o,--out", parse_args.out, "parsed JSONL output")->required();

  // eval
  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "score parsed output against gold labels");
  eval_cmd->add_option("--pred", eval_args.pred, "parsed JSONL")->required();
  eval_cmd->add_option("--gold", eval_args.gold, "labeled JSONL")->required();
  eval_cmd->add_option("--mode", eval_args.mode, "direct or aligned")
      ->check(CLI::IsMember({"direct", "aligned"}));
  eval_cmd->add_option("--map", eval_args.map_file, "label -> intent id JSON (direct mode)");
  eval_cmd->add_option("-o,--out", eval_args.out, "write the report here too");

  // run
  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "run a pipeline config end to end");
  run_cmd->add_option("config", run_config, "pipeline config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (stats_cmd->parsed()) cmd_corpus_stats(stats_args);
    if (build_cmd->parsed()) cmd_intents_build(intents_args);
    if (train_cmd->parsed()) cmd_embed_train(embed_args);
    if (synth_cmd->parsed()) cmd_synth(synth_args);
    if (fit_cmd->parsed()) cmd_fit(fit_args);
    if (parse_cmd->parsed()) cmd_parse(parse_args);
    if (eval_cmd->parsed()) cmd_eval(eval_args);
    if (run_cmd->parsed()) {
      const json report = di::run_pipeline(run_config);
      std::cout << report.dump(2) << "\n";
    }
  } catch (const di::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
