#include "di/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "di/common.hpp"
#include "json.hpp"

namespace di {

using nlohmann::json;

const char* speaker_name(Speaker s) {
  switch (s) {
    case Speaker::Customer: return "customer";
    case Speaker::Service: return "service";
    default: return "other";
  }
}

Speaker speaker_from(const std::string& s) {
  if (s == "customer") return Speaker::Customer;
  if (s == "service") return Speaker::Service;
  return Speaker::Other;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::int64_t> term_freq,
                       std::vector<std::int64_t> doc_freq)
    : words_(std::move(words)), term_freq_(std::move(term_freq)), doc_freq_(std::move(doc_freq)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i], static_cast<std::int32_t>(i));
  }
}

namespace {

// ASCII-only classification so tokenization never depends on locale.
inline bool ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool ascii_punct(unsigned char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}
inline char ascii_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < n && !ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) break;
    std::size_t lo = start, hi = i;
    if (cfg.strip_punct) {
      while (lo < hi && ascii_punct(static_cast<unsigned char>(text[lo]))) ++lo;
      while (hi > lo && ascii_punct(static_cast<unsigned char>(text[hi - 1]))) --hi;
    }
    if (lo == hi) continue;
    std::string tok;
    tok.reserve(hi - lo);
    for (std::size_t j = lo; j < hi; ++j) {
      tok.push_back(cfg.lowercase ? ascii_lower(static_cast<unsigned char>(text[j]))
                                  : text[j]);
    }
    if (!cfg.stopwords.empty() && cfg.stopwords.count(tok)) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

Corpus ingest_jsonl(const std::string& path, SchemaMode mode, const TokenizerConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file: " + path);

  Corpus corpus;
  corpus.tokenizer = cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    bool blank = true;
    for (char c : line) {
      if (!ascii_space(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (blank) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": malformed JSON: " + e.what());
    }
    auto fail = [&](const std::string& msg) -> ValidationError {
      return ValidationError(path + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (!obj.is_object() || !obj.contains("dialogue_id") || !obj["dialogue_id"].is_string())
      throw fail("missing string field \"dialogue_id\"");
    if (!obj.contains("turns") || !obj["turns"].is_array())
      throw fail("missing array field \"turns\"");

    Dialogue dlg;
    dlg.dialogue_id = obj["dialogue_id"].get<std::string>();
    if (obj["turns"].empty())
      throw fail("dialogue \"" + dlg.dialogue_id + "\" has no turns");

    for (const auto& turn : obj["turns"]) {
      if (!turn.is_object() || !turn.contains("text") || !turn["text"].is_string())
        throw fail("dialogue \"" + dlg.dialogue_id + "\": turn missing string field \"text\"");
      Utterance utt;
      utt.raw_text = turn["text"].get<std::string>();
      if (turn.contains("speaker") && turn["speaker"].is_string())
        utt.speaker = speaker_from(turn["speaker"].get<std::string>());
      if (turn.contains("intent")) {
        if (!turn["intent"].is_string())
          throw fail("dialogue \"" + dlg.dialogue_id + "\": \"intent\" must be a string");
        utt.gold_intent = turn["intent"].get<std::string>();
      }
      if (mode == SchemaMode::Labeled && (!utt.gold_intent || utt.gold_intent->empty()))
        throw fail("labeled corpus: dialogue \"" + dlg.dialogue_id +
                   "\" has a turn without \"intent\"");
      utt.words = tokenize(utt.raw_text, cfg);
      dlg.utterances.push_back(std::move(utt));
    }
    corpus.dialogues.push_back(std::move(dlg));
  }
  return corpus;
}

void write_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& dlg : corpus.dialogues) {
    json turns = json::array();
    for (const auto& u : dlg.utterances) {
      json t;
      t["speaker"] = speaker_name(u.speaker);
      t["text"] = u.raw_text;
      if (u.gold_intent) t["intent"] = *u.gold_intent;
      turns.push_back(std::move(t));
    }
    json obj;
    obj["dialogue_id"] = dlg.dialogue_id;
    obj["turns"] = std::move(turns);
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vocabulary build_vocabulary(const Corpus& corpus, int min_count) {
  if (min_count < 1) throw ValidationError("min_count must be >= 1");
  if (corpus.dialogues.empty()) throw ValidationError("cannot build vocabulary from empty corpus");

  // std::map gives the lexicographic ordering needed for tie-breaking.
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> freq;  // word -> (tf, df)
  for (const auto& dlg : corpus.dialogues) {
    std::unordered_set<std::string> seen;
    for (const auto& u : dlg.utterances) {
      for (const auto& w : u.words) {
        ++freq[w].first;
        if (seen.insert(w).second) ++freq[w].second;
      }
    }
  }

  std::vector<const std::pair<const std::string, std::pair<std::int64_t, std::int64_t>>*> kept;
  for (const auto& kv : freq) {
    if (kv.second.first >= min_count) kept.push_back(&kv);
  }
  if (kept.empty()) throw ValidationError("empty vocabulary: no word reaches min_count");

  std::stable_sort(kept.begin(), kept.end(), [](const auto* a, const auto* b) {
    if (a->second.first != b->second.first) return a->second.first > b->second.first;
    return a->first < b->first;
  });

  std::vector<std::string> words;
  std::vector<std::int64_t> tf, df;
  words.reserve(kept.size());
  for (const auto* kv : kept) {
    words.push_back(kv->first);
    tf.push_back(kv->second.first);
    df.push_back(kv->second.second);
  }
  return Vocabulary(std::move(words), std::move(tf), std::move(df));
}

void index_tokens(Corpus& corpus, const Vocabulary& vocab) {
  for (auto& dlg : corpus.dialogues) {
    for (auto& u : dlg.utterances) {
      u.tokens.clear();
      u.tokens.reserve(u.words.size());
      for (const auto& w : u.words) u.tokens.push_back(vocab.id(w));
    }
  }
}

}  // namespace di
