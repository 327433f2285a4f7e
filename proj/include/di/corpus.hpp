#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace di {

enum class Speaker { Customer, Service, Other };

const char* speaker_name(Speaker s);
Speaker speaker_from(const std::string& s);

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_punct = true;
  std::unordered_set<std::string> stopwords;
};

// Tokens that fall out of the vocabulary map to this sentinel; they carry
// no mass in any word-likelihood term.
inline constexpr std::int32_t kUnkToken = -1;

struct Utterance {
  Speaker speaker = Speaker::Other;
  std::string raw_text;                 // preserved byte-exact from input
  std::vector<std::string> words;       // normalized surface tokens
  std::vector<std::int32_t> tokens;     // vocabulary ids (kUnkToken if OOV)
  std::optional<std::string> gold_intent;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Utterance> utterances;    // conversational turn order
};

struct Corpus {
  std::vector<Dialogue> dialogues;
  TokenizerConfig tokenizer;

  std::size_t utterance_count() const {
    std::size_t n = 0;
    for (const auto& d : dialogues) n += d.utterances.size();
    return n;
  }
  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& d : dialogues)
      for (const auto& u : d.utterances) n += u.words.size();
    return n;
  }
};

class Vocabulary {
 public:
  Vocabulary() = default;
  // words in id order; term/document frequencies aligned with ids
  Vocabulary(std::vector<std::string> words, std::vector<std::int64_t> term_freq,
             std::vector<std::int64_t> doc_freq);

  std::int32_t size() const { return static_cast<std::int32_t>(words_.size()); }
  const std::string& word(std::int32_t id) const { return words_.at(static_cast<std::size_t>(id)); }
  std::int32_t id(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? kUnkToken : it->second;
  }
  std::int64_t term_freq(std::int32_t id) const { return term_freq_.at(static_cast<std::size_t>(id)); }
  std::int64_t doc_freq(std::int32_t id) const { return doc_freq_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::vector<std::int64_t> term_freq_;
  std::vector<std::int64_t> doc_freq_;
};

// Whitespace split after optional ASCII lowercasing and stripping of
// leading/trailing ASCII punctuation; tokens emptied by stripping or
// matching a stopword are dropped. Pure: equal input and config give
// equal output on every platform.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

enum class SchemaMode { Labeled, Unlabeled };

// One dialogue per line:
// {"dialogue_id": "...", "turns": [{"speaker": "...", "text": "...", "intent": "..."}]}
// Fails closed: any malformed line aborts the whole ingest.
Corpus ingest_jsonl(const std::string& path, SchemaMode mode,
                    const TokenizerConfig& cfg = {});

void write_jsonl(const Corpus& corpus, const std::string& path);

// Words with corpus term frequency >= min_count, ids assigned by
// descending frequency, ties broken lexicographically.
Vocabulary build_vocabulary(const Corpus& corpus, int min_count);

// Fill every utterance's token ids from its words (kUnkToken when OOV).
void index_tokens(Corpus& corpus, const Vocabulary& vocab);

}  // namespace di
