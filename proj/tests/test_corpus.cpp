#include <cstdio>
#include <filesystem>
#include <fstream>

#include "di/common.hpp"
#include "di/corpus.hpp"
#include "doctest.h"

using namespace di;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = (fs::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("tokenize normalizes and splits") {
  TokenizerConfig cfg;
  CHECK(tokenize("Hello.", cfg) == std::vector<std::string>{"hello"});
  CHECK(tokenize("", cfg).empty());
  CHECK(tokenize("March 23rd", cfg) == std::vector<std::string>{"march", "23rd"});
  CHECK(tokenize("  a\t b\nc ", cfg) == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("...", cfg).empty());
  CHECK(tokenize("don't stop", cfg) == std::vector<std::string>{"don't", "stop"});

  TokenizerConfig raw;
  raw.lowercase = false;
  raw.strip_punct = false;
  CHECK(tokenize("Hello.", raw) == std::vector<std::string>{"Hello."});

  TokenizerConfig stop;
  stop.stopwords = {"the"};
  CHECK(tokenize("the cat", stop) == std::vector<std::string>{"cat"});
}

TEST_CASE("tokenize is pure") {
  TokenizerConfig cfg;
  const std::string text = "I'd like to book a TABLE, for 4 people!";
  const auto a = tokenize(text, cfg);
  for (int i = 0; i < 5; ++i) CHECK(tokenize(text, cfg) == a);
}

TEST_CASE("ingest: empty file gives an empty corpus") {
  TempFile f("di_empty.jsonl", "");
  const Corpus c = ingest_jsonl(f.path, SchemaMode::Unlabeled);
  CHECK(c.dialogues.empty());
  CHECK(c.utterance_count() == 0);
}

TEST_CASE("ingest: labeled dialogue round-trips") {
  TempFile f("di_labeled.jsonl",
             R"({"dialogue_id": "d1", "turns": [)"
             R"({"speaker": "customer", "text": "Hi There!", "intent": "greeting"},)"
             R"({"speaker": "service", "text": "How can I help?", "intent": "request info"}]})"
             "\n");
  const Corpus c = ingest_jsonl(f.path, SchemaMode::Labeled);
  REQUIRE(c.dialogues.size() == 1);
  const Dialogue& d = c.dialogues[0];
  CHECK(d.dialogue_id == "d1");
  REQUIRE(d.utterances.size() == 2);
  CHECK(d.utterances[0].speaker == Speaker::Customer);
  CHECK(d.utterances[0].raw_text == "Hi There!");
  CHECK(*d.utterances[0].gold_intent == "greeting");
  CHECK(d.utterances[1].speaker == Speaker::Service);
  CHECK(*d.utterances[1].gold_intent == "request info");

  // serialize -> re-ingest -> identical content
  const std::string out = (fs::temp_directory_path() / "di_roundtrip.jsonl").string();
  write_jsonl(c, out);
  const Corpus c2 = ingest_jsonl(out, SchemaMode::Labeled);
  REQUIRE(c2.dialogues.size() == 1);
  CHECK(c2.dialogues[0].dialogue_id == d.dialogue_id);
  for (std::size_t i = 0; i < d.utterances.size(); ++i) {
    CHECK(c2.dialogues[0].utterances[i].raw_text == d.utterances[i].raw_text);
    CHECK(c2.dialogues[0].utterances[i].speaker == d.utterances[i].speaker);
    CHECK(*c2.dialogues[0].utterances[i].gold_intent == *d.utterances[i].gold_intent);
    CHECK(c2.dialogues[0].utterances[i].words == d.utterances[i].words);
  }
  std::remove(out.c_str());
}

TEST_CASE("ingest: corrupt line names its line number and nothing is returned") {
  std::string content;
  for (int i = 0; i < 10; ++i) {
    if (i == 6) {
      content += "{\"dialogue_id\": broken\n";
    } else {
      content += R"({"dialogue_id": "d)" + std::to_string(i) +
                 R"(", "turns": [{"speaker": "customer", "text": "hi"}]})" + "\n";
    }
  }
  TempFile f("di_corrupt.jsonl", content);
  CHECK_THROWS_WITH_AS(ingest_jsonl(f.path, SchemaMode::Unlabeled),
                       doctest::Contains(":7:"), ValidationError);
}

TEST_CASE("ingest: labeled mode requires an intent on every turn") {
  TempFile f("di_nolabel.jsonl",
             R"({"dialogue_id": "needs-label", "turns": [{"speaker": "customer", "text": "hi"}]})"
             "\n");
  CHECK_THROWS_WITH_AS(ingest_jsonl(f.path, SchemaMode::Labeled),
                       doctest::Contains("needs-label"), ValidationError);
  CHECK_NOTHROW(ingest_jsonl(f.path, SchemaMode::Unlabeled));
}

TEST_CASE("ingest: dialogue without turns is rejected") {
  TempFile f("di_noturns.jsonl", R"({"dialogue_id": "empty-one", "turns": []})" "\n");
  CHECK_THROWS_WITH_AS(ingest_jsonl(f.path, SchemaMode::Unlabeled),
                       doctest::Contains("empty-one"), ValidationError);
}

TEST_CASE("ingest: unknown speakers map to Other") {
  TempFile f("di_speaker.jsonl",
             R"({"dialogue_id": "d", "turns": [{"speaker": "robot", "text": "beep"}]})" "\n");
  const Corpus c = ingest_jsonl(f.path, SchemaMode::Unlabeled);
  CHECK(c.dialogues[0].utterances[0].speaker == Speaker::Other);
}

namespace {

Corpus corpus_of_one(const std::string& text) {
  Corpus c;
  Dialogue d;
  d.dialogue_id = "d0";
  Utterance u;
  u.raw_text = text;
  u.words = tokenize(text, c.tokenizer);
  d.utterances.push_back(u);
  c.dialogues.push_back(d);
  return c;
}

}  // namespace

TEST_CASE("vocabulary: frequency order with lexicographic ties") {
  const Corpus c = corpus_of_one("a a b");
  const Vocabulary v1 = build_vocabulary(c, 1);
  CHECK(v1.size() == 2);
  CHECK(v1.id("a") == 0);
  CHECK(v1.id("b") == 1);
  CHECK(v1.term_freq(0) == 2);

  const Vocabulary v2 = build_vocabulary(c, 2);
  CHECK(v2.size() == 1);
  CHECK(v2.id("a") == 0);
  CHECK(v2.id("b") == kUnkToken);

  const Corpus tie = corpus_of_one("beta alpha");
  const Vocabulary vt = build_vocabulary(tie, 1);
  CHECK(vt.id("alpha") == 0);
  CHECK(vt.id("beta") == 1);
}

TEST_CASE("vocabulary: empty result is an error") {
  const Corpus c = corpus_of_one("rare words only once");
  CHECK_THROWS_AS(build_vocabulary(c, 99), ValidationError);
}

TEST_CASE("vocabulary assignment is deterministic") {
  const Corpus c = corpus_of_one("c a b b a a");
  const Vocabulary v1 = build_vocabulary(c, 1);
  const Vocabulary v2 = build_vocabulary(c, 1);
  CHECK(v1.words() == v2.words());
}

TEST_CASE("index_tokens maps out-of-vocabulary words to the UNK sentinel") {
  Corpus c = corpus_of_one("a a b");
  const Vocabulary v = build_vocabulary(c, 2);
  index_tokens(c, v);
  const auto& toks = c.dialogues[0].utterances[0].tokens;
  REQUIRE(toks.size() == 3);
  CHECK(toks[0] == 0);
  CHECK(toks[1] == 0);
  CHECK(toks[2] == kUnkToken);
}
