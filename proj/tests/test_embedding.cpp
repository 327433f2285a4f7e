#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "di/common.hpp"
#include "di/embedding.hpp"
#include "di/kernels.hpp"
#include "di/rng.hpp"
#include "doctest.h"

using namespace di;

namespace {

Corpus text_corpus(const std::vector<std::string>& utterances) {
  Corpus c;
  Dialogue d;
  d.dialogue_id = "d0";
  for (const auto& text : utterances) {
    Utterance u;
    u.raw_text = text;
    u.words = tokenize(text, c.tokenizer);
    d.utterances.push_back(u);
  }
  c.dialogues.push_back(d);
  return c;
}

double cosine(const float* a, const float* b, int dim) {
  const auto& k = kern::active();
  const double num = k.dot_f32(a, b, static_cast<std::size_t>(dim));
  const double na = k.dot_f32(a, a, static_cast<std::size_t>(dim));
  const double nb = k.dot_f32(b, b, static_cast<std::size_t>(dim));
  return num / std::sqrt(na * nb);
}

}  // namespace

TEST_CASE("training is bitwise deterministic for a fixed seed") {
  Corpus c = text_corpus({"the cat sat on the mat", "the dog sat on the rug",
                          "a cat and a dog met", "the mat was red"});
  const Vocabulary v = build_vocabulary(c, 1);
  index_tokens(c, v);
  EmbeddingConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 3;
  cfg.seed = 99;
  const EmbeddingModel a = train_embeddings(c, v, cfg);
  const EmbeddingModel b = train_embeddings(c, v, cfg);
  CHECK(a.raw() == b.raw());
}

TEST_CASE("trained vectors have the right shape and are finite") {
  Corpus c = text_corpus({"alpha beta gamma", "beta gamma delta", "gamma delta alpha"});
  const Vocabulary v = build_vocabulary(c, 1);
  index_tokens(c, v);
  EmbeddingConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  const EmbeddingModel m = train_embeddings(c, v, cfg);
  CHECK(m.dim() == 8);
  CHECK(m.vocab_size() == v.size());
  for (float f : m.raw()) CHECK(std::isfinite(f));
}

TEST_CASE("words sharing all contexts end up with close vectors") {
  // "left" and "right" only ever appear between the same frame words.
  std::vector<std::string> utts;
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const char* target = (i % 2 == 0) ? "left" : "right";
    const int frame = static_cast<int>(rng.below(4));
    utts.push_back("f" + std::to_string(frame) + " " + target + " g" + std::to_string(frame));
  }
  Corpus c = text_corpus(utts);
  const Vocabulary v = build_vocabulary(c, 1);
  index_tokens(c, v);
  EmbeddingConfig cfg;
  cfg.dim = 12;
  cfg.epochs = 40;
  cfg.window = 2;
  cfg.negatives = 5;
  cfg.seed = 11;
  const EmbeddingModel m = train_embeddings(c, v, cfg);
  CHECK(cosine(m.vector(v.id("left")), m.vector(v.id("right")), m.dim()) >= 0.9);
}

TEST_CASE("training without usable pairs is an error") {
  Corpus c = text_corpus({"single", "word", "rows"});
  const Vocabulary v = build_vocabulary(c, 1);
  index_tokens(c, v);
  EmbeddingConfig cfg;
  CHECK_THROWS_AS(train_embeddings(c, v, cfg), ValidationError);
}

TEST_CASE("embed_utterance composes by the arithmetic mean") {
  EmbeddingModel m(4, 3);
  for (int w = 0; w < 3; ++w) {
    for (int d = 0; d < 4; ++d) m.vector(w)[d] = static_cast<float>(w + 1) * (d + 1);
  }
  const auto single = m.embed({1});
  for (int d = 0; d < 4; ++d) CHECK(single[static_cast<std::size_t>(d)] == doctest::Approx(2.0 * (d + 1)));

  const auto pair = m.embed({0, 2});
  for (int d = 0; d < 4; ++d) CHECK(pair[static_cast<std::size_t>(d)] == doctest::Approx(2.0 * (d + 1)));

  const auto empty = m.embed({});
  for (double x : empty) CHECK(x == 0.0);
  const auto unk = m.embed({kUnkToken, kUnkToken});
  for (double x : unk) CHECK(x == 0.0);
}

TEST_CASE("binary model file round-trips") {
  EmbeddingModel m(3, 2);
  m.vector(0)[0] = 1.5f;
  m.vector(1)[2] = -2.25f;
  const std::string path = (std::filesystem::temp_directory_path() / "di_emb_rt.bin").string();
  save_embedding_model(m, path);
  const EmbeddingModel loaded = load_embedding_model(path);
  CHECK(loaded.dim() == 3);
  CHECK(loaded.vocab_size() == 2);
  CHECK(loaded.raw() == m.raw());
  std::remove(path.c_str());
}

TEST_CASE("pretrained text vectors load by word") {
  Corpus c = text_corpus({"alpha beta"});
  const Vocabulary v = build_vocabulary(c, 1);
  const std::string path = (std::filesystem::temp_directory_path() / "di_emb_text.txt").string();
  {
    std::ofstream out(path);
    out << "alpha 1 2 3\nbeta 4 5 6\nunused 7 8 9\n";
  }
  const EmbeddingModel m = load_word_vectors_text(path, v);
  CHECK(m.dim() == 3);
  CHECK(m.vector(v.id("alpha"))[0] == 1.0f);
  CHECK(m.vector(v.id("beta"))[2] == 6.0f);
  std::remove(path.c_str());
}

namespace {

UtteranceEmbeddings points(const std::vector<std::vector<double>>& rows) {
  UtteranceEmbeddings e;
  e.count = rows.size();
  e.dim = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows) e.data.insert(e.data.end(), r.begin(), r.end());
  return e;
}

}  // namespace

TEST_CASE("gaussian stats: identical points hit the variance floor") {
  const auto e = points({{1.0, -2.0}, {1.0, -2.0}, {1.0, -2.0}});
  const auto stats = estimate_gaussians(e, {0, 0, 0}, 1, 1e-4);
  CHECK(stats.mean_row(0)[0] == doctest::Approx(1.0));
  CHECK(stats.mean_row(0)[1] == doctest::Approx(-2.0));
  CHECK(stats.var_row(0)[0] == doctest::Approx(1e-4));
  CHECK(stats.var_row(0)[1] == doctest::Approx(1e-4));
}

TEST_CASE("gaussian stats: two-point population moments") {
  const auto e = points({{0.0, 0.0}, {2.0, 2.0}});
  const auto stats = estimate_gaussians(e, {0, 0}, 1, 1e-6);
  CHECK(stats.mean_row(0)[0] == doctest::Approx(1.0));
  CHECK(stats.mean_row(0)[1] == doctest::Approx(1.0));
  CHECK(stats.var_row(0)[0] == doctest::Approx(1.0));
  CHECK(stats.var_row(0)[1] == doctest::Approx(1.0));
}

TEST_CASE("gaussian stats: empty and singleton intents fall back to global stats") {
  const auto e = points({{0.0}, {4.0}, {8.0}, {2.0}});
  const auto stats = estimate_gaussians(e, {0, 0, 0, 1}, 3, 1e-4);
  // global: mean 3.5, population variance 8.75
  CHECK(stats.mean_row(1)[0] == doctest::Approx(3.5));
  CHECK(stats.var_row(1)[0] == doctest::Approx(8.75));
  CHECK(stats.mean_row(2)[0] == doctest::Approx(3.5));
  CHECK(stats.var_row(2)[0] == doctest::Approx(8.75));
  CHECK(stats.count[1] == 1);
  CHECK(stats.count[2] == 0);
}

TEST_CASE("gaussian stats are invariant to input permutation") {
  Rng rng(8);
  std::vector<std::vector<double>> rows;
  std::vector<int> assign;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({rng.normal(), rng.normal(), rng.normal()});
    assign.push_back(static_cast<int>(rng.below(3)));
  }
  const auto stats1 = estimate_gaussians(points(rows), assign, 3, 1e-4);

  std::vector<std::size_t> perm(rows.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
  std::vector<std::vector<double>> rows2;
  std::vector<int> assign2;
  for (std::size_t i : perm) {
    rows2.push_back(rows[i]);
    assign2.push_back(assign[i]);
  }
  const auto stats2 = estimate_gaussians(points(rows2), assign2, 3, 1e-4);
  for (std::size_t i = 0; i < stats1.mean.size(); ++i) {
    CHECK(stats1.mean[i] == doctest::Approx(stats2.mean[i]).epsilon(1e-12));
    CHECK(stats1.var[i] == doctest::Approx(stats2.var[i]).epsilon(1e-12));
  }
}

TEST_CASE("gaussian log-likelihood closed forms") {
  // dim 1, mean 0, var 1, e = 1: -log(2 pi)/2 - 1/2
  const auto e = points({{0.0}, {0.0}});
  GaussianIntentStats stats = estimate_gaussians(e, {0, 0}, 1, 1.0);
  // variance floor 1.0 forces var = 1, mean = 0
  const double at_one = log_gaussian_likelihood(points({{1.0}}).row(0), stats, 0);
  CHECK(at_one == doctest::Approx(-0.5 * std::log(2.0 * M_PI) - 0.5).epsilon(1e-9));
  CHECK(at_one == doctest::Approx(-1.4189385332046727).epsilon(1e-9));

  // peak at the mean, symmetric around it, decreasing along each axis
  const double peak = log_gaussian_likelihood(points({{0.0}}).row(0), stats, 0);
  CHECK(peak == doctest::Approx(-0.5 * std::log(2.0 * M_PI)));
  const double left = log_gaussian_likelihood(points({{-0.7}}).row(0), stats, 0);
  const double right = log_gaussian_likelihood(points({{0.7}}).row(0), stats, 0);
  CHECK(left == doctest::Approx(right).epsilon(1e-12));
  CHECK(left < peak);

  Rng rng(17);
  double prev = peak;
  for (double step : {0.5, 1.0, 2.0, 4.0}) {
    const double v = log_gaussian_likelihood(points({{step}}).row(0), stats, 0);
    CHECK(v < prev);
    prev = v;
  }
  for (int i = 0; i < 100; ++i) {
    const double v = log_gaussian_likelihood(points({{rng.normal() * 3}}).row(0), stats, 0);
    CHECK(v <= peak);
  }
}
