#include <cmath>
#include <fstream>

#include "di/common.hpp"
#include "di/inference.hpp"
#include "di/synth.hpp"
#include "doctest.h"
#include "json.hpp"
#include "tiny_instance.hpp"

using namespace di;
using di::testing::fixed_gaussians;
using di::testing::make_tiny;
using di::testing::oracle_gap;

namespace {

Hyperparams tiny_hyper(int K, double tau = 0.5) {
  Hyperparams h;
  h.intents = K;
  h.alpha = 1.0;
  h.alpha_prime = 0.5;
  h.tau = tau;
  h.sweeps = 10;
  h.burn_in = 5;
  h.seed = 13;
  return h;
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  Hyperparams h = tiny_hyper(2);
  CHECK_NOTHROW(h.validate());
  h.tau = 1.5;
  CHECK_THROWS_AS(h.validate(), ValidationError);
  h = tiny_hyper(2);
  h.burn_in = h.sweeps;
  CHECK_THROWS_AS(h.validate(), ValidationError);
  h = tiny_hyper(2);
  h.alpha_prime = 0.0;
  CHECK_THROWS_AS(h.validate(), ValidationError);
  h = tiny_hyper(0);
  CHECK_THROWS_AS(h.validate(), ValidationError);
}

TEST_CASE("init_state: single intent puts all mass in column zero") {
  TruthParams truth = TruthParams::make(1, 10, 4, 3, 0.5, 1.0, 0.0, 3);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  const SamplerState state = init_state(data.corpus, intents, data.embeddings, tiny_hyper(1));
  for (int z : state.z) CHECK(z == 0);
  std::int64_t doc_mass = 0, trans_mass = 0;
  for (int d = 0; d < state.counts.dialogues; ++d) {
    CHECK(state.counts.doc_at(d, 0) == state.counts.doc_total[static_cast<std::size_t>(d)]);
    doc_mass += state.counts.doc_total[static_cast<std::size_t>(d)];
  }
  trans_mass += state.counts.trans_row[0];
  CHECK(doc_mass + trans_mass == static_cast<std::int64_t>(data.corpus.utterance_count()));
  CHECK(state.counts.indicator_zero + state.counts.indicator_one ==
        static_cast<std::int64_t>(data.corpus.utterance_count()));
}

TEST_CASE("init_state: counts match a recount and the draw is seed-stable") {
  TruthParams truth = TruthParams::make(3, 30, 6, 4, 0.4, 2.0, 0.3, 17);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  const Hyperparams h = tiny_hyper(3, 0.4);
  const SamplerState a = init_state(data.corpus, intents, data.embeddings, h);
  CHECK(a.recount() == a.counts);
  const SamplerState b = init_state(data.corpus, intents, data.embeddings, h);
  CHECK(a.z == b.z);
  CHECK(a.x == b.x);
}

TEST_CASE("conditional weights: K=1 is a single positive entry") {
  auto inst = make_tiny(21, 1, {3, 2}, 2, 0.5, 1.0, 0.5);
  inst->state.remove_utterance(0);
  const auto w = conditional_intent_weights(inst->state, 0, 0);
  REQUIRE(w.size() == 1);
  CHECK(w[0] > 0.0);
}

TEST_CASE("conditional weights: tau=1 reduces to the Gaussian-mixture conditional") {
  auto inst = make_tiny(22, 3, {4, 3}, 2, 1.0, 1.3, 0.5);
  // tau=1 states have no transition-path draws
  for (auto& xi : inst->state.x) xi = 1;
  inst->state.counts = inst->state.recount();

  for (int i = 0; i < inst->state.layout.utterances(); ++i) {
    const int d = inst->state.layout.dlg[static_cast<std::size_t>(i)];
    const int u = inst->state.layout.pos[static_cast<std::size_t>(i)];
    inst->state.remove_utterance(i);
    const auto w = conditional_intent_weights(inst->state, d, u);

    // independent mixture conditional: N_k * (C_dk + alpha)
    std::vector<double> expect(3);
    for (int k = 0; k < 3; ++k) {
      double g = 0.0;
      const double* e = inst->emb.row(static_cast<std::size_t>(i));
      for (int c = 0; c < inst->emb.dim; ++c) {
        const double mu = inst->state.gaussians.mean_row(k)[c];
        const double var = inst->state.gaussians.var_row(k)[c];
        g += -0.5 * std::log(2.0 * M_PI * var) - (e[c] - mu) * (e[c] - mu) / (2.0 * var);
      }
      expect[static_cast<std::size_t>(k)] =
          std::exp(g) * (inst->state.counts.doc_at(d, k) + 1.3);
    }
    inst->state.add_utterance(i);

    double wt = 0.0, et = 0.0;
    for (int k = 0; k < 3; ++k) {
      wt += w[static_cast<std::size_t>(k)];
      et += expect[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < 3; ++k) {
      CHECK(w[static_cast<std::size_t>(k)] / wt ==
            doctest::Approx(expect[static_cast<std::size_t>(k)] / et).epsilon(1e-12));
    }
  }
}

TEST_CASE("conditional weights: flat Gaussians leave the count terms only") {
  auto inst = make_tiny(23, 2, {3, 3}, 2, 1.0, 0.7, 0.5);
  // identical emissions for every intent
  const auto flat = fixed_gaussians({{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 1.0}, {1.0, 1.0}});
  inst->state.gaussians = flat;
  for (auto& xi : inst->state.x) xi = 1;
  inst->state.counts = inst->state.recount();

  const int i = 1;
  inst->state.remove_utterance(i);
  const auto w = conditional_intent_weights(inst->state, 0, 1);
  const double c0 = inst->state.counts.doc_at(0, 0) + 0.7;
  const double c1 = inst->state.counts.doc_at(0, 1) + 0.7;
  inst->state.add_utterance(i);
  const double total = w[0] + w[1];
  CHECK(w[0] / total == doctest::Approx(c0 / (c0 + c1)).epsilon(1e-12));
  CHECK(w[1] / total == doctest::Approx(c1 / (c1 + c0)).epsilon(1e-12));
}

TEST_CASE("conditional weights match the enumeration oracle on the canonical toy instance") {
  auto inst = make_tiny(4242, 2, {3, 3}, 2, 0.4, 0.9, 0.3);
  CHECK(oracle_gap(*inst) <= 1e-9);
}

TEST_CASE("conditional weights match the committed fixture table") {
  auto inst = make_tiny(4242, 2, {3, 3}, 2, 0.4, 0.9, 0.3);
  std::ifstream in(std::string(DI_TEST_DATA_DIR) + "/toy_conditionals.json");
  REQUIRE(in.good());
  nlohmann::json fixture;
  in >> fixture;
  const auto oracle = brute_force_posterior(inst->state.layout, inst->emb, inst->state.gaussians,
                                            inst->state.hyper.tau, inst->state.priors,
                                            inst->state.z, inst->state.x);
  REQUIRE(fixture["conditionals"].size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    for (std::size_t k = 0; k < oracle[i].size(); ++k) {
      CHECK(oracle[i][k] ==
            doctest::Approx(fixture["conditionals"][i][k].get<double>()).epsilon(1e-9));
    }
  }
}

TEST_CASE("exchange test: sampler conditionals equal exact conditionals on random instances") {
  Rng meta(808);
  for (int trial = 0; trial < 8; ++trial) {
    const int K = 2 + static_cast<int>(meta.below(2));
    const int n1 = 2 + static_cast<int>(meta.below(3));
    const int n2 = 2 + static_cast<int>(meta.below(3));
    const double tau = 0.2 + 0.6 * meta.uniform01();
    auto inst = make_tiny(meta.next_u64(), K, {n1, n2}, 2, tau, 0.8, 0.4);
    CAPTURE(trial);
    CHECK(oracle_gap(*inst) <= 1e-9);
  }
}

TEST_CASE("indicator distribution: degenerate switches") {
  SUBCASE("tau=1 forces the document path") {
    auto inst = make_tiny(31, 2, {3, 3}, 2, 1.0, 1.0, 1.0);
    inst->state.remove_utterance(1);
    const auto dist = indicator_distribution(inst->state, 0, 1, inst->state.z[1]);
    CHECK(dist.p_one == 1.0);
    for (int r = 0; r < 50; ++r) CHECK(sample_indicator(inst->state, 0, 1, inst->state.z[1]) == 1);
  }
  SUBCASE("tau=0 forces the transition path off the first utterance") {
    auto inst = make_tiny(31, 2, {3, 3}, 2, 0.0, 1.0, 1.0);
    inst->state.remove_utterance(1);
    const auto dist = indicator_distribution(inst->state, 0, 1, inst->state.z[1]);
    CHECK(dist.p_zero == 1.0);
    for (int r = 0; r < 50; ++r) CHECK(sample_indicator(inst->state, 0, 1, inst->state.z[1]) == 0);
  }
  SUBCASE("first utterance is a pure Bernoulli(tau) draw") {
    auto inst = make_tiny(31, 2, {3, 3}, 2, 0.25, 1.0, 1.0);
    inst->state.remove_utterance(0);
    const auto dist = indicator_distribution(inst->state, 0, 0, inst->state.z[0]);
    CHECK(dist.p_one == doctest::Approx(0.25));
    CHECK(dist.p_zero == doctest::Approx(0.75));
  }
}

TEST_CASE("indicator distribution: symmetric at empty counts") {
  // one dialogue, two utterances; empty every table the formulas read
  Corpus corpus;
  Dialogue dlg;
  dlg.dialogue_id = "d";
  dlg.utterances.resize(2);
  corpus.dialogues.push_back(dlg);

  UtteranceEmbeddings emb;
  emb.dim = 1;
  emb.count = 2;
  emb.data = {0.0, 0.0};

  SamplerState st;
  st.layout = CorpusLayout::from(corpus);
  st.embeddings = &emb;
  st.hyper = tiny_hyper(2, 0.5);
  st.hyper.alpha = 1.0;
  st.hyper.alpha_prime = 1.0;
  st.priors = PriorSpec::uniform(2, 1.0, 1.0);
  st.z = {0, 0};
  st.x = {1, 1};
  st.counts = st.recount();
  st.gaussians = fixed_gaussians({{0.0}, {1.0}}, {{1.0}, {1.0}});

  st.remove_utterance(1);
  // drop the predecessor's document count too, leaving all-zero tables
  st.counts.doc_at(0, 0) -= 1;
  st.counts.doc_total[0] -= 1;
  const auto dist = indicator_distribution(st, 0, 1, 0);
  // predecessor factor (0+1)/(0+2) ties the document factor (0+1)/(0+2)
  CHECK(dist.p_zero == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dist.p_one == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gibbs sweep: K=1 keeps assignments, only indicators move") {
  TruthParams truth = TruthParams::make(1, 10, 3, 2, 0.5, 1.0, 0.0, 5);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  SamplerState state = init_state(data.corpus, intents, data.embeddings, tiny_hyper(1));
  gibbs_sweep(state);
  for (int z : state.z) CHECK(z == 0);
  // indicators may flip (moving mass between the doc and trans tables) but
  // every draw stays on intent 0 and the tables stay consistent
  CHECK(state.recount() == state.counts);
  std::int64_t mass = state.counts.trans_row[0];
  for (int d = 0; d < state.counts.dialogues; ++d) {
    CHECK(state.counts.doc_at(d, 0) == state.counts.doc_total[static_cast<std::size_t>(d)]);
    mass += state.counts.doc_total[static_cast<std::size_t>(d)];
  }
  CHECK(mass == static_cast<std::int64_t>(data.corpus.utterance_count()));
  CHECK(state.counts.indicator_zero + state.counts.indicator_one ==
        static_cast<std::int64_t>(data.corpus.utterance_count()));
}

TEST_CASE("gibbs sweep: incremental tables equal a recount after many sweeps") {
  TruthParams truth = TruthParams::make(3, 40, 8, 3, 0.5, 2.5, 0.4, 23);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(3);
  SamplerState state = init_state(data.corpus, intents, data.embeddings, h);
  state.debug_checks = true;  // throws inside the sweep on any drift
  for (int s = 0; s < 20; ++s) gibbs_sweep(state);
  CHECK(state.recount() == state.counts);
}

TEST_CASE("complete log likelihood: finite, and the indicator mass counts every utterance") {
  auto inst = make_tiny(51, 2, {4, 4}, 2, 0.5, 1.0, 0.5);
  const double ll = complete_log_likelihood(inst->state);
  CHECK(std::isfinite(ll));
  CHECK(inst->state.counts.indicator_zero + inst->state.counts.indicator_one ==
        static_cast<std::int64_t>(inst->state.z.size()));

  // at tau=0.5 the indicator term is (A+B) log 0.5 regardless of the split,
  // so flipping every indicator moves only the transition component
  const double indicator_mass =
      static_cast<double>(inst->state.z.size()) * std::log(0.5);
  for (auto& xi : inst->state.x) xi = static_cast<std::uint8_t>(1 - xi);
  inst->state.counts = inst->state.recount();
  const double ll_flipped = complete_log_likelihood(inst->state);
  CHECK(std::isfinite(ll_flipped - indicator_mass));
}

TEST_CASE("complete log likelihood: single utterance closed form") {
  Corpus corpus;
  Dialogue dlg;
  dlg.dialogue_id = "d";
  dlg.utterances.resize(1);
  corpus.dialogues.push_back(dlg);
  UtteranceEmbeddings emb;
  emb.dim = 1;
  emb.count = 1;
  emb.data = {0.7};

  SamplerState st;
  st.layout = CorpusLayout::from(corpus);
  st.embeddings = &emb;
  st.hyper = tiny_hyper(1, 0.3);
  st.hyper.alpha = 2.0;
  st.priors = PriorSpec::uniform(1, 2.0, 0.5);
  st.z = {0};
  st.x = {1};
  st.counts = st.recount();
  st.gaussians = fixed_gaussians({{0.2}}, {{1.5}});

  const double gauss = -0.5 * std::log(2.0 * M_PI * 1.5) - 0.25 / (2.0 * 1.5);
  // document component: lgamma(2) - lgamma(3) + lgamma(3) - lgamma(2) = 0
  const double expect = std::log(0.3) + gauss;
  CHECK(complete_log_likelihood(st) == doctest::Approx(expect).epsilon(1e-12));

  st.x = {0};
  st.counts = st.recount();
  CHECK(complete_log_likelihood(st) == doctest::Approx(std::log(0.7) + gauss).epsilon(1e-12));
}

TEST_CASE("fit: minimal schedule and normalization") {
  TruthParams truth = TruthParams::make(3, 30, 10, 3, 0.5, 3.0, 0.4, 77);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(3);
  h.sweeps = 6;
  h.burn_in = 5;
  const FittedModel model = fit(data.corpus, intents, data.embeddings, h);
  REQUIRE(model.theta.size() == static_cast<std::size_t>(10 * 3));
  REQUIRE(model.transition.size() == static_cast<std::size_t>(3 * 3));
  for (int d = 0; d < 10; ++d) {
    double total = 0.0;
    for (int k = 0; k < 3; ++k) total += model.theta[static_cast<std::size_t>(d * 3 + k)];
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
  for (int r = 0; r < 3; ++r) {
    double total = 0.0;
    for (int k = 0; k < 3; ++k) total += model.transition_row(r)[k];
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
  CHECK(model.log_likelihood_trace.size() == 6);
}

TEST_CASE("fit: deterministic for a fixed seed") {
  TruthParams truth = TruthParams::make(2, 25, 8, 3, 0.5, 3.0, 0.5, 11);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(2);
  h.sweeps = 12;
  h.burn_in = 6;
  const FittedModel a = fit(data.corpus, intents, data.embeddings, h);
  const FittedModel b = fit(data.corpus, intents, data.embeddings, h);
  CHECK(a.final_z == b.final_z);
  CHECK(a.final_x == b.final_x);
  CHECK(a.theta == b.theta);
  CHECK(a.transition == b.transition);
  CHECK(a.log_likelihood_trace == b.log_likelihood_trace);
}

TEST_CASE("fit: likelihood trend climbs on synthetic data") {
  TruthParams truth = TruthParams::make(4, 80, 60, 6, 0.5, 5.0, 0.5, 303);
  truth.doc_alpha = 0.5;
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(4);
  h.alpha = 1.0;
  h.alpha_prime = 0.1;
  h.sweeps = 50;
  h.burn_in = 25;
  h.seed = 2;
  const FittedModel model = fit(data.corpus, intents, data.embeddings, h);
  double first = 0.0, last = 0.0;
  for (int s = 0; s < 10; ++s) {
    first += model.log_likelihood_trace[static_cast<std::size_t>(s)];
    last += model.log_likelihood_trace[model.log_likelihood_trace.size() - 1 - static_cast<std::size_t>(s)];
  }
  CHECK(last / 10.0 > first / 10.0);
}

TEST_CASE("fit recovers well-separated synthetic assignments") {
  TruthParams truth = TruthParams::make(3, 60, 80, 8, 0.5, 6.0, 0.5, 909);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(3);
  h.alpha = 1.0;
  h.alpha_prime = 0.1;
  h.sweeps = 40;
  h.burn_in = 20;
  const FittedModel model = fit(data.corpus, intents, data.embeddings, h);
  const Alignment al = align_intents(model.final_z, data.gold_z, 3);
  CHECK(al.accuracy >= 0.9);
}

TEST_CASE("parse: K=1 decodes everything to intent zero with full confidence") {
  TruthParams truth = TruthParams::make(1, 10, 4, 2, 0.5, 1.0, 0.0, 5);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(1);
  h.sweeps = 4;
  h.burn_in = 2;
  FittedModel model = fit(data.corpus, intents, data.embeddings, h);

  UtteranceEmbeddings demb;
  demb.dim = data.embeddings.dim;
  demb.count = data.corpus.dialogues[0].utterances.size();
  demb.data.assign(data.embeddings.data.begin(),
                   data.embeddings.data.begin() +
                       static_cast<std::ptrdiff_t>(demb.count * static_cast<std::size_t>(demb.dim)));
  const auto turns = parse(model, data.corpus.dialogues[0], demb, 10, 3);
  for (const auto& t : turns) {
    CHECK(t.intent == 0);
    CHECK(t.confidence == 1.0);
  }
}

TEST_CASE("parse: deterministic and faithful on a trained dialogue") {
  TruthParams truth = TruthParams::make(3, 60, 60, 8, 0.5, 8.0, 0.5, 5150);
  const SynthData data = generate_corpus(truth);
  const IntentSet intents = truth_intents(truth);
  Hyperparams h = tiny_hyper(3);
  h.alpha = 1.0;
  h.alpha_prime = 0.1;
  h.sweeps = 30;
  h.burn_in = 15;
  FittedModel model = fit(data.corpus, intents, data.embeddings, h);

  const Dialogue& dlg = data.corpus.dialogues[0];
  UtteranceEmbeddings demb;
  demb.dim = data.embeddings.dim;
  demb.count = dlg.utterances.size();
  demb.data.assign(
      data.embeddings.data.begin(),
      data.embeddings.data.begin() +
          static_cast<std::ptrdiff_t>(demb.count * static_cast<std::size_t>(demb.dim)));

  const auto a = parse(model, dlg, demb, 20, 99);
  const auto b = parse(model, dlg, demb, 20, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].intent == b[i].intent);
    CHECK(a[i].confidence == b[i].confidence);
  }

  // well-separated Gaussians: decoding a training dialogue reproduces its
  // final training assignment
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].intent == model.final_z[i]);
  }

  Dialogue empty;
  empty.dialogue_id = "e";
  UtteranceEmbeddings none;
  none.dim = demb.dim;
  CHECK_THROWS_AS(parse(model, empty, none, 10, 1), ValidationError);
}
