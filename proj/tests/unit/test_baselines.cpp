#include "affectlog/baselines.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "test_util.hpp"

using namespace affectlog;
using namespace affectlog::testutil;

namespace {

// pos: {happy joy} {joy sunshine}, neg: {sad doom} {doom gloom}; the classes
// share no features, so a linear separator exists.
struct SeparableFixture {
  std::vector<Sentence> sentences;
  std::vector<std::pair<const Sentence*, Polarity>> data;

  SeparableFixture() {
    sentences.push_back(make_lemma_sentence({"happy", "joy"}));
    sentences.push_back(make_lemma_sentence({"joy", "sunshine"}));
    sentences.push_back(make_lemma_sentence({"sad", "doom"}));
    sentences.push_back(make_lemma_sentence({"doom", "gloom"}));
    data = {{&sentences[0], Polarity::Pos},
            {&sentences[1], Polarity::Pos},
            {&sentences[2], Polarity::Neg},
            {&sentences[3], Polarity::Neg}};
  }
};

Lexicon lexicon_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return load_lexicon_tsv(in);
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("lexicon TSV loads scores and skips comments") {
  const Lexicon lex = lexicon_from(
      "# polarity scores\n"
      "great\t2.0\n"
      "\n"
      "awful\t-1.5\n");
  REQUIRE(lex.size() == 2);
  CHECK(lex.at("great") == 2.0);
  CHECK(lex.at("awful") == -1.5);
}

TEST_CASE("lexicon TSV rejects malformed input") {
  CHECK_THROWS_AS(lexicon_from("great 2.0\n"), std::runtime_error);
  CHECK_THROWS_AS(lexicon_from("great\ttwo\n"), std::runtime_error);
  CHECK_THROWS_AS(lexicon_from("great\t2.0\tx\n"), std::runtime_error);
  CHECK_THROWS_AS(lexicon_from("great\tnan\n"), std::runtime_error);
  CHECK_THROWS_AS(lexicon_from("great\t1.0\ngreat\t2.0\n"),
                  std::runtime_error);
}

TEST_CASE("lexicon classifier sums scores against the threshold band") {
  const Lexicon lex = lexicon_from("great\t2.0\n");
  const Sentence s = make_lemma_sentence({"a", "great", "day"});
  CHECK(lexicon_classify(s, lex, 0.0) == Polarity::Pos);
  // The band is inclusive: a score equal to tau abstains.
  CHECK(lexicon_classify(s, lex, 2.0) == Polarity::Neutral);
  CHECK(lexicon_classify(s, lex, 5.0) == Polarity::Neutral);
  CHECK(lexicon_classify(s, Lexicon{}, 0.0) == Polarity::Neutral);
  const Lexicon bad = lexicon_from("day\t-3.0\n");
  CHECK(lexicon_classify(s, bad, 0.0) == Polarity::Neg);
  CHECK_THROWS_AS(lexicon_classify(s, lex, -1.0), std::invalid_argument);
}

TEST_CASE("negation flips the scores under the negated head") {
  // "not good": good is the root and carries the negation dependent.
  const auto docs = parse_corpus(
      "# newdoc id = d\n# sent_id = s\n"
      "1\tnot\tnot\tPART\t_\tPolarity=Neg\t2\tadvmod\t_\t_\n"
      "2\tgood\tgood\tADJ\t_\t_\t0\troot\t_\t_\n");
  const Lexicon lex = lexicon_from("good\t1.0\n");
  CHECK(lexicon_classify(docs[0].sentences[0], lex, 0.0) == Polarity::Neg);

  // The flip reaches dependents of the negated head: "did not have fun".
  const auto deep = parse_corpus(
      "# newdoc id = d\n# sent_id = s\n"
      "1\tI\ti\tPRON\t_\t_\t4\tnsubj\t_\t_\n"
      "2\tdid\tdo\tAUX\t_\t_\t4\taux\t_\t_\n"
      "3\tnot\tnot\tPART\t_\tPolarity=Neg\t4\tadvmod\t_\t_\n"
      "4\thave\thave\tVERB\t_\t_\t0\troot\t_\t_\n"
      "5\tfun\tfun\tNOUN\t_\t_\t4\tobj\t_\t_\n");
  const Lexicon fun = lexicon_from("fun\t1.5\n");
  CHECK(lexicon_classify(deep[0].sentences[0], fun, 0.0) == Polarity::Neg);
}

TEST_CASE("adding a positive word never lowers the lexicon score") {
  const Lexicon lex = lexicon_from("good\t1.0\nbad\t-2.0\n");
  std::vector<std::string> lemmas = {"bad"};
  const Polarity before = lexicon_classify(make_lemma_sentence(lemmas), lex,
                                           0.5);
  CHECK(before == Polarity::Neg);
  lemmas.push_back("good");
  lemmas.push_back("good");
  // Score moves from -2 to 0: out of the negative region, into the band.
  CHECK(lexicon_classify(make_lemma_sentence(lemmas), lex, 0.5) ==
        Polarity::Neutral);
  lemmas.insert(lemmas.end(), {"good", "good"});
  CHECK(lexicon_classify(make_lemma_sentence(lemmas), lex, 0.5) ==
        Polarity::Pos);
}

TEST_CASE("a separable fixture trains to perfect accuracy") {
  const SeparableFixture fx;
  LinearTrainConfig config;
  config.epochs = 50;
  std::vector<double> losses;
  const LinearModel model = train_linear(fx.data, config, &losses);
  for (const auto& [sentence, label] : fx.data)
    CHECK(predict_linear(model, *sentence) == label);
  REQUIRE(losses.size() == config.epochs);
  // Hinge loss settles at zero once every margin clears one.
  CHECK(losses.back() == 0.0);
  for (std::size_t e = 1; e < losses.size(); ++e)
    CHECK(losses[e] <= losses[e - 1] + 1e-9);
}

TEST_CASE("training is bit-identical for equal seeds") {
  const SeparableFixture fx;
  LinearTrainConfig config;
  config.seed = 42;
  const LinearModel a = train_linear(fx.data, config);
  const LinearModel b = train_linear(fx.data, config);
  CHECK(a.bias == b.bias);
  CHECK(a.vocab == b.vocab);
  REQUIRE(a.weights.size() == b.weights.size());
  for (std::size_t i = 0; i < a.weights.size(); ++i)
    CHECK(a.weights[i] == b.weights[i]);
}

TEST_CASE("regularization shrinks weights and truncates at zero") {
  const SeparableFixture fx;
  LinearTrainConfig config;
  const LinearModel plain = train_linear(fx.data, config);
  double plain_norm = 0.0;
  for (double w : plain.weights) plain_norm += w * w;

  // Regularization changes the solution at all.
  config.reg = 0.01;
  const LinearModel mild = train_linear(fx.data, config);
  bool identical = mild.bias == plain.bias;
  for (std::size_t i = 0; identical && i < plain.weights.size(); ++i)
    identical = mild.weights[i] == plain.weights[i];
  CHECK_FALSE(identical);
  // A gently regularized model still separates this easy fixture.
  for (const auto& [sentence, label] : fx.data)
    CHECK(predict_linear(mild, *sentence) == label);

  // The shrink factor is truncated at zero rather than flipping signs, so
  // once learning_rate * reg reaches one the pre-update weights are wiped
  // every step and only the final step's update can survive.
  config.reg = 10.0;
  const LinearModel wiped = train_linear(fx.data, config);
  double wiped_norm = 0.0;
  for (double w : wiped.weights) {
    CHECK(std::abs(w) <= config.learning_rate + 1e-12);
    wiped_norm += w * w;
  }
  CHECK(wiped_norm < plain_norm);
}

TEST_CASE("degenerate training inputs are rejected") {
  const SeparableFixture fx;
  const std::vector<std::pair<const Sentence*, Polarity>> pos_only(
      fx.data.begin(), fx.data.begin() + 2);
  CHECK_THROWS_AS(train_linear(pos_only), std::invalid_argument);

  std::vector<std::pair<const Sentence*, Polarity>> neutral = fx.data;
  neutral[0].second = Polarity::Neutral;
  CHECK_THROWS_AS(train_linear(neutral), std::invalid_argument);

  LinearTrainConfig bad;
  bad.epochs = 0;
  CHECK_THROWS_AS(train_linear(fx.data, bad), std::invalid_argument);
  bad = {};
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train_linear(fx.data, bad), std::invalid_argument);
  bad = {};
  bad.reg = -1.0;
  CHECK_THROWS_AS(train_linear(fx.data, bad), std::invalid_argument);
}

TEST_CASE("prediction is two-way only, with zero scored positive") {
  const LinearModel zero;
  CHECK(zero.score(make_lemma_sentence({"anything"})) == 0.0);
  CHECK(predict_linear(zero, make_lemma_sentence({"anything"})) ==
        Polarity::Pos);

  const SeparableFixture fx;
  const LinearModel model = train_linear(fx.data);
  const std::vector<std::vector<std::string>> probes = {
      {"happy", "joy"}, {"doom"}, {"unseen", "words"}, {},
      {"happy", "doom"}, {"joy", "gloom", "sunshine"}};
  for (const auto& lemmas : probes) {
    const Polarity p = predict_linear(model, make_lemma_sentence(lemmas));
    CHECK(p != Polarity::Neutral);
    CHECK(p != Polarity::Unlabeled);
  }
}

TEST_CASE("duplicate lemmas contribute a single binary feature") {
  const SeparableFixture fx;
  const LinearModel model = train_linear(fx.data);
  const double once = model.score(make_lemma_sentence({"joy"}));
  const double thrice =
      model.score(make_lemma_sentence({"joy", "joy", "joy"}));
  CHECK(once == thrice);
}

TEST_CASE("models round-trip through JSON exactly") {
  const SeparableFixture fx;
  LinearTrainConfig config;
  config.seed = 7;
  const LinearModel model = train_linear(fx.data, config);
  std::ostringstream os;
  save_linear_json(model, os);
  std::istringstream is(os.str());
  const LinearModel back = load_linear_json(is);
  CHECK(back.bias == model.bias);
  CHECK(back.vocab == model.vocab);
  REQUIRE(back.weights.size() == model.weights.size());
  for (std::size_t i = 0; i < model.weights.size(); ++i)
    CHECK(back.weights[i] == model.weights[i]);
}

TEST_CASE("model JSON validation") {
  auto load = [](const std::string& text) {
    std::istringstream is(text);
    return load_linear_json(is);
  };
  CHECK_THROWS_AS(load("nope"), std::runtime_error);
  CHECK_THROWS_AS(load("{\"weights\":{}}"), std::runtime_error);
  CHECK_THROWS_AS(load("{\"bias\":0.0}"), std::runtime_error);
  CHECK_THROWS_AS(load("{\"bias\":0.0,\"weights\":[]}"), std::runtime_error);
  CHECK_NOTHROW(load("{\"bias\":0.5,\"weights\":{\"a\":1.0,\"b\":-1.0}}"));
}

}  // TEST_SUITE("baselines")
