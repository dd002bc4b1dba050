#include <doctest.h>

#include <cmath>
#include <random>

#include "medex/context_svm.hpp"

using namespace medex;

namespace {

Task3Instance window_instance(const std::string& id, const std::string& window,
                              std::size_t begin, std::size_t end) {
  Task3Instance inst;
  inst.instance_id = id;
  inst.doc_id = "d";
  inst.mention_id = id;
  inst.window = window;
  inst.mention_begin = begin;
  inst.mention_end = end;
  return inst;
}

// The separable quadrant toy set: (1,1) is the lone positive-quadrant point.
std::vector<TrainingInstance> quadrant_toy() {
  return {{{1.0, 1.0}, "Negated"},
          {{-1.0, 1.0}, "NotNegated"},
          {{-1.0, -1.0}, "NotNegated"},
          {{1.0, -1.0}, "NotNegated"}};
}

}  // namespace

TEST_CASE("hash_embed is deterministic and unit-norm") {
  auto inst = window_instance("d:T1", "Dr cole started aspirin today .", 16, 23);
  EmbeddingRecord a = hash_embed(inst, 256, 0);
  EmbeddingRecord b = hash_embed(inst, 256, 0);
  CHECK(a.vector == b.vector);
  double norm = 0;
  for (double x : a.vector) norm += x * x;
  CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);

  // different seeds hash differently
  EmbeddingRecord c = hash_embed(inst, 256, 1);
  CHECK(a.vector != c.vector);
}

TEST_CASE("hash_embed flags empty windows with a zero vector") {
  auto inst = window_instance("d:T1", "   ", 0, 0);
  std::vector<std::string> warnings;
  EmbeddingRecord rec = hash_embed(inst, 64, 0, &warnings);
  CHECK(rec.vector == std::vector<double>(64, 0.0));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("d:T1") != std::string::npos);
}

TEST_CASE("embedding table text format round trips exactly") {
  EmbeddingTable table;
  table.dimension = 3;
  table.by_id["d:T1"] = {0.1, -2.5, 1e-17};
  table.by_id["d:T2"] = {1.0 / 3.0, 0.0, -0.0};
  std::string text = embeddings_to_string(table);
  EmbeddingTable back = embeddings_from_string(text);
  CHECK(back.dimension == 3);
  CHECK(back.by_id == table.by_id);
}

TEST_CASE("load_embeddings rejects ragged, non-finite and duplicate records") {
  CHECK_THROWS_AS(embeddings_from_string("x 1 2\n"), Error);  // missing header
  CHECK_THROWS_AS(embeddings_from_string("d=2\na\t1 2\nb\t1\n"), Error);
  CHECK_THROWS_AS(embeddings_from_string("d=2\na\t1 nan\n"), Error);
  CHECK_THROWS_AS(embeddings_from_string("d=2\na\t1 inf\n"), Error);
  CHECK_THROWS_AS(embeddings_from_string("d=2\na\t1 2\na\t3 4\n"), Error);
  CHECK_THROWS_AS(embeddings_from_string("d=2\na\t1 x2\n"), Error);
  // well-formed table parses
  EmbeddingTable table = embeddings_from_string("d=2\na\t1 2\nb\t3 4\n");
  CHECK(table.by_id.size() == 2);
}

TEST_CASE("the separable toy set trains to 100% accuracy within 200 epochs") {
  SvmTrainOptions options;
  options.epochs = 200;
  options.seed = 42;
  auto data = quadrant_toy();
  LinearSvmModel model = train_svm(data, ContextDimension::Negation, options);
  for (const TrainingInstance& inst : data)
    CHECK(predict(model, inst.features) == inst.label);
}

TEST_CASE("training descends the hinge objective on the toy set") {
  auto data = quadrant_toy();
  SvmTrainOptions options;
  options.epochs = 200;
  LinearSvmModel zero;
  zero.dimension = ContextDimension::Negation;
  zero.input_dim = 2;
  zero.lambda = options.lambda;
  zero.classes = dimension_classes(ContextDimension::Negation);
  zero.weights.assign(2, std::vector<double>(2, 0.0));
  zero.biases.assign(2, 0.0);
  double initial = hinge_objective(zero, data);
  CHECK(initial == doctest::Approx(1.0));
  LinearSvmModel model = train_svm(data, ContextDimension::Negation, options);
  CHECK(hinge_objective(model, data) < initial);
}

TEST_CASE("training is bit-for-bit reproducible for a fixed seed") {
  std::mt19937 rng(5);
  std::vector<TrainingInstance> data;
  const auto& classes = dimension_classes(ContextDimension::Action);
  for (int i = 0; i < 60; ++i) {
    TrainingInstance inst;
    for (int k = 0; k < 8; ++k)
      inst.features.push_back((double(bounded_rand(rng, 1000)) - 500.0) / 500.0);
    inst.label = classes[bounded_rand(rng, static_cast<std::uint32_t>(classes.size()))];
    data.push_back(std::move(inst));
  }
  SvmTrainOptions options;
  options.seed = 42;
  LinearSvmModel a = train_svm(data, ContextDimension::Action, options);
  LinearSvmModel b = train_svm(data, ContextDimension::Action, options);
  CHECK(a.weights == b.weights);
  CHECK(a.biases == b.biases);

  options.seed = 43;
  LinearSvmModel c = train_svm(data, ContextDimension::Action, options);
  CHECK(a.weights != c.weights);
}

TEST_CASE("a single-class training set predicts that class everywhere") {
  std::vector<TrainingInstance> data = {{{1.0, 0.0}, "Past"}, {{0.0, 1.0}, "Past"}};
  LinearSvmModel model = train_svm(data, ContextDimension::Temporality, {});
  CHECK(predict(model, {5.0, -3.0}) == "Past");
  CHECK(predict(model, {-5.0, 3.0}) == "Past");
}

TEST_CASE("a class with one training instance stays predictable") {
  std::vector<TrainingInstance> data;
  for (int i = 0; i < 20; ++i) data.push_back({{1.0, 0.0}, "Start"});
  data.push_back({{0.0, 1.0}, "OtherChange"});
  LinearSvmModel model = train_svm(data, ContextDimension::Action, {});
  CHECK(predict(model, {0.0, 1.0}) == "OtherChange");
  CHECK(predict(model, {1.0, 0.0}) == "Start");
}

TEST_CASE("predict breaks ties toward the earlier taxonomy class") {
  LinearSvmModel model;
  model.dimension = ContextDimension::Actor;
  model.input_dim = 2;
  model.classes = dimension_classes(ContextDimension::Actor);
  model.weights.assign(3, std::vector<double>(2, 0.0));
  model.biases.assign(3, 0.0);
  CHECK(predict(model, {0.0, 0.0}) == "Physician");  // all scores zero

  model.biases = {2.0, -1.0, 0.5};
  CHECK(predict(model, {0.0, 0.0}) == "Physician");
  model.biases = {-1.0, 2.0, 0.5};
  CHECK(predict(model, {0.0, 0.0}) == "Patient");
}

TEST_CASE("predict is invariant under positive scaling of weights and biases") {
  std::mt19937 rng(17);
  for (int iter = 0; iter < 50; ++iter) {
    LinearSvmModel model;
    model.dimension = ContextDimension::Certainty;
    model.input_dim = 4;
    model.classes = dimension_classes(ContextDimension::Certainty);
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
      std::vector<double> w;
      for (int k = 0; k < 4; ++k) w.push_back((double(bounded_rand(rng, 200)) - 100.0) / 25.0);
      model.weights.push_back(w);
      model.biases.push_back((double(bounded_rand(rng, 200)) - 100.0) / 25.0);
    }
    std::vector<double> x;
    for (int k = 0; k < 4; ++k) x.push_back((double(bounded_rand(rng, 200)) - 100.0) / 25.0);

    std::string before = predict(model, x);
    const double scale = 0.25 + double(bounded_rand(rng, 100));
    LinearSvmModel scaled = model;
    for (auto& w : scaled.weights)
      for (double& v : w) v *= scale;
    for (double& b : scaled.biases) b *= scale;
    CHECK(predict(scaled, x) == before);
  }
}

TEST_CASE("prediction rejects mismatched dimensions; unseen classes stay scoreable") {
  auto data = quadrant_toy();
  LinearSvmModel model = train_svm(data, ContextDimension::Negation, {});
  CHECK_THROWS_AS(predict(model, {1.0, 2.0, 3.0}), Error);

  // Temporality model trained with only two of four classes
  std::vector<TrainingInstance> partial = {{{1.0, 0.0}, "Past"}, {{0.0, 1.0}, "Present"}};
  LinearSvmModel t = train_svm(partial, ContextDimension::Temporality, {});
  CHECK(t.classes.size() == 4);
  CHECK(t.weights[2] == std::vector<double>(2, 0.0));  // Future untouched
  CHECK(t.weights[3] == std::vector<double>(2, 0.0));  // Unknown untouched
  CHECK_NOTHROW(predict(t, {0.5, 0.5}));
}

TEST_CASE("train_svm validates labels against the dimension taxonomy") {
  std::vector<TrainingInstance> bad = {{{1.0}, "Start"}};
  CHECK_THROWS_AS(train_svm(bad, ContextDimension::Negation, {}), Error);
  CHECK_THROWS_AS(train_svm({}, ContextDimension::Negation, {}), Error);
}

TEST_CASE("model text format round trips to identical doubles") {
  auto data = quadrant_toy();
  SvmTrainOptions options;
  options.epochs = 50;
  LinearSvmModel model = train_svm(data, ContextDimension::Negation, options);
  std::string text = model_to_string(model);
  LinearSvmModel back = model_from_string(text);
  CHECK(back.dimension == model.dimension);
  CHECK(back.input_dim == model.input_dim);
  CHECK(back.classes == model.classes);
  CHECK(back.weights == model.weights);
  CHECK(back.biases == model.biases);
  CHECK(model_to_string(back) == text);
}

TEST_CASE("classify_corpus produces one label per mention per dimension") {
  std::array<LinearSvmModel, 5> models;
  for (ContextDimension dim : kContextDimensions) {
    LinearSvmModel m;
    m.dimension = dim;
    m.input_dim = 2;
    m.classes = dimension_classes(dim);
    m.weights.assign(m.classes.size(), std::vector<double>(2, 0.0));
    m.biases.assign(m.classes.size(), 0.0);
    models[dimension_index(dim)] = std::move(m);
  }
  EmbeddingTable table;
  table.dimension = 2;
  std::vector<MedicationMention> mentions;
  for (int i = 0; i < 3; ++i) {
    MedicationMention m;
    m.mention_id = "T" + std::to_string(i + 1);
    m.doc_id = "d";
    m.span = {std::size_t(i * 10), std::size_t(i * 10 + 4)};
    m.surface = "xxxx";
    m.event = EventLabel::Disposition;
    mentions.push_back(m);
    table.by_id["d:" + m.mention_id] = {1.0, 0.0};
  }
  DimensionPredictions predictions = classify_corpus(models, table, mentions);
  for (ContextDimension dim : kContextDimensions)
    CHECK(predictions[dimension_index(dim)].size() == 3);

  CHECK(classify_corpus(models, table, {}).at(0).empty());

  table.by_id.erase("d:T2");
  try {
    classify_corpus(models, table, mentions);
    FAIL("expected completeness error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Completeness);
    CHECK(std::string(e.what()).find("d:T2") != std::string::npos);
  }
}
