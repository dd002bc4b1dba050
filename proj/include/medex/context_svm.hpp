#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "medex/postprocess.hpp"
#include "medex/preprocess.hpp"

namespace medex {

struct EmbeddingRecord {
  std::string mention_id;  // corpus-unique key: "<doc_id>:<record id>"
  std::vector<double> vector;
};

struct EmbeddingTable {
  std::size_t dimension = 0;
  std::map<std::string, std::vector<double>> by_id;
};

// Deterministic stand-in for encoder embeddings: signed feature hashing of
// lowercased window tokens plus token positions within +-5 words of the
// mention, L2-normalized. An empty window yields a zero vector and a
// warning.
EmbeddingRecord hash_embed(const Task3Instance& instance, std::size_t dim = 256,
                           std::uint64_t seed = 0, std::vector<std::string>* warnings = nullptr);

// Text format: header "d=<int>", then one record per line:
// mention_id, tab, d space-separated decimal floats.
std::string embeddings_to_string(const EmbeddingTable& table);
EmbeddingTable embeddings_from_string(std::string_view text);
EmbeddingTable load_embeddings(const std::string& path);
void save_embeddings(const std::string& path, const EmbeddingTable& table);

struct TrainingInstance {
  std::vector<double> features;
  std::string label;
};

// One-vs-rest linear scorer per taxonomy class; classes unseen in training
// keep zero weights and still score.
struct LinearSvmModel {
  ContextDimension dimension = ContextDimension::Action;
  std::size_t input_dim = 0;
  double lambda = 1e-3;
  std::size_t epochs = 100;
  std::uint32_t seed = 42;
  std::vector<std::string> classes;  // fixed taxonomy order
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;
};

struct SvmTrainOptions {
  double lambda = 1e-3;
  std::size_t epochs = 100;
  std::uint32_t seed = 42;
  bool balanced = false;  // inverse-frequency example weighting
};

// Pegasos-style stochastic subgradient descent with step 1/(lambda t),
// shuffled per epoch with the given seed; bit-for-bit reproducible
// single-threaded.
LinearSvmModel train_svm(const std::vector<TrainingInstance>& instances,
                         ContextDimension dimension, const SvmTrainOptions& options = {});

// Argmax of per-class w.x + b; ties break toward the earlier taxonomy class.
std::string predict(const LinearSvmModel& model, const std::vector<double>& features);

// Mean over taxonomy classes of the one-vs-rest regularized hinge objective;
// used to monitor that training actually descends.
double hinge_objective(const LinearSvmModel& model, const std::vector<TrainingInstance>& instances);

std::string model_to_string(const LinearSvmModel& model);
LinearSvmModel model_from_string(std::string_view text);

// One label per Disposition mention per dimension, keyed for attach_context.
DimensionPredictions classify_corpus(const std::array<LinearSvmModel, 5>& models,
                                     const EmbeddingTable& embeddings,
                                     const std::vector<MedicationMention>& mentions);

}  // namespace medex
