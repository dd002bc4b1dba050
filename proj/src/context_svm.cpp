#include "medex/context_svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace medex {

namespace {

constexpr int kPositionWindow = 5;

void add_feature(std::vector<double>& v, std::string_view feature, std::uint64_t seed) {
  std::uint64_t basis = 0xcbf29ce484222325ull ^ (seed * 0x9E3779B97F4A7C15ull);
  std::uint64_t h = fnv1a(feature, basis);
  std::size_t bucket = static_cast<std::size_t>(h % v.size());
  double sign = (h >> 63) ? -1.0 : 1.0;
  v[bucket] += sign;
}

}  // namespace

EmbeddingRecord hash_embed(const Task3Instance& instance, std::size_t dim, std::uint64_t seed,
                           std::vector<std::string>* warnings) {
  if (dim == 0) fail(ErrorKind::Usage, "hash_embed: dimension must be positive");
  EmbeddingRecord record;
  record.mention_id = instance.instance_id;
  record.vector.assign(dim, 0.0);

  ClinicalNote window_note("window", instance.window);
  std::vector<WordToken> words;
  if (window_note.char_count() > 0)
    words = tokenize_words(window_note, Span{0, window_note.char_count()});

  if (words.empty()) {
    if (warnings)
      warnings->push_back("empty context window for " + instance.instance_id +
                          ": zero embedding");
    return record;
  }

  Span mention{instance.mention_begin, instance.mention_end};
  std::size_t first_mention = words.size(), last_mention = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].span.overlaps(mention)) {
      if (first_mention == words.size()) first_mention = i;
      last_mention = i;
    }
  }

  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string lower = to_lower_ascii(words[i].text);
    add_feature(record.vector, "w=" + lower, seed);
    if (first_mention == words.size()) continue;
    long offset = 0;
    if (i < first_mention)
      offset = static_cast<long>(i) - static_cast<long>(first_mention);
    else if (i > last_mention)
      offset = static_cast<long>(i) - static_cast<long>(last_mention);
    if (offset >= -kPositionWindow && offset <= kPositionWindow)
      add_feature(record.vector, "p" + std::to_string(offset) + "=" + lower, seed);
  }

  double norm_sq = 0.0;
  for (double x : record.vector) norm_sq += x * x;
  if (norm_sq == 0.0) {
    if (warnings)
      warnings->push_back("all features cancelled for " + instance.instance_id +
                          ": zero embedding");
    return record;
  }
  double norm = std::sqrt(norm_sq);
  for (double& x : record.vector) x /= norm;
  return record;
}

std::string embeddings_to_string(const EmbeddingTable& table) {
  std::string out = "d=" + std::to_string(table.dimension) + "\n";
  for (const auto& [id, vec] : table.by_id) {
    out += id;
    out.push_back('\t');
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (i) out.push_back(' ');
      out += format_full(vec[i]);
    }
    out.push_back('\n');
  }
  return out;
}

EmbeddingTable embeddings_from_string(std::string_view text) {
  std::vector<std::string> lines = split(text, '\n');
  if (lines.empty() || !lines[0].starts_with("d="))
    fail(ErrorKind::Format, "embeddings: missing d=<int> header");
  EmbeddingTable table;
  table.dimension = std::strtoull(lines[0].c_str() + 2, nullptr, 10);
  if (table.dimension == 0) fail(ErrorKind::Format, "embeddings: bad dimension in header");

  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    std::vector<std::string> fields = split(lines[li], '\t');
    if (fields.size() != 2)
      fail(ErrorKind::Format,
           "embeddings line " + std::to_string(li + 1) + ": expected id<TAB>values");
    const std::string& id = fields[0];
    if (table.by_id.count(id))
      fail(ErrorKind::Format,
           "embeddings line " + std::to_string(li + 1) + ": duplicate mention_id \"" + id + "\"");
    std::vector<double> vec;
    for (const std::string& tok : split(fields[1], ' ')) {
      if (tok.empty()) continue;
      char* end = nullptr;
      double value = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        fail(ErrorKind::Format, "embeddings line " + std::to_string(li + 1) +
                                    ": bad float \"" + tok + "\"");
      if (!std::isfinite(value))
        fail(ErrorKind::Format, "embeddings line " + std::to_string(li + 1) +
                                    ": non-finite component in record \"" + id + "\"");
      vec.push_back(value);
    }
    if (vec.size() != table.dimension)
      fail(ErrorKind::Format, "embeddings line " + std::to_string(li + 1) + ": record \"" + id +
                                  "\" has " + std::to_string(vec.size()) +
                                  " components, expected " + std::to_string(table.dimension));
    table.by_id.emplace(id, std::move(vec));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
  try {
    return embeddings_from_string(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    fail(e.kind(), path + ": " + e.what());
  }
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  write_file(path, embeddings_to_string(table));
}

LinearSvmModel train_svm(const std::vector<TrainingInstance>& instances,
                         ContextDimension dimension, const SvmTrainOptions& options) {
  if (instances.empty()) fail(ErrorKind::Usage, "train_svm: no training instances");
  const std::vector<std::string>& classes = dimension_classes(dimension);
  const std::size_t dim = instances.front().features.size();
  for (const TrainingInstance& inst : instances) {
    if (inst.features.size() != dim)
      fail(ErrorKind::Shape, "train_svm: ragged feature dimensions");
    if (std::find(classes.begin(), classes.end(), inst.label) == classes.end())
      fail(ErrorKind::Taxonomy, "train_svm: label \"" + inst.label + "\" is not a " +
                                    dimension_name(dimension) + " class");
  }

  std::vector<std::size_t> class_counts(classes.size(), 0);
  std::vector<int> labels(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto it = std::find(classes.begin(), classes.end(), instances[i].label);
    labels[i] = static_cast<int>(it - classes.begin());
    class_counts[labels[i]]++;
  }

  std::vector<double> example_weight(instances.size(), 1.0);
  if (options.balanced) {
    std::size_t present = 0;
    for (std::size_t c : class_counts)
      if (c > 0) ++present;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      example_weight[i] = static_cast<double>(instances.size()) /
                          (static_cast<double>(present) *
                           static_cast<double>(class_counts[labels[i]]));
    }
  }

  LinearSvmModel model;
  model.dimension = dimension;
  model.input_dim = dim;
  model.lambda = options.lambda;
  model.epochs = options.epochs;
  model.seed = options.seed;
  model.classes = classes;
  model.weights.assign(classes.size(), std::vector<double>(dim, 0.0));
  model.biases.assign(classes.size(), 0.0);

  const double lambda = options.lambda;
  const double radius = 1.0 / std::sqrt(lambda);

  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    if (class_counts[ci] == 0) continue;  // unseen class: zero weights
    if (class_counts[ci] == instances.size()) {
      // Degenerate one-vs-rest problem with no negatives: the exact
      // minimizer (for lambda < 1) is w = 0, b = 1, which scores the class
      // positive everywhere.
      model.biases[ci] = 1.0;
      continue;
    }

    // Bias as an augmented, regularized coordinate.
    std::vector<double> w(dim + 1, 0.0);
    std::mt19937 rng(options.seed + static_cast<std::uint32_t>(ci) * 0x9E3779B9u);
    std::vector<std::size_t> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
      deterministic_shuffle(order, rng);
      for (std::size_t idx : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double y = labels[idx] == static_cast<int>(ci) ? 1.0 : -1.0;
        const std::vector<double>& x = instances[idx].features;

        double score = w[dim];
        for (std::size_t k = 0; k < dim; ++k) score += w[k] * x[k];

        const double decay = 1.0 - eta * lambda;
        for (double& wk : w) wk *= decay;
        if (y * score < 1.0) {
          const double step = eta * y * example_weight[idx];
          for (std::size_t k = 0; k < dim; ++k) w[k] += step * x[k];
          w[dim] += step;
        }
        double norm_sq = 0.0;
        for (double wk : w) norm_sq += wk * wk;
        if (norm_sq > radius * radius) {
          const double scale = radius / std::sqrt(norm_sq);
          for (double& wk : w) wk *= scale;
        }
      }
    }
    for (std::size_t k = 0; k < dim; ++k) model.weights[ci][k] = w[k];
    model.biases[ci] = w[dim];
  }
  return model;
}

std::string predict(const LinearSvmModel& model, const std::vector<double>& features) {
  if (features.size() != model.input_dim)
    fail(ErrorKind::Shape, "predict: feature dimension " + std::to_string(features.size()) +
                               " != model dimension " + std::to_string(model.input_dim));
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t ci = 0; ci < model.classes.size(); ++ci) {
    double score = model.biases[ci];
    for (std::size_t k = 0; k < features.size(); ++k) score += model.weights[ci][k] * features[k];
    if (ci == 0 || score > best_score) {
      best = ci;
      best_score = score;
    }
  }
  return model.classes[best];
}

double hinge_objective(const LinearSvmModel& model,
                       const std::vector<TrainingInstance>& instances) {
  if (instances.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t ci = 0; ci < model.classes.size(); ++ci) {
    double norm_sq = model.biases[ci] * model.biases[ci];
    for (double wk : model.weights[ci]) norm_sq += wk * wk;
    double loss = 0.0;
    for (const TrainingInstance& inst : instances) {
      double y = inst.label == model.classes[ci] ? 1.0 : -1.0;
      double score = model.biases[ci];
      for (std::size_t k = 0; k < inst.features.size(); ++k)
        score += model.weights[ci][k] * inst.features[k];
      loss += std::max(0.0, 1.0 - y * score);
    }
    total += model.lambda / 2.0 * norm_sq + loss / static_cast<double>(instances.size());
  }
  return total / static_cast<double>(model.classes.size());
}

std::string model_to_string(const LinearSvmModel& model) {
  std::string out = "medex-svm v1\n";
  out += "dimension " + dimension_name(model.dimension) + "\n";
  out += "input_dim " + std::to_string(model.input_dim) + "\n";
  out += "lambda " + format_full(model.lambda) + "\n";
  out += "epochs " + std::to_string(model.epochs) + "\n";
  out += "seed " + std::to_string(model.seed) + "\n";
  for (std::size_t ci = 0; ci < model.classes.size(); ++ci) {
    out += "class " + model.classes[ci] + "\n";
    out += "bias " + format_full(model.biases[ci]) + "\n";
    out += "weights";
    for (double wk : model.weights[ci]) {
      out.push_back(' ');
      out += format_full(wk);
    }
    out.push_back('\n');
  }
  return out;
}

LinearSvmModel model_from_string(std::string_view text) {
  std::vector<std::string> lines = split(text, '\n');
  if (lines.empty() || lines[0] != "medex-svm v1")
    fail(ErrorKind::Format, "model file: missing \"medex-svm v1\" header");
  LinearSvmModel model;
  model.classes.clear();
  std::size_t li = 1;
  auto next = [&]() -> std::string {
    while (li < lines.size() && lines[li].empty()) ++li;
    if (li >= lines.size()) return "";
    return lines[li++];
  };
  auto expect_kv = [&](const std::string& key) -> std::string {
    std::string line = next();
    if (!line.starts_with(key + " "))
      fail(ErrorKind::Format, "model file: expected \"" + key + "\", got \"" + line + "\"");
    return line.substr(key.size() + 1);
  };
  model.dimension = parse_dimension(expect_kv("dimension"));
  model.input_dim = std::stoull(expect_kv("input_dim"));
  model.lambda = std::strtod(expect_kv("lambda").c_str(), nullptr);
  model.epochs = std::stoull(expect_kv("epochs"));
  model.seed = static_cast<std::uint32_t>(std::stoul(expect_kv("seed")));

  const std::vector<std::string>& taxonomy = dimension_classes(model.dimension);
  std::string line;
  while (!(line = next()).empty()) {
    if (!line.starts_with("class "))
      fail(ErrorKind::Format, "model file: expected \"class\", got \"" + line + "\"");
    model.classes.push_back(line.substr(6));
    model.biases.push_back(std::strtod(expect_kv("bias").c_str(), nullptr));
    std::string weights_line = next();
    if (!weights_line.starts_with("weights"))
      fail(ErrorKind::Format, "model file: expected \"weights\" line");
    std::vector<double> w;
    for (const std::string& tok : split(weights_line, ' ')) {
      if (tok == "weights" || tok.empty()) continue;
      w.push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (w.size() != model.input_dim)
      fail(ErrorKind::Format, "model file: class \"" + model.classes.back() + "\" has " +
                                  std::to_string(w.size()) + " weights, expected " +
                                  std::to_string(model.input_dim));
    model.weights.push_back(std::move(w));
  }
  if (model.classes != taxonomy)
    fail(ErrorKind::Format, "model file: class list does not match the " +
                                dimension_name(model.dimension) + " taxonomy");
  return model;
}

DimensionPredictions classify_corpus(const std::array<LinearSvmModel, 5>& models,
                                     const EmbeddingTable& embeddings,
                                     const std::vector<MedicationMention>& mentions) {
  for (ContextDimension dim : kContextDimensions) {
    if (models[dimension_index(dim)].dimension != dim)
      fail(ErrorKind::Usage, "classify_corpus: model at position " +
                                 std::to_string(dimension_index(dim)) + " is not the " +
                                 dimension_name(dim) + " model");
  }
  std::vector<std::string> missing;
  DimensionPredictions predictions;
  for (const MedicationMention& m : mentions) {
    if (m.event != EventLabel::Disposition) continue;
    const std::string key = m.doc_id + ":" + m.mention_id;
    auto it = embeddings.by_id.find(key);
    if (it == embeddings.by_id.end()) {
      missing.push_back(key);
      continue;
    }
    for (ContextDimension dim : kContextDimensions) {
      std::size_t idx = dimension_index(dim);
      predictions[idx][key] = predict(models[idx], it->second);
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (const std::string& id : missing) joined += (joined.empty() ? "" : ", ") + id;
    fail(ErrorKind::Completeness, "no embedding for Disposition mentions: " + joined);
  }
  return predictions;
}

}  // namespace medex
