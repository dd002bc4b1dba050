// Command-line front end wiring the pipeline stages together:
// gen -> preprocess -> tag-baseline -> embed/train-context/predict -> evaluate.
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "medex/baseline.hpp"
#include "medex/brat.hpp"
#include "medex/context_svm.hpp"
#include "medex/eval.hpp"
#include "medex/manifest.hpp"
#include "medex/postprocess.hpp"
#include "medex/preprocess.hpp"
#include "medex/subword.hpp"
#include "medex/synth.hpp"
#include "medex/util.hpp"

namespace fs = std::filesystem;
using namespace medex;

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void require_dir(const std::string& path, const std::string& what) {
  if (!fs::is_directory(path))
    fail(ErrorKind::Usage, what + " directory does not exist: " + path);
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) fail(ErrorKind::Usage, what + " file does not exist: " + path);
}

Corpus load_validated_corpus(const std::string& ann_dir, const std::string& txt_dir,
                             Split split) {
  std::vector<std::string> warnings;
  Corpus corpus = load_corpus_paired(ann_dir, txt_dir, split, &warnings);
  print_warnings(warnings);
  std::vector<std::string> violations = validate_corpus(corpus);
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << "violation: " << v << "\n";
    fail(ErrorKind::Integrity, ann_dir + ": corpus failed validation with " +
                                   std::to_string(violations.size()) + " violation(s)");
  }
  return corpus;
}

std::vector<ClinicalNote> load_notes(const std::string& dir) {
  require_dir(dir, "notes");
  std::vector<ClinicalNote> notes;
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      stems.push_back(entry.path().stem().string());
  }
  std::sort(stems.begin(), stems.end());
  for (const std::string& stem : stems) {
    notes.emplace_back(stem,
                       normalize_newlines(read_file((fs::path(dir) / (stem + ".txt")).string())));
  }
  return notes;
}

SubwordVocab load_vocab(const std::string& scheme, const std::string& vocab_path,
                        const std::string& merges_path) {
  if (parse_scheme(scheme) == SubwordScheme::WordPiece) return load_wordpiece_vocab(vocab_path);
  if (merges_path.empty()) fail(ErrorKind::Usage, "--merges is required with --scheme bpe");
  require_file(merges_path, "merges");
  return load_bpe_vocab(vocab_path, merges_path);
}

std::array<LinearSvmModel, 5> load_models(const std::string& dir) {
  std::array<LinearSvmModel, 5> models;
  for (ContextDimension dim : kContextDimensions) {
    const std::string path = (fs::path(dir) / ("svm_" + dimension_name(dim) + ".txt")).string();
    require_file(path, "model");
    models[dimension_index(dim)] = model_from_string(read_file(path));
  }
  return models;
}

struct GenArgs {
  std::string out;
  std::string counts_file;
  std::int64_t seed = -1;  // -1: keep file/default seed
};

int cmd_gen(const GenArgs& args) {
  GenConfig config = args.counts_file.empty() ? default_gen_config()
                                              : load_gen_config(args.counts_file);
  if (args.seed >= 0) config.seed = static_cast<std::uint32_t>(args.seed);
  GeneratedCorpora corpora = generate_to_dir(config, args.out);
  std::cout << "generated " << corpora.train.notes.size() << " train notes ("
            << corpora.train.mentions.size() << " mentions), " << corpora.test.notes.size()
            << " test notes (" << corpora.test.mentions.size() << " mentions) under " << args.out
            << "\n";
  Manifest manifest;
  manifest.command = "gen";
  manifest.config["seed"] = std::to_string(config.seed);
  if (!args.counts_file.empty()) {
    manifest.config["counts"] = args.counts_file;
    manifest.inputs.push_back(args.counts_file);
  }
  manifest.outputs = {"train", "test"};
  write_manifest(args.out, manifest);
  return 0;
}

struct InArgs {
  std::string in;
  std::string format = "text";
};

int cmd_validate(const InArgs& args) {
  require_dir(args.in, "input");
  std::vector<std::string> warnings;
  Corpus corpus = load_corpus(args.in, Split::Train, &warnings);
  print_warnings(warnings);
  std::vector<std::string> violations = validate_corpus(corpus);
  for (const std::string& v : violations) std::cout << "violation: " << v << "\n";
  std::cout << corpus.notes.size() << " notes, " << corpus.mentions.size() << " mentions, "
            << violations.size() << " violation(s)\n";
  if (!violations.empty())
    fail(ErrorKind::Integrity, "corpus failed validation");
  return 0;
}

int cmd_stats(const InArgs& args) {
  require_dir(args.in, "input");
  std::vector<std::string> warnings;
  Corpus corpus = load_corpus(args.in, Split::Train, &warnings);
  print_warnings(warnings);
  LabelHistogram hist = histogram(corpus);
  std::cout << (args.format == "json" ? histogram_to_json(hist) : histogram_to_text(hist));
  return 0;
}

struct PreprocessArgs {
  std::string in;
  std::string notes;
  std::string out;
  std::string task = "all";
  std::string scheme = "wordpiece";
  std::string vocab;
  std::string merges;
  bool lowercase = false;
  std::size_t max_seq_len = 512;
  std::size_t jobs = 1;
};

int cmd_preprocess(const PreprocessArgs& args) {
  require_dir(args.in, "input");
  if (args.max_seq_len < 8) fail(ErrorKind::Usage, "--max-seq-len must be at least 8");
  const std::string txt_dir = args.notes.empty() ? args.in : args.notes;
  Corpus corpus = load_validated_corpus(args.in, txt_dir, Split::Train);

  const bool want1 = args.task == "all" || args.task == "1";
  const bool want2 = args.task == "all" || args.task == "2";
  const bool want3 = args.task == "all" || args.task == "3";

  fs::create_directories(args.out);
  Manifest manifest;
  manifest.command = "preprocess";
  manifest.config = {{"task", args.task},
                     {"scheme", args.scheme},
                     {"lowercase", args.lowercase ? "true" : "false"},
                     {"max_seq_len", std::to_string(args.max_seq_len)}};
  manifest.inputs.push_back(args.in);
  if (!args.notes.empty()) manifest.inputs.push_back(args.notes);

  if (want1 || want2) {
    require_file(args.vocab, "vocabulary");
    SubwordVocab vocab = load_vocab(args.scheme, args.vocab, args.merges);
    manifest.inputs.push_back(args.vocab);
    if (!args.merges.empty()) manifest.inputs.push_back(args.merges);
    PreprocessOptions opts;
    opts.lowercase = args.lowercase;
    opts.max_seq_len = args.max_seq_len;

    for (TaskMode mode : {TaskMode::Task1, TaskMode::Task2}) {
      if ((mode == TaskMode::Task1 && !want1) || (mode == TaskMode::Task2 && !want2)) continue;
      auto per_note = parallel_map(corpus.notes, args.jobs, [&](const ClinicalNote& note) {
        return preprocess_note(note, corpus.mentions_of(note.doc_id), vocab, mode, opts);
      });
      std::string jsonl;
      std::size_t count = 0;
      for (const auto& sequences : per_note) {
        jsonl += bio_sequences_to_jsonl(sequences);
        count += sequences.size();
      }
      const std::string name = mode == TaskMode::Task1 ? "task1.jsonl" : "task2.jsonl";
      write_file((fs::path(args.out) / name).string(), jsonl);
      manifest.outputs.push_back(name);
      std::cout << name << ": " << count << " sequences\n";
    }
  }
  if (want3) {
    std::vector<Task3Instance> instances = extract_task3_instances(corpus);
    write_file((fs::path(args.out) / "task3_instances.jsonl").string(),
               task3_instances_to_jsonl(instances));
    manifest.outputs.push_back("task3_instances.jsonl");
    std::cout << "task3_instances.jsonl: " << instances.size() << " instances\n";
  }
  write_manifest(args.out, manifest);
  return 0;
}

struct TagArgs {
  std::string train;
  std::string in;
  std::string out;
  std::size_t jobs = 1;
};

int cmd_tag_baseline(const TagArgs& args) {
  require_dir(args.train, "training");
  require_dir(args.in, "input");
  Corpus train = load_validated_corpus(args.train, args.train, Split::Train);
  Lexicon lexicon = build_lexicon(train);

  std::vector<ClinicalNote> notes = load_notes(args.in);
  auto tagged = parallel_map(notes, args.jobs,
                             [&](const ClinicalNote& note) { return tag(note, lexicon); });

  fs::create_directories(args.out);
  std::size_t total = 0;
  for (std::size_t i = 0; i < notes.size(); ++i) {
    write_file((fs::path(args.out) / (notes[i].doc_id + ".ann")).string(), emit_ann(tagged[i]));
    total += tagged[i].size();
  }
  write_file((fs::path(args.out) / "lexicon.tsv").string(), lexicon_to_tsv(lexicon));
  std::cout << "tagged " << total << " mentions across " << notes.size() << " notes ("
            << lexicon.entries.size() << " lexicon entries)\n";

  Manifest manifest;
  manifest.command = "tag-baseline";
  manifest.inputs = {args.train, args.in};
  manifest.outputs = {"lexicon.tsv"};
  for (const ClinicalNote& note : notes) manifest.outputs.push_back(note.doc_id + ".ann");
  write_manifest(args.out, manifest);
  return 0;
}

struct EmbedArgs {
  std::string instances;
  std::string out;
  std::size_t dim = 256;
  std::size_t seed = 0;
  std::size_t jobs = 1;
};

int cmd_embed(const EmbedArgs& args) {
  require_file(args.instances, "instances");
  std::vector<Task3Instance> instances = task3_instances_from_jsonl(read_file(args.instances));

  struct Embedded {
    EmbeddingRecord record;
    std::vector<std::string> warnings;
  };
  auto embedded = parallel_map(instances, args.jobs, [&](const Task3Instance& inst) {
    Embedded e;
    e.record = hash_embed(inst, args.dim, args.seed, &e.warnings);
    return e;
  });

  EmbeddingTable table;
  table.dimension = args.dim;
  for (const Embedded& e : embedded) {
    print_warnings(e.warnings);
    if (!table.by_id.emplace(e.record.mention_id, e.record.vector).second)
      fail(ErrorKind::Format, "duplicate instance id \"" + e.record.mention_id + "\"");
  }
  fs::create_directories(args.out);
  save_embeddings((fs::path(args.out) / "embeddings.txt").string(), table);
  std::cout << "embedded " << table.by_id.size() << " instances at d=" << args.dim << "\n";

  Manifest manifest;
  manifest.command = "embed";
  manifest.config = {{"dim", std::to_string(args.dim)}, {"seed", std::to_string(args.seed)}};
  manifest.inputs = {args.instances};
  manifest.outputs = {"embeddings.txt"};
  write_manifest(args.out, manifest);
  return 0;
}

struct TrainContextArgs {
  std::string instances;
  std::string embeddings;
  std::string out;
  double lambda = 1e-3;
  std::size_t epochs = 100;
  std::size_t seed = 42;
  bool balanced = false;
};

int cmd_train_context(const TrainContextArgs& args) {
  require_file(args.instances, "instances");
  require_file(args.embeddings, "embeddings");
  std::vector<Task3Instance> instances = task3_instances_from_jsonl(read_file(args.instances));
  EmbeddingTable table = load_embeddings(args.embeddings);

  SvmTrainOptions options;
  options.lambda = args.lambda;
  options.epochs = args.epochs;
  options.seed = static_cast<std::uint32_t>(args.seed);
  options.balanced = args.balanced;

  fs::create_directories(args.out);
  Manifest manifest;
  manifest.command = "train-context";
  manifest.config = {{"lambda", format_full(args.lambda)},
                     {"epochs", std::to_string(args.epochs)},
                     {"seed", std::to_string(args.seed)},
                     {"balanced", args.balanced ? "true" : "false"}};
  manifest.inputs = {args.instances, args.embeddings};

  for (ContextDimension dim : kContextDimensions) {
    std::vector<TrainingInstance> data;
    std::vector<std::string> missing;
    for (const Task3Instance& inst : instances) {
      if (!inst.labels)
        fail(ErrorKind::Usage,
             "instance " + inst.instance_id + " has no gold labels; cannot train");
      auto it = table.by_id.find(inst.instance_id);
      if (it == table.by_id.end()) {
        missing.push_back(inst.instance_id);
        continue;
      }
      data.push_back({it->second, get_dimension_label(*inst.labels, dim)});
    }
    if (!missing.empty())
      fail(ErrorKind::Completeness,
           "no embedding for instance \"" + missing.front() + "\" (and " +
               std::to_string(missing.size() - 1) + " more)");
    LinearSvmModel model = train_svm(data, dim, options);
    const std::string name = "svm_" + dimension_name(dim) + ".txt";
    write_file((fs::path(args.out) / name).string(), model_to_string(model));
    manifest.outputs.push_back(name);
    std::cout << name << ": trained on " << data.size() << " instances, objective "
              << format_full(hinge_objective(model, data)) << "\n";
  }
  write_manifest(args.out, manifest);
  return 0;
}

struct PredictArgs {
  std::string notes;
  std::string ann;
  std::string bio;
  std::string task = "2";
  std::string models;
  std::string embeddings;
  std::string out;
};

int cmd_predict(const PredictArgs& args) {
  require_dir(args.notes, "notes");
  if (args.ann.empty() == args.bio.empty())
    fail(ErrorKind::Usage, "exactly one of --ann or --bio must be given");

  std::vector<ClinicalNote> notes = load_notes(args.notes);
  std::vector<MedicationMention> mentions;
  Manifest manifest;
  manifest.command = "predict";

  if (!args.ann.empty()) {
    require_dir(args.ann, "annotations");
    std::vector<std::string> warnings;
    Corpus corpus = load_corpus_paired(args.ann, args.notes, Split::Test, &warnings);
    print_warnings(warnings);
    mentions = corpus.mentions;
    manifest.inputs.push_back(args.ann);
  } else {
    require_file(args.bio, "bio sequences");
    if (args.task != "1" && args.task != "2")
      fail(ErrorKind::Usage, "--task must be 1 or 2 with --bio");
    TaskMode mode = args.task == "1" ? TaskMode::Task1 : TaskMode::Task2;
    std::vector<PredictedSequence> sequences = bio_sequences_from_jsonl(read_file(args.bio));
    std::map<std::string, std::vector<PredictedSequence>> by_doc;
    for (PredictedSequence& seq : sequences) by_doc[seq.doc_id].push_back(std::move(seq));
    for (const ClinicalNote& note : notes) {
      auto it = by_doc.find(note.doc_id);
      if (it == by_doc.end()) continue;
      auto decoded = merge_chunk_predictions(note, it->second, mode);
      for (std::size_t i = 0; i < decoded.size(); ++i)
        decoded[i].mention_id = "T" + std::to_string(i + 1);
      mentions.insert(mentions.end(), decoded.begin(), decoded.end());
      by_doc.erase(it);
    }
    if (!by_doc.empty())
      fail(ErrorKind::Reference,
           "predicted sequences reference unknown doc \"" + by_doc.begin()->first + "\"");
    manifest.inputs.push_back(args.bio);
  }
  manifest.inputs.push_back(args.notes);
  manifest.config["task"] = args.task;

  if (!args.models.empty()) {
    require_dir(args.models, "models");
    require_file(args.embeddings, "embeddings");
    auto models = load_models(args.models);
    EmbeddingTable table = load_embeddings(args.embeddings);
    DimensionPredictions predictions = classify_corpus(models, table, mentions);
    std::vector<std::string> warnings;
    mentions = attach_context(std::move(mentions), predictions, &warnings);
    print_warnings(warnings);
    manifest.inputs.push_back(args.models);
    manifest.inputs.push_back(args.embeddings);
  }

  fs::create_directories(args.out);
  std::map<std::string, std::vector<MedicationMention>> grouped;
  for (MedicationMention& m : mentions) grouped[m.doc_id].push_back(std::move(m));
  for (const ClinicalNote& note : notes) {
    auto it = grouped.find(note.doc_id);
    const std::vector<MedicationMention> empty;
    write_file((fs::path(args.out) / (note.doc_id + ".ann")).string(),
               emit_ann(it == grouped.end() ? empty : it->second));
    manifest.outputs.push_back(note.doc_id + ".ann");
  }
  std::cout << "wrote predictions for " << notes.size() << " notes\n";
  write_manifest(args.out, manifest);
  return 0;
}

struct EvaluateArgs {
  std::string gold;
  std::string pred;
  std::string notes;
  std::string format = "text";
  std::string out;
  bool macro = false;
};

int cmd_evaluate(const EvaluateArgs& args) {
  require_dir(args.gold, "gold");
  require_dir(args.pred, "predictions");
  const std::string txt_dir = args.notes.empty() ? args.gold : args.notes;
  std::vector<std::string> warnings;
  Corpus gold = load_corpus_paired(args.gold, txt_dir, Split::Test, &warnings);
  Corpus pred = load_corpus_paired(args.pred, txt_dir, Split::Test, &warnings);
  print_warnings(warnings);

  EvalReport report = evaluate_all(gold.mentions, pred.mentions, args.macro);
  std::cout << render_report(report, ReportFormat::Text);

  if (!args.out.empty()) {
    ReportFormat format = parse_report_format(args.format);
    const char* ext = format == ReportFormat::Json ? "json"
                      : format == ReportFormat::Csv ? "csv"
                                                    : "txt";
    fs::create_directories(args.out);
    const std::string name = std::string("report.") + ext;
    write_file((fs::path(args.out) / name).string(), render_report(report, format));
    Manifest manifest;
    manifest.command = "evaluate";
    manifest.config = {{"format", args.format}, {"macro", args.macro ? "true" : "false"}};
    manifest.inputs = {args.gold, args.pred};
    if (!args.notes.empty()) manifest.inputs.push_back(args.notes);
    manifest.outputs = {name};
    write_manifest(args.out, manifest);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medication event extraction toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  // Flat key-value config; every key is a flag twin, e.g. preprocess.scheme=bpe.
  // Flags given on the command line win over config values.
  app.set_config("--config", "",
                 "key=value config file; keys are <subcommand>.<flag>, flags win");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic corpus");
  gen->add_option("--out", gen_args.out, "output directory")->required();
  gen->add_option("--seed", gen_args.seed, "generation seed (overrides counts file)");
  gen->add_option("--counts", gen_args.counts_file, "label count config file");

  InArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "check corpus invariants");
  validate->add_option("--in", validate_args.in, "corpus directory")->required();

  InArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "print label histograms");
  stats->add_option("--in", stats_args.in, "corpus directory")->required();
  stats->add_option("--format", stats_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  PreprocessArgs pre_args;
  CLI::App* preprocess = app.add_subcommand("preprocess", "segment, tokenize and tag a corpus");
  preprocess->add_option("--in", pre_args.in, "corpus directory (.ann + .txt)")->required();
  preprocess->add_option("--notes", pre_args.notes, "note directory when --in has no .txt");
  preprocess->add_option("--out", pre_args.out, "output directory")->required();
  preprocess->add_option("--task", pre_args.task, "1, 2, 3 or all")
      ->check(CLI::IsMember({"1", "2", "3", "all"}));
  preprocess->add_option("--scheme", pre_args.scheme, "wordpiece or bpe")
      ->check(CLI::IsMember({"wordpiece", "bpe"}));
  preprocess->add_option("--vocab", pre_args.vocab, "subword vocabulary file");
  preprocess->add_option("--merges", pre_args.merges, "BPE merges file");
  preprocess->add_flag("--lowercase", pre_args.lowercase, "fold ASCII case before tokenizing");
  preprocess->add_option("--max-seq-len", pre_args.max_seq_len, "chunk limit (default 512)");
  preprocess->add_option("--jobs", pre_args.jobs, "worker threads");

  TagArgs tag_args;
  CLI::App* tag_cmd = app.add_subcommand("tag-baseline", "lexicon tagger for tasks 1-2");
  tag_cmd->add_option("--train", tag_args.train, "training corpus directory")->required();
  tag_cmd->add_option("--in", tag_args.in, "directory of notes to tag")->required();
  tag_cmd->add_option("--out", tag_args.out, "output directory")->required();
  tag_cmd->add_option("--jobs", tag_args.jobs, "worker threads");

  EmbedArgs embed_args;
  CLI::App* embed = app.add_subcommand("embed", "hash-embed task-3 instances");
  embed->add_option("--instances", embed_args.instances, "task3_instances.jsonl")->required();
  embed->add_option("--out", embed_args.out, "output directory")->required();
  embed->add_option("--dim", embed_args.dim, "embedding dimension (default 256)");
  embed->add_option("--seed", embed_args.seed, "hashing seed");
  embed->add_option("--jobs", embed_args.jobs, "worker threads");

  TrainContextArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train-context", "train the five dimension SVMs");
  train_cmd->add_option("--instances", train_args.instances, "labeled task3_instances.jsonl")
      ->required();
  train_cmd->add_option("--embeddings", train_args.embeddings, "embeddings file")->required();
  train_cmd->add_option("--out", train_args.out, "output directory")->required();
  train_cmd->add_option("--lambda", train_args.lambda, "regularization (default 1e-3)");
  train_cmd->add_option("--epochs", train_args.epochs, "training epochs (default 100)");
  train_cmd->add_option("--seed", train_args.seed, "shuffling seed (default 42)");
  train_cmd->add_flag("--balanced", train_args.balanced, "inverse-frequency example weights");

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "reconstruct standoff predictions");
  predict->add_option("--notes", predict_args.notes, "note directory")->required();
  predict->add_option("--ann", predict_args.ann, "predicted .ann directory");
  predict->add_option("--bio", predict_args.bio, "predicted BIO jsonl file");
  predict->add_option("--task", predict_args.task, "BIO tag set: 1 or 2");
  predict->add_option("--models", predict_args.models, "context model directory");
  predict->add_option("--embeddings", predict_args.embeddings, "embeddings for --models");
  predict->add_option("--out", predict_args.out, "output directory")->required();

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "strict/lenient n2c2-style scoring");
  evaluate->add_option("--gold", eval_args.gold, "gold corpus directory")->required();
  evaluate->add_option("--pred", eval_args.pred, "prediction directory")->required();
  evaluate->add_option("--notes", eval_args.notes, "note directory (default: gold)");
  evaluate->add_option("--format", eval_args.format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  evaluate->add_option("--out", eval_args.out, "directory for the report file");
  evaluate->add_flag("--macro", eval_args.macro, "macro-average the task-3 overall score");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (validate->parsed()) return cmd_validate(validate_args);
    if (stats->parsed()) return cmd_stats(stats_args);
    if (preprocess->parsed()) return cmd_preprocess(pre_args);
    if (tag_cmd->parsed()) return cmd_tag_baseline(tag_args);
    if (embed->parsed()) return cmd_embed(embed_args);
    if (train_cmd->parsed()) return cmd_train_context(train_args);
    if (predict->parsed()) return cmd_predict(predict_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const Error& e) {
    std::cerr << "medex: " << error_kind_name(e.kind()) << " error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "medex: error: " << e.what() << "\n";
    return 2;
  }
}
