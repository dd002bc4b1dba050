#include <doctest.h>

#include <filesystem>

#include "medex/brat.hpp"
#include "medex/synth.hpp"

using namespace medex;
namespace fs = std::filesystem;

namespace {

GenConfig small_config() {
  GenConfig config = default_gen_config();
  config.train.notes = 10;
  config.train.drug = 120;
  config.train.events = {{EventLabel::Disposition, 40},
                         {EventLabel::NoDisposition, 60},
                         {EventLabel::Undetermined, 20}};
  config.train.context[0] = {{"Start", 10}, {"Stop", 10},       {"Increase", 5},
                             {"Decrease", 5}, {"UniqueDose", 5}, {"OtherChange", 1},
                             {"Unknown", 4}};
  config.train.context[1] = {{"Past", 10}, {"Present", 20}, {"Future", 5}, {"Unknown", 5}};
  config.train.context[2] = {
      {"Certain", 25}, {"Hypothetical", 5}, {"Conditional", 5}, {"Unknown", 5}};
  config.train.context[3] = {{"Physician", 30}, {"Patient", 5}, {"Unknown", 5}};
  config.train.context[4] = {{"Negated", 4}, {"NotNegated", 36}};
  config.test.notes = 3;
  config.test.drug = 30;
  config.test.events = {{EventLabel::Disposition, 10},
                        {EventLabel::NoDisposition, 15},
                        {EventLabel::Undetermined, 5}};
  config.test.context[0] = {{"Start", 5}, {"Stop", 5}};
  config.test.context[1] = {{"Past", 5}, {"Present", 5}};
  config.test.context[2] = {{"Certain", 10}};
  config.test.context[3] = {{"Physician", 10}};
  config.test.context[4] = {{"NotNegated", 10}};
  return config;
}

}  // namespace

TEST_CASE("generated corpora match the configured histograms exactly") {
  GenConfig config = small_config();
  GeneratedCorpora corpora = generate(config);
  CHECK(corpora.train.notes.size() == 10);
  CHECK(corpora.test.notes.size() == 3);

  LabelHistogram train = histogram(corpora.train);
  CHECK(train.drug == 120);
  CHECK(train.events.at(EventLabel::Disposition) == 40);
  CHECK(train.events.at(EventLabel::NoDisposition) == 60);
  CHECK(train.events.at(EventLabel::Undetermined) == 20);
  for (ContextDimension dim : kContextDimensions) {
    std::size_t idx = static_cast<std::size_t>(dim);
    for (const auto& [cls, n] : config.train.context[idx]) {
      auto it = train.context[idx].find(cls);
      std::size_t got = it == train.context[idx].end() ? 0 : it->second;
      CHECK(got == n);
    }
  }
  LabelHistogram test = histogram(corpora.test);
  CHECK(test.drug == 30);
  CHECK(test.context[0].at("Start") == 5);
}

TEST_CASE("generation is deterministic for a fixed seed, and seed-sensitive") {
  GenConfig config = small_config();
  GeneratedCorpora a = generate(config);
  GeneratedCorpora b = generate(config);
  REQUIRE(a.train.notes.size() == b.train.notes.size());
  for (std::size_t i = 0; i < a.train.notes.size(); ++i)
    CHECK(a.train.notes[i].text == b.train.notes[i].text);
  REQUIRE(a.train.mentions.size() == b.train.mentions.size());
  for (std::size_t i = 0; i < a.train.mentions.size(); ++i)
    CHECK(a.train.mentions[i] == b.train.mentions[i]);

  config.seed = 8;
  GeneratedCorpora c = generate(config);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.train.notes.size(); ++i)
    any_difference |= a.train.notes[i].text != c.train.notes[i].text;
  CHECK(any_difference);
}

TEST_CASE("generated files parse back into a corpus with zero violations") {
  fs::path dir = fs::path(MEDEX_WORK_DIR) / "synth_roundtrip";
  fs::remove_all(dir);
  GenConfig config = small_config();
  generate_to_dir(config, dir.string());

  std::vector<std::string> warnings;
  Corpus train = load_corpus((dir / "train").string(), Split::Train, &warnings);
  CHECK(warnings.empty());
  CHECK(validate_corpus(train).empty());
  CHECK(train.mentions.size() == 120);
  Corpus test = load_corpus((dir / "test").string(), Split::Test);
  CHECK(validate_corpus(test).empty());
  CHECK(test.mentions.size() == 30);

  // byte determinism across regenerations
  std::string before = read_file((dir / "train" / "train-0001.ann").string());
  generate_to_dir(config, dir.string());
  CHECK(read_file((dir / "train" / "train-0001.ann").string()) == before);
}

TEST_CASE("inconsistent counts are a config error before any file is written") {
  GenConfig config = small_config();
  config.train.context[0]["Start"] = 11;  // action now sums to 41 != 40
  fs::path dir = fs::path(MEDEX_WORK_DIR) / "synth_invalid";
  fs::remove_all(dir);
  CHECK_THROWS_AS(generate_to_dir(config, dir.string()), Error);
  CHECK(!fs::exists(dir));

  config = small_config();
  config.train.drug = 121;  // events sum to 120
  try {
    generate(config);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("default config reproduces the published distribution shape") {
  GenConfig config = default_gen_config();
  CHECK(config.seed == 7);
  CHECK(config.train.notes + config.test.notes == 500);
  validate_gen_config(config);  // internally consistent
  CHECK(config.train.drug == 7229);
  CHECK(config.test.drug == 1783);
  CHECK(config.train.events.at(EventLabel::Disposition) == 1412);
  CHECK(config.test.events.at(EventLabel::Undetermined) == 122);
  CHECK(config.train.context[0].at("OtherChange") == 1);
  CHECK(config.test.context[0].at("OtherChange") == 0);
  CHECK(config.test.context[1].at("Unknown") == 1);
  CHECK(config.train.context[4].at("Negated") == 32);
}

TEST_CASE("config files override defaults key by key") {
  fs::path dir = fs::path(MEDEX_WORK_DIR) / "synth_config";
  fs::create_directories(dir);
  write_file((dir / "counts.cfg").string(),
             "# comment\n"
             "seed = 99\n"
             "train.notes = 12\n"
             "train.event.Disposition = 1000\n"
             "train.Action.Start = 156\n");
  GenConfig config = load_gen_config((dir / "counts.cfg").string());
  CHECK(config.seed == 99);
  CHECK(config.train.notes == 12);
  CHECK(config.train.events.at(EventLabel::Disposition) == 1000);
  CHECK(config.train.context[0].at("Start") == 156);
  // untouched keys keep defaults
  CHECK(config.test.notes == 100);

  write_file((dir / "bad.cfg").string(), "train.bogus.key = 3\n");
  CHECK_THROWS_AS(load_gen_config((dir / "bad.cfg").string()), Error);
  write_file((dir / "bad2.cfg").string(), "seed ninety\n");
  CHECK_THROWS_AS(load_gen_config((dir / "bad2.cfg").string()), Error);
}

TEST_CASE("histogram renderings are deterministic") {
  GeneratedCorpora corpora = generate(small_config());
  LabelHistogram hist = histogram(corpora.train);
  CHECK(histogram_to_text(hist) == histogram_to_text(hist));
  CHECK(histogram_to_text(hist).find("Drug\t120") == 0);
  CHECK(histogram_to_json(hist).find("\"drug\": 120") != std::string::npos);
}
