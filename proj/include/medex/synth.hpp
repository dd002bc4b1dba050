#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "medex/corpus.hpp"

namespace medex {

// Per-split generation targets. Defaults reproduce the published CMED
// distributions exactly.
struct SplitCounts {
  std::size_t notes = 0;
  std::size_t drug = 0;  // must equal the sum of event counts
  std::map<EventLabel, std::size_t> events;
  // Per dimension (taxonomy order): class name -> count. Each dimension
  // must sum to the Disposition count.
  std::array<std::map<std::string, std::size_t>, 5> context;
};

struct GenConfig {
  std::uint32_t seed = 7;
  SplitCounts train;
  SplitCounts test;
};

GenConfig default_gen_config();

// Flat key=value file: seed, train.notes, train.drug,
// train.event.<EventLabel>, train.<Dimension>.<Class>, same for test.
// Unknown keys are config errors. Values override the defaults.
GenConfig load_gen_config(const std::string& path);

// Raises a Config error when any dimension's counts do not sum to the
// Disposition count or the drug total disagrees with the event sum.
void validate_gen_config(const GenConfig& config);

struct GeneratedCorpora {
  Corpus train;
  Corpus test;
};

// Deterministic for a fixed seed: label multisets are exact partitions,
// sentence wording correlates with labels so classifiers can beat chance.
GeneratedCorpora generate(const GenConfig& config);

// generate() + standoff files under out_dir/train and out_dir/test.
GeneratedCorpora generate_to_dir(const GenConfig& config, const std::string& out_dir);

struct LabelHistogram {
  std::size_t drug = 0;
  std::map<EventLabel, std::size_t> events;
  std::array<std::map<std::string, std::size_t>, 5> context;
};

LabelHistogram histogram(const Corpus& corpus);
std::string histogram_to_text(const LabelHistogram& hist);
std::string histogram_to_json(const LabelHistogram& hist);

}  // namespace medex
