#include "medex/synth.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "medex/brat.hpp"

namespace medex {

namespace {

const std::vector<std::string>& medication_pool() {
  static const std::vector<std::string> pool = {
      "aspirin",       "lisinopril",   "metformin",     "atorvastatin",
      "warfarin",      "insulin",      "insulin glargine", "furosemide",
      "gabapentin",    "prednisone",   "amlodipine",    "omeprazole",
      "levothyroxine", "clopidogrel",  "losartan",      "simvastatin",
      "sertraline",    "albuterol",    "ibuprofen",     "acetaminophen",
      "metoprolol",    "citalopram",   "hydralazine",   "vitamin d"};
  return pool;
}

const std::vector<std::string>& section_headers() {
  static const std::vector<std::string> headers = {
      "MEDICATIONS:", "ASSESSMENT AND PLAN:", "CURRENT THERAPY:", "HOSPITAL COURSE:",
      "DISCHARGE INSTRUCTIONS:"};
  return headers;
}

// Cue vocabularies: every class owns tokens no other class (and no other
// template) uses, so each dimension stays linearly learnable from the
// sentence alone.
// Single-token verbs keep every cue at a stable offset from the mention.
std::vector<std::string> action_cues(ActionLabel label) {
  switch (label) {
    case ActionLabel::Start: return {"started", "initiated"};
    case ActionLabel::Stop: return {"stopped", "discontinued"};
    case ActionLabel::Increase: return {"increased", "uptitrated"};
    case ActionLabel::Decrease: return {"decreased", "tapered"};
    case ActionLabel::UniqueDose: return {"dosed", "bolused"};
    case ActionLabel::OtherChange: return {"reformulated"};
    case ActionLabel::Unknown: return {"changed", "modified"};
  }
  return {"changed"};
}

std::vector<std::string> temporality_cues(TemporalityLabel label) {
  switch (label) {
    case TemporalityLabel::Past: return {"yesterday", "previously"};
    case TemporalityLabel::Present: return {"today", "currently"};
    case TemporalityLabel::Future: return {"tomorrow", "soon"};
    case TemporalityLabel::Unknown: return {"sometime", "whenever"};
  }
  return {"sometime"};
}

std::vector<std::string> certainty_cues(CertaintyLabel label) {
  switch (label) {
    case CertaintyLabel::Certain: return {"definitely", "clearly"};
    case CertaintyLabel::Hypothetical: return {"might have", "potentially"};
    case CertaintyLabel::Conditional: return {"conditionally", "provisionally"};
    case CertaintyLabel::Unknown: return {"ambiguously", "vaguely"};
  }
  return {"definitely"};
}

std::vector<std::string> actor_cues(ActorLabel label) {
  switch (label) {
    case ActorLabel::Physician: return {"dr cole", "dr patel", "the physician"};
    case ActorLabel::Patient: return {"the patient"};
    case ActorLabel::Unknown: return {"someone", "somebody"};
  }
  return {"someone"};
}

std::vector<std::string> no_disposition_templates() {
  return {
      "He continues {MED} each morning .",
      "She remains on {MED} without change .",
      "Home regimen includes {MED} at bedtime .",
      "They take {MED} for chronic management .",
      "Refill provided for {MED} this visit .",
  };
}

std::vector<std::string> undetermined_templates() {
  return {
      "Records mention {MED} but the plan is unclear .",
      "Outside notes reference {MED} with incomplete details .",
      "Documentation regarding {MED} remains undetermined .",
  };
}

std::string pick(const std::vector<std::string>& options, std::mt19937& rng) {
  return options[bounded_rand(rng, static_cast<std::uint32_t>(options.size()))];
}

// Medication choice leans toward an event-specific slice of the pool so a
// surface-form lexicon learns a non-trivial event mix; label counts are
// unaffected.
std::string pick_medication(EventLabel event, std::mt19937& rng) {
  const std::vector<std::string>& pool = medication_pool();
  const std::size_t third = pool.size() / 3;
  if (bounded_rand(rng, 10) < 7) {
    const std::size_t lo = static_cast<std::size_t>(event) * third;
    const std::size_t n = event == EventLabel::Undetermined ? pool.size() - lo : third;
    return pool[lo + bounded_rand(rng, static_cast<std::uint32_t>(n))];
  }
  return pool[bounded_rand(rng, static_cast<std::uint32_t>(pool.size()))];
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Builds one sentence and reports where the medication sits inside it.
struct ComposedSentence {
  std::string text;
  std::size_t med_begin = 0;
  std::size_t med_end = 0;
};

ComposedSentence instantiate(const std::string& templ, const std::string& med) {
  ComposedSentence out;
  std::size_t pos = templ.find("{MED}");
  out.text = templ.substr(0, pos) + med + templ.substr(pos + 5);
  out.med_begin = pos;
  out.med_end = pos + med.size();
  return out;
}

ComposedSentence compose_sentence(EventLabel event, const ContextLabels* context,
                                  const std::string& med, std::mt19937& rng) {
  if (event == EventLabel::NoDisposition)
    return instantiate(pick(no_disposition_templates(), rng), med);
  if (event == EventLabel::Undetermined)
    return instantiate(pick(undetermined_templates(), rng), med);

  std::string sentence = capitalize(pick(actor_cues(context->actor), rng));
  sentence += " " + pick(certainty_cues(context->certainty), rng);
  if (context->negation == NegationLabel::Negated) sentence += " never";
  sentence += " " + pick(action_cues(context->action), rng);
  sentence += " ";
  ComposedSentence out;
  out.med_begin = sentence.size();
  sentence += med;
  out.med_end = sentence.size();
  sentence += " " + pick(temporality_cues(context->temporality), rng) + " .";
  out.text = std::move(sentence);
  return out;
}

std::vector<EventLabel> event_multiset(const SplitCounts& counts, std::mt19937& rng) {
  std::vector<EventLabel> events;
  for (EventLabel label :
       {EventLabel::Disposition, EventLabel::NoDisposition, EventLabel::Undetermined}) {
    auto it = counts.events.find(label);
    std::size_t n = it == counts.events.end() ? 0 : it->second;
    events.insert(events.end(), n, label);
  }
  deterministic_shuffle(events, rng);
  return events;
}

std::array<std::vector<std::string>, 5> context_queues(const SplitCounts& counts,
                                                       std::mt19937& rng) {
  std::array<std::vector<std::string>, 5> queues;
  for (ContextDimension dim : kContextDimensions) {
    std::size_t idx = static_cast<std::size_t>(dim);
    for (const std::string& cls : dimension_classes(dim)) {
      auto it = counts.context[idx].find(cls);
      std::size_t n = it == counts.context[idx].end() ? 0 : it->second;
      queues[idx].insert(queues[idx].end(), n, cls);
    }
    deterministic_shuffle(queues[idx], rng);
  }
  return queues;
}

std::string zero_pad(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

Corpus generate_split(const SplitCounts& counts, Split split, std::mt19937& rng) {
  Corpus corpus;
  corpus.split = split;

  std::vector<EventLabel> events = event_multiset(counts, rng);
  std::array<std::vector<std::string>, 5> queues = context_queues(counts, rng);
  std::array<std::size_t, 5> queue_pos{};

  const std::size_t total = events.size();
  const std::size_t notes = counts.notes;
  if (notes == 0) fail(ErrorKind::Config, "note count must be positive");
  const std::size_t base = total / notes;
  const std::size_t extra = total % notes;

  std::size_t event_cursor = 0;
  for (std::size_t ni = 0; ni < notes; ++ni) {
    const std::string doc_id = to_string(split) + "-" + zero_pad(ni + 1, 4);
    std::string text;
    std::vector<MedicationMention> mentions;
    const std::size_t mention_count = base + (ni < extra ? 1 : 0);

    std::size_t sentences_in_section = 0;
    for (std::size_t mi = 0; mi < mention_count; ++mi) {
      if (sentences_in_section == 0) {
        if (!text.empty()) text += "\n";
        text += pick(section_headers(), rng) + "\n\n";
      }
      EventLabel event = events[event_cursor++];
      std::optional<ContextLabels> context;
      if (event == EventLabel::Disposition) {
        ContextLabels labels;
        for (ContextDimension dim : kContextDimensions) {
          std::size_t idx = static_cast<std::size_t>(dim);
          set_dimension_label(labels, dim, queues[idx][queue_pos[idx]++]);
        }
        context = labels;
      }
      const std::string med = pick_medication(event, rng);
      ComposedSentence sentence =
          compose_sentence(event, context ? &*context : nullptr, med, rng);

      MedicationMention m;
      m.mention_id = "T" + std::to_string(mi + 1);
      m.doc_id = doc_id;
      m.span = Span{text.size() + sentence.med_begin, text.size() + sentence.med_end};
      m.surface = med;
      m.event = event;
      m.context = context;
      mentions.push_back(std::move(m));

      text += sentence.text + "\n";
      sentences_in_section = (sentences_in_section + 1) % 8;
    }
    if (mention_count == 0) text = pick(section_headers(), rng) + "\n\nNo active therapy .\n";

    corpus.notes.emplace_back(doc_id, std::move(text));
    corpus.mentions.insert(corpus.mentions.end(), mentions.begin(), mentions.end());
  }
  return corpus;
}

const char* kDefaultConfigError = "generator config: ";

}  // namespace

GenConfig default_gen_config() {
  GenConfig config;
  config.seed = 7;

  config.train.notes = 400;
  config.train.drug = 7229;
  config.train.events = {{EventLabel::Disposition, 1412},
                         {EventLabel::NoDisposition, 5260},
                         {EventLabel::Undetermined, 557}};
  config.train.context[0] = {{"Start", 568},      {"Stop", 340},       {"Increase", 129},
                             {"Decrease", 54},    {"UniqueDose", 285}, {"OtherChange", 1},
                             {"Unknown", 35}};
  config.train.context[1] = {{"Past", 744}, {"Present", 494}, {"Future", 145}, {"Unknown", 29}};
  config.train.context[2] = {
      {"Certain", 1176}, {"Hypothetical", 134}, {"Conditional", 100}, {"Unknown", 2}};
  config.train.context[3] = {{"Physician", 1278}, {"Patient", 106}, {"Unknown", 28}};
  config.train.context[4] = {{"Negated", 32}, {"NotNegated", 1380}};

  config.test.notes = 100;
  config.test.drug = 1783;
  config.test.events = {{EventLabel::Disposition, 335},
                        {EventLabel::NoDisposition, 1326},
                        {EventLabel::Undetermined, 122}};
  config.test.context[0] = {{"Start", 131},    {"Stop", 67},       {"Increase", 22},
                            {"Decrease", 13},  {"UniqueDose", 88}, {"OtherChange", 0},
                            {"Unknown", 14}};
  config.test.context[1] = {{"Past", 173}, {"Present", 132}, {"Future", 29}, {"Unknown", 1}};
  config.test.context[2] = {
      {"Certain", 281}, {"Hypothetical", 33}, {"Conditional", 15}, {"Unknown", 6}};
  config.test.context[3] = {{"Physician", 311}, {"Patient", 17}, {"Unknown", 7}};
  config.test.context[4] = {{"Negated", 6}, {"NotNegated", 329}};
  return config;
}

namespace {

void apply_key(GenConfig& config, const std::string& key, const std::string& value,
               std::size_t line_no) {
  auto bad = [&](const std::string& reason) {
    fail(ErrorKind::Config,
         "config line " + std::to_string(line_no) + ": " + reason + " (key \"" + key + "\")");
  };
  std::size_t number = 0;
  try {
    number = std::stoull(value);
  } catch (const std::exception&) {
    bad("value \"" + value + "\" is not a non-negative integer");
  }

  if (key == "seed") {
    config.seed = static_cast<std::uint32_t>(number);
    return;
  }
  std::vector<std::string> parts = split(key, '.');
  if (parts.size() < 2) bad("unknown key");
  SplitCounts* counts = nullptr;
  if (parts[0] == "train") counts = &config.train;
  else if (parts[0] == "test") counts = &config.test;
  else bad("unknown split \"" + parts[0] + "\"");

  if (parts.size() == 2 && parts[1] == "notes") {
    counts->notes = number;
  } else if (parts.size() == 2 && parts[1] == "drug") {
    counts->drug = number;
  } else if (parts.size() == 3 && parts[1] == "event") {
    auto event = try_parse_event_label(parts[2]);
    if (!event) bad("unknown event label \"" + parts[2] + "\"");
    counts->events[*event] = number;
  } else if (parts.size() == 3) {
    ContextDimension dim;
    try {
      dim = parse_dimension(parts[1]);
    } catch (const Error&) {
      bad("unknown dimension \"" + parts[1] + "\"");
    }
    const auto& classes = dimension_classes(dim);
    if (std::find(classes.begin(), classes.end(), parts[2]) == classes.end())
      bad("\"" + parts[2] + "\" is not a " + parts[1] + " class");
    counts->context[static_cast<std::size_t>(dim)][parts[2]] = number;
  } else {
    bad("unknown key");
  }
}

}  // namespace

GenConfig load_gen_config(const std::string& path) {
  GenConfig config = default_gen_config();
  std::vector<std::string> lines = split(read_file(path), '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Config,
           "config line " + std::to_string(i + 1) + ": expected key=value, got \"" + line + "\"");
    apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), i + 1);
  }
  return config;
}

void validate_gen_config(const GenConfig& config) {
  for (const auto& [name, counts] :
       {std::pair<std::string, const SplitCounts*>{"train", &config.train},
        {"test", &config.test}}) {
    if (counts->notes == 0)
      fail(ErrorKind::Config, kDefaultConfigError + name + ".notes must be positive");
    std::size_t event_sum = 0;
    for (const auto& [label, n] : counts->events) event_sum += n;
    if (event_sum != counts->drug)
      fail(ErrorKind::Config, kDefaultConfigError + name + ": event counts sum to " +
                                  std::to_string(event_sum) + " but drug total is " +
                                  std::to_string(counts->drug));
    std::size_t dispositions = 0;
    if (auto it = counts->events.find(EventLabel::Disposition); it != counts->events.end())
      dispositions = it->second;
    for (ContextDimension dim : kContextDimensions) {
      std::size_t idx = static_cast<std::size_t>(dim);
      std::size_t sum = 0;
      for (const auto& [cls, n] : counts->context[idx]) sum += n;
      if (sum != dispositions)
        fail(ErrorKind::Config, kDefaultConfigError + name + ": " + dimension_name(dim) +
                                    " counts sum to " + std::to_string(sum) +
                                    " but Disposition count is " + std::to_string(dispositions));
    }
  }
}

GeneratedCorpora generate(const GenConfig& config) {
  validate_gen_config(config);
  GeneratedCorpora out;
  {
    std::mt19937 rng(config.seed);
    out.train = generate_split(config.train, Split::Train, rng);
  }
  {
    std::mt19937 rng(config.seed + 0x9E3779B9u);
    out.test = generate_split(config.test, Split::Test, rng);
  }
  return out;
}

GeneratedCorpora generate_to_dir(const GenConfig& config, const std::string& out_dir) {
  GeneratedCorpora corpora = generate(config);
  write_corpus_dir(out_dir + "/train", corpora.train);
  write_corpus_dir(out_dir + "/test", corpora.test);
  return corpora;
}

LabelHistogram histogram(const Corpus& corpus) {
  LabelHistogram hist;
  for (EventLabel label :
       {EventLabel::Disposition, EventLabel::NoDisposition, EventLabel::Undetermined})
    hist.events[label] = 0;
  for (const MedicationMention& m : corpus.mentions) {
    ++hist.drug;
    if (m.event) ++hist.events[*m.event];
    if (m.context) {
      for (ContextDimension dim : kContextDimensions) {
        std::size_t idx = static_cast<std::size_t>(dim);
        ++hist.context[idx][get_dimension_label(*m.context, dim)];
      }
    }
  }
  return hist;
}

std::string histogram_to_text(const LabelHistogram& hist) {
  std::string out = "Drug\t" + std::to_string(hist.drug) + "\n";
  for (const auto& [label, n] : hist.events)
    out += to_string(label) + "\t" + std::to_string(n) + "\n";
  for (ContextDimension dim : kContextDimensions) {
    std::size_t idx = static_cast<std::size_t>(dim);
    for (const std::string& cls : dimension_classes(dim)) {
      auto it = hist.context[idx].find(cls);
      out += dimension_name(dim) + "." + cls + "\t" +
             std::to_string(it == hist.context[idx].end() ? 0 : it->second) + "\n";
    }
  }
  return out;
}

std::string histogram_to_json(const LabelHistogram& hist) {
  nlohmann::json j;
  j["drug"] = hist.drug;
  for (const auto& [label, n] : hist.events) j["events"][to_string(label)] = n;
  for (ContextDimension dim : kContextDimensions) {
    std::size_t idx = static_cast<std::size_t>(dim);
    for (const std::string& cls : dimension_classes(dim)) {
      auto it = hist.context[idx].find(cls);
      j["context"][dimension_name(dim)][cls] =
          it == hist.context[idx].end() ? 0 : it->second;
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace medex
