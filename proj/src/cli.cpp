// Copyright 2026 The seclabel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seclabel/cli.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "io_util.hpp"
#include "seclabel/autolabel.hpp"
#include "seclabel/corpus.hpp"
#include "seclabel/eval.hpp"
#include "seclabel/features.hpp"
#include "seclabel/synth.hpp"
#include "seclabel/tagger.hpp"

namespace seclabel {
namespace {

struct CommonFlags {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct TemplateToggles {
  bool no_words = false;
  bool no_pos = false;
  bool no_history = false;
  bool no_bigrams = false;
  bool no_shapes = false;
  bool no_iob_window = false;
  bool no_gazetteer = false;
  std::string features_path;
  std::string pos_provider;

  void Register(CLI::App* cmd) {
    cmd->add_option("--features", features_path, "Feature configuration (JSON)");
    cmd->add_option("--pos", pos_provider, "POS provider: heuristic or none")
        ->check(CLI::IsMember({"heuristic", "none"}));
    cmd->add_flag("--no-words", no_words, "Disable word window templates");
    cmd->add_flag("--no-pos", no_pos, "Disable POS templates");
    cmd->add_flag("--no-history", no_history, "Disable tag history templates");
    cmd->add_flag("--no-bigrams", no_bigrams, "Disable bigram templates");
    cmd->add_flag("--no-shapes", no_shapes, "Disable word shape templates");
    cmd->add_flag("--no-iob-window", no_iob_window, "Disable stage-1 tag window templates");
    cmd->add_flag("--no-gazetteer", no_gazetteer, "Disable training gazetteer templates");
  }

  FeatureConfig Resolve() const {
    FeatureConfig config;
    if (!features_path.empty()) config = LoadFeatureConfig(features_path);
    if (!pos_provider.empty()) config.pos_provider = pos_provider;
    TemplateGroups& t = config.templates;
    if (no_words) t.words = false;
    if (no_pos) t.pos = false;
    if (no_history) t.history = false;
    if (no_bigrams) t.bigrams = false;
    if (no_shapes) t.shapes = false;
    if (no_iob_window) t.iob_window = false;
    if (no_gazetteer) t.gazetteer = false;
    return config;
  }
};

IobMode ParseIobMode(const std::string& text) {
  return text == "repair" ? IobMode::kRepair : IobMode::kStrict;
}

std::set<Phrase> LoadStoplist(const std::string& path) {
  if (path.empty()) return {};
  return ReadPhraseList(std::filesystem::path(path));
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return kExitUsage;
    case ErrorKind::kIo: return kExitIo;
    case ErrorKind::kInvalidInput:
    case ErrorKind::kMalformedInput:
    case ErrorKind::kIobViolation: return kExitBadInput;
    case ErrorKind::kCorruptModel:
    case ErrorKind::kVersionMismatch: return kExitBadModel;
  }
  return kExitInternal;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distant labeling and tagging of vulnerability descriptions", "seclabel"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags common;
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Maximum worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.set_config("--config", "", "Configuration file (TOML or INI); flags win on conflict");

  // build-gazetteer
  auto* gaz = app.add_subcommand("build-gazetteer", "Mine relevant terms from records");
  std::string gaz_records, gaz_stoplist, gaz_out;
  std::size_t min_count = kDefaultMinCount;
  std::size_t max_n = kMaxGazetteerN;
  gaz->add_option("--records", gaz_records, "Record file (JSON lines)")->required();
  gaz->add_option("--stoplist", gaz_stoplist, "Phrases to exclude");
  gaz->add_option("--min-count", min_count, "Minimum per-CWE count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gaz->add_option("--max-n", max_n, "Longest n-gram")
      ->check(CLI::Range(1, static_cast<int>(kMaxGazetteerN)))
      ->capture_default_str();
  gaz->add_option("--out", gaz_out, "Gazetteer file")->required();

  // autolabel
  auto* label = app.add_subcommand("autolabel", "Label descriptions from their records");
  std::string label_records, label_gazetteer, label_out, label_pos = "heuristic",
                                                           label_kind = "nvd";
  label->add_option("--records", label_records, "Record file (JSON lines)")->required();
  label->add_option("--gazetteer", label_gazetteer, "Gazetteer file");
  label->add_option("--out", label_out, "Corpus file")->required();
  label->add_option("--pos", label_pos, "POS provider: heuristic or none")
      ->check(CLI::IsMember({"heuristic", "none"}))
      ->capture_default_str();
  label->add_option("--kind", label_kind, "Source kind written to the corpus")
      ->check(CLI::IsMember({"nvd", "ms-bulletin", "metasploit", "synthetic", "other"}))
      ->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train the iob and domain models");
  std::string train_corpus, iob_out, domain_out, train_mode = "strict";
  std::size_t train_iterations = 5;
  bool train_shuffle = false;
  TemplateToggles train_templates;
  train->add_option("--corpus", train_corpus, "Training corpus")->required();
  train->add_option("--iob-model", iob_out, "Output iob model")->required();
  train->add_option("--domain-model", domain_out, "Output domain model")->required();
  train->add_option("--iterations", train_iterations, "Training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_flag("--shuffle", train_shuffle, "Shuffle description order each epoch (seeded)");
  train->add_option("--iob-mode", train_mode, "strict or repair")
      ->check(CLI::IsMember({"strict", "repair"}))
      ->capture_default_str();
  train_templates.Register(train);

  // tag
  auto* tag = app.add_subcommand("tag", "Tag raw text or records with trained models");
  std::string tag_input, tag_format = "text", tag_iob, tag_domain, tag_out;
  tag->add_option("--input", tag_input, "Input file")->required();
  tag->add_option("--format", tag_format, "text (one description per line) or records")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  tag->add_option("--iob-model", tag_iob, "iob model")->required();
  tag->add_option("--domain-model", tag_domain, "domain model")->required();
  tag->add_option("--out", tag_out, "Annotated corpus file")->required();

  // xval
  auto* xval = app.add_subcommand("xval", "Random sub-sampling validation");
  std::string xval_corpus, xval_report, xval_mode = "strict";
  std::size_t xval_n = 0, xval_folds = 5, xval_iterations = 5;
  double xval_split = 0.8;
  bool xval_shuffle = false, xval_timing = false;
  TemplateToggles xval_templates;
  xval->add_option("--corpus", xval_corpus, "Labeled corpus")->required();
  xval->add_option("--n", xval_n, "Descriptions per fold (default: whole corpus)");
  xval->add_option("--folds", xval_folds, "Number of random splits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  xval->add_option("--split", xval_split, "Training fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  xval->add_option("--iterations", xval_iterations, "Training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  xval->add_flag("--shuffle", xval_shuffle, "Shuffle description order each epoch (seeded)");
  xval->add_option("--report", xval_report, "Report file (JSON)");
  xval->add_flag("--report-timing", xval_timing, "Include wall-clock times in the report file");
  xval->add_option("--iob-mode", xval_mode, "strict or repair")
      ->check(CLI::IsMember({"strict", "repair"}))
      ->capture_default_str();
  xval_templates.Register(xval);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate synthetic records with gold labels");
  std::size_t synth_n = 0;
  std::string synth_records, synth_gold, synth_stoplist;
  synth->add_option("--n", synth_n, "Number of records")->required();
  synth->add_option("--records-out", synth_records, "Record file")->required();
  synth->add_option("--gold-out", synth_gold, "Gold corpus file")->required();
  synth->add_option("--stoplist-out", synth_stoplist, "Stoplist matching the generator");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gaz->parsed()) {
      auto records = ReadRecords(std::filesystem::path(gaz_records));
      Gazetteer g = BuildGazetteer(records, min_count, max_n, LoadStoplist(gaz_stoplist));
      WritePhraseList(g.entries(), std::filesystem::path(gaz_out));
      err << "gazetteer: " << g.size() << " phrases\n";
    } else if (label->parsed()) {
      auto records = ReadRecords(std::filesystem::path(label_records));
      Gazetteer g;
      if (!label_gazetteer.empty()) {
        g = GazetteerFromPhrases(ReadPhraseList(std::filesystem::path(label_gazetteer)));
      }
      AutolabelOptions options;
      options.pos_provider = label_pos == "none" ? "" : label_pos;
      options.jobs = common.jobs;
      options.source_kind = *ParseSourceKind(label_kind);
      AutolabelStats stats;
      Corpus corpus = AutolabelCorpus(records, g, options, &stats);
      WriteCorpus(corpus, std::filesystem::path(label_out));
      err << "autolabel: " << corpus.descriptions.size() << " descriptions, "
          << stats.skipped_empty << " skipped\n";
    } else if (train->parsed()) {
      ReadOptions read;
      read.iob_mode = ParseIobMode(train_mode);
      Corpus corpus = ReadCorpus(std::filesystem::path(train_corpus), read);
      TrainOptions options;
      options.iterations = train_iterations;
      if (train_shuffle) options.shuffle_seed = common.seed;
      options.features = train_templates.Resolve();
      TaggerModel iob = TrainAveragedPerceptron(corpus, Stage::kIob, options);
      TaggerModel domain = TrainAveragedPerceptron(corpus, Stage::kDomain, options);
      SaveModel(iob, std::filesystem::path(iob_out));
      SaveModel(domain, std::filesystem::path(domain_out));
    } else if (tag->parsed()) {
      TaggerModel iob = LoadModel(std::filesystem::path(tag_iob));
      TaggerModel domain = LoadModel(std::filesystem::path(tag_domain));
      Corpus input;
      if (tag_format == "records") {
        for (const StructuredRecord& r : ReadRecords(std::filesystem::path(tag_input))) {
          if (Tokenize(r.description).empty()) continue;
          input.descriptions.push_back(MakeDescription(r.id, SourceKind::kNvd, r.description));
        }
      } else {
        auto in = internal::OpenForRead(tag_input);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
          ++lineno;
          internal::StripCarriageReturn(line);
          if (Tokenize(line).empty()) continue;
          input.descriptions.push_back(
              MakeDescription("line-" + std::to_string(lineno), SourceKind::kOther, line));
        }
      }
      Corpus output;
      output.descriptions.resize(input.descriptions.size());
      for (std::size_t i = 0; i < input.descriptions.size(); ++i) {
        output.descriptions[i] = TagPipeline(input.descriptions[i], iob, domain);
      }
      WriteCorpus(output, std::filesystem::path(tag_out));
    } else if (xval->parsed()) {
      ReadOptions read;
      read.iob_mode = ParseIobMode(xval_mode);
      Corpus corpus = ReadCorpus(std::filesystem::path(xval_corpus), read);
      CrossValidationOptions options;
      options.n = xval_n == 0 ? corpus.descriptions.size() : xval_n;
      options.folds = xval_folds;
      options.split_fraction = xval_split;
      options.iterations = xval_iterations;
      options.seed = common.seed;
      if (xval_shuffle) options.shuffle_seed = common.seed;
      options.features = xval_templates.Resolve();
      options.jobs = common.jobs;
      CrossValidationResult result = CrossValidate(corpus, options);
      if (!xval_report.empty()) WriteReport(result, xval_report, xval_timing);
      PrintReportTable(result, out);
    } else if (synth->parsed()) {
      SyntheticData data = GenerateSynthetic(synth_n, common.seed);
      WriteRecords(data.records, std::filesystem::path(synth_records));
      WriteCorpus(data.gold, std::filesystem::path(synth_gold));
      if (!synth_stoplist.empty()) {
        WritePhraseList(SyntheticStoplist(data.gold), std::filesystem::path(synth_stoplist));
      }
    }
  } catch (const Error& e) {
    err << "error (" << ToString(e.kind()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace seclabel
