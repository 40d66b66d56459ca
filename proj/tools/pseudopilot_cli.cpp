// Copyright 2026 The Pseudopilot Authors.
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

// pseudopilot: command-line front end for the pseudo-pilot engine.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pseudopilot/callsign_resolver.hpp"
#include "pseudopilot/corpus.hpp"
#include "pseudopilot/entity_parser.hpp"
#include "pseudopilot/http_api.hpp"
#include "pseudopilot/kernels.hpp"
#include "pseudopilot/lexicon.hpp"
#include "pseudopilot/readback.hpp"
#include "pseudopilot/service.hpp"

namespace pp = pseudopilot;

namespace {

std::vector<std::string> InputLines(const std::vector<std::string> &args) {
  if (!args.empty()) return {pp::JoinWords(args)};
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!pp::Trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> FileLines(const std::string &path) {
  std::vector<std::string> out;
  for (auto &line : pp::SplitFields(pp::ReadFile(path), '\n')) {
    if (!pp::Trim(line).empty()) out.push_back(line);
  }
  return out;
}

nlohmann::json SpanJson(const pp::parser::ParsedCommunication &p,
                        const pp::parser::Span &s) {
  return {{"class", pp::parser::ClassName(s.cls)},
          {"begin", s.begin},
          {"end", s.end},
          {"words", pp::JoinWords(p.SpanWords(s))}};
}

void PrintPrf(const char *name, const pp::corpus::Prf &m,
              const pp::corpus::Prf *sd = nullptr) {
  if (sd) {
    std::printf("%-9s P=%.4f±%.4f R=%.4f±%.4f F1=%.4f±%.4f\n", name, m.precision,
                sd->precision, m.recall, sd->recall, m.f1, sd->f1);
  } else {
    std::printf("%-9s P=%.4f R=%.4f F1=%.4f\n", name, m.precision, m.recall, m.f1);
  }
}

pp::service::HttpServer *g_server = nullptr;

void OnSignal(int) {
  if (g_server) g_server->Stop();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"pseudo-pilot engine for controller training"};
  app.require_subcommand(1);

  // serve
  auto *serve = app.add_subcommand("serve", "run the HTTP session service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string asr_sidecar, asr_endpoint, tts_dir, tts_endpoint;
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--data-dir", data_dir, "persist session logs here");
  serve->add_option("--asr-sidecar", asr_sidecar, "mock ASR table (ref<TAB>text)");
  serve->add_option("--asr-endpoint", asr_endpoint, "external ASR host:port");
  serve->add_option("--tts-dir", tts_dir, "write synthesized prompts here");
  serve->add_option("--tts-endpoint", tts_endpoint, "external TTS host:port");

  // parse
  auto *parse = app.add_subcommand("parse", "tag transcripts (args or stdin lines)");
  std::vector<std::string> parse_words;
  std::string parse_format = "tagged";
  std::string tagger_spec = "builtin";
  parse->add_option("words", parse_words);
  parse->add_option("--format", parse_format)->check(CLI::IsMember({"tagged", "bio", "json"}));
  parse->add_option("--tagger", tagger_spec, "builtin or external:host:port");

  // respond
  auto *respond = app.add_subcommand("respond", "generate pilot read-backs");
  std::vector<std::string> respond_words;
  std::string rules_path, error_kind = "none";
  double error_prob = 0.0;
  std::uint64_t seed = 0;
  bool show_error = false;
  respond->add_option("words", respond_words);
  respond->add_option("--rules", rules_path);
  respond->add_option("--error-kind", error_kind)
      ->check(CLI::IsMember({"none", "command_flip", "value_perturb", "callsign_swap"}));
  respond->add_option("--error-prob", error_prob)->check(CLI::Range(0.0, 1.0));
  respond->add_option("--seed", seed);
  respond->add_flag("--show-error", show_error, "print the injected error to stderr");

  // lint-rules
  auto *lint = app.add_subcommand("lint-rules", "check a rules file");
  std::string lint_path;
  lint->add_option("path", lint_path)->required();

  // expand-callsign / compress-callsign
  auto *expand = app.add_subcommand("expand-callsign", "ICAO code -> spoken form");
  std::vector<std::string> codes;
  expand->add_option("codes", codes)->required();
  auto *compress = app.add_subcommand("compress-callsign", "spoken form -> ICAO code");
  std::vector<std::string> spoken;
  compress->add_option("words", spoken)->required();

  // rerank
  auto *rerank = app.add_subcommand("rerank", "resolve callsigns against a context");
  std::string context_path;
  std::vector<std::string> queries;
  std::optional<double> max_cost;
  std::string at_time;
  rerank->add_option("--context", context_path, "one code per line")->required();
  rerank->add_option("--query", queries, "spoken callsign (repeatable; default stdin)");
  rerank->add_option("--max-cost", max_cost);
  rerank->add_option("--at", at_time, "ISO-8601 time for validity windows");

  // filter-corpus
  auto *filter = app.add_subcommand("filter-corpus", "select training recordings");
  std::string metadata_path, report_format = "table", quota_order = "english_score";
  pp::corpus::FilterThresholds th;
  std::optional<double> target_hours;
  filter->add_option("metadata", metadata_path)->required();
  filter->add_option("--max-duration", th.max_duration);
  filter->add_option("--min-duration", th.min_duration);
  filter->add_option("--min-snr", th.min_snr);
  filter->add_option("--min-english", th.min_english);
  filter->add_option("--target-hours", target_hours);
  filter->add_option("--quota-order", quota_order)
      ->check(CLI::IsMember({"english_score", "snr", "input_order"}));
  filter->add_option("--format", report_format)->check(CLI::IsMember({"table", "records"}));

  // score-wer
  auto *wer = app.add_subcommand("score-wer", "corpus WER of line-aligned files");
  std::string ref_path, hyp_path;
  wer->add_option("ref", ref_path)->required();
  wer->add_option("hyp", hyp_path)->required();

  // score-ner
  auto *ner = app.add_subcommand("score-ner", "entity P/R/F1 against gold tags");
  std::string gold_path, pred_path;
  int folds = 1;
  bool three_class = false;
  ner->add_option("gold", gold_path, "words<TAB>labels lines")->required();
  ner->add_option("--pred", pred_path, "predicted tags (default: builtin tagger)");
  ner->add_option("--folds", folds)->check(CLI::PositiveNumber);
  ner->add_flag("--three-class", three_class, "fold units into values first");

  // gen-synthetic
  auto *gen = app.add_subcommand("gen-synthetic", "emit gold-tagged synthetic utterances");
  int count = 100;
  std::uint64_t gen_seed = 1;
  gen->add_option("--count", count);
  gen->add_option("--seed", gen_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      pp::service::ServiceOptions options;
      options.data_dir = data_dir;
      if (!asr_sidecar.empty()) {
        options.asr = std::make_shared<pp::speech::MockAsr>(
            pp::speech::MockAsr::LoadSidecar(asr_sidecar));
      } else if (!asr_endpoint.empty()) {
        options.asr = std::make_shared<pp::speech::ExternalAsr>(
            pp::wire::Endpoint::Parse(asr_endpoint), std::chrono::milliseconds(5000));
      }
      if (!tts_endpoint.empty()) {
        options.tts = std::make_shared<pp::speech::ExternalTts>(
            pp::wire::Endpoint::Parse(tts_endpoint), std::chrono::milliseconds(5000),
            tts_dir.empty() ? "." : tts_dir);
      } else if (!tts_dir.empty()) {
        options.tts = std::make_shared<pp::speech::MockTts>(tts_dir);
      }
      pp::service::SessionManager manager(options);
      auto restored = manager.LoadPersisted();
      pp::service::HttpServer server(manager);
      int bound = server.Bind(host, port);
      g_server = &server;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      std::fprintf(stderr, "listening on %s:%d (%zu sessions restored)\n", host.c_str(),
                   bound, restored.size());
      server.Listen();
      g_server = nullptr;
      return 0;
    }

    if (*parse) {
      auto tagger = pp::parser::MakeTagger(tagger_spec);
      for (const auto &line : InputLines(parse_words)) {
        auto p = pp::parser::Parse(pp::parser::Transcript::FromText(line), *tagger);
        if (parse_format == "tagged") {
          std::cout << pp::parser::RenderTagged(p) << '\n';
        } else if (parse_format == "bio") {
          std::cout << pp::corpus::FormatTaggedLine(p.words, p.labels) << '\n';
        } else {
          nlohmann::json spans = nlohmann::json::array();
          for (const auto &s : p.EntitySpans()) spans.push_back(SpanJson(p, s));
          std::cout << nlohmann::json{{"words", pp::JoinWords(p.words)},
                                      {"spans", spans},
                                      {"speaker_role",
                                       pp::parser::RoleName(pp::parser::DetectSpeakerRole(p))}}
                           .dump()
                    << '\n';
        }
      }
      return 0;
    }

    if (*respond) {
      auto rules = rules_path.empty() ? pp::readback::FixRuleSet::Default()
                                      : pp::readback::FixRuleSet::Load(rules_path);
      pp::readback::ErrorSpec spec;
      spec.kind = *pp::readback::ParseErrorKind(error_kind);
      spec.probability = error_prob;
      spec.seed = seed;
      for (const auto &line : InputLines(respond_words)) {
        auto p = pp::parser::Parse(pp::parser::Transcript::FromText(line));
        auto r = pp::readback::GenerateReadback(p, rules, spec);
        std::cout << pp::JoinWords(r.words) << '\n';
        if (show_error && r.injected_error) {
          std::cerr << "injected " << pp::readback::ErrorKindName(r.injected_error->kind)
                    << ": " << pp::JoinWords(r.injected_error->original) << " -> "
                    << pp::JoinWords(r.injected_error->replaced) << '\n';
        }
        for (const auto &d : r.diagnostics) std::cerr << d << '\n';
      }
      return 0;
    }

    if (*lint) {
      auto rules = pp::readback::FixRuleSet::Load(lint_path);
      auto issues = pp::readback::LintRules(rules);
      for (const auto &i : issues) std::cout << i << '\n';
      std::cout << rules.rules().size() << " rules, " << issues.size() << " issues\n";
      return issues.empty() ? 0 : 1;
    }

    if (*expand) {
      const auto &lex = pp::lexicon::Lexicon::Default();
      for (const auto &c : codes) std::cout << pp::JoinWords(lex.ExpandCallsign(c)) << '\n';
      return 0;
    }

    if (*compress) {
      auto words = pp::lexicon::NormalizeWords(pp::JoinWords(spoken));
      std::cout << pp::lexicon::Lexicon::Default().CompressSpoken(words) << '\n';
      return 0;
    }

    if (*rerank) {
      auto entries = pp::resolver::ParseContextFile(pp::ReadFile(context_path));
      auto built = pp::resolver::ExpandContext(std::span<const pp::resolver::ContextEntry>(entries));
      for (const auto &f : built.failures) {
        std::cerr << "skipped " << f.code << ": " << f.message << '\n';
      }
      pp::resolver::RerankOptions ro;
      ro.max_cost = max_cost;
      if (!at_time.empty()) ro.at_time = pp::resolver::ParseIsoTime(at_time);
      if (queries.empty()) queries = InputLines({});
      for (const auto &q : queries) {
        auto words = pp::lexicon::NormalizeWords(q);
        auto r = pp::resolver::Rerank(words, built.context, ro);
        std::printf("%s\t%s\t%g\t%s\n", std::string(pp::resolver::RerankStatusName(r.status)).c_str(),
                    r.icao.c_str(), r.cost, pp::JoinWords(r.matched_variant).c_str());
      }
      return 0;
    }

    if (*filter) {
      auto records = pp::corpus::ParseMetadata(pp::ReadFile(metadata_path));
      th.target_hours = target_hours;
      th.quota_order = *pp::corpus::ParseQuotaOrder(quota_order);
      auto gates = pp::kernels::GateBatch(records, th);
      auto report = pp::corpus::SelectRecordings(records, gates, th);
      std::cout << (report_format == "table" ? pp::corpus::FormatReportTable(report)
                                             : pp::corpus::FormatReportRecords(report));
      return 0;
    }

    if (*wer) {
      auto refs = FileLines(ref_path);
      auto hyps = FileLines(hyp_path);
      std::vector<pp::Words> r, h;
      for (const auto &l : refs) r.push_back(pp::lexicon::NormalizeWords(l));
      for (const auto &l : hyps) h.push_back(pp::lexicon::NormalizeWords(l));
      auto res = pp::kernels::WerBatch(r, h);
      std::printf("wer=%.6f substitutions=%zu deletions=%zu insertions=%zu ref_words=%zu\n",
                  res.total.rate(), res.total.substitutions, res.total.deletions,
                  res.total.insertions, res.total.ref_length);
      return 0;
    }

    if (*ner) {
      std::vector<std::vector<pp::parser::Span>> gold, pred;
      std::vector<pp::parser::Transcript> transcripts;
      for (const auto &line : FileLines(gold_path)) {
        auto [words, labels] = pp::corpus::ParseTaggedLine(line);
        gold.push_back(pp::parser::SpansFromLabels(labels));
        pp::parser::Transcript t;
        t.words = std::move(words);
        transcripts.push_back(std::move(t));
      }
      if (!pred_path.empty()) {
        for (const auto &line : FileLines(pred_path)) {
          pred.push_back(pp::parser::SpansFromLabels(pp::corpus::ParseTaggedLine(line).second));
        }
      } else {
        for (auto &p : pp::kernels::ParseBatch(transcripts, pp::parser::BuiltinTagger())) {
          pred.push_back(pp::parser::SpansFromLabels(p.labels));
        }
      }
      if (pred.size() != gold.size()) {
        throw pp::Error(pp::ErrorCode::kInvalidArgument, "gold and pred differ in length");
      }
      if (three_class) {
        for (auto &g : gold) g = pp::corpus::FoldUnitsIntoValues(g);
        for (auto &p : pred) p = pp::corpus::FoldUnitsIntoValues(p);
      }
      std::vector<pp::corpus::ClassScores> fold_scores;
      const std::size_t k = std::min<std::size_t>(folds, std::max<std::size_t>(gold.size(), 1));
      for (std::size_t f = 0; f < k; ++f) {
        const std::size_t lo = gold.size() * f / k, hi = gold.size() * (f + 1) / k;
        auto counts = pp::kernels::CountEntitiesBatch(
            std::span(gold).subspan(lo, hi - lo), std::span(pred).subspan(lo, hi - lo));
        fold_scores.push_back(pp::corpus::ScoreCounts(counts));
      }
      auto stats = pp::corpus::AggregateFolds(fold_scores);
      for (auto cls : pp::parser::kAllClasses) {
        if (three_class && cls == pp::parser::EntityClass::kUnit) continue;
        const auto &s = stats[static_cast<std::size_t>(cls)];
        PrintPrf(std::string(pp::parser::ClassName(cls)).c_str(), s.mean,
                 k > 1 ? &s.stddev : nullptr);
      }
      return 0;
    }

    if (*gen) {
      for (int i = 0; i < count; ++i) {
        auto u = pp::corpus::GenerateUtterance(pp::MixSeed(gen_seed) + i);
        auto labels = pp::parser::LabelsFromSpans(u.gold, u.words.size());
        std::cout << pp::corpus::FormatTaggedLine(u.words, labels) << '\n';
      }
      return 0;
    }
  } catch (const pp::Error &e) {
    std::cerr << "error: " << pp::ErrorCodeName(e.code()) << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
