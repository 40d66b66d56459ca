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

#include "pseudopilot/service.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>

#include "pseudopilot/entity_parser.hpp"
#include "pseudopilot/lexicon.hpp"

namespace pseudopilot::service {

namespace {

using Clock = std::chrono::steady_clock;

std::string JoinDiagnostics(const std::vector<ConfigDiagnostic> &diags) {
  std::string out = "invalid session config";
  for (std::size_t i = 0; i < diags.size(); ++i) {
    out += i == 0 ? ": " : "; ";
    out += diags[i].field + ": " + diags[i].message;
  }
  return out;
}

std::int64_t SystemMicros() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::int64_t ElapsedUs(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - since)
      .count();
}

Json SpanJson(const parser::ParsedCommunication &p,
              const std::optional<parser::Span> &span) {
  if (!span) return nullptr;
  return {{"begin", span->begin},
          {"end", span->end},
          {"words", JoinWords(p.SpanWords(*span))}};
}

Json ParseJson(const parser::ParsedCommunication &p) {
  Json groups = Json::array();
  for (const auto &g : p.groups) {
    groups.push_back({{"command", SpanJson(p, g.command)},
                      {"value", SpanJson(p, g.value)},
                      {"unit", SpanJson(p, g.unit)}});
  }
  Json labels = Json::array();
  for (auto l : p.labels) labels.push_back(parser::LabelName(l));
  return {{"callsign", SpanJson(p, p.callsign)},
          {"groups", std::move(groups)},
          {"residual", p.residual},
          {"tags", std::move(labels)},
          {"tagged", parser::RenderTagged(p)}};
}

Json ReadbackJson(const readback::ReadbackResult &r) {
  Json segments = Json::array();
  for (const auto &s : r.segments) {
    segments.push_back({{"class", parser::ClassName(s.cls)},
                        {"words", JoinWords(s.words)},
                        {"group", s.group}});
  }
  return {{"text", JoinWords(r.words)}, {"segments", std::move(segments)}};
}

Json InjectedErrorJson(const std::optional<readback::InjectedError> &e) {
  if (!e) return nullptr;
  return {{"kind", readback::ErrorKindName(e->kind)},
          {"segment", e->segment},
          {"original", JoinWords(e->original)},
          {"replaced", JoinWords(e->replaced)},
          {"source", JoinWords(e->source)}};
}

void MaxTiming(const Json &value, std::int64_t &out) {
  if (value.is_number_integer()) {
    out = std::max(out, value.get<std::int64_t>());
  } else if (value.is_structured()) {
    for (const auto &v : value) MaxTiming(v, out);
  }
}

// Holds the loaded artefacts a config refers to.
struct Runtime {
  std::shared_ptr<const readback::FixRuleSet> rules;
  std::shared_ptr<const parser::Tagger> tagger;
  resolver::SurveillanceContext context;
};

Runtime Activate(const SessionConfig &config, const ServiceOptions &options,
                 std::vector<ConfigDiagnostic> &diags) {
  Runtime rt;
  if (config.rules_path) {
    try {
      rt.rules = std::make_shared<readback::FixRuleSet>(
          readback::FixRuleSet::Load(*config.rules_path));
      for (const auto &issue : readback::LintRules(*rt.rules)) {
        diags.push_back({"rules", issue});
      }
    } catch (const Error &e) {
      diags.push_back({"rules", e.what()});
    }
  } else {
    rt.rules = std::shared_ptr<const readback::FixRuleSet>(
        std::shared_ptr<void>(), &readback::FixRuleSet::Default());
  }

  try {
    rt.tagger = parser::MakeTagger(config.tagger, options.tagger_timeout);
  } catch (const Error &e) {
    diags.push_back({"tagger", e.what()});
  }

  std::vector<resolver::ContextEntry> entries;
  for (const auto &line : config.surveillance) {
    try {
      auto parsed = resolver::ParseContextFile(line);
      entries.insert(entries.end(), parsed.begin(), parsed.end());
    } catch (const Error &e) {
      diags.push_back({"surveillance", e.what()});
    }
  }
  auto built = resolver::ExpandContext(std::span<const resolver::ContextEntry>(entries));
  for (const auto &f : built.failures) {
    diags.push_back({"surveillance", f.code + ": " + f.message});
  }
  rt.context = std::move(built.context);
  return rt;
}

}  // namespace

// ---------------------------------------------------------------------------

InvalidConfig::InvalidConfig(std::vector<ConfigDiagnostic> diagnostics)
    : Error(ErrorCode::kInvalidConfig, JoinDiagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

Json SessionConfig::ToJson() const {
  Json j;
  j["rules"] = rules_path ? Json(*rules_path) : Json(nullptr);
  j["error"] = {{"kind", readback::ErrorKindName(error.kind)},
                {"probability", error.probability},
                {"seed", error.seed}};
  j["surveillance"] = surveillance;
  j["tagger"] = tagger;
  j["reveal_errors"] = reveal_errors;
  j["rerank"] = {{"max_cost", max_cost ? Json(*max_cost) : Json(nullptr)},
                 {"weights",
                  {{"substitution", weights.substitution},
                   {"insertion", weights.insertion},
                   {"deletion", weights.deletion}}}};
  return j;
}

SessionConfig SessionConfig::FromJson(const Json &j) {
  std::vector<ConfigDiagnostic> diags;
  SessionConfig c;
  if (!j.is_object()) {
    throw InvalidConfig(std::vector<ConfigDiagnostic>{{"config", "must be a JSON object"}});
  }

  static const std::vector<std::string> kKnown = {
      "rules", "error", "surveillance", "tagger", "reveal_errors", "rerank"};
  for (const auto &[key, _] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      diags.push_back({key, "unknown field"});
    }
  }

  if (j.contains("rules") && !j["rules"].is_null()) {
    if (j["rules"].is_string()) {
      c.rules_path = j["rules"].get<std::string>();
    } else {
      diags.push_back({"rules", "must be a path string or null"});
    }
  }

  if (j.contains("error")) {
    const Json &e = j["error"];
    if (!e.is_object()) {
      diags.push_back({"error", "must be an object"});
    } else {
      if (e.contains("kind")) {
        auto kind = e["kind"].is_string()
                        ? readback::ParseErrorKind(e["kind"].get<std::string>())
                        : std::nullopt;
        if (kind) {
          c.error.kind = *kind;
        } else {
          diags.push_back({"error.kind",
                           "must be none, command_flip, value_perturb or "
                           "callsign_swap"});
        }
      }
      if (e.contains("probability")) {
        if (e["probability"].is_number() &&
            e["probability"].get<double>() >= 0.0 &&
            e["probability"].get<double>() <= 1.0) {
          c.error.probability = e["probability"].get<double>();
        } else {
          diags.push_back({"error.probability", "must be a number in [0, 1]"});
        }
      }
      if (e.contains("seed")) {
        if (e["seed"].is_number_unsigned() ||
            (e["seed"].is_number_integer() && e["seed"].get<std::int64_t>() >= 0)) {
          c.error.seed = e["seed"].get<std::uint64_t>();
        } else {
          diags.push_back({"error.seed", "must be a non-negative integer"});
        }
      }
    }
  }

  if (j.contains("surveillance")) {
    const Json &s = j["surveillance"];
    if (!s.is_array()) {
      diags.push_back({"surveillance", "must be an array of callsign codes"});
    } else {
      for (const auto &code : s) {
        if (code.is_string()) {
          c.surveillance.push_back(code.get<std::string>());
        } else {
          diags.push_back({"surveillance", "entries must be strings"});
        }
      }
    }
  }

  if (j.contains("tagger")) {
    if (j["tagger"].is_string()) {
      c.tagger = j["tagger"].get<std::string>();
    } else {
      diags.push_back({"tagger", "must be builtin or external:<endpoint>"});
    }
  }

  if (j.contains("reveal_errors")) {
    if (j["reveal_errors"].is_boolean()) {
      c.reveal_errors = j["reveal_errors"].get<bool>();
    } else {
      diags.push_back({"reveal_errors", "must be a boolean"});
    }
  }

  if (j.contains("rerank")) {
    const Json &r = j["rerank"];
    if (!r.is_object()) {
      diags.push_back({"rerank", "must be an object"});
    } else {
      if (r.contains("max_cost") && !r["max_cost"].is_null()) {
        if (r["max_cost"].is_number() && r["max_cost"].get<double>() >= 0) {
          c.max_cost = r["max_cost"].get<double>();
        } else {
          diags.push_back({"rerank.max_cost", "must be a non-negative number"});
        }
      }
      if (r.contains("weights")) {
        const Json &w = r["weights"];
        auto read = [&](const char *name, double &out) {
          if (!w.contains(name)) return;
          if (w[name].is_number() && w[name].get<double>() >= 0) {
            out = w[name].get<double>();
          } else {
            diags.push_back({std::string("rerank.weights.") + name,
                             "must be a non-negative number"});
          }
        };
        if (!w.is_object()) {
          diags.push_back({"rerank.weights", "must be an object"});
        } else {
          read("substitution", c.weights.substitution);
          read("insertion", c.weights.insertion);
          read("deletion", c.weights.deletion);
        }
      }
    }
  }

  if (!diags.empty()) throw InvalidConfig(std::move(diags));
  return c;
}

TransmitPayload TransmitPayload::FromJson(const Json &j) {
  TransmitPayload p;
  if (j.is_object()) {
    if (j.contains("text") && j["text"].is_string()) {
      p.text = j["text"].get<std::string>();
    }
    if (j.contains("audio_ref") && j["audio_ref"].is_string()) {
      p.audio_ref = j["audio_ref"].get<std::string>();
    }
  }
  if (p.text.has_value() == p.audio_ref.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "transmit needs exactly one of text or audio_ref");
  }
  return p;
}

std::optional<Verdict> ParseVerdict(std::string_view name) {
  if (name == "faithful") return Verdict::kFaithful;
  if (name == "error") return Verdict::kError;
  return std::nullopt;
}

Json StripTiming(const Json &value) {
  if (value.is_object()) {
    Json out = Json::object();
    for (const auto &[k, v] : value.items()) {
      if (k != "timing") out[k] = StripTiming(v);
    }
    return out;
  }
  if (value.is_array()) {
    Json out = Json::array();
    for (const auto &v : value) out.push_back(StripTiming(v));
    return out;
  }
  return value;
}

// ---------------------------------------------------------------------------
// Session

struct SessionManager::Session {
  struct ExchangeState {
    bool has_error = false;
    bool marked = false;
  };

  std::string id;
  std::mutex mu;
  SessionConfig config;
  Runtime runtime;
  std::vector<Json> records;
  std::map<std::string, ExchangeState> exchanges;
  std::uint64_t seq = 0;
  std::int64_t last_us = 0;
  std::string log_path;

  std::int64_t Now(const ServiceOptions &options) {
    std::int64_t t = options.clock ? options.clock() : SystemMicros();
    last_us = std::max(t, last_us + 1);
    return last_us;
  }

  void Append(Json record) {
    if (!log_path.empty()) {
      std::ofstream out(log_path, std::ios::app | std::ios::binary);
      out << record.dump() << '\n';
      if (!out) {
        throw Error(ErrorCode::kIo, "cannot append to session log " + log_path);
      }
    }
    records.push_back(std::move(record));
  }
};

SessionManager::SessionManager(ServiceOptions options)
    : options_(std::move(options)), id_salt_(std::random_device{}()) {
  if (!options_.data_dir.empty()) {
    std::filesystem::create_directories(options_.data_dir);
  }
}

SessionManager::~SessionManager() = default;

std::string SessionManager::NewId() {
  char buf[32];
  std::uint64_t n = next_id_++;
  std::snprintf(buf, sizeof(buf), "s%llu-%06llx", static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(MixSeed(id_salt_ ^ n) & 0xffffff));
  return buf;
}

std::shared_ptr<SessionManager::Session> SessionManager::Find(
    const std::string &id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kUnknownSession, "unknown session '" + id + "'");
  }
  return it->second;
}

void SessionManager::Register(std::shared_ptr<Session> session) {
  std::unique_lock lock(mu_);
  sessions_[session->id] = std::move(session);
}

std::vector<std::string> SessionManager::SessionIds() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto &[id, _] : sessions_) ids.push_back(id);
  return ids;
}

std::string SessionManager::CreateSession(const Json &config_json) {
  SessionConfig config = SessionConfig::FromJson(config_json);
  std::vector<ConfigDiagnostic> diags;
  Runtime rt = Activate(config, options_, diags);
  if (!diags.empty()) throw InvalidConfig(std::move(diags));

  auto session = std::make_shared<Session>();
  session->id = NewId();
  session->config = std::move(config);
  session->runtime = std::move(rt);
  if (!options_.data_dir.empty()) {
    session->log_path =
        (std::filesystem::path(options_.data_dir) / (session->id + ".jsonl")).string();
  }
  const std::int64_t now = session->Now(options_);
  session->Append({{"type", "session"},
                   {"config", session->config.ToJson()},
                   {"timing", {{"created_us", now}}}});
  std::string id = session->id;
  Register(std::move(session));
  return id;
}

Json SessionManager::Transmit(const std::string &session_id,
                              const TransmitPayload &payload) {
  auto session = Find(session_id);
  std::lock_guard lock(session->mu);
  const ServiceOptions &opt = options_;
  const SessionConfig &config = session->config;
  const Runtime &rt = session->runtime;

  if (payload.text.has_value() == payload.audio_ref.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "transmit needs exactly one of text or audio_ref");
  }

  const std::int64_t received = session->Now(opt);
  const std::uint64_t seq = session->seq + 1;
  const std::string eid = "e" + std::to_string(seq);
  Json stages = Json::object();
  Json diagnostics = Json::array();

  Json input = {{"text", nullptr}, {"audio_ref", nullptr}, {"asr_confidence", nullptr}};
  std::string text;
  if (payload.audio_ref) {
    if (!opt.asr) {
      throw Error(ErrorCode::kAdapterUnavailable, "no speech-to-text adapter configured");
    }
    auto t = Clock::now();
    speech::UtteranceCapture capture;
    capture.audio_ref = *payload.audio_ref;
    speech::AsrResult asr = opt.asr->Transcribe(capture);
    stages["transcribe"] = ElapsedUs(t);
    text = asr.text;
    input["audio_ref"] = *payload.audio_ref;
    input["asr_confidence"] = asr.confidence;
    input["text"] = asr.text;
  } else {
    text = *payload.text;
    input["text"] = text;
  }

  auto t = Clock::now();
  parser::Transcript transcript = parser::Transcript::FromText(text, eid);
  stages["normalize"] = ElapsedUs(t);

  t = Clock::now();
  parser::ParsedCommunication parsed = parser::Parse(transcript, *rt.tagger);
  stages["parse"] = ElapsedUs(t);

  t = Clock::now();
  Json resolution;
  if (!parsed.callsign) {
    resolution = {{"status", "skipped"}};
  } else if (rt.context.records.empty()) {
    resolution = {{"status", "no_context"}};
  } else {
    resolver::RerankOptions ro;
    ro.weights = config.weights;
    ro.max_cost = config.max_cost;
    auto rr = resolver::Rerank(parsed.SpanWords(*parsed.callsign), rt.context, ro);
    resolution = {{"status", resolver::RerankStatusName(rr.status)},
                  {"icao", rr.icao},
                  {"matched_variant", JoinWords(rr.matched_variant)},
                  {"cost", rr.cost}};
    if (rr.status == resolver::RerankStatus::kResolved) {
      parsed.resolved_icao = rr.icao;
    }
  }
  stages["rerank"] = ElapsedUs(t);

  t = Clock::now();
  std::optional<readback::ReadbackResult> rb;
  readback::ErrorSpec spec = config.error;
  spec.seed = MixSeed(config.error.seed + seq);
  try {
    rb = readback::GenerateReadback(parsed, *rt.rules, spec);
    for (const auto &d : rb->diagnostics) diagnostics.push_back(d);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kEmptyCommunication) throw;
    diagnostics.push_back(std::string(ErrorCodeName(e.code())) + ": " + e.what());
  }
  stages["readback"] = ElapsedUs(t);

  Json audio = nullptr;
  if (rb && opt.tts) {
    t = Clock::now();
    try {
      audio = opt.tts->Synthesize(rb->words);
    } catch (const Error &e) {
      diagnostics.push_back("synthesize: " + std::string(ErrorCodeName(e.code())) +
                            ": " + e.what());
    }
    stages["synthesize"] = ElapsedUs(t);
  }

  const std::int64_t completed = session->Now(opt);
  Json record = {
      {"type", "exchange"},
      {"id", eid},
      {"seq", seq},
      {"input", std::move(input)},
      {"transcript", JoinWords(transcript.words)},
      {"parse", ParseJson(parsed)},
      {"speaker_role", parser::RoleName(parser::DetectSpeakerRole(parsed))},
      {"resolution", std::move(resolution)},
      {"readback", rb ? ReadbackJson(*rb) : Json(nullptr)},
      {"injected_error", rb ? InjectedErrorJson(rb->injected_error) : Json(nullptr)},
      {"audio", std::move(audio)},
      {"diagnostics", std::move(diagnostics)},
      {"timing",
       {{"received_us", received}, {"completed_us", completed}, {"stages_us", stages}}},
  };

  session->Append(record);
  session->seq = seq;
  session->exchanges[eid].has_error = rb && rb->injected_error.has_value();

  if (!config.reveal_errors) {
    record.erase("injected_error");
    Json visible = Json::array();
    for (const auto &d : record["diagnostics"]) {
      if (!d.get<std::string>().starts_with("inapplicable_kind")) visible.push_back(d);
    }
    record["diagnostics"] = std::move(visible);
  }
  return record;
}

Json SessionManager::MarkChallenge(const std::string &session_id,
                                   const std::string &exchange_id, Verdict verdict) {
  auto session = Find(session_id);
  std::lock_guard lock(session->mu);
  auto it = session->exchanges.find(exchange_id);
  if (it == session->exchanges.end()) {
    throw Error(ErrorCode::kUnknownExchange,
                "unknown exchange '" + exchange_id + "' in session " + session_id);
  }
  if (it->second.marked) {
    throw Error(ErrorCode::kAlreadyMarked,
                "exchange '" + exchange_id + "' is already marked");
  }
  const bool correct = (verdict == Verdict::kError) == it->second.has_error;
  Json record = {{"type", "mark"},
                 {"exchange", exchange_id},
                 {"verdict", verdict == Verdict::kError ? "error" : "faithful"},
                 {"correct", correct},
                 {"timing", {{"at_us", session->Now(options_)}}}};
  session->Append(record);
  it->second.marked = true;
  return {{"exchange", exchange_id}, {"verdict", record["verdict"]}, {"correct", correct}};
}

Json SessionManager::GetLog(const std::string &session_id) const {
  auto session = Find(session_id);
  std::lock_guard lock(session->mu);
  return Json(session->records);
}

std::string SessionManager::GetLogJsonl(const std::string &session_id) const {
  auto session = Find(session_id);
  std::lock_guard lock(session->mu);
  std::string out;
  for (const auto &r : session->records) out += r.dump() + "\n";
  return out;
}

Json SessionManager::PatchConfig(const std::string &session_id, const Json &patch) {
  auto session = Find(session_id);
  std::lock_guard lock(session->mu);
  if (!patch.is_object()) {
    throw InvalidConfig(
        std::vector<ConfigDiagnostic>{{"config", "patch must be an object"}});
  }
  Json merged = session->config.ToJson();
  merged.merge_patch(patch);
  SessionConfig config = SessionConfig::FromJson(merged);
  std::vector<ConfigDiagnostic> diags;
  Runtime rt = Activate(config, options_, diags);
  if (!diags.empty()) throw InvalidConfig(std::move(diags));
  session->config = std::move(config);
  session->runtime = std::move(rt);
  Json cfg = session->config.ToJson();
  session->Append({{"type", "config"},
                   {"config", cfg},
                   {"timing", {{"at_us", session->Now(options_)}}}});
  return cfg;
}

std::string SessionManager::ImportLog(std::string_view jsonl,
                                      std::optional<std::string> session_id) {
  auto session = std::make_shared<Session>();
  std::vector<Json> records;
  std::size_t line_no = 0;
  for (const std::string &line : SplitFields(jsonl, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    Json r = Json::parse(line, nullptr, false);
    if (r.is_discarded() || !r.is_object() || !r.contains("type")) {
      throw Error(ErrorCode::kDataFormat,
                  "log line " + std::to_string(line_no) + ": not a log record");
    }
    records.push_back(std::move(r));
  }
  if (records.empty() || records.front()["type"] != "session") {
    throw Error(ErrorCode::kDataFormat, "log must start with a session record");
  }

  auto activate = [&](const Json &cfg) {
    SessionConfig config = SessionConfig::FromJson(cfg);
    std::vector<ConfigDiagnostic> diags;
    Runtime rt = Activate(config, options_, diags);
    if (!diags.empty()) throw InvalidConfig(std::move(diags));
    session->config = std::move(config);
    session->runtime = std::move(rt);
  };

  for (const Json &r : records) {
    const std::string type = r["type"].get<std::string>();
    if (type == "session" || type == "config") {
      if (type == "session" && &r != &records.front()) {
        throw Error(ErrorCode::kDataFormat, "second session record in log");
      }
      activate(r.at("config"));
    } else if (type == "exchange") {
      const std::uint64_t seq = r.at("seq").get<std::uint64_t>();
      if (seq != session->seq + 1) {
        throw Error(ErrorCode::kDataFormat, "exchange sequence gap at " + std::to_string(seq));
      }
      session->seq = seq;
      session->exchanges[r.at("id").get<std::string>()].has_error =
          r.contains("injected_error") && !r["injected_error"].is_null();
    } else if (type == "mark") {
      auto it = session->exchanges.find(r.at("exchange").get<std::string>());
      if (it == session->exchanges.end() || it->second.marked) {
        throw Error(ErrorCode::kDataFormat, "mark refers to an unknown or marked exchange");
      }
      it->second.marked = true;
    } else {
      throw Error(ErrorCode::kDataFormat, "unknown log record type '" + type + "'");
    }
    if (r.contains("timing")) MaxTiming(r["timing"], session->last_us);
  }

  session->id = session_id ? *session_id : NewId();
  session->records = std::move(records);
  if (!options_.data_dir.empty()) {
    session->log_path =
        (std::filesystem::path(options_.data_dir) / (session->id + ".jsonl")).string();
    if (!session_id) {
      std::ofstream out(session->log_path, std::ios::binary | std::ios::trunc);
      for (const auto &rec : session->records) out << rec.dump() << '\n';
    }
  }
  std::string id = session->id;
  Register(std::move(session));
  return id;
}

std::vector<std::string> SessionManager::LoadPersisted() {
  std::vector<std::string> ids;
  if (options_.data_dir.empty()) return ids;
  for (const auto &entry : std::filesystem::directory_iterator(options_.data_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::string id = entry.path().stem().string();
    ImportLog(ReadFile(entry.path().string()), id);
    ids.push_back(id);
  }
  // Keep new ids from colliding with restored ones.
  next_id_ += ids.size();
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace pseudopilot::service
