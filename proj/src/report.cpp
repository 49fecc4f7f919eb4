// Copyright 2026 The ordfix Authors.
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

#include "ordfix/report.hpp"

namespace ordfix {

Json to_json(const FixResult& r, bool include_timing) {
  Json edits = Json::array();
  for (const auto& e : r.edits)
    edits.push_back({{"pos", e.pos}, {"op", to_string(e.op)},
                     {"token", e.token.lexeme}});
  Json stats = {{"root_edges", r.stats.root_edges},
                {"reach_edges", r.stats.reach_edges},
                {"reach_pops", r.stats.reach_pops},
                {"memo_entries", r.stats.memo_entries},
                {"memo_values", r.stats.memo_values},
                {"rule_invocations", r.stats.rule_invocations},
                {"memory_bytes", r.stats.memory_bytes}};
  if (include_timing) stats["elapsed_seconds"] = r.stats.elapsed_seconds;
  Json j = {{"status", to_string(r.status)}};
  if (r.status == FixStatus::Fixed) {
    j["weight"] = r.weight;
    j["fixed"] = lexemes(r.fixed);
    j["edits"] = std::move(edits);
    j["verified"] = r.verified;
  } else {
    j["weight"] = nullptr;
  }
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  j["stats"] = std::move(stats);
  return j;
}

std::vector<std::string> lexemes(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.lexeme);
  return out;
}

std::vector<Token> tokens_from_lexemes(const std::vector<std::string>& lexemes,
                                       const Frontend& lang) {
  std::vector<Token> out;
  out.reserve(lexemes.size());
  for (const auto& l : lexemes) {
    out.push_back(lang.make_token(l));
    out.back().position = static_cast<std::uint32_t>(out.size() - 1);
  }
  return out;
}

CorpusFormatError::CorpusFormatError(const std::string& what, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

Json to_json(const CorpusRecord& r) {
  Json muts = Json::array();
  for (const auto& m : r.mutations)
    muts.push_back({{"op", m.name()}, {"pos", m.pos}});
  Json j = {{"seed", r.seed}, {"lang", r.lang}, {"env", r.env},
            {"tokens", r.tokens}};
  if (!r.original.empty()) j["original"] = r.original;
  j["mutations"] = std::move(muts);
  j["expected_max_weight"] = r.expected_max_weight;
  if (!r.oracle_status.empty()) {
    j["oracle_weight"] =
        r.oracle_weight ? Json(*r.oracle_weight) : Json(nullptr);
    j["oracle_status"] = r.oracle_status;
  }
  return j;
}

CorpusRecord record_from_json(const Json& j, std::size_t line) {
  if (!j.is_object()) throw CorpusFormatError("record is not an object", line);
  auto field = [&](const char* name) -> const Json& {
    auto it = j.find(name);
    if (it == j.end())
      throw CorpusFormatError(std::string("missing field '") + name + "'", line);
    return *it;
  };
  CorpusRecord r;
  try {
    r.seed = field("seed").get<std::uint64_t>();
    if (j.contains("lang")) r.lang = j["lang"].get<std::string>();
    r.env = field("env").get<std::string>();
    r.tokens = field("tokens").get<std::vector<std::string>>();
    if (j.contains("original"))
      r.original = j["original"].get<std::vector<std::string>>();
    if (j.contains("mutations"))
      for (const auto& m : j["mutations"]) {
        const auto op = m.at("op").get<std::string>();
        if (op.size() != 3 || op.compare(0, 2, "M.") != 0 || op[2] < '1' ||
            op[2] > '8')
          throw CorpusFormatError("bad mutation operator '" + op + "'", line);
        r.mutations.push_back({op[2] - '0', m.at("pos").get<std::uint32_t>()});
      }
    if (j.contains("expected_max_weight"))
      r.expected_max_weight = j["expected_max_weight"].get<std::uint32_t>();
    if (j.contains("oracle_status")) {
      r.oracle_status = j["oracle_status"].get<std::string>();
      if (j.contains("oracle_weight") && !j["oracle_weight"].is_null())
        r.oracle_weight = j["oracle_weight"].get<std::uint32_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorpusFormatError(e.what(), line);
  }
  return r;
}

std::vector<CorpusRecord> parse_corpus(std::string_view text) {
  std::vector<CorpusRecord> out;
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    auto l = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (l.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json j;
    try {
      j = Json::parse(l);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusFormatError(std::string("invalid JSON: ") + e.what(), line);
    }
    out.push_back(record_from_json(j, line));
  }
  return out;
}

}  // namespace ordfix
