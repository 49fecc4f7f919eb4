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

#ifndef ORDFIX_REPORT_HPP
#define ORDFIX_REPORT_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordfix/corpus.hpp"
#include "ordfix/fixer.hpp"

namespace ordfix {

using Json = nlohmann::ordered_json;

/// FixResult as JSON. Elapsed time is omitted unless asked for, so equal
/// inputs give byte-identical output.
Json to_json(const FixResult& r, bool include_timing = false);

std::vector<std::string> lexemes(std::span<const Token> tokens);
/// Classifies each lexeme with the frontend's tokenizer.
std::vector<Token> tokens_from_lexemes(const std::vector<std::string>& lexemes,
                                       const Frontend& lang);

/// One line of a corpus file.
struct CorpusRecord {
  std::uint64_t seed = 0;
  std::string lang = "minijava";
  std::string env;
  std::vector<std::string> tokens;
  std::vector<std::string> original;  // empty unless mutated
  std::vector<MutationRecord> mutations;
  std::uint32_t expected_max_weight = 0;
  std::optional<std::uint32_t> oracle_weight;
  std::string oracle_status;  // empty unless annotated
};

class CorpusFormatError : public std::runtime_error {
 public:
  CorpusFormatError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Json to_json(const CorpusRecord& r);
/// Throws CorpusFormatError (with `line`) on missing or mistyped fields.
CorpusRecord record_from_json(const Json& j, std::size_t line);

/// Parses JSONL text; blank lines are skipped.
std::vector<CorpusRecord> parse_corpus(std::string_view text);

}  // namespace ordfix

#endif  // ORDFIX_REPORT_HPP
