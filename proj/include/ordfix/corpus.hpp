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

#ifndef ORDFIX_CORPUS_HPP
#define ORDFIX_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ordfix/langs.hpp"
#include "ordfix/modgraph.hpp"

namespace ordfix {

/// Portable seeded random source: std::mt19937_64 (fully specified by the
/// standard) with bounded draws by rejection sampling, so streams are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  template <class T>
  const T& pick(std::span<const T> xs) {
    return xs[below(xs.size())];
  }
  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i)
      std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream index (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Program generation (minijava)

struct GenParams {
  std::uint64_t seed = 0;
  std::pair<int, int> classes{2, 4};
  std::pair<int, int> fields{0, 2};
  std::pair<int, int> methods{1, 2};
  std::pair<int, int> params{0, 2};
  std::pair<int, int> env_vars{1, 3};
  /// The body grows until it reaches a length drawn from this range.
  std::pair<int, int> tokens{20, 60};
  /// Hard ceiling; programs that overshoot are regenerated.
  int max_tokens = 0;  // 0: no ceiling
  int max_backtracks = 500;
  int max_attempts = 16;
};

class GenerationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Program {
  TypeEnv env;
  std::vector<Token> tokens;
};

/// Random compilable minijava method body plus the class table it is
/// typed against. Deterministic per seed.
Program generate_program(const GenParams& params);

// ---------------------------------------------------------------------------
// Mutation

/// Operators 1..8: insert / delete / duplicate / replace, first for
/// punctuation and keywords (1-4), then for identifiers (5-8).
struct MutationSpec {
  std::vector<int> ops;
  std::uint32_t count = 1;
  std::uint64_t seed = 0;
};

/// Operator sets of the syn (1-4), sem (8) and mix (1-8) groups.
std::vector<int> group_ops(std::string_view group);

struct MutationRecord {
  int op = 0;
  std::uint32_t pos = 0;  ///< position in the stream the operator acted on
  std::string name() const { return "M." + std::to_string(op); }
};

struct Mutant {
  std::vector<Token> tokens;
  std::vector<MutationRecord> mutations;
};

class MutationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies spec.count operators drawn uniformly from spec.ops, one after
/// another on the evolving stream. Inapplicable draws are redrawn.
Mutant mutate(std::span<const Token> tokens, const MutationSpec& spec,
              const Frontend& lang, const TypeEnv& env);

// ---------------------------------------------------------------------------
// Independent-set encoding

struct UndirectedGraph {
  std::uint32_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  /// Throws std::invalid_argument on self-loops, duplicates or bad ids.
  void validate() const;
};

/// Declares every vertex `InMIS v{i};` and repeats `v{x}.addEdge(v{y});`
/// n times per edge. Fixing it means retyping a vertex cover to OutMIS, so
/// the minimal fix weight is n minus the independence number.
Program encode_mis(const UndirectedGraph& g);

/// Independence number by exhaustive search (n <= 20).
std::uint32_t max_independent_set(const UndirectedGraph& g);

// ---------------------------------------------------------------------------
// Oracle

class OracleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::uint32_t k_max = 2;
  /// Maximum number of candidate programs checked.
  std::uint64_t check_cap = 100'000'000;
};

/// Least number of single-token edits that makes check_compiles accept,
/// by breadth-first search over edit sequences. Replacement and inserted
/// tokens range over the language's fixed terminals and identifiers drawn
/// from the environment, the program, and one fresh name. Empty if no fix
/// within k_max; throws OracleCapExceeded if the cap is hit.
std::optional<std::uint32_t> oracle_min_fix(std::span<const Token> tokens,
                                            const Frontend& lang,
                                            const TypeEnv& env,
                                            const OracleOptions& opt = {});

}  // namespace ordfix

#endif  // ORDFIX_CORPUS_HPP
