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

// ordfix: minimal-edit repair of token streams.
//
// Exit codes: 0 success / fixed, 1 usage or input error, 2 no fix within
// the edit cap, 3 time limit, 4 memory limit, 5 `check` rejected the input.

#include <time.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ordfix/corpus.hpp"
#include "ordfix/fixer.hpp"
#include "ordfix/report.hpp"

namespace {

using namespace ordfix;

enum Exit : int {
  kOk = 0,
  kInputError = 1,
  kNoFix = 2,
  kTimeLimit = 3,
  kMemoryLimit = 4,
  kRejected = 5,
};

// ---------------------------------------------------------------------------
// logging

enum class Level { Quiet, Error, Warn, Info, Debug };

Level log_level() {
  static const Level level = [] {
    const char* s = std::getenv("ORDFIX_LOG");
    const std::string v = s ? s : "warn";
    if (v == "quiet" || v == "off") return Level::Quiet;
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

template <class... Args>
void log(Level at, const Args&... args) {
  if (at > log_level()) return;
  static constexpr const char* names[] = {"", "error", "warn", "info", "debug"};
  std::ostringstream os;
  os << "ordfix: " << names[static_cast<int>(at)] << ": ";
  (os << ... << args);
  std::cerr << os.str() << '\n';
}

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  std::ostringstream os;
  if (path == "-") {
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

TypeEnv load_env(const std::string& path, const Frontend& lang) {
  if (path.empty()) return {};
  const auto text = read_input(path);
  try {
    auto env = parse_env(text);
    lang.validate_env(env);
    return env;
  } catch (const EnvError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

std::vector<Token> lex_program(const std::string& path, const Frontend& lang) {
  const auto text = read_input(path);
  try {
    return lang.lex(text);
  } catch (const LexError& e) {
    throw InputError((path == "-" ? std::string("<stdin>") : path) + ":" +
                     std::to_string(e.line()) + ":" +
                     std::to_string(e.column()) + ": " + e.what());
  }
}

int exit_for(FixStatus s) {
  switch (s) {
    case FixStatus::Fixed: return kOk;
    case FixStatus::NoFixWithinCap: return kNoFix;
    case FixStatus::TimeLimit: return kTimeLimit;
    case FixStatus::MemoryLimit: return kMemoryLimit;
  }
  return kInputError;
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + ts.tv_nsec * 1e-9;
}

// ---------------------------------------------------------------------------
// options

struct LimitOpts {
  std::optional<std::uint32_t> max_edits;
  double time_limit = 600;
  std::size_t memory_limit = std::size_t{15} << 30;
  bool no_memo = false;

  void add_to(CLI::App* app) {
    app->add_option("--max-edits", max_edits,
                    "Edit cap (default: token count + 8)");
    app->add_option("--time-limit", time_limit, "Seconds per fix")
        ->check(CLI::PositiveNumber);
    app->add_option("--memory-limit", memory_limit,
                    "Byte cap on edge and memo stores")
        ->check(CLI::PositiveNumber);
    app->add_flag("--no-memo", no_memo, "Disable the attribute memo table");
  }
  FixLimits limits() const {
    FixLimits l;
    l.max_edits = max_edits;
    l.time_limit_seconds = time_limit;
    l.memory_limit_bytes = memory_limit;
    return l;
  }
};

// Prints the original and fixed streams as a token-per-line unified diff.
void print_human(const FixResult& r, std::span<const Token> original) {
  std::cout << "status: " << to_string(r.status);
  if (r.status != FixStatus::Fixed) {
    std::cout << "\n";
    if (!r.diagnostic.empty()) std::cout << r.diagnostic << "\n";
    return;
  }
  std::cout << "  weight: " << r.weight
            << "  verified: " << (r.verified ? "yes" : "no") << "\n";
  std::cout << "--- original\n+++ fixed\n";
  std::size_t k = 0;
  for (std::uint32_t i = 0; i <= original.size(); ++i) {
    bool touched = false;
    for (; k < r.edits.size() && r.edits[k].pos == i; ++k) {
      const auto& e = r.edits[k];
      switch (e.op) {
        case EditOpKind::Insert:
          std::cout << "+" << e.token.lexeme << "\n";
          break;
        case EditOpKind::Delete:
          std::cout << "-" << original[i].lexeme << "\n";
          touched = true;
          break;
        case EditOpKind::Update:
          std::cout << "-" << original[i].lexeme << "\n+" << e.token.lexeme
                    << "\n";
          touched = true;
          break;
      }
    }
    if (i < original.size() && !touched)
      std::cout << " " << original[i].lexeme << "\n";
  }
}

// ---------------------------------------------------------------------------
// subcommands

struct FixCmd {
  std::string lang = "minijava";
  std::string env;
  std::string input = "-";
  std::string output = "json";
  std::string dump_modgraph;
  std::string dump_reach;
  bool timing = false;
  LimitOpts lim;

  int run() const {
    const auto& fe = frontend_by_name(lang);
    const auto e = load_env(env, fe);
    FixRequest req;
    req.tokens = lex_program(input, fe);
    req.frontend = &fe;
    req.env = &e;
    req.limits = lim.limits();
    req.memoize = !lim.no_memo;
    log(Level::Info, "fixing ", req.tokens.size(), " tokens");
    if (!dump_modgraph.empty()) {
      const auto mg = build_modgraph(req.tokens, fe.normalized());
      write_file(dump_modgraph, mg.to_dot(fe.normalized()));
    }
    FixResult r;
    try {
      r = fix(req);
    } catch (const FixRequestError& ex) {
      throw InputError(ex.what());
    }
    log(Level::Info, "status ", to_string(r.status), ", ",
        r.stats.reach_edges, " edges, ", r.stats.memo_entries,
        " memo entries");
    if (r.status == FixStatus::Fixed && !r.verified)
      log(Level::Warn, "fix not verified: ", r.diagnostic);
    if (!dump_reach.empty()) write_file(dump_reach, reach_histogram(req, r));
    if (output == "human")
      print_human(r, req.tokens);
    else
      std::cout << to_json(r, timing).dump() << "\n";
    return exit_for(r.status);
  }

  // Edge counts by weight and label up to the fix weight (or the cap).
  static std::string reach_histogram(const FixRequest& req, const FixResult& r) {
    const auto& g = req.frontend->normalized();
    const auto mg = build_modgraph(req.tokens, g);
    const std::uint32_t cap =
        r.status == FixStatus::Fixed
            ? r.weight
            : req.limits.max_edits.value_or(static_cast<std::uint32_t>(
                  req.tokens.size() + req.limits.insertion_headroom));
    Budget budget(std::chrono::duration<double>(req.limits.time_limit_seconds),
                  req.limits.memory_limit_bytes);
    Reachability reach(mg, g, ReachOptions{cap, &budget});
    try {
      while (reach.next_root_edge()) {
      }
    } catch (const BudgetExceeded&) {
    }
    Json out = Json::array();
    for (const auto& [k, n] : reach.histogram())
      out.push_back({{"weight", k.first}, {"symbol", k.second}, {"edges", n}});
    return out.dump(1) + "\n";
  }
};

struct CheckCmd {
  std::string lang = "minijava";
  std::string env;
  std::string input = "-";

  int run() const {
    const auto& fe = frontend_by_name(lang);
    const auto e = load_env(env, fe);
    const auto tokens = lex_program(input, fe);
    const auto c = fe.check_compiles(tokens, e);
    Json j = {{"ok", c.ok}};
    if (!c.ok) j["diagnostic"] = c.diagnostic;
    std::cout << j.dump() << "\n";
    return c.ok ? kOk : kRejected;
  }
};

struct GenCmd {
  std::uint64_t seed = 0;
  std::uint32_t count = 1;
  int tokens_min = 20;
  int tokens_max = 60;
  int max_tokens = 0;

  int run() const {
    for (std::uint32_t i = 0; i < count; ++i) {
      GenParams gp;
      gp.seed = derive_seed(seed, i);
      gp.tokens = {tokens_min, tokens_max};
      gp.max_tokens = max_tokens;
      const auto p = generate_program(gp);
      CorpusRecord r;
      r.seed = gp.seed;
      r.env = p.env.to_text();
      r.tokens = lexemes(p.tokens);
      std::cout << to_json(r).dump() << "\n";
    }
    return kOk;
  }
};

struct MutateCmd {
  std::string input = "-";
  std::string group;
  std::vector<int> ops;
  std::uint32_t errors = 1;
  std::uint64_t seed = 0;

  int run() const {
    if (group.empty() == ops.empty())
      throw InputError("give exactly one of --group or --ops");
    MutationSpec spec;
    spec.ops = group.empty() ? ops : group_ops(group);
    spec.count = errors;
    const auto corpus = parse_corpus(read_input(input));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      auto r = corpus[i];
      const auto& fe = frontend_by_name(r.lang);
      const auto env = parse_env(r.env);
      const auto tokens = tokens_from_lexemes(r.tokens, fe);
      spec.seed = derive_seed(seed ^ r.seed, i);
      const auto m = mutate(tokens, spec, fe, env);
      if (r.original.empty()) r.original = r.tokens;
      r.tokens = lexemes(m.tokens);
      r.mutations.insert(r.mutations.end(), m.mutations.begin(),
                         m.mutations.end());
      r.expected_max_weight += errors;
      r.oracle_weight.reset();
      r.oracle_status.clear();
      std::cout << to_json(r).dump() << "\n";
    }
    return kOk;
  }
};

struct OracleCmd {
  std::string input = "-";
  std::uint32_t kmax = 2;
  std::uint64_t cap = 100'000'000;

  int run() const {
    const auto corpus = parse_corpus(read_input(input));
    for (auto r : corpus) {
      const auto& fe = frontend_by_name(r.lang);
      const auto env = parse_env(r.env);
      const auto tokens = tokens_from_lexemes(r.tokens, fe);
      try {
        r.oracle_weight = oracle_min_fix(tokens, fe, env, {kmax, cap});
        r.oracle_status = r.oracle_weight ? "resolved" : "none-within-kmax";
      } catch (const OracleCapExceeded& e) {
        log(Level::Warn, "record ", r.seed, ": ", e.what());
        r.oracle_weight.reset();
        r.oracle_status = "cap-exceeded";
      }
      std::cout << to_json(r).dump() << "\n";
    }
    return kOk;
  }
};

struct BenchCmd {
  std::string input = "-";
  std::string csv;
  unsigned jobs = 1;
  LimitOpts lim;

  struct Row {
    std::size_t tokens = 0;
    std::uint32_t errors = 0;
    std::optional<std::uint32_t> weight;
    FixStatus status = FixStatus::NoFixWithinCap;
    bool verified = false;
    double cpu = 0;
  };

  int run() const {
    const auto corpus = parse_corpus(read_input(input));
    std::vector<Row> rows(corpus.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
      for (std::size_t i; (i = next++) < corpus.size();) {
        try {
          rows[i] = run_one(corpus[i]);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < std::max(jobs, 1u); ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);

    Json records = Json::array();
    std::map<std::string, std::size_t> hist;
    std::vector<double> cpu;
    std::size_t within = 0, resolved = 0, agree = 0;
    std::ostringstream csv_out;
    csv_out << "index,seed,tokens,errors,weight,status,verified,cpu_seconds\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const auto& c = corpus[i];
      ++hist[to_string(r.status)];
      cpu.push_back(r.cpu);
      Json rec = {{"index", i},
                  {"seed", c.seed},
                  {"tokens", r.tokens},
                  {"errors", r.errors},
                  {"weight", r.weight ? Json(*r.weight) : Json(nullptr)},
                  {"status", to_string(r.status)},
                  {"verified", r.verified},
                  {"cpu_seconds", r.cpu}};
      if (r.weight && *r.weight <= c.expected_max_weight) ++within;
      if (c.oracle_weight) {
        ++resolved;
        const bool ok = r.weight == c.oracle_weight;
        if (ok) ++agree;
        rec["oracle_weight"] = *c.oracle_weight;
        rec["oracle_agrees"] = ok;
      }
      records.push_back(std::move(rec));
      csv_out << i << ',' << c.seed << ',' << r.tokens << ',' << r.errors << ','
              << (r.weight ? std::to_string(*r.weight) : "") << ','
              << to_string(r.status) << ',' << (r.verified ? 1 : 0) << ','
              << r.cpu << '\n';
    }
    if (!csv.empty()) write_file(csv, csv_out.str());

    std::sort(cpu.begin(), cpu.end());
    auto pct = [&](double p) -> Json {
      if (cpu.empty()) return nullptr;
      auto k = static_cast<std::size_t>(std::ceil(p * cpu.size()));
      return cpu[std::clamp<std::size_t>(k, 1, cpu.size()) - 1];
    };
    double total = 0;
    for (double x : cpu) total += x;
    Json statuses = Json::object();
    for (const auto& [k, v] : hist) statuses[k] = v;
    Json summary = {{"count", rows.size()},
                    {"status", statuses},
                    {"within_expected", within},
                    {"oracle_resolved", resolved},
                    {"oracle_agree", agree},
                    {"cpu_seconds",
                     {{"total", total},
                      {"p50", pct(0.5)},
                      {"p90", pct(0.9)},
                      {"p99", pct(0.99)},
                      {"max", cpu.empty() ? Json(nullptr) : Json(cpu.back())}}}};
    std::cout << Json{{"records", records}, {"summary", summary}}.dump() << "\n";
    return kOk;
  }

  Row run_one(const CorpusRecord& c) const {
    const auto& fe = frontend_by_name(c.lang);
    const auto env = parse_env(c.env);
    fe.validate_env(env);
    FixRequest req;
    req.tokens = tokens_from_lexemes(c.tokens, fe);
    req.frontend = &fe;
    req.env = &env;
    req.limits = lim.limits();
    req.memoize = !lim.no_memo;
    const double t0 = thread_cpu_seconds();
    const auto res = fix(req);
    Row row;
    row.cpu = thread_cpu_seconds() - t0;
    row.tokens = req.tokens.size();
    row.errors = static_cast<std::uint32_t>(c.mutations.size());
    row.status = res.status;
    row.verified = res.verified;
    if (res.status == FixStatus::Fixed) row.weight = res.weight;
    log(Level::Debug, "record ", c.seed, ": ", to_string(res.status), " in ",
        row.cpu, " s");
    return row;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-edit repair of non-compiling token streams"};
  app.require_subcommand(1);
  const auto langs = frontend_names();

  FixCmd fix_cmd;
  auto* fx = app.add_subcommand("fix", "Repair a program with the fewest token edits");
  fx->add_option("--lang", fix_cmd.lang, "Language")
      ->check(CLI::IsMember(langs));
  fx->add_option("--env", fix_cmd.env, "Environment file");
  fx->add_option("input", fix_cmd.input, "Program file or - for stdin");
  fx->add_option("--output", fix_cmd.output, "json or human")
      ->check(CLI::IsMember({"json", "human"}));
  fx->add_flag("--timing", fix_cmd.timing, "Include elapsed time in JSON");
  fx->add_option("--dump-modgraph", fix_cmd.dump_modgraph,
                 "Write the modification graph as DOT");
  fx->add_option("--dump-reach", fix_cmd.dump_reach,
                 "Write derived-edge counts per weight and label as JSON");
  fix_cmd.lim.add_to(fx);

  CheckCmd check_cmd;
  auto* ck = app.add_subcommand("check", "Run the reference checker");
  ck->add_option("--lang", check_cmd.lang, "Language")
      ->check(CLI::IsMember(langs));
  ck->add_option("--env", check_cmd.env, "Environment file");
  ck->add_option("input", check_cmd.input, "Program file or - for stdin");

  GenCmd gen_cmd;
  auto* gn = app.add_subcommand("gen", "Generate compilable minijava programs (JSONL)");
  gn->add_option("--seed", gen_cmd.seed, "Base seed");
  gn->add_option("--count", gen_cmd.count, "Number of programs");
  gn->add_option("--tokens-min", gen_cmd.tokens_min, "Target length lower bound");
  gn->add_option("--tokens-max", gen_cmd.tokens_max, "Target length upper bound");
  gn->add_option("--max-tokens", gen_cmd.max_tokens,
                 "Regenerate programs longer than this (0: no limit)");

  MutateCmd mut_cmd;
  auto* mu = app.add_subcommand("mutate", "Inject errors into a corpus");
  mu->add_option("input", mut_cmd.input, "Corpus file or - for stdin");
  mu->add_option("--group", mut_cmd.group, "syn, sem or mix")
      ->check(CLI::IsMember({"syn", "sem", "mix"}));
  mu->add_option("--ops", mut_cmd.ops, "Operator numbers 1-8")
      ->check(CLI::Range(1, 8));
  mu->add_option("--errors", mut_cmd.errors, "Mutations per record")
      ->check(CLI::PositiveNumber);
  mu->add_option("--seed", mut_cmd.seed, "Base seed");

  OracleCmd or_cmd;
  auto* oc = app.add_subcommand("oracle", "Annotate a corpus with brute-force minimal weights");
  oc->add_option("input", or_cmd.input, "Corpus file or - for stdin");
  oc->add_option("--kmax", or_cmd.kmax, "Largest edit count searched");
  oc->add_option("--cap", or_cmd.cap, "Maximum candidate checks per record");

  BenchCmd bench_cmd;
  auto* bn = app.add_subcommand("bench", "Fix every corpus record and summarize");
  bn->add_option("input", bench_cmd.input, "Corpus file or - for stdin");
  bn->add_option("--jobs", bench_cmd.jobs, "Parallel jobs")
      ->check(CLI::PositiveNumber);
  bn->add_option("--csv", bench_cmd.csv, "Also write per-record CSV here");
  bench_cmd.lim.add_to(bn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (fx->parsed()) return fix_cmd.run();
    if (ck->parsed()) return check_cmd.run();
    if (gn->parsed()) return gen_cmd.run();
    if (mu->parsed()) return mut_cmd.run();
    if (oc->parsed()) return or_cmd.run();
    if (bn->parsed()) return bench_cmd.run();
  } catch (const InputError& e) {
    log(Level::Error, e.what());
    return kInputError;
  } catch (const CorpusFormatError& e) {
    log(Level::Error, e.what());
    return kInputError;
  } catch (const EnvError& e) {
    log(Level::Error, "env line ", e.line(), ": ", e.what());
    return kInputError;
  } catch (const LexError& e) {
    log(Level::Error, e.line(), ":", e.column(), ": ", e.what());
    return kInputError;
  } catch (const std::invalid_argument& e) {
    log(Level::Error, e.what());
    return kInputError;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return kInputError;
  }
  return kInputError;
}
