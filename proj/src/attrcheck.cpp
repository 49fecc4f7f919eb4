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

#include "ordfix/attrcheck.hpp"

#include <algorithm>

namespace ordfix {

namespace {
constexpr std::uint32_t kNil = 0xffffffffu;
constexpr std::size_t kLinearMergeLimit = 8;
}  // namespace

struct AttrChecker::Entry {
  EdgeId edge = kNoEdge;
  AttrValue inherited;
  bool terminal = false;
  bool done = false;
  bool busy = false;

  std::vector<AttrValue> values;
  std::vector<Provenance> provenance;
  std::vector<std::string> lexemes;  // terminal entries
  std::unique_ptr<std::unordered_set<AttrValue>> seen;

  // cursor over the edge's expansions, cheapest left part first
  std::vector<std::uint32_t> order;
  std::uint32_t next_order = 0;
  std::uint32_t expansion = kNil;
  std::uint8_t stage = 0;
  Entry* left = nullptr;
  std::uint32_t left_index = 0;
  Entry* right = nullptr;
  std::uint32_t right_index = 0;
};

AttrChecker::AttrChecker(const Reachability& reach, const AttributeRules& rules,
                         AttrCheckOptions options)
    : reach_(reach), rules_(rules), opt_(options) {}

AttrChecker::~AttrChecker() = default;

void AttrChecker::tick() {
  ++stats_.rule_invocations;
  if (opt_.budget) opt_.budget->tick();
}

AttrChecker::Entry* AttrChecker::entry_for(EdgeId edge,
                                           const AttrValue& inherited) {
  Entry* e = nullptr;
  if (opt_.memoize) {
    auto [it, inserted] = memo_.try_emplace({edge, inherited});
    if (!inserted) return it->second.get();
    it->second = std::make_unique<Entry>();
    e = it->second.get();
  } else {
    private_.push_back(std::make_unique<Entry>());
    e = private_.back().get();
  }
  ++stats_.memo_entries;
  if (opt_.budget) opt_.budget->charge(sizeof(Entry) + 96);
  e->edge = edge;
  e->inherited = inherited;
  const auto& re = reach_.edge(edge);
  e->terminal = reach_.grammar().symbol(re.symbol).is_terminal();
  if (e->terminal) {
    e->expansion = re.first_expansion;
    init_terminal(*e);
    return e;
  }
  // Among equal-weight derivations this prefers edits as far right as
  // possible, i.e. the longest unedited prefix.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> keyed;
  for (std::uint32_t xi = re.first_expansion; xi != kNil;
       xi = reach_.expansion_at(xi).next) {
    const auto& x = reach_.expansion_at(xi);
    const std::uint32_t lw =
        x.kind == ExpansionKind::Epsilon ? 0 : reach_.edge(x.left).weight;
    keyed.emplace_back(lw, xi);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  e->order.reserve(keyed.size());
  for (const auto& k : keyed) e->order.push_back(k.second);
  if (opt_.budget) opt_.budget->charge(e->order.size() * sizeof(std::uint32_t));
  e->expansion = e->order.empty() ? kNil : e->order[0];
  e->next_order = 1;
  return e;
}

void AttrChecker::init_terminal(Entry& e) {
  const auto& me = reach_.graph().edge(reach_.leaf_modedge(e.edge));
  TerminalInfo info;
  info.terminal = me.symbol;
  info.kind = me.kind;
  info.lexeme_must_differ = me.lexeme_must_differ;
  info.position = me.from;
  if (me.kind != EditKind::Insertion)
    info.original_lexeme = reach_.graph().tokens()[me.from].lexeme;
  tick();
  std::vector<TerminalChoice> choices;
  try {
    choices = rules_.process_terminal(info, e.inherited);
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const std::exception& ex) {
    throw RuleError("attribute rule failed on terminal '" +
                    reach_.grammar().symbol(me.symbol).name + "': " +
                    ex.what());
  }
  for (auto& c : choices)
    if (add_value(e, c.value, Provenance{e.expansion, 0, 0, nullptr, nullptr}))
      e.lexemes.push_back(std::move(c.lexeme));
  e.done = true;
}

bool AttrChecker::add_value(Entry& e, AttrValue v, const Provenance& p) {
  if (e.seen) {
    if (!e.seen->insert(v).second) return false;
  } else {
    if (std::find(e.values.begin(), e.values.end(), v) != e.values.end())
      return false;
    if (e.values.size() + 1 > kLinearMergeLimit) {
      e.seen = std::make_unique<std::unordered_set<AttrValue>>(
          e.values.begin(), e.values.end());
      e.seen->insert(v);
    }
  }
  e.values.push_back(std::move(v));
  e.provenance.push_back(p);
  ++stats_.memo_values;
  if (opt_.budget)
    opt_.budget->charge(sizeof(AttrValue) + sizeof(Provenance) + 32);
  return true;
}

bool AttrChecker::get(Entry& e, std::size_t index) {
  while (e.values.size() <= index) {
    if (e.done || e.busy) return false;  // busy: cyclic re-entry sees prefix
    e.busy = true;
    bool produced;
    try {
      produced = produce(e);
    } catch (...) {
      e.busy = false;
      throw;
    }
    e.busy = false;
    if (!produced) {
      e.done = true;
      return false;
    }
  }
  return true;
}

// Advances the entry's cursor until one new distinct value is appended.
bool AttrChecker::produce(Entry& e) {
  const auto& g = reach_.grammar();
  auto rule_error = [&](ProductionId pid, const std::exception& ex) {
    const auto& p = g.production(pid);
    std::string name = g.symbol(p.lhs).name + " ->";
    for (auto s : p.rhs) name += " " + g.symbol(s).name;
    return RuleError("attribute rule failed in production '" + name +
                     "': " + ex.what());
  };
  auto next_expansion = [&] {
    e.expansion = e.next_order < e.order.size() ? e.order[e.next_order++] : kNil;
    e.stage = 0;
  };

  while (e.expansion != kNil) {
    const std::uint32_t xi = e.expansion;
    const Expansion& x = reach_.expansion_at(xi);
    const Production* p =
        x.production == kNoProduction ? nullptr : &g.production(x.production);
    try {
      switch (x.kind) {
        case ExpansionKind::Epsilon: {
          next_expansion();
          tick();
          auto s = rules_.process_synthesized(*p, e.inherited, nullptr, nullptr);
          if (s && add_value(e, std::move(*s), {xi, 0, 0, nullptr, nullptr}))
            return true;
          break;
        }
        case ExpansionKind::Unary:
        case ExpansionKind::DeleteTrailing: {
          const bool unary = x.kind == ExpansionKind::Unary;
          if (e.stage == 0) {
            std::optional<AttrValue> ib;
            if (unary) {
              tick();
              ib = rules_.process_left_inherited(*p, e.inherited);
            } else {
              ib = e.inherited;
            }
            if (!ib) {
              next_expansion();
              break;
            }
            e.left = entry_for(x.left, *ib);
            e.left_index = 0;
            e.stage = 1;
          }
          if (!get(*e.left, e.left_index)) {
            next_expansion();
            break;
          }
          const AttrValue sb = e.left->values[e.left_index];
          const std::uint32_t li = e.left_index++;
          std::optional<AttrValue> s = sb;
          if (unary) {
            tick();
            s = rules_.process_synthesized(*p, e.inherited, &sb, nullptr);
          }
          if (s && add_value(e, std::move(*s), {xi, li, 0, e.left, nullptr}))
            return true;
          break;
        }
        case ExpansionKind::Binary: {
          if (e.stage == 0) {
            tick();
            auto ib = rules_.process_left_inherited(*p, e.inherited);
            if (!ib) {
              next_expansion();
              break;
            }
            e.left = entry_for(x.left, *ib);
            e.left_index = 0;
            e.stage = 1;
          }
          if (e.stage == 1) {
            if (!get(*e.left, e.left_index)) {
              next_expansion();
              break;
            }
            const AttrValue sb = e.left->values[e.left_index];
            tick();
            auto ic = rules_.process_right_inherited(*p, e.inherited, sb);
            if (!ic) {
              ++e.left_index;
              break;
            }
            e.right = entry_for(x.right, *ic);
            e.right_index = 0;
            e.stage = 2;
          }
          if (!get(*e.right, e.right_index)) {
            ++e.left_index;
            e.stage = 1;
            break;
          }
          const AttrValue sb = e.left->values[e.left_index];
          const AttrValue sc = e.right->values[e.right_index];
          const std::uint32_t ri = e.right_index++;
          tick();
          auto s = rules_.process_synthesized(*p, e.inherited, &sb, &sc);
          if (s && add_value(e, std::move(*s),
                             {xi, e.left_index, ri, e.left, e.right}))
            return true;
          break;
        }
        case ExpansionKind::Leaf:
        case ExpansionKind::DeleteLeft:
          throw std::logic_error("terminal expansion on a nonterminal edge");
      }
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const RuleError&) {
      throw;
    } catch (const std::logic_error&) {
      throw;
    } catch (const std::exception& ex) {
      throw rule_error(x.production, ex);
    }
  }
  return false;
}

std::optional<AttrValue> AttrChecker::Stream::next() {
  if (!checker_->get(*entry_, index_)) return std::nullopt;
  return entry_->values[index_++];
}

AttrChecker::Stream AttrChecker::check_attr(EdgeId edge,
                                            const AttrValue& inherited) {
  return Stream(this, entry_for(edge, inherited));
}

std::optional<WitnessTrace> AttrChecker::first_passing(EdgeId root) {
  tick();
  Entry* e = entry_for(root, rules_.root_inherited());
  if (!get(*e, 0)) return std::nullopt;
  WitnessTrace w;
  w.value = e->values[0];
  build_witness(*e, 0, w);
  return w;
}

std::int32_t AttrChecker::build_witness(const Entry& e, std::size_t index,
                                        WitnessTrace& out) const {
  const auto id = static_cast<std::int32_t>(out.nodes.size());
  out.nodes.emplace_back();
  const auto& prov = e.provenance[index];
  {
    auto& n = out.nodes.back();
    n.edge = e.edge;
    n.expansion = prov.expansion;
    n.inherited = e.inherited;
    n.synthesized = e.values[index];
    if (e.terminal) n.lexeme = e.lexemes[index];
  }
  if (prov.left) {
    const auto l = build_witness(*prov.left, prov.left_index, out);
    out.nodes[id].left = l;
  }
  if (prov.right) {
    const auto r = build_witness(*prov.right, prov.right_index, out);
    out.nodes[id].right = r;
  }
  return id;
}

}  // namespace ordfix
