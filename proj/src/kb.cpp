// Copyright 2026 The EPike Authors
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

#include "epike/kb.hpp"

#include <algorithm>
#include <set>

#include "epike/errors.hpp"

namespace epike {

namespace {

std::shared_ptr<const Vocabulary> empty_vocabulary() {
  static const auto vocab = std::make_shared<const Vocabulary>(std::vector<VariableDecl>{});
  return vocab;
}

enum Truth : uint8_t { kF = 0, kT = 1, kU = 2 };

// Index-resolved constraint, evaluated three-valued under partial
// assignments.
struct Compiled {
  struct Node {
    Constraint::Kind kind;
    int var = -1;
    int val = -1;
    int first = 0;  // into children
    int count = 0;
  };
  std::vector<Node> nodes;  // root at index 0
  std::vector<int> children;
  std::vector<int> vars;

  static Compiled compile(const Vocabulary& vocab, const Constraint& c) {
    Compiled out;
    std::set<int> vars;
    out.build(vocab, c, vars);
    out.vars.assign(vars.begin(), vars.end());
    return out;
  }

  Truth eval(const Assignment& a) const { return eval_node(0, a); }

 private:
  int build(const Vocabulary& vocab, const Constraint& c, std::set<int>& vars) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back(Node{c.kind()});
    if (c.kind() == Constraint::Kind::Assign) {
      int var = vocab.index_of(c.variable());
      if (var < 0) throw MalformedConstraint("undeclared variable '" + c.variable() + "'");
      int val = vocab.value_index(var, c.value());
      if (val < 0) {
        throw MalformedConstraint("value '" + c.value() + "' not in domain of '" +
                                  c.variable() + "'");
      }
      nodes[id].var = var;
      nodes[id].val = val;
      vars.insert(var);
      return id;
    }
    std::vector<int> kids;
    for (const auto& op : c.operands()) kids.push_back(build(vocab, op, vars));
    nodes[id].first = static_cast<int>(children.size());
    nodes[id].count = static_cast<int>(kids.size());
    children.insert(children.end(), kids.begin(), kids.end());
    return id;
  }

  Truth eval_node(int id, const Assignment& a) const {
    const Node& n = nodes[id];
    switch (n.kind) {
      case Constraint::Kind::Top:
        return kT;
      case Constraint::Kind::Bottom:
        return kF;
      case Constraint::Kind::Assign: {
        int v = a[n.var];
        if (v < 0) return kU;
        return v == n.val ? kT : kF;
      }
      case Constraint::Kind::Not: {
        Truth t = eval_node(children[n.first], a);
        return t == kU ? kU : (t == kT ? kF : kT);
      }
      case Constraint::Kind::And: {
        Truth acc = kT;
        for (int i = 0; i < n.count; ++i) {
          Truth t = eval_node(children[n.first + i], a);
          if (t == kF) return kF;
          if (t == kU) acc = kU;
        }
        return acc;
      }
      case Constraint::Kind::Or: {
        Truth acc = kF;
        for (int i = 0; i < n.count; ++i) {
          Truth t = eval_node(children[n.first + i], a);
          if (t == kT) return kT;
          if (t == kU) acc = kU;
        }
        return acc;
      }
    }
    return kU;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// KnowledgeBase

KnowledgeBase::KnowledgeBase() : vocab_(empty_vocabulary()) { refresh_fingerprint(); }

KnowledgeBase::KnowledgeBase(std::shared_ptr<const Vocabulary> vocab,
                             std::vector<Constraint> constraints)
    : vocab_(vocab ? std::move(vocab) : empty_vocabulary()) {
  for (auto& c : constraints) {
    validate_constraint(*vocab_, c);
    if (!contains(c)) constraints_.push_back(std::move(c));
  }
  refresh_fingerprint();
}

void KnowledgeBase::refresh_fingerprint() {
  std::vector<uint64_t> hashes;
  hashes.reserve(constraints_.size());
  for (const auto& c : constraints_) hashes.push_back(c.hash());
  std::sort(hashes.begin(), hashes.end());
  uint64_t h = mix_hash(0x6b62, vocab_->fingerprint());
  for (uint64_t x : hashes) h = mix_hash(h, x);
  fingerprint_ = h;
}

KnowledgeBase KnowledgeBase::add(const Constraint& c) const {
  validate_constraint(*vocab_, c);
  KnowledgeBase out = *this;
  if (!contains(c)) {
    out.constraints_.push_back(c);
    out.refresh_fingerprint();
  }
  return out;
}

KnowledgeBase KnowledgeBase::remove(const Constraint& c) const {
  KnowledgeBase out = *this;
  auto it = std::find(out.constraints_.begin(), out.constraints_.end(), c);
  if (it != out.constraints_.end()) {
    out.constraints_.erase(it);
    out.refresh_fingerprint();
  }
  return out;
}

bool KnowledgeBase::contains(const Constraint& c) const {
  return std::find(constraints_.begin(), constraints_.end(), c) != constraints_.end();
}

bool KnowledgeBase::sat(const Constraint& c) const { return QueryEngine::shared().sat(*this, c); }

bool KnowledgeBase::entails(const Constraint& c) const {
  return !QueryEngine::shared().sat(*this, Constraint::negation(c));
}

bool KnowledgeBase::consistent() const { return sat(Constraint::top()); }

// ---------------------------------------------------------------------------
// EnumerationSolver

namespace {

template <typename Visit>
void for_each_full_assignment(const Vocabulary& vocab, Visit&& visit) {
  const int n = static_cast<int>(vocab.size());
  Assignment a(n, 0);
  while (true) {
    if (!visit(a)) return;
    int i = 0;
    while (i < n) {
      if (++a[i] < static_cast<int>(vocab.at(i).domain.size())) break;
      a[i] = 0;
      ++i;
    }
    if (i == n) return;
  }
}

std::vector<Compiled> compile_all(const Vocabulary& vocab, std::span<const Constraint> cs) {
  std::vector<Compiled> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(Compiled::compile(vocab, c));
  return out;
}

}  // namespace

bool EnumerationSolver::satisfiable(const Vocabulary& vocab,
                                    std::span<const Constraint> constraints) {
  auto compiled = compile_all(vocab, constraints);
  bool found = false;
  for_each_full_assignment(vocab, [&](const Assignment& a) {
    for (const auto& c : compiled) {
      if (c.eval(a) != kT) return true;
    }
    found = true;
    return false;
  });
  return found;
}

std::vector<Assignment> EnumerationSolver::project_models(const Vocabulary& vocab,
                                                          std::span<const Constraint> constraints,
                                                          std::span<const int> project) {
  auto compiled = compile_all(vocab, constraints);
  std::set<Assignment> found;
  for_each_full_assignment(vocab, [&](const Assignment& a) {
    for (const auto& c : compiled) {
      if (c.eval(a) != kT) return true;
    }
    Assignment p;
    for (int v : project) p.push_back(a[v]);
    found.insert(std::move(p));
    return true;
  });
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// BacktrackingSolver

struct BacktrackingSolver::Impl {
  std::shared_ptr<const Vocabulary> vocab;
  std::vector<Compiled> stack;
  std::vector<std::size_t> marks;

  // Any asserted constraint false under `a`? Are all of them true?
  Truth status(const Assignment& a) const {
    Truth acc = kT;
    for (const auto& c : stack) {
      Truth t = c.eval(a);
      if (t == kF) return kF;
      if (t == kU) acc = kU;
    }
    return acc;
  }

  std::vector<int> relevant_vars() const {
    std::set<int> vars;
    for (const auto& c : stack) vars.insert(c.vars.begin(), c.vars.end());
    return {vars.begin(), vars.end()};
  }

  bool search(Assignment& a, const std::vector<int>& order, std::size_t pos) const {
    Truth t = status(a);
    if (t == kF) return false;
    if (t == kT) return true;
    while (pos < order.size() && a[order[pos]] >= 0) ++pos;
    if (pos == order.size()) return false;
    int var = order[pos];
    int dom = static_cast<int>(vocab->at(var).domain.size());
    for (int v = 0; v < dom; ++v) {
      a[var] = v;
      if (search(a, order, pos + 1)) {
        a[var] = -1;
        return true;
      }
    }
    a[var] = -1;
    return false;
  }

  void enumerate(Assignment& a, const std::vector<int>& project, std::size_t pos,
                 const std::vector<int>& rest, std::set<Assignment>& out) const {
    if (status(a) == kF) return;
    if (pos == project.size()) {
      if (search(a, rest, 0)) {
        Assignment p;
        for (int v : project) p.push_back(a[v]);
        out.insert(std::move(p));
      }
      return;
    }
    int var = project[pos];
    int dom = static_cast<int>(vocab->at(var).domain.size());
    for (int v = 0; v < dom; ++v) {
      a[var] = v;
      enumerate(a, project, pos + 1, rest, out);
    }
    a[var] = -1;
  }
};

BacktrackingSolver::BacktrackingSolver() : impl_(std::make_unique<Impl>()) {}
BacktrackingSolver::~BacktrackingSolver() = default;

void BacktrackingSolver::reset(std::shared_ptr<const Vocabulary> vocab) {
  impl_->vocab = std::move(vocab);
  impl_->stack.clear();
  impl_->marks.clear();
}

void BacktrackingSolver::push() { impl_->marks.push_back(impl_->stack.size()); }

void BacktrackingSolver::pop() {
  if (impl_->marks.empty()) return;
  impl_->stack.resize(impl_->marks.back());
  impl_->marks.pop_back();
}

void BacktrackingSolver::add(const Constraint& c) {
  impl_->stack.push_back(Compiled::compile(*impl_->vocab, c));
}

bool BacktrackingSolver::check() {
  Assignment a(impl_->vocab->size(), -1);
  return impl_->search(a, impl_->relevant_vars(), 0);
}

bool BacktrackingSolver::satisfiable(const Vocabulary& vocab,
                                     std::span<const Constraint> constraints) {
  auto shared = std::make_shared<const Vocabulary>(vocab);
  reset(shared);
  for (const auto& c : constraints) add(c);
  return check();
}

std::vector<Assignment> BacktrackingSolver::project_models(const Vocabulary& vocab,
                                                           std::span<const Constraint> constraints,
                                                           std::span<const int> project) {
  reset(std::make_shared<const Vocabulary>(vocab));
  for (const auto& c : constraints) add(c);
  std::vector<int> proj(project.begin(), project.end());
  std::set<int> in_proj(proj.begin(), proj.end());
  std::vector<int> rest;
  for (int v : impl_->relevant_vars()) {
    if (!in_proj.count(v)) rest.push_back(v);
  }
  Assignment a(impl_->vocab->size(), -1);
  std::set<Assignment> out;
  impl_->enumerate(a, proj, 0, rest, out);
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// QueryEngine

QueryEngine& QueryEngine::shared() {
  static QueryEngine engine;
  return engine;
}

bool QueryEngine::sat(const KnowledgeBase& kb, const Constraint& query) {
  const std::pair<uint64_t, uint64_t> key{kb.fingerprint(), query.hash()};
  {
    std::lock_guard lock(mutex_);
    auto it = sat_cache_.find(key);
    if (it != sat_cache_.end()) {
      ++hits_;
      return it->second;
    }
    ++misses_;
  }
  thread_local BacktrackingSolver solver;
  solver.reset(kb.vocabulary_ptr());
  for (const auto& c : kb.constraints()) solver.add(c);
  solver.push();
  solver.add(query);
  bool result = solver.check();
  solver.pop();
  std::lock_guard lock(mutex_);
  if (sat_cache_.size() > (1u << 22)) sat_cache_.clear();
  sat_cache_.emplace(key, result);
  return result;
}

std::vector<Assignment> QueryEngine::project_models(const KnowledgeBase& kb,
                                                    std::span<const int> vars) {
  thread_local BacktrackingSolver solver;
  return solver.project_models(kb.vocabulary(), kb.constraints(), vars);
}

void QueryEngine::clear() {
  std::lock_guard lock(mutex_);
  sat_cache_.clear();
  hits_ = misses_ = 0;
}

std::vector<std::vector<std::string>> enumerate_models(const KnowledgeBase& kb,
                                                       const std::vector<std::string>& vars) {
  const auto& vocab = kb.vocabulary();
  std::vector<int> idx;
  for (const auto& name : vars) {
    int i = vocab.index_of(name);
    if (i < 0) throw MalformedConstraint("undeclared variable '" + name + "'");
    idx.push_back(i);
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& a : QueryEngine::shared().project_models(kb, idx)) {
    std::vector<std::string> row;
    for (std::size_t k = 0; k < idx.size(); ++k) row.push_back(vocab.at(idx[k]).domain[a[k]]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace epike
