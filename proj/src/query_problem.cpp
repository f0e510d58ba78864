#include "tarskiq/query_problem.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace tarskiq {

QueryProblem::QueryProblem(std::string name, std::vector<Symbol> input_alphabet,
                           std::vector<Letter> output_alphabet, int length,
                           std::vector<std::string> instances, std::vector<Letter> answers)
    : name_(std::move(name)),
      input_alphabet_(std::move(input_alphabet)),
      output_alphabet_(std::move(output_alphabet)),
      length_(length),
      instances_(std::move(instances)),
      answers_(std::move(answers)) {
  if (length_ < 1) invalid_argument(name_ + ": length must be positive");
  if (instances_.size() != answers_.size()) invalid_argument(name_ + ": one answer per instance required");
  std::set<Symbol> in(input_alphabet_.begin(), input_alphabet_.end());
  std::set<Letter> out(output_alphabet_.begin(), output_alphabet_.end());
  index_.reserve(instances_.size());
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& s = instances_[i];
    if (static_cast<int>(s.size()) != length_) {
      invalid_argument(name_ + ": instance " + std::to_string(i) + " has length " +
                       std::to_string(s.size()) + ", expected " + std::to_string(length_));
    }
    for (char ch : s) {
      if (!in.count(static_cast<Symbol>(static_cast<unsigned char>(ch)))) {
        invalid_argument(name_ + ": instance '" + render_instance(s) + "' uses a symbol outside the alphabet");
      }
    }
    if (!out.count(answers_[i])) {
      invalid_argument(name_ + ": answer " + answers_[i].to_string() + " outside the output alphabet");
    }
    if (!index_.emplace(s, i).second) invalid_argument(name_ + ": duplicate instance '" + render_instance(s) + "'");
  }
}

Symbol QueryProblem::at(std::size_t idx, int position) const {
  if (position < 1 || position > length_) {
    invalid_argument(name_ + ": position " + std::to_string(position) + " outside [1, " +
                     std::to_string(length_) + "]");
  }
  return static_cast<Symbol>(static_cast<unsigned char>(instances_.at(idx)[position - 1]));
}

std::optional<std::size_t> QueryProblem::find(const std::string& instance) const {
  auto it = index_.find(instance);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> QueryProblem::preimage(const Letter& answer) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < answers_.size(); ++i) {
    if (answers_[i] == answer) out.push_back(i);
  }
  return out;
}

std::string QueryProblem::to_json() const {
  nlohmann::json j;
  auto alphabet = nlohmann::json::array();
  for (auto s : input_alphabet_) alphabet.push_back(std::string(symbol_name(s)));
  j["alphabet"] = std::move(alphabet);
  j["length"] = length_;
  auto list = nlohmann::json::array();
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    list.push_back({{"s", render_instance(instances_[i])}, {"answer", answers_[i].to_string()}});
  }
  j["instances"] = std::move(list);
  return j.dump();
}

ProblemPtr make_os(int m) {
  if (m < 1) invalid_argument("make_os: m must be positive");
  std::vector<std::string> instances;
  std::vector<Letter> answers;
  std::vector<Letter> outputs;
  for (int k = 1; k <= m; ++k) {
    std::string s(static_cast<std::size_t>(m), symbol_byte(Symbol::Down));
    std::fill(s.begin(), s.begin() + (k - 1), symbol_byte(Symbol::Up));
    s[k - 1] = symbol_byte(Symbol::Star);
    instances.push_back(std::move(s));
    answers.push_back(Letter::index(k));
    outputs.push_back(Letter::index(k));
  }
  return std::make_shared<QueryProblem>("OS_" + std::to_string(m),
                                        std::vector<Symbol>{Symbol::Up, Symbol::Down, Symbol::Star}, outputs,
                                        m, std::move(instances), std::move(answers));
}

ProblemPtr make_hsos(int m) {
  if (m < 1) invalid_argument("make_hsos: m must be positive");
  const std::vector<Symbol> hidden = {Symbol::Up, Symbol::Down, Symbol::Star};
  std::vector<std::string> instances;
  std::vector<Letter> answers;
  for (Symbol x : hidden) {
    for (int k = 1; k <= m; ++k) {
      std::string s(static_cast<std::size_t>(m), symbol_byte(Symbol::Left));
      std::fill(s.begin(), s.begin() + (k - 1), symbol_byte(Symbol::Right));
      s[k - 1] = symbol_byte(x);
      instances.push_back(std::move(s));
      answers.push_back(Letter::of(x));
    }
  }
  return std::make_shared<QueryProblem>(
      "HSOS_" + std::to_string(m),
      std::vector<Symbol>{Symbol::Up, Symbol::Down, Symbol::Star, Symbol::Right, Symbol::Left},
      std::vector<Letter>{Letter::of(Symbol::Up), Letter::of(Symbol::Down), Letter::of(Symbol::Star)}, m,
      std::move(instances), std::move(answers));
}

ProblemPtr compose(const ProblemPtr& outer, const std::vector<ProblemPtr>& inner) {
  if (!outer) invalid_argument("compose: null outer problem");
  const int k = outer->length();
  if (static_cast<int>(inner.size()) != k) {
    invalid_argument("compose: outer length " + std::to_string(k) + " needs " + std::to_string(k) +
                     " inner problems, got " + std::to_string(inner.size()));
  }
  const std::set<Symbol> outer_in(outer->input_alphabet().begin(), outer->input_alphabet().end());
  std::set<Symbol> shared_in;
  for (int p = 0; p < k; ++p) {
    if (!inner[p]) invalid_argument("compose: null inner problem at index " + std::to_string(p + 1));
    std::set<Symbol> out;
    for (const auto& l : inner[p]->output_alphabet()) {
      if (!l.is_symbol()) {
        invalid_argument("compose: inner problem " + std::to_string(p + 1) + " has non-symbol outputs");
      }
      out.insert(l.symbol());
    }
    if (out != outer_in) {
      invalid_argument("compose: output alphabet of inner problem " + std::to_string(p + 1) +
                       " differs from the outer input alphabet");
    }
    std::set<Symbol> in(inner[p]->input_alphabet().begin(), inner[p]->input_alphabet().end());
    if (p == 0) {
      shared_in = in;
    } else if (in != shared_in) {
      invalid_argument("compose: input alphabet of inner problem " + std::to_string(p + 1) +
                       " differs from inner problem 1");
    }
  }

  auto info = std::make_shared<CompositeInfo>();
  info->outer = outer;
  info->inner = inner;
  int total = 0;
  for (int p = 0; p < k; ++p) {
    info->block_offsets.push_back(total);
    total += inner[p]->length();
  }

  std::vector<std::string> instances;
  std::vector<Letter> answers;
  for (std::size_t xi = 0; xi < outer->size(); ++xi) {
    const std::string& x = outer->instance(xi);
    std::vector<std::vector<std::size_t>> choices(static_cast<std::size_t>(k));
    bool empty = false;
    for (int p = 0; p < k; ++p) {
      choices[p] = inner[p]->preimage(Letter::of(static_cast<Symbol>(static_cast<unsigned char>(x[p]))));
      empty = empty || choices[p].empty();
    }
    if (empty) continue;
    // Odometer over the product of preimages, block 1 most significant.
    std::vector<std::size_t> digit(static_cast<std::size_t>(k), 0);
    while (true) {
      std::string s;
      s.reserve(static_cast<std::size_t>(total));
      std::vector<std::size_t> blocks(static_cast<std::size_t>(k));
      for (int p = 0; p < k; ++p) {
        blocks[p] = choices[p][digit[p]];
        s += inner[p]->instance(blocks[p]);
      }
      instances.push_back(std::move(s));
      answers.push_back(outer->answer(xi));
      info->tilde.push_back(x);
      info->tilde_index.push_back(xi);
      info->block_index.push_back(std::move(blocks));
      int p = k - 1;
      while (p >= 0 && ++digit[p] == choices[p].size()) digit[p--] = 0;
      if (p < 0) break;
    }
  }

  std::string name = outer->name() + "∘(";
  for (int p = 0; p < k; ++p) name += (p ? "," : "") + inner[p]->name();
  name += ")";
  auto h = std::make_shared<QueryProblem>(std::move(name), inner[0]->input_alphabet(),
                                          outer->output_alphabet(), total, std::move(instances),
                                          std::move(answers));
  h->composite_ = std::move(info);
  return h;
}

ProblemPtr make_nos(int a, int b) {
  if (a < 1 || b < 1) invalid_argument("make_nos: a and b must be positive");
  auto g = make_hsos(b);
  return compose(make_os(a), std::vector<ProblemPtr>(static_cast<std::size_t>(a), g));
}

std::vector<std::string> instance_labels(const QueryProblem& p) { return p.instances(); }

RationalMatrix distinguisher(const QueryProblem& p, int position) {
  if (position < 1 || position > p.length()) {
    invalid_argument("distinguisher: position " + std::to_string(position) + " outside [1, " +
                     std::to_string(p.length()) + "]");
  }
  const auto col = static_cast<std::size_t>(position - 1);
  return RationalMatrix::from_function(instance_labels(p), [&](std::size_t r, std::size_t c) {
    return Rational(p.instance(r)[col] != p.instance(c)[col] ? 1 : 0);
  });
}

// ---------------------------------------------------------------------------

SearchLabeling::SearchLabeling(ProblemPtr problem, std::vector<Letter> sigmas, std::vector<int> sigma_of,
                               std::vector<int> variant_of)
    : problem_(std::move(problem)),
      sigmas_(std::move(sigmas)),
      sigma_of_(std::move(sigma_of)),
      variant_of_(std::move(variant_of)) {
  if (!problem_) invalid_argument("search labeling: null problem");
  const std::size_t n = problem_->size();
  if (sigmas_.empty() || n % sigmas_.size() != 0) {
    invalid_argument("search labeling: " + std::to_string(n) + " instances do not split evenly over " +
                     std::to_string(sigmas_.size()) + " answers");
  }
  if (sigma_of_.size() != n || variant_of_.size() != n) invalid_argument("search labeling: one label per instance required");
  variants_ = static_cast<int>(n / sigmas_.size());
  by_label_.assign(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    const int s = sigma_of_[x];
    const int j = variant_of_[x];
    if (s < 0 || s >= static_cast<int>(sigmas_.size()) || j < 1 || j > variants_) {
      invalid_argument("search labeling: label out of range for instance " + std::to_string(x));
    }
    if (problem_->answer(x) != sigmas_[s]) {
      invalid_argument("search labeling: instance " + std::to_string(x) + " labeled with answer " +
                       sigmas_[s].to_string() + " but maps to " + problem_->answer(x).to_string());
    }
    auto& slot = by_label_[static_cast<std::size_t>(s) * variants_ + (j - 1)];
    if (slot != n) invalid_argument("search labeling: label used twice");
    slot = x;
  }

  const int len = problem_->length();
  const std::size_t m = static_cast<std::size_t>(variants_);
  cross_.assign(static_cast<std::size_t>(len) * m * m, Pattern::Unobserved);
  same_.assign(cross_.size(), Pattern::Unobserved);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const bool cross = sigma_of_[x] != sigma_of_[y];
      auto& table = cross ? cross_ : same_;
      const auto& sx = problem_->instance(x);
      const auto& sy = problem_->instance(y);
      for (int i = 1; i <= len; ++i) {
        const Pattern seen = sx[i - 1] == sy[i - 1] ? Pattern::Equal : Pattern::Differ;
        auto& cell = table[pattern_slot(i, variant_of_[x], variant_of_[y])];
        if (cell == Pattern::Unobserved) {
          cell = seen;
        } else if (cell != seen && cell != Pattern::Conflict) {
          cell = Pattern::Conflict;
          if (!first_conflict_) {
            first_conflict_ = std::string(cross ? "cross-answer" : "same-answer") + " equality at position " +
                              std::to_string(i) + " for variants (" + std::to_string(variant_of_[x]) + ", " +
                              std::to_string(variant_of_[y]) + ") depends on the answers";
          }
        }
      }
    }
  }
}

std::size_t SearchLabeling::instance_at(std::size_t sigma, int variant) const {
  if (sigma >= sigmas_.size() || variant < 1 || variant > variants_) {
    invalid_argument("search labeling: no instance labeled (" + std::to_string(sigma) + ", " +
                     std::to_string(variant) + ")");
  }
  return by_label_[sigma * static_cast<std::size_t>(variants_) + (variant - 1)];
}

std::size_t SearchLabeling::pattern_slot(int position, int j1, int j2) const {
  const auto m = static_cast<std::size_t>(variants_);
  return (static_cast<std::size_t>(position - 1) * m + (j1 - 1)) * m + (j2 - 1);
}

SearchLabeling::Pattern SearchLabeling::cross_pattern(int position, int j1, int j2) const {
  if (position < 1 || position > problem_->length()) invalid_argument("search labeling: position out of range");
  return cross_[pattern_slot(position, j1, j2)];
}

SearchLabeling::Pattern SearchLabeling::same_pattern(int position, int j1, int j2) const {
  if (position < 1 || position > problem_->length()) invalid_argument("search labeling: position out of range");
  return same_[pattern_slot(position, j1, j2)];
}

std::optional<SearchLabeling> detect_search_labeling(const ProblemPtr& p) {
  if (!p) invalid_argument("detect_search_labeling: null problem");
  const auto& sigmas = p->output_alphabet();
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& s : sigmas) groups.push_back(p->preimage(s));
  for (const auto& g : groups) {
    if (g.size() != groups.front().size() || g.empty()) return std::nullopt;
  }

  const int len = p->length();
  std::vector<int> sigma_of(p->size());
  std::vector<int> variant_of(p->size());
  for (std::size_t s = 0; s < groups.size(); ++s) {
    // Characters that occur at each position outside group s.
    std::vector<std::set<char>> elsewhere(static_cast<std::size_t>(len));
    for (std::size_t t = 0; t < groups.size(); ++t) {
      if (t == s) continue;
      for (auto x : groups[t]) {
        for (int i = 0; i < len; ++i) elsewhere[i].insert(p->instance(x)[i]);
      }
    }
    std::vector<std::pair<int, std::size_t>> keyed;
    for (auto x : groups[s]) {
      int key = len;
      for (int i = 0; i < len; ++i) {
        if (!elsewhere[i].count(p->instance(x)[i])) {
          key = i;
          break;
        }
      }
      keyed.emplace_back(key, x);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t r = 0; r < keyed.size(); ++r) {
      sigma_of[keyed[r].second] = static_cast<int>(s);
      variant_of[keyed[r].second] = static_cast<int>(r) + 1;
    }
  }
  SearchLabeling lab(p, sigmas, std::move(sigma_of), std::move(variant_of));
  if (!lab.valid()) return std::nullopt;
  return lab;
}

SearchLabeling hsos_labeling(const ProblemPtr& hsos) {
  if (!hsos) invalid_argument("hsos_labeling: null problem");
  const auto& sigmas = hsos->output_alphabet();
  std::vector<int> sigma_of(hsos->size());
  std::vector<int> variant_of(hsos->size());
  for (std::size_t x = 0; x < hsos->size(); ++x) {
    const auto& s = hsos->instance(x);
    int hidden = -1;
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
      const auto c = static_cast<Symbol>(static_cast<unsigned char>(s[i]));
      if (c != Symbol::Right && c != Symbol::Left) {
        hidden = i;
        break;
      }
    }
    if (hidden < 0) invalid_argument("hsos_labeling: instance without a hidden symbol");
    auto it = std::find(sigmas.begin(), sigmas.end(), hsos->answer(x));
    sigma_of[x] = static_cast<int>(it - sigmas.begin());
    variant_of[x] = hidden + 1;
  }
  return SearchLabeling(hsos, sigmas, std::move(sigma_of), std::move(variant_of));
}

}  // namespace tarskiq
