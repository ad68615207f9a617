#include <algorithm>
#include <set>
#include <stdexcept>

#include "axtile/analysis.hpp"
#include "axtile/error.hpp"

namespace axtile {

namespace {

std::string swap_lr(std::string s) {
  for (char& c : s) c = c == 'L' ? 'R' : c == 'R' ? 'L' : c;
  return s;
}

std::string reversed(std::string s) {
  std::reverse(s.begin(), s.end());
  return s;
}

// Walks the word from the origin heading east, one unit step per symbol,
// turning after each step. True when it returns to the origin heading east
// and visits no vertex twice.
bool closed_simple_walk(const std::string& symbols) {
  constexpr Vec2 kHeadings[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int h = 0;
  Vec2 at{0, 0};
  std::vector<std::uint64_t> visited;
  visited.reserve(symbols.size());
  auto pack = [](Vec2 v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x)) << 32) |
           static_cast<std::uint32_t>(v.y);
  };
  for (char c : symbols) {
    at = at + kHeadings[h];
    visited.push_back(pack(at));
    if (c == 'L') h = (h + 1) % 4;
    else if (c == 'R') h = (h + 3) % 4;
  }
  if (at != Vec2{0, 0} || h != 0) return false;
  std::sort(visited.begin(), visited.end());
  return std::adjacent_find(visited.begin(), visited.end()) == visited.end();
}

std::vector<std::size_t> kmp_table(std::string_view p) {
  std::vector<std::size_t> fail(p.size() + 1, 0);
  for (std::size_t i = 1, k = 0; i < p.size(); ++i) {
    while (k > 0 && p[i] != p[k]) k = fail[k];
    if (p[i] == p[k]) ++k;
    fail[i + 1] = k;
  }
  return fail;
}

bool kmp_contains(std::string_view text, std::string_view pattern) {
  if (pattern.empty()) return true;
  const auto fail = kmp_table(pattern);
  for (std::size_t i = 0, k = 0; i < text.size(); ++i) {
    while (k > 0 && text[i] != pattern[k]) k = fail[k];
    if (text[i] == pattern[k]) ++k;
    if (k == pattern.size()) return true;
  }
  return false;
}

}  // namespace

std::uint64_t snowflake_length(unsigned order) {
  // |q_n| = F(n) with F(1) = F(2) = 1.
  std::uint64_t a = 0, b = 1;
  for (unsigned i = 1; i < 3 * order + 1; ++i) {
    const std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return 4 * b;
}

TurnWord fibonacci_snowflake_word(unsigned order) {
  if (order > kMaxSnowflakeOrder)
    throw Error(Errc::invalid_argument, "snowflake order must be at most " + std::to_string(kMaxSnowflakeOrder));
  // q_0 = e, q_1 = R; q_n = q_{n-1} q_{n-2} when n = 2 (mod 3), otherwise
  // q_{n-1} followed by the L/R swap of q_{n-2}. The boundary is (q_{3n+1})^4.
  std::string prev2;
  std::string prev1 = "R";
  for (unsigned n = 2; n <= 3 * order + 1; ++n) {
    std::string next = prev1 + (n % 3 == 2 ? prev2 : swap_lr(prev2));
    prev2 = std::move(prev1);
    prev1 = std::move(next);
  }
  std::string w;
  w.reserve(4 * prev1.size());
  for (int i = 0; i < 4; ++i) w += prev1;
  TurnWord tw{std::move(w), true};
  // Counterclockwise: traverse the same curve backwards.
  if (tw.turning() < 0) tw.symbols = swap_lr(reversed(std::move(tw.symbols)));
  if (tw.turning() != 4 || !closed_simple_walk(tw.symbols))
    throw std::logic_error("generated snowflake word failed self-validation");
  return tw;
}

bool is_cyclic_rotation(std::string_view hay, std::string_view needle) {
  if (hay.size() != needle.size()) return false;
  std::string doubled;
  doubled.reserve(2 * hay.size());
  doubled.append(hay).append(hay);
  return kmp_contains(doubled, needle);
}

std::optional<unsigned> match_snowflake(const TurnWord& w) {
  if (!w.closed) return std::nullopt;
  if (w.symbols.find_first_not_of("LR") != std::string::npos) return std::nullopt;
  for (unsigned order = 0; order <= kMaxSnowflakeOrder; ++order) {
    const std::uint64_t len = snowflake_length(order);
    if (len < w.symbols.size()) continue;
    if (len > w.symbols.size()) return std::nullopt;
    const std::string s = fibonacci_snowflake_word(order).symbols;
    for (const std::string& v : {s, swap_lr(s), reversed(s), swap_lr(reversed(s))})
      if (is_cyclic_rotation(v, w.symbols)) return order;
    return std::nullopt;
  }
  return std::nullopt;
}

std::string fibonacci_word_prefix(std::size_t n) {
  std::string prev = "a";
  std::string cur = "ab";
  while (cur.size() < n) {
    std::string next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  if (n < cur.size()) cur.resize(n);
  return cur;
}

bool fibonacci_factor_check(std::span<const std::int64_t> seq) {
  if (seq.size() > 10000) throw Error(Errc::invalid_argument, "sequence longer than 10000");
  if (seq.empty()) return true;
  std::set<std::int64_t> values(seq.begin(), seq.end());
  if (values.size() > 2) return false;
  // All n + 1 factors of length n have occurred by position ~2.62n; 4n + 16
  // leaves margin.
  const std::string prefix = fibonacci_word_prefix(4 * seq.size() + 16);
  const std::int64_t low = *values.begin();
  for (const bool low_is_a : {true, false}) {
    std::string word;
    word.reserve(seq.size());
    for (std::int64_t v : seq) word.push_back((v == low) == low_is_a ? 'a' : 'b');
    if (kmp_contains(prefix, word)) return true;
  }
  return false;
}

}  // namespace axtile
