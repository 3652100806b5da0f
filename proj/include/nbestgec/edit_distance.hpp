#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace nbestgec {

enum class EditKind : std::uint8_t { correct, substitute, remove, insert };

inline constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();

// One step of an edit script. Indices point into the reference / hypothesis
// sequences that were aligned; the absent side is no_index.
struct EditOp {
  EditKind kind;
  std::size_t ref_index;
  std::size_t hyp_index;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct EditCounts {
  std::size_t correct = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

  EditCounts& operator+=(const EditCounts& o) noexcept {
    correct += o.correct;
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    return *this;
  }

  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

struct Alignment {
  std::vector<EditOp> ops;
  EditCounts counts;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;
};

// General minimum-cost alignment of a length-m "reference" axis against a
// length-n "hypothesis" axis.
//   sub(i, j) -> cost of pairing ref i with hyp j; 0 is reported as CORRECT
//   del(i)    -> cost of leaving ref i unpaired
//   ins(j)    -> cost of leaving hyp j unpaired
// Backtrace preference on ties: diagonal, then deletion, then insertion.
template <typename SubCost, typename DelCost, typename InsCost>
  requires std::invocable<SubCost, std::size_t, std::size_t> &&
           std::invocable<DelCost, std::size_t> && std::invocable<InsCost, std::size_t>
Alignment align_with_costs(std::size_t m, std::size_t n, SubCost&& sub, DelCost&& del, InsCost&& ins) {
  const std::size_t w = n + 1;
  std::vector<std::uint32_t> cost((m + 1) * w);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return cost[i * w + j]; };

  for (std::size_t j = 1; j <= n; ++j) at(0, j) = at(0, j - 1) + static_cast<std::uint32_t>(ins(j - 1));
  for (std::size_t i = 1; i <= m; ++i) {
    at(i, 0) = at(i - 1, 0) + static_cast<std::uint32_t>(del(i - 1));
    const auto d = static_cast<std::uint32_t>(del(i - 1));
    for (std::size_t j = 1; j <= n; ++j) {
      const std::uint32_t diag = at(i - 1, j - 1) + static_cast<std::uint32_t>(sub(i - 1, j - 1));
      const std::uint32_t up = at(i - 1, j) + d;
      const std::uint32_t left = at(i, j - 1) + static_cast<std::uint32_t>(ins(j - 1));
      at(i, j) = std::min({diag, up, left});
    }
  }

  Alignment a;
  a.ref_len = m;
  a.hyp_len = n;
  a.ops.reserve(m + n);
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const auto s = static_cast<std::uint32_t>(sub(i - 1, j - 1));
      if (at(i - 1, j - 1) + s == at(i, j)) {
        if (s == 0) {
          a.ops.push_back({EditKind::correct, i - 1, j - 1});
          ++a.counts.correct;
        } else {
          a.ops.push_back({EditKind::substitute, i - 1, j - 1});
          ++a.counts.substitutions;
        }
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + static_cast<std::uint32_t>(del(i - 1)) == at(i, j)) {
      a.ops.push_back({EditKind::remove, i - 1, no_index});
      ++a.counts.deletions;
      --i;
      continue;
    }
    a.ops.push_back({EditKind::insert, no_index, j - 1});
    ++a.counts.insertions;
    --j;
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

// Unit-cost Levenshtein alignment.
template <typename T>
Alignment align(std::span<const T> ref, std::span<const T> hyp) {
  return align_with_costs(
      ref.size(), hyp.size(), [&](std::size_t i, std::size_t j) { return ref[i] == hyp[j] ? 0 : 1; },
      [](std::size_t) { return 1; }, [](std::size_t) { return 1; });
}

template <typename T>
Alignment align(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return align(std::span<const T>(ref), std::span<const T>(hyp));
}

// Distance only, two rows. Used on hot paths that need no edit script.
template <typename T>
std::size_t edit_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <typename T>
std::size_t edit_distance(const std::vector<T>& a, const std::vector<T>& b) {
  return edit_distance(std::span<const T>(a), std::span<const T>(b));
}

}  // namespace nbestgec
