#pragma once

// Words in the free group F(a, b). Letters print as a, b and their inverses
// as A, B.

#include "linklab/linalg.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace linklab {

struct Letter {
  char generator = 'a';  // 'a' or 'b'
  int exponent = 1;      // +1 or -1

  bool operator==(const Letter&) const = default;

  Letter inverse() const { return {generator, -exponent}; }
  char symbol() const { return exponent > 0 ? generator : static_cast<char>(generator - 'a' + 'A'); }
};

struct Word {
  std::vector<Letter> letters;

  bool operator==(const Word&) const = default;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  int exponent_sum(char generator) const {
    int sum = 0;
    for (const auto& l : letters) {
      if (l.generator == generator) sum += l.exponent;
    }
    return sum;
  }

  std::string str() const {
    std::string s;
    s.reserve(letters.size());
    for (const auto& l : letters) s.push_back(l.symbol());
    return s;
  }
};

inline Word parse_word(const std::string& text) {
  Word w;
  for (char c : text) {
    switch (c) {
      case 'a': w.letters.push_back({'a', 1}); break;
      case 'A': w.letters.push_back({'a', -1}); break;
      case 'b': w.letters.push_back({'b', 1}); break;
      case 'B': w.letters.push_back({'b', -1}); break;
      default: throw Error(ErrorKind::parse, std::string("parse_word: unexpected character '") + c + "'");
    }
  }
  return w;
}

/// Free reduction: cancel adjacent inverse pairs until none remain.
inline Word reduce_word(const Word& w) {
  Word out;
  for (const auto& l : w.letters) {
    if (!out.letters.empty() && out.letters.back() == l.inverse()) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

inline Word inverse(const Word& w) {
  Word out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back(it->inverse());
  return out;
}

inline Word cyclic_shift(const Word& w, std::size_t k) {
  Word out = w;
  if (!out.letters.empty()) {
    std::rotate(out.letters.begin(), out.letters.begin() + static_cast<long>(k % out.letters.size()),
                out.letters.end());
  }
  return out;
}

inline Word swap_generators(const Word& w) {
  Word out = w;
  for (auto& l : out.letters) l.generator = l.generator == 'a' ? 'b' : 'a';
  return out;
}

/// Cyclic reduction: strip inverse pairs across the ends of a reduced word.
inline Word cyclically_reduce(const Word& w) {
  Word out = reduce_word(w);
  while (out.letters.size() >= 2 && out.letters.front() == out.letters.back().inverse()) {
    out.letters.erase(out.letters.begin());
    out.letters.pop_back();
  }
  return out;
}

/// True iff u and v are equal up to a cyclic rotation.
inline bool cyclically_equal(const Word& u, const Word& v) {
  if (u.size() != v.size()) return false;
  if (u.empty()) return true;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (cyclic_shift(u, k) == v) return true;
  }
  return false;
}

struct CommutatorCheck {
  bool is_commutator = false;
  Word normal_form;      // abAB when is_commutator
  std::string symmetry;  // e.g. "shift 1, inverse, swap"
};

/// Whether w equals abAB up to cyclic shift, inversion and swapping a and b.
inline CommutatorCheck commutator_class_check(const Word& w) {
  static const Word target = parse_word("abAB");
  CommutatorCheck out;
  out.normal_form = w;
  if (w.size() != target.size()) return out;
  for (int inv = 0; inv < 2; ++inv) {
    for (int swap = 0; swap < 2; ++swap) {
      Word v = inv ? inverse(w) : w;
      if (swap) v = swap_generators(v);
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (cyclic_shift(v, k) == target) {
          out.is_commutator = true;
          out.normal_form = target;
          out.symmetry = "shift " + std::to_string(k);
          if (inv) out.symmetry += ", inverse";
          if (swap) out.symmetry += ", swap";
          return out;
        }
      }
    }
  }
  return out;
}

}  // namespace linklab
