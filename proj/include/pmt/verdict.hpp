#pragma once

#include <algorithm>

namespace pmt {

// Three-valued verdict for a tuple (does it satisfy the relation?) and,
// equivalently, for a formula under strong-Kleene evaluation.
// The numeric order neg < unk < pos makes conjunction min and disjunction max.
enum class Verdict : unsigned char { neg = 0, unk = 1, pos = 2 };

constexpr Verdict verdict_not(Verdict v) {
  return static_cast<Verdict>(2 - static_cast<unsigned char>(v));
}

constexpr Verdict verdict_and(Verdict a, Verdict b) { return std::min(a, b); }

constexpr Verdict verdict_or(Verdict a, Verdict b) { return std::max(a, b); }

constexpr Verdict verdict_implies(Verdict a, Verdict b) {
  return verdict_or(verdict_not(a), b);
}

constexpr Verdict verdict_of(bool b) { return b ? Verdict::pos : Verdict::neg; }

constexpr char verdict_char(Verdict v) {
  switch (v) {
    case Verdict::pos: return '+';
    case Verdict::neg: return '-';
    default: return '0';
  }
}

}  // namespace pmt
