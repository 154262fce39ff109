#pragma once

#include <string>

namespace spanlab {

enum class Verdict { verified, refuted, inconclusive, error };

inline const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::verified:
    return "verified";
  case Verdict::refuted:
    return "refuted";
  case Verdict::inconclusive:
    return "inconclusive";
  case Verdict::error:
    return "error";
  }
  return "error";
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::verified : Verdict::refuted; }

/// Exit status used by the command-line tool: 0 verified, 1 refuted,
/// 2 inconclusive, 3 error.
inline int exit_code(Verdict v) { return static_cast<int>(v); }

/// The worse of two verdicts in the order verified < refuted < inconclusive < error.
inline Verdict worst(Verdict a, Verdict b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

} // namespace spanlab
