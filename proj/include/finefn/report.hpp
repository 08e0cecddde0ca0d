#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace finefn {

enum class Outcome { pass, fail, skipped };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::skipped: return "skipped";
  }
  return "?";
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
  return out;
}

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct VerificationReport {
  std::string id;
  std::string mode;  // symbolic, sampled or series
  ParamList params;
  Outcome outcome = Outcome::skipped;
  /// Canonical difference on failure, the reason on a skip, empty on pass.
  std::string witness;
  long millis = 0;
  /// Rows that only document a printed form do not count towards the exit code.
  bool authoritative = true;
  /// Evaluation error (pole, constraint, exhausted sampler) rather than a verdict.
  bool error = false;

  std::string params_str() const {
    std::string s;
    for (const auto& [k, v] : params) {
      if (!s.empty()) s += ',';
      s += k + '=' + v;
    }
    return s.empty() ? "-" : s;
  }

  std::string witness_digest() const {
    return outcome == Outcome::pass || witness.empty() ? "-" : hex64(fnv1a64(witness));
  }

  /// id=<ID> mode=<m> params=<k=v,...> outcome=<o> witness=<hex|-> millis=<int>
  std::string record() const {
    std::ostringstream os;
    os << "id=" << id << " mode=" << mode << " params=" << params_str() << " outcome=" << outcome_name(outcome)
       << " witness=" << witness_digest() << " millis=" << millis;
    return os.str();
  }
};

/// Sort key used everywhere reports are gathered.
inline bool report_less(const VerificationReport& x, const VerificationReport& y) {
  if (x.id != y.id) return x.id < y.id;
  if (x.mode != y.mode) return x.mode < y.mode;
  // Numeric-aware comparison of parameter values so N=10 sorts after N=9.
  std::size_t n = std::min(x.params.size(), y.params.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [kx, vx] = x.params[i];
    const auto& [ky, vy] = y.params[i];
    if (kx != ky) return kx < ky;
    if (vx.size() != vy.size() && !vx.empty() && !vy.empty() && std::isdigit(static_cast<unsigned char>(vx[0])) &&
        std::isdigit(static_cast<unsigned char>(vy[0])))
      return vx.size() < vy.size();
    if (vx != vy) return vx < vy;
  }
  return x.params.size() < y.params.size();
}

}  // namespace finefn
