#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace finefn {

/// The four variables, in canonical order q > a > b > t.
enum class Var : std::uint8_t { q = 0, a = 1, b = 2, t = 3 };

inline constexpr std::size_t kVarCount = 4;
inline constexpr std::array<Var, kVarCount> kAllVars{Var::q, Var::a, Var::b, Var::t};

constexpr std::size_t index_of(Var v) { return static_cast<std::size_t>(v); }

constexpr char var_name(Var v) {
  constexpr char names[] = {'q', 'a', 'b', 't'};
  return names[index_of(v)];
}

inline std::optional<Var> var_from_name(std::string_view s) {
  if (s.size() != 1) return std::nullopt;
  switch (s[0]) {
    case 'q': return Var::q;
    case 'a': return Var::a;
    case 'b': return Var::b;
    case 't': return Var::t;
    default: return std::nullopt;
  }
}

/// Power product q^i a^j b^k t^l.
///
/// Packed into one 64-bit word as [total:16][q:12][a:12][b:12][t:12], so the
/// integer order of the packed word is exactly graded lex with q > a > b > t.
class Monomial {
 public:
  static constexpr unsigned kBits = 12;
  static constexpr unsigned kMaxExponent = (1u << kBits) - 1;

  constexpr Monomial() = default;

  explicit Monomial(const std::array<unsigned, kVarCount>& exps) {
    unsigned total = 0;
    for (std::size_t i = 0; i < kVarCount; ++i) {
      check(exps[i]);
      bits_ |= static_cast<std::uint64_t>(exps[i]) << shift(i);
      total += exps[i];
    }
    bits_ |= static_cast<std::uint64_t>(total) << kTotalShift;
  }

  static Monomial of(Var v, unsigned e = 1) {
    std::array<unsigned, kVarCount> exps{};
    exps[index_of(v)] = e;
    return Monomial(exps);
  }

  static constexpr Monomial from_packed(std::uint64_t bits) {
    Monomial m;
    m.bits_ = bits;
    return m;
  }

  constexpr std::uint64_t packed() const { return bits_; }

  constexpr unsigned exponent(Var v) const { return exponent(index_of(v)); }
  constexpr unsigned exponent(std::size_t i) const {
    return static_cast<unsigned>((bits_ >> shift(i)) & kMaxExponent);
  }
  constexpr unsigned degree() const { return static_cast<unsigned>(bits_ >> kTotalShift); }
  constexpr bool is_one() const { return bits_ == 0; }

  std::array<unsigned, kVarCount> exponents() const {
    std::array<unsigned, kVarCount> e{};
    for (std::size_t i = 0; i < kVarCount; ++i) e[i] = exponent(i);
    return e;
  }

  /// Same monomial with the exponent of `v` replaced.
  Monomial with(Var v, unsigned e) const {
    auto exps = exponents();
    exps[index_of(v)] = e;
    return Monomial(exps);
  }

  constexpr bool divides(Monomial m) const {
    for (std::size_t i = 0; i < kVarCount; ++i)
      if (exponent(i) > m.exponent(i)) return false;
    return true;
  }

  friend Monomial operator*(Monomial x, Monomial y) {
    for (std::size_t i = 0; i < kVarCount; ++i)
      if (x.exponent(i) + y.exponent(i) > kMaxExponent)
        throw std::overflow_error("monomial exponent exceeds " + std::to_string(kMaxExponent));
    return from_packed(x.bits_ + y.bits_);
  }

  /// Requires y.divides(x).
  friend constexpr Monomial operator/(Monomial x, Monomial y) {
    return from_packed(x.bits_ - y.bits_);
  }

  static Monomial gcd(Monomial x, Monomial y) {
    std::array<unsigned, kVarCount> e{};
    for (std::size_t i = 0; i < kVarCount; ++i) e[i] = std::min(x.exponent(i), y.exponent(i));
    return Monomial(e);
  }

  friend constexpr bool operator==(Monomial, Monomial) = default;
  friend constexpr std::strong_ordering operator<=>(Monomial x, Monomial y) {
    return x.bits_ <=> y.bits_;
  }

  /// "q^2*a*t", or "1" for the unit monomial.
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < kVarCount; ++i) {
      unsigned e = exponent(i);
      if (e == 0) continue;
      if (!out.empty()) out += '*';
      out += var_name(kAllVars[i]);
      if (e > 1) out += '^' + std::to_string(e);
    }
    return out.empty() ? "1" : out;
  }

 private:
  static constexpr unsigned kTotalShift = 48;
  static constexpr unsigned shift(std::size_t i) {
    return static_cast<unsigned>(kBits * (kVarCount - 1 - i));
  }
  static void check(unsigned e) {
    if (e > kMaxExponent)
      throw std::overflow_error("monomial exponent exceeds " + std::to_string(kMaxExponent));
  }

  std::uint64_t bits_ = 0;
};

}  // namespace finefn
