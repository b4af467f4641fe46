#pragma once

#include <gmpxx.h>

#include <charconv>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "cellsheaf/errors.hpp"

namespace cellsheaf {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Runtime description of a coefficient field.
class FieldSpec {
 public:
  enum class Kind { rationals, prime_field };

  static FieldSpec rationals() { return FieldSpec(Kind::rationals, 0); }

  static FieldSpec prime(std::uint64_t p) {
    if (!is_prime(p)) throw InvalidField("characteristic " + std::to_string(p) + " is not prime");
    if (p >= (std::uint64_t{1} << 32)) throw InvalidField("characteristic must be below 2^32");
    return FieldSpec(Kind::prime_field, p);
  }

  /// Accepts "rational", "rationals", "Q" or "fp:<p>".
  static FieldSpec parse(std::string_view text) {
    if (text == "rational" || text == "rationals" || text == "Q") return rationals();
    if (text.substr(0, 3) == "fp:") {
      std::uint64_t p = 0;
      auto digits = text.substr(3);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw InvalidField("malformed field '" + std::string(text) + "'");
      }
      return prime(p);
    }
    throw InvalidField("unknown field '" + std::string(text) + "'");
  }

  Kind kind() const noexcept { return kind_; }
  /// Zero for the rationals.
  std::uint64_t characteristic() const noexcept { return p_; }

  std::string to_string() const {
    return kind_ == Kind::rationals ? std::string("rational") : "fp:" + std::to_string(p_);
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint64_t p_;
};

/// Arithmetic interface every coefficient field provides.
template <class F>
concept Field = std::equality_comparable<F> && requires(const F f, const typename F::value_type& a,
                                                         std::string_view text, long n) {
  { f.zero() } -> std::same_as<typename F::value_type>;
  { f.one() } -> std::same_as<typename F::value_type>;
  { f.from_int(n) } -> std::same_as<typename F::value_type>;
  { f.normalize(a) } -> std::same_as<typename F::value_type>;
  { f.add(a, a) } -> std::same_as<typename F::value_type>;
  { f.sub(a, a) } -> std::same_as<typename F::value_type>;
  { f.mul(a, a) } -> std::same_as<typename F::value_type>;
  { f.neg(a) } -> std::same_as<typename F::value_type>;
  { f.inv(a) } -> std::same_as<typename F::value_type>;
  { f.is_zero(a) } -> std::same_as<bool>;
  { f.equal(a, a) } -> std::same_as<bool>;
  { f.to_string(a) } -> std::same_as<std::string>;
  { f.parse(text) } -> std::same_as<typename F::value_type>;
  { f.spec() } -> std::same_as<FieldSpec>;
};

/// The field of rational numbers, exact via GMP; values stay canonical.
struct Rationals {
  using value_type = mpq_class;

  value_type zero() const { return value_type(0); }
  value_type one() const { return value_type(1); }
  value_type from_int(long n) const { return value_type(n); }
  value_type normalize(const value_type& a) const {
    if (sgn(a.get_den()) == 0) throw InvalidField("zero denominator");
    value_type v(a);
    v.canonicalize();
    return v;
  }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw NotInvertible("division by zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  value_type parse(std::string_view text) const {
    std::string s(text);
    if (s.empty()) throw InvalidField("empty rational literal");
    value_type v;
    if (v.set_str(s, 10) != 0) throw InvalidField("malformed rational '" + s + "'");
    if (sgn(v.get_den()) == 0) throw InvalidField("zero denominator in '" + s + "'");
    v.canonicalize();
    return v;
  }

  FieldSpec spec() const { return FieldSpec::rationals(); }

  friend bool operator==(const Rationals&, const Rationals&) = default;
};

/// Integers modulo a prime p < 2^32; values are canonical residues in [0, p).
class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(FieldSpec::prime(p).characteristic()) {}

  std::uint64_t characteristic() const noexcept { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p_; }
  value_type from_int(long n) const {
    long r = n % static_cast<long>(p_);
    return static_cast<value_type>(r < 0 ? r + static_cast<long>(p_) : r);
  }
  value_type normalize(value_type a) const { return a % p_; }
  value_type add(value_type a, value_type b) const { return (a + b) % p_; }
  value_type sub(value_type a, value_type b) const { return (a + p_ - b) % p_; }
  value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type inv(value_type a) const {
    if (a == 0) throw NotInvertible("division by zero");
    // Fermat: a^(p-2).
    value_type result = 1, base = a, e = p_ - 2;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }
  std::string to_string(value_type a) const { return std::to_string(a); }

  /// Accepts any integer or "a/b" literal and reduces it modulo p.
  value_type parse(std::string_view text) const {
    Rationals q;
    mpq_class v = q.parse(text);
    mpz_class p(static_cast<unsigned long>(p_));
    mpz_class num = v.get_num() % p;
    if (num < 0) num += p;
    mpz_class den = v.get_den() % p;
    if (den == 0) throw InvalidField("denominator of '" + std::string(text) + "' vanishes mod p");
    return mul(static_cast<value_type>(num.get_ui()), inv(static_cast<value_type>(den.get_ui())));
  }

  FieldSpec spec() const { return FieldSpec::prime(p_); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

static_assert(Field<Rationals>);
static_assert(Field<PrimeField>);

/// Calls fn with the concrete field object described by spec.
template <class Fn>
decltype(auto) visit_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.kind() == FieldSpec::Kind::rationals) return fn(Rationals{});
  return fn(PrimeField(spec.characteristic()));
}

}  // namespace cellsheaf
