#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <iosfwd>
#include <string>

namespace fogplan {

// Exact rational quantity (hardware units, Mbps, milliseconds). All QoS
// comparisons in the engine are exact; no floating point is involved.
//
// Wraps boost::rational instead of aliasing it: the wrapper owns the whole
// comparison surface, so mixed comparisons such as `x == 0` convert the
// integer to Num first. Boost 1.74's heterogeneous rational/integer == and
// != self-recurse under C++20 rewritten-candidate resolution, so they must
// never be reachable.
class Num {
public:
  Num() = default;
  Num(long long n) : v_(n) {}
  // Throws boost::bad_rational when d == 0.
  Num(long long n, long long d) : v_(n, d) {}

  long long numerator() const { return v_.numerator(); }
  long long denominator() const { return v_.denominator(); }

  Num& operator+=(const Num& o) {
    v_ += o.v_;
    return *this;
  }
  Num& operator-=(const Num& o) {
    v_ -= o.v_;
    return *this;
  }
  Num& operator*=(const Num& o) {
    v_ *= o.v_;
    return *this;
  }
  Num& operator/=(const Num& o) {
    v_ /= o.v_;
    return *this;
  }
  Num operator-() const {
    Num out;
    out.v_ = -v_;
    return out;
  }

  friend Num operator+(Num a, const Num& b) { return a += b; }
  friend Num operator-(Num a, const Num& b) { return a -= b; }
  friend Num operator*(Num a, const Num& b) { return a *= b; }
  friend Num operator/(Num a, const Num& b) { return a /= b; }

  bool operator==(const Num& o) const { return v_ == o.v_; }
  std::strong_ordering operator<=>(const Num& o) const {
    if (v_ < o.v_) return std::strong_ordering::less;
    if (o.v_ < v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // Exact "n" or "n/d" form, for diagnostics; format_number renders decimals.
  friend std::ostream& operator<<(std::ostream& os, const Num& value);

private:
  boost::rational<long long> v_;
};

// Parses an unsigned decimal literal such as "16" or "0.5".
// Throws Error(InvalidValue) on malformed or oversized input.
Num parse_decimal(const std::string& text);

// Renders a Num as the shortest exact decimal ("16", "0.5"). Throws
// Error(Internal) if the value has no terminating decimal expansion; every
// value parsed from a decimal literal round-trips.
std::string format_number(const Num& value);

// Hardware capability of a node: a finite amount or unbounded capacity.
// Infinite absorbs addition and subtraction and dominates every comparison.
class Capacity {
public:
  Capacity() : finite_(0) {}
  Capacity(Num value) : finite_(value) {}
  static Capacity infinite() {
    Capacity c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const noexcept { return infinite_; }

  // Finite value; throws Error(Internal) when infinite.
  const Num& value() const;

  bool at_least(const Num& x) const { return infinite_ || finite_ >= x; }
  bool greater_than(const Num& x) const { return infinite_ || finite_ > x; }

  Capacity plus(const Num& x) const {
    return infinite_ ? *this : Capacity(finite_ + x);
  }
  Capacity minus(const Num& x) const {
    return infinite_ ? *this : Capacity(finite_ - x);
  }

  bool operator==(const Capacity& other) const {
    if (infinite_ || other.infinite_) return infinite_ == other.infinite_;
    return finite_ == other.finite_;
  }

private:
  bool infinite_ = false;
  Num finite_;
};

// "inf" or the exact decimal rendering.
std::string format_capacity(const Capacity& value);

}  // namespace fogplan
