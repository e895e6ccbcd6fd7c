#include "number.hpp"

#include <cctype>
#include <cstdint>
#include <ostream>

#include "errors.hpp"

namespace fogplan {

std::ostream& operator<<(std::ostream& os, const Num& value) {
  os << value.numerator();
  if (value.denominator() != 1) os << '/' << value.denominator();
  return os;
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownFunctor: return "unknown-functor";
    case ErrorKind::ArityMismatch: return "arity-mismatch";
    case ErrorKind::DuplicateKey: return "duplicate-key";
    case ErrorKind::DanglingReference: return "dangling-reference";
    case ErrorKind::InvalidValue: return "invalid-value";
    case ErrorKind::EmptyScript: return "empty-script";
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Reference: return "reference";
    case ErrorKind::UnknownId: return "unknown-id";
    case ErrorKind::BoundExceeded: return "bound-exceeded";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

Num parse_decimal(const std::string& text) {
  auto fail = [&](const char* why) -> Num {
    throw Error(ErrorKind::InvalidValue,
                std::string("bad decimal literal '") + text + "': " + why);
  };

  std::size_t dot = text.find('.');
  std::string integral = dot == std::string::npos ? text : text.substr(0, dot);
  std::string fraction = dot == std::string::npos ? "" : text.substr(dot + 1);

  if (integral.empty()) return fail("missing integral digits");
  if (dot != std::string::npos && fraction.empty())
    return fail("missing fractional digits");
  for (char c : integral + fraction)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return fail("not an unsigned decimal");
  // 15 significant digits keep numerator and scaled denominators well inside
  // the long long range even after ledger sums.
  if (integral.size() + fraction.size() > 15) return fail("too many digits");

  long long numerator = 0;
  for (char c : integral + fraction) numerator = numerator * 10 + (c - '0');
  long long denominator = 1;
  for (std::size_t i = 0; i < fraction.size(); ++i) denominator *= 10;
  return Num(numerator, denominator);
}

std::string format_number(const Num& value) {
  long long num = value.numerator();
  long long den = value.denominator();
  std::string out;
  if (num < 0) {
    out += '-';
    num = -num;
  }
  out += std::to_string(num / den);
  long long rem = num % den;
  if (rem != 0) {
    out += '.';
    // Digit-by-digit long division; only denominators of the form 2^a * 5^b
    // terminate, which covers everything parse_decimal can produce.
    for (int digits = 0; rem != 0; ++digits) {
      if (digits >= 32)
        throw Error(ErrorKind::Internal,
                    "value has no terminating decimal expansion");
      rem *= 10;
      out += static_cast<char>('0' + rem / den);
      rem %= den;
    }
  }
  return out;
}

const Num& Capacity::value() const {
  if (infinite_)
    throw Error(ErrorKind::Internal, "infinite capacity has no finite value");
  return finite_;
}

std::string format_capacity(const Capacity& value) {
  return value.is_infinite() ? "inf" : format_number(value.value());
}

}  // namespace fogplan
