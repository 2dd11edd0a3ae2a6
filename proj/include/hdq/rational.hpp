#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hdq {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

/// Parses an integer or a fraction `p/q` (optionally signed). Throws
/// std::invalid_argument on malformed input or a zero denominator.
inline rational parse_rational(std::string_view text)
{
  auto parse_int = [](std::string_view s) -> big_int {
    if (s.empty())
      throw std::invalid_argument("empty number");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size())
      throw std::invalid_argument("sign without digits");
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9')
        throw std::invalid_argument("not a number: " + std::string(s));
    big_int v(std::string(s.substr(i)));
    return s[0] == '-' ? big_int(-v) : v;
  };

  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return rational(parse_int(text));
  big_int num = parse_int(text.substr(0, slash));
  big_int den = parse_int(text.substr(slash + 1));
  if (den == 0)
    throw std::invalid_argument("zero denominator");
  return rational(num, den);
}

inline std::string to_string(const rational& r)
{
  return r.str();
}

inline double to_double(const rational& r)
{
  return r.convert_to<double>();
}

inline rational power(const rational& base, std::size_t exponent)
{
  rational result = 1;
  rational b = base;
  while (exponent > 0) {
    if (exponent & 1U)
      result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

} // namespace hdq
