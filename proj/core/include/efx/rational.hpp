#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace efx {

// All valuations and thresholds are exact rationals; nothing in the decision
// path ever touches floating point. cpp_rational keeps itself canonical
// (reduced, positive denominator).
using Value = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", optionally signed integers ("17", "-3"), and finite decimals
// ("0.05", "-2.5"), all converted exactly. Throws InputError on anything else.
Value parseValue(const std::string& text);

// Canonical form: "p" when the denominator is 1, else "p/q".
std::string formatValue(const Value& v);

// Exact ceiling of a rational.
BigInt ceilRational(const Value& v);

} // namespace efx
