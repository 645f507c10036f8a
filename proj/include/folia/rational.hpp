#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace folia {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;

/// Canonicalized rational from integer numerator/denominator.
Rat rat(long num, long den = 1);

/// Parses "p", "-p" or "p/q". Throws InputError on malformed input or zero denominator.
Rat rat_from_string(const std::string& text);

std::string to_string(const Rat& q);
double to_double(const Rat& q);

/// Parses "a,b,c" with rational components.
RatVec rat_point_from_string(const std::string& text);
std::string to_string(const RatVec& v);

std::vector<double> to_doubles(const RatVec& v);

}  // namespace folia
