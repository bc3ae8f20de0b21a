#pragma once

#include "torsionnorm/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <sstream>
#include <string>

namespace torsionnorm {

// Exact arithmetic scalars. All user-facing numbers are rationals; the
// integer type backs lattice computations (Smith forms, determinants).
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Integer numerator(Rational const &q)
{
	return boost::multiprecision::numerator(q);
}

inline Integer denominator(Rational const &q)
{
	return boost::multiprecision::denominator(q);
}

// Largest integer n with n <= q.
inline Integer floor_int(Rational const &q)
{
	Integer n = numerator(q), d = denominator(q); // d > 0
	Integer t = n / d;
	if (n < 0 && t * d != n)
		t -= 1;
	return t;
}

// Nearest integer, halves rounded down: round_half_down(1/2) = 0,
// round_half_down(-1/2) = -1. Used to center dual polytopes.
inline Integer round_half_down(Rational const &q)
{
	// smallest integer n with q - 1/2 <= n, i.e. ceil(q - 1/2)
	Rational s = q - Rational(1, 2);
	Integer f = floor_int(s);
	return (Rational(f) == s) ? f : f + 1;
}

inline bool is_integer(Rational const &q) { return denominator(q) == 1; }

inline std::string to_string(Rational const &q)
{
	std::ostringstream os;
	os << q;
	return os.str();
}

// Accepts "p", "-p/q" and similar; used by the CLI for exact inputs.
inline Rational parse_rational(std::string const &s)
{
	try
	{
		return Rational(s);
	}
	catch (std::exception const &)
	{
		throw ParseError("not a rational number: '" + s + "'");
	}
}

} // namespace torsionnorm
