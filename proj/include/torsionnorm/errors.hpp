#pragma once

#include <stdexcept>
#include <string>

namespace torsionnorm {

struct Error : std::runtime_error
{
	Error(std::string kind, std::string const &msg)
	    : std::runtime_error(kind + ": " + msg), kind(std::move(kind))
	{}
	std::string kind;
};

#define TORSIONNORM_ERROR(Name)                                               \
	struct Name : Error                                                        \
	{                                                                          \
		explicit Name(std::string const &msg) : Error(#Name, msg) {}          \
	}

TORSIONNORM_ERROR(DivisionByZero);
TORSIONNORM_ERROR(RingMismatch);
TORSIONNORM_ERROR(ZeroMap);
TORSIONNORM_ERROR(ZeroInput);
TORSIONNORM_ERROR(ZeroPolynomial);
TORSIONNORM_ERROR(ZeroDeterminant);
TORSIONNORM_ERROR(ZeroTorsion);
TORSIONNORM_ERROR(NotSquare);
TORSIONNORM_ERROR(NotASummand);
TORSIONNORM_ERROR(UnsupportedDimension);
TORSIONNORM_ERROR(InvalidRep);
TORSIONNORM_ERROR(NoPivotGenerator);
TORSIONNORM_ERROR(NotDeficiencyOne);
TORSIONNORM_ERROR(ParseError);
TORSIONNORM_ERROR(ValidationError);
TORSIONNORM_ERROR(ComputeError);

#undef TORSIONNORM_ERROR

} // namespace torsionnorm
