#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/intmat.hpp"
#include "torsionnorm/multipoly.hpp"
#include "torsionnorm/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace torsionnorm {

// How Z^m acts on the base field: generator i of Z^m sends the monomial
// x^v to x^{M_i v}. The matrices must commute and be invertible over Z.
struct ActionData
{
	int k = 0;                 // number of x variables
	std::vector<IntMat> mats;  // one k x k matrix per Z^m generator

	int rank() const { return (int)mats.size(); }

	void validate() const
	{
		for (auto const &m : mats)
		{
			if (m.rows != k || m.cols != k)
				throw ValidationError("action matrix is not k x k");
			if (!is_unimodular(m))
				throw ValidationError(
				    "action matrix has determinant != ±1");
		}
		for (size_t i = 0; i < mats.size(); ++i)
			for (size_t j = i + 1; j < mats.size(); ++j)
				if (!(mats[i] * mats[j] == mats[j] * mats[i]))
					throw ValidationError(
					    "action matrices do not commute");
	}

	bool is_trivial() const
	{
		for (auto const &m : mats)
			if (!(m == IntMat::identity(k)))
				return false;
		return true;
	}

	// product matrix for a lattice element alpha
	IntMat matrix_for(std::vector<Integer> const &alpha) const
	{
		IntMat r = IntMat::identity(k);
		for (size_t i = 0; i < mats.size(); ++i)
		{
			if (alpha[i] == 0)
				continue;
			r = r * pow(mats[i], (long)alpha[i]);
		}
		return r;
	}

	bool operator==(ActionData const &o) const
	{
		return k == o.k && mats == o.mats;
	}
};

// The base skew field K: the rationals (k = 0) or the rational function
// field Q(x1..xk), together with the Z^m-action by monomial substitutions.
struct BaseField
{
	int k = 0;
	ActionData action;

	static BaseField rationals(int m)
	{
		BaseField f;
		f.k = 0;
		f.action.k = 0;
		f.action.mats.assign(m, IntMat(0, 0));
		return f;
	}

	bool operator==(BaseField const &o) const
	{
		return k == o.k && action == o.action;
	}
};

// Element of K in canonical form: num/den coprime, den monic under lex,
// both honest polynomials (Laurent monomials are cleared into the pair).
struct Scalar
{
	MultiPoly num, den;

	Scalar() : num(0), den(0, 1) {}
	explicit Scalar(int k) : num(k), den(k, 1) {}
	Scalar(int k, Rational const &c) : num(k, c), den(k, 1) {}

	int nvars() const { return num.nvars; }
	bool is_zero() const { return num.is_zero(); }
	bool is_one() const
	{
		return den.is_constant() && den.constant_value() == 1 &&
		       num.is_constant() && num.constant_value() == 1;
	}
	bool is_rational() const
	{
		return num.is_constant() && den.is_constant();
	}
	Rational rational_value() const
	{
		return num.constant_value() / den.constant_value();
	}

	bool operator==(Scalar const &o) const
	{
		return num == o.num && den == o.den;
	}
};

// Shifts Laurent exponents out and reduces to the canonical form.
inline Scalar make_scalar(MultiPoly num, MultiPoly den)
{
	if (den.is_zero())
		throw DivisionByZero("zero denominator in K");
	int k = num.nvars;
	if (num.is_zero())
		return Scalar(k);
	for (int v = 0; v < k; ++v)
	{
		int s = std::min({0, num.min_exponent(v), den.min_exponent(v)});
		if (s < 0)
		{
			num = shift_var(num, v, -s);
			den = shift_var(den, v, -s);
		}
	}
	bool monomials = num.terms.size() == 1 || den.terms.size() == 1;
	if (!monomials && !den.is_constant() && !num.is_constant())
	{
		MultiPoly g = poly_gcd(num, den);
		if (!(g.is_constant()))
		{
			num = divexact(num, g);
			den = divexact(den, g);
		}
	}
	// strip the common monomial factor (the whole gcd when either side
	// is a single term)
	for (int v = 0; v < k; ++v)
	{
		int s = std::min(num.min_exponent(v), den.min_exponent(v));
		if (s > 0)
		{
			num = shift_var(num, v, -s);
			den = shift_var(den, v, -s);
		}
	}
	// canonical: den integer-primitive with positive leading coefficient
	// (keeps the integer growth of Euclidean chains in one place)
	MultiPoly pden = primitive_integer(den);
	if (!(pden == den))
	{
		num = num * (pden.lead().second / den.lead().second);
		den = std::move(pden);
	}
	Scalar r(k);
	r.num = std::move(num);
	r.den = std::move(den);
	return r;
}

// normalization only: caller guarantees num, den already coprime
inline Scalar make_scalar_coprime(MultiPoly num, MultiPoly den)
{
	int k = num.nvars;
	if (num.is_zero())
		return Scalar(k);
	for (int v = 0; v < k; ++v)
	{
		int s = std::min({0, num.min_exponent(v), den.min_exponent(v)});
		if (s < 0)
		{
			num = shift_var(num, v, -s);
			den = shift_var(den, v, -s);
		}
	}
	MultiPoly pden = primitive_integer(den);
	if (!(pden == den))
	{
		num = num * (pden.lead().second / den.lead().second);
		den = std::move(pden);
	}
	Scalar r(k);
	r.num = std::move(num);
	r.den = std::move(den);
	return r;
}

inline Scalar scalar_from_poly(MultiPoly p)
{
	int k = p.nvars;
	return make_scalar(std::move(p), MultiPoly(k, 1));
}

inline Scalar scalar_monomial(int k, Mono const &e, Rational const &c)
{
	MultiPoly num(k);
	MultiPoly den(k, 1);
	// split signs so both sides stay honest polynomials
	Mono en(k, 0), ed(k, 0);
	for (int i = 0; i < k; ++i)
		(e[i] >= 0 ? en[i] : ed[i]) = abs(e[i]);
	add_term(num, en, c);
	return make_scalar(std::move(num),
	                   MultiPoly::monomial(k, ed, 1));
}

inline Scalar operator+(Scalar const &a, Scalar const &b)
{
	if (a.is_zero())
		return b;
	if (b.is_zero())
		return a;
	bool da1 = a.den.is_constant(), db1 = b.den.is_constant();
	if (da1 && db1) // denominators are rational constants
	{
		Rational ca = a.den.constant_value(), cb = b.den.constant_value();
		return make_scalar(a.num * cb + b.num * ca,
		                   MultiPoly(a.num.nvars, ca * cb));
	}
	if (a.den == b.den)
		return make_scalar(a.num + b.num, a.den);
	return make_scalar(a.num * b.den + b.num * a.den, a.den * b.den);
}

inline Scalar operator-(Scalar const &a)
{
	Scalar r = a;
	r.num = -r.num;
	return r;
}
inline Scalar operator-(Scalar const &a, Scalar const &b)
{
	return a + (-b);
}

inline Scalar operator*(Scalar const &a, Scalar const &b)
{
	if (a.is_zero() || b.is_zero())
		return Scalar(a.nvars());
	if (a.den.is_constant() && b.den.is_constant())
		return make_scalar(a.num * b.num, a.den * b.den);
	// cross-reduce: the product of the reduced parts is already coprime
	MultiPoly g1 = poly_gcd(a.num, b.den), g2 = poly_gcd(b.num, a.den);
	MultiPoly n1 = g1.is_constant() ? a.num : divexact(a.num, g1);
	MultiPoly d2 = g1.is_constant() ? b.den : divexact(b.den, g1);
	MultiPoly n2 = g2.is_constant() ? b.num : divexact(b.num, g2);
	MultiPoly d1 = g2.is_constant() ? a.den : divexact(a.den, g2);
	return make_scalar_coprime(n1 * n2, d1 * d2);
}

inline Scalar inv(Scalar const &a)
{
	if (a.is_zero())
		throw DivisionByZero("inverse of 0 in K");
	return make_scalar(a.den, a.num);
}

inline Scalar operator/(Scalar const &a, Scalar const &b)
{
	return a * inv(b);
}

inline Scalar &operator+=(Scalar &a, Scalar const &b) { return a = a + b; }
inline Scalar &operator-=(Scalar &a, Scalar const &b) { return a = a - b; }
inline Scalar &operator*=(Scalar &a, Scalar const &b) { return a = a * b; }

inline Scalar pow(Scalar const &a, long e)
{
	Scalar base = e >= 0 ? a : inv(a);
	long n = e >= 0 ? e : -e;
	Scalar r(a.nvars(), 1);
	while (n > 0)
	{
		if (n & 1)
			r *= base;
		base = base * base;
		n >>= 1;
	}
	return r;
}

// gamma_alpha: the field automorphism x^v -> x^{(prod M_i^{alpha_i}) v}.
inline MultiPoly substitute_monomials(MultiPoly const &p, IntMat const &mat)
{
	MultiPoly r(p.nvars);
	std::vector<Integer> v(p.nvars), w;
	for (auto const &[e, c] : p.terms)
	{
		for (int i = 0; i < p.nvars; ++i)
			v[i] = e[i];
		w = mat * v;
		Mono f(p.nvars);
		for (int i = 0; i < p.nvars; ++i)
			f[i] = (int32_t)(long)w[i];
		add_term(r, f, c);
	}
	return r;
}

inline MultiPoly flip_exponents(MultiPoly const &p)
{
	MultiPoly r(p.nvars);
	for (auto const &[e, c] : p.terms)
	{
		Mono f(p.nvars);
		for (int i = 0; i < p.nvars; ++i)
			f[i] = -e[i];
		r.terms.emplace(f, c);
	}
	return r;
}

inline Scalar apply_action(ActionData const &action,
                           std::vector<Integer> const &alpha, Scalar const &a)
{
	if (action.k == 0 || a.is_zero() || a.is_rational())
		return a;
	bool id = true;
	for (auto const &x : alpha)
		if (x != 0)
		{
			id = false;
			break;
		}
	if (id || action.is_trivial())
		return a;
	if (action.k == 1)
	{
		// 1x1 actions are x -> x^{±1}: track the sign by parity
		bool flip = false;
		for (size_t i = 0; i < alpha.size(); ++i)
			if (action.mats[i](0, 0) == -1 && alpha[i] % 2 != 0)
				flip = !flip;
		if (!flip)
			return a;
		return make_scalar(flip_exponents(a.num),
		                   flip_exponents(a.den));
	}
	IntMat m = action.matrix_for(alpha);
	return make_scalar(substitute_monomials(a.num, m),
	                   substitute_monomials(a.den, m));
}

inline std::string to_string(Scalar const &a, std::string const &stem = "x")
{
	if (a.den.is_constant() && a.den.constant_value() == 1)
		return to_string(a.num, stem);
	std::string n = to_string(a.num, stem);
	std::string d = to_string(a.den, stem);
	if (a.num.terms.size() > 1)
		n = "(" + n + ")";
	if (a.den.terms.size() > 1)
		d = "(" + d + ")";
	return n + "/" + d;
}

} // namespace torsionnorm
