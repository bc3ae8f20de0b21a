#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/rational.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <string>
#include <vector>

namespace torsionnorm {

// Exponent vector of a monomial x1^e1 ... xk^ek. Compared lexicographically
// (std::vector's operator<), which is the monomial order used throughout.
using Mono = std::vector<int32_t>;

// Sparse multivariate polynomial over Q. Exponents are kept non-negative by
// the callers that need GCDs; plain ring arithmetic tolerates Laurent
// exponents (used transiently by monomial substitutions).
struct MultiPoly
{
	int nvars = 0;
	std::map<Mono, Rational> terms; // no zero coefficients stored

	MultiPoly() = default;
	explicit MultiPoly(int k) : nvars(k) {}
	MultiPoly(int k, Rational const &c) : nvars(k)
	{
		if (c != 0)
			terms.emplace(Mono(k, 0), c);
	}

	static MultiPoly monomial(int k, Mono const &e, Rational const &c)
	{
		MultiPoly p(k);
		if (c != 0)
			p.terms.emplace(e, c);
		return p;
	}
	static MultiPoly variable(int k, int i)
	{
		Mono e(k, 0);
		e[i] = 1;
		return monomial(k, e, 1);
	}

	bool is_zero() const { return terms.empty(); }
	bool is_constant() const
	{
		return terms.empty() ||
		       (terms.size() == 1 &&
		        terms.begin()->first == Mono(nvars, 0));
	}
	Rational constant_value() const
	{
		if (terms.empty())
			return 0;
		assert(is_constant());
		return terms.begin()->second;
	}

	// lex-leading term
	std::pair<Mono, Rational> lead() const
	{
		assert(!terms.empty());
		return *terms.rbegin();
	}

	int degree_in(int v) const // -1 for the zero polynomial
	{
		int d = -1;
		for (auto const &[e, c] : terms)
			d = std::max(d, (int)e[v]);
		return d;
	}
	int min_exponent(int v) const
	{
		int d = 0;
		bool first = true;
		for (auto const &[e, c] : terms)
		{
			d = first ? e[v] : std::min(d, (int)e[v]);
			first = false;
		}
		return d;
	}

	bool operator==(MultiPoly const &o) const
	{
		return nvars == o.nvars && terms == o.terms;
	}
};

inline void add_term(MultiPoly &p, Mono const &e, Rational const &c)
{
	if (c == 0)
		return;
	auto it = p.terms.find(e);
	if (it == p.terms.end())
		p.terms.emplace(e, c);
	else
	{
		it->second += c;
		if (it->second == 0)
			p.terms.erase(it);
	}
}

inline MultiPoly operator+(MultiPoly const &a, MultiPoly const &b)
{
	MultiPoly r = a;
	for (auto const &[e, c] : b.terms)
		add_term(r, e, c);
	return r;
}

inline MultiPoly operator-(MultiPoly const &a)
{
	MultiPoly r = a;
	for (auto &[e, c] : r.terms)
		c = -c;
	return r;
}

inline MultiPoly operator-(MultiPoly const &a, MultiPoly const &b)
{
	MultiPoly r = a;
	for (auto const &[e, c] : b.terms)
		add_term(r, e, -c);
	return r;
}

inline MultiPoly operator*(MultiPoly const &a, MultiPoly const &b)
{
	MultiPoly r(a.nvars);
	if (a.terms.empty() || b.terms.empty())
		return r;
	Mono e(a.nvars);
	for (auto const &[ea, ca] : a.terms)
		for (auto const &[eb, cb] : b.terms)
		{
			for (int i = 0; i < a.nvars; ++i)
				e[i] = ea[i] + eb[i];
			add_term(r, e, ca * cb);
		}
	return r;
}

inline MultiPoly operator*(MultiPoly const &a, Rational const &c)
{
	MultiPoly r(a.nvars);
	if (c == 0)
		return r;
	r = a;
	for (auto &[e, v] : r.terms)
		v *= c;
	return r;
}
inline MultiPoly operator*(Rational const &c, MultiPoly const &a)
{
	return a * c;
}

inline MultiPoly &operator+=(MultiPoly &a, MultiPoly const &b)
{
	for (auto const &[e, c] : b.terms)
		add_term(a, e, c);
	return a;
}
inline MultiPoly &operator-=(MultiPoly &a, MultiPoly const &b)
{
	for (auto const &[e, c] : b.terms)
		add_term(a, e, -c);
	return a;
}
inline MultiPoly &operator*=(MultiPoly &a, MultiPoly const &b)
{
	a = a * b;
	return a;
}

// Exact division; throws ComputeError when b does not divide a.
inline MultiPoly divexact(MultiPoly const &a, MultiPoly const &b)
{
	if (b.is_zero())
		throw DivisionByZero("polynomial division by zero");
	MultiPoly q(a.nvars), r = a;
	auto const &[eb, cb] = *b.terms.rbegin();
	while (!r.is_zero())
	{
		auto const &[er, cr] = *r.terms.rbegin();
		Mono e(a.nvars);
		for (int i = 0; i < a.nvars; ++i)
		{
			e[i] = er[i] - eb[i];
			if (e[i] < 0)
				throw ComputeError("inexact polynomial division");
		}
		Rational c = cr / cb;
		add_term(q, e, c);
		r -= MultiPoly::monomial(a.nvars, e, c) * b;
	}
	return q;
}

// --- univariate views (main variable v, coefficients drop variable v) ---

inline std::map<int, MultiPoly> coefficients_in(MultiPoly const &p, int v)
{
	std::map<int, MultiPoly> out;
	for (auto const &[e, c] : p.terms)
	{
		Mono f = e;
		int d = f[v];
		f[v] = 0;
		auto [it, fresh] = out.try_emplace(d, MultiPoly(p.nvars));
		add_term(it->second, f, c);
	}
	return out;
}

inline MultiPoly lead_coeff_in(MultiPoly const &p, int v)
{
	int d = p.degree_in(v);
	MultiPoly lc(p.nvars);
	for (auto const &[e, c] : p.terms)
		if (e[v] == d)
		{
			Mono f = e;
			f[v] = 0;
			add_term(lc, f, c);
		}
	return lc;
}

inline MultiPoly shift_var(MultiPoly const &p, int v, int by)
{
	MultiPoly r(p.nvars);
	for (auto const &[e, c] : p.terms)
	{
		Mono f = e;
		f[v] += by;
		r.terms.emplace(f, c);
	}
	return r;
}

// Pseudo-remainder of a by b in the variable v: some lc(b)^j * a = q*b + r
// with deg_v(r) < deg_v(b). Only used inside the primitive PRS, where the
// scaling is immediately stripped again.
inline MultiPoly pseudo_rem(MultiPoly const &a, MultiPoly const &b, int v)
{
	int db = b.degree_in(v);
	assert(db >= 0);
	MultiPoly lb = lead_coeff_in(b, v);
	MultiPoly r = a;
	while (!r.is_zero() && r.degree_in(v) >= db)
	{
		int dr = r.degree_in(v);
		MultiPoly lr = lead_coeff_in(r, v);
		r = lb * r - shift_var(lr * b, v, dr - db);
	}
	return r;
}

inline MultiPoly poly_gcd(MultiPoly const &a, MultiPoly const &b);

inline MultiPoly poly_gcd_list(std::vector<MultiPoly> const &ps)
{
	MultiPoly g(ps.empty() ? 0 : ps.front().nvars);
	for (auto const &p : ps)
	{
		g = poly_gcd(g, p);
		if (g.is_constant() && !g.is_zero())
			break;
	}
	return g;
}

// monic under the lex order: leading coefficient 1
inline MultiPoly make_monic(MultiPoly const &p)
{
	if (p.is_zero())
		return p;
	return p * (Rational(1) / p.lead().second);
}

// Scale to integer coefficients with content 1 and positive leading
// coefficient. Keeps pseudo-remainder sequences from swelling: rational
// coefficients would otherwise grow exponentially along the chain.
inline MultiPoly primitive_integer(MultiPoly const &p)
{
	if (p.is_zero())
		return p;
	Integer l = 1;
	for (auto const &[e, c] : p.terms)
		l = lcm(l, denominator(c));
	Integer g = 0;
	for (auto const &[e, c] : p.terms)
		g = gcd(g, abs(numerator(c) * (l / denominator(c))));
	MultiPoly r = p * Rational(l, g);
	if (r.lead().second < 0)
		r = r * Rational(-1);
	return r;
}

inline MultiPoly content_in(MultiPoly const &p, int v)
{
	std::vector<MultiPoly> cs;
	for (auto &[d, c] : coefficients_in(p, v))
		cs.push_back(c);
	return poly_gcd_list(cs);
}

// univariate primitive PRS (integer-primitive remainders each step)
inline MultiPoly gcd_univariate(MultiPoly a, MultiPoly b, int v)
{
	a = primitive_integer(a);
	b = primitive_integer(b);
	if (a.degree_in(v) < b.degree_in(v))
		std::swap(a, b);
	while (!b.is_zero())
	{
		MultiPoly r = pseudo_rem(a, b, v);
		a = std::move(b);
		b = r.is_zero() ? std::move(r) : primitive_integer(r);
	}
	return make_monic(a);
}

inline bool supported_only_in(MultiPoly const &p, int v)
{
	for (auto const &[e, c] : p.terms)
		for (int i = 0; i < p.nvars; ++i)
			if (i != v && e[i] != 0)
				return false;
	return true;
}

// GCD over Q[x1..xk] by primitive pseudo-remainder sequences, recursing on
// the coefficient ring. Result is monic under lex (canonical up to units).
inline MultiPoly poly_gcd(MultiPoly const &a, MultiPoly const &b)
{
	if (a.is_zero())
		return make_monic(b);
	if (b.is_zero())
		return make_monic(a);
	if (a.is_constant() || b.is_constant())
		return MultiPoly(a.nvars, 1);
	if (a.terms.size() == 1 || b.terms.size() == 1)
	{
		// gcd with a monomial: the common monomial part
		Mono e(a.nvars);
		for (int v = 0; v < a.nvars; ++v)
			e[v] = (int32_t)std::min(a.min_exponent(v),
			                         b.min_exponent(v));
		return MultiPoly::monomial(a.nvars, e, 1);
	}
	if (a == b)
		return make_monic(a);

	int v = -1;
	for (int i = a.nvars - 1; i >= 0; --i)
		if (a.degree_in(i) > 0 || b.degree_in(i) > 0)
		{
			v = i;
			break;
		}
	if (v < 0)
		return MultiPoly(a.nvars, 1);
	if (a.degree_in(v) == 0 || b.degree_in(v) == 0)
	{
		// v is missing from one side: gcd divides that side's content
		MultiPoly ca = content_in(a, v), cb = content_in(b, v);
		return poly_gcd(ca, cb);
	}
	if (supported_only_in(a, v) && supported_only_in(b, v))
		return gcd_univariate(a, b, v);

	MultiPoly ca = content_in(a, v), cb = content_in(b, v);
	MultiPoly c = poly_gcd(ca, cb);
	MultiPoly A = primitive_integer(divexact(a, ca));
	MultiPoly B = primitive_integer(divexact(b, cb));
	if (A.degree_in(v) < B.degree_in(v))
		std::swap(A, B);
	while (!B.is_zero())
	{
		MultiPoly R = pseudo_rem(A, B, v);
		A = std::move(B);
		if (R.is_zero())
			B = std::move(R);
		else
			B = primitive_integer(divexact(R, content_in(R, v)));
	}
	return make_monic(c * A);
}

// --- printing ---

inline std::string mono_to_string(Mono const &e, std::string const &stem,
                                  int nvars)
{
	std::string s;
	for (int i = 0; i < nvars; ++i)
	{
		if (e[i] == 0)
			continue;
		if (!s.empty())
			s += " ";
		s += stem;
		if (nvars > 1)
			s += std::to_string(i + 1);
		if (e[i] != 1)
			s += "^" + std::to_string(e[i]);
	}
	return s;
}

inline std::string to_string(MultiPoly const &p, std::string const &stem = "x")
{
	if (p.is_zero())
		return "0";
	std::string s;
	// print highest lex term first
	for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it)
	{
		auto const &[e, c] = *it;
		Rational abs_c = c < 0 ? Rational(-c) : c;
		if (s.empty())
			s += (c < 0) ? "-" : "";
		else
			s += (c < 0) ? " - " : " + ";
		std::string m = mono_to_string(e, stem, p.nvars);
		if (m.empty())
			s += to_string(abs_c);
		else if (abs_c == 1)
			s += m;
		else
			s += to_string(abs_c) + " " + m;
	}
	return s;
}

} // namespace torsionnorm
