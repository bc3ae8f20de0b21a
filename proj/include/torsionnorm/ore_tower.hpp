#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/skew_laurent.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace torsionnorm {

// The iterated Ore tower: level 0 is the base field K, level j is the skew
// fraction field K(t_1)...(t_j). A level-j element is a right fraction
// num·den^{-1} of skew Laurent polynomials in t_j whose coefficients live
// one level down. Fractions are kept canonical: num, den right-coprime and
// den with bottom exponent 0 and top coefficient 1.

struct TowerElem;

struct OnePoly
{
	RingPtr ring;
	int level = 0; // polynomial in the variable t_{level} (1-based)
	std::vector<std::pair<long, TowerElem>> terms; // ascending exponents

	bool is_zero() const { return terms.empty(); }
};

struct TowerElem
{
	RingPtr ring;
	int level = 0;
	Scalar base;             // payload when level == 0
	std::vector<OnePoly> nd; // {num, den} when level > 0

	bool is_zero() const;
	OnePoly const &num() const { return nd[0]; }
	OnePoly const &den() const { return nd[1]; }
};

inline bool operator==(TowerElem const &a, TowerElem const &b);

inline bool operator==(OnePoly const &a, OnePoly const &b)
{
	if (a.level != b.level || a.terms.size() != b.terms.size())
		return false;
	for (size_t i = 0; i < a.terms.size(); ++i)
		if (a.terms[i].first != b.terms[i].first ||
		    !(a.terms[i].second == b.terms[i].second))
			return false;
	return true;
}

// ---- constructors and basic queries ----

inline TowerElem tower_scalar(RingPtr const &r, int level, Scalar const &c);

inline OnePoly poly_zero(RingPtr const &r, int level)
{
	OnePoly p;
	p.ring = r;
	p.level = level;
	return p;
}

inline OnePoly poly_one(RingPtr const &r, int level)
{
	OnePoly p = poly_zero(r, level);
	p.terms.emplace_back(0, tower_scalar(r, level - 1, Scalar(r->k(), 1)));
	return p;
}

inline bool is_one_poly(OnePoly const &p)
{
	return p.terms.size() == 1 && p.terms[0].first == 0 &&
	       p.terms[0].second == tower_scalar(p.ring, p.level - 1,
	                                         Scalar(p.ring->k(), 1));
}

inline TowerElem tower_zero(RingPtr const &r, int level)
{
	TowerElem e;
	e.ring = r;
	e.level = level;
	if (level == 0)
		e.base = Scalar(r->k());
	else
		e.nd = {poly_zero(r, level), poly_one(r, level)};
	return e;
}

inline TowerElem tower_scalar(RingPtr const &r, int level, Scalar const &c)
{
	TowerElem e = tower_zero(r, level);
	if (level == 0)
		e.base = c;
	else if (!c.is_zero())
		e.nd[0].terms.emplace_back(0, tower_scalar(r, level - 1, c));
	return e;
}

inline TowerElem tower_one(RingPtr const &r, int level)
{
	return tower_scalar(r, level, Scalar(r->k(), 1));
}

inline bool TowerElem::is_zero() const
{
	return level == 0 ? base.is_zero() : nd[0].is_zero();
}

inline bool is_one(TowerElem const &x)
{
	if (x.level == 0)
		return x.base.is_one();
	return is_one_poly(x.num()) && is_one_poly(x.den());
}

inline TowerElem lift(TowerElem x, int to_level)
{
	while (x.level < to_level)
	{
		TowerElem up;
		up.ring = x.ring;
		up.level = x.level + 1;
		up.nd = {poly_zero(x.ring, up.level),
		         poly_one(x.ring, up.level)};
		if (!x.is_zero())
			up.nd[0].terms.emplace_back(0, std::move(x));
		x = std::move(up);
	}
	return x;
}

inline OnePoly poly_const(int level, TowerElem c)
{
	OnePoly p = poly_zero(c.ring, level);
	if (!c.is_zero())
		p.terms.emplace_back(0, std::move(c));
	return p;
}

inline long top_exp(OnePoly const &p) { return p.terms.back().first; }
inline long bottom_exp(OnePoly const &p) { return p.terms.front().first; }
inline long span(OnePoly const &p)
{
	return p.is_zero() ? -1 : top_exp(p) - bottom_exp(p);
}
inline TowerElem const &top_coeff(OnePoly const &p)
{
	return p.terms.back().second;
}

inline size_t term_count(TowerElem const &x)
{
	if (x.level == 0)
		return x.base.num.terms.size() + x.base.den.terms.size();
	size_t n = 0;
	for (auto const &[e, c] : x.num().terms)
		n += term_count(c);
	for (auto const &[e, c] : x.den().terms)
		n += term_count(c);
	return n;
}

// ---- twisting: conjugation by t_v^e, defined on levels below v ----

namespace detail {

// sigma_v^e(t_w) = unit · t_w for w < v (1-based variables)
inline Scalar twist_gen_unit(RingSpec const &R, int v, long e, int w)
{
	if (R.trivial_units || e == 0)
		return Scalar(R.base.k, 1);
	Scalar u = R.unit(w - 1, v - 1);
	Scalar acc(R.base.k, 1);
	if (e > 0)
		for (long q = 0; q < e; ++q)
			acc *= R.twist_gen(v - 1, q, u);
	else
		for (long q = 1; q <= -e; ++q)
			acc *= R.twist_gen(v - 1, -q, inv(u));
	return acc;
}

// (we · t_w)^p = unit · t_w^p
inline Scalar unit_through_power(RingSpec const &R, int w, long p,
                                 Scalar const &we)
{
	Scalar acc(R.base.k, 1);
	if (we.is_one() || p == 0)
		return acc;
	if (p > 0)
		for (long r = 0; r < p; ++r)
			acc *= R.twist_gen(w - 1, r, we);
	else
	{
		Scalar wi = inv(we);
		for (long r = 1; r <= -p; ++r)
			acc *= R.twist_gen(w - 1, -r, wi);
	}
	return acc;
}

} // namespace detail

inline TowerElem scalar_mul(Scalar const &c, TowerElem const &x);
inline TowerElem twist_elem(int v, long e, TowerElem const &x);

inline OnePoly twist_poly(int v, long e, OnePoly const &p)
{
	if (e == 0 || p.is_zero())
		return p;
	auto const &R = *p.ring;
	int w = p.level;
	assert(w < v);
	Scalar we = detail::twist_gen_unit(R, v, e, w);
	OnePoly r = poly_zero(p.ring, p.level);
	for (auto const &[q, c] : p.terms)
	{
		TowerElem tc = twist_elem(v, e, c);
		if (!R.trivial_units)
		{
			Scalar u = detail::unit_through_power(R, w, q, we);
			if (!u.is_one())
				tc = scalar_mul(u, tc);
		}
		r.terms.emplace_back(q, std::move(tc));
	}
	return r;
}

inline TowerElem twist_elem(int v, long e, TowerElem const &x)
{
	if (e == 0 || x.is_zero() || x.ring->twist_trivial(v))
		return x;
	if (x.level == 0)
	{
		TowerElem r = x;
		r.base = x.ring->twist_gen(v - 1, e, x.base);
		return r;
	}
	assert(x.level < v);
	TowerElem r;
	r.ring = x.ring;
	r.level = x.level;
	r.nd = {twist_poly(v, e, x.num()), twist_poly(v, e, x.den())};
	return r;
}

// ---- polynomial arithmetic at one level ----

inline TowerElem operator+(TowerElem const &a, TowerElem const &b);
inline TowerElem operator-(TowerElem const &a);
inline TowerElem operator*(TowerElem const &a, TowerElem const &b);
inline TowerElem inv(TowerElem const &a);

inline void poly_accum(OnePoly &p, long e, TowerElem const &c)
{
	if (c.is_zero())
		return;
	auto it = std::lower_bound(
	    p.terms.begin(), p.terms.end(), e,
	    [](auto const &t, long v) { return t.first < v; });
	if (it == p.terms.end() || it->first != e)
		p.terms.insert(it, {e, c});
	else
	{
		it->second = it->second + c;
		if (it->second.is_zero())
			p.terms.erase(it);
	}
}

inline OnePoly operator+(OnePoly const &a, OnePoly const &b)
{
	OnePoly r = poly_zero(a.ring, a.level);
	size_t i = 0, j = 0;
	while (i < a.terms.size() || j < b.terms.size())
	{
		if (j == b.terms.size() ||
		    (i < a.terms.size() && a.terms[i].first < b.terms[j].first))
			r.terms.push_back(a.terms[i++]);
		else if (i == a.terms.size() ||
		         b.terms[j].first < a.terms[i].first)
			r.terms.push_back(b.terms[j++]);
		else
		{
			TowerElem s = a.terms[i].second + b.terms[j].second;
			if (!s.is_zero())
				r.terms.emplace_back(a.terms[i].first,
				                     std::move(s));
			++i;
			++j;
		}
	}
	return r;
}

inline OnePoly operator-(OnePoly const &a)
{
	OnePoly r = a;
	for (auto &[e, c] : r.terms)
		c = -c;
	return r;
}
inline OnePoly operator-(OnePoly const &a, OnePoly const &b)
{
	return a + (-b);
}

// left multiplication by a lower-level element
inline OnePoly lmul(TowerElem const &c, OnePoly const &p)
{
	OnePoly r = poly_zero(p.ring, p.level);
	if (c.is_zero())
		return r;
	for (auto const &[e, v] : p.terms)
	{
		TowerElem t = c * v;
		if (!t.is_zero())
			r.terms.emplace_back(e, std::move(t));
	}
	return r;
}

// right multiplication: (a t^p)·c = a·sigma^p(c)·t^p
inline OnePoly rmul(OnePoly const &p, TowerElem const &c)
{
	OnePoly r = poly_zero(p.ring, p.level);
	if (c.is_zero())
		return r;
	for (auto const &[e, v] : p.terms)
	{
		TowerElem t = v * twist_elem(p.level, e, c);
		if (!t.is_zero())
			r.terms.emplace_back(e, std::move(t));
	}
	return r;
}

// exponent shift: p · t^j (a unit, no twisting)
inline OnePoly shift_right(OnePoly const &p, long j)
{
	OnePoly r = p;
	for (auto &[e, c] : r.terms)
		e += j;
	return r;
}

// (c t^sh) · g
inline OnePoly mono_lmul(TowerElem const &c, long sh, OnePoly const &g)
{
	OnePoly r = poly_zero(g.ring, g.level);
	if (c.is_zero())
		return r;
	for (auto const &[q, gq] : g.terms)
	{
		TowerElem t = c * twist_elem(g.level, sh, gq);
		if (!t.is_zero())
			r.terms.emplace_back(q + sh, std::move(t));
	}
	return r;
}

// g · (c t^sh)
inline OnePoly mono_rmul(OnePoly const &g, TowerElem const &c, long sh)
{
	return shift_right(rmul(g, c), sh);
}

inline OnePoly operator*(OnePoly const &a, OnePoly const &b)
{
	OnePoly r = poly_zero(a.ring, a.level);
	if (a.is_zero() || b.is_zero())
		return r;
	for (auto const &[p, ap] : a.terms)
		for (auto const &[q, bq] : b.terms)
			poly_accum(r, p + q,
			           ap * twist_elem(a.level, p, bq));
	return r;
}

inline TowerElem scalar_mul(Scalar const &c, TowerElem const &x)
{
	if (c.is_zero() || x.is_zero())
		return tower_zero(x.ring, x.level);
	if (x.level == 0)
	{
		TowerElem r = x;
		r.base = c * r.base;
		return r;
	}
	TowerElem r;
	r.ring = x.ring;
	r.level = x.level;
	r.nd = {lmul(tower_scalar(x.ring, x.level - 1, c), x.num()), x.den()};
	return r;
}

// ---- Euclidean structure ----

struct DivResult
{
	OnePoly q, r;
};

// f = q·g + r with span(r) < span(g). Laurent supports are shifted to the
// nonnegative range first, so on honest polynomials this is the classical
// Euclidean division.
inline DivResult divide_right(OnePoly const &f, OnePoly const &g)
{
	if (g.is_zero())
		throw DivisionByZero("skew polynomial division by zero");
	if (f.is_zero())
		return {f, f};
	TowerElem one = tower_one(f.ring, f.level - 1);
	long sf = std::min(bottom_exp(f), 0L), sg = std::min(bottom_exp(g), 0L);
	OnePoly r = sf ? mono_lmul(one, -sf, f) : f; // t^{-sf}·f
	OnePoly g0 = sg ? mono_lmul(one, -sg, g) : g;
	OnePoly q0 = poly_zero(f.ring, f.level);
	long tg = top_exp(g0);
	while (!r.is_zero() && top_exp(r) >= tg)
	{
		long sh = top_exp(r) - tg;
		TowerElem c = top_coeff(r) *
		              inv(twist_elem(f.level, sh, top_coeff(g0)));
		poly_accum(q0, sh, c);
		r = r - mono_lmul(c, sh, g0);
	}
	// f = t^{sf}(q0 g0 + r) = (t^{sf} q0 t^{-sg}) g + t^{sf} r
	OnePoly q = shift_right(sf ? mono_lmul(one, sf, q0) : q0, -sg);
	if (sf)
		r = mono_lmul(one, sf, r);
	return {std::move(q), std::move(r)};
}

// f = g·q + r with span(r) < span(g)
inline DivResult divide_left(OnePoly const &f, OnePoly const &g)
{
	if (g.is_zero())
		throw DivisionByZero("skew polynomial division by zero");
	if (f.is_zero())
		return {f, f};
	TowerElem one = tower_one(f.ring, f.level - 1);
	long sf = std::min(bottom_exp(f), 0L), sg = std::min(bottom_exp(g), 0L);
	OnePoly r = shift_right(f, -sf); // f·t^{-sf}
	OnePoly g0 = shift_right(g, -sg);
	OnePoly q0 = poly_zero(f.ring, f.level);
	long tg = top_exp(g0);
	while (!r.is_zero() && top_exp(r) >= tg)
	{
		long sh = top_exp(r) - tg;
		TowerElem c = twist_elem(
		    f.level, -tg, inv(top_coeff(g0)) * top_coeff(r));
		poly_accum(q0, sh, c);
		r = r - mono_rmul(g0, c, sh);
	}
	// f = (g0 q0 + r) t^{sf} = g (t^{-sg} q0 t^{sf}) + r t^{sf}
	OnePoly q = shift_right(sg ? mono_lmul(one, -sg, q0) : q0, sf);
	r = shift_right(r, sf);
	return {std::move(q), std::move(r)};
}

inline OnePoly exact_right_quotient(OnePoly const &f, OnePoly const &g)
{
	DivResult d = divide_right(f, g);
	if (!d.r.is_zero())
		throw ComputeError("inexact skew polynomial division");
	return std::move(d.q);
}

// span-reducing division for Laurent supports: f = q·g + r with
// span(r) < span(g); always makes progress when span(f) >= span(g)
inline DivResult divide_span(OnePoly const &f, OnePoly const &g)
{
	if (g.is_zero())
		throw DivisionByZero("skew polynomial division by zero");
	OnePoly q = poly_zero(f.ring, f.level), r = f;
	long sg = span(g);
	while (!r.is_zero() && span(r) >= sg)
	{
		long sh = top_exp(r) - top_exp(g);
		TowerElem c = top_coeff(r) *
		              inv(twist_elem(f.level, sh, top_coeff(g)));
		poly_accum(q, sh, c);
		r = r - mono_lmul(c, sh, g);
	}
	return {std::move(q), std::move(r)};
}

// left-unit normalization: bottom exponent 0, top coefficient 1
inline OnePoly normalize_left(OnePoly const &p)
{
	if (p.is_zero())
		return p;
	OnePoly r = p;
	long b = bottom_exp(r);
	if (b != 0)
		r = mono_lmul(tower_one(p.ring, p.level - 1), -b, r);
	TowerElem const &t = top_coeff(r);
	if (!is_one(t))
		r = lmul(inv(t), r);
	return r;
}

// greatest common right divisor (left-unit normalized). Remainders are
// rescaled to leading coefficient 1 along the chain; without this the
// coefficient content compounds multiplicatively.
inline OnePoly gcrd(OnePoly f, OnePoly g)
{
	if (f.is_zero())
		return normalize_left(g);
	while (!g.is_zero())
	{
		DivResult d = divide_right(f, g);
		f = std::move(g);
		g = std::move(d.r);
		if (!g.is_zero() && !is_one(top_coeff(g)))
			g = lmul(inv(top_coeff(g)), g);
	}
	return normalize_left(f);
}

// extended data for common right multiples: f·u = g·v = lcrm,
// gcld = greatest common left divisor
struct OreRel
{
	OnePoly gcld, lcrm, u, v;
};

inline OreRel lcrm_cofactors(OnePoly const &f, OnePoly const &g)
{
	if (f.is_zero() || g.is_zero())
		throw ZeroInput("lcrm of a zero polynomial");
	// extended Euclid with left division; only the f-side cofactor chain
	// is carried, the g-side cofactor comes from one exact division.
	// Remainder rows are rescaled to a unit leading coefficient to keep
	// the content from compounding.
	OnePoly r0 = f, a0 = poly_one(f.ring, f.level);
	OnePoly r1 = g, a1 = poly_zero(f.ring, f.level);
	while (!r1.is_zero())
	{
		DivResult d = divide_left(r0, r1); // r0 = r1·q + r
		OnePoly a2 = a0 - a1 * d.q;
		r0 = std::move(r1);
		r1 = std::move(d.r);
		a0 = std::move(a1);
		a1 = std::move(a2);
		if (!r1.is_zero() && !is_one(top_coeff(r1)))
		{
			// the cofactors sit on the right (r = f·a + g·b), so
			// the unit rescaling has to act on the right as well
			TowerElem c = twist_elem(
			    r1.level, -top_exp(r1), inv(top_coeff(r1)));
			r1 = rmul(r1, c);
			a1 = rmul(a1, c);
		}
	}
	OreRel rel;
	rel.gcld = r0;
	rel.u = std::move(a1);
	rel.lcrm = f * rel.u;
	DivResult v = divide_left(rel.lcrm, g); // lcrm = g·v exactly
	if (!v.r.is_zero())
		throw ComputeError("lcrm does not divide by g");
	rel.v = std::move(v.q);
	return rel;
}

namespace detail {

// Flat view of commutative towers: polynomials in k + level variables
// (the x's first, then t_1..t_level). Reduction through one multivariate
// GCD is far cheaper than the generic Ore chains.

inline void flatten_elem(TowerElem const &x, int nv, MultiPoly &num,
                         MultiPoly &den);

inline void flatten_poly(OnePoly const &p, int nv, MultiPoly &num,
                         MultiPoly &den)
{
	int k = p.ring->k();
	num = MultiPoly(nv);
	den = MultiPoly(nv, 1);
	for (auto const &[e, c] : p.terms)
	{
		MultiPoly cn(nv), cd(nv);
		flatten_elem(c, nv, cn, cd);
		Mono t(nv, 0);
		t[k + p.level - 1] = (int32_t)e;
		num = num * cd + cn * MultiPoly::monomial(nv, t, 1) * den;
		den = den * cd;
	}
}

inline void flatten_elem(TowerElem const &x, int nv, MultiPoly &num,
                         MultiPoly &den)
{
	if (x.level == 0)
	{
		int k = x.ring->k();
		num = MultiPoly(nv);
		den = MultiPoly(nv);
		for (auto const &[e, c] : x.base.num.terms)
		{
			Mono f(nv, 0);
			for (int i = 0; i < k; ++i)
				f[i] = e[i];
			num.terms.emplace(f, c);
		}
		for (auto const &[e, c] : x.base.den.terms)
		{
			Mono f(nv, 0);
			for (int i = 0; i < k; ++i)
				f[i] = e[i];
			den.terms.emplace(f, c);
		}
		return;
	}
	MultiPoly pn(nv), qn(nv), pd(nv), qd(nv);
	flatten_poly(x.num(), nv, pn, qn);
	flatten_poly(x.den(), nv, pd, qd);
	num = pn * qd;
	den = qn * pd;
}

inline TowerElem unflatten_elem(RingPtr const &ring, int level,
                                std::vector<std::pair<Mono, Rational>> const &terms);

inline OnePoly unflatten_poly(RingPtr const &ring, int level,
                              std::vector<std::pair<Mono, Rational>> const &terms)
{
	int k = ring->k();
	std::vector<std::pair<long, std::vector<std::pair<Mono, Rational>>>> groups;
	for (auto const &t : terms)
	{
		long e = t.first[k + level - 1];
		auto it = std::find_if(groups.begin(), groups.end(),
		                       [&](auto const &g) { return g.first == e; });
		if (it == groups.end())
		{
			groups.push_back({e, {}});
			it = groups.end() - 1;
		}
		it->second.push_back(t);
	}
	std::sort(groups.begin(), groups.end(),
	          [](auto const &a, auto const &b) { return a.first < b.first; });
	OnePoly p = poly_zero(ring, level);
	for (auto &[e, sub] : groups)
	{
		TowerElem c = unflatten_elem(ring, level - 1, sub);
		if (!c.is_zero())
			p.terms.emplace_back(e, std::move(c));
	}
	return p;
}

inline TowerElem unflatten_elem(RingPtr const &ring, int level,
                                std::vector<std::pair<Mono, Rational>> const &terms)
{
	if (level == 0)
	{
		int k = ring->k();
		MultiPoly p(k);
		for (auto const &[e, c] : terms)
		{
			Mono f(k);
			for (int i = 0; i < k; ++i)
				f[i] = e[i];
			add_term(p, f, c);
		}
		return tower_scalar(ring, 0, scalar_from_poly(std::move(p)));
	}
	TowerElem e;
	e.ring = ring;
	e.level = level;
	e.nd = {unflatten_poly(ring, level, terms), poly_one(ring, level)};
	if (e.nd[0].is_zero())
		return tower_zero(ring, level);
	return e;
}

} // namespace detail

// ---- rational content ----
//
// Rationals are central units; stripping the common rational content keeps
// pseudo-remainder chains from swelling (there is no noncommutative
// content, but the integer growth lives in Q).

namespace detail {

struct RatContent
{
	Integer num_gcd = 0, den_lcm = 1;

	void feed(Rational const &q)
	{
		num_gcd = gcd(num_gcd, abs(numerator(q)));
		den_lcm = lcm(den_lcm, denominator(q));
	}
	void feed(Scalar const &s)
	{
		for (auto const &[e, c] : s.num.terms)
			feed(c);
	}
	void feed(TowerElem const &x)
	{
		if (x.level == 0)
			feed(x.base);
		else
			for (auto const &[e, c] : x.num().terms)
				feed(c);
	}
	void feed(OnePoly const &p)
	{
		for (auto const &[e, c] : p.terms)
			feed(c);
	}
	Rational value() const
	{
		return num_gcd == 0 ? Rational(1)
		                    : Rational(num_gcd, den_lcm);
	}
};

} // namespace detail

inline OnePoly scalar_mul(Scalar const &c, OnePoly const &p)
{
	OnePoly r = poly_zero(p.ring, p.level);
	if (c.is_zero())
		return r;
	for (auto const &[e, v] : p.terms)
		r.terms.emplace_back(e, scalar_mul(c, v));
	return r;
}

// ---- fraction-free common left multiples ----
//
// (u, v) with u·f = v·g for nonzero f, g with denominator-free
// coefficients; u, v stay denominator-free. Coefficient clashes descend
// one tower level, so no fraction arithmetic is ever touched.

inline std::pair<TowerElem, TowerElem> clm_elem(TowerElem const &f,
                                                TowerElem const &g);

inline std::pair<OnePoly, OnePoly> clm_poly(OnePoly const &f, OnePoly const &g)
{
	if (f.is_zero() || g.is_zero())
		throw ZeroInput("common multiple of a zero polynomial");
	RingPtr const &ring = f.ring;
	int level = f.level;

	if (ring->commutative_below(level) && ring->twist_trivial(level))
	{
		// with f = pf/qf and g = pg/qg flat:  u = pg·qf/h, v = pf·qg/h
		// for h = gcd(pf·qg, pg·qf) give u·f = v·g with minimal growth
		int nv = ring->k() + level;
		MultiPoly pf(nv), qf(nv), pg(nv), qg(nv);
		detail::flatten_poly(f, nv, pf, qf);
		detail::flatten_poly(g, nv, pg, qg);
		MultiPoly a = pf * qg, b = pg * qf;
		for (int v = 0; v < nv; ++v)
		{
			int s = std::min(
			    {0, a.min_exponent(v), b.min_exponent(v)});
			if (s < 0)
			{
				a = shift_var(a, v, -s);
				b = shift_var(b, v, -s);
			}
		}
		MultiPoly h = poly_gcd(a, b);
		if (!h.is_constant())
		{
			a = divexact(a, h);
			b = divexact(b, h);
		}
		std::vector<std::pair<Mono, Rational>> bt(b.terms.begin(),
		                                          b.terms.end());
		std::vector<std::pair<Mono, Rational>> at(a.terms.begin(),
		                                          a.terms.end());
		return {detail::unflatten_poly(ring, level, bt),
		        detail::unflatten_poly(ring, level, at)};
	}

	TowerElem one = tower_one(ring, level - 1);
	// rows (r, p, q) with r = p·f + q·g
	long bf = std::min(bottom_exp(f), 0L), bg = std::min(bottom_exp(g), 0L);
	OnePoly r0 = bf ? mono_lmul(one, -bf, f) : f;
	OnePoly p0 = poly_zero(ring, level), q0 = poly_zero(ring, level);
	p0.terms.emplace_back(-bf, one);
	OnePoly r1 = bg ? mono_lmul(one, -bg, g) : g;
	OnePoly p1 = poly_zero(ring, level), q1 = poly_zero(ring, level);
	q1.terms.emplace_back(-bg, one);

	while (true)
	{
		if (r0.is_zero())
		{
			if (p0.is_zero() || q0.is_zero())
				throw ComputeError("degenerate clm cofactors");
			return {std::move(p0), -q0};
		}
		if (r1.is_zero())
		{
			if (p1.is_zero() || q1.is_zero())
				throw ComputeError("degenerate clm cofactors");
			return {std::move(p1), -q1};
		}
		if (top_exp(r0) < top_exp(r1))
		{
			std::swap(r0, r1);
			std::swap(p0, p1);
			std::swap(q0, q1);
		}
		long d = top_exp(r0) - top_exp(r1);
		auto [c, e] =
		    clm_elem(top_coeff(r0), twist_elem(level, d, top_coeff(r1)));
		r0 = lmul(c, r0) - mono_lmul(e, d, r1);
		p0 = lmul(c, p0) - mono_lmul(e, d, p1);
		q0 = lmul(c, q0) - mono_lmul(e, d, q1);
		detail::RatContent rc;
		rc.feed(r0);
		rc.feed(p0);
		rc.feed(q0);
		Rational cnt = rc.value();
		if (cnt != 1)
		{
			Scalar s(ring->k(), Rational(1) / cnt);
			r0 = scalar_mul(s, r0);
			p0 = scalar_mul(s, p0);
			q0 = scalar_mul(s, q0);
		}
	}
}

inline std::pair<TowerElem, TowerElem> clm_elem(TowerElem const &f,
                                                TowerElem const &g)
{
	if (f.level == 0)
	{
		// coefficients live in the field K: u = 1, v = f/g
		TowerElem u = tower_one(f.ring, 0);
		TowerElem v = u;
		v.base = f.base * inv(g.base);
		return {std::move(u), std::move(v)};
	}
	auto [pu, pv] = clm_poly(f.num(), g.num());
	TowerElem u, v;
	u.ring = v.ring = f.ring;
	u.level = v.level = f.level;
	u.nd = {std::move(pu), poly_one(f.ring, f.level)};
	v.nd = {std::move(pv), poly_one(f.ring, f.level)};
	return {std::move(u), std::move(v)};
}

// ---- fraction field layer ----

// right-unit normalization of an already right-coprime pair
inline TowerElem normalized_fraction(OnePoly num, OnePoly den)
{
	RingPtr ring = den.ring;
	int level = den.level;
	if (num.is_zero())
		return tower_zero(ring, level);
	long j = bottom_exp(den);
	if (j != 0)
	{
		num = shift_right(num, -j);
		den = shift_right(den, -j);
	}
	TowerElem const &lt = top_coeff(den);
	if (!is_one(lt))
	{
		TowerElem c = twist_elem(level, -top_exp(den), inv(lt));
		num = rmul(num, c);
		den = rmul(den, c);
	}
	TowerElem e;
	e.ring = ring;
	e.level = level;
	e.nd = {std::move(num), std::move(den)};
	return e;
}

inline TowerElem make_fraction(OnePoly num, OnePoly den)
{
	if (den.is_zero())
		throw DivisionByZero("zero denominator in the tower field");
	RingPtr ring = den.ring;
	int level = den.level;
	if (num.is_zero())
		return tower_zero(ring, level);
	if (is_one_poly(den))
		return normalized_fraction(std::move(num), std::move(den));
	if (ring->commutative_below(level))
	{
		int nv = ring->k() + level;
		MultiPoly pn(nv), qn(nv), pd(nv), qd(nv);
		detail::flatten_poly(num, nv, pn, qn);
		detail::flatten_poly(den, nv, pd, qd);
		MultiPoly p = pn * qd, q = qn * pd;
		for (int v = 0; v < nv; ++v)
		{
			int s = std::min(
			    {0, p.min_exponent(v), q.min_exponent(v)});
			if (s < 0)
			{
				p = shift_var(p, v, -s);
				q = shift_var(q, v, -s);
			}
		}
		MultiPoly g = poly_gcd(p, q);
		if (!g.is_constant())
		{
			p = divexact(p, g);
			q = divexact(q, g);
		}
		std::vector<std::pair<Mono, Rational>> pt(p.terms.begin(),
		                                          p.terms.end());
		std::vector<std::pair<Mono, Rational>> qt(q.terms.begin(),
		                                          q.terms.end());
		return normalized_fraction(
		    detail::unflatten_poly(ring, level, pt),
		    detail::unflatten_poly(ring, level, qt));
	}
	OnePoly g = gcrd(num, den);
	if (span(g) > 0 || !is_one_poly(g))
	{
		num = exact_right_quotient(num, g);
		den = exact_right_quotient(den, g);
	}
	return normalized_fraction(std::move(num), std::move(den));
}

inline TowerElem operator+(TowerElem const &a, TowerElem const &b)
{
	assert(a.level == b.level);
	if (a.is_zero())
		return b;
	if (b.is_zero())
		return a;
	if (a.level == 0)
	{
		TowerElem r = a;
		r.base = a.base + b.base;
		return r;
	}
	if (a.den() == b.den())
	{
		OnePoly n = a.num() + b.num();
		if (is_one_poly(a.den()))
		{
			TowerElem r = a;
			r.nd[0] = std::move(n);
			if (r.nd[0].is_zero())
				return tower_zero(a.ring, a.level);
			return r;
		}
		return make_fraction(std::move(n), a.den());
	}
	if (a.ring->commutative_below(a.level))
		return make_fraction(a.num() * b.den() + b.num() * a.den(),
		                     a.den() * b.den());
	OreRel rel = lcrm_cofactors(a.den(), b.den());
	return make_fraction(a.num() * rel.u + b.num() * rel.v,
	                     a.den() * rel.u);
}

inline TowerElem operator-(TowerElem const &a)
{
	if (a.level == 0)
	{
		TowerElem r = a;
		r.base = -r.base;
		return r;
	}
	TowerElem r = a;
	r.nd[0] = -r.nd[0];
	return r;
}

inline TowerElem operator-(TowerElem const &a, TowerElem const &b)
{
	return a + (-b);
}

inline TowerElem operator*(TowerElem const &a, TowerElem const &b)
{
	assert(a.level == b.level);
	if (a.is_zero() || b.is_zero())
		return tower_zero(a.ring, a.level);
	if (a.level == 0)
	{
		TowerElem r = a;
		r.base = a.base * b.base;
		return r;
	}
	if (is_one_poly(a.den()))
		return make_fraction(a.num() * b.num(), b.den());
	if (a.ring->commutative_below(a.level))
		return make_fraction(a.num() * b.num(), a.den() * b.den());
	// swap den(a)^{-1} past num(b):  d1·u = n2·v  =>  d1^{-1} n2 = u v^{-1}
	OreRel rel = lcrm_cofactors(a.den(), b.num());
	return make_fraction(a.num() * rel.u, b.den() * rel.v);
}

inline TowerElem inv(TowerElem const &a)
{
	if (a.is_zero())
		throw DivisionByZero("inverse of 0 in the tower field");
	if (a.level == 0)
	{
		TowerElem r = a;
		r.base = inv(a.base);
		return r;
	}
	// num and den are already coprime: renormalize only
	return normalized_fraction(a.den(), a.num());
}

inline TowerElem operator/(TowerElem const &a, TowerElem const &b)
{
	return a * inv(b);
}

inline bool operator==(TowerElem const &a, TowerElem const &b)
{
	if (a.level != b.level)
		return false;
	if (a.level == 0)
		return a.base == b.base;
	return a.num() == b.num() && a.den() == b.den();
}

// deg over the top variable: span(num) - span(den); -infinity for 0
inline std::optional<long> deg_frac(TowerElem const &a)
{
	if (a.is_zero())
		return std::nullopt;
	if (a.level == 0)
		return 0;
	return span(a.num()) - span(a.den());
}

// ---- conversions with the graded representation ----

inline bool is_polynomial(TowerElem const &x)
{
	if (x.level == 0)
		return true;
	if (!is_one_poly(x.den()))
		return false;
	for (auto const &[e, c] : x.num().terms)
		if (!is_polynomial(c))
			return false;
	return true;
}

namespace detail {

inline TowerElem build_tower(RingPtr const &ring, int level,
                             std::vector<std::pair<Exp, Scalar>> const &terms)
{
	if (terms.empty())
		return tower_zero(ring, level);
	if (level == 0)
	{
		assert(terms.size() == 1);
		return tower_scalar(ring, 0, terms[0].second);
	}
	std::vector<std::pair<long, std::vector<std::pair<Exp, Scalar>>>> groups;
	for (auto const &t : terms)
	{
		long e = t.first[level - 1];
		auto it = std::find_if(groups.begin(), groups.end(),
		                       [&](auto const &g) { return g.first == e; });
		if (it == groups.end())
		{
			groups.push_back({e, {}});
			it = groups.end() - 1;
		}
		it->second.push_back(t);
	}
	std::sort(groups.begin(), groups.end(),
	          [](auto const &a, auto const &b) { return a.first < b.first; });
	OnePoly num = poly_zero(ring, level);
	for (auto &[e, sub] : groups)
	{
		TowerElem c = build_tower(ring, level - 1, sub);
		if (!c.is_zero())
			num.terms.emplace_back(e, std::move(c));
	}
	TowerElem r;
	r.ring = ring;
	r.level = level;
	r.nd = {std::move(num), poly_one(ring, level)};
	if (r.nd[0].is_zero())
		return tower_zero(ring, level);
	return r;
}

inline void collect_terms(TowerElem const &x, Exp &suffix, int level,
                          SkewLaurentPoly &out)
{
	if (level == 0)
	{
		add_term(out, suffix, x.base);
		return;
	}
	for (auto const &[e, c] : x.num().terms)
	{
		suffix[level - 1] = e;
		collect_terms(c, suffix, level - 1, out);
	}
	suffix[level - 1] = 0;
}

} // namespace detail

inline TowerElem slp_to_tower(SkewLaurentPoly const &f)
{
	std::vector<std::pair<Exp, Scalar>> terms(f.terms.begin(),
	                                          f.terms.end());
	return detail::build_tower(f.ring, f.ring->m, terms);
}

inline SkewLaurentPoly tower_to_slp(TowerElem const &x)
{
	if (!is_polynomial(x))
		throw ComputeError(
		    "tower element with nontrivial denominator is not a polynomial");
	SkewLaurentPoly out(x.ring);
	if (x.is_zero())
		return out;
	assert(x.level == x.ring->m);
	Exp suffix(x.ring->m, 0);
	detail::collect_terms(x, suffix, x.level, out);
	return out;
}

// ---- clearing nested denominators (the constructive Ore condition) ----
//
// as_polyfrac(x) writes any tower element as U·V^{-1} with U, V honest
// elements of the Laurent ring (denominator-free at every level). This is
// the effective content of "K[Ker phi] is an Ore domain: we can find a
// common denominator".

inline std::pair<TowerElem, TowerElem> as_polyfrac(TowerElem const &x);

namespace detail {

struct CrmResult
{
	TowerElem w;                // common left-divisible multiple
	std::vector<TowerElem> cof; // w = h_i · cof_i
};

// common "right multiple" of polynomial elements: w with w = h_i·cof_i
inline CrmResult crm_list(std::vector<TowerElem> const &hs)
{
	CrmResult res;
	res.w = hs.at(0);
	res.cof = {tower_one(res.w.ring, res.w.level)};
	for (size_t i = 1; i < hs.size(); ++i)
	{
		if (is_one(hs[i]))
		{
			res.cof.push_back(res.w);
			continue;
		}
		auto [u, v] = as_polyfrac(inv(hs[i]) * res.w);
		// h^{-1} w = u v^{-1}  =>  w·v = h·u
		for (auto &c : res.cof)
			c = c * v;
		res.w = res.w * v;
		res.cof.push_back(u);
	}
	return res;
}

// P·w = P' with polynomial coefficients; w polynomial, one level down
inline std::pair<OnePoly, TowerElem> clear_poly(OnePoly const &P)
{
	int level = P.level;
	RingPtr ring = P.ring;
	std::vector<std::pair<long, std::pair<TowerElem, TowerElem>>> parts;
	bool clean = true;
	for (auto const &[e, c] : P.terms)
	{
		auto nf = as_polyfrac(c);
		if (!is_one(nf.second))
			clean = false;
		parts.emplace_back(e, std::move(nf));
	}
	if (clean)
	{
		OnePoly out = poly_zero(ring, level);
		for (auto &[e, ab] : parts)
			out.terms.emplace_back(e, std::move(ab.first));
		return {std::move(out), tower_one(ring, level - 1)};
	}
	std::vector<TowerElem> hs;
	for (auto const &[e, ab] : parts)
		hs.push_back(twist_elem(level, -e, ab.second));
	CrmResult crm = crm_list(hs);
	OnePoly out = poly_zero(ring, level);
	for (size_t i = 0; i < parts.size(); ++i)
	{
		auto const &[e, ab] = parts[i];
		TowerElem coeff = ab.first * twist_elem(level, e, crm.cof[i]);
		if (!coeff.is_zero())
			out.terms.emplace_back(e, std::move(coeff));
	}
	return {std::move(out), std::move(crm.w)};
}

} // namespace detail

inline std::pair<TowerElem, TowerElem> as_polyfrac(TowerElem const &x)
{
	if (x.level == 0)
		return {x, tower_one(x.ring, 0)};
	if (x.is_zero())
		return {x, tower_one(x.ring, x.level)};
	int level = x.level;
	auto [n1, w1] = detail::clear_poly(x.num());
	OnePoly d1 = is_one(w1) ? x.den() : rmul(x.den(), w1);
	auto [d2, w2] = detail::clear_poly(d1);
	OnePoly u = is_one(w2) ? std::move(n1) : rmul(n1, w2);

	TowerElem U, V;
	U.ring = V.ring = x.ring;
	U.level = V.level = level;
	U.nd = {std::move(u), poly_one(x.ring, level)};
	V.nd = {std::move(d2), poly_one(x.ring, level)};
	return {std::move(U), std::move(V)};
}

// ---- debug pretty-printer for nested fractions ----

inline std::string to_string(TowerElem const &x);

inline std::string to_string(OnePoly const &p)
{
	if (p.is_zero())
		return "0";
	std::string s;
	for (auto const &[e, c] : p.terms)
	{
		if (!s.empty())
			s += " + ";
		std::string var = "t" + std::to_string(p.level);
		std::string cs = to_string(c);
		if (e == 0)
			s += cs;
		else
		{
			std::string mono =
			    var + (e == 1 ? "" : "^" + std::to_string(e));
			s += (is_one(c) ? mono : "(" + cs + ")·" + mono);
		}
	}
	return s;
}

inline std::string to_string(TowerElem const &x)
{
	if (x.level == 0)
		return to_string(x.base);
	if (x.is_zero())
		return "0";
	if (is_one_poly(x.den()))
		return to_string(x.num());
	return "[" + to_string(x.num()) + "] / [" + to_string(x.den()) + "]";
}

} // namespace torsionnorm
