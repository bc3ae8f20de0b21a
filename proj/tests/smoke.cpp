// quick development smoke check (not part of the test suite)
#include "torsionnorm/fox.hpp"

#include <cassert>
#include <iostream>

using namespace torsionnorm;

int main()
{
	// scalars: inv((x^2-1)/(x-1)) == 1/(x+1)
	{
		MultiPoly x = MultiPoly::variable(1, 0);
		MultiPoly one(1, 1);
		Scalar a = make_scalar(x * x - one, x - one);
		std::cout << "a = " << to_string(a) << "\n";
		Scalar b = inv(a);
		std::cout << "1/a = " << to_string(b) << "\n";
		assert(to_string(a) == "x + 1");
	}
	// action: m=1, k=1, M=(-1): x+1 -> x^{-1}+1
	{
		ActionData act;
		act.k = 1;
		IntMat m1(1, 1);
		m1(0, 0) = -1;
		act.mats = {m1};
		MultiPoly x = MultiPoly::variable(1, 0);
		Scalar a = scalar_from_poly(x + MultiPoly(1, 1));
		Scalar b = apply_action(act, {Integer(1)}, a);
		std::cout << "gamma(x+1) = " << to_string(b) << "\n";
		// x^{-1} + 1 = (1 + x)/x
		Scalar expect = make_scalar(x + MultiPoly(1, 1), x);
		assert(b == expect);
	}
	// skew laurent: (t1+t2)^2 commutative
	{
		RingPtr r = make_ring(RingSpec::commutative(2));
		SkewLaurentPoly f = slp_var(r, 0) + slp_var(r, 1);
		SkewLaurentPoly g = f * f;
		std::cout << "(t1+t2)^2 = " << to_string(g) << "\n";
		assert(g.terms.size() == 3);
	}
	// twisted: K = Q(x), gamma(x) = x^{-1}: (x t)(x t) = t^2
	{
		ActionData act;
		act.k = 1;
		IntMat m1(1, 1);
		m1(0, 0) = -1;
		act.mats = {m1};
		BaseField base{1, act};
		RingPtr r = make_ring(RingSpec(base, 1));
		Scalar x = scalar_from_poly(MultiPoly::variable(1, 0));
		SkewLaurentPoly xt = slp_monomial(r, x, {1});
		SkewLaurentPoly sq = xt * xt;
		std::cout << "(x t)^2 = " << to_string(sq) << "\n";
		assert(sq == slp_monomial(r, Scalar(1, 1), {2}));
	}
	// gamma_phi round trip
	{
		RingPtr r = make_ring(RingSpec::commutative(2));
		SkewLaurentPoly f = slp_one(r) + slp_var(r, 0, 2) * slp_var(r, 1) +
		                    slp_var(r, 0, -2) * slp_var(r, 1, -1);
		OneVarView v = gamma_phi(f, {1, 1});
		assert(v.d == 1);
		std::cout << "gamma_phi degrees:";
		for (auto const &[i, c] : v.coeffs)
			std::cout << " " << i;
		std::cout << "\n";
		SkewLaurentPoly back = gamma_phi_inverse(v);
		assert(back == f);
	}
	// tower: s^2 / (s-1) in commutative Q(t)
	{
		RingPtr r = make_ring(RingSpec::commutative(1));
		SkewLaurentPoly s = slp_var(r, 0);
		TowerElem num = slp_to_tower(s * s);
		TowerElem den = slp_to_tower(s - slp_one(r));
		OnePoly n = num.num(), d = den.num();
		DivResult dv = divide_right(n, d);
		std::cout << "q = " << to_string(dv.q) << ", r = " << to_string(dv.r)
		          << "\n";
		// q = s + 1, r = 1
		assert(span(dv.q) == 1 && span(dv.r) == 0);
		// deg((s^2-1)/(s-1)) = 1, while deg(s^2/(s-1)) = -1 (s is a unit)
		TowerElem f1 = make_fraction(num.num() - poly_one(r, 1), d);
		assert(deg_frac(f1) == std::optional<long>(1));
		assert(deg_frac(make_fraction(n, d)) == std::optional<long>(-1));
	}
	// dieudonne: [[t,1],[0,t]] commutative -> t^2
	{
		RingPtr r = make_ring(RingSpec::commutative(1));
		SlpMatrix m(r, 2, 2);
		m.at(0, 0) = slp_var(r, 0);
		m.at(0, 1) = slp_one(r);
		m.at(1, 1) = slp_var(r, 0);
		DetResult det = dieudonne_det(m);
		assert(!det.is_zero);
		assert(det.value == slp_to_tower(slp_var(r, 0, 1) * slp_var(r, 0)));
		ClearedFraction c = clear_denominators(det, r);
		std::cout << "det f_n = " << to_string(c.f_n)
		          << ", f_d = " << to_string(c.f_d) << "\n";
	}
	// trefoil torsion: f_n/f_d = (t^2-t+1)/(t-1) up to units
	{
		Presentation p;
		p.ngens = 2;
		p.relators = {parse_word("abaBAB", 2)};
		CompatibleRep rep = abelianization_rep(p);
		TorsionResult t = torsion(p, rep);
		assert(!t.zero);
		std::cout << "trefoil f_n = " << to_string(t.cleared.f_n)
		          << " ; f_d = " << to_string(t.cleared.f_d) << "\n";
		auto db = delta_bar(t, {1});
		assert(db && *db == 1);
		auto db2 = delta_bar_via_deg(p, rep, {1}, t);
		assert(db2 && *db2 == 1);
	}
	std::cout << "smoke ok\n";
	return 0;
}
