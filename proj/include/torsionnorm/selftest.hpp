#pragma once

#include "torsionnorm/fox.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace torsionnorm {

// deterministic generators for property checks; seed comes from the caller
// (CLI: TORSIONNORM_SEED)
namespace gen {

using Rng = std::mt19937_64;

inline long uniform(Rng &rng, long lo, long hi)
{
	return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational rational(Rng &rng, long range = 5)
{
	long num = uniform(rng, -range, range);
	long den = uniform(rng, 1, range);
	return Rational(num, den);
}

inline Rational nonzero_rational(Rng &rng, long range = 5)
{
	Rational q = rational(rng, range);
	return q == 0 ? Rational(1) : q;
}

inline MultiPoly multipoly(Rng &rng, int k, int terms, int maxdeg)
{
	MultiPoly p(k);
	for (int t = 0; t < terms; ++t)
	{
		Mono e(k);
		for (int i = 0; i < k; ++i)
			e[i] = (int32_t)uniform(rng, 0, maxdeg);
		add_term(p, e, rational(rng));
	}
	return p;
}

inline Scalar scalar(Rng &rng, int k)
{
	if (k == 0)
		return Scalar(0, rational(rng));
	return scalar_from_poly(multipoly(rng, k, 2, 2));
}

inline Scalar nonzero_scalar(Rng &rng, int k)
{
	Scalar s = scalar(rng, k);
	return s.is_zero() ? Scalar(k, 1) : s;
}

inline Scalar scalar_fraction(Rng &rng, int k)
{
	Scalar d = nonzero_scalar(rng, k);
	return scalar(rng, k) * inv(d);
}

inline Exp exponent(Rng &rng, int m, long range)
{
	Exp e(m);
	for (int i = 0; i < m; ++i)
		e[i] = uniform(rng, -range, range);
	return e;
}

inline SkewLaurentPoly slp(Rng &rng, RingPtr const &ring, int terms = 3,
                           long range = 2)
{
	SkewLaurentPoly f(ring);
	for (int t = 0; t < terms; ++t)
		add_term(f, exponent(rng, ring->m, range),
		         scalar(rng, ring->k()));
	return f;
}

inline SkewLaurentPoly nonzero_slp(Rng &rng, RingPtr const &ring,
                                   int terms = 3, long range = 2)
{
	SkewLaurentPoly f = slp(rng, ring, terms, range);
	if (f.is_zero())
		f = slp_one(ring);
	return f;
}

inline Exp nonzero_phi(Rng &rng, int m, long range = 3)
{
	Exp phi = exponent(rng, m, range);
	if (is_zero_exp(phi))
		phi[uniform(rng, 0, m - 1)] = 1;
	return phi;
}

// the twisted scalar field of the acceptance runs: K = Q(x), every t_i
// inverting x (an order-2 monomial action)
inline RingPtr twisted_ring(int m)
{
	ActionData act;
	act.k = 1;
	IntMat inv_mat(1, 1);
	inv_mat(0, 0) = -1;
	act.mats.assign(m, inv_mat);
	BaseField base{1, act};
	return make_ring(RingSpec(base, m));
}

inline RingPtr ring_for(bool twisted, int m)
{
	return twisted ? twisted_ring(m) : make_ring(RingSpec::commutative(m));
}

inline SlpMatrix slp_matrix(Rng &rng, RingPtr const &ring, int n,
                            int terms = 2, long range = 1)
{
	SlpMatrix mat(ring, n, n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			mat.at(i, j) = slp(rng, ring, terms, range);
	return mat;
}

} // namespace gen

struct SelftestResult
{
	int passed = 0;
	int failed = 0;
	std::vector<std::string> failures;

	void record(std::string const &name, bool ok)
	{
		if (ok)
			++passed;
		else
		{
			++failed;
			failures.push_back(name);
		}
	}
};

// the bundled property suite behind the CLI `selftest` query
inline SelftestResult run_selftest(uint64_t seed, int scale = 1)
{
	gen::Rng rng(seed);
	SelftestResult out;

	auto check = [&](std::string const &name, std::function<bool()> f) {
		bool ok = false;
		try
		{
			ok = f();
		}
		catch (std::exception const &)
		{
			ok = false;
		}
		out.record(name, ok);
	};

	// field axioms in K = Q(x)
	for (int it = 0; it < 20 * scale; ++it)
		check("scalar field axioms", [&] {
			Scalar a = gen::scalar_fraction(rng, 1);
			Scalar b = gen::scalar_fraction(rng, 1);
			Scalar c = gen::scalar_fraction(rng, 1);
			if (!((a + b) * c == a * c + b * c))
				return false;
			if (!((a * b) * c == a * (b * c)))
				return false;
			if (!a.is_zero() && !(a * inv(a)).is_one())
				return false;
			return a + (-a) == Scalar(1);
		});

	// the monomial action is a field automorphism and a Z^m-action
	{
		RingPtr ring = gen::twisted_ring(2);
		for (int it = 0; it < 10 * scale; ++it)
			check("action homomorphism", [&] {
				Scalar a = gen::scalar_fraction(rng, 1);
				Scalar b = gen::scalar_fraction(rng, 1);
				Exp al = gen::exponent(rng, 2, 2);
				Exp be = gen::exponent(rng, 2, 2);
				if (!(ring->twist(al, ring->twist(be, a)) ==
				      ring->twist(al + be, a)))
					return false;
				return ring->twist(al, a * b) ==
				       ring->twist(al, a) * ring->twist(al, b);
			});
	}

	// skew Laurent ring axioms, including a ring with commutation units
	{
		RingSpec spec(BaseField::rationals(2), 2);
		spec.set_unit(0, 1, Scalar(0, Rational(-1)));
		RingPtr rings[] = {gen::ring_for(true, 2), make_ring(spec)};
		for (auto const &ring : rings)
			for (int it = 0; it < 8 * scale; ++it)
				check("skew ring associativity", [&] {
					auto f = gen::slp(rng, ring);
					auto g = gen::slp(rng, ring);
					auto h = gen::slp(rng, ring);
					if (!((f * g) * h == f * (g * h)))
						return false;
					return (f + g) * h == f * h + g * h;
				});
	}

	// gamma_phi: ring isomorphism onto (K[ker phi])[s^{±1}]
	{
		RingPtr ring = gen::twisted_ring(2);
		for (int it = 0; it < 8 * scale; ++it)
			check("gamma_phi iso", [&] {
				auto f = gen::slp(rng, ring);
				auto g = gen::slp(rng, ring);
				Exp phi = gen::nonzero_phi(rng, 2);
				if (!(gamma_phi_inverse(gamma_phi(f, phi)) == f))
					return false;
				return gamma_phi(f, phi) * gamma_phi(g, phi) ==
				       gamma_phi(f * g, phi);
			});
	}

	// Euclidean layer: division identity and common right multiples
	for (int twisted = 0; twisted < 2; ++twisted)
	{
		RingPtr ring = gen::ring_for(twisted, 1);
		for (int it = 0; it < 8 * scale; ++it)
			check("division identity", [&] {
				auto f = slp_to_tower(gen::nonzero_slp(rng, ring));
				auto g = slp_to_tower(gen::nonzero_slp(rng, ring));
				DivResult d = divide_right(f.num(), g.num());
				OnePoly back = d.q * g.num() + d.r;
				if (!(back == f.num()))
					return false;
				if (!d.r.is_zero() && span(d.r) >= span(g.num()))
					return false;
				OreRel rel = lcrm_cofactors(f.num(), g.num());
				OnePoly lhs = f.num() * rel.u;
				OnePoly rhs = g.num() * rel.v;
				return lhs == rhs && lhs == rel.lcrm &&
				       !lhs.is_zero();
			});
	}

	// fraction field axioms in the tower, levels 1 and 2
	for (int m = 1; m <= 2; ++m)
	{
		RingPtr ring = gen::ring_for(true, m);
		for (int it = 0; it < 5 * scale; ++it)
			check("tower field axioms", [&] {
				auto mk = [&] {
					auto n = slp_to_tower(
					    gen::nonzero_slp(rng, ring, 2, 1));
					auto d = slp_to_tower(
					    gen::nonzero_slp(rng, ring, 2, 1));
					return n * inv(d);
				};
				TowerElem a = mk(), b = mk(), c = mk();
				if (!((a + b) * c == a * c + b * c))
					return false;
				if (!((a * b) * c == a * (b * c)))
					return false;
				if (!a.is_zero() && !is_one(a * inv(a)))
					return false;
				return (a - a).is_zero();
			});
	}

	// deg is a homomorphism
	{
		RingPtr ring = gen::twisted_ring(1);
		for (int it = 0; it < 8 * scale; ++it)
			check("deg homomorphism", [&] {
				auto a = slp_to_tower(gen::nonzero_slp(rng, ring)) *
				         inv(slp_to_tower(gen::nonzero_slp(rng, ring)));
				auto b = slp_to_tower(gen::nonzero_slp(rng, ring)) *
				         inv(slp_to_tower(gen::nonzero_slp(rng, ring)));
				if (a.is_zero() || b.is_zero())
					return true;
				return *deg_frac(a * b) ==
				           *deg_frac(a) + *deg_frac(b) &&
				       *deg_frac(inv(a)) == -*deg_frac(a);
			});
	}

	// determinants: commutative cofactor oracle and cleared fractions
	{
		RingPtr ring = make_ring(RingSpec::commutative(2));
		for (int it = 0; it < 4 * scale; ++it)
			check("dieudonne commutative oracle", [&] {
				SlpMatrix m = gen::slp_matrix(rng, ring, 3);
				// cofactor expansion in the commutative ring
				std::function<SkewLaurentPoly(
				    std::vector<std::vector<SkewLaurentPoly>>)>
				    cof = [&](auto rows) -> SkewLaurentPoly {
					int n = (int)rows.size();
					if (n == 1)
						return rows[0][0];
					SkewLaurentPoly det(ring);
					for (int j = 0; j < n; ++j)
					{
						std::vector<std::vector<SkewLaurentPoly>> sub;
						for (int i = 1; i < n; ++i)
						{
							std::vector<SkewLaurentPoly> row;
							for (int l = 0; l < n; ++l)
								if (l != j)
									row.push_back(rows[i][l]);
							sub.push_back(row);
						}
						SkewLaurentPoly t = rows[0][j] * cof(sub);
						det = (j % 2 == 0) ? det + t : det - t;
					}
					return det;
				};
				std::vector<std::vector<SkewLaurentPoly>> rows(3);
				for (int i = 0; i < 3; ++i)
					for (int j = 0; j < 3; ++j)
						rows[i].push_back(m.at(i, j));
				SkewLaurentPoly oracle = cof(rows);
				DetResult det = dieudonne_det(m);
				if (det.is_zero)
					return oracle.is_zero();
				return det.value == slp_to_tower(oracle);
			});
	}

	// cleared fraction cross-multiplication and seminorm additivity
	{
		RingPtr ring = gen::twisted_ring(2);
		for (int it = 0; it < 4 * scale; ++it)
			check("seminorm additivity", [&] {
				auto f = gen::nonzero_slp(rng, ring);
				auto g = gen::nonzero_slp(rng, ring);
				QVec phi{gen::rational(rng, 3), gen::rational(rng, 3)};
				return seminorm(f * g, phi) ==
				       seminorm(f, phi) + seminorm(g, phi);
			});
		for (int it = 0; it < 2 * scale; ++it)
			check("two-path degree equality", [&] {
				SlpMatrix m = gen::slp_matrix(rng, ring, 2);
				DetResult det = dieudonne_det(m);
				if (det.is_zero)
					return true;
				ClearedFraction c = clear_denominators(det, ring);
				Exp phi = gen::nonzero_phi(rng, 2);
				FunctionalBasis fb = canonical_functional_basis(phi);
				auto dp = deg_phi(m, phi);
				Rational lhs = torsion_seminorm(c, phi);
				Rational rhs =
				    dp ? Rational(fb.d) *
				             Rational(std::max(0L, *dp))
				       : Rational(0);
				return lhs == rhs;
			});
	}

	return out;
}

} // namespace torsionnorm
