#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/scalars.hpp"

#include <memory>
#include <vector>

namespace torsionnorm {

// Exponent vector in Z^m (the t-lattice).
using Exp = std::vector<long>;

inline std::vector<Integer> to_integer_vec(Exp const &e)
{
	std::vector<Integer> v(e.size());
	for (size_t i = 0; i < e.size(); ++i)
		v[i] = e[i];
	return v;
}

inline Exp operator+(Exp const &a, Exp const &b)
{
	Exp r(a.size());
	for (size_t i = 0; i < a.size(); ++i)
		r[i] = a[i] + b[i];
	return r;
}
inline Exp operator-(Exp const &a)
{
	Exp r(a.size());
	for (size_t i = 0; i < a.size(); ++i)
		r[i] = -a[i];
	return r;
}
inline Exp operator-(Exp const &a, Exp const &b) { return a + (-b); }
inline bool is_zero_exp(Exp const &e)
{
	for (long x : e)
		if (x != 0)
			return false;
	return true;
}

// Specification of the multivariable skew Laurent polynomial ring
// K[t_1^{±1},...,t_m^{±1}]: the base field with its Z^m-action, plus the
// commutation units  t_j t_i = u_ij · t_i t_j  (i < j). The basis element
// t^alpha is the ordered product t_1^{a_1}···t_m^{a_m}; with the default
// units this realizes the skew group ring and t^{n·alpha} = (t^alpha)^n.
struct RingSpec
{
	BaseField base;
	int m = 0;
	bool trivial_units = true;
	std::vector<std::vector<Scalar>> units; // units[i][j], i < j, else unused

	RingSpec() = default;
	RingSpec(BaseField b, int rank) : base(std::move(b)), m(rank)
	{
		if ((int)base.action.mats.size() != m)
			throw ValidationError(
			    "need one action matrix per t variable");
	}

	static RingSpec commutative(int rank)
	{
		return RingSpec(BaseField::rationals(rank), rank);
	}

	int k() const { return base.k; }

	Scalar one() const { return Scalar(base.k, 1); }

	void set_unit(int i, int j, Scalar u)
	{
		if (i >= j || i < 0 || j >= m)
			throw ValidationError("commutation unit needs 0 <= i < j < m");
		if (u.is_zero())
			throw ValidationError("commutation unit must be nonzero");
		if (units.empty())
			units.assign(m, std::vector<Scalar>(m, one()));
		units[i][j] = std::move(u);
		trivial_units = false;
	}

	Scalar unit(int i, int j) const // i < j
	{
		if (trivial_units)
			return one();
		return units[i][j];
	}

	// no twisting anywhere: plain (Laurent) polynomial ring over K
	bool fully_commutative() const
	{
		return trivial_units &&
		       (base.k == 0 || base.action.is_trivial());
	}

	// the subring on t_1..t_l is an honest commutative Laurent ring
	bool commutative_below(int l) const
	{
		for (int v = 0; v < l; ++v)
		{
			if (base.k > 0 &&
			    !(base.action.mats[v] ==
			      IntMat::identity(base.k)))
				return false;
			if (!trivial_units)
				for (int i = 0; i < v; ++i)
					if (!units[i][v].is_one())
						return false;
		}
		return true;
	}

	// conjugation by t_v fixes K and t_1..t_{v-1}
	bool twist_trivial(int v) const
	{
		if (base.k > 0 &&
		    !(base.action.mats[v - 1] == IntMat::identity(base.k)))
			return false;
		if (!trivial_units)
			for (int i = 0; i + 1 < v; ++i)
				if (!units[i][v - 1].is_one())
					return false;
		return true;
	}

	// gamma_alpha on the base field
	Scalar twist(Exp const &alpha, Scalar const &a) const
	{
		return apply_action(base.action, to_integer_vec(alpha), a);
	}
	Scalar twist_gen(int i, long e, Scalar const &a) const
	{
		Exp al(m, 0);
		al[i] = e;
		return twist(al, a);
	}

	void validate() const
	{
		base.action.validate();
		if (base.action.rank() != m)
			throw ValidationError("action rank != m");
		if (trivial_units)
			return;
		for (int i = 0; i < m; ++i)
			for (int j = i + 1; j < m; ++j)
				if (units[i][j].is_zero())
					throw ValidationError(
					    "zero commutation unit");
		// conjugation by t_j must respect t_l t_i = u_il t_i t_l
		for (int i = 0; i < m; ++i)
			for (int l = i + 1; l < m; ++l)
				for (int j = l + 1; j < m; ++j)
				{
					Scalar lhs = units[l][j] *
					             twist_gen(l, 1, units[i][j]) *
					             units[i][l];
					Scalar rhs = twist_gen(j, 1, units[i][l]) *
					             units[i][j] *
					             twist_gen(i, 1, units[l][j]);
					if (!(lhs == rhs))
						throw ValidationError(
						    "inconsistent commutation units");
				}
	}

	// c(alpha, beta) with t^alpha t^beta = c(alpha,beta) t^{alpha+beta}
	Scalar cocycle(Exp const &alpha, Exp const &beta) const
	{
		if (trivial_units)
			return one();
		return reorder_unit(alpha, beta);
	}

	// (t^alpha)^{-1} = inv_unit(alpha) · t^{-alpha}
	Scalar inverse_unit(Exp const &alpha) const
	{
		if (trivial_units)
			return one();
		return inv(cocycle(-alpha, alpha));
	}

	bool operator==(RingSpec const &o) const
	{
		return base == o.base && m == o.m &&
		       trivial_units == o.trivial_units && units == o.units;
	}

  private:
	struct Letter
	{
		int var;
		int sign; // ±1
	};

	static void expand(Exp const &e, std::vector<Letter> &out)
	{
		for (size_t i = 0; i < e.size(); ++i)
			for (long r = 0; r < (e[i] >= 0 ? e[i] : -e[i]); ++r)
				out.push_back({(int)i, e[i] >= 0 ? 1 : -1});
	}

	// unit w with (t_j^s)(t_i^r) = w (t_i^r)(t_j^s) for single letters, i<j
	Scalar swap_unit(Letter const &p, Letter const &q) const
	{
		int j = p.var, i = q.var;
		Scalar const &u = units[i][j];
		Exp ei(m, 0), ej(m, 0);
		ei[i] = 1;
		ej[j] = 1;
		if (p.sign > 0 && q.sign > 0)
			return u;
		if (p.sign > 0 && q.sign < 0)
			return twist(-ei, inv(u));
		if (p.sign < 0 && q.sign > 0)
			return twist(-ej, inv(u));
		return twist(-(ei + ej), u);
	}

	Scalar reorder_unit(Exp const &alpha, Exp const &beta) const
	{
		std::vector<Letter> w;
		expand(alpha, w);
		expand(beta, w);
		Scalar coeff = one();
		// bubble the concatenated word into variable order, collecting
		// the units each adjacent transposition produces
		bool moved = true;
		while (moved)
		{
			moved = false;
			Exp prefix(m, 0);
			for (size_t p = 0; p + 1 < w.size(); ++p)
			{
				if (w[p].var > w[p + 1].var)
				{
					Scalar u = swap_unit(w[p], w[p + 1]);
					coeff *= twist(prefix, u);
					std::swap(w[p], w[p + 1]);
					moved = true;
				}
				prefix[w[p].var] += w[p].sign;
			}
		}
		return coeff;
	}
};

using RingPtr = std::shared_ptr<const RingSpec>;

inline RingPtr make_ring(RingSpec spec)
{
	spec.validate();
	return std::make_shared<const RingSpec>(std::move(spec));
}

inline void require_same_ring(RingPtr const &a, RingPtr const &b)
{
	if (a.get() == b.get())
		return;
	if (!a || !b || !(*a == *b))
		throw RingMismatch("operands live in different rings");
}

} // namespace torsionnorm
