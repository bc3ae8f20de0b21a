#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/ring_spec.hpp"

#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace torsionnorm {

// Element of K[t_1^{±1},...,t_m^{±1}]: finite sum of terms a_alpha t^alpha,
// stored sparse with no zero coefficients, term map ordered lexicographically.
struct SkewLaurentPoly
{
	RingPtr ring;
	std::map<Exp, Scalar> terms;

	SkewLaurentPoly() = default;
	explicit SkewLaurentPoly(RingPtr r) : ring(std::move(r)) {}

	bool is_zero() const { return terms.empty(); }
	bool is_scalar() const
	{
		return terms.empty() ||
		       (terms.size() == 1 &&
		        is_zero_exp(terms.begin()->first));
	}
	Scalar scalar_value() const
	{
		if (terms.empty())
			return Scalar(ring->k());
		return terms.begin()->second;
	}
	bool is_monomial() const { return terms.size() == 1; }

	bool operator==(SkewLaurentPoly const &o) const
	{
		return terms == o.terms;
	}
};

inline void add_term(SkewLaurentPoly &p, Exp const &e, Scalar const &c)
{
	if (c.is_zero())
		return;
	auto it = p.terms.find(e);
	if (it == p.terms.end())
		p.terms.emplace(e, c);
	else
	{
		it->second += c;
		if (it->second.is_zero())
			p.terms.erase(it);
	}
}

inline SkewLaurentPoly slp_scalar(RingPtr const &r, Scalar const &c)
{
	SkewLaurentPoly p(r);
	add_term(p, Exp(r->m, 0), c);
	return p;
}
inline SkewLaurentPoly slp_one(RingPtr const &r)
{
	return slp_scalar(r, Scalar(r->k(), 1));
}
inline SkewLaurentPoly slp_rational(RingPtr const &r, Rational const &q)
{
	return slp_scalar(r, Scalar(r->k(), q));
}
inline SkewLaurentPoly slp_monomial(RingPtr const &r, Scalar const &c,
                                    Exp const &e)
{
	SkewLaurentPoly p(r);
	add_term(p, e, c);
	return p;
}
inline SkewLaurentPoly slp_var(RingPtr const &r, int i, long power = 1)
{
	Exp e(r->m, 0);
	e[i] = power;
	return slp_monomial(r, Scalar(r->k(), 1), e);
}

inline SkewLaurentPoly operator+(SkewLaurentPoly const &a,
                                 SkewLaurentPoly const &b)
{
	require_same_ring(a.ring, b.ring);
	SkewLaurentPoly r = a;
	for (auto const &[e, c] : b.terms)
		add_term(r, e, c);
	return r;
}

inline SkewLaurentPoly operator-(SkewLaurentPoly const &a)
{
	SkewLaurentPoly r = a;
	for (auto &[e, c] : r.terms)
		c = -c;
	return r;
}
inline SkewLaurentPoly operator-(SkewLaurentPoly const &a,
                                 SkewLaurentPoly const &b)
{
	return a + (-b);
}

// (a t^alpha)(b t^beta) = a · gamma_alpha(b) · c(alpha,beta) t^{alpha+beta}
inline SkewLaurentPoly operator*(SkewLaurentPoly const &a,
                                 SkewLaurentPoly const &b)
{
	require_same_ring(a.ring, b.ring);
	auto const &R = *a.ring;
	SkewLaurentPoly r(a.ring);
	for (auto const &[ea, ca] : a.terms)
		for (auto const &[eb, cb] : b.terms)
		{
			Scalar c = ca * R.twist(ea, cb);
			if (!R.trivial_units)
				c *= R.cocycle(ea, eb);
			add_term(r, ea + eb, c);
		}
	return r;
}

inline SkewLaurentPoly operator*(Scalar const &c, SkewLaurentPoly const &a)
{
	SkewLaurentPoly r(a.ring);
	for (auto const &[e, v] : a.terms)
		add_term(r, e, c * v);
	return r;
}

inline SkewLaurentPoly &operator+=(SkewLaurentPoly &a,
                                   SkewLaurentPoly const &b)
{
	require_same_ring(a.ring, b.ring);
	for (auto const &[e, c] : b.terms)
		add_term(a, e, c);
	return a;
}
inline SkewLaurentPoly &operator-=(SkewLaurentPoly &a,
                                   SkewLaurentPoly const &b)
{
	return a += -b;
}
inline SkewLaurentPoly &operator*=(SkewLaurentPoly &a,
                                   SkewLaurentPoly const &b)
{
	a = a * b;
	return a;
}

// inverse of a single term: (a t^alpha)^{-1}
inline SkewLaurentPoly monomial_inverse(SkewLaurentPoly const &p)
{
	if (!p.is_monomial())
		throw ComputeError("monomial_inverse needs a single term");
	auto const &[e, c] = *p.terms.begin();
	auto const &R = *p.ring;
	// (a t^e)^{-1} = gamma_{-e}(a^{-1}) · (t^e)^{-1}
	Scalar w = R.twist(-e, inv(c)) * R.inverse_unit(e);
	return slp_monomial(p.ring, w, -e);
}

inline SkewLaurentPoly slp_pow(SkewLaurentPoly const &p, long n)
{
	SkewLaurentPoly base = n >= 0 ? p : monomial_inverse(p);
	long k = n >= 0 ? n : -n;
	SkewLaurentPoly r = slp_one(p.ring);
	while (k > 0)
	{
		if (k & 1)
			r *= base;
		base = base * base;
		k >>= 1;
	}
	return r;
}

inline std::vector<Exp> support(SkewLaurentPoly const &f)
{
	std::vector<Exp> s;
	s.reserve(f.terms.size());
	for (auto const &[e, c] : f.terms)
		s.push_back(e);
	return s;
}

inline std::string to_string(SkewLaurentPoly const &f)
{
	if (f.is_zero())
		return "0";
	std::string s;
	for (auto const &[e, c] : f.terms)
	{
		if (!s.empty())
			s += " + ";
		std::string mono;
		for (int i = 0; i < f.ring->m; ++i)
		{
			if (e[i] == 0)
				continue;
			if (!mono.empty())
				mono += " ";
			mono += "t" + std::to_string(i + 1);
			if (e[i] != 1)
				mono += "^" + std::to_string(e[i]);
		}
		std::string cs = to_string(c);
		bool atom = c.num.terms.size() <= 1 &&
		            c.den.is_constant();
		if (mono.empty())
			s += cs;
		else if (c.is_one())
			s += mono;
		else
			s += (atom ? cs : "(" + cs + ")") + " * " + mono;
	}
	return s;
}

// -------------------------------------------------------------------------
// gamma_phi: regroup f along a nonzero functional phi as a one-variable
// skew Laurent polynomial in s over K[ker(phi)],
//   sum k_alpha t^alpha  ->  sum (k_alpha t^alpha mu^{-phi(alpha)/d}) s^{phi(alpha)/d}.
// -------------------------------------------------------------------------

inline long phi_of(Exp const &phi, Exp const &alpha)
{
	long s = 0;
	for (size_t i = 0; i < phi.size(); ++i)
		s += phi[i] * alpha[i];
	return s;
}

struct FunctionalBasis
{
	long d = 0;
	Exp beta;
	std::vector<Exp> kernel;
};

// beta with phi(beta) = d, canonical: minimal 1-norm, then lexicographically
// smallest. The result never affects any norm (Theorem on deg_phi), but a
// deterministic choice keeps serialized output reproducible.
inline FunctionalBasis canonical_functional_basis(Exp const &phi)
{
	int m = (int)phi.size();
	bool zero = true;
	for (long x : phi)
		if (x != 0)
			zero = false;
	if (zero)
		throw ZeroMap("phi = 0");
	FunctionalSplit s = split_functional(to_integer_vec(phi));
	long d = (long)s.d;
	Exp beta(m);
	long norm0 = 0;
	for (int i = 0; i < m; ++i)
	{
		beta[i] = (long)s.beta[i];
		norm0 += std::abs(beta[i]);
	}
	long radius = norm0;
	double box = 1;
	for (int i = 0; i < m; ++i)
		box *= 2 * radius + 1;
	if (box <= 2e6)
	{
		Exp cur(m, -radius), best = beta;
		long best_norm = norm0;
		while (true)
		{
			if (phi_of(phi, cur) == d)
			{
				long n = 0;
				for (long x : cur)
					n += std::abs(x);
				if (n < best_norm ||
				    (n == best_norm && cur < best))
				{
					best = cur;
					best_norm = n;
				}
			}
			int i = 0;
			while (i < m && cur[i] == radius)
				cur[i++] = -radius;
			if (i == m)
				break;
			++cur[i];
		}
		beta = best;
	}
	FunctionalBasis out;
	out.d = d;
	out.beta = beta;
	for (auto const &col : s.kernel)
	{
		Exp v(m);
		for (int i = 0; i < m; ++i)
			v[i] = (long)col[i];
		out.kernel.push_back(std::move(v));
	}
	return out;
}

struct OneVarView
{
	RingPtr ring;
	Exp phi;
	long d = 1;
	Exp beta;
	std::map<long, SkewLaurentPoly> coeffs; // supports lie in ker(phi)

	bool is_zero() const { return coeffs.empty(); }
	bool operator==(OneVarView const &o) const
	{
		return phi == o.phi && d == o.d && beta == o.beta &&
		       coeffs == o.coeffs;
	}
};

namespace detail {
// cached powers of mu = t^beta within one computation
struct MuPowers
{
	RingPtr ring;
	SkewLaurentPoly mu;
	std::map<long, SkewLaurentPoly> cache;

	MuPowers(RingPtr r, Exp const &beta)
	    : ring(r), mu(slp_monomial(r, Scalar(r->k(), 1), beta))
	{
		cache[0] = slp_one(r);
		cache[1] = mu;
		cache[-1] = monomial_inverse(mu);
	}
	SkewLaurentPoly const &operator()(long i)
	{
		auto it = cache.find(i);
		if (it != cache.end())
			return it->second;
		long step = i > 0 ? 1 : -1;
		SkewLaurentPoly v = (*this)(i - step) * (*this)(step);
		return cache.emplace(i, std::move(v)).first->second;
	}
};
} // namespace detail

inline OneVarView gamma_phi(SkewLaurentPoly const &f, Exp const &phi)
{
	FunctionalBasis fb = canonical_functional_basis(phi);
	OneVarView v;
	v.ring = f.ring;
	v.phi = phi;
	v.d = fb.d;
	v.beta = fb.beta;
	detail::MuPowers mu(f.ring, fb.beta);
	for (auto const &[e, c] : f.terms)
	{
		long i = phi_of(phi, e) / fb.d;
		SkewLaurentPoly t = slp_monomial(f.ring, c, e) * mu(-i);
		auto [it, fresh] =
		    v.coeffs.try_emplace(i, SkewLaurentPoly(f.ring));
		it->second += t;
		if (it->second.is_zero())
			v.coeffs.erase(it);
	}
	return v;
}

inline SkewLaurentPoly gamma_phi_inverse(OneVarView const &v)
{
	SkewLaurentPoly f(v.ring);
	if (v.coeffs.empty())
		return f;
	detail::MuPowers mu(v.ring, v.beta);
	for (auto const &[i, c] : v.coeffs)
		f += c * mu(i);
	return f;
}

// product in (K[ker phi])[s^{±1}] where s acts by conjugation with mu
inline OneVarView operator*(OneVarView const &a, OneVarView const &b)
{
	if (!(a.phi == b.phi) || a.d != b.d || !(a.beta == b.beta))
		throw RingMismatch("one-variable views over different phi");
	OneVarView r;
	r.ring = a.ring;
	r.phi = a.phi;
	r.d = a.d;
	r.beta = a.beta;
	detail::MuPowers mu(a.ring, a.beta);
	for (auto const &[i, ci] : a.coeffs)
		for (auto const &[j, cj] : b.coeffs)
		{
			SkewLaurentPoly conj = mu(i) * cj * mu(-i);
			auto [it, fresh] = r.coeffs.try_emplace(
			    i + j, SkewLaurentPoly(a.ring));
			it->second += ci * conj;
			if (it->second.is_zero())
				r.coeffs.erase(it);
		}
	return r;
}

// -------------------------------------------------------------------------
// Lattice basis change: rewrite the ring on a new basis of Z^m. Used to
// present K[t^{±}] as (K[ker phi])[s^{±1}] with s = t^beta the last
// variable; this is gamma_phi as a re-coordinatization.
// -------------------------------------------------------------------------

struct BasisChange
{
	RingPtr src, dst;
	IntMat basis;     // columns: new basis vectors in old coordinates
	IntMat basis_inv; // integral since basis is unimodular
	bool identity = false;

	Exp new_coords(Exp const &alpha) const
	{
		if (identity)
			return alpha;
		auto v = basis_inv * to_integer_vec(alpha);
		Exp n(v.size());
		for (size_t i = 0; i < v.size(); ++i)
			n[i] = (long)v[i];
		return n;
	}
	Exp old_coords(Exp const &n) const
	{
		if (identity)
			return n;
		auto v = basis * to_integer_vec(n);
		Exp a(v.size());
		for (size_t i = 0; i < v.size(); ++i)
			a[i] = (long)v[i];
		return a;
	}

	// ordered product T_1^{n_1}···T_m^{n_m} expanded in the old ring:
	// equals W(n) · t^{basis·n} with W(n) in K^x
	Scalar unit_for(Exp const &n) const
	{
		if (src->trivial_units)
			return src->one();
		SkewLaurentPoly acc = slp_one(src);
		for (size_t i = 0; i < n.size(); ++i)
		{
			if (n[i] == 0)
				continue;
			Exp bi(src->m);
			for (int r = 0; r < src->m; ++r)
				bi[r] = (long)basis(r, (int)i);
			acc *= slp_pow(slp_monomial(src, src->one(), bi), n[i]);
		}
		return acc.terms.begin()->second;
	}

	SkewLaurentPoly to_new(SkewLaurentPoly const &f) const
	{
		if (identity && src.get() == dst.get())
			return f;
		SkewLaurentPoly g(dst);
		for (auto const &[e, c] : f.terms)
		{
			Exp n = new_coords(e);
			Scalar w = unit_for(n);
			add_term(g, n, c * inv(w));
		}
		return g;
	}

	SkewLaurentPoly to_old(SkewLaurentPoly const &g) const
	{
		if (identity && src.get() == dst.get())
			return g;
		SkewLaurentPoly f(src);
		for (auto const &[n, c] : g.terms)
			add_term(f, old_coords(n), c * unit_for(n));
		return f;
	}
};

inline BasisChange make_basis_change(RingPtr const &src,
                                     std::vector<Exp> const &columns)
{
	int m = src->m;
	if ((int)columns.size() != m)
		throw ComputeError("basis change needs m columns");
	BasisChange bc;
	bc.src = src;
	bc.basis = IntMat(m, m);
	for (int j = 0; j < m; ++j)
		for (int i = 0; i < m; ++i)
			bc.basis(i, j) = columns[j][i];
	if (!is_unimodular(bc.basis))
		throw ComputeError("new basis is not unimodular");
	bc.basis_inv = inverse_unimodular(bc.basis);
	bc.identity = bc.basis == IntMat::identity(m);

	RingSpec spec;
	spec.base = src->base;
	spec.m = m;
	spec.base.action.mats.clear();
	for (int j = 0; j < m; ++j)
		spec.base.action.mats.push_back(
		    src->base.action.matrix_for(to_integer_vec(columns[j])));
	if (!src->trivial_units)
		for (int i = 0; i < m; ++i)
			for (int j = i + 1; j < m; ++j)
			{
				// T_j T_i = c(b_j,b_i) c(b_i,b_j)^{-1} T_i T_j
				Scalar u = src->cocycle(columns[j], columns[i]) *
				           inv(src->cocycle(columns[i], columns[j]));
				if (!u.is_one())
					spec.set_unit(i, j, u);
			}
	bc.dst = make_ring(std::move(spec));
	return bc;
}

// basis adapted to phi: kernel vectors first, beta last (the s variable)
inline BasisChange phi_basis_change(RingPtr const &src, Exp const &phi)
{
	FunctionalBasis fb = canonical_functional_basis(phi);
	std::vector<Exp> cols = fb.kernel;
	cols.push_back(fb.beta);
	return make_basis_change(src, cols);
}

} // namespace torsionnorm
