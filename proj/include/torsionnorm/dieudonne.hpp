#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/ore_tower.hpp"

#include <optional>
#include <vector>

namespace torsionnorm {

// Matrix over the tower field (entries at the top level). Laurent-ring
// matrices embed via slp_to_tower.
struct SkewMatrix
{
	RingPtr ring;
	int rows = 0, cols = 0;
	std::vector<TowerElem> entries;

	SkewMatrix() = default;
	SkewMatrix(RingPtr r, int nr, int nc)
	    : ring(std::move(r)), rows(nr), cols(nc),
	      entries(size_t(nr) * nc, tower_zero(ring, ring->m))
	{}

	TowerElem &at(int i, int j) { return entries[size_t(i) * cols + j]; }
	TowerElem const &at(int i, int j) const
	{
		return entries[size_t(i) * cols + j];
	}
};

// Matrix over the Laurent ring itself (graded representation).
struct SlpMatrix
{
	RingPtr ring;
	int rows = 0, cols = 0;
	std::vector<SkewLaurentPoly> entries;

	SlpMatrix() = default;
	SlpMatrix(RingPtr r, int nr, int nc)
	    : ring(std::move(r)), rows(nr), cols(nc),
	      entries(size_t(nr) * nc, SkewLaurentPoly(ring))
	{}

	SkewLaurentPoly &at(int i, int j)
	{
		return entries[size_t(i) * cols + j];
	}
	SkewLaurentPoly const &at(int i, int j) const
	{
		return entries[size_t(i) * cols + j];
	}
};

inline SkewMatrix embed(SlpMatrix const &m)
{
	SkewMatrix out(m.ring, m.rows, m.cols);
	for (int i = 0; i < m.rows; ++i)
		for (int j = 0; j < m.cols; ++j)
			out.at(i, j) = slp_to_tower(m.at(i, j));
	return out;
}

// Dieudonné determinant representative: ordered pivot product with the
// row-swap sign. Everything downstream is invariant under commutators, so
// no abelianized normal form is kept.
struct DetResult
{
	TowerElem value;
	int sign = 1;
	bool is_zero = false;
};

// Triangularization of a matrix of skew Laurent polynomials in the top
// variable by Euclidean row operations (the elimination over the PID
// K(ker phi)[s^{±1}]): entries stay polynomial in s, only leading
// coefficients one level down are ever inverted. det = sign·(prod pivots).
struct HermiteDet
{
	bool is_zero = false;
	int sign = 1;
	std::vector<OnePoly> pivots;
};

namespace detail {

inline size_t poly_weight(OnePoly const &p)
{
	size_t n = 0;
	for (auto const &[e, c] : p.terms)
		n += term_count(c);
	return n;
}

} // namespace detail

inline HermiteDet hermite_det(SlpMatrix const &b)
{
	if (b.rows != b.cols)
		throw NotSquare("Dieudonné determinant of a non-square matrix");
	int n = b.rows;
	int level = b.ring->m;
	HermiteDet res;
	std::vector<OnePoly> w;
	w.reserve(size_t(n) * n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
		{
			TowerElem e = slp_to_tower(b.at(i, j));
			w.push_back(e.is_zero() ? poly_zero(b.ring, level)
			                        : e.num());
		}
	auto at = [&](int i, int j) -> OnePoly & {
		return w[size_t(i) * n + j];
	};
	for (int j = 0; j < n; ++j)
	{
		// Euclid on the rows below until one nonzero entry survives
		while (true)
		{
			int lone = -1, div = -1;
			long dspan = 0;
			size_t dweight = 0;
			int nonzero = 0;
			for (int i = j; i < n; ++i)
			{
				if (at(i, j).is_zero())
					continue;
				++nonzero;
				long sp = span(at(i, j));
				size_t wt = detail::poly_weight(at(i, j));
				if (div < 0 || sp < dspan ||
				    (sp == dspan && wt < dweight))
				{
					div = i;
					dspan = sp;
					dweight = wt;
				}
				lone = i;
			}
			if (nonzero == 0)
			{
				res.is_zero = true;
				return res;
			}
			if (nonzero == 1)
			{
				if (lone != j)
				{
					for (int l = j; l < n; ++l)
						std::swap(at(lone, l), at(j, l));
					res.sign = -res.sign;
				}
				break;
			}
			for (int i = j; i < n; ++i)
			{
				if (i == div || at(i, j).is_zero())
					continue;
				DivResult d = divide_span(at(i, j), at(div, j));
				// row_i -= q·row_div
				at(i, j) = std::move(d.r);
				for (int l = j + 1; l < n; ++l)
					if (!d.q.is_zero() && !at(div, l).is_zero())
						at(i, l) =
						    at(i, l) - d.q * at(div, l);
			}
		}
		res.pivots.push_back(at(j, j));
	}
	return res;
}

inline DetResult dieudonne_det(SkewMatrix const &b);

inline DetResult dieudonne_det(SlpMatrix const &m)
{
	if (m.ring->fully_commutative())
		return dieudonne_det(embed(m)); // flat fraction arithmetic wins
	HermiteDet h = hermite_det(m);
	DetResult res;
	res.sign = h.sign;
	int level = m.ring->m;
	if (h.is_zero)
	{
		res.is_zero = true;
		res.value = tower_zero(m.ring, level);
		return res;
	}
	OnePoly prod = poly_one(m.ring, level);
	for (auto const &p : h.pivots)
		prod = prod * p;
	res.value = normalized_fraction(std::move(prod), poly_one(m.ring, level));
	if (res.sign < 0)
		res.value = scalar_mul(Scalar(m.ring->k(), -1), res.value);
	return res;
}

// Gaussian elimination over the tower field, for matrices whose entries
// are genuine fractions.
inline DetResult dieudonne_det(SkewMatrix const &b)
{
	if (b.rows != b.cols)
		throw NotSquare("Dieudonné determinant of a non-square matrix");
	int n = b.rows;
	int level = b.ring->m;
	DetResult res;
	res.value = tower_one(b.ring, level);
	if (n == 0)
		return res;
	SkewMatrix w = b;
	std::vector<TowerElem> pivots;
	for (int j = 0; j < n; ++j)
	{
		int pi = -1;
		size_t best = 0;
		for (int i = j; i < n; ++i)
			if (!w.at(i, j).is_zero())
			{
				size_t sz = term_count(w.at(i, j));
				if (pi < 0 || sz < best)
				{
					pi = i;
					best = sz;
				}
			}
		if (pi < 0)
		{
			res.is_zero = true;
			res.value = tower_zero(b.ring, level);
			return res;
		}
		if (pi != j)
		{
			for (int l = j; l < n; ++l)
				std::swap(w.at(pi, l), w.at(j, l));
			res.sign = -res.sign;
		}
		TowerElem const &p = w.at(j, j);
		pivots.push_back(p);
		if (j + 1 == n)
			break;
		TowerElem pinv = inv(p);
		for (int i = j + 1; i < n; ++i)
		{
			if (w.at(i, j).is_zero())
				continue;
			TowerElem factor = w.at(i, j) * pinv;
			for (int l = j; l < n; ++l)
				w.at(i, l) =
				    w.at(i, l) - factor * w.at(j, l);
		}
	}
	for (auto const &p : pivots)
		res.value = res.value * p;
	if (res.sign < 0)
		res.value = scalar_mul(Scalar(b.ring->k(), -1), res.value);
	return res;
}

// det = f_n · f_d^{-1} with both parts in the Laurent ring. For matrices
// over the ring the denominator's support lies in ker(phi).
struct ClearedFraction
{
	SkewLaurentPoly f_n, f_d;
};

inline Exp default_clearing_phi(int m)
{
	Exp phi(m, 0);
	phi[m - 1] = 1;
	return phi;
}

inline ClearedFraction clear_denominators(DetResult const &det,
                                          RingPtr const &ring, Exp const &phi)
{
	if (det.is_zero)
		throw ZeroDeterminant("cannot clear a zero determinant");
	auto [u0, v0] = as_polyfrac(det.value);
	SkewLaurentPoly fu = tower_to_slp(u0), fv = tower_to_slp(v0);

	BasisChange bc = phi_basis_change(ring, phi);
	TowerElem hu = slp_to_tower(bc.to_new(fu));
	TowerElem hv = slp_to_tower(bc.to_new(fv));
	TowerElem h = hu * inv(hv); // canonical over (K[ker phi])(s)
	auto [p, q] = as_polyfrac(h);

	ClearedFraction out;
	out.f_n = bc.to_old(tower_to_slp(p));
	out.f_d = bc.to_old(tower_to_slp(q));

	// contract: f_n f_d^{-1} equals the determinant representative;
	// checked through the ring isomorphism gamma_phi
	TowerElem back = slp_to_tower(bc.to_new(out.f_n)) *
	                 inv(slp_to_tower(bc.to_new(out.f_d)));
	if (!(back == h))
		throw ComputeError(
		    "cleared fraction does not cross-multiply to the determinant");
	return out;
}

inline ClearedFraction clear_denominators(DetResult const &det,
                                          RingPtr const &ring)
{
	return clear_denominators(det, ring, default_clearing_phi(ring->m));
}

// deg_phi(B) = deg_s det(gamma_phi(B)): the independent degree route.
// The triangularization keeps everything polynomial in s, so the degree is
// the plain span sum of the pivots. nullopt = -infinity (zero determinant).
inline std::optional<long> deg_phi(SlpMatrix const &b, Exp const &phi)
{
	BasisChange bc = phi_basis_change(b.ring, phi);
	SlpMatrix m(bc.dst, b.rows, b.cols);
	for (int i = 0; i < b.rows; ++i)
		for (int j = 0; j < b.cols; ++j)
			m.at(i, j) = bc.to_new(b.at(i, j));
	if (m.ring->fully_commutative())
	{
		DetResult det = dieudonne_det(embed(m));
		return det.is_zero ? std::nullopt : deg_frac(det.value);
	}
	HermiteDet h = hermite_det(m);
	if (h.is_zero)
		return std::nullopt;
	long deg = 0;
	for (auto const &p : h.pivots)
		deg += span(p);
	return deg;
}

} // namespace torsionnorm
