#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/rational.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace torsionnorm {

using QVec = std::vector<Rational>;

inline Rational dot(QVec const &a, QVec const &b)
{
	Rational s = 0;
	for (size_t i = 0; i < a.size(); ++i)
		s += a[i] * b[i];
	return s;
}

inline QVec operator+(QVec const &a, QVec const &b)
{
	QVec r(a.size());
	for (size_t i = 0; i < a.size(); ++i)
		r[i] = a[i] + b[i];
	return r;
}
inline QVec operator-(QVec const &a, QVec const &b)
{
	QVec r(a.size());
	for (size_t i = 0; i < a.size(); ++i)
		r[i] = a[i] - b[i];
	return r;
}
inline QVec operator-(QVec const &a)
{
	QVec r(a.size());
	for (size_t i = 0; i < a.size(); ++i)
		r[i] = -a[i];
	return r;
}

namespace detail {

// Exact phase-1 simplex: is b a convex combination of the given points?
inline bool in_convex_hull(QVec const &p, std::vector<QVec> const &pts)
{
	if (pts.empty())
		return false;
	int d = (int)p.size();
	int rows = d + 1, n = (int)pts.size();
	// constraints: sum lambda_i q_i = p, sum lambda_i = 1, lambda >= 0
	std::vector<std::vector<Rational>> t(
	    rows, std::vector<Rational>(n + rows + 1, 0));
	for (int i = 0; i < rows; ++i)
	{
		for (int j = 0; j < n; ++j)
			t[i][j] = i < d ? pts[j][i] : Rational(1);
		t[i][n + rows] = i < d ? p[i] : Rational(1);
		if (t[i][n + rows] < 0)
			for (auto &x : t[i])
				x = -x;
		t[i][n + i] = 1; // artificial
	}
	std::vector<int> basis(rows);
	for (int i = 0; i < rows; ++i)
		basis[i] = n + i;
	// objective: minimize sum of artificials; reduced costs = column sums
	std::vector<Rational> obj(n + rows + 1, 0);
	for (int j = 0; j <= n + rows; ++j)
		for (int i = 0; i < rows; ++i)
			obj[j] += t[i][j];
	for (int i = 0; i < rows; ++i)
		obj[n + i] = 0;

	while (true)
	{
		int enter = -1; // Bland: smallest index with positive cost
		for (int j = 0; j < n + rows; ++j)
			if (obj[j] > 0)
			{
				enter = j;
				break;
			}
		if (enter < 0)
			break;
		int leave = -1;
		Rational best = 0;
		for (int i = 0; i < rows; ++i)
			if (t[i][enter] > 0)
			{
				Rational ratio = t[i][n + rows] / t[i][enter];
				if (leave < 0 || ratio < best ||
				    (ratio == best && basis[i] < basis[leave]))
				{
					leave = i;
					best = ratio;
				}
			}
		if (leave < 0)
			return false; // unbounded cannot happen; defensive exit
		Rational piv = t[leave][enter];
		for (auto &x : t[leave])
			x /= piv;
		for (int i = 0; i < rows; ++i)
			if (i != leave && t[i][enter] != 0)
			{
				Rational f = t[i][enter];
				for (int j = 0; j <= n + rows; ++j)
					t[i][j] -= f * t[leave][j];
			}
		if (obj[enter] != 0)
		{
			Rational f = obj[enter];
			for (int j = 0; j <= n + rows; ++j)
				obj[j] -= f * t[leave][j];
		}
		basis[leave] = enter;
	}
	return obj[n + rows] == 0;
}

inline Rational cross2(QVec const &o, QVec const &a, QVec const &b)
{
	return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// counterclockwise hull, starting at the lexicographically smallest vertex
inline std::vector<QVec> hull2d(std::vector<QVec> pts)
{
	std::sort(pts.begin(), pts.end());
	pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
	int n = (int)pts.size();
	if (n <= 2)
		return pts;
	std::vector<QVec> h(2 * n);
	int k = 0;
	for (int i = 0; i < n; ++i) // lower
	{
		while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0)
			--k;
		h[k++] = pts[i];
	}
	for (int i = n - 2, lo = k + 1; i >= 0; --i) // upper
	{
		while (k >= lo && cross2(h[k - 2], h[k - 1], pts[i]) <= 0)
			--k;
		h[k++] = pts[i];
	}
	h.resize(k - 1);
	return h;
}

} // namespace detail

// Convex polytope given by its exact extreme-point set (lex-sorted, so
// equal polytopes compare equal).
struct LatticePolytope
{
	int dim = 0;
	std::vector<QVec> vertices;

	bool empty() const { return vertices.empty(); }
	bool is_point() const { return vertices.size() == 1; }

	bool operator==(LatticePolytope const &o) const
	{
		return dim == o.dim && vertices == o.vertices;
	}

	bool integral() const
	{
		for (auto const &v : vertices)
			for (auto const &c : v)
				if (!is_integer(c))
					return false;
		return true;
	}
};

inline LatticePolytope make_polytope(int dim, std::vector<QVec> pts)
{
	std::sort(pts.begin(), pts.end());
	pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
	LatticePolytope p;
	p.dim = dim;
	if (pts.empty())
		return p;
	if (dim <= 1 || pts.size() <= 2)
	{
		if (dim == 1 && pts.size() > 2)
			pts = {pts.front(), pts.back()};
		p.vertices = std::move(pts);
		return p;
	}
	if (dim == 2)
	{
		p.vertices = detail::hull2d(std::move(pts));
		std::sort(p.vertices.begin(), p.vertices.end());
		return p;
	}
	for (size_t i = 0; i < pts.size(); ++i)
	{
		std::vector<QVec> others;
		for (size_t j = 0; j < pts.size(); ++j)
			if (j != i)
				others.push_back(pts[j]);
		if (!detail::in_convex_hull(pts[i], others))
			p.vertices.push_back(pts[i]);
	}
	return p;
}

inline QVec exp_to_qvec(std::vector<long> const &e)
{
	QVec v(e.size());
	for (size_t i = 0; i < e.size(); ++i)
		v[i] = e[i];
	return v;
}

// support function and width in direction phi
inline Rational support_value(LatticePolytope const &p, QVec const &phi)
{
	Rational best = 0;
	bool first = true;
	for (auto const &v : p.vertices)
	{
		Rational x = dot(phi, v);
		if (first || x > best)
			best = x;
		first = false;
	}
	return best;
}

inline Rational width(LatticePolytope const &p, QVec const &phi)
{
	if (p.empty())
		return 0;
	return support_value(p, phi) + support_value(p, -phi);
}

inline LatticePolytope minkowski_sum(LatticePolytope const &p,
                                     LatticePolytope const &q)
{
	if (p.dim != q.dim)
		throw UnsupportedDimension("Minkowski sum of mixed dimensions");
	if (p.empty() || q.empty())
		return LatticePolytope{p.dim, {}};
	std::vector<QVec> pts;
	pts.reserve(p.vertices.size() * q.vertices.size());
	for (auto const &a : p.vertices)
		for (auto const &b : q.vertices)
			pts.push_back(a + b);
	return make_polytope(p.dim, std::move(pts));
}

inline LatticePolytope translate(LatticePolytope const &p, QVec const &by)
{
	LatticePolytope r;
	r.dim = p.dim;
	for (auto const &v : p.vertices)
		r.vertices.push_back(v + by);
	std::sort(r.vertices.begin(), r.vertices.end());
	return r;
}

inline LatticePolytope reflect(LatticePolytope const &p)
{
	LatticePolytope r;
	r.dim = p.dim;
	for (auto const &v : p.vertices)
		r.vertices.push_back(-v);
	std::sort(r.vertices.begin(), r.vertices.end());
	return r;
}

// counterclockwise boundary walk of a 2d polytope
inline std::vector<QVec> polygon_ccw(LatticePolytope const &p)
{
	return detail::hull2d(p.vertices);
}

namespace detail {

// primitive integer outward normals of a ccw polygon's edges
inline std::vector<QVec> edge_normals(std::vector<QVec> const &ccw)
{
	std::vector<QVec> out;
	int n = (int)ccw.size();
	if (n < 2)
		return out;
	int edges = (n == 2) ? 1 : n; // a segment has two antipodal normals
	for (int i = 0; i < edges; ++i)
	{
		QVec d = ccw[(i + 1) % n] - ccw[i];
		QVec nrm{d[1], -d[0]};
		// clear to a primitive integer vector
		Integer l = lcm(denominator(nrm[0]), denominator(nrm[1]));
		Integer a = numerator(nrm[0]) * (l / denominator(nrm[0]));
		Integer b = numerator(nrm[1]) * (l / denominator(nrm[1]));
		Integer g = gcd(abs(a), abs(b));
		out.push_back({Rational(a / g), Rational(b / g)});
		if (n == 2)
			out.push_back({Rational(-a / g), Rational(-b / g)});
	}
	return out;
}

inline bool line_intersect(QVec const &n1, Rational const &c1, QVec const &n2,
                           Rational const &c2, QVec &out)
{
	Rational det = n1[0] * n2[1] - n1[1] * n2[0];
	if (det == 0)
		return false;
	out = {(c1 * n2[1] - c2 * n1[1]) / det,
	       (n1[0] * c2 - n2[0] * c1) / det};
	return true;
}

} // namespace detail

// Minkowski difference (erosion) with the exact round-trip check R + Q = P.
// Supported in ambient dimension <= 2, which covers every norm-ball use.
inline LatticePolytope minkowski_diff(LatticePolytope const &p,
                                      LatticePolytope const &q)
{
	if (p.dim != q.dim)
		throw UnsupportedDimension("Minkowski difference of mixed dimensions");
	if (p.empty() || q.empty())
		throw NotASummand("Minkowski difference with empty polytope");
	LatticePolytope r;
	r.dim = p.dim;
	if (q.is_point())
	{
		r = translate(p, -q.vertices[0]);
	}
	else if (p.dim == 1)
	{
		Rational a = p.vertices.front()[0], b = p.vertices.back()[0];
		Rational c = q.vertices.front()[0], d = q.vertices.back()[0];
		if (b - a < d - c)
			throw NotASummand("erosion is empty");
		r.vertices = {{a - c}};
		if (b - d != a - c)
			r.vertices.push_back({b - d});
	}
	else if (p.dim == 2)
	{
		auto ccwp = polygon_ccw(p), ccwq = polygon_ccw(q);
		std::vector<QVec> normals = detail::edge_normals(ccwp);
		for (auto &n : detail::edge_normals(ccwq))
			normals.push_back(n);
		if (normals.empty()) // both are points
		{
			r.vertices = {p.vertices[0] - q.vertices[0]};
		}
		else
		{
			std::sort(normals.begin(), normals.end());
			normals.erase(std::unique(normals.begin(), normals.end()),
			              normals.end());
			std::vector<Rational> offs;
			for (auto const &n : normals)
				offs.push_back(support_value(p, n) -
				               support_value(q, n));
			std::vector<QVec> cands;
			for (size_t i = 0; i < normals.size(); ++i)
				for (size_t j = i + 1; j < normals.size(); ++j)
				{
					QVec x;
					if (!detail::line_intersect(normals[i], offs[i],
					                            normals[j], offs[j], x))
						continue;
					bool ok = true;
					for (size_t l = 0; l < normals.size() && ok; ++l)
						ok = dot(normals[l], x) <= offs[l];
					if (ok)
						cands.push_back(std::move(x));
				}
			r = make_polytope(2, std::move(cands));
			if (r.empty())
				throw NotASummand("erosion is empty");
		}
	}
	else
	{
		throw UnsupportedDimension(
		    "Minkowski difference implemented for dimension <= 2");
	}
	if (!(minkowski_sum(r, q) == p))
		throw NotASummand("subtrahend is not a Minkowski summand");
	return r;
}

inline QVec centroid(LatticePolytope const &p)
{
	QVec c(p.dim, Rational(0));
	for (auto const &v : p.vertices)
		for (int i = 0; i < p.dim; ++i)
			c[i] += v[i];
	for (int i = 0; i < p.dim; ++i)
		c[i] /= Rational((long)p.vertices.size());
	return c;
}

} // namespace torsionnorm
