#pragma once

#include "torsionnorm/dieudonne.hpp"
#include "torsionnorm/polytope.hpp"

#include <optional>
#include <vector>

namespace torsionnorm {

inline LatticePolytope newton(SkewLaurentPoly const &f)
{
	if (f.is_zero())
		throw ZeroPolynomial("Newton polytope of 0");
	std::vector<QVec> pts;
	for (auto const &[e, c] : f.terms)
		pts.push_back(exp_to_qvec(e));
	return make_polytope(f.ring->m, std::move(pts));
}

// ||phi||_f: width of the support in direction phi; 0 for f = 0.
// Evaluated straight off the support, no hull construction.
inline Rational seminorm(SkewLaurentPoly const &f, QVec const &phi)
{
	if (f.is_zero())
		return 0;
	Rational lo = 0, hi = 0;
	bool first = true;
	for (auto const &[e, c] : f.terms)
	{
		Rational v = 0;
		for (size_t i = 0; i < phi.size(); ++i)
			v += phi[i] * Rational(e[i]);
		if (first)
			lo = hi = v;
		else
		{
			if (v < lo)
				lo = v;
			if (v > hi)
				hi = v;
		}
		first = false;
	}
	return hi - lo;
}

inline Rational seminorm(SkewLaurentPoly const &f, Exp const &phi)
{
	return seminorm(f, exp_to_qvec(phi));
}

// ||phi||_tau = max{0, ||phi||_{f_n} - ||phi||_{f_d}}
inline Rational torsion_seminorm(ClearedFraction const &c, QVec const &phi)
{
	Rational d = seminorm(c.f_n, phi) - seminorm(c.f_d, phi);
	return d > 0 ? d : Rational(0);
}

inline Rational torsion_seminorm(ClearedFraction const &c, Exp const &phi)
{
	return torsion_seminorm(c, exp_to_qvec(phi));
}

inline LatticePolytope minkowski(LatticePolytope const &p,
                                 LatticePolytope const &q, bool difference)
{
	return difference ? minkowski_diff(p, q) : minkowski_sum(p, q);
}

// the seminorm as an object valid for all phi at once
struct SeminormSpec
{
	LatticePolytope num_polytope, den_polytope;

	Rational operator()(QVec const &phi) const
	{
		Rational d =
		    width(num_polytope, phi) - width(den_polytope, phi);
		return d > 0 ? d : Rational(0);
	}
	Rational operator()(Exp const &phi) const
	{
		return (*this)(exp_to_qvec(phi));
	}
};

// Norm ball output. For a degenerate (identically zero) seminorm the ball
// is all of R^m; a non-compact ball is reported through its facets plus
// explicit lineality directions.
struct NormBall
{
	int m = 0;
	bool zero_seminorm = false;
	LatticePolytope dual;                         // centered dual polytope
	bool compact = false;
	std::vector<QVec> vertices;                   // ccw polygon / interval
	std::vector<std::pair<QVec, Rational>> facets; // u·phi <= c
	std::vector<QVec> lineality;
};

namespace detail {

inline LatticePolytope difference_body(LatticePolytope const &p)
{
	return minkowski_sum(p, reflect(p));
}

inline bool contained_in(LatticePolytope const &inner,
                         LatticePolytope const &outer)
{
	for (auto const &v : inner.vertices)
	{
		if (outer.dim == 2)
		{
			auto ccw = polygon_ccw(outer);
			if (ccw.size() >= 3)
			{
				for (size_t i = 0; i < ccw.size(); ++i)
					if (cross2(ccw[i], ccw[(i + 1) % ccw.size()],
					           v) < 0)
						return false;
				continue;
			}
		}
		if (!in_convex_hull(v, outer.vertices))
			return false;
	}
	return true;
}

} // namespace detail

inline NormBall norm_ball_of_polytopes(LatticePolytope const &pn,
                                       LatticePolytope const &pd)
{
	int m = pn.dim;
	if (m > 2)
		throw UnsupportedDimension(
		    "norm ball polygons are produced for m <= 2 only");
	NormBall ball;
	ball.m = m;
	LatticePolytope kn = detail::difference_body(pn);
	LatticePolytope kd = detail::difference_body(pd);
	if (detail::contained_in(kn, kd))
	{
		// ||phi||_{f_n} <= ||phi||_{f_d} everywhere: the clamp flattens
		// the seminorm to 0 and the ball is everything
		ball.zero_seminorm = true;
		ball.dual = make_polytope(m, {QVec(m, Rational(0))});
		for (int i = 0; i < m; ++i)
		{
			QVec e(m, Rational(0));
			e[i] = 1;
			ball.lineality.push_back(std::move(e));
		}
		return ball;
	}
	if (!detail::contained_in(kd, kn))
		throw NotASummand(
		    "clamp is active in some directions only: not a width seminorm");

	LatticePolytope d = minkowski_diff(pn, pd);
	QVec c = centroid(d);
	QVec shift(m);
	for (int i = 0; i < m; ++i)
		shift[i] = -Rational(round_half_down(c[i]));
	ball.dual = translate(d, shift);

	LatticePolytope k = detail::difference_body(ball.dual);
	if (k.vertices.size() == 1)
	{
		ball.zero_seminorm = true; // dual degenerated to a point
		for (int i = 0; i < m; ++i)
		{
			QVec e(m, Rational(0));
			e[i] = 1;
			ball.lineality.push_back(std::move(e));
		}
		return ball;
	}
	if (m == 1)
	{
		Rational len = k.vertices.back()[0]; // k = [-len, len]
		ball.compact = true;
		ball.vertices = {{Rational(-1) / len}, {Rational(1) / len}};
		ball.facets = {{{Rational(1)}, Rational(1) / len},
		               {{Rational(-1)}, Rational(1) / len}};
		return ball;
	}
	auto ccw = polygon_ccw(k);
	if (ccw.size() == 2)
	{
		// K = [-u, u]: the ball is the slab |phi·u| <= 1
		QVec u = ccw[1];
		ball.compact = false;
		ball.facets = {{u, Rational(1)}, {-u, Rational(1)}};
		ball.lineality.push_back(QVec{-u[1], u[0]});
		return ball;
	}
	ball.compact = true;
	size_t n = ccw.size();
	for (size_t i = 0; i < n; ++i)
	{
		ball.facets.push_back({ccw[i], Rational(1)});
		QVec v;
		if (!detail::line_intersect(ccw[i], Rational(1),
		                            ccw[(i + 1) % n], Rational(1), v))
			throw ComputeError("degenerate polar edge");
		ball.vertices.push_back(std::move(v));
	}
	return ball;
}

inline NormBall norm_ball(ClearedFraction const &c)
{
	return norm_ball_of_polytopes(newton(c.f_n), newton(c.f_d));
}

inline SeminormSpec seminorm_spec(ClearedFraction const &c)
{
	return SeminormSpec{newton(c.f_n), newton(c.f_d)};
}

} // namespace torsionnorm
