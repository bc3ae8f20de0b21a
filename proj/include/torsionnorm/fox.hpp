#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/norms.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace torsionnorm {

// Word in the free group: signed 1-based generator indices, `+i` for g_i
// and `-i` for g_i^{-1}. Words are kept as written (no free reduction);
// nothing downstream needs reduced words.
struct FreeWord
{
	std::vector<int> letters;

	bool operator==(FreeWord const &o) const { return letters == o.letters; }
};

inline FreeWord word_inverse(FreeWord const &w)
{
	FreeWord r;
	for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
		r.letters.push_back(-*it);
	return r;
}

inline FreeWord word_concat(FreeWord const &a, FreeWord const &b)
{
	FreeWord r = a;
	r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
	return r;
}

inline FreeWord word_conjugate(FreeWord const &w, int letter)
{
	FreeWord r;
	r.letters.push_back(letter);
	r.letters.insert(r.letters.end(), w.letters.begin(), w.letters.end());
	r.letters.push_back(-letter);
	return r;
}

// letter syntax: 'a'..'z' are generators, 'A'..'Z' their inverses,
// whitespace ignored
inline FreeWord parse_word(std::string const &s, int ngens)
{
	FreeWord w;
	for (size_t col = 0; col < s.size(); ++col)
	{
		char c = s[col];
		if (c == ' ' || c == '\t')
			continue;
		int idx;
		int sign;
		if (c >= 'a' && c <= 'z')
		{
			idx = c - 'a' + 1;
			sign = 1;
		}
		else if (c >= 'A' && c <= 'Z')
		{
			idx = c - 'A' + 1;
			sign = -1;
		}
		else
			throw ParseError("bad letter '" + std::string(1, c) +
			                 "' at column " + std::to_string(col + 1));
		if (idx > ngens)
			throw ParseError(
			    "letter '" + std::string(1, c) + "' at column " +
			    std::to_string(col + 1) +
			    " names a generator beyond the presentation");
		w.letters.push_back(sign * idx);
	}
	return w;
}

inline std::string word_to_string(FreeWord const &w)
{
	std::string s;
	for (int l : w.letters)
		s += char((l > 0 ? 'a' : 'A') + std::abs(l) - 1);
	return s.empty() ? "1" : s;
}

struct Presentation
{
	int ngens = 0;
	std::vector<FreeWord> relators;

	void validate() const
	{
		if (ngens < 1 || ngens > 26)
			throw ValidationError("presentations support 1..26 generators");
		for (auto const &r : relators)
			for (int l : r.letters)
				if (l == 0 || std::abs(l) > ngens)
					throw ValidationError(
					    "relator letter out of range");
	}
	bool deficiency_one() const
	{
		return (int)relators.size() == ngens - 1;
	}
};

// exponent-sum matrix, ngens x nrelators
inline IntMat abelianized_relator_matrix(Presentation const &p)
{
	IntMat e(p.ngens, (int)p.relators.size());
	for (int j = 0; j < (int)p.relators.size(); ++j)
		for (int l : p.relators[j].letters)
			e(std::abs(l) - 1, j) += (l > 0 ? 1 : -1);
	return e;
}

// psi: generators -> Z^m = free part of H_1, via the Smith form
inline std::vector<Exp> abelianization_map(Presentation const &p, int &m_out)
{
	IntMat e = abelianized_relator_matrix(p);
	SmithForm s = smith_form(e);
	std::vector<int> free_rows;
	int diag = std::min(e.rows, e.cols);
	for (int i = 0; i < e.rows; ++i)
		if (i >= diag || s.d(i, i) == 0)
			free_rows.push_back(i);
	m_out = (int)free_rows.size();
	std::vector<Exp> psi(p.ngens, Exp(m_out, 0));
	for (int g = 0; g < p.ngens; ++g)
		for (int r = 0; r < m_out; ++r)
			psi[g][r] = (long)s.u(free_rows[r], g);
	return psi;
}

// ---- small exact matrices over the base field K ----

struct ScalarMat
{
	int n = 0;
	std::vector<Scalar> a;

	ScalarMat() = default;
	ScalarMat(int d, int k) : n(d), a(size_t(d) * d, Scalar(k)) {}

	static ScalarMat identity(int d, int k)
	{
		ScalarMat m(d, k);
		for (int i = 0; i < d; ++i)
			m.at(i, i) = Scalar(k, 1);
		return m;
	}
	Scalar &at(int i, int j) { return a[size_t(i) * n + j]; }
	Scalar const &at(int i, int j) const { return a[size_t(i) * n + j]; }
};

inline ScalarMat inverse(ScalarMat const &m)
{
	int n = m.n;
	int k = n > 0 ? m.a[0].nvars() : 0;
	ScalarMat w = m, r = ScalarMat::identity(n, k);
	for (int c = 0; c < n; ++c)
	{
		int piv = -1;
		for (int i = c; i < n; ++i)
			if (!w.at(i, c).is_zero())
			{
				piv = i;
				break;
			}
		if (piv < 0)
			throw InvalidRep("unit matrix A_g is singular over K");
		if (piv != c)
			for (int j = 0; j < n; ++j)
			{
				std::swap(w.at(piv, j), w.at(c, j));
				std::swap(r.at(piv, j), r.at(c, j));
			}
		Scalar d = inv(w.at(c, c));
		for (int j = 0; j < n; ++j)
		{
			w.at(c, j) *= d;
			r.at(c, j) *= d;
		}
		for (int i = 0; i < n; ++i)
		{
			if (i == c || w.at(i, c).is_zero())
				continue;
			Scalar f = w.at(i, c);
			for (int j = 0; j < n; ++j)
			{
				w.at(i, j) -= f * w.at(c, j);
				r.at(i, j) -= f * r.at(c, j);
			}
		}
	}
	return r;
}

// psi-compatible representation g -> A_g t^{psi(g)} with A_g in GL(K, d)
struct CompatibleRep
{
	RingPtr ring;
	int d = 1;
	std::vector<Exp> psi;         // per generator
	std::vector<ScalarMat> units; // A_g per generator
};

inline SlpMatrix rep_letter(CompatibleRep const &rep, int letter)
{
	int g = std::abs(letter) - 1;
	auto const &R = *rep.ring;
	SlpMatrix m(rep.ring, rep.d, rep.d);
	if (letter > 0)
	{
		for (int i = 0; i < rep.d; ++i)
			for (int j = 0; j < rep.d; ++j)
				if (!rep.units[g].at(i, j).is_zero())
					m.at(i, j) = slp_monomial(
					    rep.ring, rep.units[g].at(i, j),
					    rep.psi[g]);
		return m;
	}
	// (A t^alpha)^{-1} = w · gamma_{-alpha}(A^{-1}) t^{-alpha}
	Exp alpha = rep.psi[g];
	ScalarMat ai = inverse(rep.units[g]);
	Scalar w = R.inverse_unit(alpha);
	for (int i = 0; i < rep.d; ++i)
		for (int j = 0; j < rep.d; ++j)
			if (!ai.at(i, j).is_zero())
				m.at(i, j) = slp_monomial(
				    rep.ring, w * R.twist(-alpha, ai.at(i, j)),
				    -alpha);
	return m;
}

inline SlpMatrix slp_identity(RingPtr const &ring, int d)
{
	SlpMatrix m(ring, d, d);
	for (int i = 0; i < d; ++i)
		m.at(i, i) = slp_one(ring);
	return m;
}

inline SlpMatrix operator*(SlpMatrix const &x, SlpMatrix const &y)
{
	SlpMatrix r(x.ring, x.rows, y.cols);
	for (int i = 0; i < x.rows; ++i)
		for (int l = 0; l < x.cols; ++l)
		{
			if (x.at(i, l).is_zero())
				continue;
			for (int j = 0; j < y.cols; ++j)
				if (!y.at(l, j).is_zero())
					r.at(i, j) += x.at(i, l) * y.at(l, j);
		}
	return r;
}

inline SlpMatrix operator+(SlpMatrix const &x, SlpMatrix const &y)
{
	SlpMatrix r = x;
	for (size_t i = 0; i < r.entries.size(); ++i)
		r.entries[i] += y.entries[i];
	return r;
}

inline SlpMatrix operator-(SlpMatrix const &x, SlpMatrix const &y)
{
	SlpMatrix r = x;
	for (size_t i = 0; i < r.entries.size(); ++i)
		r.entries[i] -= y.entries[i];
	return r;
}

inline SlpMatrix rep_word(CompatibleRep const &rep, FreeWord const &w)
{
	SlpMatrix m = slp_identity(rep.ring, rep.d);
	for (int l : w.letters)
		m = m * rep_letter(rep, l);
	return m;
}

inline bool is_identity(SlpMatrix const &m)
{
	for (int i = 0; i < m.rows; ++i)
		for (int j = 0; j < m.cols; ++j)
		{
			SkewLaurentPoly const &e = m.at(i, j);
			if (i == j ? !(e == slp_one(m.ring)) : !e.is_zero())
				return false;
		}
	return true;
}

// Representation check is mandatory: every relator must map to the
// identity, and psi must kill the abelianized relators.
inline void validate_rep(Presentation const &p, CompatibleRep const &rep)
{
	p.validate();
	if ((int)rep.psi.size() != p.ngens ||
	    (int)rep.units.size() != p.ngens)
		throw InvalidRep("representation data does not match generators");
	int m = rep.ring->m;
	for (auto const &e : rep.psi)
		if ((int)e.size() != m)
			throw InvalidRep("psi image has wrong rank");
	for (auto const &r : p.relators)
	{
		Exp s(m, 0);
		for (int l : r.letters)
		{
			Exp const &pg = rep.psi[std::abs(l) - 1];
			for (int i = 0; i < m; ++i)
				s[i] += (l > 0 ? 1 : -1) * pg[i];
		}
		if (!is_zero_exp(s))
			throw InvalidRep("psi does not kill relator " +
			                 word_to_string(r));
	}
	for (auto const &r : p.relators)
		if (!is_identity(rep_word(rep, r)))
			throw InvalidRep("relator " + word_to_string(r) +
			                 " does not map to the identity");
}

// the abelianization representation over Q[t_1^{±1},...,t_m^{±1}]
inline CompatibleRep abelianization_rep(Presentation const &p)
{
	p.validate();
	int m = 0;
	auto psi = abelianization_map(p, m);
	if (m == 0)
		throw ValidationError(
		    "first Betti number is zero: no abelianization norm");
	CompatibleRep rep;
	rep.ring = make_ring(RingSpec::commutative(m));
	rep.d = 1;
	rep.psi = std::move(psi);
	rep.units.assign(p.ngens, ScalarMat::identity(1, 0));
	validate_rep(p, rep);
	return rep;
}

// Metabelian data: a map to Z^k x| Z^m. Each generator goes to
// x^{u_g} t^{psi(g)}; the t_i act on the x-lattice by the action matrices.
// An optional table of commutation units t_j t_i = u·t_i t_j may be given.
inline CompatibleRep metabelian_rep(
    Presentation const &p, ActionData action, std::vector<Exp> psi,
    std::vector<Mono> const &unit_exponents,
    std::vector<std::tuple<int, int, Scalar>> const &commutation_units = {})
{
	p.validate();
	action.validate();
	int m = action.rank(), k = action.k;
	BaseField base;
	base.k = k;
	base.action = std::move(action);
	RingSpec spec(std::move(base), m);
	for (auto const &[i, j, u] : commutation_units)
		spec.set_unit(i, j, u);
	CompatibleRep rep;
	rep.ring = make_ring(std::move(spec));
	rep.d = 1;
	rep.psi = std::move(psi);
	for (auto const &u : unit_exponents)
	{
		ScalarMat a(1, k);
		a.at(0, 0) = scalar_monomial(k, u, 1);
		rep.units.push_back(std::move(a));
	}
	validate_rep(p, rep);
	return rep;
}

// ---- Fox calculus ----

// free derivative: d(uv) = du + u·dv, d(g)/dg = 1, d(g^{-1})/dg = -g^{-1}
inline std::vector<std::pair<int, FreeWord>> fox_derivative(FreeWord const &w,
                                                            int gen)
{
	std::vector<std::pair<int, FreeWord>> out;
	FreeWord prefix;
	for (int l : w.letters)
	{
		if (l == gen)
			out.push_back({1, prefix});
		else if (l == -gen)
		{
			FreeWord t = prefix;
			t.letters.push_back(-gen);
			out.push_back({-1, std::move(t)});
		}
		prefix.letters.push_back(l);
	}
	return out;
}

inline SlpMatrix rep_fox(CompatibleRep const &rep, FreeWord const &w, int gen)
{
	SlpMatrix sum(rep.ring, rep.d, rep.d);
	SlpMatrix prefix = slp_identity(rep.ring, rep.d);
	for (int l : w.letters)
	{
		if (l == gen)
			sum = sum + prefix;
		else if (l == -gen)
		{
			SlpMatrix t = prefix * rep_letter(rep, -gen);
			sum = sum - t;
		}
		prefix = prefix * rep_letter(rep, l);
	}
	return sum;
}

// the (n-1)d x nd boundary matrix with (j,i) block rho(dr_j / dg_i)
inline SlpMatrix alexander_matrix(Presentation const &p,
                                  CompatibleRep const &rep)
{
	int n = p.ngens, r = (int)p.relators.size(), d = rep.d;
	SlpMatrix a(rep.ring, r * d, n * d);
	for (int j = 0; j < r; ++j)
		for (int i = 0; i < n; ++i)
		{
			SlpMatrix block = rep_fox(rep, p.relators[j], i + 1);
			for (int bi = 0; bi < d; ++bi)
				for (int bj = 0; bj < d; ++bj)
					a.at(j * d + bi, i * d + bj) =
					    block.at(bi, bj);
		}
	return a;
}

// ---- Reidemeister torsion ----

struct TorsionResult
{
	bool zero = false;          // tau = 0 (homology is not K-acyclic)
	ClearedFraction cleared;    // tau = f_n f_d^{-1}, up to ±rho(pi_1)
	TowerElem value;            // the tower-field representative
	int pivot = -1;             // generator h whose column was deleted
};

namespace detail {

inline SlpMatrix one_minus_rho(CompatibleRep const &rep, int gen)
{
	return slp_identity(rep.ring, rep.d) -
	       rep_letter(rep, gen + 1);
}

inline bool pivot_ok(CompatibleRep const &rep, int gen, DetResult &det_out)
{
	det_out = dieudonne_det(one_minus_rho(rep, gen));
	return !det_out.is_zero;
}

} // namespace detail

inline TorsionResult torsion(Presentation const &p, CompatibleRep const &rep,
                             std::optional<int> pivot = std::nullopt)
{
	validate_rep(p, rep);
	if (!p.deficiency_one())
		throw NotDeficiencyOne(
		    "torsion needs exactly n-1 relators for n generators");

	int h = -1;
	DetResult hdet;
	if (pivot)
	{
		if (*pivot < 0 || *pivot >= p.ngens)
			throw NoPivotGenerator("pivot generator out of range");
		if (!detail::pivot_ok(rep, *pivot, hdet))
			throw NoPivotGenerator(
			    "id - rho(h) is singular for the requested pivot");
		h = *pivot;
	}
	else
	{
		for (int g = 0; g < p.ngens && h < 0; ++g)
			if (is_zero_exp(rep.psi[g]) &&
			    detail::pivot_ok(rep, g, hdet))
				h = g;
		for (int g = 0; g < p.ngens && h < 0; ++g)
			if (detail::pivot_ok(rep, g, hdet))
				h = g;
		if (h < 0)
			throw NoPivotGenerator(
			    "no generator has id - rho(h) invertible");
	}

	int n = p.ngens, d = rep.d;
	SlpMatrix a = alexander_matrix(p, rep);
	SlpMatrix b2(rep.ring, (n - 1) * d, (n - 1) * d);
	for (int i = 0; i < (n - 1) * d; ++i)
		for (int j = 0, cj = 0; j < n * d; ++j)
		{
			if (j / d == h)
				continue;
			b2.at(i, cj++) = a.at(i, j);
		}

	TorsionResult res;
	res.pivot = h;
	DetResult bdet = dieudonne_det(b2);
	if (bdet.is_zero)
	{
		res.zero = true;
		res.value = tower_zero(rep.ring, rep.ring->m);
		return res;
	}
	res.value = bdet.value * inv(hdet.value);
	DetResult tau{res.value, 1, false};
	res.cleared = clear_denominators(tau, rep.ring);
	return res;
}

// delta-bar via the seminorm of the cleared fraction (the width route)
inline std::optional<long> delta_bar(TorsionResult const &t, Exp const &phi)
{
	canonical_functional_basis(phi); // rejects phi = 0
	if (t.zero)
		return std::nullopt;
	Rational v = torsion_seminorm(t.cleared, phi);
	return (long)numerator(v); // integral for integral phi
}

inline std::optional<long> delta_bar(Presentation const &p,
                                     CompatibleRep const &rep, Exp const &phi)
{
	return delta_bar(torsion(p, rep), phi);
}

// delta-bar via gamma_phi degrees (the elimination route): d·max{0, deg}
inline std::optional<long> delta_bar_via_deg(Presentation const &p,
                                             CompatibleRep const &rep,
                                             Exp const &phi,
                                             TorsionResult const &t)
{
	FunctionalBasis fb = canonical_functional_basis(phi);
	if (t.zero)
		return std::nullopt;
	int n = p.ngens, d = rep.d;
	SlpMatrix a = alexander_matrix(p, rep);
	SlpMatrix b2(rep.ring, (n - 1) * d, (n - 1) * d);
	for (int i = 0; i < (n - 1) * d; ++i)
		for (int j = 0, cj = 0; j < n * d; ++j)
		{
			if (j / d == t.pivot)
				continue;
			b2.at(i, cj++) = a.at(i, j);
		}
	auto degb = deg_phi(b2, phi);
	auto degh = deg_phi(detail::one_minus_rho(rep, t.pivot), phi);
	if (!degb || !degh)
		return std::nullopt;
	long deg = *degb - *degh;
	return fb.d * std::max(0L, deg);
}

inline std::optional<long> delta_bar_via_deg(Presentation const &p,
                                             CompatibleRep const &rep,
                                             Exp const &phi)
{
	return delta_bar_via_deg(p, rep, phi, torsion(p, rep));
}

struct HarveyNorm
{
	SeminormSpec spec;
	std::optional<NormBall> ball; // present for m <= 2
};

inline HarveyNorm harvey_norm(TorsionResult const &t, int m)
{
	if (t.zero)
		throw ZeroTorsion("torsion vanishes: delta-bar is -infinity");
	HarveyNorm h;
	h.spec = seminorm_spec(t.cleared);
	if (m <= 2)
		h.ball = norm_ball(t.cleared);
	return h;
}

inline HarveyNorm harvey_norm(Presentation const &p, CompatibleRep const &rep)
{
	return harvey_norm(torsion(p, rep), rep.ring->m);
}

} // namespace torsionnorm
