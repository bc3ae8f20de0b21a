#pragma once

#include "torsionnorm/errors.hpp"
#include "torsionnorm/rational.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace torsionnorm {

// Dense integer matrices, sized for lattice bookkeeping (ranks <= ~8):
// exponent actions, abelianizations, kernel bases. Exact throughout.
struct IntMat
{
	int rows = 0, cols = 0;
	std::vector<Integer> a; // row-major

	IntMat() = default;
	IntMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}

	static IntMat identity(int n)
	{
		IntMat m(n, n);
		for (int i = 0; i < n; ++i)
			m(i, i) = 1;
		return m;
	}

	Integer &operator()(int i, int j) { return a[size_t(i) * cols + j]; }
	Integer const &operator()(int i, int j) const
	{
		return a[size_t(i) * cols + j];
	}

	bool operator==(IntMat const &o) const
	{
		return rows == o.rows && cols == o.cols && a == o.a;
	}
};

inline IntMat operator*(IntMat const &x, IntMat const &y)
{
	if (x.cols != y.rows)
		throw ComputeError("integer matrix shape mismatch");
	IntMat r(x.rows, y.cols);
	for (int i = 0; i < x.rows; ++i)
		for (int k = 0; k < x.cols; ++k)
		{
			if (x(i, k) == 0)
				continue;
			for (int j = 0; j < y.cols; ++j)
				r(i, j) += x(i, k) * y(k, j);
		}
	return r;
}

inline std::vector<Integer> operator*(IntMat const &m,
                                      std::vector<Integer> const &v)
{
	if (m.cols != (int)v.size())
		throw ComputeError("integer matrix/vector shape mismatch");
	std::vector<Integer> r(m.rows, 0);
	for (int i = 0; i < m.rows; ++i)
		for (int j = 0; j < m.cols; ++j)
			r[i] += m(i, j) * v[j];
	return r;
}

inline Integer det(IntMat const &m)
{
	if (m.rows != m.cols)
		throw NotSquare("determinant of non-square integer matrix");
	int n = m.rows;
	if (n == 0)
		return 1;
	// fraction-free Gaussian elimination (Bareiss)
	IntMat w = m;
	Integer prev = 1;
	int sign = 1;
	for (int k = 0; k < n - 1; ++k)
	{
		if (w(k, k) == 0)
		{
			int p = -1;
			for (int i = k + 1; i < n; ++i)
				if (w(i, k) != 0)
				{
					p = i;
					break;
				}
			if (p < 0)
				return 0;
			for (int j = 0; j < n; ++j)
				std::swap(w(k, j), w(p, j));
			sign = -sign;
		}
		for (int i = k + 1; i < n; ++i)
			for (int j = k + 1; j < n; ++j)
				w(i, j) = (w(i, j) * w(k, k) - w(i, k) * w(k, j)) / prev;
		prev = w(k, k);
	}
	return sign * w(n - 1, n - 1);
}

// Exact inverse of a matrix with det = ±1 (adjugate / det).
inline IntMat inverse_unimodular(IntMat const &m)
{
	Integer d = det(m);
	if (d != 1 && d != -1)
		throw ComputeError("matrix is not unimodular");
	int n = m.rows;
	IntMat adj(n, n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
		{
			IntMat minor(n - 1, n - 1);
			for (int r = 0, rr = 0; r < n; ++r)
			{
				if (r == i)
					continue;
				for (int c = 0, cc = 0; c < n; ++c)
				{
					if (c == j)
						continue;
					minor(rr, cc++) = m(r, c);
				}
				++rr;
			}
			Integer cof = det(minor);
			if ((i + j) % 2)
				cof = -cof;
			adj(j, i) = cof * d; // d = d^{-1} for d = ±1
		}
	return adj;
}

inline IntMat pow(IntMat const &m, long e)
{
	if (m.rows != m.cols)
		throw NotSquare("power of non-square integer matrix");
	IntMat base = e >= 0 ? m : inverse_unimodular(m);
	long k = e >= 0 ? e : -e;
	IntMat r = IntMat::identity(m.rows);
	while (k > 0)
	{
		if (k & 1)
			r = r * base;
		base = base * base;
		k >>= 1;
	}
	return r;
}

inline bool is_unimodular(IntMat const &m)
{
	if (m.rows != m.cols)
		return false;
	Integer d = det(m);
	return d == 1 || d == -1;
}

// Smith normal form: U * A * V = D diagonal, U and V unimodular.
struct SmithForm
{
	IntMat u, d, v;
};

inline SmithForm smith_form(IntMat const &m)
{
	int n = m.rows, k = m.cols;
	SmithForm s{IntMat::identity(n), m, IntMat::identity(k)};
	auto &d = s.d;

	auto row_op = [&](int i, int j, Integer const &q) { // row_i -= q*row_j
		for (int c = 0; c < k; ++c)
			d(i, c) -= q * d(j, c);
		for (int c = 0; c < n; ++c)
			s.u(i, c) -= q * s.u(j, c);
	};
	auto col_op = [&](int i, int j, Integer const &q) { // col_i -= q*col_j
		for (int r = 0; r < n; ++r)
			d(r, i) -= q * d(r, j);
		for (int r = 0; r < k; ++r)
			s.v(r, i) -= q * s.v(r, j);
	};
	auto row_swap = [&](int i, int j) {
		for (int c = 0; c < k; ++c)
			std::swap(d(i, c), d(j, c));
		for (int c = 0; c < n; ++c)
			std::swap(s.u(i, c), s.u(j, c));
	};
	auto col_swap = [&](int i, int j) {
		for (int r = 0; r < n; ++r)
			std::swap(d(r, i), d(r, j));
		for (int r = 0; r < k; ++r)
			std::swap(s.v(r, i), s.v(r, j));
	};

	int t = 0;
	while (t < n && t < k)
	{
		// find a nonzero pivot with minimal absolute value
		int pi = -1, pj = -1;
		Integer best = 0;
		for (int i = t; i < n; ++i)
			for (int j = t; j < k; ++j)
				if (d(i, j) != 0 &&
				    (pi < 0 || abs(d(i, j)) < best))
				{
					pi = i;
					pj = j;
					best = abs(d(i, j));
				}
		if (pi < 0)
			break;
		row_swap(t, pi);
		col_swap(t, pj);

		bool clean = true;
		for (int i = t + 1; i < n; ++i)
			if (d(i, t) != 0)
			{
				Integer q = d(i, t) / d(t, t);
				row_op(i, t, q);
				if (d(i, t) != 0)
					clean = false;
			}
		for (int j = t + 1; j < k; ++j)
			if (d(t, j) != 0)
			{
				Integer q = d(t, j) / d(t, t);
				col_op(j, t, q);
				if (d(t, j) != 0)
					clean = false;
			}
		if (!clean)
			continue; // remainders became new smaller pivots
		if (d(t, t) < 0)
		{
			for (int c = 0; c < k; ++c)
				d(t, c) = -d(t, c);
			for (int c = 0; c < n; ++c)
				s.u(t, c) = -s.u(t, c);
		}
		++t;
	}
	// (divisibility chain among the d_i is not needed by any consumer here)
	return s;
}

// For a nonzero functional phi: Z^m -> Z returns (d, beta, kernel basis)
// with phi(beta) = d > 0 generating im(phi) and the columns a basis of
// ker(phi); (kernel basis, beta) together form a basis of Z^m.
struct FunctionalSplit
{
	Integer d;
	std::vector<Integer> beta;
	std::vector<std::vector<Integer>> kernel; // m-1 columns
};

inline FunctionalSplit split_functional(std::vector<Integer> const &phi)
{
	int m = (int)phi.size();
	IntMat p(1, m);
	for (int j = 0; j < m; ++j)
		p(0, j) = phi[j];
	SmithForm s = smith_form(p);
	// (u) * phi * v = (d, 0, ..., 0); u = (±1)
	Integer d = s.d(0, 0);
	if (d == 0)
		throw ZeroMap("functional is zero");
	FunctionalSplit out;
	Integer u0 = s.u(0, 0); // ±1
	out.d = d;
	out.beta.resize(m);
	for (int i = 0; i < m; ++i)
		out.beta[i] = s.v(i, 0) * u0; // phi(beta) = d exactly
	for (int j = 1; j < m; ++j)
	{
		std::vector<Integer> col(m);
		for (int i = 0; i < m; ++i)
			col[i] = s.v(i, j);
		out.kernel.push_back(std::move(col));
	}
	return out;
}

} // namespace torsionnorm
