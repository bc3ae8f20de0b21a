#pragma once

#include "torsionnorm/selftest.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace torsionnorm {

using Json = nlohmann::ordered_json;

// ---- parsing helpers (all throw ParseError/ValidationError with a path) ----

namespace jobdetail {

inline Json const &need(Json const &j, std::string const &key,
                        std::string const &where)
{
	if (!j.contains(key))
		throw ParseError("missing '" + key + "' in " + where);
	return j.at(key);
}

inline long need_int(Json const &j, std::string const &where)
{
	if (!j.is_number_integer())
		throw ParseError(where + " must be an integer");
	return j.get<long>();
}

inline Exp parse_exp(Json const &j, std::string const &where)
{
	if (!j.is_array())
		throw ParseError(where + " must be an integer vector");
	Exp e;
	for (auto const &x : j)
		e.push_back(need_int(x, where));
	return e;
}

inline Mono parse_mono(Json const &j, std::string const &where)
{
	Exp e = parse_exp(j, where);
	Mono m(e.size());
	for (size_t i = 0; i < e.size(); ++i)
		m[i] = (int32_t)e[i];
	return m;
}

inline IntMat parse_matrix(Json const &j, int k, std::string const &where)
{
	if (!j.is_array() || (int)j.size() != k)
		throw ParseError(where + " must be a " + std::to_string(k) +
		                 "x" + std::to_string(k) + " integer matrix");
	IntMat m(k, k);
	for (int i = 0; i < k; ++i)
	{
		if (!j[i].is_array() || (int)j[i].size() != k)
			throw ParseError(where + " row " + std::to_string(i) +
			                 " has wrong length");
		for (int c = 0; c < k; ++c)
			m(i, c) = need_int(j[i][c], where);
	}
	return m;
}

inline Json rational_pair(Rational const &q)
{
	return Json::array({(long)numerator(q), (long)denominator(q)});
}

inline Json qvec_json(QVec const &v)
{
	Json a = Json::array();
	for (auto const &c : v)
		a.push_back(rational_pair(c));
	return a;
}

inline Json polytope_json(LatticePolytope const &p)
{
	Json a = Json::array();
	if (p.dim == 2)
	{
		for (auto const &v : polygon_ccw(p))
			a.push_back(qvec_json(v));
	}
	else
		for (auto const &v : p.vertices)
			a.push_back(qvec_json(v));
	return a;
}

} // namespace jobdetail

struct Query
{
	std::string type; // delta_bar | torsion | norm_ball | selftest
	Exp phi;
	std::optional<int> pivot;
	uint64_t seed = 0;
	int scale = 1;
};

struct JobSpec
{
	Presentation pres;
	std::vector<std::string> gen_names;
	CompatibleRep rep;
	std::vector<Query> queries;
};

inline JobSpec parse_job(Json const &doc)
{
	using namespace jobdetail;
	JobSpec job;

	// presentation
	Json const &pj = need(doc, "presentation", "job");
	Json const &gj = need(pj, "generators", "presentation");
	if (!gj.is_array() || gj.empty())
		throw ParseError("presentation.generators must be a nonempty list");
	for (auto const &g : gj)
	{
		std::string name = g.get<std::string>();
		if (name.size() != 1 || name[0] < 'a' || name[0] > 'z')
			throw ParseError("generator names are single letters a-z");
		job.gen_names.push_back(name);
	}
	job.pres.ngens = (int)job.gen_names.size();
	for (int i = 0; i < job.pres.ngens; ++i)
		if (job.gen_names[i] != std::string(1, char('a' + i)))
			throw ParseError(
			    "generators must be consecutive letters starting at 'a'");
	for (auto const &r : need(pj, "relators", "presentation"))
		job.pres.relators.push_back(
		    parse_word(r.get<std::string>(), job.pres.ngens));
	job.pres.validate();

	// representation
	Json rj = doc.contains("representation") ? doc.at("representation")
	                                         : Json("abelianization");
	if (rj.is_string() && rj.get<std::string>() == "abelianization")
	{
		job.rep = abelianization_rep(job.pres);
		if (doc.contains("ring"))
		{
			Json const &ring = doc.at("ring");
			if (ring.contains("m") &&
			    need_int(ring.at("m"), "ring.m") != job.rep.ring->m)
				throw ValidationError(
				    "ring.m does not match the first Betti number " +
				    std::to_string(job.rep.ring->m));
		}
	}
	else if (rj.is_object())
	{
		Json const &ring = need(doc, "ring", "job");
		int m = (int)need_int(need(ring, "m", "ring"), "ring.m");
		int k = ring.contains("base_variables")
		            ? (int)need_int(ring.at("base_variables"),
		                            "ring.base_variables")
		            : 0;
		if (m < 1)
			throw ValidationError("ring.m must be at least 1");
		ActionData action;
		action.k = k;
		if (k > 0)
		{
			Json const &aj = need(ring, "action", "ring");
			if ((int)aj.size() != m)
				throw ValidationError(
				    "ring.action needs one matrix per t variable");
			for (int i = 0; i < m; ++i)
				action.mats.push_back(parse_matrix(
				    aj[i], k, "ring.action[" + std::to_string(i) + "]"));
		}
		else
			action.mats.assign(m, IntMat(0, 0));
		action.validate();

		std::vector<Exp> psi;
		for (auto const &row :
		     need(rj, "psi", "representation"))
		{
			Exp e = parse_exp(row, "representation.psi");
			if ((int)e.size() != m)
				throw ValidationError(
				    "representation.psi rows must have length m");
			psi.push_back(std::move(e));
		}
		std::vector<Mono> ue;
		for (auto const &row :
		     need(rj, "unit_exponents", "representation"))
		{
			Mono u = parse_mono(row, "representation.unit_exponents");
			if ((int)u.size() != k)
				throw ValidationError(
				    "representation.unit_exponents rows must have "
				    "length base_variables");
			ue.push_back(std::move(u));
		}
		std::vector<std::tuple<int, int, Scalar>> units;
		if (ring.contains("commutation_units"))
			for (auto const &u : ring.at("commutation_units"))
			{
				int i = (int)need_int(need(u, "i", "commutation_units"),
				                      "commutation_units.i") - 1;
				int j = (int)need_int(need(u, "j", "commutation_units"),
				                      "commutation_units.j") - 1;
				Json const &cj = need(u, "coeff", "commutation_units");
				Rational c =
				    cj.is_string()
				        ? parse_rational(cj.get<std::string>())
				        : Rational(need_int(cj, "coeff"));
				Mono e(k, 0);
				if (u.contains("exponents"))
					e = parse_mono(u.at("exponents"),
					               "commutation_units.exponents");
				units.emplace_back(i, j, scalar_monomial(k, e, c));
			}
		job.rep = metabelian_rep(job.pres, std::move(action),
		                         std::move(psi), ue, units);
	}
	else
		throw ParseError(
		    "representation must be \"abelianization\" or a metabelian "
		    "data object");

	// queries
	for (auto const &qj : need(doc, "queries", "job"))
	{
		Query q;
		q.type = need(qj, "type", "query").get<std::string>();
		if (q.type == "delta_bar")
		{
			q.phi = parse_exp(need(qj, "phi", "delta_bar query"),
			                  "query.phi");
			if ((int)q.phi.size() != job.rep.ring->m)
				throw ValidationError(
				    "query.phi must have length m = " +
				    std::to_string(job.rep.ring->m));
		}
		else if (q.type == "torsion" || q.type == "norm_ball")
		{
			if (qj.contains("pivot"))
			{
				std::string p = qj.at("pivot").get<std::string>();
				if (p.size() != 1 || p[0] < 'a' ||
				    p[0] >= char('a' + job.pres.ngens))
					throw ValidationError(
					    "query.pivot must name a generator");
				q.pivot = p[0] - 'a';
			}
		}
		else if (q.type == "selftest")
		{
			if (qj.contains("seed"))
				q.seed = qj.at("seed").get<uint64_t>();
			else if (char const *env = std::getenv("TORSIONNORM_SEED"))
				q.seed = std::strtoull(env, nullptr, 10);
			else
				q.seed = 20260809;
			if (qj.contains("scale"))
				q.scale = (int)need_int(qj.at("scale"), "scale");
		}
		else
			throw ParseError("unknown query type '" + q.type + "'");
		job.queries.push_back(std::move(q));
	}
	if (job.queries.empty())
		throw ParseError("job has no queries");
	return job;
}

inline JobSpec parse_job_text(std::string const &text)
{
	Json doc;
	try
	{
		doc = Json::parse(text);
	}
	catch (nlohmann::json::parse_error const &e)
	{
		throw ParseError(std::string("invalid JSON: ") + e.what());
	}
	return parse_job(doc);
}

// ---- execution ----

inline Json norm_ball_json(NormBall const &ball)
{
	using namespace jobdetail;
	Json out;
	out["zero_seminorm"] = ball.zero_seminorm;
	out["dual_vertices"] = polytope_json(ball.dual);
	out["dual_integral"] = ball.dual.integral();
	out["compact"] = ball.compact;
	Json verts = Json::array();
	for (auto const &v : ball.vertices)
		verts.push_back(qvec_json(v));
	out["ball_vertices"] = verts;
	Json facets = Json::array();
	for (auto const &[n, c] : ball.facets)
		facets.push_back(Json{{"normal", qvec_json(n)},
		                      {"offset", rational_pair(c)}});
	out["facets"] = facets;
	Json lin = Json::array();
	for (auto const &v : ball.lineality)
		lin.push_back(qvec_json(v));
	out["lineality"] = lin;
	return out;
}

struct RunOutput
{
	Json doc;
	std::optional<NormBall> last_ball; // for --svg
};

inline RunOutput run_job(JobSpec const &job, std::ostream *verbose = nullptr)
{
	RunOutput out;
	out.doc["tool"] = "torsionnorm";
	out.doc["m"] = job.rep.ring->m;
	Json results = Json::array();

	std::optional<TorsionResult> torsion_cache;
	auto get_torsion = [&]() -> TorsionResult const & {
		if (!torsion_cache)
			torsion_cache = torsion(job.pres, job.rep);
		return *torsion_cache;
	};

	for (auto const &q : job.queries)
	{
		auto t0 = std::chrono::steady_clock::now();
		Json r;
		r["type"] = q.type;
		try
		{
			if (q.type == "delta_bar")
			{
				r["phi"] = q.phi;
				auto v = delta_bar(get_torsion(), q.phi);
				if (v)
					r["delta_bar"] = *v;
				else
					r["delta_bar"] = "-inf";
			}
			else if (q.type == "torsion")
			{
				TorsionResult t =
				    q.pivot ? torsion(job.pres, job.rep, q.pivot)
				            : get_torsion();
				r["zero"] = t.zero;
				if (!t.zero)
				{
					r["f_n"] = to_string(t.cleared.f_n);
					r["f_d"] = to_string(t.cleared.f_d);
				}
				r["pivot"] = std::string(1, char('a' + t.pivot));
			}
			else if (q.type == "norm_ball")
			{
				TorsionResult const &t = get_torsion();
				if (t.zero)
				{
					r["zero_torsion"] = true;
				}
				else
				{
					NormBall ball = norm_ball(t.cleared);
					r.update(norm_ball_json(ball));
					out.last_ball = ball;
				}
			}
			else if (q.type == "selftest")
			{
				SelftestResult s = run_selftest(q.seed, q.scale);
				r["passed"] = s.passed;
				r["failed"] = s.failed;
				r["failures"] = s.failures;
				r["seed"] = q.seed;
			}
		}
		catch (Error const &e)
		{
			throw ComputeError("query '" + q.type +
			                   "' failed: " + std::string(e.what()));
		}
		if (verbose)
		{
			auto ms = std::chrono::duration_cast<
			              std::chrono::milliseconds>(
			              std::chrono::steady_clock::now() - t0)
			              .count();
			*verbose << "[torsionnorm] " << q.type << ": " << ms
			         << " ms\n";
		}
		results.push_back(std::move(r));
	}
	out.doc["results"] = std::move(results);
	return out;
}

// ---- SVG rendering of the m = 2 norm ball ----

inline std::string svg_norm_ball(NormBall const &ball)
{
	std::ostringstream svg;
	double w = 420, h = 420, cx = w / 2, cy = h / 2;
	svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
	    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
	    << "\">\n";
	svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
	auto line = [&](double x1, double y1, double x2, double y2,
	                std::string const &color, double sw) {
		svg << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\""
		    << x2 << "\" y2=\"" << y2 << "\" stroke=\"" << color
		    << "\" stroke-width=\"" << sw << "\"/>\n";
	};
	line(0, cy, w, cy, "#bbb", 1);
	line(cx, 0, cx, h, "#bbb", 1);
	if (ball.zero_seminorm || !ball.compact || ball.m != 2)
	{
		std::string msg =
		    ball.zero_seminorm
		        ? "degenerate: zero seminorm (ball is the whole plane)"
		        : "non-compact ball: see facets and lineality in the JSON";
		svg << "<text x=\"20\" y=\"30\" font-size=\"14\">" << msg
		    << "</text>\n</svg>\n";
		return svg.str();
	}
	double maxc = 0;
	for (auto const &v : ball.vertices)
		for (auto const &c : v)
		{
			double d = std::abs((double)numerator(c) /
			                    (double)denominator(c));
			maxc = std::max(maxc, d);
		}
	double scale = (w / 2 - 60) / (maxc > 0 ? maxc : 1);
	auto px = [&](QVec const &v) {
		double x = (double)numerator(v[0]) / (double)denominator(v[0]);
		double y = (double)numerator(v[1]) / (double)denominator(v[1]);
		return std::pair<double, double>(cx + x * scale, cy - y * scale);
	};
	svg << "<polygon points=\"";
	for (auto const &v : ball.vertices)
	{
		auto [x, y] = px(v);
		svg << x << "," << y << " ";
	}
	svg << "\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"#3182bd\" "
	       "stroke-width=\"2\"/>\n";
	for (auto const &v : ball.vertices)
	{
		auto [x, y] = px(v);
		svg << "<circle cx=\"" << x << "\" cy=\"" << y
		    << "\" r=\"3\" fill=\"#08519c\"/>\n";
		svg << "<text x=\"" << x + 6 << "\" y=\"" << y - 6
		    << "\" font-size=\"12\">(" << to_string(v[0]) << ", "
		    << to_string(v[1]) << ")</text>\n";
	}
	svg << "</svg>\n";
	return svg.str();
}

} // namespace torsionnorm
