#pragma once

#include <string>
#include <vector>

namespace torsionnorm {

struct ExampleJob
{
	std::string name;
	std::string description;
	std::string json;
};

// Bundled presentations; `torsionnorm examples --write DIR` dumps them,
// and the same documents live in jobs/ in the source tree.
inline std::vector<ExampleJob> const &bundled_examples()
{
	static std::vector<ExampleJob> const jobs = {
	    {"unknot", "unknot exterior <a | >, delta_bar clamps to 0",
	     R"({
  "presentation": {"generators": ["a"], "relators": []},
  "representation": "abelianization",
  "queries": [
    {"type": "torsion"},
    {"type": "delta_bar", "phi": [1]},
    {"type": "norm_ball"}
  ]
})"},
	    {"trefoil", "trefoil knot group <a,b | abaBAB>, delta_bar = 1",
	     R"({
  "presentation": {"generators": ["a", "b"], "relators": ["abaBAB"]},
  "representation": "abelianization",
  "queries": [
    {"type": "torsion"},
    {"type": "delta_bar", "phi": [1]},
    {"type": "norm_ball"}
  ]
})"},
	    {"figure8", "figure-eight knot group, delta_bar = 1",
	     R"({
  "presentation": {"generators": ["a", "b"], "relators": ["AbaBabABaB"]},
  "representation": "abelianization",
  "queries": [
    {"type": "torsion"},
    {"type": "delta_bar", "phi": [1]},
    {"type": "norm_ball"}
  ]
})"},
	    {"hopf", "Hopf link exterior <a,b | abAB>, unit torsion",
	     R"({
  "presentation": {"generators": ["a", "b"], "relators": ["abAB"]},
  "representation": "abelianization",
  "queries": [
    {"type": "torsion"},
    {"type": "delta_bar", "phi": [1, 0]},
    {"type": "delta_bar", "phi": [1, 1]},
    {"type": "norm_ball"}
  ]
})"},
	    {"whitehead", "Whitehead link group, norm ball is the diamond",
	     R"({
  "presentation": {"generators": ["a", "b"], "relators": ["abaBABabABAbabAB"]},
  "representation": "abelianization",
  "queries": [
    {"type": "torsion"},
    {"type": "delta_bar", "phi": [1, 0]},
    {"type": "delta_bar", "phi": [1, 1]},
    {"type": "norm_ball"}
  ]
})"},
	    {"trefoil_metabelian",
	     "trefoil with the rank-2 metabelian representation, delta_bar_1 = 1",
	     R"({
  "ring": {
    "m": 1,
    "base_variables": 2,
    "action": [[[0, -1], [1, 1]]]
  },
  "presentation": {"generators": ["a", "b"], "relators": ["abaBAB"]},
  "representation": {
    "psi": [[1], [1]],
    "unit_exponents": [[0, 0], [1, 0]]
  },
  "queries": [
    {"type": "torsion"},
    {"type": "delta_bar", "phi": [1]}
  ]
})"},
	    {"selftest", "bundled property suite",
	     R"({
  "presentation": {"generators": ["a"], "relators": []},
  "representation": "abelianization",
  "queries": [
    {"type": "selftest"}
  ]
})"}};
	return jobs;
}

} // namespace torsionnorm
