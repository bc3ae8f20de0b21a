#include "torsionnorm/examples.hpp"
#include "torsionnorm/job.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int error_exit(std::string const &kind, std::string const &message)
{
	torsionnorm::Json err;
	err["error"] = {{"kind", kind}, {"message", message}};
	std::cout << err.dump(2) << "\n";
	if (kind == "ParseError")
		return 2;
	if (kind == "ValidationError" || kind == "InvalidRep")
		return 3;
	return 4;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"torsionnorm: higher-order Alexander norms from "
	             "Reidemeister torsion over skew Laurent rings"};
	app.require_subcommand(1);

	std::string job_path, svg_path;
	bool verbose = false;
	auto *run = app.add_subcommand("run", "run a job description");
	run->add_option("job", job_path, "job JSON file")->required();
	run->add_option("--svg", svg_path,
	                "write the norm-ball figure of the last norm_ball "
	                "query to this file (m = 2)");
	run->add_flag("--verbose", verbose, "print per-query timings to stderr");

	std::string write_dir;
	auto *ex = app.add_subcommand("examples", "list bundled example jobs");
	ex->add_option("--write", write_dir,
	               "write the bundled jobs as JSON files into a directory");

	CLI11_PARSE(app, argc, argv);

	if (ex->parsed())
	{
		if (!write_dir.empty())
		{
			std::filesystem::create_directories(write_dir);
			for (auto const &e : torsionnorm::bundled_examples())
			{
				std::ofstream out(write_dir + "/" + e.name +
				                  ".json");
				out << e.json << "\n";
			}
			std::cout << "wrote "
			          << torsionnorm::bundled_examples().size()
			          << " jobs to " << write_dir << "\n";
			return 0;
		}
		for (auto const &e : torsionnorm::bundled_examples())
			std::cout << e.name << "\t" << e.description << "\n";
		return 0;
	}

	try
	{
		std::ifstream in(job_path);
		if (!in)
			throw torsionnorm::ParseError("cannot open job file '" +
			                              job_path + "'");
		std::stringstream buf;
		buf << in.rdbuf();
		torsionnorm::JobSpec job =
		    torsionnorm::parse_job_text(buf.str());
		torsionnorm::RunOutput out = torsionnorm::run_job(
		    job, verbose ? &std::cerr : nullptr);
		std::cout << out.doc.dump(2) << "\n";
		if (!svg_path.empty())
		{
			if (!out.last_ball)
				throw torsionnorm::ComputeError(
				    "--svg needs a norm_ball query with nonzero "
				    "torsion");
			std::ofstream svg(svg_path);
			svg << torsionnorm::svg_norm_ball(*out.last_ball);
		}
		return 0;
	}
	catch (torsionnorm::Error const &e)
	{
		return error_exit(e.kind, e.what());
	}
	catch (std::exception const &e)
	{
		return error_exit("ComputeError", e.what());
	}
}
