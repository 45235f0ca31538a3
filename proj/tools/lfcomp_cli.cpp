#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lfcomp/cli/job.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lfcomp: compactness of differences of linear-fractional composition operators"};
  std::string job_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> degree;
  bool quiet = false;
  app.add_option("--job", job_path, "job file (JSON)")->required();
  app.add_option("--out", out_dir, "output directory for report.txt, report.json, witness.csv");
  app.add_option("--seed", seed, "overrides the job seed");
  app.add_option("--degree", degree, "truncation degree D for matrix and spectrum commands");
  app.add_flag("--quiet", quiet, "do not echo the text report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : lfcomp::cli::kParseError;
  }

  std::ifstream in(job_path);
  if (!in) {
    std::cerr << job_path << ": cannot open\n";
    return lfcomp::cli::kParseError;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  lfcomp::cli::JobSpec job;
  try {
    job = lfcomp::cli::parse_job(buf.str());
  } catch (const lfcomp::cli::ParseError& e) {
    std::cerr << job_path << ":" << e.line << ": " << e.what() << "\n";
    return lfcomp::cli::kParseError;
  }

  lfcomp::cli::RunOptions opt;
  opt.seed = seed;
  opt.degree = degree;
  const lfcomp::cli::RunResult res = lfcomp::cli::run_job(job, opt);
  try {
    lfcomp::cli::write_outputs(out_dir, res);
  } catch (const std::exception& e) {
    std::cerr << out_dir << ": " << e.what() << "\n";
    return lfcomp::cli::kPreconditionError;
  }
  if (!quiet) std::cout << res.text;
  return res.exit_code;
}
