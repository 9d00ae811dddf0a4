#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "panella/bench.hpp"

namespace pb = panella::bench;

int main(int argc, char** argv) {
  CLI::App app{"Size sweeps of the panel-major routines; writes CSV."};
  app.option_defaults()->always_capture_default();
  pb::SweepOptions opt;
  int min = 4, max = 300, step = 4;
  std::string out;
  bool list = false;

  app.add_option("--routine", opt.routine, "routine to time");
  app.add_option("--impl", opt.impl, "hp, rf or naive")->check(CLI::IsMember({"hp", "rf", "naive"}));
  app.add_option("--min", min, "smallest size");
  app.add_option("--max", max, "largest size");
  app.add_option("--step", step, "size increment");
  app.add_option("--reps", opt.reps, "timed repetitions per size (median reported)");
  app.add_option("--warmup", opt.warmup, "untimed calls before timing");
  app.add_option("--seed", opt.seed, "operand seed");
  app.add_option("--out", out, "CSV file (default: stdout)");
  app.add_option("--dump", opt.dump_dir, "directory for operand fixtures");
  app.add_flag("--list", list, "print the supported routine/impl pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& r : pb::routines())
      for (const auto& i : pb::impls(r)) std::cout << r << ' ' << i << '\n';
    return 0;
  }
  if (opt.routine.empty()) {
    std::cerr << "bench: --routine is required (see --list)\n";
    return 2;
  }

  try {
    opt.sizes = pb::size_grid(min, max, step);
    const auto records = pb::run_sweep(opt);
    if (out.empty()) {
      pb::emit_csv(records, std::cout);
    } else {
      std::ofstream f(out);
      if (!f) {
        std::cerr << "bench: cannot open " << out << '\n';
        return 2;
      }
      pb::emit_csv(records, f);
    }
  } catch (const pb::UsageError& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 2;
  } catch (const pb::CorrectnessError& e) {
    std::cerr << "bench: correctness gate failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
