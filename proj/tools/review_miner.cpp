// Command-line front end for the review mining pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "review_miner/review_miner.hpp"

namespace rm = review_miner;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kData = 2, kInternal = 3 };

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string lang;
  std::string out;
  bool strict = false;
  std::string count_mode;
  std::optional<int> k;
  std::string format;
  std::string cache;
  bool quiet = false;
};

rm::config::PipelineConfig make_config(const Flags& f) {
  rm::config::Settings overrides;
  if (f.seed) overrides["seed"] = std::to_string(*f.seed);
  if (!f.out.empty()) overrides["out"] = std::filesystem::absolute(f.out).string();
  if (f.strict) overrides["strict"] = "true";
  if (!f.count_mode.empty()) overrides["count_mode"] = f.count_mode;
  if (!f.format.empty()) overrides["format"] = f.format;
  if (!f.lang.empty()) {
    if (f.lang != "zh" && f.lang != "en") throw rm::ValidationError("--lang must be zh or en");
    overrides[(f.lang == "zh" ? "en" : "zh") + std::string(".reviews")] = "";
  }
  if (f.k) {
    for (const char* l : {"zh", "en"}) {
      if (f.lang.empty() || f.lang == l) overrides[std::string(l) + ".k"] = std::to_string(*f.k);
    }
  }
  std::optional<std::string> path;
  if (!f.config.empty()) path = f.config;
  return rm::config::load_config(path, overrides);
}

int run_stage(const Flags& f, rm::pipeline::Stage stage) {
  auto cfg = make_config(f);
  rm::pipeline::RunOptions opts;
  opts.cache_dir = f.cache;
  opts.log = f.quiet ? nullptr : &std::cerr;
  rm::pipeline::Pipeline p(std::move(cfg), opts);
  p.run(stage);
  if (stage == rm::pipeline::Stage::Report) {
    std::cout << "report written to " << p.out_dir().string() << '\n';
  } else {
    std::cout << "stage " << rm::pipeline::stage_name(stage) << " done; artifacts in " << p.cache_dir().string()
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual hotel review opinion mining"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "key = value configuration file");
  app.add_option("--seed", flags.seed, "random seed for folds and training order");
  app.add_option("--lang", flags.lang, "restrict the run to one language (zh or en)");
  app.add_option("--out", flags.out, "report output directory");
  app.add_flag("--strict", flags.strict, "abort on the first malformed input record");
  app.add_option("--count-mode", flags.count_mode, "keyword counting: tokens or sentences");
  app.add_option("--k", flags.k, "cross-validation folds");
  app.add_option("--format", flags.format, "report format: markdown or tsv");
  app.add_option("--cache", flags.cache, "stage cache directory (default: $REVIEW_MINER_CACHE or <out>/cache)");
  app.add_flag("-q,--quiet", flags.quiet, "no progress output");

  std::optional<rm::pipeline::Stage> chosen;
  for (auto s : rm::pipeline::kStages) {
    auto* sub = app.add_subcommand(std::string(rm::pipeline::stage_name(s)),
                                   "run the pipeline up to the " + std::string(rm::pipeline::stage_name(s)) + " stage");
    sub->fallthrough();
    sub->callback([&chosen, s] { chosen = s; });
  }
  auto* all = app.add_subcommand("all", "run every stage and write the report");
  all->fallthrough();
  all->callback([&chosen] { chosen = rm::pipeline::Stage::Report; });

  std::string demo_dir;
  std::uint64_t demo_seed = rm::synthetic::Options{}.seed;
  auto* demo = app.add_subcommand("generate-demo", "write the synthetic planted-lexicon corpus");
  demo->add_option("dir", demo_dir, "output directory")->required();
  demo->add_option("--generator-seed", demo_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (demo->parsed()) {
      rm::synthetic::Options opt;
      opt.seed = demo_seed;
      rm::synthetic::write_demo(demo_dir, opt);
      std::cout << "demo corpus written to " << demo_dir << '\n';
      return kOk;
    }
    return run_stage(flags, *chosen);
  } catch (const rm::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const rm::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
