#include "affcyl/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "affcyl/corpus.hpp"
#include "affcyl/error.hpp"
#include "affcyl/serialize.hpp"

namespace affcyl {

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct Job {
  std::string name;
  SpecDocument doc;
};

Classification run_classify(const SpecDocument& doc, const RunConfig& cfg) {
  const auto samples = classify_samples(doc, cfg.samples, cfg.classify.seed);
  return classify_document(doc, samples, cfg.classify);
}

nlohmann::json with_run_info(nlohmann::json j, const RunConfig& cfg) {
  j["config"]["samples"] = cfg.samples;
  return j;
}

} // namespace

SpecDocument load_spec_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  try {
    SpecDocument doc = spec_from_json(j);
    std::visit([](const auto& s) { s.validate(); }, doc);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ":1:1: " + e.what());
  } catch (const Error& e) {
    throw ParseError(path.string() + ":1:1: " + e.what());
  }
}

CommandResult cmd_analyze(const std::filesystem::path& input, const RunConfig& cfg) {
  const SpecDocument doc = load_spec_file(input);
  const Classification c = run_classify(doc, cfg);
  CommandResult out;
  out.exit_code = exit_code(c.verdict);
  if (cfg.format == "csv") {
    out.output = csv_header() + csv_row(spec_name(doc), c);
  } else {
    out.output = dump(with_run_info(analysis_report(spec_name(doc), c), cfg));
  }
  return out;
}

CommandResult cmd_classify(const std::vector<std::filesystem::path>& inputs, const RunConfig& cfg) {
  std::vector<Job> jobs;
  for (const auto& p : inputs) {
    SpecDocument doc = load_spec_file(p);
    jobs.push_back({spec_name(doc), std::move(doc)});
  }
  std::vector<std::future<Classification>> futures;
  for (const auto& job : jobs)
    futures.push_back(std::async(std::launch::async, [&job, &cfg] { return run_classify(job.doc, cfg); }));

  CommandResult out;
  nlohmann::json docs = nlohmann::json::array();
  std::string csv = csv_header();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Classification c = futures[i].get();
    out.exit_code = std::max(out.exit_code, exit_code(c.verdict));
    docs.push_back(with_run_info(verdict_document(jobs[i].name, c), cfg));
    csv += csv_row(jobs[i].name, c);
  }
  if (cfg.format == "csv") {
    out.output = csv;
  } else {
    out.output = dump(docs.size() == 1 ? docs[0] : docs);
  }
  return out;
}

CommandResult cmd_corpus_gen(std::uint64_t seed, const std::filesystem::path& out_dir) {
  const auto entries = standard_corpus(seed);
  write_corpus(entries, seed, out_dir);
  CommandResult out;
  out.output = "wrote " + std::to_string(entries.size()) + " entries to " + out_dir.string() + "\n";
  return out;
}

CommandResult cmd_corpus_verify(const std::filesystem::path& dir, const RunConfig& cfg) {
  const auto entries = read_corpus(dir);
  std::vector<std::future<std::vector<std::string>>> futures;
  for (const auto& e : entries)
    futures.push_back(std::async(std::launch::async, [&e, &cfg] {
      RunConfig local = cfg;
      local.classify.seed = e.seed;
      return check_expectations(e, run_classify(e.spec, local));
    }));
  CommandResult out;
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto bad = futures[i].get();
    os << (bad.empty() ? "ok   " : "FAIL ") << entries[i].name << '\n';
    for (const auto& b : bad) os << "     " << b << '\n';
    if (!bad.empty()) out.exit_code = kExitCorpusMismatch;
  }
  out.output = os.str();
  return out;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Tangentially degenerate submanifolds: Gauss rank, focal loci, cylinder and cone detection"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string output;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol-rank", cfg.classify.tol.rank, "relative singular-value cut for ranks")->check(CLI::PositiveNumber);
    sub->add_option("--tol-gap", cfg.classify.tol.gap, "pencil eigenvalue separation")->check(CLI::PositiveNumber);
    sub->add_option("--tol-coincide", cfg.classify.tol.coincide, "covector coincidence")->check(CLI::PositiveNumber);
    sub->add_option("--tol-residual", cfg.classify.tol.residual, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "base samples per spec")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.classify.seed, "seed for sampling and pencil search");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", output, "write output to a file instead of stdout");
  };

  std::string analyze_input;
  auto* analyze = app.add_subcommand("analyze", "full report for one spec");
  analyze->add_option("input", analyze_input, "spec JSON")->required();
  add_common(analyze);

  std::vector<std::string> classify_inputs;
  auto* classify_cmd = app.add_subcommand("classify", "verdict for one or more specs");
  classify_cmd->add_option("inputs", classify_inputs, "spec JSON files")->required();
  add_common(classify_cmd);

  auto* corpus = app.add_subcommand("corpus", "generate or verify the test corpus");
  corpus->require_subcommand(1);
  std::uint64_t corpus_seed = 7;
  std::string corpus_dir = "corpus";
  auto* gen = corpus->add_subcommand("gen", "write manifest and entries");
  gen->add_option("--seed", corpus_seed, "corpus seed");
  gen->add_option("--out", corpus_dir, "output directory");
  auto* verify = corpus->add_subcommand("verify", "re-check every entry's expectations");
  verify->add_option("--dir", corpus_dir, "corpus directory");
  verify->add_option("--samples", cfg.samples, "base samples per entry")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  CommandResult result;
  try {
    if (*analyze) {
      result = cmd_analyze(analyze_input, cfg);
    } else if (*classify_cmd) {
      result = cmd_classify({classify_inputs.begin(), classify_inputs.end()}, cfg);
    } else if (*gen) {
      result = cmd_corpus_gen(corpus_seed, corpus_dir);
    } else {
      result = cmd_corpus_verify(corpus_dir, cfg);
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }

  if (output.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream os(output, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot write " << output << '\n';
      return kExitParse;
    }
    os << result.output;
  }
  return result.exit_code;
}

} // namespace affcyl
