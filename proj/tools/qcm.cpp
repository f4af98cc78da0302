#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "qcm/error.hpp"
#include "qcm/runner.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;
  std::optional<std::string> family;
  std::optional<double> s;
  std::optional<double> beta;
  std::optional<int> n;
  std::optional<int> depth;
  std::optional<std::string> weights;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_option("--threads", o.threads, "worker threads (never affects output)")
      ->check(CLI::Range(1U, 4096U));
  cmd->add_option("--seed", o.seed, "reserved; all computations are deterministic");
  cmd->add_option("--family", o.family, "gauge family: power, example37, power_log");
  cmd->add_option("--s", o.s, "regular-variation index");
  cmd->add_option("--beta", o.beta, "log exponent (power_log)");
  cmd->add_option("--n", o.n, "ambient dimension");
  cmd->add_option("--depth", o.depth, "model depth M");
  cmd->add_option("--weights", o.weights, "weight kind: rho, harmonic, custom");
}

nlohmann::json load_document(const Options& o) {
  if (o.config.empty()) return nlohmann::json::object();
  std::ifstream in(o.config, std::ios::binary);
  if (!in) throw qcm::ConfigError({"cannot read config file " + o.config});
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw qcm::ConfigError({std::string("parse error: ") + e.what()});
  }
}

nlohmann::json merged_document(const std::string& command, const Options& o) {
  auto doc = load_document(o);
  if (!doc.is_object()) throw qcm::ConfigError({"<root>: expected an object"});
  if (command != "run") {
    if (doc.contains("experiment") && doc["experiment"] != command) {
      throw qcm::ConfigError({"experiment: config names '" + doc["experiment"].dump() +
                              "' but the subcommand is '" + command + "'"});
    }
    doc["experiment"] = command;
  }
  if (o.family || o.s || o.beta) {
    auto& g = doc["gauge"];
    if (g.is_null()) g = nlohmann::json::object();
    if (o.family) {
      if (g.contains("family") && g["family"] != *o.family) {
        g.erase("s");
        g.erase("beta");
      }
      g["family"] = *o.family;
    }
    if (o.s) g["s"] = *o.s;
    if (o.beta) g["beta"] = *o.beta;
  }
  if (o.n) doc["n"] = *o.n;
  if (o.depth) doc["depth"] = *o.depth;
  if (o.weights) {
    auto& w = doc["weights"];
    if (!w.is_object() || w.value("kind", "") != *o.weights) w = nlohmann::json::object();
    w["kind"] = *o.weights;
  }
  if (o.out || o.format) {
    auto& out = doc["output"];
    if (out.is_null()) out = nlohmann::json::object();
    if (o.out) out["dir"] = *o.out;
    if (o.format) out["format"] = *o.format;
  }
  return doc;
}

int execute(const std::string& command, const Options& o) {
  qcm::RunConfig config;
  try {
    config = qcm::parse_config(merged_document(command, o));
  } catch (const qcm::ConfigError& e) {
    std::cerr << "qcm: invalid configuration\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return 1;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto output = qcm::dispatch(config, o.threads);
    const auto paths = qcm::write_outputs(output, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& p : paths) std::cout << p.string() << "\n";
    std::cerr << "qcm: " << config.experiment << " finished in " << seconds << " s\n";
    int failed = 0;
    for (const auto& v : output.result.verdicts) {
      if (v.passed) continue;
      std::cerr << "qcm: " << (v.fatal ? "FAILED" : "note") << " " << v.invariant
                << " measured " << v.measured << " " << v.relation << " " << v.tolerance << "\n";
      if (v.fatal) ++failed;
    }
    return failed > 0 ? 2 : 0;
  } catch (const qcm::Error& e) {
    std::cerr << "qcm: " << config.experiment << " failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qcm: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasicentral modulus experiments on generalized Cantor sets"};
  app.require_subcommand(1);
  Options options;
  std::string selected;

  auto* run = app.add_subcommand("run", "run the experiment named in --config");
  add_common(run, options);
  run->callback([&] { selected = "run"; });
  for (auto name : qcm::kExperiments) {
    auto* cmd = app.add_subcommand(std::string(name), "run the " + std::string(name) + " experiment");
    add_common(cmd, options);
    cmd->callback([&selected, name] { selected = std::string(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (selected == "run" && options.config.empty()) {
    std::cerr << "qcm: run requires --config\n";
    return 1;
  }
  return execute(selected, options);
}
