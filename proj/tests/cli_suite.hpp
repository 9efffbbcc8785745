#pragma once

#include "gradalg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gradalg::testing {

struct CliStep {
  std::vector<std::string> args;
  int expect = 0;
};

struct CliOutcome {
  CliStep step;
  int exit = 0;
  std::string out, err;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fixtures and commands of the end-to-end suite; "@" expands to dir.
inline std::vector<CliStep> cli_steps() {
  return {
      {{"model", "heisenberg", "--level", "3", "-o", "@/heis.json"}, 0},
      {{"model", "full", "--dims", "1,2,2", "--copies", "2", "-o", "@/two.json"}, 0},
      {{"model", "full", "--dims", "1,1,2", "--prime", "5", "-o", "@/full5.json"}, 0},
      {{"model", "virasoro", "--level", "3", "-o", "@/vir.json"}, 0},
      {{"check", "@/heis.json", "--format", "json"}, 0},
      {{"check", "@/two.json"}, 1},
      {{"check", "@/vir.json", "--format", "json"}, 1},
      {{"check", "@/min.json"}, 0},
      {{"closure", "@/heis.json", "--degrees", "-2..2", "--format", "json"}, 0},
      {{"closure", "@/full5.json", "--maps", "--format", "json"}, 0},
      {{"burnside", "@/heis.json", "--target", "@/target.json", "--level", "2", "-o", "@/cert.json"}, 0},
      {{"verify", "@/heis.json", "--cert", "@/cert.json", "--format", "json"}, 0},
      {{"verify", "@/heis.json", "--cert", "@/tampered.json", "--format", "json"}, 1},
      {{"commutant", "@/two.json", "--format", "json"}, 0},
      {{"dc-check", "@/two.json", "--format", "json"}, 0},
      {{"decompose", "@/two.json", "--format", "json"}, 0},
      {{"decompose", "@/rot.json", "--format", "json"}, 2},
      {{"decompose", "@/rot.json", "--prime", "5", "--format", "json"}, 0},
      {{"decompose", "@/ext.json", "--format", "json"}, 1},
      {{"tk", "@/full5.json", "-k", "1", "--format", "json"}, 0},
      {{"tk", "@/full5.json", "-k", "2", "--format", "json"}, 2},
      {{"tk", "@/ext.json", "-k", "1"}, 0},
      {{"rationality", "@/heis.json", "-K", "2", "--format", "json"}, 0},
      {{"rationality", "@/ext.json", "-K", "1", "--format", "json"}, 2},
      {{"duality", "@/two.json", "--format", "json"}, 0},
      {{"check", "@/bad_shape.json"}, 3},
      {{"check", "@/bad_syntax.json"}, 3},
      {{"check", "@/missing.json"}, 3},
      {{"frobnicate"}, 3},
      {{}, 3},
  };
}

inline void write_cli_fixtures(const std::filesystem::path& dir) {
  write_file(dir / "min.json", R"({"field": {"kind": "rational"}, "truncation": 0, "dims": [1]})");
  write_file(dir / "target.json",
             R"({"degree": -1, "blocks": {"1": [["1"]], "2": [["2", "-1/3"]],
                 "3": [["1", "0", "5"], ["0", "1", "1"]]}})");
  write_file(dir / "rot.json", R"({"field": {"kind": "rational"}, "truncation": 0, "dims": [2],
    "generators": [{"name": "r", "degree": 0, "blocks": {"0": [["0", "-1"], ["1", "0"]]}}]})");
  write_file(dir / "ext.json", R"({"field": {"kind": "rational"}, "truncation": 1, "dims": [1, 1],
    "generators": [{"name": "e", "degree": 1, "blocks": {"0": [["1"]]}}]})");
  write_file(dir / "bad_shape.json", R"({"field": {"kind": "rational"}, "truncation": 1, "dims": [3, 2],
    "generators": [{"name": "x", "degree": 1, "blocks": {"0": [["1", "0"], ["0", "1"], ["0", "0"]]}}]})");
  write_file(dir / "bad_syntax.json", "{\"field\": {\"kind\": \"rational\"},\n \"truncation\": 0 \"dims\": [1]}\n");
}

// Runs every step in a fresh dir; the tampered certificate is derived from
// the solved one by replacing its first coefficient.
inline std::vector<CliOutcome> run_cli_suite(const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_cli_fixtures(dir);
  std::vector<CliOutcome> out;
  for (const auto& step : cli_steps()) {
    if (!step.args.empty() && step.args[0] == "verify" && step.args[3] == "@/tampered.json") {
      std::string cert = read_file(dir / "cert.json");
      auto at = cert.find("\"coeff\": \"");
      if (at != std::string::npos) cert.replace(at + 10, cert.find('"', at + 10) - at - 10, "12345");
      write_file(dir / "tampered.json", cert);
    }
    std::vector<std::string> args;
    for (auto a : step.args) {
      if (auto p = a.find('@'); p != std::string::npos) a.replace(p, 1, dir.string());
      args.push_back(a);
    }
    std::ostringstream o, e;
    int code = cli::run(args, o, e);
    std::string text = o.str(), diag = e.str();
    // Paths differ between runs only through dir.
    for (auto* s : {&text, &diag})
      for (auto p = s->find(dir.string()); p != std::string::npos; p = s->find(dir.string())) s->replace(p, dir.string().size(), "@");
    out.push_back({step, code, text, diag});
  }
  return out;
}

inline std::string transcript(const std::vector<CliOutcome>& outcomes) {
  std::string t;
  for (const auto& o : outcomes) {
    t += "$";
    for (const auto& a : o.step.args) t += " " + a;
    t += "\nexit " + std::to_string(o.exit) + "\n" + o.out + "\n--\n" + o.err + "\n";
  }
  return t;
}

}  // namespace gradalg::testing
