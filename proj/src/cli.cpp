#include "glp/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "glp/cfa.hpp"
#include "glp/explorer.hpp"
#include "glp/export.hpp"
#include "glp/parser.hpp"
#include "glp/pretty.hpp"

namespace glp {

namespace {

using json = nlohmann::ordered_json;

std::string digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  const std::string data = bytes.str();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw IoError("cannot hash " + path);
  std::ostringstream s;
  s << "sha256:" << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) s << std::setw(2) << static_cast<int>(md[i]);
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

struct Common {
  std::string file;
  bool json_output = false;
  bool timing = false;
  unsigned jobs = 1;
};

struct BoundFlags {
  size_t depth = 40;
  int budget = 4;
  size_t cap = 200000;

  Bounds bounds() const { return {depth, budget, cap, true}; }
};

void add_bounds(CLI::App* cmd, BoundFlags& b) {
  cmd->add_option("--depth", b.depth, "Exploration depth limit")->capture_default_str();
  cmd->add_option("--budget", b.budget, "Copies per replication; negative for unbounded")->capture_default_str();
  cmd->add_option("--cap", b.cap, "Maximum number of states")->capture_default_str();
}

class Report {
 public:
  Report(const std::vector<std::string>& args, const Common& c) : common_(c) {
    j_["version"] = kVersion;
    j_["command"] = args;
    j_["inputs"] = json::array();
    start_ = std::chrono::steady_clock::now();
  }

  void input(const std::string& path) { j_["inputs"].push_back({{"path", path}, {"digest", digest(path)}}); }

  json& result() { return j_["result"]; }

  void finish(std::ostream& out, const std::string& summary) {
    if (common_.timing) {
      j_["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    if (common_.json_output) {
      out << j_.dump(2) << "\n";
    } else {
      out << summary;
    }
  }

 private:
  const Common& common_;
  json j_;
  std::chrono::steady_clock::time_point start_;
};

SourceDocument load(Report& report, const std::string& path) {
  report.input(path);
  return load_document(path);
}

int cmd_fmt(const Common& c, std::ostream& out) {
  out << pretty_document(load_document(c.file));
  return kExitOk;
}

struct RunFlags {
  uint64_t seed = 0;
  size_t steps = 100;
  int budget = 4;
  std::string script;
};

int cmd_run(const std::vector<std::string>& args, const Common& c, const RunFlags& f, std::ostream& out) {
  Report report(args, c);
  auto doc = load(report, c.file);
  Script script = doc.script;
  if (!f.script.empty()) script = load(report, f.script).script;
  auto run = run_random(doc.main, doc.policies, script, f.seed, f.steps, f.budget);
  json labels = json::array();
  std::string summary;
  for (const auto& l : run.labels) {
    labels.push_back(to_string(l));
    summary += to_string(l) + "\n";
  }
  report.result() = {{"seed", f.seed}, {"steps", run.labels.size()}, {"labels", labels}, {"final", pretty(run.final)}};
  summary += "steps: " + std::to_string(run.labels.size()) + "\nfinal: " + pretty(run.final) + "\n";
  report.finish(out, summary);
  return kExitOk;
}

int cmd_explore(const std::vector<std::string>& args, const Common& c, const BoundFlags& b, const std::string& path,
                std::ostream& out) {
  Report report(args, c);
  auto doc = load(report, c.file);
  auto g = explore(doc.main, doc.policies, doc.script, b.bounds(), c.jobs);
  size_t faulty = 0;
  for (const auto& e : g.edges) faulty += e.label.kind == LabelKind::FaultyAccess;
  if (!path.empty()) {
    bool as_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    write_file(path, as_json ? lts_to_json(g).dump(2) + "\n" : lts_to_edge_list(g));
  }
  report.result() = {{"nodes", g.nodes.size()}, {"edges", g.edges.size()}, {"faulty_edges", faulty},
                     {"truncated", g.truncated}};
  std::ostringstream s;
  s << "nodes: " << g.nodes.size() << "\nedges: " << g.edges.size() << "\nfaulty edges: " << faulty
    << "\ntruncated: " << (g.truncated ? "yes" : "no") << "\n";
  report.finish(out, s.str());
  return kExitOk;
}

int cmd_analyze(const std::vector<std::string>& args, const Common& c, const std::string& path, std::ostream& out) {
  Report report(args, c);
  auto doc = load(report, c.file);
  auto e = least_estimate(label_boundaries(doc.main), doc.policies);
  json estimate = estimate_to_json(e);
  if (!path.empty()) write_file(path, estimate.dump(2) + "\n");
  std::ostringstream s;
  json faulty = json::object();
  for (const auto& [r, entries] : e.gamma) {
    auto f = faulty_traces(e, r);
    faulty[r.display()] = f.size();
    s << r.display() << ": " << entries.size() << " traces, " << f.size() << " faulty\n";
  }
  for (const auto& [r, d] : unreleased_report(e)) s << "possibly unreleased " << r.display() << " in " << to_string(d) << "\n";
  report.result() = {{"faulty", faulty}, {"estimate", estimate}};
  report.finish(out, s.str());
  return kExitOk;
}

std::vector<Name> free_resources(const Process& p) {
  std::set<Name> out;
  for (const auto& n : all_names(p)) {
    if (n.is_constant() && n.is_resource()) out.insert(n.canonical());
  }
  return {out.begin(), out.end()};
}

int cmd_check(const std::vector<std::string>& args, const Common& c, const BoundFlags& b,
              const std::vector<std::string>& resources, std::ostream& out) {
  Report report(args, c);
  auto doc = load(report, c.file);
  Process p = label_boundaries(doc.main);
  std::vector<Name> targets;
  for (const auto& r : resources) targets.push_back(Name::resource(r.starts_with("#") ? r.substr(1) : r));
  if (targets.empty()) targets = free_resources(p);

  auto e = least_estimate(p, doc.policies);
  Bounds lean = b.bounds();
  lean.keep_terms = false;
  auto g = explore(doc.main, doc.policies, {}, lean, c.jobs);
  int code = kExitOk;
  json verdicts = json::array();
  std::ostringstream s;
  for (const auto& r : targets) {
    if (!all_names(p).count(r)) throw InputError("resource " + r.display() + " does not occur in the process");
    bool ok = faulty_traces(e, r).empty();
    Verdict v = complies_with(g, r);
    if (!ok || v.status == VerdictStatus::Violates) {
      code = kExitPolicyFailure;
    } else if (v.status == VerdictStatus::Inconclusive && code == kExitOk) {
      code = kExitInconclusive;
    }
    verdicts.push_back({{"resource", r.display()}, {"respects", ok}, {"complies", verdict_to_json(v)}});
    s << r.display() << ": " << (ok ? "respects" : "does not respect") << ", " << to_string(v.status) << "\n";
    for (const auto& w : v.witness) s << "  " << to_string(w.label) << "\n";
  }
  report.result() = {{"verdicts", verdicts}, {"exit", code}};
  report.finish(out, s.str());
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"G-Local pi-calculus toolkit", "glp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  BoundFlags bounds;
  RunFlags run;
  std::string out_path;
  std::vector<std::string> resources;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", common.file, "Input .glp file")->required();
    cmd->add_flag("--json", common.json_output, "Print the JSON report instead of a summary");
    cmd->add_flag("--timing", common.timing, "Include wall-clock time in the report");
  };

  auto* fmt = app.add_subcommand("fmt", "Parse and pretty-print a document");
  fmt->add_option("file", common.file, "Input .glp file")->required();

  auto* run_cmd = app.add_subcommand("run", "Print one random execution");
  add_common(run_cmd);
  run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
  run_cmd->add_option("--steps", run.steps, "Maximum number of steps")->capture_default_str();
  run_cmd->add_option("--budget", run.budget, "Copies per replication")->capture_default_str();
  run_cmd->add_option("--script", run.script, "Document whose script drives reconfiguration");

  auto* explore_cmd = app.add_subcommand("explore", "Build the reachable state graph");
  add_common(explore_cmd);
  add_bounds(explore_cmd, bounds);
  explore_cmd->add_option("--jobs", common.jobs, "Worker threads")->capture_default_str();
  explore_cmd->add_option("--out", out_path, "Write the graph (.json or edge list)");

  auto* analyze_cmd = app.add_subcommand("analyze", "Compute the least estimate");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--out", out_path, "Write the estimate as JSON");

  auto* check_cmd = app.add_subcommand("check", "Check resources statically and dynamically");
  add_common(check_cmd);
  add_bounds(check_cmd, bounds);
  check_cmd->add_option("--jobs", common.jobs, "Worker threads")->capture_default_str();
  check_cmd->add_option("--resource", resources, "Resource to check (default: every free resource)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitParseError;
  }

  try {
    if (*fmt) return cmd_fmt(common, out);
    if (*run_cmd) return cmd_run(args, common, run, out);
    if (*explore_cmd) return cmd_explore(args, common, bounds, out_path, out);
    if (*analyze_cmd) return cmd_analyze(args, common, out_path, out);
    return cmd_check(args, common, bounds, resources, out);
  } catch (const ParseError& e) {
    err << common.file << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return kExitParseError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

}  // namespace glp
