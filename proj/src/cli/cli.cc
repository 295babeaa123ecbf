// Copyright 2026 The FedMed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedmed/cli/cli.h"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fedmed/cohort/csv.h"
#include "fedmed/cohort/omop.h"
#include "fedmed/cohort/schema.h"
#include "fedmed/core/audit.h"
#include "fedmed/federation.h"
#include "fedmed/pca/components.h"
#include "fedmed/surv/km.h"
#include "fedmed/synth/generator.h"
#include "json.hpp"

namespace fedmed {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kManifest[] = "manifest.json";
constexpr char kJobLog[] = "job_log.jsonl";

// FNV-1a, 64 bit. Stable across platforms, unlike std::hash.
std::string ContentHash(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", h);
}

absl::StatusOr<json> ReadJson(const fs::path& path) {
  auto text = ReadFile(path.string());
  if (!text.ok()) return text.status();
  try {
    return json::parse(*text);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(path.string(), ": ", e.what()));
  }
}

absl::Status WriteText(const fs::path& path, std::string_view text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) return absl::InternalError(absl::StrCat(path.parent_path().string(), ": ", ec.message()));
  return WriteFile(path.string(), text);
}

absl::Status WriteJson(const fs::path& path, const json& j) {
  return WriteText(path, j.dump(2) + "\n");
}

absl::StatusOr<uint64_t> ResolveSeed(const std::string& flag) {
  std::string text = flag;
  if (text.empty()) {
    const char* env = std::getenv("FEDMED_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    text = env;
  }
  uint64_t seed = 0;
  if (!absl::SimpleAtoi(text, &seed)) {
    return absl::InvalidArgumentError(absl::StrCat("ConfigInvalid: seed '", text,
                                                   "' is not a non-negative integer"));
  }
  return seed;
}

std::string CsvField(const json& v) {
  if (v.is_null()) return "NA";
  if (v.is_number()) return FormatNumber(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) return CsvEscape(v.get<std::string>());
  return CsvEscape(v.dump());
}

std::string RecordsCsv(const json& records, const std::vector<std::string>& keys) {
  std::string out = absl::StrCat(absl::StrJoin(keys, ","), "\n");
  for (const json& r : records) {
    std::vector<std::string> fields;
    for (const std::string& k : keys) fields.push_back(CsvField(r.value(k, json(nullptr))));
    absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  }
  return out;
}

std::string MatrixCsv(const std::string& corner, const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels, const json& matrix) {
  std::vector<std::string> header = {corner};
  for (const std::string& c : col_labels) header.push_back(CsvEscape(c));
  std::string out = absl::StrCat(absl::StrJoin(header, ","), "\n");
  for (size_t r = 0; r < row_labels.size(); ++r) {
    std::vector<std::string> fields = {CsvEscape(row_labels[r])};
    for (const json& v : matrix.at(r)) fields.push_back(CsvField(v));
    absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  }
  return out;
}

void PrintError(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  bool use_default = false;
  std::string config_path;
  std::string seed;
  std::string out;
};

int Generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.use_default == !opts.config_path.empty()) {
    err << "error: ConfigInvalid: pass exactly one of --default or --config\n";
    return kExitConfig;
  }
  auto seed = ResolveSeed(opts.seed);
  if (!seed.ok()) {
    PrintError(err, seed.status());
    return ExitCodeFor(seed.status());
  }
  FederationGenConfig config;
  if (opts.use_default) {
    config = DefaultTwoSiteConfig();
  } else {
    auto j = ReadJson(opts.config_path);
    if (!j.ok()) {
      PrintError(err, j.status());
      return kExitConfig;
    }
    auto parsed = ConfigFromJson(*j);
    if (!parsed.ok()) {
      PrintError(err, parsed.status());
      return kExitConfig;
    }
    config = *std::move(parsed);
  }
  config = WithSeed(std::move(config), *seed);
  if (absl::Status s = ValidateConfig(config); !s.ok()) {
    PrintError(err, s);
    return kExitConfig;
  }
  auto tables = GenerateFederation(config);
  if (!tables.ok()) {
    PrintError(err, tables.status());
    return ExitCodeFor(tables.status());
  }

  const fs::path root(opts.out);
  const json config_json = ConfigToJson(config);
  json sites = json::array();
  std::vector<std::string> outputs;
  int64_t total = 0;
  for (const CohortTable& table : *tables) {
    const std::string csv = (fs::path("data") / (table.site_id() + ".csv")).generic_string();
    if (absl::Status s = WriteText(root / csv, WriteCsv(table)); !s.ok()) {
      PrintError(err, s);
      return kExitOther;
    }
    outputs.push_back(csv);
    auto omop = ExportOmop(table);
    if (!omop.ok()) {
      PrintError(err, omop.status());
      return kExitOther;
    }
    const fs::path omop_dir = fs::path("omop") / table.site_id();
    std::error_code ec;
    fs::create_directories(root / omop_dir, ec);
    if (absl::Status s = WriteOmop(*omop, (root / omop_dir).string()); !s.ok()) {
      PrintError(err, s);
      return kExitOther;
    }
    for (const OmopRowSet& set : *omop) {
      outputs.push_back(
          (omop_dir / (std::string(OmopTableName(set.table)) + ".csv")).generic_string());
    }
    sites.push_back({{"site_id", table.site_id()},
                     {"rows", table.num_rows()},
                     {"csv", csv},
                     {"omop", omop_dir.generic_string()}});
    total += static_cast<int64_t>(table.num_rows());
  }
  std::sort(outputs.begin(), outputs.end());
  const json manifest = {{"command", "generate"},
                         {"seed", *seed},
                         {"config_hash", ContentHash(config_json.dump())},
                         {"config", config_json},
                         {"sites", sites},
                         {"total_rows", total},
                         {"outputs", outputs}};
  if (absl::Status s = WriteJson(root / kManifest, manifest); !s.ok()) {
    PrintError(err, s);
    return kExitOther;
  }
  out << "generated " << tables->size() << " sites, " << total << " rows in " << opts.out << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- run

struct RunOptions {
  std::string workflow;
  std::string data;
  std::string policy;
  std::string out;
  double event_threshold = kDefaultEventThreshold;
  int64_t interval_width_days = kDefaultIntervalWidthDays;
  int max_rounds = 30;
  int pca_k = kDefaultComponents;
};

struct LoadedData {
  json manifest;
  std::vector<CohortTable> tables;
};

absl::StatusOr<LoadedData> LoadData(const fs::path& dir) {
  LoadedData data;
  auto manifest = ReadJson(dir / kManifest);
  if (!manifest.ok()) return manifest.status();
  data.manifest = *std::move(manifest);
  try {
    for (const json& site : data.manifest.at("sites")) {
      auto table = LoadCsv((dir / site.at("csv").get<std::string>()).string(), StandardSchema(),
                           site.at("site_id").get<std::string>());
      if (!table.ok()) return table.status();
      data.tables.push_back(*std::move(table));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("ConfigInvalid: data manifest: ", e.what()));
  }
  if (data.tables.empty()) return absl::InvalidArgumentError("ConfigInvalid: no sites in data");
  return data;
}

// One submitted job and the files written from its result.
struct Artifact {
  std::string name;
  std::string mode;
  json params;
  std::function<absl::Status(const json& result, const fs::path& root,
                             std::vector<std::string>& outputs)>
      write;
};

absl::Status Emit(const fs::path& root, const std::string& name, std::string_view text,
                  std::vector<std::string>& outputs) {
  outputs.push_back(name);
  return WriteText(root / name, text);
}

std::vector<Artifact> ArtifactsFor(const std::string& workflow, const RunOptions& opts) {
  std::vector<Artifact> jobs;
  auto json_writer = [](std::string file) {
    return [file](const json& result, const fs::path& root, std::vector<std::string>& outputs) {
      return Emit(root, file, result.dump(2) + "\n", outputs);
    };
  };
  if (workflow == "tableone") {
    jobs.push_back({"tableone", "tableone", json::object(),
                    [](const json& r, const fs::path& root, std::vector<std::string>& outputs) {
                      absl::Status s = Emit(root, "tableone.csv",
                                            RecordsCsv(r.at("numeric"),
                                                       {"variable", "n", "mean", "sd", "min", "q1",
                                                        "median", "q3", "max"}),
                                            outputs);
                      if (!s.ok()) return s;
                      return Emit(root, "tableone_dates.csv",
                                  RecordsCsv(r.at("dates"),
                                             {"variable", "n", "min", "q1", "median", "q3", "max"}),
                                  outputs);
                    }});
  } else if (workflow == "boxplot") {
    jobs.push_back({"boxplot", "boxplot", json::object(), json_writer("boxplot.json")});
  } else if (workflow == "correlation") {
    jobs.push_back({"correlation", "correlation", json::object(),
                    [](const json& r, const fs::path& root, std::vector<std::string>& outputs) {
                      const auto columns = r.at("columns").get<std::vector<std::string>>();
                      absl::Status s = Emit(root, "correlation.json", r.dump(2) + "\n", outputs);
                      for (const auto& [site, matrix] : r.at("per_site").items()) {
                        if (!s.ok()) return s;
                        s = Emit(root, absl::StrCat("correlation_", site, ".csv"),
                                 MatrixCsv("", columns, columns, matrix), outputs);
                      }
                      if (!s.ok()) return s;
                      return Emit(root, "correlation_federated.csv",
                                  MatrixCsv("", columns, columns, r.at("federated")), outputs);
                    }});
  } else if (workflow == "scatter") {
    jobs.push_back({"scatter", "binned_scatter", json::object(), json_writer("scatter.json")});
  } else if (workflow == "km") {
    jobs.push_back({"km", "km",
                    {{"event_threshold", opts.event_threshold},
                     {"interval_width_days", opts.interval_width_days}},
                    json_writer("km.json")});
  } else if (workflow == "cox") {
    jobs.push_back({"cox", "cox",
                    {{"event_threshold", opts.event_threshold},
                     {"interval_width_days", opts.interval_width_days},
                     {"num_rounds", opts.max_rounds}},
                    [](const json& r, const fs::path& root, std::vector<std::string>& outputs) {
                      absl::Status s = Emit(root, "cox.json", r.dump(2) + "\n", outputs);
                      if (!s.ok()) return s;
                      json rows = json::array();
                      const auto& features = r.at("features");
                      for (size_t k = 0; k < features.size(); ++k) {
                        rows.push_back({{"feature", features[k]},
                                        {"beta", r.at("beta")[k]},
                                        {"beta_normalized", r.at("beta_normalized")[k]}});
                      }
                      return Emit(root, "cox_coefficients.csv",
                                  RecordsCsv(rows, {"feature", "beta", "beta_normalized"}),
                                  outputs);
                    }});
  } else if (workflow == "pca") {
    jobs.push_back({"pca", "pca", {{"k", opts.pca_k}},
                    [](const json& r, const fs::path& root, std::vector<std::string>& outputs) {
                      absl::Status s = Emit(root, "pca.json", r.dump(2) + "\n", outputs);
                      if (!s.ok()) return s;
                      return Emit(root, "pca_transform.csv",
                                  MatrixCsv("feature",
                                            r.at("features").get<std::vector<std::string>>(),
                                            r.at("components").get<std::vector<std::string>>(),
                                            r.at("matrix")),
                                  outputs);
                    }});
    jobs.push_back({"cox_pca", "cox",
                    {{"event_threshold", opts.event_threshold},
                     {"interval_width_days", opts.interval_width_days},
                     {"num_rounds", opts.max_rounds},
                     {"pca", true},
                     {"pca_k", opts.pca_k}},
                    json_writer("cox_pca.json")});
  }
  return jobs;
}

int Run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<std::string> workflows;
  if (opts.workflow == "all") {
    workflows = RunWorkflows();
  } else if (std::find(RunWorkflows().begin(), RunWorkflows().end(), opts.workflow) !=
             RunWorkflows().end()) {
    workflows = {opts.workflow};
  } else {
    err << "error: ConfigInvalid: unknown workflow '" << opts.workflow << "'\n";
    return kExitConfig;
  }

  auto data = LoadData(opts.data);
  if (!data.ok()) {
    PrintError(err, data.status());
    return ExitCodeFor(data.status());
  }
  AssetPolicy policy = DefaultPolicy();
  json policy_source = "default";
  if (!opts.policy.empty()) {
    auto j = ReadJson(opts.policy);
    if (!j.ok()) {
      PrintError(err, j.status());
      return kExitConfig;
    }
    auto parsed = PolicyFromJson(*j);
    if (!parsed.ok()) {
      PrintError(err, parsed.status());
      return kExitConfig;
    }
    policy = *std::move(parsed);
    policy_source = *j;
  }
  auto federation = BuildFederation(data->tables, policy);
  if (!federation.ok()) {
    PrintError(err, federation.status());
    return ExitCodeFor(federation.status());
  }

  const fs::path root(opts.out);
  std::vector<std::string> outputs;
  json jobs = json::array();
  int exit_code = kExitOk;
  for (const std::string& workflow : workflows) {
    for (const Artifact& artifact : ArtifactsFor(workflow, opts)) {
      auto job = federation->orchestrator->SubmitJob(federation->compute_spec_id,
                                                     JobPayload{artifact.mode, artifact.params});
      if (!job.ok()) {
        PrintError(err, job.status());
        exit_code = ExitCodeFor(job.status());
        break;
      }
      jobs.push_back({{"job_id", job->job_id},
                      {"name", artifact.name},
                      {"payload", JobPayloadToJson(job->payload)},
                      {"status", std::string(JobStatusName(job->status))}});
      if (job->status != JobStatus::kSucceeded) {
        err << "error: job " << job->job_id << " (" << artifact.name << ") "
            << JobStatusName(job->status) << ": " << job->error.message() << "\n";
        exit_code = ExitCodeFor(job->error);
        break;
      }
      if (absl::Status s = artifact.write(job->result, root, outputs); !s.ok()) {
        PrintError(err, s);
        exit_code = kExitOther;
        break;
      }
      out << job->job_id << " " << artifact.name << " succeeded\n";
    }
    if (exit_code != kExitOk) break;
  }

  outputs.push_back(kJobLog);
  if (absl::Status s = WriteText(root / kJobLog, federation->orchestrator->log().Contents());
      !s.ok()) {
    PrintError(err, s);
    return kExitOther;
  }
  std::sort(outputs.begin(), outputs.end());
  std::error_code ec;
  fs::path data_ref = fs::relative(fs::absolute(opts.data), fs::absolute(root), ec);
  if (ec || data_ref.empty()) data_ref = fs::absolute(opts.data);
  const json manifest = {
      {"command", "run"},
      {"workflow", opts.workflow},
      {"seed", data->manifest.value("seed", json(nullptr))},
      {"config_hash", data->manifest.value("config_hash", json(nullptr))},
      {"data", data_ref.generic_string()},
      {"policy", policy_source},
      {"min_cell_count", policy.min_cell_count},
      {"flags",
       {{"event_threshold", opts.event_threshold},
        {"interval_width_days", opts.interval_width_days},
        {"max_rounds", opts.max_rounds},
        {"pca_k", opts.pca_k}}},
      {"compute_spec_id", federation->compute_spec_id},
      {"jobs", jobs},
      {"log", kJobLog},
      {"outputs", outputs}};
  if (absl::Status s = WriteJson(root / kManifest, manifest); !s.ok()) {
    PrintError(err, s);
    return kExitOther;
  }
  return exit_code;
}

// ------------------------------------------------------------------- audit

int Audit(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
  auto manifest = ReadJson(manifest_path);
  if (!manifest.ok()) {
    PrintError(err, manifest.status());
    return kExitConfig;
  }
  const fs::path root = fs::path(manifest_path).parent_path();
  std::string log_name;
  std::string data_ref;
  int64_t k = 5;
  try {
    log_name = manifest->at("log").get<std::string>();
    data_ref = manifest->at("data").get<std::string>();
    k = manifest->value("min_cell_count", int64_t{5});
  } catch (const json::exception& e) {
    err << "error: ConfigInvalid: run manifest: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path data_dir = fs::path(data_ref).is_absolute() ? fs::path(data_ref) : root / data_ref;
  auto data = LoadData(data_dir);
  if (!data.ok()) {
    PrintError(err, data.status());
    return ExitCodeFor(data.status());
  }
  IdentifierScanner scanner;
  for (const CohortTable& table : data->tables) {
    auto idx = table.schema().Require(col::kPid);
    if (!idx.ok()) continue;
    for (const Row& row : table.rows()) {
      if (const std::string* pid = std::get_if<std::string>(&row[*idx])) scanner.Add(*pid);
    }
  }
  auto text = ReadFile((root / log_name).string());
  if (!text.ok()) {
    PrintError(err, text.status());
    return kExitConfig;
  }
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text->size()) {
    size_t end = text->find('\n', start);
    if (end == std::string::npos) end = text->size();
    if (end > start) lines.push_back(text->substr(start, end - start));
    start = end + 1;
  }
  const AuditReport report = AuditMessages(lines, scanner, k);
  for (const AuditFinding& f : report.findings) {
    out << "line " << f.line << ": " << f.kind << ": " << f.message << ": " << f.detail << "\n";
  }
  out << report.messages_scanned << " messages scanned, " << report.findings.size()
      << " violations\n";
  return report.clean() ? kExitOk : kExitAudit;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
      return kExitConfig;
    case absl::StatusCode::kPermissionDenied:
      return kExitPolicy;
    case absl::StatusCode::kFailedPrecondition:
      return kExitNumeric;
    default:
      return kExitOther;
  }
}

const std::vector<std::string>& RunWorkflows() {
  static const auto* const kWorkflows = new std::vector<std::string>{
      "tableone", "boxplot", "correlation", "scatter", "km", "cox", "pca"};
  return *kWorkflows;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated analytics over synthetic MS cohorts", "fedmed"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate synthetic site cohorts");
  generate->add_flag("--default", gen.use_default, "Use the default two-site configuration");
  generate->add_option("--config", gen.config_path, "Generator configuration JSON");
  generate->add_option("--seed", gen.seed, "Seed (falls back to FEDMED_SEED, then 42)");
  generate->add_option("--out", gen.out, "Output directory")->required();

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run federated workflows over generated data");
  run_cmd->add_option("--workflow", run.workflow, "tableone|boxplot|correlation|scatter|km|cox|pca|all")
      ->required();
  run_cmd->add_option("--data", run.data, "Directory written by generate")->required();
  run_cmd->add_option("--policy", run.policy, "Asset policy JSON (default policy if omitted)");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--event-threshold", run.event_threshold, "EDSS event threshold");
  run_cmd->add_option("--interval-width-days", run.interval_width_days, "KM interval width")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-rounds", run.max_rounds, "Cox Newton round limit")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--pca-k", run.pca_k, "Principal components")->check(CLI::PositiveNumber);

  std::string manifest;
  CLI::App* audit = app.add_subcommand("audit", "Scan a run's message log for leaks");
  audit->add_option("--run", manifest, "Run manifest.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (generate->parsed()) return Generate(gen, out, err);
  if (run_cmd->parsed()) return Run(run, out, err);
  return Audit(manifest, out, err);
}

}  // namespace fedmed
