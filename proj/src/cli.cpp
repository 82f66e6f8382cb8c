#include "motifclust/cli.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "motifclust/motif_io.hpp"
#include "motifclust/prior_sim.hpp"
#include "motifclust/sampler.hpp"
#include "motifclust/summaries.hpp"
#include "motifclust/trace_io.hpp"

#ifndef MOTIFCLUST_VERSION
#define MOTIFCLUST_VERSION "0.0.0"
#endif

namespace motifclust::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";
const std::vector<std::size_t> kDiagnosticLags{1, 5, 10, 50};

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

/// Failure with a chosen exit code.
struct CliFailure : std::runtime_error {
  CliFailure(int code, const std::string& message) : std::runtime_error(message), code(code) {}
  int code;
};

[[noreturn]] void usage_error(const std::string& message) { throw CliFailure(kUsage, message); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure(kRuntimeError, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliFailure(kRuntimeError, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw CliFailure(kRuntimeError, "failed writing '" + path.string() + "'");
}

fs::path resolve_out_dir(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty()) {
    const char* env = std::getenv(kOutputEnv);
    dir = env && *env ? env : "motifclust_out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliFailure(kRuntimeError, "cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::array<double, 4> parse_theta(const std::string& text) {
  std::array<double, 4> theta{};
  std::stringstream in(text);
  std::string item;
  std::size_t k = 0;
  while (std::getline(in, item, ',')) {
    if (k == 4) usage_error("--theta0 takes exactly four comma-separated values");
    try {
      std::size_t used = 0;
      theta[k] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage_error("--theta0: bad number '" + item + "'");
    }
    ++k;
  }
  if (k != 4) usage_error("--theta0 takes exactly four comma-separated values");
  return theta;
}

// --- Shared input handling ------------------------------------------------

struct InputFile {
  std::string path;
  std::string format;  // auto | jaspar | transfac
};

struct LoadedInputs {
  std::vector<MotifRecord> records;  // after the width filter
  std::vector<DroppedRecord> dropped;
  json inputs = json::array();
  std::size_t parsed = 0;
  std::vector<std::string> warnings;
};

LoadedInputs load_inputs(const std::vector<InputFile>& files, const ParseOptions& options,
                         int min_width) {
  LoadedInputs loaded;
  std::vector<MotifRecord> all;
  std::map<std::string, std::string> owner;
  for (const auto& file : files) {
    const auto text = read_file(file.path);
    MotifFormat format;
    if (file.format == "jaspar") {
      format = MotifFormat::Jaspar;
    } else if (file.format == "transfac") {
      format = MotifFormat::Transfac;
    } else {
      format = detect_format(text);
    }
    ParseOptions file_options = options;
    file_options.fallback_id = fs::path(file.path).stem().string();
    ParseResult parsed;
    try {
      parsed = parse_motifs(text, format, file_options);
    } catch (const ParseError& e) {
      throw CliFailure(kParseError, file.path + ": " + e.what());
    }
    for (const auto& w : parsed.warnings) loaded.warnings.push_back(file.path + ": " + w);
    for (auto& r : parsed.records) {
      auto [it, inserted] = owner.try_emplace(r.id, file.path);
      if (!inserted) {
        throw CliFailure(kParseError, file.path + ": record id '" + r.id + "' already defined in " + it->second);
      }
      all.push_back(std::move(r));
    }
    loaded.inputs.push_back({{"path", fs::absolute(file.path).lexically_normal().string()},
                             {"format", format == MotifFormat::Jaspar ? "jaspar" : "transfac"},
                             {"sha256", sha256_hex(text)},
                             {"records", parsed.records.size()}});
  }
  loaded.parsed = all.size();
  auto filtered = filter_min_width(all, min_width);
  loaded.records = std::move(filtered.kept);
  loaded.dropped = std::move(filtered.dropped);
  return loaded;
}

std::vector<std::string> ids_of(const std::vector<MotifRecord>& records) {
  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.id);
  return ids;
}

std::vector<CountMatrix> matrices_of(const std::vector<MotifRecord>& records) {
  std::vector<CountMatrix> m;
  for (const auto& r : records) m.push_back(r.matrix);
  return m;
}

json hyper_to_json(const Hyperparameters& h) {
  return {{"alpha", h.alpha},         {"b", h.b},          {"lambda", h.lambda},
          {"min_width", h.min_width}, {"theta0", h.theta0}, {"prior", to_string(h.prior)}};
}

Hyperparameters hyper_from_json(const json& j) {
  Hyperparameters h;
  h.alpha = j.at("alpha").get<double>();
  h.b = j.at("b").get<double>();
  h.lambda = j.at("lambda").get<double>();
  h.min_width = j.at("min_width").get<int>();
  h.theta0 = j.at("theta0").get<std::array<double, 4>>();
  h.prior = prior_kind_from_string(j.at("prior").get<std::string>());
  return h;
}

/// Every summary file, written from the same inputs by cluster and summarize.
std::vector<std::string> write_summaries(const fs::path& dir, const ClusterModel& model,
                                         const std::vector<MotifRecord>& records,
                                         const std::vector<RunTrace>& traces, double level) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(name);
  };
  const auto ids = ids_of(records);
  const auto pooled = pairwise_probabilities(std::span<const RunTrace>(traces));
  emit("pairwise.tsv", pairwise_tsv(pooled, ids));
  if (traces.size() > 1) {
    for (std::size_t c = 0; c < traces.size(); ++c) {
      emit("pairwise_chain_" + std::to_string(c) + ".tsv", pairwise_tsv(pairwise_probabilities(traces[c]), ids));
    }
  }
  if (records.size() >= 2) {
    emit("tree.nwk", to_newick(average_linkage_tree(pooled.distances()), ids) + "\n");
  }

  std::size_t best_chain = 0;
  for (std::size_t c = 1; c < traces.size(); ++c) {
    if (traces[c].best.log_joint > traces[best_chain].best.log_joint) best_chain = c;
  }
  const auto report = best_partition_report(model, traces[best_chain].best, records);
  emit("best_partition.tsv", report_tsv(report));
  emit("best_partition.json", report_json(report));
  emit("super_matrices.jaspar", export_super_matrices(report));
  emit("super_matrices_ic.tsv", super_matrix_ic_tsv(report, model.hyper().theta0));
  emit("width_intervals.tsv", width_intervals_tsv(width_intervals(std::span<const RunTrace>(traces), level), ids));
  emit("diagnostics.tsv", diagnostics_tsv(traces, kDiagnosticLags));
  return written;
}

std::string trace_file_name(std::size_t chain, TraceFormat format) {
  return "chain_" + std::to_string(chain) + (format == TraceFormat::Text ? ".trace" : ".bin");
}

// --- cluster ----------------------------------------------------------------

struct ClusterArgs {
  std::vector<std::string> inputs;
  std::string format = "auto";
  double alpha = 1.0;
  double b = 1.0;
  double lambda = 8.0;
  int min_width = 6;
  std::string prior = "dp";
  std::string theta0 = "0.25,0.25,0.25,0.25";
  std::int64_t iterations = 1000;
  std::optional<std::int64_t> burn_in;
  int align_every = 10;
  int thin = 1;
  int chains = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string init = "singletons";
  double level = 0.95;
  std::string trace_format = "text";
  bool strict = false;
};

int cmd_cluster(const ClusterArgs& a, std::ostream& out, std::ostream& err) {
  Hyperparameters hyper;
  hyper.alpha = a.alpha;
  hyper.b = a.b;
  hyper.lambda = a.lambda;
  hyper.min_width = a.min_width;
  hyper.theta0 = parse_theta(a.theta0);
  RunConfig config;
  config.iterations = a.iterations;
  config.burn_in = a.burn_in;
  config.align_every = a.align_every;
  config.thin = a.thin;
  try {
    hyper.prior = prior_kind_from_string(a.prior);
    config.init = init_mode_from_string(a.init);
    hyper.validate();
    config.validate();
  } catch (const std::invalid_argument& e) {
    usage_error(e.what());
  }
  if (config.iterations < 1) usage_error("--iters must be >= 1");
  if (a.chains < 1) usage_error("--chains must be >= 1");
  if (!(a.level > 0.0 && a.level < 1.0)) usage_error("--level must lie strictly between 0 and 1");
  if ((config.iterations - config.effective_burn_in()) < config.thin) {
    usage_error("no snapshot would be recorded: --thin exceeds the post-burn-in iterations");
  }
  TraceFormat trace_format;
  try {
    trace_format = trace_format_from_string(a.trace_format);
  } catch (const std::invalid_argument& e) {
    usage_error(e.what());
  }

  std::vector<InputFile> files;
  for (const auto& p : a.inputs) files.push_back({p, a.format});
  ParseOptions options;
  options.strict_column_sums = a.strict;
  auto loaded = load_inputs(files, options, hyper.min_width);
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  if (loaded.records.empty()) throw CliFailure(kRuntimeError, "no motifs left after the width filter");

  const auto dir = resolve_out_dir(a.out);
  write_file(dir / "motifs.json", to_canonical_document(loaded.records));

  json manifest;
  manifest["format"] = "motifclust.manifest";
  manifest["version"] = 1;
  manifest["tool_version"] = MOTIFCLUST_VERSION;
  manifest["status"] = "running";
  manifest["hyperparameters"] = hyper_to_json(hyper);
  manifest["config"] = {{"iterations", config.iterations},
                        {"burn_in", config.effective_burn_in()},
                        {"align_every", config.align_every},
                        {"thin", config.thin},
                        {"chains", a.chains},
                        {"seed", a.seed},
                        {"init", to_string(config.init)},
                        {"level", a.level},
                        {"trace_format", to_string(trace_format)},
                        {"strict_column_sums", a.strict}};
  manifest["inputs"] = loaded.inputs;
  manifest["records_parsed"] = loaded.parsed;
  manifest["records_retained"] = loaded.records.size();
  json dropped = json::array();
  for (const auto& d : loaded.dropped) dropped.push_back({{"id", d.id}, {"width", d.width}, {"reason", d.reason}});
  manifest["dropped"] = dropped;
  json chains = json::array();
  for (int c = 0; c < a.chains; ++c) {
    chains.push_back({{"index", c},
                      {"seed", Rng::derive_seed(a.seed, static_cast<std::uint64_t>(c))},
                      {"trace", trace_file_name(c, trace_format)},
                      {"sha256", nullptr}});
  }
  manifest["chains"] = chains;
  write_file(dir / kManifestName, manifest.dump(2) + "\n");

  const ClusterModel model(matrices_of(loaded.records), hyper);
  std::vector<std::uint64_t> seeds;
  for (int c = 0; c < a.chains; ++c) seeds.push_back(Rng::derive_seed(a.seed, static_cast<std::uint64_t>(c)));
  std::vector<RunTrace> traces(a.chains);
  std::vector<std::string> failures(a.chains);
  g_interrupted.store(false);
  const auto previous = std::signal(SIGINT, on_interrupt);
  {
    std::vector<std::thread> workers;
    for (int c = 0; c < a.chains; ++c) {
      workers.emplace_back([&, c] {
        try {
          RunConfig chain_config = config;
          chain_config.seed = seeds[c];
          Rng rng(chain_config.seed);
          traces[c] = run(model, chain_config, rng, &g_interrupted);
        } catch (const std::exception& e) {
          failures[c] = e.what();
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  std::signal(SIGINT, previous);
  for (int c = 0; c < a.chains; ++c) {
    if (!failures[c].empty()) throw CliFailure(kRuntimeError, "chain " + std::to_string(c) + ": " + failures[c]);
  }

  for (int c = 0; c < a.chains; ++c) {
    const auto bytes = encode_trace(traces[c], trace_format);
    write_file(dir / trace_file_name(c, trace_format), bytes);
    manifest["chains"][c]["sha256"] = sha256_hex(bytes);
    manifest["chains"][c]["iterations_completed"] =
        traces[c].history.empty() ? 0 : traces[c].history.back().iteration;
  }
  const bool interrupted = g_interrupted.load();
  bool have_samples = false;
  for (const auto& t : traces) have_samples = have_samples || !t.samples.empty();
  std::vector<std::string> outputs;
  if (have_samples) outputs = write_summaries(dir, model, loaded.records, traces, a.level);
  manifest["outputs"] = outputs;
  manifest["status"] = interrupted ? "interrupted" : "complete";
  write_file(dir / kManifestName, manifest.dump(2) + "\n");

  out << "retained " << loaded.records.size() << " of " << loaded.parsed << " motifs";
  if (!loaded.dropped.empty()) out << " (" << loaded.dropped.size() << " below width " << hyper.min_width << ")";
  out << "\n";
  double best = traces.front().best.log_joint;
  for (const auto& t : traces) best = std::max(best, t.best.log_joint);
  out << "best log joint " << best << "\n";
  out << "outputs in " << dir.string() << "\n";
  if (interrupted) {
    err << "interrupted; traces hold the iterations completed so far\n";
    return kRuntimeError;
  }
  return kOk;
}

// --- summarize -----------------------------------------------------------

int cmd_summarize(const std::string& run_dir, const std::string& out_flag, double level,
                  std::ostream& out) {
  if (!(level > 0.0 && level < 1.0)) usage_error("--level must lie strictly between 0 and 1");
  const fs::path run(run_dir);
  const auto manifest_path = run / kManifestName;
  if (!fs::exists(manifest_path)) throw CliFailure(kRuntimeError, "missing manifest '" + manifest_path.string() + "'");
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw CliFailure(kRuntimeError, "malformed manifest '" + manifest_path.string() + "': " + e.what());
  }
  if (manifest.value("format", "") != "motifclust.manifest") {
    throw CliFailure(kRuntimeError, "'" + manifest_path.string() + "' is not a run manifest");
  }

  std::vector<InputFile> files;
  for (const auto& input : manifest.at("inputs")) {
    const auto path = input.at("path").get<std::string>();
    if (!fs::exists(path)) throw CliFailure(kRuntimeError, "missing input file '" + path + "'");
    const auto digest = sha256_hex(read_file(path));
    if (digest != input.at("sha256").get<std::string>()) {
      throw CliFailure(kRuntimeError, "input '" + path + "' does not match its manifest digest");
    }
    files.push_back({path, input.at("format").get<std::string>()});
  }
  const auto hyper = hyper_from_json(manifest.at("hyperparameters"));
  ParseOptions options;
  options.strict_column_sums = manifest.at("config").value("strict_column_sums", false);
  const auto loaded = load_inputs(files, options, hyper.min_width);
  if (loaded.records.size() != manifest.at("records_retained").get<std::size_t>()) {
    throw CliFailure(kRuntimeError, "inputs no longer yield the retained motif count in the manifest");
  }

  std::vector<RunTrace> traces;
  for (const auto& chain : manifest.at("chains")) {
    const auto path = run / chain.at("trace").get<std::string>();
    if (!fs::exists(path)) throw CliFailure(kRuntimeError, "missing trace file '" + path.string() + "'");
    const auto bytes = read_file(path);
    if (chain.at("sha256").is_null() || sha256_hex(bytes) != chain.at("sha256").get<std::string>()) {
      throw CliFailure(kRuntimeError, "trace '" + path.string() + "' does not match its manifest digest");
    }
    try {
      traces.push_back(decode_trace(bytes));
    } catch (const TraceError& e) {
      throw CliFailure(kRuntimeError, path.string() + ": " + e.what());
    }
    if (traces.back().motif_count != loaded.records.size()) {
      throw CliFailure(kRuntimeError, "trace '" + path.string() + "' covers a different number of motifs");
    }
  }
  const auto dir = out_flag.empty() ? run : resolve_out_dir(out_flag);
  fs::create_directories(dir);
  const ClusterModel model(matrices_of(loaded.records), hyper);
  const auto written = write_summaries(dir, model, loaded.records, traces, level);
  out << "wrote " << written.size() << " summary files to " << dir.string() << "\n";
  return kOk;
}

// --- prior-sim -------------------------------------------------------------

int cmd_prior_sim(int n, double b, int replicates, const std::string& prior, std::uint64_t seed,
                  const std::string& out_flag, std::ostream& out) {
  if (n < 1) usage_error("--n must be >= 1");
  if (!(b > 0.0)) usage_error("--b must be > 0");
  if (replicates < 1) usage_error("--replicates must be >= 1");
  std::vector<PriorKind> kinds;
  if (prior == "both") {
    kinds = {PriorKind::DirichletProcess, PriorKind::Uniform};
  } else {
    try {
      kinds = {prior_kind_from_string(prior)};
    } catch (const std::invalid_argument& e) {
      usage_error(e.what());
    }
  }
  const auto dir = resolve_out_dir(out_flag);
  for (auto kind : kinds) {
    PriorSimConfig config{n, b, kind, replicates, seed};
    const auto partitions = simulate_partitions(config);
    const auto stats = partition_stats(partitions);
    const auto name = "prior_sim_" + to_string(kind);
    write_file(dir / (name + ".tsv"), partition_stats_tsv(stats));
    std::string rows = "replicate\tclusters\tmulti_member_clusters\tmax_cluster_size\n";
    for (std::size_t r = 0; r < partitions.size(); ++r) {
      std::map<int, int> sizes;
      for (int z : partitions[r]) ++sizes[z];
      int multi = 0, largest = 0;
      for (const auto& [label, s] : sizes) {
        multi += s > 1;
        largest = std::max(largest, s);
      }
      rows += std::to_string(r) + '\t' + std::to_string(sizes.size()) + '\t' + std::to_string(multi) + '\t' +
              std::to_string(largest) + '\n';
    }
    write_file(dir / (name + "_replicates.tsv"), rows);
    out << to_string(kind) << ": mean clusters " << stats.mean_clusters << ", median multi-member clusters "
        << stats.median_multi_member() << ", max cluster size " << stats.max_observed_size << "\n";
  }
  return kOk;
}

// --- export-trace ------------------------------------------------------------

int cmd_export_trace(const std::string& input, const std::string& output, const std::string& format,
                     std::ostream& out) {
  TraceFormat target;
  try {
    target = trace_format_from_string(format);
  } catch (const std::invalid_argument& e) {
    usage_error(e.what());
  }
  if (!fs::exists(input)) throw CliFailure(kRuntimeError, "missing trace file '" + input + "'");
  RunTrace trace;
  try {
    trace = decode_trace(read_file(input));
  } catch (const TraceError& e) {
    throw CliFailure(kRuntimeError, input + ": " + e.what());
  }
  const auto bytes = encode_trace(trace, target);
  if (output.empty() || output == "-") {
    out << bytes;
  } else {
    write_file(output, bytes);
  }
  return kOk;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) {
    hex += kHex[digest[k] >> 4];
    hex += kHex[digest[k] & 0xF];
  }
  return hex;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian clustering of transcription factor motif count matrices", "motifclust"};
  app.set_version_flag("--version", MOTIFCLUST_VERSION);
  app.require_subcommand(1);

  ClusterArgs ca;
  auto* cluster = app.add_subcommand("cluster", "Sample partitions of a motif collection and summarise them");
  cluster->set_config("--config", "", "Read options from a TOML or INI file");
  cluster->add_option("--input,-i", ca.inputs, "Motif file (repeatable)")->required()->check(CLI::ExistingFile);
  cluster->add_option("--format", ca.format, "Input format")->check(CLI::IsMember({"auto", "jaspar", "transfac"}))->capture_default_str();
  cluster->add_option("--alpha", ca.alpha, "Dirichlet pseudo-count")->capture_default_str();
  cluster->add_option("--b", ca.b, "New-cluster weight")->capture_default_str();
  cluster->add_option("--lambda", ca.lambda, "Expected core width")->capture_default_str();
  cluster->add_option("--min-width", ca.min_width, "Minimum core width")->capture_default_str();
  cluster->add_option("--prior", ca.prior, "Partition prior")->check(CLI::IsMember({"dp", "uniform"}))->capture_default_str();
  cluster->add_option("--theta0", ca.theta0, "Background frequencies a,c,g,t")->capture_default_str();
  cluster->add_option("--iters", ca.iterations, "Gibbs iterations")->capture_default_str();
  cluster->add_option("--burn-in", ca.burn_in, "Burn-in iterations (default 20% of --iters)");
  cluster->add_option("--align-every", ca.align_every, "Alignment sweep cadence")->capture_default_str();
  cluster->add_option("--thin", ca.thin, "Keep every k-th post-burn-in snapshot")->capture_default_str();
  cluster->add_option("--chains", ca.chains, "Independent chains")->capture_default_str();
  cluster->add_option("--seed", ca.seed, "Base seed")->capture_default_str();
  cluster->add_option("--out,-o", ca.out, std::string("Output directory (default $") + kOutputEnv + ")");
  cluster->add_option("--init", ca.init, "Initial state")->check(CLI::IsMember({"singletons", "single", "random"}))->capture_default_str();
  cluster->add_option("--level", ca.level, "Width interval level")->capture_default_str();
  cluster->add_option("--trace-format", ca.trace_format, "Trace encoding")->check(CLI::IsMember({"text", "binary"}))->capture_default_str();
  cluster->add_flag("--strict-column-sums", ca.strict, "Reject matrices with unequal column totals");

  int ps_n = 106, ps_replicates = 1000;
  double ps_b = 1.0;
  std::string ps_prior = "both", ps_out;
  std::uint64_t ps_seed = 1;
  auto* prior_sim = app.add_subcommand("prior-sim", "Simulate partitions from the partition priors");
  prior_sim->add_option("--n", ps_n, "Observations per partition")->capture_default_str();
  prior_sim->add_option("--b", ps_b, "New-cluster weight")->capture_default_str();
  prior_sim->add_option("--replicates", ps_replicates, "Partitions per prior")->capture_default_str();
  prior_sim->add_option("--prior", ps_prior, "dp, uniform or both")->check(CLI::IsMember({"dp", "uniform", "both"}))->capture_default_str();
  prior_sim->add_option("--seed", ps_seed, "Base seed")->capture_default_str();
  prior_sim->add_option("--out,-o", ps_out, "Output directory");

  std::string sum_run, sum_out;
  double sum_level = 0.95;
  auto* summarize = app.add_subcommand("summarize", "Regenerate summaries from a finished run");
  summarize->add_option("--run", sum_run, "Run directory holding manifest.json")->required();
  summarize->add_option("--out,-o", sum_out, "Output directory (default: the run directory)");
  summarize->add_option("--level", sum_level, "Width interval level")->capture_default_str();

  std::string ex_in, ex_out, ex_format = "text";
  auto* export_trace = app.add_subcommand("export-trace", "Convert a trace between text and binary");
  export_trace->add_option("--trace", ex_in, "Trace file")->required();
  export_trace->add_option("--out,-o", ex_out, "Destination file (default stdout)");
  export_trace->add_option("--format", ex_format, "Target encoding")->check(CLI::IsMember({"text", "binary"}))->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("motifclust");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (cluster->parsed()) return cmd_cluster(ca, out, err);
    if (prior_sim->parsed()) return cmd_prior_sim(ps_n, ps_b, ps_replicates, ps_prior, ps_seed, ps_out, out);
    if (summarize->parsed()) return cmd_summarize(sum_run, sum_out, sum_level, out);
    if (export_trace->parsed()) return cmd_export_trace(ex_in, ex_out, ex_format, out);
  } catch (const CliFailure& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsage;
}

}  // namespace motifclust::cli
