#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "synpart/connectome.hpp"
#include "synpart/container.hpp"
#include "synpart/coverage.hpp"
#include "synpart/encoder.hpp"
#include "synpart/errors.hpp"
#include "synpart/evaluation.hpp"
#include "synpart/extractor.hpp"
#include "synpart/offsets.hpp"
#include "synpart/synth.hpp"
#include "synpart/text_format.hpp"

namespace synpart::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  unsigned threads = 0;
  int verbose = 0;

  std::string annotations, segmentation, offsets = "paper", out;
  std::string lengths = "80,120,160", radii = "60,100,140", counts = "2,4,6,8,10,12,14";

  std::string scores;
  double t1 = 0.5;
  double t2 = 2500;
  std::optional<double> t2_fraction;
  int connectivity = 26;

  std::string pred, gt, report;
  double tolerance_nm = 400;
  std::string tolerance_mode = "per-endpoint";
  bool no_segment_match = false;

  std::string partners, diff, diff_out, neurons;

  std::string shape = "128,128,32", resolution = "4,4,40", dist = "80,140";
  std::size_t segments = 20, synapses = 15;
  std::uint64_t seed = 7;
  bool no_coverage_check = false;

  std::string labels;
  double sigma = 0.0, blob_rate = 0.0, drop_prob = 0.0;

  std::string work_dir;
};

class Logger {
 public:
  Logger(std::ostream& err, const int& level) : err_(err), level_(level) {}
  void info(const std::string& msg) const {
    if (level_ >= 1) err_ << "[info] " << msg << '\n';
  }
  void warn(const std::string& msg) const { err_ << "[warn] " << msg << '\n'; }

 private:
  std::ostream& err_;
  const int& level_;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& f : split_fields(text, ", \t")) out.push_back(parse_double(f, what));
  if (out.empty()) throw ValidationError(what + " must not be empty");
  return out;
}

bool is_hdf5_path(const std::string& path) {
  auto ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".h5" || ext == ".hdf5" || ext == ".hdf";
}

void require_input(const std::string& path, const std::string& flag) {
  if (path.empty()) throw ValidationError(flag + " is required");
  if (!fs::exists(path)) throw IoError("input file not found for " + flag + ": '" + path + "'");
}

void require_output(const std::string& path, const std::string& flag) {
  if (path.empty()) throw ValidationError(flag + " is required");
}

/// Key=value lines describing every option of the subcommand, for provenance.
std::string parameter_text(const CLI::App& sub) {
  std::ostringstream os;
  os << "command=" << sub.get_name() << '\n';
  os << "toolkit_version=" << kToolkitVersion << '\n';
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "threads" || name == "verbose") continue;
    std::string value;
    if (opt->count() > 0) {
      auto res = opt->reduced_results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      if (opt->get_expected_max() == 0 && value.empty()) value = "true";
    } else {
      value = opt->get_default_str();
      if (opt->get_expected_max() == 0 && value.empty()) value = "false";
    }
    os << name << '=' << value << '\n';
  }
  return os.str();
}

nlohmann::ordered_json parameter_json(const std::string& text) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto eq = line.find('=');
    if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

nlohmann::ordered_json report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["fscore"] = r.fscore;
  auto matches = nlohmann::ordered_json::array();
  for (const auto& m : r.matches)
    matches.push_back({{"predicted_id", m.predicted_id}, {"ground_truth_id", m.ground_truth_id}, {"cost", m.cost}});
  j["matches"] = std::move(matches);
  return j;
}

PointAnnotationSet load_annotation_input(const std::string& path, const VolumeGeometry& geometry) {
  PointAnnotationSet set;
  set.geometry = geometry;
  set.annotations = read_partners(path);
  set.validate();
  return set;
}

OffsetSet load_offsets(const std::string& spec, const VolumeGeometry& geometry) {
  if (spec == "paper") return paper_offset_set(geometry);
  require_input(spec, "--offsets");
  OffsetSet o = read_offset_config(fs::path(spec));
  if (!(o.resolution() == geometry.resolution()))
    throw ValidationError("--offsets: config resolution " + to_string(o.resolution()) +
                          " differs from the segmentation resolution " + to_string(geometry.resolution()));
  return o;
}

Connectivity parse_connectivity(int c) {
  if (c == 6) return Connectivity::six;
  if (c == 26) return Connectivity::twenty_six;
  throw ValidationError("connectivity must be 6 or 26");
}

MatchingConstraint matching_from(const Options& o) {
  MatchingConstraint c;
  c.tolerance_nm = o.tolerance_nm;
  c.require_segment_match = !o.no_segment_match;
  if (o.tolerance_mode == "per-endpoint")
    c.mode = ToleranceMode::per_endpoint;
  else if (o.tolerance_mode == "sum")
    c.mode = ToleranceMode::sum;
  else
    throw ValidationError("tolerance-mode must be 'per-endpoint' or 'sum'");
  c.validate();
  return c;
}

SynthSpec synth_from(const Options& o) {
  SynthSpec s;
  s.geometry = VolumeGeometry(parse_vec3i(o.shape, "shape"), parse_vec3d(o.resolution, "resolution"));
  s.n_segments = o.segments;
  s.n_synapses = o.synapses;
  auto d = parse_list(o.dist, "dist");
  if (d.size() != 2) throw ValidationError("dist must be min,max");
  s.min_partner_distance_nm = d[0];
  s.max_partner_distance_nm = d[1];
  s.seed = o.seed;
  return s;
}

NoiseSpec noise_from(const Options& o) {
  NoiseSpec n;
  n.gaussian_sigma = o.sigma;
  n.false_blob_rate = o.blob_rate;
  n.drop_synapse_prob = o.drop_prob;
  n.seed = o.seed;
  n.validate();
  return n;
}

ExtractionParams extraction_from(const Options& o) {
  ExtractionParams p;
  p.t1 = o.t1;
  p.t2 = o.t2;
  p.connectivity = parse_connectivity(o.connectivity);
  p.validate();
  return p;
}

std::string comment_block(const std::string& text) {
  std::ostringstream os;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) os << "# " << line << '\n';
  return os.str();
}

// --- subcommands ----------------------------------------------------------

void cmd_gen_labels(const Options& o, const std::string& params, const Logger& log) {
  require_input(o.segmentation, "--segmentation");
  require_input(o.annotations, "--annotations");
  require_output(o.out, "--out");
  SegmentationVolume seg = load_segmentation(o.segmentation);
  OffsetSet offsets = load_offsets(o.offsets, seg.geometry());
  PointAnnotationSet ann = load_annotation_input(o.annotations, seg.geometry());
  log.info("encoding " + std::to_string(ann.size()) + " annotations over " + std::to_string(offsets.size()) +
           " offsets");
  EdgeScoreVolume labels = encode_labels(ann, offsets, seg, o.threads);
  save_edge_volume(o.out, labels, EdgeVolumeKind::labels, params);
}

void cmd_coverage_search(const Options& o, const std::string& params, const Logger& log) {
  require_input(o.segmentation, "--segmentation");
  require_input(o.annotations, "--annotations");
  require_output(o.out, "--out");
  SegmentationVolume seg = load_segmentation(o.segmentation);
  PointAnnotationSet ann = load_annotation_input(o.annotations, seg.geometry());
  std::vector<std::size_t> counts;
  for (double c : parse_list(o.counts, "counts")) {
    if (c < 1 || c != std::floor(c)) throw ValidationError("counts must be positive integers");
    counts.push_back(static_cast<std::size_t>(c));
  }
  auto result = grid_search_offsets(ann, seg, parse_list(o.lengths, "lengths"), counts, parse_list(o.radii, "radii"),
                                    o.threads);
  const auto& rep = result.report;
  std::ostringstream header;
  header << params << "n_e=" << result.offsets.size() << "\ncovered=" << rep.covered << "\ntotal=" << rep.total
         << "\nrate=" << format_double(rep.rate) << "\ncomplete=" << (result.complete ? "true" : "false") << '\n';
  if (!rep.uncovered_ids.empty()) {
    header << "uncovered_ids=";
    for (std::size_t i = 0; i < rep.uncovered_ids.size(); ++i) header << (i ? "," : "") << rep.uncovered_ids[i];
    header << '\n';
  }
  if (!rep.uncoverable_ids.empty()) {
    header << "uncoverable_ids=";
    for (std::size_t i = 0; i < rep.uncoverable_ids.size(); ++i) header << (i ? "," : "") << rep.uncoverable_ids[i];
    header << '\n';
  }
  log.info("evaluated " + std::to_string(result.configurations_evaluated) + " configurations; selected n_e=" +
           std::to_string(result.offsets.size()) + " r_syn=" + format_double(result.offsets.r_syn_nm()) +
           " coverage=" + format_double(rep.rate));
  if (!result.complete) log.warn("no configuration reaches full coverage; writing the best one found");
  write_file_atomic(o.out, format_offset_config(result.offsets, comment_block(header.str())));
}

void cmd_extract(const Options& o, const std::string& params, const Logger& log) {
  ExtractionParams p = extraction_from(o);
  require_input(o.scores, "--scores");
  require_input(o.segmentation, "--segmentation");
  require_output(o.out, "--out");
  SegmentationVolume seg = load_segmentation(o.segmentation);
  EdgeScoreVolume scores = load_edge_volume(o.scores, EdgeVolumeKind::scores);
  auto candidates = extract(scores, seg, p, o.threads);
  log.info("extracted " + std::to_string(candidates.size()) + " synaptic partners");
  std::vector<PartnerRecord> records;
  for (const auto& c : candidates) records.push_back(to_record(c));
  if (is_hdf5_path(o.out)) {
    save_annotations(o.out, {to_annotations(records), seg.geometry()}, params);
  } else {
    write_file_atomic(o.out, format_partner_tsv(records, params));
  }
}

void cmd_evaluate(const Options& o, const std::string& params, const Logger& log) {
  MatchingConstraint c = matching_from(o);
  require_input(o.pred, "--pred");
  require_input(o.gt, "--gt");
  require_input(o.segmentation, "--segmentation");
  require_output(o.report, "--report");
  SegmentationVolume seg = load_segmentation(o.segmentation);
  auto pred = read_partners(o.pred);
  auto gt = read_partners(o.gt);
  EvalReport r = evaluate(pred, gt, seg, c);
  log.info("tp=" + std::to_string(r.tp) + " fp=" + std::to_string(r.fp) + " fn=" + std::to_string(r.fn) +
           " fscore=" + format_double(r.fscore));
  nlohmann::ordered_json j;
  j["parameters"] = parameter_json(params);
  j.update(report_json(r));
  write_file_atomic(o.report, j.dump(2) + "\n");
}

std::optional<std::vector<Label>> neuron_list(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<Label> ids;
  for (const auto& f : split_fields(text, ", \t")) {
    long long v = parse_int(f, "neurons");
    if (v <= 0) throw ValidationError("neurons must be positive segment ids");
    ids.push_back(static_cast<Label>(v));
  }
  return ids;
}

void cmd_connmatrix(const Options& o, const std::string& params, const Logger& log) {
  require_input(o.partners, "--partners");
  require_input(o.segmentation, "--segmentation");
  require_output(o.out, "--out");
  if (!o.diff.empty()) require_input(o.diff, "--diff");
  SegmentationVolume seg = load_segmentation(o.segmentation);
  ConnectivityMatrix m = build_matrix(read_partners(o.partners), seg, neuron_list(o.neurons));
  if (!m.rejects.empty()) log.warn(std::to_string(m.rejects.size()) + " partners lie on background and were skipped");
  write_file_atomic(o.out, format_matrix_csv(m, params));
  if (!o.diff.empty()) {
    ConnectivityMatrix gt = read_matrix_csv(fs::path(o.diff));
    ConnectivityMatrix d = diff_matrix(m, gt);
    std::string diff_out = o.diff_out;
    if (diff_out.empty()) {
      fs::path p(o.out);
      diff_out = (p.parent_path() / (p.stem().string() + ".diff.csv")).string();
    }
    write_file_atomic(diff_out, format_matrix_csv(d, params));
    log.info("diff written to " + diff_out);
  }
}

void cmd_synth_gen(const Options& o, const std::string& params, const Logger& log) {
  SynthSpec spec = synth_from(o);
  require_output(o.out, "--out");
  if (!o.no_coverage_check) spec.coverable_by = load_offsets(o.offsets, spec.geometry);
  SynthVolume v = generate(spec, o.threads);
  log.info("planted " + std::to_string(v.annotations.size()) + " synapses across " + std::to_string(spec.n_segments) +
           " segments");
  save_cremi_container(o.out, {std::nullopt, v.segmentation, v.annotations}, params);
}

void cmd_simulate_scores(const Options& o, const std::string& params, const Logger&) {
  NoiseSpec noise = noise_from(o);
  require_input(o.labels, "--labels");
  require_output(o.out, "--out");
  EdgeScoreVolume labels = load_edge_volume(o.labels, EdgeVolumeKind::labels);
  save_edge_volume(o.out, labels_to_oracle_scores(labels, noise, o.threads), EdgeVolumeKind::scores, params);
}

void cmd_roundtrip(const Options& o, const std::string& params, const Logger& log) {
  RoundtripOptions r;
  r.synth = synth_from(o);
  r.noise = noise_from(o);
  r.params = extraction_from(o);
  r.matching = matching_from(o);
  r.t2_fraction = o.t2_fraction;
  if (r.t2_fraction && !(*r.t2_fraction >= 0)) throw ValidationError("t2-fraction must be >= 0");
  r.offsets = load_offsets(o.offsets, r.synth.geometry);
  require_output(o.report, "--report");
  RoundtripResult res = end_to_end_roundtrip(r, o.threads);
  log.info("roundtrip fscore=" + format_double(res.report.fscore));

  if (!o.work_dir.empty()) {
    fs::create_directories(o.work_dir);
    fs::path dir(o.work_dir);
    const auto& seg = res.volume.segmentation;
    save_cremi_container(dir / "synth.h5", {std::nullopt, seg, res.volume.annotations}, params);
    std::vector<PartnerRecord> records;
    for (const auto& c : res.candidates) records.push_back(to_record(c));
    write_file_atomic(dir / "partners.tsv", format_partner_tsv(records, params));
    auto pred_m = build_matrix(to_annotations(records), seg);
    auto gt_m = build_matrix(res.volume.annotations.annotations, seg);
    write_file_atomic(dir / "matrix_pred.csv", format_matrix_csv(pred_m, params));
    write_file_atomic(dir / "matrix_gt.csv", format_matrix_csv(gt_m, params));
    write_file_atomic(dir / "matrix_diff.csv", format_matrix_csv(diff_matrix(pred_m, gt_m), params));
  }

  nlohmann::ordered_json j;
  j["parameters"] = parameter_json(params);
  j["planted"] = res.volume.annotations.size();
  j["candidates"] = res.candidates.size();
  j["min_planted_confidence"] = res.min_planted_confidence;
  j["t2_used"] = res.t2;
  j.update(report_json(res.report));
  write_file_atomic(o.report, j.dump(2) + "\n");
}

// --- config handling --------------------------------------------------------

std::map<std::string, std::string> read_config(const std::string& path) {
  if (!fs::exists(path)) throw IoError("config file not found: '" + path + "'");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
    auto key = split_fields(line.substr(0, eq));
    if (key.size() != 1) throw ValidationError("config line " + std::to_string(lineno) + ": malformed key");
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    kv[key[0]] = value;
  }
  return kv;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Appends config values for every option not given explicitly.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& sub) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : read_config(config_path)) {
    if (key == "config" || key == "command" || key == "toolkit_version") continue;
    const CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw ValidationError("config key '" + key + "' is not an option of " + sub.get_name());
    }
    if (given_on_command_line(args, key)) continue;
    if (opt->get_expected_max() == 0) {
      if (value == "true" || value == "1" || value == "yes") merged.push_back("--" + key);
    } else {
      merged.push_back("--" + key + "=" + value);
    }
  }
  return merged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Synaptic partner toolkit: label encoding, coverage search, extraction, evaluation"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print toolkit and format versions");

  using Handler = void (*)(const Options&, const std::string&, const Logger&);
  std::map<std::string, Handler> handlers;
  auto add = [&](const std::string& name, const std::string& desc, Handler h) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", o.config, "key=value file whose keys mirror the flags");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_flag_function(
        "-v,--verbose", [&o](std::int64_t n) { o.verbose = static_cast<int>(n); }, "Log progress to stderr");
    handlers[name] = h;
    return sub;
  };

  auto* gen = add("gen-labels", "Encode point annotations as binary edge labels", cmd_gen_labels);
  gen->add_option("--annotations", o.annotations, "Annotation file (HDF5 container or text)");
  gen->add_option("--segmentation", o.segmentation, "HDF5 file with volumes/labels/neuron_ids");
  gen->add_option("--offsets", o.offsets, "Offset config file, or 'paper'")->capture_default_str();
  gen->add_option("--out", o.out, "Output HDF5 file");

  auto* cov = add("coverage-search", "Grid search for a minimal offset set with full coverage", cmd_coverage_search);
  cov->add_option("--annotations", o.annotations, "Annotation file");
  cov->add_option("--segmentation", o.segmentation, "Segmentation HDF5 file");
  cov->add_option("--lengths", o.lengths, "Candidate offset lengths in nm")->capture_default_str();
  cov->add_option("--radii", o.radii, "Candidate r_syn values in nm")->capture_default_str();
  cov->add_option("--counts", o.counts, "Admissible offset counts n_e")->capture_default_str();
  cov->add_option("--out", o.out, "Output offset config");

  auto* ext = add("extract", "Extract synaptic partners from an edge score volume", cmd_extract);
  ext->add_option("--scores", o.scores, "HDF5 file with volumes/pred_syn_partner_scores");
  ext->add_option("--segmentation", o.segmentation, "Segmentation HDF5 file");
  ext->add_option("--t1", o.t1, "Edge score threshold (score >= t1)")->capture_default_str();
  ext->add_option("--t2", o.t2, "Synapse confidence threshold (confidence > t2)")->capture_default_str();
  ext->add_option("--connectivity", o.connectivity, "Target component neighborhood, 6 or 26")->capture_default_str();
  ext->add_option("--out", o.out, "Output partner TSV (or .h5 for a CREMI annotation container)");

  auto* ev = add("evaluate", "Match predicted to ground-truth partners", cmd_evaluate);
  ev->add_option("--pred", o.pred, "Predicted partners");
  ev->add_option("--gt", o.gt, "Ground-truth partners");
  ev->add_option("--segmentation", o.segmentation, "Segmentation HDF5 file");
  ev->add_option("--tolerance-nm", o.tolerance_nm, "Matching tolerance d in nm")->capture_default_str();
  ev->add_option("--tolerance-mode", o.tolerance_mode, "per-endpoint or sum")->capture_default_str();
  ev->add_flag("--no-segment-match", o.no_segment_match, "Do not require segment ids to agree");
  ev->add_option("--report", o.report, "Output JSON report");

  auto* cm = add("connmatrix", "Build a connectivity matrix CSV", cmd_connmatrix);
  cm->add_option("--partners", o.partners, "Partner file");
  cm->add_option("--segmentation", o.segmentation, "Segmentation HDF5 file");
  cm->add_option("--neurons", o.neurons, "Optional comma-separated neuron ids");
  cm->add_option("--out", o.out, "Output matrix CSV");
  cm->add_option("--diff", o.diff, "Ground-truth matrix CSV to subtract");
  cm->add_option("--diff-out", o.diff_out, "Diff CSV path (default <out>.diff.csv)");

  auto add_synth = [&](CLI::App* s) {
    s->add_option("--shape", o.shape, "Voxels per axis x,y,z")->capture_default_str();
    s->add_option("--resolution", o.resolution, "nm per voxel x,y,z")->capture_default_str();
    s->add_option("--segments", o.segments, "Number of segments")->capture_default_str();
    s->add_option("--synapses", o.synapses, "Number of planted synapses")->capture_default_str();
    s->add_option("--dist", o.dist, "Partner distance range min,max in nm")->capture_default_str();
    s->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    s->add_option("--offsets", o.offsets, "Offset config or 'paper'")->capture_default_str();
  };
  auto add_noise = [&](CLI::App* s) {
    s->add_option("--sigma", o.sigma, "Gaussian noise sigma")->capture_default_str();
    s->add_option("--blob-rate", o.blob_rate, "Per-voxel spurious blob rate")->capture_default_str();
    s->add_option("--drop-prob", o.drop_prob, "Probability of dropping each positive region")->capture_default_str();
  };

  auto* sg = add("synth-gen", "Generate a synthetic segmentation with planted synapses", cmd_synth_gen);
  add_synth(sg);
  sg->add_flag("--no-coverage-check", o.no_coverage_check, "Do not require planted synapses to be covered");
  sg->add_option("--out", o.out, "Output HDF5 container");

  auto* ss = add("simulate-scores", "Turn binary edge labels into simulated classifier scores", cmd_simulate_scores);
  ss->add_option("--labels", o.labels, "HDF5 file with volumes/labels/syn_partner_edges");
  add_noise(ss);
  ss->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  ss->add_option("--out", o.out, "Output HDF5 score file");

  auto* rt = add("roundtrip", "Generate, encode, simulate, extract and evaluate in one go", cmd_roundtrip);
  add_synth(rt);
  add_noise(rt);
  rt->add_option("--t1", o.t1, "Edge score threshold")->capture_default_str();
  rt->add_option("--t2", o.t2, "Synapse confidence threshold")->capture_default_str();
  rt->add_option("--t2-fraction", o.t2_fraction, "Set t2 to this fraction of the minimum planted confidence");
  rt->add_option("--connectivity", o.connectivity, "6 or 26")->capture_default_str();
  rt->add_option("--tolerance-nm", o.tolerance_nm, "Matching tolerance d in nm")->capture_default_str();
  rt->add_option("--tolerance-mode", o.tolerance_mode, "per-endpoint or sum")->capture_default_str();
  rt->add_flag("--no-segment-match", o.no_segment_match, "Do not require segment ids to agree");
  rt->add_option("--report", o.report, "Output JSON report");
  rt->add_option("--work-dir", o.work_dir, "Also write intermediate files here");

  Logger log(err, o.verbose);
  try {
    std::vector<std::string> argv = args;
    if (!argv.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(argv.front())) {
        std::vector<std::string> rest(argv.begin() + 1, argv.end());
        rest = merge_config(rest, *sub);
        argv.resize(1);
        argv.insert(argv.end(), rest.begin(), rest.end());
      }
    }
    std::reverse(argv.begin(), argv.end());
    try {
      app.parse(argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n\n" << app.help();
      return kValidation;
    }
    if (version) {
      out << "synpart " << kToolkitVersion << " (container format " << kContainerFormatVersion
          << ", offset config format " << kOffsetConfigFormatVersion << ", partner tsv format "
          << kPartnerTsvFormatVersion << ")\n";
      return kOk;
    }
    auto subs = app.get_subcommands();
    if (subs.empty()) {
      err << "error: a subcommand is required\n\n" << app.help();
      return kValidation;
    }
    CLI::App* sub = subs.front();
    handlers.at(sub->get_name())(o, parameter_text(*sub), log);
    return kOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}


}  // namespace synpart::cli
