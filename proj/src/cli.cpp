#include "trg/cli.hpp"

#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "trg/error.hpp"
#include "trg/generator.hpp"
#include "trg/parallel.hpp"
#include "trg/pipeline.hpp"
#include "trg/render.hpp"
#include "trg/synth.hpp"

namespace trg {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string corpus, out, model, features, instance, feature, format = "text", metric = "weight";
  std::string templates, test, gold, gold_align, neighbourhood = "comparable";
  double sigma = 0.5;
  double min_weight = 0.0;
  std::size_t k = 1, jobs = 0, max_len = 0, beam = 0, n = 0;
  std::uint64_t seed = 0;
  bool strict = false, greedy = false, trace = false, copy_values = false;
};

AlignConfig align_config(const Options& o) {
  AlignConfig c;
  c.sigma = o.sigma;
  if (!(o.sigma >= 0.0 && o.sigma <= 1.0)) throw UsageError("--sigma must lie in [0,1]");
  if (o.max_len > 0) c.max_len = o.max_len;
  if (o.neighbourhood == "immediate")
    c.neighbourhood = Neighbourhood::immediate;
  else if (o.neighbourhood != "comparable")
    throw UsageError("--neighbourhood must be comparable or immediate");
  return c;
}

void add_align_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--sigma", o.sigma, "alignment threshold in [0,1]")->capture_default_str();
  cmd->add_option("--max-len", o.max_len, "longest fragment counted (0 = unlimited)");
  cmd->add_option("--neighbourhood", o.neighbourhood, "maxima neighbourhood: comparable|immediate");
  cmd->add_option("--jobs", o.jobs, "worker threads (default $TRG_JOBS or all cores)");
}

int cmd_align(const Options& o, std::ostream& out, std::ostream& err) {
  const AlignConfig config = align_config(o);
  std::vector<std::string> warnings;
  const Corpus corpus = load_corpus(o.corpus, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  std::vector<std::string> notes;
  const auto aligned = align_corpus(corpus, config, resolve_jobs(o.jobs), &notes);
  for (const auto& n : notes) err << "note: " << n << "\n";
  write_file(o.out, serialize_aligned(aligned));
  std::size_t segments = 0;
  for (const auto& a : aligned)
    for (const auto& s : a.segments) segments += s.features.empty() ? 0 : 1;
  out << "aligned " << aligned.size() << " instances, " << segments << " feature-bearing segments\n";
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  const TrainSummary s = train_model(o.corpus, o.model, align_config(o), resolve_jobs(o.jobs));
  out << "trained " << s.instances << " instances: " << s.schemas << " schemata, " << s.fragment_datasets
      << " fragment datasets, " << s.features << " features\n";
  return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  FeatureCollection query;
  try {
    query = FeatureCollection::parse_list(o.features);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--features: ") + e.what());
  }
  if (query.empty()) throw UsageError("--features is empty");
  if (o.k == 0) throw UsageError("--k must be positive");
  if (!(o.min_weight >= 0.0 && o.min_weight <= 1.0)) throw UsageError("--min-weight must lie in [0,1]");
  GenOptions opts;
  opts.min_weight = o.min_weight;
  opts.beam = o.beam;
  opts.strict = o.strict;
  opts.greedy = o.greedy;
  opts.copy_values = o.copy_values;
  const TrgModel model = load_model(o.model);
  try {
    for (const auto& r : generate_k(model, query, o.k, opts)) {
      if (o.trace)
        out << result_to_json(r).dump() << "\n";
      else
        out << r.text << "\n";
    }
  } catch (const BelowThresholdError& e) {
    err << "below threshold (" << e.best().candidate.weight << "): " << e.best().text << "\n";
    if (o.trace) err << result_to_json(e.best()).dump() << "\n";
    return kExitBelowThreshold;
  }
  return kExitOk;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  if (o.format != "text" && o.format != "svg") throw UsageError("--format must be text or svg");
  Metric metric;
  try {
    metric = parse_metric(o.metric);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  Feature g = [&] {
    try {
      return Feature::parse(o.feature);
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--feature: ") + e.what());
    }
  }();
  const AlignConfig config = align_config(o);
  const Corpus corpus = load_corpus(o.corpus);
  const std::size_t idx = corpus.find(o.instance);
  if (idx == corpus.size()) throw DataError("unknown instance id '" + o.instance + "'");
  const auto table = CooccurrenceTable::build(corpus, config.max_len);
  const TriangleView view = triangle_view(corpus[idx], g, metric, table, config);
  out << (o.format == "svg" ? render_svg(view) : render_text(view));
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.n == 0) throw UsageError("--n must be positive");
  const auto templates = parse_templates(read_file(o.templates));
  const SynthCorpus s = synthesize(templates, o.n, o.seed);
  const std::string gold = o.gold.empty() ? o.out + ".gold.jsonl" : o.gold;
  save_corpus(s.corpus, o.out);
  write_file(gold, serialize_aligned(s.gold));
  out << "wrote " << s.corpus.size() << " instances to " << o.out << " and gold alignments to " << gold << "\n";
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const TrgModel model = load_model(o.model);
  const Corpus test = load_corpus(o.test);
  EvalReport report = evaluate(model, test, {}, resolve_jobs(o.jobs));
  if (!o.gold_align.empty()) {
    const auto gold = parse_aligned(read_file(o.gold_align));
    const auto predicted = parse_aligned(read_file(std::filesystem::path(o.model) / "aligned.jsonl"));
    report.alignment = score_alignment(predicted, gold);
  }
  out << report_to_json(report);
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<std::filesystem::path> corpus;
  if (!o.corpus.empty()) corpus = o.corpus;
  const ValidationReport r = validate_model(o.model, corpus);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  out << (r.datasets_edited ? "hand edits detected; " : "") << "selectors retrained: " << r.schema_count
      << " schemata, " << r.fragment_dataset_count << " fragment datasets\n";
  return r.corpus_stale ? kExitValidation : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transparent data-to-text generation: align, train, generate, inspect"};
  app.require_subcommand(1);
  Options o;

  auto* align = app.add_subcommand("align", "align fragments to features and write aligned JSONL");
  align->add_option("--corpus", o.corpus, "corpus JSONL")->required();
  align->add_option("--out", o.out, "aligned JSONL output")->required();
  add_align_flags(align, o);

  auto* train = app.add_subcommand("train", "align, extract schemata and train selectors into a model directory");
  train->add_option("--corpus", o.corpus, "corpus JSONL")->required();
  train->add_option("--model", o.model, "model directory")->required();
  add_align_flags(train, o);

  auto* gen = app.add_subcommand("generate", "generate text for a feature collection");
  gen->add_option("--model", o.model, "model directory")->required();
  gen->add_option("--features", o.features, "comma-separated attr=value list")->required();
  gen->add_option("--k", o.k, "number of distinct texts");
  gen->add_option("--min-weight", o.min_weight, "minimum appropriation weight");
  gen->add_option("--beam", o.beam, "children kept per expansion (0 = unlimited)");
  gen->add_flag("--strict", o.strict, "only schemata whose attributes equal the query's");
  gen->add_flag("--greedy", o.greedy, "greedy instead of optimal search");
  gen->add_flag("--copy-values", o.copy_values, "fall back to the raw value for unseen values");
  gen->add_flag("--trace", o.trace, "print JSON with the full selection trace");

  auto* inspect = app.add_subcommand("inspect-triangle", "show a fragment triangle for one instance and feature");
  inspect->add_option("--corpus", o.corpus, "corpus JSONL")->required();
  inspect->add_option("--instance", o.instance, "instance id")->required();
  inspect->add_option("--feature", o.feature, "attr=value")->required();
  inspect->add_option("--format", o.format, "text|svg");
  inspect->add_option("--metric", o.metric, "express|core|weight");
  add_align_flags(inspect, o);

  auto* synth = app.add_subcommand("synth", "sample a synthetic corpus with gold alignments");
  synth->add_option("--templates", o.templates, "templates JSON")->required();
  synth->add_option("--n", o.n, "instance count")->required();
  synth->add_option("--seed", o.seed, "random seed")->required();
  synth->add_option("--out", o.out, "corpus JSONL output")->required();
  synth->add_option("--gold", o.gold, "gold alignment output (default <out>.gold.jsonl)");

  auto* eval = app.add_subcommand("eval", "evaluate a model on a test corpus");
  eval->add_option("--model", o.model, "model directory")->required();
  eval->add_option("--test", o.test, "test corpus JSONL")->required();
  eval->add_option("--gold-align", o.gold_align, "gold alignments to score the model's alignment");
  eval->add_option("--jobs", o.jobs, "worker threads");

  auto* validate = app.add_subcommand("validate", "re-read hand-edited model files and retrain selectors");
  validate->add_option("--model", o.model, "model directory")->required();
  validate->add_option("--corpus", o.corpus, "corpus to check against the stored digest");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*align) return cmd_align(o, out, err);
    if (*train) return cmd_train(o, out);
    if (*gen) return cmd_generate(o, out, err);
    if (*inspect) return cmd_inspect(o, out);
    if (*synth) return cmd_synth(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*validate) return cmd_validate(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoInputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace trg
