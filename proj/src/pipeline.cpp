#include "trg/pipeline.hpp"

#include <set>
#include <tuple>

#include "json.hpp"
#include "trg/parallel.hpp"

namespace trg {

TrainSummary train_model(const std::filesystem::path& corpus_path, const std::filesystem::path& model_dir,
                         const AlignConfig& config, std::size_t jobs) {
  config.validate();
  const std::string bytes = read_file(corpus_path);
  const Corpus corpus = parse_corpus(bytes);
  const auto aligned = align_corpus(corpus, config, jobs);
  TrgModel model = model_from_datasets(build_datasets(aligned));
  train_selectors(model);

  ModelMeta meta;
  meta.sigma = config.sigma;
  meta.max_len = config.max_len;
  meta.corpus_digest = digest(bytes);
  meta.corpus_instances = corpus.size();
  save_model(model_dir, model, aligned, meta);

  TrainSummary s;
  s.instances = corpus.size();
  s.schemas = model.schemas.size();
  s.fragment_datasets = model.fragments.size();
  s.features = corpus.feature_universe().size();
  for (const auto& a : aligned)
    for (const auto& seg : a.segments)
      if (!seg.features.empty()) ++s.aligned_segments;
  return s;
}

AlignmentScore score_alignment(const std::vector<AlignedInstance>& predicted,
                               const std::vector<AlignedInstance>& gold) {
  using Triple = std::tuple<std::string, std::size_t, std::size_t, std::string>;
  std::set<std::string> gold_ids, pred_ids;
  for (const auto& g : gold) gold_ids.insert(g.instance.id);
  for (const auto& p : predicted) pred_ids.insert(p.instance.id);
  auto triples = [](const std::vector<AlignedInstance>& src, const std::set<std::string>& keep) {
    std::set<Triple> out;
    for (const auto& a : src) {
      if (!keep.count(a.instance.id)) continue;
      for (const auto& seg : a.segments)
        for (const auto& f : seg.features) out.emplace(a.instance.id, seg.span.start, seg.span.end, f.key());
    }
    return out;
  };
  const auto p = triples(predicted, gold_ids);
  const auto g = triples(gold, pred_ids);
  AlignmentScore s;
  s.predicted = p.size();
  s.gold = g.size();
  for (const auto& t : p) s.matched += g.count(t);
  s.precision = s.predicted ? static_cast<double>(s.matched) / static_cast<double>(s.predicted) : 0.0;
  s.recall = s.gold ? static_cast<double>(s.matched) / static_cast<double>(s.gold) : 0.0;
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

EvalReport evaluate(const TrgModel& model, const Corpus& test, const GenOptions& options, std::size_t jobs) {
  struct Row {
    std::size_t features = 0;
    std::size_t covered = 0;
    bool exact = false;
    double weight = 0.0;
  };
  std::vector<Row> rows(test.size());
  parallel_for(test.size(), jobs, [&](std::size_t i) {
    const Instance& inst = test[i];
    Row& row = rows[i];
    row.features = inst.cc.size();
    if (inst.cc.empty()) return;
    GenResult r;
    try {
      r = generate(model, inst.cc, options);
    } catch (const BelowThresholdError& e) {
      r = e.best();
    } catch (const Error&) {
      return;
    }
    row.weight = r.candidate.weight;
    row.exact = r.text == join_tokens(inst.tokens);
    for (const auto& f : inst.cc)
      for (const auto& c : r.candidate.choices)
        if (c.cc.contains(f)) {
          ++row.covered;
          break;
        }
  });
  EvalReport report;
  report.instances = test.size();
  std::size_t features = 0, covered = 0, exact = 0;
  double weight = 0.0;
  for (const auto& r : rows) {
    features += r.features;
    covered += r.covered;
    exact += r.exact ? 1 : 0;
    weight += r.weight;
  }
  if (features) report.feature_coverage = static_cast<double>(covered) / static_cast<double>(features);
  if (!rows.empty()) {
    report.exact_match = static_cast<double>(exact) / static_cast<double>(rows.size());
    report.mean_weight = weight / static_cast<double>(rows.size());
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["instances"] = report.instances;
  j["feature_coverage"] = report.feature_coverage;
  j["exact_match"] = report.exact_match;
  j["mean_weight"] = report.mean_weight;
  if (report.alignment) {
    const auto& a = *report.alignment;
    j["alignment"] = {{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1},
                      {"predicted", a.predicted}, {"gold", a.gold},     {"matched", a.matched}};
  }
  return j.dump(2) + "\n";
}

}  // namespace trg
