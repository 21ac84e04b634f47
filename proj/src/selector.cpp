#include "trg/selector.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "trg/error.hpp"

namespace trg {

FeatureIndex::FeatureIndex(std::vector<std::string> keys) : keys_(std::move(keys)) {
  for (std::size_t i = 0; i < keys_.size(); ++i)
    if (!columns_.emplace(keys_[i], i).second) throw ValidationError("duplicate feature in index: " + keys_[i]);
}

FeatureIndex FeatureIndex::from_rows(const std::vector<FeatureCollection>& rows) {
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& row : rows)
    for (const auto& f : row)
      if (seen.emplace(f.key(), keys.size()).second) keys.push_back(f.key());
  return FeatureIndex(std::move(keys));
}

std::optional<std::size_t> FeatureIndex::column(const std::string& key) const {
  auto it = columns_.find(key);
  if (it == columns_.end()) return std::nullopt;
  return it->second;
}

EncodedQuery encode(const FeatureCollection& cc, const FeatureIndex& index) {
  EncodedQuery out;
  out.vector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index.size()));
  for (const auto& f : cc) {
    if (auto c = index.column(f.key()))
      out.vector[static_cast<Eigen::Index>(*c)] = 1.0;
    else
      ++out.ignored;
  }
  return out;
}

SelectorModel train_selector(const std::vector<FeatureCollection>& rows,
                             const std::vector<std::size_t>& item_of_row, std::size_t item_count) {
  if (rows.empty()) throw ValidationError("selector needs at least one record");
  if (rows.size() != item_of_row.size()) throw ValidationError("one item per record required");

  SelectorModel model;
  model.index = FeatureIndex::from_rows(rows);
  if (model.index.size() == 0) throw ValidationError("no informative features");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(model.index.size());
  Eigen::MatrixXd k(n, m);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(item_count));
  for (Eigen::Index r = 0; r < n; ++r) {
    k.row(r) = encode(rows[static_cast<std::size_t>(r)], model.index).vector.transpose();
    const std::size_t item = item_of_row[static_cast<std::size_t>(r)];
    if (item >= item_count) throw ValidationError("item index out of range");
    s(r, static_cast<Eigen::Index>(item)) = 1.0;
  }

  // pinv(K) = V diag(1/sigma) U^T over the singular values above the cutoff;
  // one factorisation serves every item.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kPinvRcond * (sv.size() ? sv[0] : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) inv[i] = 1.0 / sv[i];
  model.mapping = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * s);
  return model;
}

SelectorModel train_selector(const std::vector<std::pair<std::string, FeatureCollection>>& records,
                             std::vector<std::string>* items) {
  std::vector<std::string> labels;
  std::vector<FeatureCollection> rows;
  std::vector<std::size_t> item_of_row;
  for (const auto& [label, cc] : records) {
    auto it = std::find(labels.begin(), labels.end(), label);
    item_of_row.push_back(static_cast<std::size_t>(it - labels.begin()));
    if (it == labels.end()) labels.push_back(label);
    rows.push_back(cc);
  }
  SelectorModel model = train_selector(rows, item_of_row, labels.size());
  if (items) *items = std::move(labels);
  return model;
}

std::vector<double> selection_weights(const SelectorModel& model, const Eigen::VectorXd& query) {
  if (query.size() != static_cast<Eigen::Index>(model.feature_count()))
    throw ValidationError("query dimension does not match selector");
  Eigen::VectorXd w = model.mapping.transpose() * query;
  return {w.data(), w.data() + w.size()};
}

std::vector<Scored> select(const SelectorModel& model, const Eigen::VectorXd& query, std::size_t top_n) {
  const auto w = selection_weights(model, query);
  std::vector<Scored> out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back({i, w[i]});
  std::stable_sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) { return a.weight > b.weight; });
  if (top_n > 0 && out.size() > top_n) out.resize(top_n);
  return out;
}

nlohmann::ordered_json selector_to_json(const SelectorModel& model) {
  nlohmann::ordered_json j;
  j["features"] = model.index.keys();
  auto p = nlohmann::ordered_json::array();
  for (Eigen::Index c = 0; c < model.mapping.cols(); ++c) {
    std::vector<double> col(static_cast<std::size_t>(model.mapping.rows()));
    for (Eigen::Index r = 0; r < model.mapping.rows(); ++r) col[static_cast<std::size_t>(r)] = model.mapping(r, c);
    p.push_back(col);
  }
  j["p"] = std::move(p);
  return j;
}

SelectorModel selector_from_json(const nlohmann::json& j) {
  SelectorModel model;
  model.index = FeatureIndex(j.at("features").get<std::vector<std::string>>());
  const auto& p = j.at("p");
  const auto m = static_cast<Eigen::Index>(model.index.size());
  model.mapping.resize(m, static_cast<Eigen::Index>(p.size()));
  for (std::size_t c = 0; c < p.size(); ++c) {
    auto col = p[c].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(col.size()) != m) throw ValidationError("mapping vector has wrong dimension");
    for (Eigen::Index r = 0; r < m; ++r) model.mapping(r, static_cast<Eigen::Index>(c)) = col[static_cast<std::size_t>(r)];
  }
  return model;
}

}  // namespace trg
