#ifndef TRG_TESTS_FIXTURES_HPP
#define TRG_TESTS_FIXTURES_HPP

#include <filesystem>
#include <random>
#include <string>

#include "trg/corpus.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return TRG_TEST_DATA_DIR; }

inline const trg::Corpus& c4() {
  static const trg::Corpus corpus = trg::load_corpus(data_dir() / "c4.jsonl");
  return corpus;
}

inline trg::Feature F(const std::string& key) { return trg::Feature::parse(key); }

/// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("trg_test_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures

#endif  // TRG_TESTS_FIXTURES_HPP
