#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "medcap/types.hpp"

namespace testsupport {

inline medcap::ConceptSet cuis(std::initializer_list<const char*> ids) {
  medcap::ConceptSet out;
  for (const char* id : ids) out.emplace(id);
  return out;
}

inline medcap::CaptionCorpus captions(std::vector<std::pair<std::string, std::string>> rows) {
  return medcap::CaptionCorpus(std::move(rows));
}

inline std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Small clinical-flavoured vocabulary with several Porter stem families so
// that the stem stage of METEOR gets exercised.
inline const std::vector<std::string>& caption_vocabulary() {
  static const std::vector<std::string> v = {
      "show",      "shows",     "showing",   "showed",   "nodule",    "nodules",   "nodular",
      "mass",      "masses",    "lesion",    "lesions",  "enhance",   "enhancing", "enhancement",
      "scan",      "scans",     "scanned",   "ct",       "mri",       "image",     "images",
      "imaging",   "left",      "right",     "lung",     "lungs",     "chest",     "the",
      "a",         "of",        "with",      "and",      "in",        "arrow",     "arrows",
      "axial",     "contrast",  "fracture",  "fractures", "fractured", "bone",     "x",
      "ray",       "rays",      "pulmonary", "opacity",  "opacities", "effusion",  "pleural",
      "small",     "large",     "1",         "2",        "cm",
  };
  return v;
}

inline std::vector<std::string> random_words(std::mt19937_64& rng, std::size_t min_len,
                                             std::size_t max_len) {
  const auto& v = caption_vocabulary();
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  std::vector<std::string> out(len(rng));
  for (auto& w : out) w = v[pick(rng)];
  return out;
}

inline std::string join(const std::vector<std::string>& w, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += w[i];
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("medcap-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(file(name), std::ios::binary) << content;
    return file(name);
  }

  std::string read(const std::string& name) const {
    std::ifstream in(file(name), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
