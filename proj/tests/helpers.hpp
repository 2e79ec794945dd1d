#ifndef FAIRAUC_TESTS_HELPERS_HPP
#define FAIRAUC_TESTS_HELPERS_HPP

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fairauc/dataset.hpp"

namespace fairauc::testing {

// Dataset with the requested per-stratum counts ((a,+),(a,-),(b,+),(b,-)) and
// standard-normal features.
inline Dataset make_dataset(const std::array<int, 4>& counts, int d,
                            std::uint64_t seed) {
  Dataset ds;
  ds.d = d;
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < 4; ++s)
    for (int i = 0; i < counts[s]; ++i) {
      for (int j = 0; j < d; ++j) ds.features.push_back(gauss(eng));
      ds.labels.push_back(s % 2 == 0 ? +1 : -1);
      ds.groups.push_back(s < 2 ? Group::A : Group::B);
    }
  ds.n = static_cast<int>(ds.labels.size());
  ds.rebuild_strata();
  return ds;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
struct TmpDir {
  std::filesystem::path path;
  explicit TmpDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("fairauc_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace fairauc::testing

#endif
