#pragma once

// Shared test plumbing: error-code assertions, temp directories, and
// deterministic random generators for nodes and fitted models.

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "milo/milo.hpp"

// Asserts that `expr` throws milo::Error with exactly the given code.
#define REQUIRE_ERRC(expr, errc)                                              \
  do {                                                                        \
    bool caught_ = false;                                                     \
    try {                                                                     \
      (void)(expr);                                                           \
    } catch (const ::milo::Error& e_) {                                       \
      INFO("thrown: " << e_.what());                                          \
      REQUIRE(e_.code() == (errc));                                           \
      caught_ = true;                                                         \
    }                                                                         \
    INFO("expected milo::Error(" << ::milo::errc_name(errc) << ")");          \
    REQUIRE(caught_);                                                         \
  } while (0)

namespace testutil {

// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("milo-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// The golden 4-point regression fixture.
inline milo::Dataset figure_dataset() {
  return milo::Dataset(milo::matrix_tensor({{1, 1}, {1, 2}, {2, 2}, {2, 3}}),
                       milo::vector_tensor({6, 8, 9, 11}));
}

// Deterministic random JSON-data node, capped in depth and fanout.
inline milo::Node random_node(std::mt19937_64& rng, int depth = 0) {
  using milo::Node;
  std::uniform_int_distribution<int> kind_dist(0, depth >= 3 ? 4 : 6);
  std::uniform_int_distribution<int> fan_dist(0, 4);
  std::uniform_int_distribution<std::int64_t> int_dist(-1'000'000'000'000, 1'000'000'000'000);
  std::uniform_real_distribution<double> real_dist(-1e6, 1e6);
  switch (kind_dist(rng)) {
    case 0: return Node::null();
    case 1: return Node::boolean(rng() & 1);
    case 2: return Node::integer(int_dist(rng));
    case 3: return Node::real(real_dist(rng));
    case 4: {
      std::string s = "s";
      for (int i = fan_dist(rng); i > 0; --i) s += static_cast<char>('a' + (rng() % 26));
      return Node::str(s);
    }
    case 5: {
      milo::NodeList items;
      for (int i = fan_dist(rng); i > 0; --i) items.push_back(random_node(rng, depth + 1));
      return Node::list(std::move(items));
    }
    default: {
      milo::NodeMap entries;
      for (int i = fan_dist(rng); i > 0; --i)
        entries.set("k" + std::to_string(i) + std::to_string(rng() % 100),
                    random_node(rng, depth + 1));
      return Node::map(std::move(entries));
    }
  }
}

// A fitted model of each type on small deterministic data, cycled by index.
inline milo::Model random_model(std::uint64_t seed) {
  using namespace milo;
  switch (seed % 5) {
    case 0: return Model(LinearRegression::fit(make_regression(seed, 30, 3)));
    case 1: return Model(LogisticRegression::fit(make_blobs(seed, 40, 2, 2), 200));
    case 2: return Model(DecisionTreeClassifier::fit(make_blobs(seed, 40, 2, 2), 6));
    case 3: return Model(KMeans::fit(Dataset(make_blobs(seed, 40, 2, 3).X()), 3,
                                     static_cast<std::int64_t>(seed)));
    default: return Model(GaussianNB::fit(make_blobs(seed, 40, 2, 2)));
  }
}

}  // namespace testutil
