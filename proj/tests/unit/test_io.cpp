#include <filesystem>

#include <gtest/gtest.h>

#include "osync/errors.hpp"
#include "osync/io.hpp"
#include "test_support.hpp"

namespace osync {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "osync_io_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(ProblemIo, RoundTripCanonical) {
  const SyncProblem p = generate_gaussian(6, 2, 0.4, 12);
  const std::string path = scratch("gauss.csv").string();
  save_problem(p, path);
  EXPECT_FALSE(fs::exists(path + ".truth.csv"));
  const SyncProblem back = load_problem(path);
  EXPECT_EQ(back.data().dense(), p.data().dense());
  EXPECT_EQ(back.sigma(), 0.4);
  EXPECT_EQ(back.seed(), 12u);
  EXPECT_EQ(back.noise_kind(), NoiseKind::Gaussian);
  ASSERT_TRUE(back.ground_truth().has_value());
  EXPECT_EQ(back.ground_truth()->stacked(), StiefelTuple::synchronized(6, 2, 2).stacked());
}

TEST(ProblemIo, RoundTripWithGroundTruth) {
  const StiefelTuple g = testing::random_orthogonal_tuple(4, 3, 2);
  const SyncProblem p = from_noise(testing::random_noise(4, 3, 0.2, 3), g);
  const std::string path = scratch("custom.csv").string();
  save_problem(p, path);
  EXPECT_TRUE(fs::exists(path + ".truth.csv"));
  const SyncProblem back = load_problem(path);
  EXPECT_EQ(back.data().dense(), p.data().dense());
  EXPECT_EQ(back.noise_kind(), NoiseKind::Custom);
  ASSERT_TRUE(back.ground_truth().has_value());
  EXPECT_EQ(back.ground_truth()->stacked(), g.stacked());
}

TEST(TupleIo, RoundTripAndMissingFile) {
  const StiefelTuple s = random_stiefel(5, 2, 4, 9);
  const std::string path = scratch("tuple.csv").string();
  save_tuple(s, path);
  EXPECT_EQ(load_tuple(path).stacked(), s.stacked());
  EXPECT_ANY_THROW(load_tuple(scratch("missing.csv").string()));
}

}  // namespace
}  // namespace osync
