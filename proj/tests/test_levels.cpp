#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qanneal/error.hpp"
#include "qanneal/levels.hpp"

using namespace qanneal;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("jittered levels stay inside their cells and ascend") {
  for (std::uint64_t seed : {1u, 7u, 42u, 1234u}) {
    for (int n : {2, 5, 12, 50}) {
      const EnergyLevels lv = generate_levels(n, seed);
      REQUIRE(lv.size() == static_cast<std::size_t>(n));
      CHECK(lv.recipe() == LevelRecipe::jitter);
      CHECK(lv.seed() == seed);
      for (int j = 0; j < n; ++j) {
        CHECK(std::abs(lv[j] - (j + 1.0) / n) < 0.5 / n);
        CHECK(lv[j] > 0.5 / n);
        CHECK(lv[j] < 1.0 + 0.5 / n);
        if (j > 0) CHECK(lv[j] > lv[j - 1]);
      }
    }
  }
}

TEST_CASE("seeded generation is deterministic") {
  CHECK(generate_levels(12, 7).values() == generate_levels(12, 7).values());
  CHECK(generate_levels(12, 7).values() != generate_levels(12, 8).values());
}

TEST_CASE("equidistant levels") {
  const EnergyLevels lv = EnergyLevels::equidistant(4);
  CHECK(lv.values() == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  CHECK(lv.is_equidistant());
  CHECK(lv.min_spacing() == doctest::Approx(0.25));
  CHECK_FALSE(generate_levels(6, 3).is_equidistant());
}

TEST_CASE("explicit values are sorted with the permutation kept") {
  const EnergyLevels lv = EnergyLevels::from_values({0.3, 0.1, 0.2});
  CHECK(lv.values() == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(lv.permutation() == std::vector<std::size_t>{1, 2, 0});
  CHECK_THROWS_AS(EnergyLevels::from_values({0.1, 0.1}), ValidationError);
  CHECK_THROWS_AS(EnergyLevels::from_values({-0.1, 0.2}), ValidationError);
  CHECK_THROWS_AS(EnergyLevels::from_values({0.1}), ValidationError);
}

TEST_CASE("level files") {
  const EnergyLevels lv = read_levels_file(write_temp("qanneal_levels_ok.txt", "# comment\n0.1\n0.25\n\n0.7\n"));
  CHECK(lv.values() == std::vector<double>{0.1, 0.25, 0.7});
  CHECK_THROWS_AS(read_levels_file(write_temp("qanneal_levels_desc.txt", "0.5\n0.2\n")), ValidationError);
  CHECK_THROWS_AS(read_levels_file(write_temp("qanneal_levels_junk.txt", "0.1\nabc\n")), ValidationError);
  CHECK_THROWS_AS(read_levels_file("/nonexistent/levels.txt"), ValidationError);
}

TEST_CASE("normal draws have the requested spread") {
  Engine e = make_engine(99);
  double sum = 0.0, sum2 = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double z = standard_normal(e);
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / count) < 0.01);
  CHECK(std::abs(sum2 / count - 1.0) < 0.02);
}
