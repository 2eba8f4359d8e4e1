#include "dtw/error.hpp"
#include "dtw/batch.hpp"
#include "dtw/features.hpp"
#include "dtw/synthetic.hpp"
#include "reference_walker.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace dtw;

namespace {

JointDistribution single_bucket(std::size_t mu, std::size_t transient, std::size_t period) {
  JointDistribution d(mu, Rule::Min);
  d.add(transient, period, 10);
  return d;
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("histogram sums the anti-diagonal transient + period = length") {
  const auto d = single_bucket(1, 0, 2);
  CHECK(histogram(d, 2) == Fraction{1, 1});
  CHECK(histogram(d, 3) == Fraction{0, 1});

  JointDistribution u(0, Rule::Min);
  u.add(0, 2);
  u.add(1, 1);
  CHECK(histogram(u, 2) == Fraction{1, 1});

  JointDistribution capped(1, Rule::Min);
  capped.add(4, 0);
  capped.add(2, 2);
  CHECK(histogram(capped, 4) == Fraction{1, 2});
}

TEST_CASE("feature_slice covers lengths mu+1 .. mu+m") {
  const auto slice = feature_slice(single_bucket(1, 0, 2), 1, 4);
  REQUIRE(slice.size() == 4);
  CHECK(slice[0] == Fraction{1, 1});
  CHECK(slice[1] == Fraction{0, 1});
  CHECK(slice[3] == Fraction{0, 1});
  CHECK_THROWS_AS(feature_slice(single_bucket(1, 0, 2), 2, 4), std::invalid_argument);
}

TEST_CASE("mu=0 min slice is [1, 0, 0, 0] on any image") {
  const auto img = random_image(12, 9, 8);
  const auto dist = run_batch(img, select_starts(img, KSpec::all()), {0, Rule::Min, std::nullopt});
  const auto slice = feature_slice(dist, 0, 4);
  CHECK(slice[0] == Fraction{1, 1});
  CHECK(slice[1] == Fraction{0, 1});
  CHECK(slice[2] == Fraction{0, 1});
  CHECK(slice[3] == Fraction{0, 1});
}

TEST_CASE("slice on a random 16x16 image matches histograms built from reference trajectories") {
  const auto img = random_image(16, 16, 2024);
  const std::size_t mu = 2, m = 4;
  const auto dist = run_batch(img, select_starts(img, KSpec::all()), {mu, Rule::Max, std::nullopt});
  const auto slice = feature_slice(dist, mu, m);

  std::map<std::size_t, std::uint64_t> by_length;
  for (std::size_t c = 0; c < img.size(); ++c) {
    const auto ref = dtw::testing::reference_walk(img, img.coord_of(c), mu, Rule::Max, img.size());
    if (ref.period > 0) ++by_length[ref.transient + ref.period];
  }
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(slice[i] == Fraction{by_length[mu + 1 + i], img.size()});
    sum += slice[i].num;
  }
  CHECK(sum <= img.size());
}

TEST_CASE("histogram support and normalization per block") {
  const auto img = synth_texture(texture_class_params(3, 1), 32, 32, 5);
  for (std::size_t mu = 0; mu <= 6; ++mu) {
    for (auto rule : {Rule::Min, Rule::Max}) {
      const auto dist = run_batch(img, select_starts(img, KSpec::parse("3")), {mu, rule, std::nullopt});
      std::uint64_t attractor_mass = 0, max_len = 0;
      for (const auto& [key, n] : dist.counts()) {
        if (key.second > 0) attractor_mass += n;
        max_len = std::max<std::uint64_t>(max_len, key.first + key.second);
      }
      for (std::size_t l = 1; l <= mu; ++l) REQUIRE(histogram(dist, l).num == 0);
      std::uint64_t total = 0;
      for (std::size_t l = mu + 1; l <= max_len; ++l) total += histogram(dist, l).num;
      REQUIRE(total == attractor_mass);
      REQUIRE(total <= dist.total());
    }
  }
}

TEST_CASE("default extraction yields 56 values in rule, mu, length order") {
  const auto img = random_image(20, 20, 1);
  const ExtractionConfig config;
  const auto fv = extract(img, config);
  REQUIRE(fv.size() == 56);
  REQUIRE(fv.layout.size() == 56);
  CHECK(fv.layout.front() == FeatureSlot{Rule::Min, 0, 1});
  CHECK(fv.layout[3] == FeatureSlot{Rule::Min, 0, 4});
  CHECK(fv.layout[4] == FeatureSlot{Rule::Min, 1, 2});
  CHECK(fv.layout[28] == FeatureSlot{Rule::Max, 0, 1});
  CHECK(fv.layout.back() == FeatureSlot{Rule::Max, 6, 10});
  for (const auto& v : fv.values) CHECK(v.num <= v.den);

  ExtractionConfig reversed;
  reversed.rules = {Rule::Max, Rule::Min};
  const auto fr = extract(img, reversed);
  CHECK(fr.layout == fv.layout);
  CHECK(fr.values == fv.values);
}

TEST_CASE("ExtractionConfig validation") {
  ExtractionConfig c;
  c.mu_list = {};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.mu_list = {2, 1};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.mu_list = {1, 1};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.mu_list = {1};
  c.rules = {};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rules = {Rule::Min, Rule::Min};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rules = {Rule::Min};
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.m = 3;
  CHECK_NOTHROW(c.validate());
  CHECK(c.dimension() == 3);
}

TEST_CASE("on a constant image the start subset only matters through border distance") {
  // Every mu=0 walk is a fixed point, so those blocks agree for any subset.
  // Larger memories travel to the border first and their transients differ.
  const GrayImage img(16, 16, std::vector<std::uint8_t>(256, 50));
  ExtractionConfig all, half;
  half.k_spec = KSpec::parse("2");
  const auto a = extract(img, all), b = extract(img, half);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.layout[i].mu == 0) {
      CHECK(a.values[i] == b.values[i]);
      CHECK(a.values[i] == Fraction{a.layout[i].length == 1 ? 1u : 0u, 1});
    }
  }
  CHECK_FALSE(a.values == b.values);
}

TEST_CASE("subsampling to 90% perturbs features only slightly") {
  ExtractionConfig all, ninety;
  ninety.k_spec = KSpec::parse("10");
  double worst = 0;
  for (std::size_t s = 0; s < 4; ++s) {
    const auto img = synth_texture(texture_class_params(s, 3), 48, 48, s);
    const auto a = extract(img, all).to_doubles();
    const auto b = extract(img, ninety).to_doubles();
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("extraction is identical across thread counts") {
  const auto img = random_image(30, 30, 6);
  ExtractionConfig config;
  config.k_spec = KSpec::parse("2,3");
  const auto serial = extract(img, config, 1);
  CHECK(extract(img, config, 4).values == serial.values);

  const auto ds = synth_dataset(3, 3, 24, 9);
  const auto one = extract_dataset(ds, config, 1);
  const auto many = extract_dataset(ds, config, 5);
  REQUIRE(one.size() == 9);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].values == many[i].values);
}

TEST_CASE("feature CSV layout") {
  CHECK(feature_csv_header(3) == "class,sample,f1,f2,f3");
  auto ds = synth_dataset(2, 1, 8, 1);
  ExtractionConfig config;
  config.mu_list = {1};
  config.rules = {Rule::Min};
  config.m = 2;
  const auto feats = extract_dataset(ds, config);
  std::ostringstream os;
  write_feature_csv(os, ds, feats);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "class,sample,f1,f2");
  std::getline(in, line);
  CHECK(line.rfind("c00,s00,", 0) == 0);
  CHECK(line.size() == std::string("c00,s00,0.000000000,0.000000000").size());

  ds.classes[0] = "bad,name";
  std::ostringstream bad;
  CHECK_THROWS_AS(write_feature_csv(bad, ds, feats), DataError);
}

TEST_CASE("fixed-point formatting rounds half up with integer arithmetic") {
  CHECK(format_fixed({1, 3}) == "0.333333333");
  CHECK(format_fixed({2, 3}) == "0.666666667");
  CHECK(format_fixed({1, 1}) == "1.000000000");
  CHECK(format_fixed({0, 7}) == "0.000000000");
  CHECK(format_fixed({1, 2000000000}) == "0.000000001");
  CHECK(format_fixed({8972, 10000}, 2) == "0.90");
  CHECK(format_fixed({897200, 10000}, 2) == "89.72");
}

TEST_CASE("memory list and rule parsing") {
  CHECK(parse_mu_list("0-6") == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(parse_mu_list("5,0-2,1") == std::vector<std::size_t>{0, 1, 2, 5});
  CHECK(parse_mu_list("3") == std::vector<std::size_t>{3});
  CHECK_THROWS_AS(parse_mu_list("4-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mu_list("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mu_list(""), std::invalid_argument);
  CHECK(parse_rules("max,min") == std::vector<Rule>{Rule::Min, Rule::Max});
  CHECK(parse_rules("max") == std::vector<Rule>{Rule::Max});
  CHECK_THROWS_AS(parse_rules("min,foo"), std::invalid_argument);
}

} // TEST_SUITE
