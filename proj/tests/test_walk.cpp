#include "dtw/batch.hpp"
#include "dtw/synthetic.hpp"
#include "dtw/walk.hpp"
#include "reference_walker.hpp"

#include <doctest.h>

#include <random>

using namespace dtw;
using dtw::testing::reference_walk;

namespace {

const GrayImage& two_by_two() {
  static const GrayImage img(2, 2, {0, 10, 20, 30});
  return img;
}

GrayImage constant(std::size_t w, std::size_t h, std::uint8_t v = 77) {
  return GrayImage(w, h, std::vector<std::uint8_t>(w * h, v));
}

// 5x5 grid where mu=2, min from (1,2) has a transient of 5 and an attractor of 4.
const GrayImage& transient5_period4() {
  static const GrayImage img(5, 5, {153, 233, 68,  155, 9,   192, 117, 231, 80, 96,  35,  236, 94,
                                    30,  235, 154, 229, 125, 56,  227, 145, 180, 208, 15, 71});
  return img;
}

WalkState state_from_path(const std::vector<PixelCoord>& path, std::size_t step, std::size_t mu) {
  WalkState s{path[step], {}};
  for (std::size_t i = 0; i < mu && i <= step; ++i) s.memory.push_back(path[step - i]);
  return s;
}

} // namespace

TEST_SUITE("walk") {

TEST_CASE("next_step on a constant image breaks the tie toward north") {
  const auto img = constant(5, 5);
  const WalkState s{{2, 2}, {{2, 2}}};
  CHECK(next_step(s, img, {1, Rule::Min, std::nullopt}) == PixelCoord{1, 2});
  CHECK(next_step(s, img, {1, Rule::Max, std::nullopt}) == PixelCoord{1, 2});
}

TEST_CASE("next_step with mu=0 and rule min stays put") {
  const auto img = random_image(6, 6, 9);
  for (std::size_t c = 0; c < img.size(); ++c) {
    const WalkState s{img.coord_of(c), {}};
    REQUIRE(next_step(s, img, {0, Rule::Min, std::nullopt}) == img.coord_of(c));
  }
}

TEST_CASE("next_step on the 2x2 example picks the east neighbour") {
  // candidates from (0,0) excluding itself: E w=10, SE w=30, S w=20
  const WalkState s{{0, 0}, {{0, 0}}};
  CHECK(next_step(s, two_by_two(), {1, Rule::Min, std::nullopt}) == PixelCoord{0, 1});
  CHECK(next_step(s, two_by_two(), {1, Rule::Max, std::nullopt}) == PixelCoord{1, 1});
}

TEST_CASE("next_step reports a dead end when memory covers the neighbourhood") {
  const WalkState s{{0, 0}, {{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
  CHECK_FALSE(next_step(s, two_by_two(), {4, Rule::Min, std::nullopt}).has_value());
  CHECK_THROWS_AS(next_step(s, two_by_two(), {3, Rule::Min, std::nullopt}), std::invalid_argument);
}

TEST_CASE("run_walk on the 2x2 example") {
  const auto t = run_walk(two_by_two(), {0, 0}, {1, Rule::Min, std::nullopt}, true);
  CHECK(t.transient == 1);
  CHECK(t.period == 2);
  CHECK(t.end == Termination::Attractor);
  const std::vector<PixelCoord> path{{0, 0}, {0, 1}, {1, 0}, {0, 1}};
  CHECK(t.path == path);

  const auto ref = reference_walk(two_by_two(), {0, 0}, 1, Rule::Min, 4);
  CHECK(ref.transient == 1);
  CHECK(ref.period == 2);
}

TEST_CASE("mu=0 with rule min is a fixed point everywhere") {
  const auto img = random_image(7, 5, 21);
  for (std::size_t c = 0; c < img.size(); ++c) {
    const auto t = run_walk(img, img.coord_of(c), {0, Rule::Min, std::nullopt});
    REQUIRE(t.transient == 0);
    REQUIRE(t.period == 1);
  }
}

TEST_CASE("a transient of 5 and an attractor of 4 under mu=2, rule min") {
  const auto& img = transient5_period4();
  const auto t = run_walk(img, {1, 2}, {2, Rule::Min, std::nullopt}, true);
  CHECK(t.transient == 5);
  CHECK(t.period == 4);
  const auto ref = reference_walk(img, {1, 2}, 2, Rule::Min, img.size());
  CHECK(ref.transient == 5);
  CHECK(ref.period == 4);
  // attractor pixels: (2,2) (1,3) (0,2) (1,1)
  CHECK(t.path[5] == PixelCoord{2, 2});
  CHECK(t.path[9] == PixelCoord{2, 2});
}

TEST_CASE("dead ends and step caps end the walk without an attractor") {
  const auto dead = run_walk(two_by_two(), {0, 0}, {4, Rule::Min, std::nullopt}, true);
  CHECK(dead.end == Termination::DeadEnd);
  CHECK(dead.period == 0);
  CHECK(dead.transient == 3);
  CHECK(dead.path.size() == 4);

  // mu=3 on a 2x2 image: the one pixel outside memory is always available.
  // The state first repeats at step 6, beyond the default cap of W*H = 4.
  const auto tour = run_walk(two_by_two(), {0, 0}, {3, Rule::Min, std::size_t{10}});
  CHECK(tour.end == Termination::Attractor);
  CHECK(tour.transient == 2);
  CHECK(tour.period == 4);
  const auto tour_capped = run_walk(two_by_two(), {0, 0}, {3, Rule::Min, std::nullopt});
  CHECK(tour_capped.end == Termination::StepCap);
  CHECK(tour_capped.transient == 4);

  const auto capped = run_walk(two_by_two(), {0, 0}, {1, Rule::Min, std::size_t{1}});
  CHECK(capped.end == Termination::StepCap);
  CHECK(capped.period == 0);
  CHECK(capped.transient == 1);

  CHECK_THROWS_AS(run_walk(two_by_two(), {0, 0}, {1, Rule::Min, std::size_t{0}}), std::invalid_argument);
  CHECK_THROWS_AS(run_walk(two_by_two(), {2, 0}, {1, Rule::Min, std::nullopt}), std::out_of_range);
}

TEST_CASE("walker agrees with the reference walker on random small images") {
  std::mt19937_64 rng(1234);
  for (int img_i = 0; img_i < 40; ++img_i) {
    const auto w = 2 + rng() % 7, h = 2 + rng() % 7;
    // Few gray levels make ties common.
    auto img = random_image(w, h, rng());
    if (img_i % 2 == 0) {
      std::vector<std::uint8_t> px(img.pixels().begin(), img.pixels().end());
      for (auto& v : px) v = static_cast<std::uint8_t>(v % 4);
      img = GrayImage(w, h, std::move(px));
    }
    for (std::size_t mu = 0; mu <= 6; ++mu) {
      for (auto rule : {Rule::Min, Rule::Max}) {
        Walker walker(img, {mu, rule, std::nullopt});
        for (std::size_t c = 0; c < img.size(); ++c) {
          const auto t = walker.walk(c);
          const auto ref = reference_walk(img, img.coord_of(c), mu, rule, img.size());
          CAPTURE(mu);
          CAPTURE(c);
          REQUIRE(t.transient == ref.transient);
          REQUIRE(t.period == ref.period);
        }
      }
    }
  }
}

TEST_CASE("paths respect memory, attractors close and are at least mu+1 long") {
  std::mt19937_64 rng(99);
  for (int img_i = 0; img_i < 30; ++img_i) {
    const auto img = random_image(4 + rng() % 12, 4 + rng() % 12, rng());
    for (std::size_t mu = 0; mu <= 6; ++mu) {
      for (auto rule : {Rule::Min, Rule::Max}) {
        const WalkConfig config{mu, rule, std::nullopt};
        Walker walker(img, config);
        for (int k = 0; k < 20; ++k) {
          const auto t = walker.walk(rng() % img.size(), true);
          const auto& path = t.path;
          for (std::size_t i = 0; i < path.size(); ++i)
            for (std::size_t j = i + 1; j < path.size() && j <= i + mu; ++j) REQUIRE(path[i] != path[j]);
          if (t.period == 0) continue;
          REQUIRE(t.period >= mu + 1);
          REQUIRE(path.size() == t.transient + t.period + 1);
          // Replay one more period with next_step from the closing state.
          auto replay = path;
          for (std::size_t s = 0; s < t.period; ++s) {
            const auto next = next_step(state_from_path(replay, replay.size() - 1, mu), img, config);
            REQUIRE(next.has_value());
            replay.push_back(*next);
          }
          for (std::size_t s = 0; s <= t.period; ++s)
            REQUIRE(replay[t.transient + t.period + s] == replay[t.transient + s]);
        }
      }
    }
  }
}

TEST_CASE("run_walk is deterministic and Walker reuse does not leak state") {
  const auto img = random_image(16, 16, 4);
  const WalkConfig config{3, Rule::Max, std::nullopt};
  Walker walker(img, config);
  for (std::size_t c = 0; c < img.size(); c += 7) {
    const auto a = walker.walk(c, true);
    const auto b = run_walk(img, img.coord_of(c), config, true);
    REQUIRE(a.transient == b.transient);
    REQUIRE(a.period == b.period);
    REQUIRE(a.path == b.path);
  }
}

TEST_CASE("format_trajectory lists steps then tau and rho") {
  const auto t = run_walk(two_by_two(), {0, 0}, {1, Rule::Min, std::nullopt}, true);
  CHECK(format_trajectory(t, two_by_two()) ==
        "0 0 0 0 0\n"
        "1 0 1 1 10\n"
        "2 1 0 2 20\n"
        "3 0 1 1 10\n"
        "tau=1 rho=2\n");
}

TEST_CASE("run_batch from a single start holds one unit of mass") {
  const auto img = random_image(8, 8, 3);
  StartSelection one{KSpec::all(), {{3, 4}}, {1, 64}};
  const auto dist = run_batch(img, one, {2, Rule::Max, std::nullopt});
  const auto t = run_walk(img, {3, 4}, {2, Rule::Max, std::nullopt});
  CHECK(dist.total() == 1);
  CHECK(dist.counts().size() == 1);
  CHECK(dist.mass(t.transient, t.period) == Fraction{1, 1});
}

TEST_CASE("run_batch on a constant 8x8 image puts all mass on period 2") {
  const auto img = constant(8, 8);
  const auto starts = select_starts(img, KSpec::all());
  const auto dist = run_batch(img, starts, {1, Rule::Min, std::nullopt});
  REQUIRE(dist.total() == 64);

  JointDistribution oracle(1, Rule::Min);
  for (std::size_t c = 0; c < 64; ++c) {
    const auto ref = reference_walk(img, img.coord_of(c), 1, Rule::Min, 64);
    oracle.add(ref.transient, ref.period);
  }
  CHECK(dist == oracle);
  for (const auto& [key, n] : dist.counts()) CHECK(key.second == 2);
}

TEST_CASE("run_batch does not depend on thread count or start partitioning") {
  const auto img = random_image(40, 30, 77);
  const auto starts = select_starts(img, KSpec::parse("3"));
  for (std::size_t mu : {0u, 2u, 5u}) {
    for (auto rule : {Rule::Min, Rule::Max}) {
      const WalkConfig config{mu, rule, std::nullopt};
      const auto serial = run_batch_serial(img, starts, config);
      CHECK(serial.total() == starts.points.size());
      for (int threads : {2, 3, 8}) CHECK(run_batch_parallel(img, starts, config, threads) == serial);

      // Uneven chunks merged in reverse order.
      std::mt19937_64 rng(mu);
      std::vector<StartSelection> parts;
      std::size_t at = 0;
      while (at < starts.points.size()) {
        const auto len = std::min<std::size_t>(1 + rng() % 90, starts.points.size() - at);
        StartSelection part{starts.spec, {starts.points.begin() + static_cast<std::ptrdiff_t>(at),
                                          starts.points.begin() + static_cast<std::ptrdiff_t>(at + len)}, {}};
        parts.push_back(std::move(part));
        at += len;
      }
      JointDistribution merged(mu, rule);
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) merged.merge(run_batch_serial(img, *it, config));
      CHECK(merged == serial);
    }
  }
}

TEST_CASE("JointDistribution bookkeeping") {
  JointDistribution d(2, Rule::Min);
  CHECK_THROWS_AS(static_cast<void>(d.mass(0, 3)), std::logic_error);
  d.add(0, 3);
  d.add(1, 3, 2);
  d.add(5, 0);
  CHECK(d.total() == 4);
  CHECK(d.mass(1, 3) == Fraction{1, 2});
  CHECK(d.count(9, 9) == 0);
  CHECK_THROWS_AS(d.merge(JointDistribution(3, Rule::Min)), std::invalid_argument);
  CHECK_THROWS_AS(d.merge(JointDistribution(2, Rule::Max)), std::invalid_argument);
}

TEST_CASE("parse_rule") {
  CHECK(parse_rule("min") == Rule::Min);
  CHECK(parse_rule("MAX") == Rule::Max);
  CHECK_THROWS_AS(parse_rule("mid"), std::invalid_argument);
}

} // TEST_SUITE
