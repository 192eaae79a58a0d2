#include <atomic>
#include <stdexcept>
#include <vector>

#include "catch_amalgamated.hpp"
#include "vibctl/parallel.hpp"

using namespace vibctl;

TEST_CASE("run_ordered consumes every result in index order", "[parallel]") {
  for (std::size_t workers : {1u, 2u, 5u}) {
    std::vector<std::size_t> seen;
    const auto consumed = run_ordered(
        50, workers, [](std::size_t i) { return i * i; },
        [&](std::size_t i, std::size_t v) {
          REQUIRE(v == i * i);
          seen.push_back(i);
        });
    REQUIRE(consumed == 50);
    REQUIRE(seen.size() == 50);
    for (std::size_t i = 0; i < seen.size(); ++i) REQUIRE(seen[i] == i);
  }
  REQUIRE(run_ordered(0, 3, [](std::size_t i) { return i; }, [](std::size_t, std::size_t) {}) == 0);
}

TEST_CASE("run_ordered rethrows the first failure after joining", "[parallel]") {
  std::atomic<int> calls{0};
  auto compute = [&](std::size_t i) {
    ++calls;
    if (i == 7) throw std::runtime_error("row 7");
    return i;
  };
  std::size_t last = 0;
  REQUIRE_THROWS_WITH(run_ordered(40, 3, compute, [&](std::size_t i, std::size_t) { last = i; }),
                      "row 7");
  REQUIRE(last < 7);

  auto bad_consumer = [](std::size_t i, std::size_t) {
    if (i == 2) throw std::logic_error("sink");
  };
  REQUIRE_THROWS_AS(run_ordered(10, 2, [](std::size_t i) { return i; }, bad_consumer),
                    std::logic_error);
}

TEST_CASE("Cancellation stops new work and truncates the ordered output", "[parallel]") {
  CancellationToken token;
  REQUIRE_FALSE(token.requested());
  std::vector<std::size_t> seen;
  const auto consumed = run_ordered(
      100, 1,
      [&](std::size_t i) {
        if (i == 9) token.request();
        return i;
      },
      [&](std::size_t i, std::size_t) { seen.push_back(i); }, &token);
  REQUIRE(token.requested());
  REQUIRE(consumed == 10);
  REQUIRE(seen.back() == 9);

  REQUIRE(resolve_workers(3) == 3);
  REQUIRE(resolve_workers(0) >= 1);
}
