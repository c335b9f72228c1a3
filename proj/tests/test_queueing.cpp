#include <doctest.h>

#include <vector>

#include "hsrsched/queueing.hpp"

using namespace hsrsched;

namespace {
std::vector<Packets> buckets_of(const DeadlineQueue& q) { return {q.buckets().begin(), q.buckets().end()}; }
}  // namespace

TEST_SUITE("queueing") {
  TEST_CASE("admit places arrivals in the last bucket") {
    DeadlineQueue q(1, 3);
    q.admit(0);
    CHECK(buckets_of(q) == std::vector<Packets>{0, 0, 0});
    q.admit(7);
    CHECK(buckets_of(q) == std::vector<Packets>{0, 0, 7});
    CHECK(q.backlog() == 7);
  }

  TEST_CASE("admit into an occupied last bucket is a sequencing error") {
    DeadlineQueue q(1, 2);
    q.admit(3);
    CHECK_THROWS_AS(q.admit(1), ContractError);
  }

  TEST_CASE("serve and age two buckets") {
    DeadlineQueue q(1, 2);
    q.admit(3);
    const std::vector<Packets> none{0, 0};
    CHECK(q.serve_and_age(none) == 0);
    q.admit(5);
    REQUIRE(buckets_of(q) == std::vector<Packets>{3, 5});
    const std::vector<Packets> served{3, 2};
    CHECK(q.serve_and_age(served) == 0);
    CHECK(buckets_of(q) == std::vector<Packets>{3, 0});
    CHECK(q.backlog() == 3);
  }

  TEST_CASE("unserved packets with one frame to go are dropped") {
    DeadlineQueue q(1, 1);
    q.admit(4);
    const std::vector<Packets> none{0};
    CHECK(q.serve_and_age(none) == 4);
    CHECK(q.backlog() == 0);
    CHECK(q.serve_and_age(none) == 0);
  }

  TEST_CASE("serving more than a bucket holds is rejected") {
    DeadlineQueue q(1, 2);
    q.admit(2);
    const std::vector<Packets> served{0, 3};
    CHECK_THROWS_AS(q.serve_and_age(served), ContractError);
    const std::vector<Packets> negative{0, -1};
    CHECK_THROWS_AS(q.serve_and_age(negative), ContractError);
  }

  TEST_CASE("backlog tracks the bucket sum") {
    DeadlineQueue q(1, 4);
    const std::vector<std::vector<Packets>> plan = {{0, 0, 0, 1}, {0, 0, 2, 0}, {0, 0, 1, 1}, {0, 0, 0, 0}};
    const std::vector<Packets> arrivals = {3, 4, 2, 5};
    Packets in = 0, out = 0;
    for (std::size_t k = 0; k < plan.size(); ++k) {
      q.admit(arrivals[k]);
      in += arrivals[k];
      const Packets before = q.backlog();
      const Packets dropped = q.serve_and_age(plan[k]);
      Packets served = 0;
      for (auto x : plan[k]) served += x;
      out += served + dropped;
      CHECK(before == served + dropped + q.backlog());
      Packets sum = 0;
      for (auto b : q.buckets()) sum += b;
      CHECK(sum == q.backlog());
    }
    CHECK(in == out + q.backlog());
  }

  TEST_CASE("deficit update") {
    CHECK(deficit_update(0, 0, 0) == 0.0);
    CHECK(deficit_update(5, 2, 3) == 6.0);
    CHECK(deficit_update(1, 2, 0) == 0.0);
    DeficitQueue y(1, 2.0);
    CHECK(y.value() == 0.0);
    y.update(3);
    CHECK(y.value() == 3.0);
    y.update(0);
    CHECK(y.value() == 1.0);
    y.update(0);
    CHECK(y.value() == 0.0);
    CHECK_THROWS(y.reset(-1));
  }

  TEST_CASE("deficit increment is at least drops minus drain") {
    double y = 0;
    const double drain = 1.5;
    for (Packets d : {0, 3, 0, 0, 1, 7, 0, 2}) {
      const double next = deficit_update(y, drain, d);
      CHECK(next - y >= static_cast<double>(d) - drain);
      CHECK(next >= 0.0);
      y = next;
    }
  }

  TEST_CASE("cohort drops") {
    const std::vector<Packets> all{4, 6};
    CHECK(cohort_drops(10, all) == 0);
    const std::vector<Packets> none{0, 0, 0};
    CHECK(cohort_drops(10, none) == 10);
    const std::vector<Packets> some{3, 2, 1};
    CHECK(cohort_drops(8, some) == 2);
    const std::vector<Packets> over{5, 5};
    CHECK_THROWS_AS(cohort_drops(8, over), ContractError);
  }

  TEST_CASE("frame served shape follows the queues") {
    std::vector<DeadlineQueue> qs = {DeadlineQueue(1, 2), DeadlineQueue(2, 3)};
    FrameServed f(qs);
    REQUIRE(f.counts.size() == 2);
    CHECK(f.counts[0].size() == 2);
    CHECK(f.counts[1].size() == 3);
    f.counts[1][2] = 4;
    f.counts[0][0] = 1;
    CHECK(f.total() == 5);
    CHECK(f.service_total(1) == 4);
  }
}
