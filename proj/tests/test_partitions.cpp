#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include <tribegames/partitions.hpp>

using namespace tribegames;

namespace {

// canonical relabeling by first occurrence; the brute-force partition oracle
std::vector<int> canonical(std::vector<int> a) {
    std::vector<int> map(a.size(), -1);
    int next = 0;
    for (int& x : a) {
        if (map[static_cast<std::size_t>(x)] < 0) map[static_cast<std::size_t>(x)] = next++;
        x = map[static_cast<std::size_t>(x)];
    }
    return a;
}

std::set<std::vector<int>> brute_force_partitions(int n) {
    std::set<std::vector<int>> out;
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    while (true) {
        out.insert(canonical(a));
        int i = n - 1;
        while (i >= 0 && a[static_cast<std::size_t>(i)] == n - 1) a[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++a[static_cast<std::size_t>(i)];
    }
    return out;
}

} // namespace

TEST_CASE("bell and stirling counts") {
    CHECK(bell_number(1) == 1);
    CHECK(bell_number(3) == 5);
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(5) == 52);
    CHECK(stirling2(4, 2) == 7);
    CHECK(stirling2(5, 2) == 15);
    CHECK(stirling2(3, 3) == 1);
    CHECK(stirling2(4, 5) == 0);
}

TEST_CASE("sweep yields every set partition once, in restricted-growth order") {
    auto all3 = sweep_partitions(3);
    std::vector<std::vector<int>> expected{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
    REQUIRE(all3.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(all3[i].tribe_of == expected[i]);

    auto all4 = sweep_partitions(4);
    CHECK(all4.size() == 15);
    std::set<std::vector<int>> seen;
    for (const TribePartition& tau : all4) seen.insert(tau.tribe_of);
    CHECK(seen == brute_force_partitions(4));
}

TEST_CASE("tribe-count filter") {
    CHECK(sweep_partitions(3, 3).size() == 1);
    CHECK(sweep_partitions(4, 2).size() == 7);
    CHECK(sweep_partitions(5, 2).size() == 15);
    CHECK(sweep_partitions(4, 1).size() == 1);
    for (const TribePartition& tau : sweep_partitions(5, 3)) CHECK(tau.tribe_count == 3);
    CHECK(sweep_partitions(5, 3).size() == stirling2(5, 3));
}

TEST_CASE("partition sweeps respect the budget") {
    Budgets tight;
    tight.profile_budget = 10;
    CHECK_THROWS_AS(sweep_partitions(5, std::nullopt, tight), budget_error);
    CHECK_NOTHROW(sweep_partitions(3, std::nullopt, tight).size()); // Bell(3) = 5 fits

}
