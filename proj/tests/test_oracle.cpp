#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "binpack/oracle.hpp"

using namespace binpack;

namespace {

// Independent oracle: exhaustive enumeration over set partitions (n <= 8).
size_t partition_opt(const std::vector<Item>& items) {
    size_t best = items.size() + 1;
    std::vector<Rational> loads;
    std::function<void(size_t)> rec = [&](size_t idx) {
        if (loads.size() >= best) return;
        if (idx == items.size()) {
            best = loads.size();
            return;
        }
        for (size_t b = 0; b < loads.size(); ++b) {
            if (loads[b] + items[idx].size <= Rational(1)) {
                loads[b] += items[idx].size;
                rec(idx + 1);
                loads[b] -= items[idx].size;
            }
        }
        loads.push_back(items[idx].size);
        rec(idx + 1);
        loads.pop_back();
    };
    rec(0);
    return best;
}

std::vector<Item> make_items(const std::vector<Rational>& sizes) {
    std::vector<Item> v;
    for (size_t i = 0; i < sizes.size(); ++i) v.emplace_back(i + 1, sizes[i]);
    return v;
}

}  // namespace

TEST_CASE("volume lower bound") {
    CHECK(volume_lower_bound({}) == 0);
    CHECK(volume_lower_bound(make_items({Rational(1, 2), Rational(1, 2), Rational(1, 2)})) == 2);
}

TEST_CASE("opt_exact basics") {
    auto r1 = opt_exact(make_items({Rational(1, 2), Rational(1, 2)}));
    CHECK(r1.bins == 1);
    CHECK(r1.exact);
    REQUIRE(r1.witness.has_value());
    CHECK(validate_packing(*r1.witness).empty());

    auto r2 = opt_exact(make_items({Rational(3, 5), Rational(3, 5), Rational(3, 5)}));
    CHECK(r2.bins == 3);
}

TEST_CASE("opt_exact matches set-partition enumeration on random instances") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        size_t n = 2 + rng() % 7;
        std::vector<Rational> sizes;
        for (size_t i = 0; i < n; ++i)
            sizes.emplace_back(1 + static_cast<long long>(rng() % 100), 100);
        auto items = make_items(sizes);
        auto bnb = opt_exact(items);
        REQUIRE(bnb.exact);
        CHECK(static_cast<size_t>(bnb.bins) == partition_opt(items));
        CHECK(validate_packing(*bnb.witness).empty());
        CHECK(bnb.lower_bound <= bnb.bins);
    }
}

TEST_CASE("first fit traces") {
    auto p = first_fit(make_items({Rational(3, 5), Rational(1, 2), Rational(2, 5)}));
    REQUIRE(p.bins.size() == 2);
    CHECK(p.bins[0].used == Rational(1));      // 0.6 + 0.4
    CHECK(p.bins[1].used == Rational(1, 2));   // 0.5

    CHECK(first_fit(make_items({Rational(1, 3)})).bins_used() == 1);

    std::vector<Rational> ones(5, Rational(1));
    CHECK(first_fit(make_items(ones)).bins_used() == 5);
}

TEST_CASE("first fit decreasing") {
    auto p = first_fit_decreasing(make_items({Rational(2, 5), Rational(3, 5), Rational(1, 2)}));
    CHECK(p.bins_used() == 2);
    CHECK(first_fit_decreasing({}).bins_used() == 0);
    std::vector<Rational> sevenths(7, Rational(1, 7));
    CHECK(first_fit_decreasing(make_items(sevenths)).bins_used() == 1);
}

TEST_CASE("ff sandwich: volume <= opt <= ff <= 2 opt") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        size_t n = 1 + rng() % 12;
        std::vector<Rational> sizes;
        for (size_t i = 0; i < n; ++i)
            sizes.emplace_back(1 + static_cast<long long>(rng() % 1000), 1000);
        auto items = make_items(sizes);
        auto opt = opt_exact(items);
        REQUIRE(opt.exact);
        auto ff = first_fit(items);
        CHECK(volume_lower_bound(items) <= opt.bins);
        CHECK(opt.bins <= static_cast<long long>(ff.bins_used()));
        CHECK(static_cast<long long>(ff.bins_used()) <= 2 * opt.bins);
    }
}

TEST_CASE("aptas: single item of size 1") {
    auto p = aptas_pack(make_items({Rational(1)}), Rational(1, 6));
    CHECK(p.bins_used() == 1);
    CHECK(validate_packing(p).empty());
}

TEST_CASE("aptas: all-small instance obeys the volume bound") {
    std::mt19937_64 rng(9);
    Rational eps(1, 6);
    std::vector<Rational> sizes;
    Rational vol;
    for (int i = 0; i < 200; ++i) {
        Rational s(1 + static_cast<long long>(rng() % 160), 1000);
        sizes.push_back(s);
        vol += s;
    }
    auto p = aptas_pack(make_items(sizes), eps);
    CHECK(validate_packing(p).empty());
    long long cap = (vol / (Rational(1) - eps)).ceil_i64() + 1;
    CHECK(static_cast<long long>(p.bins_used()) <= cap);
}

TEST_CASE("aptas vs opt_exact on random mid-size items") {
    std::mt19937_64 rng(1234);
    Rational eps(1, 6);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<Rational> sizes;
        for (int i = 0; i < 20; ++i)
            sizes.emplace_back(200 + static_cast<long long>(rng() % 601), 1000);
        auto items = make_items(sizes);
        auto opt = opt_exact(items);
        REQUIRE(opt.exact);
        auto p = aptas_pack(items, eps);
        CHECK(validate_packing(p).empty());
        Rational bound = (Rational(1) + eps * Rational(2)) * Rational(opt.bins) + Rational(10);
        CHECK(Rational(static_cast<long long>(p.bins_used())) <= bound);
    }
}

TEST_CASE("opt_exact budget exhaustion is reported, result stays an upper bound") {
    std::vector<Rational> sizes;
    std::mt19937_64 rng(77);
    for (int i = 0; i < 16; ++i)
        sizes.emplace_back(300 + static_cast<long long>(rng() % 400), 1000);
    auto items = make_items(sizes);
    auto tight = opt_exact(items, 10);
    CHECK_FALSE(tight.exact);
    auto full = opt_exact(items);
    CHECK(full.exact);
    CHECK(full.bins <= tight.bins);
}
