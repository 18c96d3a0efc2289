#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "binpack/adversary.hpp"
#include "binpack/sh_general.hpp"

using namespace binpack;

TEST_CASE("cost classes round down to powers of two") {
    CHECK(cost_class(Rational(1)) == 0);
    CHECK(cost_class(Rational(3, 2)) == 0);
    CHECK(cost_class(Rational(2)) == 1);
    CHECK(cost_class(Rational(1, 2)) == -1);
    CHECK(cost_class(Rational(5, 8)) == -1);
    CHECK(cost_class(Rational(7, 16)) == -2);
    CHECK(cost_class(Rational(1024)) == 10);
}

namespace {
Item costed(ItemId id, Rational size, Rational cost) { return Item(id, size, cost); }
}  // namespace

TEST_CASE("cost chain: insert into empty class opens one bin, no moves") {
    BinId ids = 1;
    CostChain ch(ids);
    auto rep = ch.insert(costed(1, Rational(1, 3), Rational(8)),
                         [] { return std::make_pair(2, false); });
    CHECK(rep.moved.empty());
    CHECK(ch.bin_count() == 1);
    CHECK(ch.audit().empty());
}

TEST_CASE("cost chain: cascade touches one item per lower class") {
    BinId ids = 1;
    CostChain ch(ids);
    auto pol = [] { return std::make_pair(2, false); };
    ItemId id = 1;
    // fill classes 8, 4, 2 with one full bin each
    for (long long c : {8, 8, 4, 4, 2, 2})
        ch.insert(costed(id++, Rational(1, 3), Rational(c)), pol);
    REQUIRE(ch.audit().empty());
    REQUIRE(ch.bin_count() == 3);
    // a new cost-8 item displaces at most one item per class; moved cost <= 8+4+2
    auto rep = ch.insert(costed(id++, Rational(1, 3), Rational(8)), pol);
    CHECK(rep.moved.size() <= 3);
    Rational moved;
    for (const auto& e : rep.moved) moved += e.cost;
    CHECK(moved <= Rational(14));
    CHECK(ch.audit().empty());
}

TEST_CASE("cost chain: random ops keep order, fullness, and the 6x bound") {
    std::mt19937_64 rng(31);
    BinId ids = 1;
    CostChain ch(ids);
    auto pol = [] { return std::make_pair(3, false); };
    std::vector<Item> live;
    ItemId id = 1;
    for (int op = 0; op < 3000; ++op) {
        bool ins = live.empty() || rng() % 100 < 52;
        Rational moved, opcost;
        if (ins) {
            Item it = costed(id++, Rational(1, 5),
                             Rational(1 + static_cast<long long>(rng() % 4096), 16));
            opcost = *it.cost;
            auto rep = ch.insert(it, pol);
            for (const auto& e : rep.moved) moved += e.cost;
            live.push_back(it);
        } else {
            size_t k = rng() % live.size();
            opcost = *live[k].cost;
            auto rep = ch.erase(live[k].id);
            for (const auto& e : rep.moved) moved += e.cost;
            live.erase(live.begin() + static_cast<long>(k));
        }
        CHECK(moved <= Rational(6) * opcost);
        if (op % 100 == 0) {
            auto bad = ch.audit();
            for (auto& v : bad) MESSAGE(v);
            REQUIRE(bad.empty());
        }
    }
    CHECK(ch.live_items() == live.size());
}

TEST_CASE("simple 2-approx: n items of size 1/2 pack in ceil(n/2) bins") {
    SimpleTwoApprox algo;
    for (int n : {1, 2, 5, 8}) {
        SimpleTwoApprox a;
        for (int i = 0; i < n; ++i)
            a.step(Event::insert(costed(i + 1, Rational(1, 2), Rational(1))));
        CHECK(a.bins_used() == static_cast<size_t>((n + 1) / 2));
    }
    // sizes 0.3,0.3 round to 1/2 and share one bin
    SimpleTwoApprox b;
    b.step(Event::insert(costed(1, Rational(3, 10), Rational(1))));
    b.step(Event::insert(costed(2, Rational(3, 10), Rational(1))));
    CHECK(b.bins_used() == 1);
    (void)algo;
}

TEST_CASE("simple 2-approx bound vs exact opt on random streams") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 12; ++trial) {
        SimpleTwoApprox algo;
        auto stream = random_stream(1000 + trial, 60, 12, 1, 999, 40, CostVariant::General);
        std::vector<Item> live;
        for (const auto& ev : stream.events) {
            Rational opcost =
                ev.is_insert() ? *ev.item.cost
                               : *std::find_if(live.begin(), live.end(), [&](const Item& x) {
                                      return x.id == ev.item.id;
                                  })->cost;
            algo.step(ev);
            CHECK(algo.last_step_moved_cost() <= Rational(6) * opcost);
            if (ev.is_insert())
                live.push_back(ev.item);
            else
                live.erase(std::find_if(live.begin(), live.end(),
                                        [&](const Item& x) { return x.id == ev.item.id; }));
            if (!live.empty() && live.size() <= 12) {
                auto opt = opt_exact(live);
                REQUIRE(opt.exact);
                double n = static_cast<double>(live.size());
                double bound = 2.0 * static_cast<double>(opt.bins) + 1.0 +
                               std::log2(std::max(2.0, n));
                CHECK(static_cast<double>(algo.bins_used()) <= bound);
            }
        }
        REQUIRE(algo.audit().empty());
        REQUIRE(validate_packing(algo.snapshot()).empty());
    }
    (void)rng;
}

TEST_CASE("harmonic parameters: no red items, near-uniform behavior") {
    auto p = SHParams::harmonic(6, Rational(1, 6));
    p.validate();
    SHLargeState st(p, CostModel{CostVariant::General});
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        Item it(i + 1, Rational(200 + static_cast<long long>(rng() % 800), 1000),
                Rational(1 + static_cast<long long>(rng() % 100), 8));
        st.insert(it);
    }
    auto bad = st.audit();
    for (auto& v : bad) MESSAGE(v);
    CHECK(bad.empty());
    for (int t = 1; t <= 6; ++t) CHECK(st.match().nodes().size() > 0);
    // harmonic has no edges, so no pairs and no red items anywhere
    CHECK(st.match().matched_pairs() == 0);
}

TEST_CASE("red coloring rule with alpha=1/2") {
    SHParams p;
    p.eps = Rational(1, 6);
    p.K = 2;
    p.thresholds = {Rational(1, 6), Rational(1, 2), Rational(1)};
    p.alpha = {Rational(1, 2), Rational(0)};
    p.beta = {2, 1};
    p.gamma = {2, 1};
    p.finalize();
    // delta_1 = max{1/2*(2-2)+1+2, 0} = 3
    CHECK(p.delta[0] == Rational(3));

    SHLargeState st(p, CostModel{CostVariant::General});
    for (int i = 0; i < 4; ++i)
        st.insert(costed(i + 1, Rational(1, 3), Rational(4)));
    auto bad = st.audit();
    for (auto& v : bad) MESSAGE(v);
    CHECK(bad.empty());
    // red count within [floor(n/2), floor(n/2)+3]
    long long reds = 0;
    // count via snapshot of type-1 chain: audit already enforced the range
    (void)reds;
}

TEST_CASE("stable matching maintains zero blocking pairs under churn") {
    SHParams p;
    p.eps = Rational(1, 6);
    p.K = 3;
    p.thresholds = {Rational(1, 6), Rational(1, 3), Rational(3, 5), Rational(1)};
    p.alpha = {Rational(1, 2), Rational(1, 2), Rational(0)};
    p.beta = {1, 1, 1};
    p.gamma = {1, 1, 1};
    p.edges = {{1, 2}};  // one blue small-type item with one red mid-type item
    p.finalize();

    SHLargeState st(p, CostModel{CostVariant::General});
    std::mt19937_64 rng(77);
    std::vector<Item> live;
    ItemId id = 1;
    for (int op = 0; op < 800; ++op) {
        bool ins = live.empty() || rng() % 100 < 55;
        if (ins) {
            long long t = 170 + static_cast<long long>(rng() % 830);
            Item it(id++, Rational(t, 1000), Rational(1 + static_cast<long long>(rng() % 256), 4));
            st.insert(it);
            live.push_back(it);
        } else {
            size_t k = rng() % live.size();
            st.erase(live[k].id);
            live.erase(live.begin() + static_cast<long>(k));
        }
        if (op % 25 == 0) {
            auto bad = st.audit();
            for (auto& v : bad) MESSAGE(v);
            REQUIRE(bad.empty());
        }
    }
    REQUIRE(st.audit().empty());
    REQUIRE(validate_packing(st.snapshot()).empty());
}

TEST_CASE("full sh algorithm over a mixed random stream") {
    auto p = SHParams::harmonic(6, Rational(1, 6));
    GeneralCostAlgo algo(p);
    auto stream = random_stream(42, 2000, 400, 1, 1000, 45, CostVariant::General);
    size_t step = 0;
    for (const auto& ev : stream.events) {
        algo.step(ev);
        if (++step % 100 == 0) {
            auto bad = algo.audit();
            for (auto& v : bad) MESSAGE(v);
            REQUIRE(bad.empty());
        }
    }
    // measured bins against the volume bound (harmonic 1.69 + slack)
    auto snap = algo.snapshot();
    REQUIRE(validate_packing(snap).empty());
    CHECK(snap.bins_used() == algo.bins_used());
    std::vector<Item> live;
    for (const auto& kv : snap.items) live.push_back(kv.second);
    long long vol = volume_lower_bound(live);
    CHECK(static_cast<double>(algo.bins_used()) <= 1.8 * static_cast<double>(vol) + 30.0);
}

TEST_CASE("sh full: items of one harmonic type pack beta per bin") {
    auto p = SHParams::harmonic(6, Rational(1, 6));
    GeneralCostAlgo algo(p);
    // size just over 1/3 -> type with beta=2
    for (int i = 0; i < 40; ++i)
        algo.step(Event::insert(costed(i + 1, Rational(34, 100), Rational(1))));
    CHECK(algo.bins_used() == 20);
    REQUIRE(algo.audit().empty());
}

TEST_CASE("matching-heavy parameters stay stable under long churn") {
    // two edges and three red fractions: stresses widow chains and re-keying
    SHParams p;
    p.eps = Rational(1, 6);
    p.K = 4;
    p.thresholds = {Rational(1, 6), Rational(1, 4), Rational(1, 3), Rational(3, 5),
                    Rational(1)};
    p.alpha = {Rational(1, 3), Rational(1, 2), Rational(1, 4), Rational(0)};
    p.beta = {2, 2, 1, 1};
    p.gamma = {1, 1, 1, 1};
    p.edges = {{1, 1}, {2, 1}};
    p.finalize();
    GeneralCostAlgo algo(p);
    auto stream = random_stream(2024, 2500, 500, 1, 1000, 47, CostVariant::General);
    size_t step = 0;
    for (const auto& ev : stream.events) {
        algo.step(ev);
        if (++step % 25 == 0) {
            auto bad = algo.audit();
            for (auto& v : bad) MESSAGE(v);
            REQUIRE(bad.empty());
        }
    }
    CHECK(algo.large().match().matched_pairs() > 0);
    REQUIRE(validate_packing(algo.snapshot()).empty());
}
