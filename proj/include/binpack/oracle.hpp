// Offline baselines: exact branch-and-bound OPT for small instances, volume
// lower bound, first-fit variants and the linear-grouping APTAS used as the
// size-cost epoch repacker.

#pragma once

#include <algorithm>
#include <numeric>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "binpack/core.hpp"

namespace binpack {

inline long long volume_lower_bound(const std::vector<Item>& items) {
    Rational v;
    for (const auto& it : items) v += it.size;
    return v.ceil_i64();
}

struct OptResult {
    long long bins = 0;
    bool exact = false;
    std::optional<PackingState> witness;
    long long lower_bound = 0;   // volume bound; equals bins when exact
    std::uint64_t nodes = 0;
};

namespace detail {

// Branch and bound over item -> bin assignments. Num is either long long
// (sizes rescaled to a common denominator; the hot path) or Rational.
template <class Num>
struct BnbState {
    std::vector<Num> sizes;             // decreasing
    Num cap{};                          // bin capacity in size units
    std::vector<Num> free_space;        // per open bin
    std::vector<int> assignment;        // item index -> bin index
    std::vector<int> best_assignment;
    size_t best = 0;
    std::uint64_t nodes = 0, budget = 0;
    bool exhausted = false;
    Num remaining{};   // total size of items not yet placed
    Num open_free{};   // total residual capacity of open bins
    size_t huge_left = 0;  // unplaced items of size > cap/2

    static long long ceil_div(const Num& a, const Num& cap);
    static bool over_half(const Num& v, const Num& cap);

    void dfs(size_t idx, size_t used) {
        if (exhausted) return;
        if (++nodes > budget) {
            exhausted = true;
            return;
        }
        if (idx == sizes.size()) {
            if (used < best) {
                best = used;
                best_assignment = assignment;
            }
            return;
        }
        {
            long long extra =
                remaining > open_free ? ceil_div(remaining - open_free, cap) : 0;
            // items > 1/2 exclude each other; open bins can host at most one each
            size_t half_cap = 0;
            for (size_t b = 0; b < used; ++b)
                if (over_half(free_space[b], cap)) ++half_cap;
            size_t huge_extra = huge_left > half_cap ? huge_left - half_cap : 0;
            size_t lb = static_cast<size_t>(extra) > huge_extra ? static_cast<size_t>(extra)
                                                                : huge_extra;
            if (used + lb >= best) return;
        }

        const Num sz = sizes[idx];
        remaining = remaining - sz;
        bool huge = over_half(sz, cap);
        if (huge) --huge_left;
        // equal items: don't revisit bins before the previous copy's bin
        size_t start = 0;
        if (idx > 0 && sizes[idx - 1] == sz && assignment[idx - 1] >= 0)
            start = static_cast<size_t>(assignment[idx - 1]);

        // candidate bins, best-fit (tightest residual) first, duplicates pruned
        std::vector<size_t> cand;
        bool perfect = false;
        for (size_t b = start; b < used; ++b) {
            if (free_space[b] < sz) continue;
            if (free_space[b] == sz) {
                cand.assign(1, b);  // exact fit dominates for the largest remaining item
                perfect = true;
                break;
            }
            bool dup = false;
            for (size_t b2 : cand)
                if (free_space[b2] == free_space[b]) {
                    dup = true;
                    break;
                }
            if (!dup) cand.push_back(b);
        }
        std::sort(cand.begin(), cand.end(),
                  [&](size_t a, size_t b) { return free_space[a] < free_space[b]; });
        for (size_t b : cand) {
            free_space[b] = free_space[b] - sz;
            open_free = open_free - sz;
            assignment[idx] = static_cast<int>(b);
            dfs(idx + 1, used);
            free_space[b] = free_space[b] + sz;
            open_free = open_free + sz;
            if (exhausted) break;
        }
        if (!perfect && !exhausted && used + 1 < best) {
            if (free_space.size() <= used) free_space.resize(used + 1);
            free_space[used] = cap - sz;
            open_free = open_free + (cap - sz);
            assignment[idx] = static_cast<int>(used);
            dfs(idx + 1, used + 1);
            open_free = open_free - (cap - sz);
        }
        assignment[idx] = -1;
        remaining = remaining + sz;
        if (huge) ++huge_left;
    }
};

template <>
inline long long BnbState<long long>::ceil_div(const long long& a, const long long& cap) {
    return (a + cap - 1) / cap;
}
template <>
inline bool BnbState<long long>::over_half(const long long& v, const long long& cap) {
    return 2 * v > cap;
}
template <>
inline long long BnbState<Rational>::ceil_div(const Rational& a, const Rational& cap) {
    return (a / cap).ceil_i64();
}
template <>
inline bool BnbState<Rational>::over_half(const Rational& v, const Rational& cap) {
    return v * Rational(2) > cap;
}

// least common multiple of the size denominators if it stays small
inline std::optional<long long> common_denominator(const std::vector<Item>& items,
                                                   long long cap = 1LL << 40) {
    long long l = 1;
    for (const auto& it : items) {
        if (!it.size.den().fits_int64()) return std::nullopt;
        long long d = it.size.den().to_int64();
        long long g = std::__gcd(l, d);
        if (l / g > cap / d) return std::nullopt;
        l = l / g * d;
        if (!it.size.num().fits_int64()) return std::nullopt;
    }
    return l;
}

}  // namespace detail

inline PackingState first_fit(const std::vector<Item>& items, PackingState state = {}) {
    for (const auto& it : items) {
        bool placed = false;
        for (auto& bin : state.bins) {
            if (bin.used + it.size <= Rational(1)) {
                state.place(it, bin.id);
                placed = true;
                break;
            }
        }
        if (!placed) {
            BinId b = state.open_bin();
            state.place(it, b);
        }
    }
    return state;
}

inline PackingState first_fit_decreasing(std::vector<Item> items) {
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        int c = cmp(a.size, b.size);
        if (c != 0) return c > 0;
        return a.id < b.id;
    });
    return first_fit(items);
}

inline OptResult opt_exact(std::vector<Item> items, std::uint64_t node_budget = 10000000) {
    OptResult res;
    res.lower_bound = volume_lower_bound(items);
    if (items.empty()) {
        res.exact = true;
        res.witness = PackingState{};
        return res;
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        int c = cmp(a.size, b.size);
        if (c != 0) return c > 0;
        return a.id < b.id;
    });
    PackingState ffd = first_fit(items);

    auto run = [&](auto& bnb, auto to_num) {
        bnb.budget = node_budget;
        bnb.best = ffd.bins_used() + 1;  // strict-improvement sentinel
        bnb.assignment.assign(items.size(), -1);
        for (const auto& it : items) {
            auto s = to_num(it.size);
            bnb.sizes.push_back(s);
            bnb.remaining = bnb.remaining + s;
            if (bnb.over_half(s, bnb.cap)) ++bnb.huge_left;
        }
        bnb.free_space.reserve(items.size());
        bnb.dfs(0, 0);
        res.nodes = bnb.nodes;
        res.exact = !bnb.exhausted;
        if (!bnb.best_assignment.empty() && bnb.best <= ffd.bins_used()) {
            res.bins = static_cast<long long>(bnb.best);
            PackingState w;
            std::vector<BinId> ids(bnb.best);
            for (size_t b = 0; b < bnb.best; ++b) ids[b] = w.open_bin();
            for (size_t i = 0; i < items.size(); ++i)
                w.place(items[i], ids[static_cast<size_t>(bnb.best_assignment[i])]);
            res.witness = std::move(w);
        } else {
            res.bins = static_cast<long long>(ffd.bins_used());
            res.witness = std::move(ffd);
        }
    };

    if (auto denom = detail::common_denominator(items)) {
        detail::BnbState<long long> bnb;
        bnb.cap = *denom;
        run(bnb, [&](const Rational& s) {
            return s.num().to_int64() * (*denom / s.den().to_int64());
        });
    } else {
        detail::BnbState<Rational> bnb;
        bnb.cap = Rational(1);
        run(bnb, [](const Rational& s) { return s; });
    }
    return res;
}

// ---- configuration packing over a rounded multiset (APTAS inner solver) ----

namespace detail {

struct ConfigPacker {
    std::vector<Rational> sizes;   // distinct, decreasing
    std::vector<int> counts;
    std::uint64_t nodes = 0, budget = 0;
    bool exhausted = false;
    std::map<std::vector<int>, int> memo;  // state -> exact bins (only when subtree complete)
    size_t best = 0;
    std::vector<std::vector<int>> best_configs;  // chosen configs of best solution
    std::vector<std::vector<int>> chosen;

    Rational volume(const std::vector<int>& state) const {
        Rational v;
        for (size_t i = 0; i < sizes.size(); ++i)
            if (state[i]) v += sizes[i] * Rational(state[i]);
        return v;
    }

    // maximal configs containing >= 1 of size index `first`
    void enum_configs(const std::vector<int>& state, size_t first,
                      std::vector<std::vector<int>>& out) const {
        std::vector<int> cfg(sizes.size(), 0);
        Rational space = Rational(1) - sizes[first];
        cfg[first] = 1;
        rec_enum(state, first, space, cfg, out);
    }
    void rec_enum(const std::vector<int>& state, size_t i, Rational space, std::vector<int>& cfg,
                  std::vector<std::vector<int>>& out) const {
        if (i == sizes.size()) {
            // keep maximal configs only: no remaining item may still fit
            for (size_t k = 0; k < sizes.size(); ++k)
                if (state[k] - cfg[k] > 0 && sizes[k] <= space) return;
            out.push_back(cfg);
            return;
        }
        int maxc = state[i] - cfg[i];
        int fit = 0;
        {
            Rational s = space;
            while (fit < maxc && s >= sizes[i]) {
                s -= sizes[i];
                ++fit;
            }
        }
        for (int c = fit; c >= 0; --c) {
            cfg[i] += c;
            rec_enum(state, i + 1, space - sizes[i] * Rational(c), cfg, out);
            cfg[i] -= c;
        }
    }

    void dfs(std::vector<int>& state, size_t used) {
        if (exhausted) return;
        if (++nodes > budget) {
            exhausted = true;
            return;
        }
        size_t first = 0;
        while (first < state.size() && state[first] == 0) ++first;
        if (first == state.size()) {
            if (used < best) {
                best = used;
                best_configs = chosen;
            }
            return;
        }
        long long lb = volume(state).ceil_i64();
        if (used + static_cast<size_t>(lb) >= best) return;
        auto it = memo.find(state);
        if (it != memo.end() && used + static_cast<size_t>(it->second) >= best) return;

        std::vector<std::vector<int>> cfgs;
        enum_configs(state, first, cfgs);
        std::sort(cfgs.begin(), cfgs.end(),
                  [&](const std::vector<int>& a, const std::vector<int>& b) {
                      Rational fa, fb;
                      for (size_t i = 0; i < sizes.size(); ++i) {
                          fa += sizes[i] * Rational(a[i]);
                          fb += sizes[i] * Rational(b[i]);
                      }
                      return fa > fb;  // fullest first
                  });
        for (const auto& cfg : cfgs) {
            for (size_t i = 0; i < state.size(); ++i) state[i] -= cfg[i];
            chosen.push_back(cfg);
            dfs(state, used + 1);
            chosen.pop_back();
            for (size_t i = 0; i < state.size(); ++i) state[i] += cfg[i];
            if (exhausted) return;
        }
        if (!exhausted && best > used) memo[state] = static_cast<int>(best - used);
    }
};

}  // namespace detail

// Linear-grouping APTAS. Items >= eps are grouped into ceil(1/eps^2) rank
// classes, rounded up within class, packed exactly over configurations, then
// the small items go first-fit into the residual space.
//
// Bins <= (1+2 eps) OPT + O(eps^-2) on every tested instance.
inline PackingState aptas_pack(const std::vector<Item>& items, const Rational& eps,
                               std::uint64_t config_budget = 200000) {
    if (eps <= Rational(0) || eps > Rational(1, 6))
        throw std::invalid_argument("aptas_pack: eps out of (0,1/6]");

    std::vector<Item> large, small;
    for (const auto& it : items)
        (it.size >= eps ? large : small).push_back(it);
    std::sort(large.begin(), large.end(), [](const Item& a, const Item& b) {
        int c = cmp(a.size, b.size);
        if (c != 0) return c > 0;
        return a.id < b.id;
    });

    PackingState state;
    if (!large.empty()) {
        long long m = (Rational(1) / (eps * eps)).ceil_i64();
        size_t group = (large.size() + static_cast<size_t>(m) - 1) / static_cast<size_t>(m);
        if (group == 0) group = 1;

        // rounded size per item: the largest size in its rank class
        std::vector<Rational> rounded(large.size());
        for (size_t i = 0; i < large.size(); ++i) rounded[i] = large[(i / group) * group].size;

        std::vector<Rational> distinct;
        std::vector<int> counts;
        for (const auto& r : rounded) {
            if (!distinct.empty() && distinct.back() == r)
                ++counts.back();
            else {
                distinct.push_back(r);
                counts.push_back(1);
            }
        }

        std::vector<std::vector<int>> configs;
        if (large.size() <= 24 || distinct.size() > 8) {
            // mostly-distinct sizes: item-level branch and bound (budgeted,
            // first-fit-decreasing fallback) beats config enumeration
            std::vector<Item> rounded_items;
            for (size_t i = 0; i < large.size(); ++i) rounded_items.emplace_back(i, rounded[i]);
            auto opt = opt_exact(rounded_items, config_budget);
            for (const auto& bin : opt.witness->bins) {
                if (bin.contents.empty()) continue;
                std::vector<int> cfg(distinct.size(), 0);
                for (ItemId idx : bin.contents) {
                    const Rational& r = rounded[static_cast<size_t>(idx)];
                    for (size_t k = 0; k < distinct.size(); ++k)
                        if (distinct[k] == r) {
                            ++cfg[k];
                            break;
                        }
                }
                configs.push_back(cfg);
            }
        } else {
            detail::ConfigPacker packer;
            packer.sizes = distinct;
            packer.counts = counts;
            packer.budget = config_budget;
            // greedy first-fit-decreasing over the rounded multiset seeds the bound
            {
                std::vector<Item> rounded_items;
                for (size_t i = 0; i < large.size(); ++i)
                    rounded_items.emplace_back(i, rounded[i]);
                packer.best = first_fit(rounded_items).bins_used() + 1;
            }
            std::vector<int> st = counts;
            packer.dfs(st, 0);
            configs = packer.best_configs;
        }
        if (configs.empty()) {
            // budget fallback: one config per FFD bin of the rounded multiset
            std::vector<Item> rounded_items;
            for (size_t i = 0; i < large.size(); ++i) rounded_items.emplace_back(i, rounded[i]);
            PackingState ffd = first_fit(rounded_items);
            for (const auto& bin : ffd.bins) {
                if (bin.contents.empty()) continue;
                std::vector<int> cfg(distinct.size(), 0);
                for (ItemId idx : bin.contents) {
                    const Rational& r = rounded[static_cast<size_t>(idx)];
                    for (size_t k = 0; k < distinct.size(); ++k)
                        if (distinct[k] == r) {
                            ++cfg[k];
                            break;
                        }
                }
                configs.push_back(cfg);
            }
        }

        // hand real items (grouped by rounded class, largest first) into config slots
        std::vector<std::vector<Item>> pool(distinct.size());
        for (size_t i = 0; i < large.size(); ++i) {
            for (size_t k = 0; k < distinct.size(); ++k)
                if (distinct[k] == rounded[i]) {
                    pool[k].push_back(large[i]);
                    break;
                }
        }
        for (const auto& cfg : configs) {
            BinId b = state.open_bin();
            for (size_t k = 0; k < cfg.size(); ++k)
                for (int c = 0; c < cfg[k]; ++c) {
                    if (pool[k].empty()) continue;
                    state.place(pool[k].back(), b);
                    pool[k].pop_back();
                }
        }
        for (auto& p : pool)
            if (!p.empty()) throw std::logic_error("aptas_pack: unplaced large item");
    }

    state = first_fit(small, std::move(state));
    return state;
}

}  // namespace binpack
