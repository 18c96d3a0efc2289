// Amortized unit-cost algorithm: small items live in the bin curve with
// worst-case recourse, large items are handled lazily within an epoch and
// repacked at epoch end (offline near-optimal packing, gluing into huge
// pseudo-items, canonical greedy placement on top of the curve).
//
// A worst-case-recourse variant would swap the epoch repack for a
// fully-dynamic near-optimal packer of the items above 1/4 plus first-fit
// maintenance of the medium band; the seam is epoch_repack() below — replace
// the aptas_pack call with such a maintainer and drop the epoch counter.
// No such subroutine ships here, so only the amortized variant is built.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "binpack/core.hpp"
#include "binpack/curvefit.hpp"
#include "binpack/oracle.hpp"

namespace binpack {

// Greedy canonical placement: pseudo-items ascending, each into the first
// (least free space) unoccupied bin that fits, else a fresh bin (-1).
// Requires every pseudo-item > 1/2 so no two share a bin.
inline std::vector<long long> canonical_pack(const std::vector<Rational>& pseudo_asc,
                                             const std::vector<Rational>& free_asc) {
    for (size_t i = 1; i < pseudo_asc.size(); ++i)
        if (pseudo_asc[i] < pseudo_asc[i - 1])
            throw std::invalid_argument("canonical_pack: items not ascending");
    for (const auto& p : pseudo_asc)
        if (p <= Rational(1, 2)) throw std::invalid_argument("canonical_pack: item not huge");
    for (size_t i = 1; i < free_asc.size(); ++i)
        if (free_asc[i] < free_asc[i - 1])
            throw std::invalid_argument("canonical_pack: bins not ascending");
    std::vector<bool> taken(free_asc.size(), false);
    std::vector<long long> out(pseudo_asc.size(), -1);
    size_t cursor = 0;
    for (size_t i = 0; i < pseudo_asc.size(); ++i) {
        while (cursor < free_asc.size() &&
               (taken[cursor] || free_asc[cursor] < pseudo_asc[i]))
            ++cursor;
        if (cursor < free_asc.size()) {
            taken[cursor] = true;
            out[i] = static_cast<long long>(cursor);
        }
    }
    return out;
}

// Obs packorder: a used bin's configuration exceeds the free space of every
// unused bin before it, and placement sizes are non-decreasing bin-over-bin.
inline bool verify_canonical_order(const std::vector<Rational>& pseudo_asc,
                                   const std::vector<Rational>& free_asc,
                                   const std::vector<long long>& assign) {
    std::vector<Rational> placed(free_asc.size(), Rational(-1));
    for (size_t i = 0; i < assign.size(); ++i)
        if (assign[i] >= 0) placed[static_cast<size_t>(assign[i])] = pseudo_asc[i];
    Rational prev(-1);
    for (size_t b = 0; b < free_asc.size(); ++b) {
        if (placed[b] < Rational(0)) continue;
        for (size_t b2 = 0; b2 < b; ++b2)
            if (placed[b2] < Rational(0) && free_asc[b2] >= placed[b]) return false;
        if (placed[b] < prev) return false;
        prev = placed[b];
    }
    return true;
}

class UnitCostAlgo {
public:
    struct LargeGroup {
        BinId bin_id = 0;
        enum class Kind { Lazy, Host, Overflow, Standalone } kind = Kind::Lazy;
        BinId curve_bin = 0;  // Host only
        std::vector<ItemId> members;
    };

    UnitCostAlgo(Rational eps, CurveSpec spec)
        : eps_(std::move(eps)),
          curve_(std::move(spec)),
          ledger_(CostModel{CostVariant::Unit}) {
        epoch_ops_remaining_ = 1;
    }

    static UnitCostAlgo make(const Rational& eps) {
        auto sol = solve_lp(build_lp(eps, Rational(0), true));
        auto rd = round_to_eps_multiples(sol, eps);
        auto fr = derive_frequencies(rd, eps);
        return UnitCostAlgo(eps, CurveSpec::from_frequencies(eps, fr, make_size_grid(eps)));
    }

    const RecourseLedger& ledger() const { return ledger_; }
    const Rational& eps() const { return eps_; }
    long long epoch_bin_count() const { return epoch_bin_count_; }
    long long epoch_ops_remaining() const { return epoch_ops_remaining_; }
    size_t live_items() const { return curve_.live_items() + large_.size(); }
    size_t last_step_moves() const { return last_step_moves_; }

    void step(const Event& ev) {
        ledger_.start_step();
        last_step_moves_ = 0;
        if (ev.is_insert())
            do_insert(ev.item);
        else
            do_erase(ev.item.id);
        if (--epoch_ops_remaining_ <= 0) epoch_repack();
    }

    size_t bins_used() const {
        std::set<BinId> curve_used;
        std::set<BinId> curve_alive;
        for (const auto& b : curve_.bins()) {
            curve_alive.insert(b.id);
            if (!b.items.empty()) curve_used.insert(b.id);
        }
        size_t others = 0;
        for (const auto& kv : groups_) {
            const LargeGroup& g = kv.second;
            if (g.kind == LargeGroup::Kind::Host && curve_alive.count(g.curve_bin))
                curve_used.insert(g.curve_bin);
            else
                ++others;
        }
        return curve_used.size() + others;
    }

    // forces the end-of-epoch recomputation; normally driven by the counter
    void epoch_repack() {
        std::vector<Item> larges;
        for (const auto& kv : large_) larges.push_back(kv.second);
        std::map<ItemId, BinId> old_tag;
        for (const auto& kv : groups_)
            for (ItemId id : kv.second.members) old_tag[id] = tag_of(kv.second);
        std::map<BinId, std::vector<ItemId>> old_loose;  // non-host groups for id reuse
        for (const auto& kv : groups_)
            if (kv.second.kind != LargeGroup::Kind::Host)
                old_loose[tag_of(kv.second)] = kv.second.members;
        groups_.clear();
        item_group_.clear();

        if (!larges.empty()) {
            PackingState packed = aptas_pack(larges, eps_);

            struct Pseudo {
                Rational rounded;
                std::vector<ItemId> members;
            };
            std::vector<Pseudo> pseudos;
            std::vector<std::vector<ItemId>> standalone;
            for (const auto& bin : packed.bins) {
                if (bin.contents.empty()) continue;
                if (bin.used <= Rational(1, 2)) {
                    standalone.push_back(bin.contents);
                } else {
                    Pseudo p;
                    p.members = bin.contents;
                    Rational q = bin.used / eps_;
                    BigInt c = q.ceil();
                    p.rounded = Rational(c, BigInt(1)) * eps_;
                    pseudos.push_back(std::move(p));
                }
            }
            std::sort(pseudos.begin(), pseudos.end(), [](const Pseudo& a, const Pseudo& b) {
                int c = cmp(a.rounded, b.rounded);
                if (c != 0) return c < 0;
                return a.members < b.members;
            });

            // eligible curve bins: everything outside the last bucket with
            // reserved space, ascending by nominal free space
            struct Slot {
                Rational free;
                BinId bin;
            };
            std::vector<Slot> slots;
            {
                const auto& bins = curve_.bins();
                size_t limit = bins.size();
                if (curve_.bucket_count() > 0) {
                    // bins of the last bucket sit at the tail of the flat order
                    size_t last_bucket_bins = last_bucket_bin_count();
                    limit = bins.size() - std::min(bins.size(), last_bucket_bins);
                }
                for (size_t i = 0; i < limit; ++i) {
                    Rational f = Rational(1) - bins[i].target;
                    if (f > Rational(0)) slots.push_back({f, bins[i].id});
                }
                std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
                    int c = cmp(a.free, b.free);
                    if (c != 0) return c < 0;
                    return a.bin < b.bin;
                });
            }
            std::vector<Rational> sizes, frees;
            for (const auto& p : pseudos) sizes.push_back(p.rounded);
            for (const auto& s : slots) frees.push_back(s.free);
            auto assign = canonical_pack(sizes, frees);

            std::vector<std::vector<ItemId>> overflow;
            for (size_t i = 0; i < pseudos.size(); ++i) {
                if (assign[i] >= 0) {
                    LargeGroup g;
                    g.kind = LargeGroup::Kind::Host;
                    g.curve_bin = slots[static_cast<size_t>(assign[i])].bin;
                    g.bin_id = g.curve_bin;
                    g.members = pseudos[i].members;
                    add_group(std::move(g));
                } else {
                    overflow.push_back(pseudos[i].members);
                }
            }
            place_loose(std::move(overflow), LargeGroup::Kind::Overflow, old_loose);
            place_loose(std::move(standalone), LargeGroup::Kind::Standalone, old_loose);
        }

        // relocation charges: anything whose physical bin tag changed
        for (const auto& kv : groups_) {
            BinId t = tag_of(kv.second);
            for (ItemId id : kv.second.members) {
                auto old = old_tag.find(id);
                if (old == old_tag.end() || old->second != t) {
                    ledger_.record_move(large_.at(id));
                    ++last_step_moves_;
                }
            }
        }

        epoch_bin_count_ = static_cast<long long>(bins_used());
        Rational len = eps_ * Rational(epoch_bin_count_);
        epoch_ops_remaining_ = std::max<long long>(1, len.ceil_i64());
    }

    std::vector<std::string> audit() {
        auto rep = curve_.audit();
        auto bad = rep.violations;
        std::set<BinId> curve_alive;
        std::map<BinId, Rational> curve_small_used;
        for (const auto& b : curve_.bins()) {
            curve_alive.insert(b.id);
            curve_small_used[b.id] = b.used;
        }
        std::set<BinId> hosts;
        for (const auto& kv : groups_) {
            const LargeGroup& g = kv.second;
            Rational vol;
            for (ItemId id : g.members) {
                auto it = large_.find(id);
                if (it == large_.end()) {
                    bad.push_back("group member not live: " + std::to_string(id));
                    continue;
                }
                vol += it->second.size;
            }
            if (g.kind == LargeGroup::Kind::Host && curve_alive.count(g.curve_bin)) {
                if (!hosts.insert(g.curve_bin).second)
                    bad.push_back("two pseudo-items on one curve bin");
                if (curve_small_used[g.curve_bin] + vol > Rational(1))
                    bad.push_back("hosted bin physically overfull");
            } else if (vol > Rational(1)) {
                bad.push_back("large group overfull");
            }
        }
        for (const auto& kv : item_group_)
            if (!groups_.count(kv.second))
                bad.push_back("stale group pointer for item " + std::to_string(kv.first));
        return bad;
    }

    PackingState snapshot() const {
        PackingState st;
        std::map<BinId, BinId> curve_to_snap;
        for (const auto& bin : curve_.bins()) {
            if (bin.items.empty()) continue;
            BinId b = st.open_bin();
            curve_to_snap[bin.id] = b;
            for (const auto& it : bin.items) st.place(it, b);
        }
        std::set<BinId> curve_alive;
        for (const auto& bin : curve_.bins()) curve_alive.insert(bin.id);
        for (const auto& kv : groups_) {
            const LargeGroup& g = kv.second;
            BinId b;
            if (g.kind == LargeGroup::Kind::Host && curve_alive.count(g.curve_bin)) {
                auto it = curve_to_snap.find(g.curve_bin);
                b = it == curve_to_snap.end() ? st.open_bin() : it->second;
                if (it == curve_to_snap.end()) curve_to_snap[g.curve_bin] = b;
            } else {
                b = st.open_bin();
            }
            for (ItemId id : g.members) st.place(large_.at(id), b);
        }
        return st;
    }

private:
    Rational eps_;
    CurveState curve_;
    std::unordered_map<ItemId, Item> large_;
    std::map<BinId, LargeGroup> groups_;
    std::unordered_map<ItemId, BinId> item_group_;
    RecourseLedger ledger_;
    long long epoch_ops_remaining_ = 1;
    long long epoch_bin_count_ = 0;
    BinId next_group_id_ = 1000000000ULL;  // clear of curve bin ids
    size_t last_step_moves_ = 0;

    static BinId tag_of(const LargeGroup& g) {
        return g.kind == LargeGroup::Kind::Host ? g.curve_bin : g.bin_id;
    }

    size_t last_bucket_bin_count() const {
        // trailing bucket length in bins; the curve keeps clump size T fixed
        size_t buckets = curve_.bucket_count();
        if (buckets == 0) return 0;
        // recompute from the audit-free accessors: bins per bucket = clumps * T
        // (CurveState keeps the last bucket's clumps at the tail of the flat order)
        return curve_.last_bucket_clumps() * static_cast<size_t>(curve_.spec().T);
    }

    void add_group(LargeGroup g) {
        if (g.bin_id == 0) g.bin_id = next_group_id_++;
        for (ItemId id : g.members) item_group_[id] = g.bin_id;
        groups_[g.bin_id] = std::move(g);
    }

    void place_loose(std::vector<std::vector<ItemId>> sets, LargeGroup::Kind kind,
                     std::map<BinId, std::vector<ItemId>>& old_loose) {
        for (auto& members : sets) {
            // reuse the old bin with the largest member overlap (greedy)
            BinId best = 0;
            size_t best_overlap = 0;
            for (const auto& kv : old_loose) {
                size_t ov = 0;
                for (ItemId id : members)
                    if (std::find(kv.second.begin(), kv.second.end(), id) != kv.second.end())
                        ++ov;
                if (ov > best_overlap) {
                    best_overlap = ov;
                    best = kv.first;
                }
            }
            LargeGroup g;
            g.kind = kind;
            g.members = std::move(members);
            if (best_overlap > 0) {
                g.bin_id = best;
                old_loose.erase(best);
            }
            add_group(std::move(g));
        }
    }

    void do_insert(const Item& item) {
        if (item.size <= Rational(0) || item.size > Rational(1))
            throw std::invalid_argument("unit_step: size out of (0,1]");
        ledger_.record_insert(item);
        if (item.size < eps_) {
            curve_.insert(item);
            for (ItemId moved : curve_.last_moves()) {
                ledger_.record_move(Item(moved, Rational(1)));
                ++last_step_moves_;
            }
            return;
        }
        if (large_.count(item.id)) throw std::invalid_argument("unit_step: duplicate id");
        large_[item.id] = item;
        LargeGroup g;
        g.kind = LargeGroup::Kind::Lazy;
        g.members = {item.id};
        add_group(std::move(g));
    }

    void do_erase(ItemId id) {
        if (curve_.contains(id)) {
            curve_.erase(id);
            for (ItemId moved : curve_.last_moves()) {
                ledger_.record_move(Item(moved, Rational(1)));
                ++last_step_moves_;
            }
            return;
        }
        auto it = large_.find(id);
        if (it == large_.end()) throw std::invalid_argument("unit_step: unknown id");
        BinId gid = item_group_.at(id);
        LargeGroup& g = groups_.at(gid);
        g.members.erase(std::find(g.members.begin(), g.members.end(), id));
        if (g.members.empty()) groups_.erase(gid);
        item_group_.erase(id);
        large_.erase(it);
    }
};

}  // namespace binpack
