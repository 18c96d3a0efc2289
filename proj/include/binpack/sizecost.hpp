// Size movement costs: first-fit arrivals into fresh bins, deletions only
// pretended, and a full offline repack whenever the churn volume exceeds an
// eps fraction of the epoch-start volume.

#pragma once

#include <algorithm>
#include <set>
#include <unordered_map>
#include <vector>

#include "binpack/core.hpp"
#include "binpack/oracle.hpp"

namespace binpack {

class SizeEpochAlgo {
public:
    explicit SizeEpochAlgo(Rational eps)
        : eps_(std::move(eps)), ledger_(CostModel{CostVariant::Size}) {
        if (eps_ <= Rational(0) || eps_ > Rational(1, 2))
            throw std::invalid_argument("SizeEpochAlgo: eps out of (0,1/2]");
    }

    const RecourseLedger& ledger() const { return ledger_; }
    const Rational& epoch_volume() const { return V_t_; }
    const Rational& churn() const { return churn_; }
    size_t live_items() const { return live_.size(); }
    Rational last_step_moved_volume() const {
        return ledger_.per_step.empty() ? Rational(0) : ledger_.per_step.back();
    }

    void step(const Event& ev) {
        ledger_.start_step();
        if (ev.is_insert()) {
            const Item& item = ev.item;
            if (item.size <= Rational(0) || item.size > Rational(1))
                throw std::invalid_argument("size_step: size out of (0,1]");
            if (live_.count(item.id) || pretend_deleted_.count(item.id))
                throw std::invalid_argument("size_step: duplicate id");
            ledger_.record_insert(item);
            live_[item.id] = item;
            first_fit_arrival(item);
            churn_ += item.size;
        } else {
            auto it = live_.find(ev.item.id);
            if (it == live_.end()) throw std::invalid_argument("size_step: unknown id");
            pretend_deleted_.insert(ev.item.id);
            churn_ += it->second.size;
            ghosts_[it->first] = it->second;  // stays packed until the epoch ends
            live_.erase(it);
        }
        // degenerate start: with V_t below one bin of volume, every op repacks
        if (churn_ > eps_ * V_t_ || V_t_ < Rational(1)) epoch_end();
    }

    size_t bins_used() const {
        size_t n = 0;
        for (const auto& b : bins_)
            if (!b.contents.empty()) ++n;
        return n;
    }

    // drops pretended deletions, repacks offline, charges every moved item
    Rational epoch_end() {
        std::vector<Item> items;
        for (const auto& kv : live_) items.push_back(kv.second);
        std::sort(items.begin(), items.end(),
                  [](const Item& a, const Item& b) { return a.id < b.id; });
        PackingState packed = aptas_pack(items, min(eps_, Rational(1, 6)));

        // match new bins to old ids by shared volume so unmoved items are free
        struct NewBin {
            std::vector<ItemId> members;
            BinId assigned = 0;
        };
        std::vector<NewBin> fresh;
        for (const auto& b : packed.bins) {
            if (b.contents.empty()) continue;
            NewBin nb;
            nb.members = b.contents;
            fresh.push_back(std::move(nb));
        }
        struct Overlap {
            Rational volume;
            size_t fresh_idx;
            BinId old_bin;
        };
        std::vector<Overlap> overlaps;
        for (size_t f = 0; f < fresh.size(); ++f) {
            std::unordered_map<BinId, Rational> shared;
            for (ItemId id : fresh[f].members) {
                auto w = where_.find(id);
                if (w == where_.end()) continue;
                shared[w->second] += live_.at(id).size;
            }
            for (const auto& kv : shared) overlaps.push_back({kv.second, f, kv.first});
        }
        std::sort(overlaps.begin(), overlaps.end(), [](const Overlap& a, const Overlap& b) {
            int c = cmp(a.volume, b.volume);
            if (c != 0) return c > 0;
            if (a.old_bin != b.old_bin) return a.old_bin < b.old_bin;
            return a.fresh_idx < b.fresh_idx;
        });
        std::set<BinId> taken_old;
        std::set<size_t> taken_new;
        for (const auto& ov : overlaps) {
            if (taken_old.count(ov.old_bin) || taken_new.count(ov.fresh_idx)) continue;
            fresh[ov.fresh_idx].assigned = ov.old_bin;
            taken_old.insert(ov.old_bin);
            taken_new.insert(ov.fresh_idx);
        }
        Rational moved;
        bins_.clear();
        std::unordered_map<ItemId, BinId> new_where;
        for (auto& nb : fresh) {
            if (nb.assigned == 0) nb.assigned = next_bin_id_++;
            Bin bin;
            bin.id = nb.assigned;
            for (ItemId id : nb.members) {
                const Item& item = live_.at(id);
                bin.contents.push_back(id);
                bin.used += item.size;
                new_where[id] = bin.id;
                auto old = where_.find(id);
                if (old == where_.end() || old->second != bin.id) {
                    ledger_.record_move(item);
                    moved += item.size;
                }
            }
            bins_.push_back(std::move(bin));
        }
        where_ = std::move(new_where);
        pretend_deleted_.clear();
        ghosts_.clear();
        arrival_bins_.clear();
        V_t_ = Rational(0);
        for (const auto& kv : live_) V_t_ += kv.second.size;
        churn_ = Rational(0);
        return moved;
    }

    std::vector<std::string> audit() const {
        std::vector<std::string> bad;
        for (const auto& b : bins_) {
            Rational sum;
            for (ItemId id : b.contents) {
                auto l = live_.find(id);
                if (l != live_.end()) {
                    sum += l->second.size;
                    continue;
                }
                auto g = ghosts_.find(id);
                if (g == ghosts_.end()) {
                    bad.push_back("bin references unknown item");
                    continue;
                }
                sum += g->second.size;
            }
            if (sum > Rational(1)) bad.push_back("bin physically overfull");
        }
        return bad;
    }

    // the physical packing: pretend-deleted items still occupy their bins
    // until the epoch ends, and the bin count reflects that
    PackingState snapshot() const {
        PackingState st;
        for (const auto& b : bins_) {
            if (b.contents.empty()) continue;
            BinId sb = st.open_bin();
            for (ItemId id : b.contents) {
                auto l = live_.find(id);
                st.place(l != live_.end() ? l->second : ghosts_.at(id), sb);
            }
        }
        return st;
    }

    std::vector<Item> live_snapshot() const {
        std::vector<Item> v;
        for (const auto& kv : live_) v.push_back(kv.second);
        return v;
    }

private:
    Rational eps_;
    Rational V_t_, churn_;
    RecourseLedger ledger_;
    std::vector<Bin> bins_;                     // base and arrival bins together
    std::vector<BinId> arrival_bins_;           // ids of this epoch's arrival pool
    std::unordered_map<ItemId, Item> live_;
    std::unordered_map<ItemId, Item> ghosts_;   // pretend-deleted, still packed
    std::set<ItemId> pretend_deleted_;
    std::unordered_map<ItemId, BinId> where_;
    BinId next_bin_id_ = 1;

    void first_fit_arrival(const Item& item) {
        for (BinId id : arrival_bins_) {
            for (auto& b : bins_) {
                if (b.id != id) continue;
                if (b.used + item.size <= Rational(1)) {
                    b.contents.push_back(item.id);
                    b.used += item.size;
                    where_[item.id] = b.id;
                    return;
                }
            }
        }
        Bin b;
        b.id = next_bin_id_++;
        b.contents.push_back(item.id);
        b.used = item.size;
        where_[item.id] = b.id;
        arrival_bins_.push_back(b.id);
        bins_.push_back(std::move(b));
    }
};

}  // namespace binpack
