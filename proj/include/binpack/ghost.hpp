// Small items under general movement costs: bins keep items in decreasing
// density (cost/size) order, deletions leave ghost items in place until a
// bin has accumulated enough ghost volume to pay for consolidation. The
// potential function charges every insert at most c/eps^2 amortized.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "binpack/core.hpp"

namespace binpack {

class GhostBinState {
public:
    struct Slot {
        Item item;
        Rational density;  // cost/size, the Smith ratio
        bool ghost = false;
    };
    struct GBin {
        BinId id = 0;
        std::vector<Slot> slots;  // decreasing density
        Rational size_all;        // s(B_i)
        Rational size_live;       // s(A_i)
    };

    explicit GhostBinState(Rational eps, CostModel model = CostModel{CostVariant::General})
        : eps_(std::move(eps)), model_(model) {
        if (eps_ <= Rational(0) || eps_ > Rational(1, 6))
            throw std::invalid_argument("GhostBinState: eps out of (0,1/6]");
        min_bins_ = (Rational(1) / eps_).ceil_i64();
        max_bins_ = (Rational(3) / eps_).floor_i64();
    }

    const Rational& eps() const { return eps_; }
    size_t live_items() const { return live_count_; }
    bool contains(ItemId id) const {
        auto it = where_.find(id);
        if (it == where_.end()) return false;
        const Slot* s = slot_of(it->second, id);
        return s && !s->ghost;
    }
    const std::vector<GBin>& bins() const { return bins_; }
    const std::vector<size_t>& bucket_lens() const { return bucket_len_; }
    Rational last_step_moved_cost() const { return step_moved_; }
    Rational cumulative_moved_cost() const { return moved_total_; }

    void insert(const Item& item) {
        if (item.size <= Rational(0) || item.size > eps_)
            throw std::invalid_argument("ghost_insert: size out of (0,eps]");
        if (where_.count(item.id)) throw std::invalid_argument("ghost_insert: duplicate id");
        step_moved_ = Rational(0);
        Slot s;
        s.item = item;
        s.density = model_.cost_of(item) / item.size;
        if (bins_.empty()) {
            bucket_len_.push_back(1);
            new_bin(0);
        }
        size_t i = locate_bin(s);
        bin_insert(i, s);
        ++live_count_;
        if (bins_[i].size_all > Rational(1)) erase_ghosts(i, item.size);
        if (bins_[i].size_all > Rational(1))
            overflow(i, bins_[i].size_all - Rational(1) + Rational(2) * eps_);
    }

    void erase(ItemId id) {
        auto w = where_.find(id);
        if (w == where_.end()) throw std::invalid_argument("ghost_delete: unknown id");
        step_moved_ = Rational(0);
        size_t i = pos_of(w->second);
        Slot* s = slot_of(w->second, id);
        if (s->ghost) throw std::invalid_argument("ghost_delete: item already deleted");
        if (is_last_in_bucket(i)) {
            // plain erase; the last bin of a bucket holds no ghosts
            bins_[i].size_all -= s->item.size;
            bins_[i].size_live -= s->item.size;
            drop_slot(i, id);
            --live_count_;
            cleanup_bucket(bucket_of(i));
            return;
        }
        s->ghost = true;
        bins_[i].size_live -= s->item.size;
        --live_count_;
        if (bins_[i].size_live < Rational(1) - Rational(4) * eps_) {
            erase_all_ghosts(i);
            borrow(i, Rational(1) - Rational(3) * eps_ - bins_[i].size_live);
        }
    }

    struct AuditReport {
        std::vector<std::string> violations;
        size_t bins = 0, buckets = 0;
        Rational phi;  // recomputed from scratch
    };

    AuditReport audit() const {
        AuditReport rep;
        rep.bins = bins_.size();
        rep.buckets = bucket_len_.size();
        rep.phi = potential_value();
        auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };
        size_t total = 0;
        for (size_t b = 0; b < bucket_len_.size(); ++b) {
            total += bucket_len_[b];
            if (bucket_len_[b] > static_cast<size_t>(max_bins_))
                bad("bucket too large");
            if (b + 1 < bucket_len_.size() && bucket_len_[b] < static_cast<size_t>(min_bins_))
                bad("interior bucket too small");
        }
        if (total != bins_.size()) bad("bucket lengths inconsistent");
        const Slot* prev = nullptr;
        for (size_t i = 0; i < bins_.size(); ++i) {
            const GBin& bin = bins_[i];
            Rational all, live;
            for (const auto& s : bin.slots) {
                all += s.item.size;
                if (!s.ghost) live += s.item.size;
                if (prev && s.density > prev->density) bad("density order broken");
                prev = &s;
            }
            if (all != bin.size_all || live != bin.size_live) bad("cached sizes stale");
            if (bin.size_all > Rational(1)) bad("bin overfull");
            bool last = is_last_in_bucket(i);
            if (last) {
                if (live != all) bad("last bin holds ghosts");
            } else {
                if (bin.size_all < Rational(1) - Rational(3) * eps_)
                    bad("P0 violated at bin " + std::to_string(i));
                if (bin.size_live < Rational(1) - Rational(4) * eps_)
                    bad("P1 violated at bin " + std::to_string(i));
            }
        }
        return rep;
    }

    // Phi = (4/eps^2) sum_i [ c(G_i) + c(fractional sparsest above 1-eps) ]
    Rational potential_value() const {
        Rational phi;
        for (const auto& bin : bins_) phi += bin_potential(bin);
        return phi * Rational(4) / (eps_ * eps_);
    }

    size_t bins_used() const {
        size_t n = 0;
        for (const auto& b : bins_)
            if (b.size_live > Rational(0)) ++n;
        return n;
    }

    PackingState snapshot() const {
        PackingState st;
        for (const auto& bin : bins_) {
            bool any = false;
            for (const auto& s : bin.slots)
                if (!s.ghost) any = true;
            if (!any) continue;
            BinId b = st.open_bin();
            for (const auto& s : bin.slots)
                if (!s.ghost) st.place(s.item, b);
        }
        return st;
    }

private:
    Rational eps_;
    CostModel model_;
    long long min_bins_ = 0, max_bins_ = 0;
    std::vector<GBin> bins_;
    std::vector<size_t> bucket_len_;  // bins per bucket
    std::unordered_map<ItemId, BinId> where_;
    std::unordered_map<BinId, size_t> pos_;
    BinId next_id_ = 1;
    size_t live_count_ = 0;
    Rational step_moved_, moved_total_;

    Rational bin_potential(const GBin& bin) const {
        Rational p;
        for (const auto& s : bin.slots)
            if (s.ghost) p += model_.cost_of(s.item);
        Rational over = bin.size_all - (Rational(1) - eps_);
        if (over.sign() > 0) {
            Rational need = over;
            for (size_t k = bin.slots.size(); k-- > 0 && need.sign() > 0;) {
                const Slot& s = bin.slots[k];
                if (s.item.size <= need) {
                    p += model_.cost_of(s.item);
                    need -= s.item.size;
                } else {
                    p += model_.cost_of(s.item) * need / s.item.size;
                    need = Rational(0);
                }
            }
        }
        return p;
    }

    size_t pos_of(BinId id) const { return pos_.at(id); }
    Slot* slot_of(BinId bin_id, ItemId id) {
        GBin& b = bins_[pos_.at(bin_id)];
        for (auto& s : b.slots)
            if (s.item.id == id) return &s;
        return nullptr;
    }
    const Slot* slot_of(BinId bin_id, ItemId id) const {
        const GBin& b = bins_[pos_.at(bin_id)];
        for (const auto& s : b.slots)
            if (s.item.id == id) return &s;
        return nullptr;
    }

    size_t bucket_of(size_t pos) const {
        size_t acc = 0;
        for (size_t b = 0; b < bucket_len_.size(); ++b) {
            acc += bucket_len_[b];
            if (pos < acc) return b;
        }
        throw std::logic_error("GhostBinState: position outside buckets");
    }
    size_t bucket_first(size_t bucket) const {
        size_t acc = 0;
        for (size_t b = 0; b < bucket; ++b) acc += bucket_len_[b];
        return acc;
    }
    bool is_last_in_bucket(size_t pos) const {
        size_t b = bucket_of(pos);
        return pos == bucket_first(b) + bucket_len_[b] - 1;
    }

    void reindex() {
        pos_.clear();
        for (size_t i = 0; i < bins_.size(); ++i) pos_[bins_[i].id] = i;
    }

    void new_bin(size_t at) {
        GBin b;
        b.id = next_id_++;
        bins_.insert(bins_.begin() + static_cast<long>(at), std::move(b));
        reindex();
    }

    static bool denser(const Slot& a, const Slot& b) {
        int c = cmp(a.density, b.density);
        if (c != 0) return c > 0;
        return a.item.id < b.item.id;
    }

    // predecessor rule over the global decreasing-density order
    size_t locate_bin(const Slot& s) const {
        size_t best = 0;
        bool found = false;
        size_t lo = 0, hi = bins_.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            size_t probe = mid;
            bool has = false;
            while (true) {
                if (!bins_[probe].slots.empty()) {
                    has = true;
                    break;
                }
                if (probe == 0) break;
                --probe;
            }
            if (!has) {
                lo = mid + 1;
                continue;
            }
            if (!denser(s, bins_[probe].slots.front())) {
                best = probe;
                found = true;
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return found ? best : 0;
    }

    void bin_insert(size_t i, const Slot& s) {
        GBin& b = bins_[i];
        auto at = std::lower_bound(b.slots.begin(), b.slots.end(), s, denser);
        b.slots.insert(at, s);
        b.size_all += s.item.size;
        b.size_live += s.item.size;
        where_[s.item.id] = b.id;
    }

    void drop_slot(size_t i, ItemId id) {
        GBin& b = bins_[i];
        auto at = std::find_if(b.slots.begin(), b.slots.end(),
                               [&](const Slot& s) { return s.item.id == id; });
        b.slots.erase(at);
        where_.erase(id);
    }

    // erase ghosts (sparsest first) until none remain or erased size >= s
    void erase_ghosts(size_t i, const Rational& s) {
        Rational erased;
        GBin& b = bins_[i];
        for (size_t k = b.slots.size(); k-- > 0;) {
            if (erased >= s) break;
            if (!b.slots[k].ghost) continue;
            erased += b.slots[k].item.size;
            b.size_all -= b.slots[k].item.size;
            where_.erase(b.slots[k].item.id);
            b.slots.erase(b.slots.begin() + static_cast<long>(k));
        }
    }

    void erase_all_ghosts(size_t i) {
        GBin& b = bins_[i];
        for (size_t k = b.slots.size(); k-- > 0;) {
            if (!b.slots[k].ghost) continue;
            b.size_all -= b.slots[k].item.size;
            where_.erase(b.slots[k].item.id);
            b.slots.erase(b.slots.begin() + static_cast<long>(k));
        }
    }

    void charge_move(const Item& item) {
        Rational c = model_.cost_of(item);
        step_moved_ += c;
        moved_total_ += c;
    }

    // move the sparsest slots with total size >= v out of bin i
    void overflow(size_t i, Rational v) {
        GBin& from = bins_[i];
        std::vector<Slot> moved;
        Rational vol;
        while (vol < v && !from.slots.empty()) {
            moved.push_back(from.slots.back());
            from.slots.pop_back();
            vol += moved.back().item.size;
        }
        for (const auto& s : moved) {
            from.size_all -= s.item.size;
            if (!s.ghost) from.size_live -= s.item.size;
            if (s.ghost) throw std::logic_error("ghost overflow moved a ghost");
        }
        size_t bucket = bucket_of(i);
        bool last = is_last_in_bucket(i);
        // `moved` was collected sparsest-first, so prepending in that order
        // rebuilds the decreasing-density prefix of the next bin
        if (last || v >= Rational(1) - Rational(3) * eps_) {
            new_bin(i + 1);
            ++bucket_len_[bucket];
            for (const auto& s : moved) {
                bins_[i + 1].slots.insert(bins_[i + 1].slots.begin(), s);
                bins_[i + 1].size_all += s.item.size;
                bins_[i + 1].size_live += s.item.size;
                where_[s.item.id] = bins_[i + 1].id;
                charge_move(s.item);
            }
            if (bucket_len_[bucket] > static_cast<size_t>(max_bins_)) split_bucket(bucket);
            return;
        }
        GBin& to = bins_[i + 1];
        for (const auto& s : moved) {
            to.slots.insert(to.slots.begin(), s);
            to.size_all += s.item.size;
            to.size_live += s.item.size;
            where_[s.item.id] = to.id;
            charge_move(s.item);
        }
        if (bins_[i + 1].size_all > Rational(1) - eps_)
            erase_ghosts(i + 1, bins_[i + 1].size_all - Rational(1) + Rational(2) * eps_);
        if (bins_[i + 1].size_all > Rational(1) - eps_)
            overflow(i + 1, bins_[i + 1].size_all - Rational(1) + Rational(2) * eps_);
    }

    // pull the densest live slots with total live size >= v from bin i+1
    void borrow(size_t i, Rational v) {
        if (i + 1 >= bins_.size() || bucket_of(i + 1) != bucket_of(i)) return;
        GBin& from = bins_[i + 1];
        Rational live_avail = from.size_live;
        Rational want = min(v, live_avail);
        std::vector<Slot> taken;
        Rational live_taken;
        size_t k = 0;
        while (k < from.slots.size() && live_taken < want) {
            taken.push_back(from.slots[k]);
            if (!from.slots[k].ghost) live_taken += from.slots[k].item.size;
            ++k;
        }
        from.slots.erase(from.slots.begin(), from.slots.begin() + static_cast<long>(k));
        for (const auto& s : taken) {
            from.size_all -= s.item.size;
            if (s.ghost) {
                where_.erase(s.item.id);  // erased with the transfer
            } else {
                from.size_live -= s.item.size;
                GBin& to = bins_[i];
                to.slots.push_back(s);
                to.size_all += s.item.size;
                to.size_live += s.item.size;
                where_[s.item.id] = to.id;
                charge_move(s.item);
            }
        }
        // a donor drained of live items is spent: purge its ghosts so the
        // empty-bin path below removes it and re-borrows for bin i
        if (!from.slots.empty() && from.size_live.is_zero()) erase_all_ghosts(i + 1);
        if (from.slots.empty()) {
            size_t bucket = bucket_of(i + 1);
            pos_.erase(from.id);
            bins_.erase(bins_.begin() + static_cast<long>(i) + 1);
            --bucket_len_[bucket];
            reindex();
            if (bucket + 1 < bucket_len_.size() &&
                bucket_len_[bucket] < static_cast<size_t>(min_bins_))
                grow_bucket(bucket);
            if (bins_[i].size_live < Rational(1) - Rational(3) * eps_)
                borrow(i, Rational(1) - bins_[i].size_live - Rational(3) * eps_);
            return;
        }
        if (from.size_live < Rational(1) - Rational(3) * eps_ && !is_last_in_bucket(i + 1)) {
            erase_all_ghosts(i + 1);
            borrow(i + 1, Rational(1) - Rational(3) * eps_ - from.size_live);
        }
    }

    void split_bucket(size_t bucket) {
        size_t len = bucket_len_[bucket];
        size_t left = (len + 1) / 2;
        bucket_len_[bucket] = left;
        bucket_len_.insert(bucket_len_.begin() + static_cast<long>(bucket) + 1, len - left);
        // the left bucket's new last bin must shed its ghosts
        size_t last = bucket_first(bucket) + left - 1;
        erase_all_ghosts(last);
    }

    void grow_bucket(size_t bucket) {
        // merge with the next bucket; the old last bin now sits mid-bucket and
        // needs the invariant restored
        size_t old_last = bucket_first(bucket) + bucket_len_[bucket] - 1;
        bucket_len_[bucket] += bucket_len_[bucket + 1];
        bucket_len_.erase(bucket_len_.begin() + static_cast<long>(bucket) + 1);
        if (bucket_len_[bucket] > static_cast<size_t>(max_bins_)) split_bucket(bucket);
        erase_all_ghosts(old_last);
        if (bins_[old_last].size_live < Rational(1) - Rational(3) * eps_)
            borrow(old_last, Rational(1) - Rational(3) * eps_ - bins_[old_last].size_live);
    }

    void cleanup_bucket(size_t bucket) {
        // drop a trailing empty bin; merge an underfull interior bucket
        size_t last = bucket_first(bucket) + bucket_len_[bucket] - 1;
        if (bins_[last].slots.empty()) {
            pos_.erase(bins_[last].id);
            bins_.erase(bins_.begin() + static_cast<long>(last));
            --bucket_len_[bucket];
            reindex();
            if (bucket_len_[bucket] > 0)
                erase_all_ghosts(bucket_first(bucket) + bucket_len_[bucket] - 1);
        }
        if (bucket_len_[bucket] == 0) {
            bucket_len_.erase(bucket_len_.begin() + static_cast<long>(bucket));
            return;
        }
        if (bucket + 1 < bucket_len_.size() &&
            bucket_len_[bucket] < static_cast<size_t>(min_bins_))
            grow_bucket(bucket);
    }
};

struct PotentialAuditReport {
    bool ok = true;
    std::vector<std::string> findings;
    Rational cumulative_moved;
    Rational cumulative_charge;  // sum over ops of (4/eps^2) * c_op
    Rational final_phi;
    Rational min_phi;
};

// Replays an op log through a fresh structure and checks the amortized
// accounting: moved + dPhi <= (4/eps^2) c_op per op, Phi >= 0 throughout,
// and cumulative moved cost within the total charge.
inline PotentialAuditReport potential_audit(const std::vector<Event>& ops, const Rational& eps,
                                            CostModel model = CostModel{CostVariant::General}) {
    PotentialAuditReport rep;
    GhostBinState g(eps, model);
    Rational inv = Rational(4) / (eps * eps);
    Rational phi_prev;
    std::unordered_map<ItemId, Item> live;
    for (size_t i = 0; i < ops.size(); ++i) {
        const Event& ev = ops[i];
        Rational op_cost;
        if (ev.is_insert()) {
            op_cost = model.cost_of(ev.item);
            live[ev.item.id] = ev.item;
            g.insert(ev.item);
        } else {
            op_cost = model.cost_of(live.at(ev.item.id));
            live.erase(ev.item.id);
            g.erase(ev.item.id);
        }
        Rational phi = g.potential_value();
        if (phi.is_negative()) {
            rep.ok = false;
            rep.findings.push_back("Phi negative at op " + std::to_string(i));
        }
        Rational amortized = g.last_step_moved_cost() + phi - phi_prev;
        if (amortized > inv * op_cost) {
            rep.ok = false;
            rep.findings.push_back("per-op accounting exceeded at op " + std::to_string(i));
        }
        rep.cumulative_charge += inv * op_cost;
        if (rep.min_phi > phi || i == 0) rep.min_phi = phi;
        phi_prev = phi;
    }
    rep.final_phi = phi_prev;
    rep.cumulative_moved = g.cumulative_moved_cost();
    if (rep.cumulative_moved > rep.cumulative_charge) {
        rep.ok = false;
        rep.findings.push_back("cumulative moved cost exceeds the total charge");
    }
    auto audit = g.audit();
    if (!audit.violations.empty()) {
        rep.ok = false;
        rep.findings.push_back("structure audit: " + audit.violations.front());
    }
    return rep;
}

}  // namespace binpack
