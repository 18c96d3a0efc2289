// The full Super-Harmonic simulation: typed large-item chains with the
// approximate red-fraction rule, group-node stable matching, near-uniform
// chains for the smallish band, and the ghost structure for small items.

#pragma once

#include <map>
#include <set>

#include "binpack/generalcost.hpp"
#include "binpack/ghost.hpp"

namespace binpack {

class SHLargeState {
public:
    // the matching holds lambdas over `this`, so the state must stay put
    SHLargeState(const SHLargeState&) = delete;
    SHLargeState& operator=(const SHLargeState&) = delete;

    SHLargeState(const SHParams& params, CostModel model)
        : params_(params),
          model_(model),
          match_(
              &params_,
              [this](BinId guest, BinId host) { co_locate(guest, host); },
              [this](BinId guest, BinId host) { split(guest, host); }) {
        for (int i = 0; i < params_.K; ++i) chains_.emplace_back(next_bin_id_);
    }

    const SHParams& params() const { return params_; }
    const MatchState& match() const { return match_; }
    Rational step_moved_cost() const { return step_moved_; }

    size_t bins_used() const {
        size_t nodes = 0;
        for (const auto& ch : chains_) nodes += ch.bin_count();
        return nodes - match_.matched_pairs();
    }

    size_t open_groups() const {
        size_t n = 0;
        for (const auto& ch : chains_) n += ch.open_bins();
        return n;
    }

    bool contains(ItemId id) const { return where_.count(id) > 0; }
    size_t live_items() const { return where_.size(); }

    void insert(Item item) {
        step_moved_ = Rational(0);
        if (!item.cost) item.cost = model_.cost_of(item);
        int type = params_.type_of(item.size);
        CostChain& ch = chains_[static_cast<size_t>(type) - 1];
        long long n_before = ch.total_items();
        long long m_before = ch.red_items();
        auto rep = ch.insert(item, [&, type, n_before, m_before]() {
            return open_policy(type, n_before, m_before);
        });
        where_[item.id] = type;
        items_[item.id] = item;
        for (const auto& e : rep.moved) step_moved_ += e.cost;
        sync_nodes(type, rep);
    }

    void erase(ItemId id) {
        step_moved_ = Rational(0);
        auto w = where_.find(id);
        if (w == where_.end()) throw std::invalid_argument("sh_delete: unknown id");
        int type = w->second;
        auto rep = chains_[static_cast<size_t>(type) - 1].erase(id);
        for (const auto& e : rep.moved) step_moved_ += e.cost;
        where_.erase(w);
        items_.erase(id);
        sync_nodes(type, rep);
    }

    std::vector<std::string> audit() const {
        std::vector<std::string> bad;
        for (int t = 1; t <= params_.K; ++t) {
            const CostChain& ch = chains_[static_cast<size_t>(t) - 1];
            auto b = ch.audit();
            bad.insert(bad.end(), b.begin(), b.end());
            // prefix red-count invariant
            long long n = 0, red = 0;
            const Rational& a = params_.alpha[static_cast<size_t>(t) - 1];
            const Rational& d = params_.delta[static_cast<size_t>(t) - 1];
            for (const auto& bin : ch.bins()) {
                n += static_cast<long long>(bin.items.size());
                if (bin.red) red += static_cast<long long>(bin.items.size());
                Rational low((a * Rational(n)).floor(), BigInt(1));
                if (Rational(red) < low || Rational(red) > low + d) {
                    bad.push_back("prefix red count out of range for type " + std::to_string(t));
                    break;
                }
            }
        }
        if (!match_.blocking_pairs().empty()) bad.push_back("matching has a blocking pair");
        // every node references a real bin; matched pairs fit together
        std::set<BinId> all_bins;
        for (const auto& ch : chains_)
            for (const auto& b : ch.bins()) all_bins.insert(b.id);
        for (const auto& kv : match_.nodes())
            if (!all_bins.count(kv.first))
                bad.push_back("matching node references a dead bin");
        return bad;
    }

    PackingState snapshot() const {
        PackingState st;
        std::map<BinId, BinId> phys;
        for (const auto& ch : chains_)
            for (const auto& bin : ch.bins()) {
                if (bin.items.empty()) continue;
                BinId target;
                auto p = match_.partner(bin.id);
                if (p && phys.count(*p)) {
                    target = phys.at(*p);
                } else {
                    target = st.open_bin();
                }
                phys[bin.id] = target;
                for (const auto& e : bin.items) st.place(items_.at(e.id), target);
            }
        return st;
    }

private:
    SHParams params_;
    CostModel model_;
    BinId next_bin_id_ = 1;
    std::vector<CostChain> chains_;
    MatchState match_;
    std::unordered_map<ItemId, int> where_;
    std::unordered_map<ItemId, Item> items_;
    Rational step_moved_;

    std::pair<int, bool> open_policy(int type, long long n_before, long long m_before) {
        const Rational& a = params_.alpha[static_cast<size_t>(type) - 1];
        long long beta = params_.beta[static_cast<size_t>(type) - 1];
        long long gamma = params_.gamma[static_cast<size_t>(type) - 1];
        if (a.is_zero()) return {static_cast<int>(beta), false};
        Rational lhs(m_before + gamma);
        Rational rhs = Rational((a * Rational(n_before + gamma)).floor(), BigInt(1)) +
                       params_.delta[static_cast<size_t>(type) - 1];
        if (lhs <= rhs) return {static_cast<int>(gamma), true};
        return {static_cast<int>(beta), false};
    }

    void co_locate(BinId guest, BinId host) {
        // the guest group's items physically join the host's bin
        (void)host;
        charge_group(guest);
    }
    void split(BinId guest, BinId host) {
        (void)host;
        charge_group(guest);
    }
    void charge_group(BinId bin) {
        for (const auto& ch : chains_)
            for (const auto& b : ch.bins())
                if (b.id == bin) {
                    for (const auto& e : b.items) step_moved_ += e.cost;
                    return;
                }
    }

    void sync_nodes(int type, const CostChain::OpReport& rep) {
        const CostChain& ch = chains_[static_cast<size_t>(type) - 1];
        for (BinId dead : rep.removed) match_.remove_node(dead);
        std::set<BinId> fresh(rep.created.begin(), rep.created.end());
        std::set<BinId> seen;
        for (BinId b : rep.touched) {
            if (fresh.count(b) || seen.count(b)) continue;
            seen.insert(b);
            // re-key if the costliest member class changed
            auto node = match_.nodes().find(b);
            if (node == match_.nodes().end()) continue;
            int key = bin_key(ch, b);
            if (key != node->second.key) {
                match_.remove_node(b);
                MatchState::Node n;
                n.bin = b;
                n.type = type;
                n.red = bin_red(ch, b);
                n.key = key;
                match_.insert_node(n);
            }
        }
        for (BinId b : fresh) {
            if (!bin_alive(ch, b)) continue;
            MatchState::Node n;
            n.bin = b;
            n.type = type;
            n.red = bin_red(ch, b);
            n.key = bin_key(ch, b);
            match_.insert_node(n);
        }
    }

    static bool bin_alive(const CostChain& ch, BinId id) {
        for (const auto& b : ch.bins())
            if (b.id == id) return true;
        return false;
    }
    static bool bin_red(const CostChain& ch, BinId id) {
        for (const auto& b : ch.bins())
            if (b.id == id) return b.red;
        return false;
    }
    static int bin_key(const CostChain& ch, BinId id) {
        for (size_t i = 0; i < ch.bins().size(); ++i)
            if (ch.bins()[i].id == id) return ch.max_class(i);
        return -2000000000;
    }
};

// Routes events by size band: ghosts below eps/2, near-uniform chains in
// [eps/2, eps], typed SH bins above eps.
class GeneralCostAlgo {
public:
    explicit GeneralCostAlgo(SHParams params, CostModel model = CostModel{CostVariant::General})
        : params_(std::move(params)),
          model_(model),
          ledger_(model),
          ghost_(params_.eps / Rational(2), model),
          large_(params_, model) {}

    const RecourseLedger& ledger() const { return ledger_; }
    const SHParams& params() const { return params_; }
    const GhostBinState& ghost() const { return ghost_; }
    const SHLargeState& large() const { return large_; }
    size_t live_items() const {
        size_t n = ghost_.live_items() + large_.live_items();
        for (const auto& kv : smallish_) n += kv.second.live_items();
        return n;
    }

    void step(const Event& ev) {
        ledger_.start_step();
        if (ev.is_insert())
            do_insert(ev.item);
        else
            do_erase(ev.item.id);
    }

    size_t bins_used() const {
        size_t n = ghost_.bins_used() + large_.bins_used();
        for (const auto& kv : smallish_) n += kv.second.bin_count();
        return n;
    }

    size_t open_groups() const {
        size_t n = large_.open_groups();
        for (const auto& kv : smallish_) n += kv.second.open_bins();
        return n;
    }

    std::vector<std::string> audit() const {
        std::vector<std::string> bad = large_.audit();
        auto g = ghost_.audit();
        bad.insert(bad.end(), g.violations.begin(), g.violations.end());
        for (const auto& kv : smallish_) {
            auto b = kv.second.audit();
            bad.insert(bad.end(), b.begin(), b.end());
        }
        size_t cap = 2 * static_cast<size_t>(params_.K) + 4;
        if (large_.open_groups() > cap) bad.push_back("too many open groups");
        return bad;
    }

    PackingState snapshot() const {
        PackingState st = large_.snapshot();
        auto merge = [&](PackingState other) {
            for (const auto& bin : other.bins) {
                if (bin.contents.empty()) continue;
                BinId b = st.open_bin();
                for (ItemId id : bin.contents) st.place(other.items.at(id), b);
            }
        };
        merge(ghost_.snapshot());
        for (const auto& kv : smallish_) merge(kv.second.snapshot_items(items_));
        return st;
    }

private:
    SHParams params_;
    CostModel model_;
    RecourseLedger ledger_;
    GhostBinState ghost_;
    SHLargeState large_;
    std::map<long long, CostChain> smallish_;  // k -> sizes in [1/k, 1/(k-1))
    std::unordered_map<ItemId, Item> items_;
    std::unordered_map<ItemId, long long> smallish_of_;
    BinId smallish_bin_ids_ = 2000000000ULL;

    void do_insert(Item item) {
        if (item.size <= Rational(0) || item.size > Rational(1))
            throw std::invalid_argument("sh_full_step: size out of (0,1]");
        if (!item.cost) item.cost = model_.cost_of(item);
        ledger_.record_insert(item);
        Rational half = params_.eps / Rational(2);
        if (item.size <= half) {
            ghost_.insert(item);
            charge(ghost_.last_step_moved_cost());
            return;
        }
        if (item.size <= params_.eps) {
            long long k = (Rational(1) / item.size).ceil_i64();
            items_[item.id] = item;
            smallish_of_[item.id] = k;
            auto it = smallish_.find(k);
            if (it == smallish_.end()) it = smallish_.emplace(k, CostChain(smallish_bin_ids_)).first;
            auto rep = it->second.insert(
                item, [k]() { return std::make_pair(static_cast<int>(k - 1), false); });
            for (const auto& e : rep.moved) ledger_.record_move(items_.at(e.id));
            return;
        }
        large_.insert(item);
        charge(large_.step_moved_cost());
    }

    void do_erase(ItemId id) {
        if (ghost_.contains(id)) {
            ghost_.erase(id);
            charge(ghost_.last_step_moved_cost());
            return;
        }
        auto s = smallish_of_.find(id);
        if (s != smallish_of_.end()) {
            auto rep = smallish_.at(s->second).erase(id);
            for (const auto& e : rep.moved) ledger_.record_move(items_.at(e.id));
            smallish_of_.erase(s);
            items_.erase(id);
            return;
        }
        if (large_.contains(id)) {
            large_.erase(id);
            charge(large_.step_moved_cost());
            return;
        }
        throw std::invalid_argument("sh_full_step: unknown id");
    }

    void charge(const Rational& cost) {
        if (cost.is_zero()) return;
        if (ledger_.per_step.empty()) ledger_.per_step.emplace_back();
        ledger_.per_step.back() += cost;
        ledger_.total_moved += cost;
    }
};

}  // namespace binpack
