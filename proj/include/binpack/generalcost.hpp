// General movement costs: the cost-class chain behind near-uniform packing,
// the simple 2-approximation, the Super-Harmonic typed bins with approximate
// red fractions, and stable-matching maintenance over group nodes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "binpack/core.hpp"

namespace binpack {

// floor(log2(cost)) for cost > 0, exact; items of zero cost share a floor class
inline int cost_class(const Rational& cost) {
    if (cost.sign() <= 0) return -1000000;
    long double est = std::log2((double)cost.to_long_double());
    int e = static_cast<int>(std::floor(est));
    auto pow2 = [](int k) {
        return k >= 0 ? Rational(BigInt::pow(BigInt(2), static_cast<unsigned>(k)), BigInt(1))
                      : Rational(BigInt(1), BigInt::pow(BigInt(2), static_cast<unsigned>(-k)));
    };
    while (pow2(e) > cost) --e;
    while (pow2(e + 1) <= cost) ++e;
    return e;
}

// Items sorted by rounded-down-power-of-two cost across bins; every bin but
// the global last holds exactly its capacity. Inserts land at their class
// boundary and displace one item per lower class; deletes pull one item per
// class back. Worst-case moved cost is a small multiple of the op's cost.
class CostChain {
public:
    struct Entry {
        ItemId id;
        int cls;
        Rational cost;
        Rational size;
    };
    struct ChainBin {
        BinId id = 0;
        int cap = 0;
        bool red = false;
        std::vector<Entry> items;
    };
    // capacity and color for a bin about to open
    using BinPolicy = std::function<std::pair<int, bool>()>;

    struct OpReport {
        std::vector<Entry> moved;
        std::vector<BinId> created, removed, touched;
    };

    explicit CostChain(BinId& id_source) : next_id_(&id_source) {}

    size_t bin_count() const { return bins_.size(); }
    const std::vector<ChainBin>& bins() const { return bins_; }
    size_t live_items() const { return where_.size(); }
    bool contains(ItemId id) const { return where_.count(id) > 0; }
    size_t open_bins() const {
        size_t n = 0;
        for (const auto& b : bins_)
            if (static_cast<int>(b.items.size()) < b.cap) ++n;
        return n;
    }
    long long red_items() const {
        long long n = 0;
        for (const auto& b : bins_)
            if (b.red) n += static_cast<long long>(b.items.size());
        return n;
    }
    long long total_items() const {
        long long n = 0;
        for (const auto& b : bins_) n += static_cast<long long>(b.items.size());
        return n;
    }

    OpReport insert(const Item& item, const BinPolicy& policy) {
        OpReport rep;
        Entry e{item.id, cost_class(item.cost.value_or(Rational(1))),
                item.cost.value_or(Rational(1)), item.size};
        if (where_.count(e.id)) throw std::invalid_argument("CostChain: duplicate id");
        if (bins_.empty()) {
            open_bin(policy, bins_.size(), rep);
            place(bins_.size() - 1, e);
            return rep;
        }
        size_t pos = boundary_for(e.cls);
        place(pos, e);
        rep.touched.push_back(bins_[pos].id);
        cascade(pos, policy, rep);
        return rep;
    }

    OpReport erase(ItemId id) {
        OpReport rep;
        auto w = where_.find(id);
        if (w == where_.end()) throw std::invalid_argument("CostChain: unknown id");
        size_t pos = pos_of(w->second);
        ChainBin& bin = bins_[pos];
        auto at = std::find_if(bin.items.begin(), bin.items.end(),
                               [&](const Entry& x) { return x.id == id; });
        bin.items.erase(at);
        where_.erase(w);
        rep.touched.push_back(bin.id);
        refill(pos, rep);
        return rep;
    }

    std::vector<std::string> audit() const {
        std::vector<std::string> bad;
        for (size_t i = 0; i < bins_.size(); ++i) {
            const auto& b = bins_[i];
            if (static_cast<int>(b.items.size()) > b.cap)
                bad.push_back("chain bin over capacity");
            if (i + 1 < bins_.size() && static_cast<int>(b.items.size()) != b.cap)
                bad.push_back("interior chain bin not full at index " + std::to_string(i));
            if (b.items.empty() && bins_.size() > 1 && i + 1 < bins_.size())
                bad.push_back("empty interior bin");
        }
        for (size_t i = 0; i + 1 < bins_.size(); ++i) {
            if (bins_[i].items.empty() || bins_[i + 1].items.empty()) continue;
            if (min_class(i) < max_class(i + 1))
                bad.push_back("class order broken between bins " + std::to_string(i) + "," +
                              std::to_string(i + 1));
        }
        return bad;
    }

    PackingState snapshot_items(const std::unordered_map<ItemId, Item>& registry) const {
        PackingState st;
        for (const auto& bin : bins_) {
            if (bin.items.empty()) continue;
            BinId b = st.open_bin();
            for (const auto& e : bin.items) st.place(registry.at(e.id), b);
        }
        return st;
    }

    int max_class(size_t pos) const {
        int m = -2000000000;
        for (const auto& e : bins_[pos].items) m = std::max(m, e.cls);
        return m;
    }
    int min_class(size_t pos) const {
        int m = 2000000000;
        for (const auto& e : bins_[pos].items) m = std::min(m, e.cls);
        return m;
    }

private:
    BinId* next_id_;
    std::vector<ChainBin> bins_;
    std::unordered_map<ItemId, BinId> where_;

    size_t pos_of(BinId id) const {
        for (size_t i = 0; i < bins_.size(); ++i)
            if (bins_[i].id == id) return i;
        throw std::logic_error("CostChain: stale bin id");
    }

    void place(size_t pos, const Entry& e) {
        bins_[pos].items.push_back(e);
        where_[e.id] = bins_[pos].id;
    }

    void open_bin(const BinPolicy& policy, size_t at, OpReport& rep) {
        auto [cap, red] = policy();
        ChainBin b;
        b.id = (*next_id_)++;
        b.cap = cap;
        b.red = red;
        bins_.insert(bins_.begin() + static_cast<long>(at), std::move(b));
        rep.created.push_back(bins_[at].id);
    }

    // first bin whose min class is below cls; the global last bin otherwise
    size_t boundary_for(int cls) const {
        for (size_t i = 0; i < bins_.size(); ++i)
            if (!bins_[i].items.empty() && min_class(i) < cls) return i;
        return bins_.size() - 1;
    }

    size_t last_bin_of_class(int cls) const {
        for (size_t i = bins_.size(); i-- > 0;)
            for (const auto& e : bins_[i].items)
                if (e.cls == cls) return i;
        return bins_.size();
    }

    void cascade(size_t pos, const BinPolicy& policy, OpReport& rep) {
        while (static_cast<int>(bins_[pos].items.size()) > bins_[pos].cap) {
            // eject the cheapest-class entry (deterministic: max id within class)
            size_t vi = 0;
            for (size_t k = 1; k < bins_[pos].items.size(); ++k) {
                const Entry& a = bins_[pos].items[k];
                const Entry& b = bins_[pos].items[vi];
                if (a.cls < b.cls || (a.cls == b.cls && a.id > b.id)) vi = k;
            }
            Entry victim = bins_[pos].items[vi];
            bins_[pos].items.erase(bins_[pos].items.begin() + static_cast<long>(vi));

            size_t dest = bins_.size();
            for (size_t i = pos + 1; i < bins_.size(); ++i)
                if (!bins_[i].items.empty() && min_class(i) < victim.cls) {
                    dest = i;
                    break;
                }
            if (dest == bins_.size()) {
                if (pos + 1 == bins_.size()) {
                    open_bin(policy, bins_.size(), rep);
                    dest = bins_.size() - 1;
                } else {
                    dest = bins_.size() - 1;
                    if (bins_[dest].items.empty() && dest != pos + 1) {
                        // trailing fresh bin; fine
                    }
                }
            }
            place(dest, victim);
            rep.moved.push_back(victim);
            rep.touched.push_back(bins_[dest].id);
            pos = dest;
        }
    }

    void refill(size_t pos, OpReport& rep) {
        while (true) {
            if (pos + 1 >= bins_.size()) {
                if (bins_[pos].items.empty()) {
                    rep.removed.push_back(bins_[pos].id);
                    bins_.erase(bins_.begin() + static_cast<long>(pos));
                }
                return;
            }
            if (static_cast<int>(bins_[pos].items.size()) >= bins_[pos].cap) return;
            // donor: the last bin of this bin's min class if its run continues,
            // otherwise the last bin of the highest class that follows
            size_t donor = bins_.size();
            int want;
            if (!bins_[pos].items.empty()) {
                want = min_class(pos);
                size_t l = last_bin_of_class(want);
                if (l > pos && l < bins_.size()) donor = l;
            }
            if (donor == bins_.size()) {
                // highest class strictly after pos
                int w = -2000000000;
                for (size_t i = pos + 1; i < bins_.size(); ++i)
                    if (!bins_[i].items.empty()) w = std::max(w, max_class(i));
                if (w == -2000000000) {
                    // nothing after: trailing bins are empty, trim them
                    while (bins_.size() > pos + 1) {
                        rep.removed.push_back(bins_.back().id);
                        bins_.pop_back();
                    }
                    if (bins_[pos].items.empty()) {
                        rep.removed.push_back(bins_[pos].id);
                        bins_.erase(bins_.begin() + static_cast<long>(pos));
                    }
                    return;
                }
                want = w;
                donor = last_bin_of_class(want);
            }
            // pull one item of class `want` from the donor (max id first)
            size_t vi = bins_[donor].items.size();
            for (size_t k = 0; k < bins_[donor].items.size(); ++k) {
                const Entry& e = bins_[donor].items[k];
                if (e.cls != want) continue;
                if (vi == bins_[donor].items.size() || e.id > bins_[donor].items[vi].id) vi = k;
            }
            Entry pulled = bins_[donor].items[vi];
            bins_[donor].items.erase(bins_[donor].items.begin() + static_cast<long>(vi));
            place(pos, pulled);
            rep.moved.push_back(pulled);
            rep.touched.push_back(bins_[pos].id);
            rep.touched.push_back(bins_[donor].id);
            pos = donor;
        }
    }
};

// ---- simple 2-approximation ----

// Sizes rounded up to powers of two; class 2^-j packs 2^j items per bin via
// the cost chain; items below 1/n go to dedicated first-fit tiny bins.
class SimpleTwoApprox {
public:
    explicit SimpleTwoApprox(CostModel model = CostModel{CostVariant::General})
        : model_(model), ledger_(model) {}

    const RecourseLedger& ledger() const { return ledger_; }
    size_t live_items() const { return live_.size(); }
    Rational last_step_moved_cost() const {
        return ledger_.per_step.empty() ? Rational(0) : ledger_.per_step.back();
    }
    const std::vector<ItemId>& last_moved_ids() const { return last_moved_; }

    void step(const Event& ev) {
        ledger_.start_step();
        last_moved_.clear();
        if (ev.is_insert())
            do_insert(ev.item);
        else
            do_erase(ev.item.id);
    }

    size_t bins_used() const {
        size_t n = 0;
        for (const auto& kv : chains_) n += kv.second.bin_count();
        for (const auto& b : tiny_bins_)
            if (!b.contents.empty()) ++n;
        return n;
    }

    std::vector<std::string> audit() const {
        std::vector<std::string> bad;
        for (const auto& kv : chains_) {
            auto b = kv.second.audit();
            bad.insert(bad.end(), b.begin(), b.end());
        }
        for (const auto& b : tiny_bins_)
            if (b.used > Rational(1)) bad.push_back("tiny bin overfull");
        return bad;
    }

    PackingState snapshot() const {
        PackingState st;
        for (const auto& kv : chains_)
            for (const auto& bin : kv.second.bins()) {
                if (bin.items.empty()) continue;
                BinId b = st.open_bin();
                for (const auto& e : bin.items) st.place(live_.at(e.id), b);
            }
        for (const auto& bin : tiny_bins_) {
            if (bin.contents.empty()) continue;
            BinId b = st.open_bin();
            for (ItemId id : bin.contents) st.place(live_.at(id), b);
        }
        return st;
    }

private:
    CostModel model_;
    RecourseLedger ledger_;
    BinId next_bin_id_ = 1;
    long long n_hat_ = 2;
    std::map<int, CostChain> chains_;  // j -> items of rounded size 2^-j
    std::vector<Bin> tiny_bins_;
    std::unordered_map<ItemId, Item> live_;
    std::unordered_map<ItemId, int> item_class_;  // j, or -1 for tiny
    std::vector<ItemId> last_moved_;

    static int pow2_exponent(const Rational& size) {
        // smallest j with size <= 2^-j ... i.e. 2^-j >= size > 2^-(j+1)
        int j = 0;
        Rational p(1);
        while (p / Rational(2) >= size) {
            p /= Rational(2);
            ++j;
        }
        return j;
    }

    void do_insert(Item item) {
        if (item.size <= Rational(0) || item.size > Rational(1))
            throw std::invalid_argument("simple2: size out of (0,1]");
        if (!item.cost) item.cost = model_.cost_of(item);
        ledger_.record_insert(item);
        while (static_cast<long long>(live_.size()) + 1 > n_hat_) n_hat_ *= 2;
        live_[item.id] = item;
        int j = pow2_exponent(item.size);
        Rational rounded = Rational(1, 1);
        for (int i = 0; i < j; ++i) rounded /= Rational(2);
        if (rounded * Rational(n_hat_) < Rational(1)) {
            item_class_[item.id] = -1;
            for (auto& b : tiny_bins_)
                if (b.used + item.size <= Rational(1)) {
                    b.contents.push_back(item.id);
                    b.used += item.size;
                    return;
                }
            Bin b;
            b.id = next_bin_id_++;
            b.contents.push_back(item.id);
            b.used = item.size;
            tiny_bins_.push_back(std::move(b));
            return;
        }
        item_class_[item.id] = j;
        auto it = chains_.find(j);
        if (it == chains_.end()) it = chains_.emplace(j, CostChain(next_bin_id_)).first;
        long long per_bin = 1;
        for (int i = 0; i < j; ++i) per_bin *= 2;
        auto rep = it->second.insert(item, [per_bin]() {
            return std::make_pair(static_cast<int>(per_bin), false);
        });
        for (const auto& e : rep.moved) {
            ledger_.record_move(live_.at(e.id));
            last_moved_.push_back(e.id);
        }
    }

    void do_erase(ItemId id) {
        auto it = live_.find(id);
        if (it == live_.end()) throw std::invalid_argument("simple2: unknown id");
        int j = item_class_.at(id);
        if (j < 0) {
            for (auto& b : tiny_bins_) {
                auto at = std::find(b.contents.begin(), b.contents.end(), id);
                if (at != b.contents.end()) {
                    b.used -= it->second.size;
                    b.contents.erase(at);
                    break;
                }
            }
        } else {
            auto rep = chains_.at(j).erase(id);
            for (const auto& e : rep.moved) {
                ledger_.record_move(live_.at(e.id));
                last_moved_.push_back(e.id);
            }
        }
        item_class_.erase(id);
        live_.erase(it);
    }
};

// ---- Super-Harmonic parameters, typed bins and matching ----

struct SHParams {
    Rational eps;
    int K = 0;
    std::vector<Rational> thresholds;  // t_0 = eps .. t_K = 1
    std::vector<Rational> alpha;       // red fraction per type, 1-based storage at [i-1]
    std::vector<long long> beta, gamma;
    std::vector<std::pair<int, int>> edges;  // (blue type, red type), 1-based
    std::vector<Rational> delta;             // precomputed slack per type

    static SHParams harmonic(int K, const Rational& eps) {
        SHParams p;
        p.eps = eps;
        p.K = K;
        p.thresholds.push_back(eps);
        for (int i = 1; i <= K; ++i) p.thresholds.push_back(Rational(1, K + 1 - i));
        for (int i = 1; i <= K; ++i) {
            p.alpha.push_back(Rational(0));
            p.beta.push_back(K + 1 - i);
            p.gamma.push_back(1);
        }
        p.finalize();
        return p;
    }

    void finalize() {
        delta.clear();
        for (int i = 0; i < K; ++i) {
            Rational d = alpha[static_cast<size_t>(i)] *
                             (Rational(beta[static_cast<size_t>(i)]) -
                              Rational(gamma[static_cast<size_t>(i)])) +
                         Rational(1) + Rational(gamma[static_cast<size_t>(i)]);
            delta.push_back(max(d, Rational(0)));
        }
        validate();
    }

    void validate() const {
        if (K <= 0 || thresholds.size() != static_cast<size_t>(K) + 1)
            throw std::invalid_argument("SHParams: bad thresholds");
        if (thresholds.back() != Rational(1))
            throw std::invalid_argument("SHParams: t_K must be 1");
        for (int i = 0; i + 1 <= K; ++i)
            if (thresholds[static_cast<size_t>(i)] >= thresholds[static_cast<size_t>(i) + 1] &&
                !(thresholds[static_cast<size_t>(i)] == thresholds[static_cast<size_t>(i) + 1]))
                throw std::invalid_argument("SHParams: thresholds not increasing");
        for (int i = 0; i < K; ++i) {
            if (alpha[static_cast<size_t>(i)] < Rational(0) ||
                alpha[static_cast<size_t>(i)] >= Rational(1))
                throw std::invalid_argument("SHParams: alpha out of [0,1)");
            if (beta[static_cast<size_t>(i)] <= 0 || gamma[static_cast<size_t>(i)] <= 0)
                throw std::invalid_argument("SHParams: capacities must be positive");
        }
        for (const auto& e : edges) {
            if (e.first < 1 || e.first > K || e.second < 1 || e.second > K)
                throw std::invalid_argument("SHParams: edge type out of range");
            // a full blue group and a full red group must share a bin
            Rational need = thresholds[static_cast<size_t>(e.first)] *
                                Rational(beta[static_cast<size_t>(e.first) - 1]) +
                            thresholds[static_cast<size_t>(e.second)] *
                                Rational(gamma[static_cast<size_t>(e.second) - 1]);
            if (need > Rational(1))
                throw std::invalid_argument("SHParams: edge does not fit in a bin");
        }
    }

    int type_of(const Rational& size) const {
        if (size <= eps) throw std::invalid_argument("SHParams: item not large");
        for (int i = 1; i <= K; ++i)
            if (size <= thresholds[static_cast<size_t>(i)]) return i;
        throw std::invalid_argument("SHParams: size above 1");
    }
};

// Group nodes (one per typed bin) with a stable matching between compatible
// blue/red groups. Preferences: higher key first, ties by lower node id.
class MatchState {
public:
    struct Node {
        BinId bin = 0;
        int type = 0;
        bool red = false;
        int key = 0;  // power-of-two exponent of the costliest member
    };

    // moved-cost accounting is delegated so the caller can charge its ledger
    using MoveGroup = std::function<void(BinId guest, BinId host)>;

    MatchState(const SHParams* params, MoveGroup co_locate, MoveGroup split)
        : params_(params), co_locate_(std::move(co_locate)), split_(std::move(split)) {}

    const std::map<BinId, Node>& nodes() const { return nodes_; }
    std::optional<BinId> partner(BinId b) const {
        auto it = match_.find(b);
        if (it == match_.end()) return std::nullopt;
        return it->second;
    }
    size_t matched_pairs() const { return match_.size() / 2; }

    void insert_node(Node n) {
        nodes_[n.bin] = n;
        repair_insert(n.bin);
    }

    void remove_node(BinId b) {
        auto it = nodes_.find(b);
        if (it == nodes_.end()) return;
        auto p = partner(b);
        unmatch(b, /*removing=*/true);
        Node node = it->second;
        nodes_.erase(it);
        if (p) repair_widow(*p, node);
    }

    // exhaustive blocking-pair scan; empty result means stable
    std::vector<std::pair<BinId, BinId>> blocking_pairs() const {
        std::vector<std::pair<BinId, BinId>> out;
        for (const auto& b : nodes_) {
            if (b.second.red) continue;
            for (const auto& r : nodes_) {
                if (!r.second.red) continue;
                if (!compatible(b.second, r.second)) continue;
                if (prefers(r.second, b.second, partner(r.first)) &&
                    prefers(b.second, r.second, partner(b.first)))
                    out.emplace_back(b.first, r.first);
            }
        }
        return out;
    }

private:
    const SHParams* params_;
    MoveGroup co_locate_, split_;
    std::map<BinId, Node> nodes_;
    std::map<BinId, BinId> match_;
    std::map<BinId, BinId> guest_of_;  // pair host -> guest bin

    bool compatible(const Node& blue, const Node& red) const {
        for (const auto& e : params_->edges)
            if (e.first == blue.type && e.second == red.type) return true;
        return false;
    }

    // does `who` prefer `cand` over its current partner? key first, then the
    // junior (higher-id) node, so equal-key groups have one consistent order
    bool prefers(const Node& who, const Node& cand, std::optional<BinId> current) const {
        (void)who;
        if (!current) return true;
        const Node& cur = nodes_.at(*current);
        if (cand.key != cur.key) return cand.key > cur.key;
        return cand.bin > cur.bin;
    }

    static bool better(const Node& a, const Node& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.bin > b.bin;
    }

    void do_match(BinId a, BinId r) {
        match_[a] = r;
        match_[r] = a;
        // the cheaper-key side moves in with the other
        const Node& na = nodes_.at(a);
        const Node& nr = nodes_.at(r);
        BinId guest = na.key <= nr.key ? a : r;
        BinId host = guest == a ? r : a;
        guest_of_[host] = guest;
        co_locate_(guest, host);
    }

    void unmatch(BinId b, bool removing) {
        auto it = match_.find(b);
        if (it == match_.end()) return;
        BinId other = it->second;
        match_.erase(b);
        match_.erase(other);
        BinId host = guest_of_.count(b) ? b : other;
        BinId guest = guest_of_.count(b) ? guest_of_.at(b) : guest_of_.at(other);
        guest_of_.erase(host);
        // physically separate unless the disappearing bin is the guest
        if (!(removing && guest == b)) split_(guest, host);
    }

    void repair_insert(BinId b) {
        // deferred-acceptance proposals down the displaced chain
        std::optional<BinId> cur = b;
        while (cur) {
            const Node& n = nodes_.at(*cur);
            BinId best = 0;
            bool have = false;
            for (const auto& kv : nodes_) {
                if (kv.second.red == n.red) continue;
                const Node& blue = n.red ? kv.second : n;
                const Node& red = n.red ? n : kv.second;
                if (!compatible(blue, red)) continue;
                if (!prefers(kv.second, n, partner(kv.first))) continue;
                if (!have || better(nodes_.at(kv.first), nodes_.at(best))) {
                    best = kv.first;
                    have = true;
                }
            }
            if (!have) return;
            auto displaced = partner(best);
            if (displaced) unmatch(best, false);
            do_match(*cur, best);
            cur = displaced;
        }
    }

    // partner `r` of a removed node scans downward for a replacement
    void repair_widow(BinId r, const Node& removed) {
        std::optional<BinId> widow = r;
        Node floor_node = removed;
        while (widow) {
            const Node& n = nodes_.at(*widow);
            BinId best = 0;
            bool have = false;
            for (const auto& kv : nodes_) {
                if (kv.second.red == n.red) continue;
                if (kv.second.key > floor_node.key) continue;
                const Node& blue = n.red ? kv.second : n;
                const Node& red = n.red ? n : kv.second;
                if (!compatible(blue, red)) continue;
                if (!prefers(kv.second, n, partner(kv.first))) continue;
                if (!have || better(nodes_.at(kv.first), nodes_.at(best))) {
                    best = kv.first;
                    have = true;
                }
            }
            if (!have) return;
            // `better` already favors the junior (highest-id) node on key ties,
            // which is the same-type last group the deletion rule asks for
            auto displaced = partner(best);
            if (displaced) unmatch(best, false);
            do_match(*widow, best);
            floor_node = nodes_.at(best);
            widow = displaced;
        }
    }
};

}  // namespace binpack
