// Dynamic bin curve-fitting for small items: bins aggregated into clumps of
// T bins realizing the target frequency profile, clumps into buckets of
// Theta(1/eps) clumps. Items stay globally sorted; inserts cascade one item
// per bin toward the bucket end, deletes borrow one item per bin back.

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "binpack/core.hpp"
#include "binpack/lp.hpp"

namespace binpack {

struct CurveSpec {
    Rational eps;
    long long T = 0;
    std::vector<std::pair<Rational, long long>> targets;  // (bin target, bins per clump), descending

    static CurveSpec from_frequencies(const Rational& eps, const Frequencies& fr,
                                      const SizeGrid& grid) {
        CurveSpec spec;
        spec.eps = eps;
        spec.T = fr.T;
        long long c0 = (fr.f0 * Rational(fr.T)).floor_i64();
        if (c0 > 0) spec.targets.emplace_back(Rational(1), c0);
        for (size_t i = 0; i < grid.points.size(); ++i) {
            long long c = (fr.fx[i] * Rational(fr.T)).floor_i64();
            if (c > 0) spec.targets.emplace_back(Rational(1) - grid.points[i], c);
        }
        long long sum = 0;
        for (auto& t : spec.targets) sum += t.second;
        if (sum != spec.T) throw std::invalid_argument("CurveSpec: counts do not sum to T");
        return spec;
    }

    void validate() const {
        if (eps <= Rational(0) || eps > Rational(1, 4))
            throw std::invalid_argument("CurveSpec: bad eps");
        if (T <= 0 || targets.empty()) throw std::invalid_argument("CurveSpec: empty");
        for (const auto& t : targets) {
            if (t.first < eps || t.first > Rational(1))
                throw std::invalid_argument("CurveSpec: target outside [eps,1]");
        }
        for (size_t i = 1; i < targets.size(); ++i)
            if (targets[i].first > targets[i - 1].first)
                throw std::invalid_argument("CurveSpec: targets not descending");
    }
};

class CurveState {
public:
    struct CurveBin {
        BinId id = 0;
        Rational target;
        std::vector<Item> items;  // ascending by (size, id)
        Rational used;
    };

    explicit CurveState(CurveSpec spec) : spec_(std::move(spec)) {
        spec_.validate();
        bucket_cap_ = (Rational(3) / spec_.eps).floor_i64();
        bucket_min_ = (Rational(1) / spec_.eps).ceil_i64();
    }

    const CurveSpec& spec() const { return spec_; }
    size_t bin_count() const { return bins_.size(); }
    size_t nonempty_bins() const {
        size_t n = 0;
        for (const auto& b : bins_)
            if (!b.items.empty()) ++n;
        return n;
    }
    const std::vector<CurveBin>& bins() const { return bins_; }
    size_t bucket_count() const { return bucket_len_.size(); }
    size_t last_bucket_clumps() const {
        return bucket_len_.empty() ? 0 : bucket_len_.back();
    }
    Rational total_volume() const {
        Rational v;
        for (const auto& b : bins_) v += b.used;
        return v;
    }
    size_t live_items() const { return item_bin_.size(); }
    bool contains(ItemId id) const { return item_bin_.count(id) > 0; }

    // relocations performed by the most recent insert/delete
    const std::vector<ItemId>& last_moves() const { return moves_; }

    void insert(const Item& item) {
        if (item.size >= spec_.eps)
            throw std::invalid_argument("curve_insert: item not small");
        if (item.size <= Rational(0)) throw std::invalid_argument("curve_insert: bad size");
        if (item_bin_.count(item.id)) throw std::invalid_argument("curve_insert: duplicate id");
        moves_.clear();
        if (bins_.empty()) {
            bucket_len_.push_back(0);
            append_clump(0);
        }
        size_t pos = locate_bin(item);
        bin_insert(bins_[pos], item);
        item_bin_[item.id] = bins_[pos].id;

        // overflow cascade: one largest-item ejection per bin, toward bucket end
        while (bins_[pos].used > bins_[pos].target) {
            Item ejected = bins_[pos].items.back();
            bins_[pos].items.pop_back();
            bins_[pos].used -= ejected.size;
            size_t bucket = bucket_of(pos);
            if (pos == bucket_last_bin(bucket)) {
                flag_clump_if_slack(clump_of(pos));
                append_clump(bucket);
            }
            size_t nxt = pos + 1;
            bins_[nxt].items.insert(bins_[nxt].items.begin(), ejected);
            bins_[nxt].used += ejected.size;
            item_bin_[ejected.id] = bins_[nxt].id;
            moves_.push_back(ejected.id);
            pos = nxt;
        }
        size_t bucket = bucket_of(pos);
        if (bucket_len_[bucket] > static_cast<size_t>(bucket_cap_)) split_bucket(bucket);
    }

    void erase(ItemId id) {
        auto it = item_bin_.find(id);
        if (it == item_bin_.end()) throw std::invalid_argument("curve_delete: unknown id");
        moves_.clear();
        size_t pos = bin_pos_.at(it->second);
        CurveBin& bin = bins_[pos];
        auto at = std::find_if(bin.items.begin(), bin.items.end(),
                               [&](const Item& x) { return x.id == id; });
        bin.used -= at->size;
        bin.items.erase(at);
        item_bin_.erase(it);

        // borrow cascade: one smallest-item pull per bin from the next donor
        while (bins_[pos].used < bins_[pos].target - spec_.eps) {
            size_t bucket = bucket_of(pos);
            size_t last = bucket_last_bin(bucket);
            size_t donor = pos + 1;
            while (donor <= last && bins_[donor].items.empty()) ++donor;
            if (donor > last) break;  // frontier: nothing to pull
            Item f = bins_[donor].items.front();
            bins_[donor].items.erase(bins_[donor].items.begin());
            bins_[donor].used -= f.size;
            bins_[pos].items.push_back(f);
            bins_[pos].used += f.size;
            item_bin_[f.id] = bins_[pos].id;
            moves_.push_back(f.id);
            pos = donor;
        }

        size_t bucket = bucket_of(pos);
        drop_trailing_empty_clumps(bucket);
        if (bucket_len_[bucket] == 0) {
            bucket_len_.erase(bucket_len_.begin() + static_cast<long>(bucket));
            return;
        }
        if (bucket + 1 < bucket_len_.size() &&
            bucket_len_[bucket] < static_cast<size_t>(bucket_min_)) {
            // merge with the next bucket (bookkeeping only); the old last clump
            // keeps its slack, tracked by an exempt flag until it heals
            flag_clump_if_slack(bucket_first_clump(bucket) + bucket_len_[bucket] - 1);
            bucket_len_[bucket] += bucket_len_[bucket + 1];
            bucket_len_.erase(bucket_len_.begin() + static_cast<long>(bucket) + 1);
            if (bucket_len_[bucket] > static_cast<size_t>(bucket_cap_)) split_bucket(bucket);
        }
    }

    struct AuditReport {
        std::vector<std::string> violations;
        Rational profile_n0;                    // bins with target 1 (non-last buckets)
        std::vector<Rational> profile_nx;       // aligned with grid of 1 - target
        std::vector<Rational> profile_targets;  // distinct targets seen
        size_t underfull_bins = 0;              // bins below target - eps (anywhere)
        size_t exempt_clumps = 0;
    };

    AuditReport audit() {
        AuditReport rep;
        auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };
        // heal exempt flags whose clump closed up again
        for (size_t c = 0; c < clump_exempt_.size(); ++c) {
            if (!clump_exempt_[c]) continue;
            bool ok = true;
            for (size_t b = c * T(); b < (c + 1) * T(); ++b)
                if (bins_[b].used < bins_[b].target - spec_.eps) ok = false;
            if (ok) clump_exempt_[c] = 0;
        }

        if (bins_.size() != clump_exempt_.size() * T())
            bad("bin count not a multiple of T");
        size_t clump_total = 0;
        for (size_t b = 0; b < bucket_len_.size(); ++b) {
            clump_total += bucket_len_[b];
            if (b + 1 < bucket_len_.size()) {
                if (bucket_len_[b] < static_cast<size_t>(bucket_min_) ||
                    bucket_len_[b] > static_cast<size_t>(bucket_cap_))
                    bad("bucket " + std::to_string(b) + " clump count out of range");
            } else if (bucket_len_[b] > static_cast<size_t>(bucket_cap_)) {
                bad("last bucket too many clumps");
            }
        }
        if (clump_total != clump_exempt_.size()) bad("bucket lengths inconsistent");

        const Item* prev = nullptr;
        for (size_t i = 0; i < bins_.size(); ++i) {
            const CurveBin& bin = bins_[i];
            // target layout per clump
            const auto& want = target_for_slot(i % T());
            if (bin.target != want)
                bad("bin " + std::to_string(i) + " target mismatch");
            Rational sum;
            for (size_t k = 0; k < bin.items.size(); ++k) {
                sum += bin.items[k].size;
                if (prev && item_less(bin.items[k], *prev))
                    bad("sorted order broken at bin " + std::to_string(i));
                prev = &bin.items[k];
                auto loc = item_bin_.find(bin.items[k].id);
                if (loc == item_bin_.end() || loc->second != bin.id)
                    bad("locator stale for item " + std::to_string(bin.items[k].id));
            }
            if (sum != bin.used) bad("cached used mismatch at bin " + std::to_string(i));
            if (bin.used > bin.target) bad("bin over target at " + std::to_string(i));
            if (bin.used < bin.target - spec_.eps) {
                ++rep.underfull_bins;
                size_t clump = clump_of(i);
                size_t bucket = bucket_of(i);
                bool last_clump =
                    clump == bucket_first_clump(bucket) + bucket_len_[bucket] - 1;
                if (!last_clump && !clump_exempt_[clump])
                    bad("non-exempt bin below target-eps at " + std::to_string(i));
            }
        }
        for (size_t c = 0; c < clump_exempt_.size(); ++c)
            if (clump_exempt_[c]) ++rep.exempt_clumps;

        // induced profile, skipping the last bucket
        for (const auto& t : spec_.targets) rep.profile_targets.push_back(t.first);
        rep.profile_nx.assign(spec_.targets.size(), Rational(0));
        size_t last_bucket_first_bin =
            bucket_len_.empty() ? 0 : bucket_first_clump(bucket_len_.size() - 1) * T();
        for (size_t i = 0; i < last_bucket_first_bin && i < bins_.size(); ++i) {
            if (bins_[i].items.empty()) continue;
            for (size_t k = 0; k < spec_.targets.size(); ++k)
                if (spec_.targets[k].first == bins_[i].target) {
                    if (spec_.targets[k].first == Rational(1))
                        rep.profile_n0 += Rational(1);
                    else
                        rep.profile_nx[k] += Rational(1);
                    break;
                }
        }
        return rep;
    }

    PackingState snapshot() const {
        PackingState st;
        for (const auto& bin : bins_) {
            if (bin.items.empty()) continue;
            BinId b = st.open_bin();
            for (const auto& it : bin.items) st.place(it, b);
        }
        return st;
    }

private:
    friend struct CurveTestPeer;  // tests corrupt state to exercise the audit

    CurveSpec spec_;
    long long bucket_cap_ = 0;  // 3/eps clumps
    long long bucket_min_ = 0;  // 1/eps clumps
    std::vector<CurveBin> bins_;              // flat; clump c = [cT, cT+T)
    std::vector<char> clump_exempt_;          // merge/append slack zones
    std::vector<size_t> bucket_len_;          // clumps per bucket, in order
    std::unordered_map<ItemId, BinId> item_bin_;
    std::unordered_map<BinId, size_t> bin_pos_;
    BinId next_bin_id_ = 1;
    std::vector<ItemId> moves_;

    size_t T() const { return static_cast<size_t>(spec_.T); }

    static bool item_less(const Item& a, const Item& b) {
        int c = cmp(a.size, b.size);
        if (c != 0) return c < 0;
        return a.id < b.id;
    }

    const Rational& target_for_slot(size_t slot) const {
        for (const auto& t : spec_.targets) {
            if (slot < static_cast<size_t>(t.second)) return t.first;
            slot -= static_cast<size_t>(t.second);
        }
        throw std::logic_error("CurveState: slot outside clump");
    }

    size_t clump_of(size_t pos) const { return pos / T(); }
    size_t bucket_of(size_t pos) const {
        size_t clump = clump_of(pos);
        for (size_t b = 0, acc = 0; b < bucket_len_.size(); ++b) {
            acc += bucket_len_[b];
            if (clump < acc) return b;
        }
        throw std::logic_error("CurveState: position outside buckets");
    }
    size_t bucket_first_clump(size_t bucket) const {
        size_t acc = 0;
        for (size_t b = 0; b < bucket; ++b) acc += bucket_len_[b];
        return acc;
    }
    size_t bucket_last_bin(size_t bucket) const {
        return (bucket_first_clump(bucket) + bucket_len_[bucket]) * T() - 1;
    }

    void rebuild_positions() {
        bin_pos_.clear();
        for (size_t i = 0; i < bins_.size(); ++i) bin_pos_[bins_[i].id] = i;
    }

    void append_clump(size_t bucket) {
        size_t clump = bucket_first_clump(bucket) + bucket_len_[bucket];
        std::vector<CurveBin> fresh;
        for (const auto& t : spec_.targets)
            for (long long k = 0; k < t.second; ++k) {
                CurveBin b;
                b.id = next_bin_id_++;
                b.target = t.first;
                fresh.push_back(std::move(b));
            }
        bins_.insert(bins_.begin() + static_cast<long>(clump * T()),
                     std::make_move_iterator(fresh.begin()),
                     std::make_move_iterator(fresh.end()));
        clump_exempt_.insert(clump_exempt_.begin() + static_cast<long>(clump), 0);
        ++bucket_len_[bucket];
        rebuild_positions();
    }

    void drop_trailing_empty_clumps(size_t bucket) {
        while (bucket_len_[bucket] > 0) {
            size_t clump = bucket_first_clump(bucket) + bucket_len_[bucket] - 1;
            bool empty = true;
            for (size_t b = clump * T(); b < (clump + 1) * T(); ++b)
                if (!bins_[b].items.empty()) empty = false;
            if (!empty) break;
            bins_.erase(bins_.begin() + static_cast<long>(clump * T()),
                        bins_.begin() + static_cast<long>((clump + 1) * T()));
            clump_exempt_.erase(clump_exempt_.begin() + static_cast<long>(clump));
            --bucket_len_[bucket];
        }
        rebuild_positions();
    }

    void split_bucket(size_t bucket) {
        size_t len = bucket_len_[bucket];
        size_t left = (len + 1) / 2;  // left keeps the extra clump on odd counts
        bucket_len_[bucket] = left;
        bucket_len_.insert(bucket_len_.begin() + static_cast<long>(bucket) + 1, len - left);
        // the left bucket's new last clump may carry slack from its interior days
        flag_clump_if_slack(bucket_first_clump(bucket) + left - 1);
    }

    void flag_clump_if_slack(size_t clump) {
        if (clump >= clump_exempt_.size()) return;
        for (size_t b = clump * T(); b < (clump + 1) * T(); ++b)
            if (bins_[b].used < bins_[b].target - spec_.eps) {
                clump_exempt_[clump] = 1;
                return;
            }
    }

    void bin_insert(CurveBin& bin, const Item& item) {
        auto at = std::lower_bound(bin.items.begin(), bin.items.end(), item, item_less);
        bin.items.insert(at, item);
        bin.used += item.size;
    }

    // predecessor rule: the last bin whose smallest item is <= the new item;
    // empty bins are transparent; everything-larger lands in bin 0
    size_t locate_bin(const Item& item) const {
        size_t lo = 0, hi = bins_.size();  // find first non-empty bin with front > item
        auto front_gt = [&](size_t i) {
            return !bins_[i].items.empty() && item_less(item, bins_[i].items.front());
        };
        // binary search over the monotone "prefix contains a front <= item" structure:
        // scan-back over empty runs keeps probes cheap (empty runs are short)
        size_t best = 0;
        bool found = false;
        lo = 0;
        hi = bins_.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            // nearest non-empty at or before mid
            size_t probe = mid;
            bool has = false;
            while (true) {
                if (!bins_[probe].items.empty()) {
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
            if (!item_less(item, bins_[probe].items.front())) {
                best = probe;
                found = true;
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (void)front_gt;
        if (!found) return 0;
        return best;
    }
};

}  // namespace binpack
