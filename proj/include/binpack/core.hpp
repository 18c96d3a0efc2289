// Shared domain model: items, bins, packings, movement-cost models,
// recourse accounting and event streams.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "binpack/rational.hpp"

namespace binpack {

using ItemId = std::uint64_t;
using BinId = std::uint64_t;

struct Item {
    ItemId id = 0;
    Rational size;                  // in (0, 1]
    std::optional<Rational> cost;   // movement cost under the General model

    Item() = default;
    Item(ItemId i, Rational s) : id(i), size(std::move(s)) {}
    Item(ItemId i, Rational s, Rational c) : id(i), size(std::move(s)), cost(std::move(c)) {}
};

enum class CostVariant { Unit, Size, General };

struct CostModel {
    CostVariant variant = CostVariant::Unit;

    Rational cost_of(const Item& item) const {
        switch (variant) {
            case CostVariant::Unit: return Rational(1);
            case CostVariant::Size: return item.size;
            case CostVariant::General: return item.cost.value_or(Rational(1));
        }
        return Rational(1);
    }
};

inline const char* cost_variant_name(CostVariant v) {
    switch (v) {
        case CostVariant::Unit: return "unit";
        case CostVariant::Size: return "size";
        case CostVariant::General: return "general";
    }
    return "?";
}

struct Bin {
    BinId id = 0;
    std::vector<ItemId> contents;
    Rational used;
};

// A packing plus the item registry it refers to. Every algorithm can emit one
// of these so audits and the harness recount bins from a common shape.
struct PackingState {
    std::vector<Bin> bins;
    std::unordered_map<ItemId, BinId> item_locations;
    std::unordered_map<ItemId, Item> items;

    BinId next_bin_id = 1;

    BinId open_bin() {
        Bin b;
        b.id = next_bin_id++;
        bins.push_back(std::move(b));
        return bins.back().id;
    }

    Bin* find_bin(BinId id) {
        for (auto& b : bins)
            if (b.id == id) return &b;
        return nullptr;
    }
    const Bin* find_bin(BinId id) const {
        for (auto& b : bins)
            if (b.id == id) return &b;
        return nullptr;
    }

    void place(const Item& item, BinId bin) {
        Bin* b = find_bin(bin);
        if (!b) throw std::invalid_argument("PackingState: unknown bin");
        b->contents.push_back(item.id);
        b->used += item.size;
        items[item.id] = item;
        item_locations[item.id] = bin;
    }

    size_t bins_used() const {
        size_t n = 0;
        for (const auto& b : bins)
            if (!b.contents.empty()) ++n;
        return n;
    }

    Rational total_volume() const {
        Rational v;
        for (const auto& kv : items) v += kv.second.size;
        return v;
    }
};

// Returns one human-readable string per invariant violation; empty means valid.
inline std::vector<std::string> validate_packing(const PackingState& state) {
    std::vector<std::string> violations;
    std::unordered_map<ItemId, BinId> seen;
    for (const auto& bin : state.bins) {
        Rational sum;
        for (ItemId id : bin.contents) {
            auto it = state.items.find(id);
            if (it == state.items.end()) {
                violations.push_back("bin " + std::to_string(bin.id) + ": unknown item " +
                                     std::to_string(id));
                continue;
            }
            sum += it->second.size;
            if (seen.count(id))
                violations.push_back("item " + std::to_string(id) + " appears in bins " +
                                     std::to_string(seen[id]) + " and " + std::to_string(bin.id));
            seen[id] = bin.id;
            auto loc = state.item_locations.find(id);
            if (loc == state.item_locations.end() || loc->second != bin.id)
                violations.push_back("item " + std::to_string(id) +
                                     " location map disagrees with bin " + std::to_string(bin.id));
        }
        if (sum > Rational(1))
            violations.push_back("bin overfull: " + sum.to_string() + " > 1");
        if (sum != bin.used)
            violations.push_back("bin " + std::to_string(bin.id) + ": cached used " +
                                 bin.used.to_string() + " != recomputed " + sum.to_string());
    }
    for (const auto& kv : state.item_locations) {
        if (!seen.count(kv.first))
            violations.push_back("item " + std::to_string(kv.first) +
                                 " in location map but absent from bin " +
                                 std::to_string(kv.second));
    }
    return violations;
}

struct RecourseLedger {
    CostModel model;
    Rational total_moved;
    Rational total_inserted_cost;
    std::vector<Rational> per_step;

    explicit RecourseLedger(CostModel m = {}) : model(m) {}

    void start_step() { per_step.emplace_back(); }

    void record_move(const Item& item) {
        if (per_step.empty()) per_step.emplace_back();
        Rational c = model.cost_of(item);
        per_step.back() += c;
        total_moved += c;
    }

    void record_insert(const Item& item) { total_inserted_cost += model.cost_of(item); }

    // gamma of the run so far; only meaningful once something was inserted
    Rational amortized_recourse() const {
        if (total_inserted_cost.is_zero()) return Rational(0);
        return total_moved / total_inserted_cost;
    }
};

inline RecourseLedger record_move(RecourseLedger ledger, const Item& item) {
    ledger.record_move(item);
    return ledger;
}

enum class SizeClass { Small, Medium, Large, Huge };

inline const char* size_class_name(SizeClass c) {
    switch (c) {
        case SizeClass::Small: return "small";
        case SizeClass::Medium: return "medium";
        case SizeClass::Large: return "large";
        case SizeClass::Huge: return "huge";
    }
    return "?";
}

// Finest classification; callers coarsen (huge items count as large where
// only the small/large split matters). Boundaries: size < eps small,
// [eps, 1/4] medium, (1/4, 1/2] large, (1/2, 1] huge.
inline SizeClass classify_item(const Rational& size, const Rational& eps) {
    if (size <= Rational(0) || size > Rational(1))
        throw std::invalid_argument("classify_item: size out of (0,1]");
    if (eps <= Rational(0) || eps > Rational(1, 6))
        throw std::invalid_argument("classify_item: eps out of (0,1/6]");
    if (size < eps) return SizeClass::Small;
    if (size <= Rational(1, 4)) return SizeClass::Medium;
    if (size <= Rational(1, 2)) return SizeClass::Large;
    return SizeClass::Huge;
}

struct Event {
    enum class Op { Insert, Delete } op;
    Item item;    // Insert: full item; Delete: only item.id meaningful

    static Event insert(Item it) { return Event{Op::Insert, std::move(it)}; }
    static Event erase(ItemId id) { return Event{Op::Delete, Item(id, Rational(1))}; }
    bool is_insert() const { return op == Op::Insert; }
};

struct EventStream {
    std::vector<Event> events;
    CostVariant cost_model = CostVariant::Unit;
    std::string generator;   // non-empty when produced by a generator; enables formula OPT

    size_t size() const { return events.size(); }
};

}  // namespace binpack
