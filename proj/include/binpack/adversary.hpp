// Lower-bound instance generators and their exact verifiers: the Sylvester
// size-cost construction, the unit-cost grid instances, the 3/2 alternation,
// and the online-adversary-to-dynamic conversion wrapper.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "binpack/core.hpp"
#include "binpack/lp.hpp"
#include "binpack/oracle.hpp"

namespace binpack {

inline std::vector<long long> sylvester_sequence(int c) {
    if (c < 2 || c > 5) throw std::invalid_argument("sylvester_sequence: c out of [2,5]");
    std::vector<long long> k{2};
    long long prod = 2;
    while (static_cast<int>(k.size()) < c) {
        k.push_back(prod + 1);
        prod *= k.back();
    }
    for (size_t i = 0; i < k.size(); ++i)
        for (size_t j = i + 1; j < k.size(); ++j)
            if (BigInt::gcd(BigInt(k[i]), BigInt(k[j])) != BigInt(1))
                throw std::logic_error("sylvester_sequence: coprimality lost");
    return k;
}

struct SylvesterInstance {
    int c = 0;
    std::vector<long long> k;
    Rational eps;                 // 1 / prod(k)
    std::vector<Rational> sizes;  // s_1..s_{c+1}
    long long N = 0;

    static SylvesterInstance make(int c, long long N) {
        SylvesterInstance inst;
        inst.c = c;
        inst.k = sylvester_sequence(c);
        long long prod = 1;
        for (long long v : inst.k) prod *= v;
        if (N <= 0 || N % prod != 0)
            throw std::invalid_argument("SylvesterInstance: N must be a positive multiple of prod k");
        inst.N = N;
        inst.eps = Rational(1, prod);
        Rational half_eps = inst.eps / Rational(2);
        for (long long v : inst.k)
            inst.sizes.push_back(Rational(1, v) * (Rational(1) - half_eps));
        inst.sizes.push_back(inst.eps * (Rational(3, 2) - half_eps));
        inst.verify_properties();
        return inst;
    }

    // P1..P4 checked exactly, plus the all-ones dot product
    void verify_properties() const {
        Rational sum;
        for (long long v : k) sum += Rational(1, v);
        if (sum != Rational(1) - eps) throw std::logic_error("Sylvester P1 failed");
        for (size_t i = 0; i < k.size(); ++i)
            for (size_t j = i + 1; j < k.size(); ++j)
                if (BigInt::gcd(BigInt(k[i]), BigInt(k[j])) != BigInt(1))
                    throw std::logic_error("Sylvester P2 failed");
        for (size_t i = 0; i < k.size(); ++i) {
            Rational q = Rational(1, k[i]) / eps;
            if (q != Rational(q.floor(), BigInt(1))) throw std::logic_error("Sylvester P3 failed");
            for (size_t j = 0; j < k.size(); ++j) {
                if (i == j) continue;
                Rational qq = Rational(1, k[i]) / (Rational(k[j]) * eps);
                if (qq != Rational(qq.floor(), BigInt(1)))
                    throw std::logic_error("Sylvester P4 failed");
            }
        }
        Rational dot;
        for (const auto& s : sizes) dot += s;
        if (dot != Rational(1)) throw std::logic_error("Sylvester all-ones dot product != 1");
    }
};

// N items of every size, then T rounds of (delete all s_{c+1}, insert N fresh)
inline EventStream sylvester_stream(int c, long long N, int rounds) {
    auto inst = SylvesterInstance::make(c, N);
    EventStream s;
    s.cost_model = CostVariant::Size;
    s.generator = "sylvester:c=" + std::to_string(c) + ",N=" + std::to_string(N);
    ItemId next = 1;
    std::vector<ItemId> small_ids;
    for (int i = 0; i <= c; ++i)
        for (long long n = 0; n < N; ++n) {
            Item it(next++, inst.sizes[static_cast<size_t>(i)]);
            it.cost = it.size;
            if (i == c) small_ids.push_back(it.id);
            s.events.push_back(Event::insert(it));
        }
    for (int r = 0; r < rounds; ++r) {
        for (ItemId id : small_ids) s.events.push_back(Event::erase(id));
        small_ids.clear();
        for (long long n = 0; n < N; ++n) {
            Item it(next++, inst.sizes.back());
            it.cost = it.size;
            small_ids.push_back(it.id);
            s.events.push_back(Event::insert(it));
        }
    }
    return s;
}

struct CharacteristicReport {
    long long checked = 0;
    std::vector<std::string> counterexamples;
};

// Enumerates every feasible bin content vector chi and checks parts (a),(b),(c).
inline CharacteristicReport characteristic_enumerate(int c) {
    if (c > 3) throw std::invalid_argument("characteristic_enumerate: c must be <= 3");
    long long prod = 1;
    for (long long v : sylvester_sequence(c)) prod *= v;
    auto inst = SylvesterInstance::make(c, prod);
    CharacteristicReport rep;
    std::vector<long long> chi(static_cast<size_t>(c) + 1, 0);
    std::vector<long long> cap;
    for (const auto& s : inst.sizes) cap.push_back((Rational(1) / s).floor_i64());

    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == chi.size()) {
            Rational dot;
            for (size_t j = 0; j < chi.size(); ++j) dot += inst.sizes[j] * Rational(chi[j]);
            if (dot > Rational(1)) return;
            ++rep.checked;
            bool all_ones = true, is_unit_multiple = false;
            for (size_t j = 0; j < chi.size(); ++j)
                if (chi[j] != 1) all_ones = false;
            for (size_t j = 0; j + 1 < chi.size(); ++j) {
                bool only_j = chi[j] == inst.k[j];
                for (size_t j2 = 0; only_j && j2 < chi.size(); ++j2)
                    if (j2 != j && chi[j2] != 0) only_j = false;
                if (only_j) is_unit_multiple = true;
            }
            Rational half_eps = inst.eps / Rational(2);
            long long small = chi.back();
            auto fail = [&](const char* part) {
                std::string s = std::string("part ") + part + " chi=(";
                for (size_t j = 0; j < chi.size(); ++j)
                    s += std::to_string(chi[j]) + (j + 1 < chi.size() ? "," : ")");
                rep.counterexamples.push_back(s);
            };
            if (small == 1 && !all_ones && dot > Rational(1) - half_eps) fail("a");
            if (small == 0 && dot > Rational(1) - half_eps) fail("b");
            if (small == 0 && !is_unit_multiple && dot > Rational(1) - inst.eps) fail("c");
            return;
        }
        for (long long v = 0; v <= cap[i]; ++v) {
            chi[i] = v;
            rec(i + 1);
        }
        chi[i] = 0;
    };
    rec(0);
    return rep;
}

// I_s (floor(B^{c+1}) small items of size 1/B^c), then `rounds` cycles of
// inserting floor(B/(1-ell)) items of size ell and deleting them again.
inline EventStream unit_lb_stream(const Rational& eps, long long B, const Rational& ell,
                                  int rounds = 1, long long c = 1) {
    auto grid = make_size_grid(eps);
    bool on_grid = false;
    for (const auto& p : grid.points)
        if (p == ell) on_grid = true;
    if (!on_grid) throw std::invalid_argument("unit_lb_stream: ell not in S_eps");
    if (Rational(B) < Rational(1) / eps)
        throw std::invalid_argument("unit_lb_stream: B < 1/eps");
    EventStream s;
    s.cost_model = CostVariant::Unit;
    s.generator = "unit-lb:B=" + std::to_string(B) + ",ell=" + ell.to_string();
    Rational small_size = Rational(1);
    long long small_count = B;
    for (long long i = 0; i < c; ++i) {
        small_size /= Rational(B);
        small_count *= B;
    }
    small_count = (Rational(small_count)).floor_i64();
    ItemId next = 1;
    for (long long i = 0; i < small_count; ++i)
        s.events.push_back(Event::insert(Item(next++, small_size, Rational(1))));
    long long big = (Rational(B) / (Rational(1) - ell)).floor_i64();
    for (int r = 0; r < rounds; ++r) {
        std::vector<ItemId> ids;
        for (long long i = 0; i < big; ++i) {
            Item it(next++, ell, Rational(1));
            ids.push_back(it.id);
            s.events.push_back(Event::insert(it));
        }
        if (r + 1 < rounds)
            for (ItemId id : ids) s.events.push_back(Event::erase(id));
    }
    return s;
}

// 2n-4 items of size 1/n, then cycles of adding/removing 4 items of 1/2+1/2n
inline EventStream unit_lb_alternating(long long n, int rounds) {
    if (n < 6) throw std::invalid_argument("unit_lb_alternating: n too small");
    EventStream s;
    s.cost_model = CostVariant::Unit;
    s.generator = "alternating:n=" + std::to_string(n);
    ItemId next = 1;
    for (long long i = 0; i < 2 * n - 4; ++i)
        s.events.push_back(Event::insert(Item(next++, Rational(1, n), Rational(1))));
    Rational big = Rational(1, 2) + Rational(1, 2 * n);
    for (int r = 0; r < rounds; ++r) {
        std::vector<ItemId> ids;
        for (int i = 0; i < 4; ++i) {
            Item it(next++, big, Rational(1));
            ids.push_back(it.id);
            s.events.push_back(Event::insert(it));
        }
        for (ItemId id : ids) s.events.push_back(Event::erase(id));
    }
    return s;
}

// Known-formula OPT for generated streams, from the live multiset.
// Returns 0 when the generator has no formula.
inline long long formula_opt(const std::string& generator, const std::vector<Item>& live) {
    if (generator.rfind("sylvester:", 0) == 0) {
        // live = N_i copies of each s_i plus m smalls; the packing
        // min(m) all-ones bins + same-size bins is optimal for these streams
        std::vector<Rational> distinct;
        std::vector<long long> counts;
        std::vector<Item> sorted = live;
        std::sort(sorted.begin(), sorted.end(), [](const Item& a, const Item& b) {
            return cmp(a.size, b.size) > 0;
        });
        for (const auto& it : sorted) {
            if (!distinct.empty() && distinct.back() == it.size)
                ++counts.back();
            else {
                distinct.push_back(it.size);
                counts.push_back(1);
            }
        }
        if (distinct.empty()) return 0;
        // the generator tag pins c, so s_{c+1} is present iff c+1 sizes are live
        size_t c = 0;
        {
            auto at = generator.find("c=");
            if (at != std::string::npos) c = static_cast<size_t>(std::stoll(generator.substr(at + 2)));
        }
        long long m = 0;
        size_t c_sizes = distinct.size();
        if (c > 0 && distinct.size() == c + 1) {
            m = counts.back();
            --c_sizes;
        }
        long long bins = m;
        for (size_t i = 0; i < c_sizes; ++i) {
            long long k = (Rational(1) / distinct[i]).floor_i64();  // k_i items fit
            long long rest = counts[i] - m;
            if (rest < 0) rest = 0;
            bins += (rest + k - 1) / k;
        }
        return bins;
    }
    if (generator.rfind("unit-lb:", 0) == 0) {
        Rational small_vol;
        long long big = 0;
        Rational ell;
        for (const auto& it : live) {
            if (it.size > Rational(1, 2)) {
                ++big;
                ell = it.size;
            } else {
                small_vol += it.size;
            }
        }
        Rational leftover = small_vol - Rational(big) * (Rational(1) - ell);
        long long extra = leftover.sign() > 0 ? leftover.ceil_i64() : 0;
        long long bins = big + extra;
        return bins > 0 ? bins : (small_vol.sign() > 0 ? small_vol.ceil_i64() : 0);
    }
    if (generator.rfind("alternating:", 0) == 0) {
        long long n = 0;
        {
            auto at = generator.find("n=");
            if (at != std::string::npos) n = std::stoll(generator.substr(at + 2));
        }
        long long huge = 0;
        Rational small_vol;
        for (const auto& it : live) {
            if (it.size > Rational(1, 2))
                ++huge;
            else
                small_vol += it.size;
        }
        if (huge == 0 || n == 0) return small_vol.sign() > 0 ? small_vol.ceil_i64() : 0;
        // each huge bin leaves 1/2 - 1/2n residual space for small items
        Rational leftover =
            small_vol - Rational(huge) * (Rational(1, 2) - Rational(1, 2 * n));
        long long extra = leftover.sign() > 0 ? leftover.ceil_i64() : 0;
        return huge + extra;
    }
    return 0;
}

// ---- online adversary -> fully-dynamic lower bound wrapper ----

// An adversary observes the current packing and either emits the next item
// size or stops.
using OnlineAdversary =
    std::function<std::optional<Rational>(const PackingState& packing)>;

// The 3/2 adversary: keeps 2n-4 smalls of size 1/n live, then up to 4 huge
// items of size 1/2 + 1/2n, then stops until the wrapper deletes a suffix.
inline OnlineAdversary three_halves_adversary(long long n) {
    return [n](const PackingState& packing) -> std::optional<Rational> {
        long long smalls = 0, huges = 0;
        for (const auto& kv : packing.items) {
            if (kv.second.size > Rational(1, 2))
                ++huges;
            else
                ++smalls;
        }
        if (smalls < 2 * n - 4) return Rational(1, n);
        if (huges < 4) return Rational(1, 2) + Rational(1, 2 * n);
        return std::nullopt;
    };
}

// Algorithm under test: told to insert/delete, reports which items moved.
struct WrappedAlgo {
    std::function<std::vector<ItemId>(const Item&)> insert;
    std::function<std::vector<ItemId>(ItemId)> erase;
    std::function<PackingState()> snapshot;
};

struct WrapTranscript {
    size_t max_sequence = 0;
    std::uint64_t steps = 0;
    bool potential_nonnegative = true;
    Rational min_potential;
    size_t resets = 0;
    bool reached_target = false;
};

// Drives the adversary with geometrically decaying movement costs
// (2 beta)^{-(k+1)}; any repack deletes the suffix past the smallest repacked
// index. Phi = beta * inserted cost - moved cost stays nonnegative whenever
// the algorithm's amortized recourse is at most beta.
inline WrapTranscript general_cost_wrap(const OnlineAdversary& adversary, const Rational& beta,
                                        WrappedAlgo algo, size_t target_sequence,
                                        std::uint64_t step_budget) {
    if (beta < Rational(2)) throw std::invalid_argument("general_cost_wrap: beta < 2");
    WrapTranscript tr;
    std::vector<Item> sequence;  // e_1..e_k live, in order
    Rational phi;
    ItemId next_id = 1;
    Rational inv = Rational(1) / (Rational(2) * beta);
    std::unordered_map<ItemId, size_t> index_of;
    std::unordered_map<ItemId, Rational> cost_of;

    auto cost_for_index = [&](size_t k) {
        Rational c(1);
        for (size_t i = 0; i <= k; ++i) c *= inv;
        return c;
    };
    // charges moves of live items and reports the smallest moved index
    auto account_moves = [&](const std::vector<ItemId>& moved, ItemId skip) {
        size_t smallest = sequence.size();
        for (ItemId id : moved) {
            if (id == skip) continue;
            auto it = index_of.find(id);
            if (it == index_of.end()) continue;
            phi -= cost_of.at(id);
            smallest = std::min(smallest, it->second);
        }
        if (phi < tr.min_potential) tr.min_potential = phi;
        if (phi.is_negative()) tr.potential_nonnegative = false;
        return smallest;
    };

    while (tr.steps < step_budget) {
        ++tr.steps;
        auto next = adversary(algo.snapshot());
        if (!next) break;
        Item item(next_id++, *next);
        item.cost = cost_for_index(sequence.size());
        sequence.push_back(item);
        index_of[item.id] = sequence.size() - 1;
        cost_of[item.id] = *item.cost;
        phi += beta * (*item.cost);
        size_t smallest = account_moves(algo.insert(item), item.id);
        tr.max_sequence = std::max(tr.max_sequence, sequence.size());

        if (smallest < sequence.size()) {
            // step III: keep e_1..e_j for the smallest repacked index j,
            // extending the cut when deletions trigger repacks further back
            ++tr.resets;
            size_t keep = smallest + 1;  // 1-based target length
            while (sequence.size() > keep && tr.steps < step_budget) {
                ++tr.steps;
                Item victim = sequence.back();
                sequence.pop_back();
                index_of.erase(victim.id);
                size_t s = account_moves(algo.erase(victim.id), victim.id);
                cost_of.erase(victim.id);
                if (s + 1 < keep) keep = s + 1;
            }
        }
        if (tr.max_sequence >= target_sequence) {
            tr.reached_target = true;
            break;
        }
    }
    return tr;
}

// Random mixed stream: live-cap bounded inserts/deletes of thousandth sizes.
inline EventStream random_stream(std::uint64_t seed, size_t ops, size_t live_cap,
                                 long long smin_thousandths, long long smax_thousandths,
                                 int delete_percent, CostVariant model) {
    std::mt19937_64 rng(seed);
    EventStream s;
    s.cost_model = model;
    s.generator = "";
    std::vector<Item> live;
    ItemId next = 1;
    for (size_t i = 0; i < ops; ++i) {
        bool del = !live.empty() &&
                   (live.size() >= live_cap ||
                    static_cast<int>(rng() % 100) < delete_percent);
        if (del) {
            size_t k = rng() % live.size();
            s.events.push_back(Event::erase(live[k].id));
            live.erase(live.begin() + static_cast<long>(k));
        } else {
            long long t = smin_thousandths +
                          static_cast<long long>(rng() % static_cast<std::uint64_t>(
                                                      smax_thousandths - smin_thousandths + 1));
            Item it(next++, Rational(t, 1000));
            it.cost = Rational(1 + static_cast<long long>(rng() % 64), 16);
            s.events.push_back(Event::insert(it));
            live.push_back(it);
        }
    }
    return s;
}

}  // namespace binpack
