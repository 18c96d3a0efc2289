// Scenario driving: JSONL event streams, an algorithm-agnostic runner with
// per-step metrics and OPT references, CSV output, and SH parameter files.

#pragma once

#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "binpack/adversary.hpp"
#include "binpack/core.hpp"
#include "binpack/oracle.hpp"
#include "binpack/sh_general.hpp"
#include "binpack/sizecost.hpp"
#include "binpack/unitcost.hpp"

namespace binpack {

// ---- stream serialization ----

inline void write_stream(const EventStream& s, std::ostream& out) {
    for (const auto& ev : s.events) {
        nlohmann::json j;
        if (ev.is_insert()) {
            j["op"] = "insert";
            j["id"] = std::to_string(ev.item.id);
            j["size"] = ev.item.size.to_string();
            if (ev.item.cost) j["cost"] = ev.item.cost->to_string();
        } else {
            j["op"] = "delete";
            j["id"] = std::to_string(ev.item.id);
        }
        out << j.dump() << "\n";
    }
}

inline void write_stream(const EventStream& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_stream: cannot open " + path);
    write_stream(s, out);
}

inline EventStream parse_stream(std::istream& in) {
    EventStream s;
    std::unordered_map<std::string, ItemId> ids;
    std::unordered_map<ItemId, bool> live;
    std::unordered_map<std::string, bool> ever;
    ItemId next = 1;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("stream line " + std::to_string(lineno) + ": " + e.what());
        }
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error("stream line " + std::to_string(lineno) + ": " + msg);
        };
        std::string op = j.value("op", "");
        std::string name = j.value("id", "");
        if (name.empty()) fail("missing id");
        if (op == "insert") {
            if (ever.count(name)) fail("duplicate insert id " + name);
            ever[name] = true;
            Rational size;
            try {
                size = Rational::from_string(j.at("size").get<std::string>());
            } catch (const std::exception&) {
                fail("malformed fraction in size");
            }
            if (size <= Rational(0) || size > Rational(1)) fail("size out of (0,1]");
            Item item(next, size);
            if (j.contains("cost")) {
                try {
                    item.cost = Rational::from_string(j.at("cost").get<std::string>());
                } catch (const std::exception&) {
                    fail("malformed fraction in cost");
                }
            }
            ids[name] = next;
            live[next] = true;
            ++next;
            s.events.push_back(Event::insert(item));
        } else if (op == "delete") {
            auto it = ids.find(name);
            if (it == ids.end() || !live[it->second]) fail("delete of unknown id " + name);
            live[it->second] = false;
            s.events.push_back(Event::erase(it->second));
        } else {
            fail("unknown op '" + op + "'");
        }
    }
    return s;
}

inline EventStream parse_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_stream: cannot open " + path);
    return parse_stream(in);
}

// ---- SH parameter files ----

inline SHParams parse_sh_params(std::istream& in) {
    SHParams p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "K") {
            ss >> p.K;
        } else if (key == "eps") {
            std::string v;
            ss >> v;
            p.eps = Rational::from_string(v);
        } else if (key == "t") {
            std::string v;
            p.thresholds.clear();
            while (ss >> v) p.thresholds.push_back(Rational::from_string(v));
        } else if (key == "alpha") {
            std::string v;
            while (ss >> v) p.alpha.push_back(Rational::from_string(v));
        } else if (key == "beta") {
            long long v;
            while (ss >> v) p.beta.push_back(v);
        } else if (key == "gamma") {
            long long v;
            while (ss >> v) p.gamma.push_back(v);
        } else if (key == "edge") {
            int a, b;
            ss >> a >> b;
            p.edges.emplace_back(a, b);
        } else {
            throw std::runtime_error("sh params: unknown key '" + key + "'");
        }
    }
    // thresholds in the file omit t_0 = eps
    std::vector<Rational> t{p.eps};
    t.insert(t.end(), p.thresholds.begin(), p.thresholds.end());
    p.thresholds = std::move(t);
    p.finalize();
    return p;
}

inline SHParams parse_sh_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_sh_params: cannot open " + path);
    return parse_sh_params(in);
}

// ---- algorithm adapters ----

class AnyAlgo {
public:
    virtual ~AnyAlgo() = default;
    virtual void step(const Event& ev) = 0;
    virtual size_t bins_used() const = 0;
    virtual Rational step_moved() const = 0;
    virtual Rational total_moved() const = 0;
    virtual Rational total_inserted() const = 0;
    virtual std::vector<std::string> audit() = 0;
    virtual PackingState snapshot() const = 0;
};

namespace detail {

class FFBaseline final : public AnyAlgo {
public:
    explicit FFBaseline(CostModel model) : model_(model) {}
    void step(const Event& ev) override {
        if (ev.is_insert()) {
            inserted_ += model_.cost_of(ev.item);
            state_ = first_fit({ev.item}, std::move(state_));
        } else {
            BinId b = state_.item_locations.at(ev.item.id);
            Bin* bin = state_.find_bin(b);
            bin->contents.erase(
                std::find(bin->contents.begin(), bin->contents.end(), ev.item.id));
            bin->used -= state_.items.at(ev.item.id).size;
            state_.items.erase(ev.item.id);
            state_.item_locations.erase(ev.item.id);
        }
    }
    size_t bins_used() const override { return state_.bins_used(); }
    Rational step_moved() const override { return Rational(0); }
    Rational total_moved() const override { return Rational(0); }
    Rational total_inserted() const override { return inserted_; }
    std::vector<std::string> audit() override { return validate_packing(state_); }
    PackingState snapshot() const override { return state_; }

private:
    CostModel model_;
    PackingState state_;
    Rational inserted_;
};

template <class T>
class LedgeredAlgo final : public AnyAlgo {
public:
    template <class... Args>
    explicit LedgeredAlgo(Args&&... args) : algo_(std::forward<Args>(args)...) {}
    void step(const Event& ev) override { algo_.step(ev); }
    size_t bins_used() const override { return algo_.bins_used(); }
    Rational step_moved() const override {
        return algo_.ledger().per_step.empty() ? Rational(0) : algo_.ledger().per_step.back();
    }
    Rational total_moved() const override { return algo_.ledger().total_moved; }
    Rational total_inserted() const override { return algo_.ledger().total_inserted_cost; }
    std::vector<std::string> audit() override { return algo_.audit(); }
    PackingState snapshot() const override { return algo_.snapshot(); }
    T& inner() { return algo_; }

private:
    T algo_;
};

}  // namespace detail

enum class OptMode { Exact, Volume, KnownFormula };

struct Scenario {
    std::string algorithm;  // unit-amortized | sh-general | simple-2 | size-epoch | ff-baseline
    Rational eps = Rational(1, 6);
    EventStream stream;
    std::uint64_t seed = 0;
    OptMode opt_mode = OptMode::Volume;
    size_t exact_cap = 20;
    size_t audit_every = 100;
    size_t max_steps = 0;  // 0 = whole stream
    std::optional<SHParams> sh_params;
};

inline std::unique_ptr<AnyAlgo> make_algorithm(const Scenario& sc) {
    CostModel model{sc.stream.cost_model};
    if (sc.algorithm == "unit-amortized")
        return std::make_unique<detail::LedgeredAlgo<UnitCostAlgo>>(UnitCostAlgo::make(sc.eps));
    if (sc.algorithm == "sh-general") {
        SHParams p = sc.sh_params ? *sc.sh_params : SHParams::harmonic(6, sc.eps);
        return std::make_unique<detail::LedgeredAlgo<GeneralCostAlgo>>(
            p, CostModel{CostVariant::General});
    }
    if (sc.algorithm == "simple-2")
        return std::make_unique<detail::LedgeredAlgo<SimpleTwoApprox>>(SimpleTwoApprox(model));
    if (sc.algorithm == "size-epoch")
        return std::make_unique<detail::LedgeredAlgo<SizeEpochAlgo>>(SizeEpochAlgo(sc.eps));
    if (sc.algorithm == "ff-baseline")
        return std::make_unique<detail::FFBaseline>(model);
    throw std::invalid_argument("unknown algorithm '" + sc.algorithm + "'");
}

struct MetricsRow {
    size_t step = 0;
    size_t live = 0;
    size_t bins = 0;
    long long opt_ref = 0;
    double ratio = 0;
    Rational step_moved, cum_moved, amortized, worst_per_op;
};

struct RunResult {
    std::vector<MetricsRow> rows;
    double max_ratio = 0;
    Rational amortized;
    Rational total_moved;
    Rational total_inserted;
    size_t audits_passed = 0, audits_failed = 0;
    std::vector<std::string> first_violations;
    bool ok = true;
};

inline long long opt_reference(const Scenario& sc, const std::vector<Item>& live);

inline RunResult run_scenario(const Scenario& sc,
                              const std::function<void(const MetricsRow&)>& sink = {}) {
    auto algo = make_algorithm(sc);
    RunResult res;
    std::vector<Item> live;
    std::unordered_map<ItemId, size_t> live_at;
    Rational worst;
    size_t steps = sc.max_steps == 0 ? sc.stream.size() : std::min(sc.max_steps, sc.stream.size());
    for (size_t i = 0; i < steps; ++i) {
        const Event& ev = sc.stream.events[i];
        algo->step(ev);
        if (ev.is_insert()) {
            live_at[ev.item.id] = live.size();
            live.push_back(ev.item);
        } else {
            size_t at = live_at.at(ev.item.id);
            live_at[live.back().id] = at;
            std::swap(live[at], live.back());
            live.pop_back();
            live_at.erase(ev.item.id);
        }

        MetricsRow row;
        row.step = i + 1;
        row.live = live.size();
        row.bins = algo->bins_used();
        row.opt_ref = opt_reference(sc, live);
        row.ratio = row.opt_ref > 0
                        ? static_cast<double>(row.bins) / static_cast<double>(row.opt_ref)
                        : 0.0;
        row.step_moved = algo->step_moved();
        row.cum_moved = algo->total_moved();
        Rational ins = algo->total_inserted();
        row.amortized = ins.is_zero() ? Rational(0) : row.cum_moved / ins;
        worst = max(worst, row.step_moved);
        row.worst_per_op = worst;
        res.max_ratio = std::max(res.max_ratio, row.ratio);
        if (sink) sink(row);
        res.rows.push_back(row);

        if (sc.audit_every > 0 && (i + 1) % sc.audit_every == 0) {
            auto bad = algo->audit();
            if (bad.empty()) {
                ++res.audits_passed;
            } else {
                ++res.audits_failed;
                if (res.first_violations.empty()) res.first_violations = bad;
                res.ok = false;
            }
            // cross-check the bins column against an independent recount
            if (algo->snapshot().bins_used() != row.bins) {
                ++res.audits_failed;
                res.first_violations.push_back("bins column does not match snapshot recount");
                res.ok = false;
            }
        }
    }
    {
        auto bad = algo->audit();
        if (bad.empty()) {
            ++res.audits_passed;
        } else {
            ++res.audits_failed;
            if (res.first_violations.empty()) res.first_violations = bad;
            res.ok = false;
        }
    }
    res.total_moved = algo->total_moved();
    res.total_inserted = algo->total_inserted();
    res.amortized =
        res.total_inserted.is_zero() ? Rational(0) : res.total_moved / res.total_inserted;
    return res;
}

inline long long opt_reference(const Scenario& sc, const std::vector<Item>& live) {
    if (live.empty()) return 0;
    switch (sc.opt_mode) {
        case OptMode::Exact:
            if (live.size() <= sc.exact_cap) {
                auto r = opt_exact(live);
                if (r.exact) return r.bins;
            }
            return volume_lower_bound(live);
        case OptMode::KnownFormula: {
            long long f = formula_opt(sc.stream.generator, live);
            if (f > 0) return f;
            return volume_lower_bound(live);
        }
        case OptMode::Volume:
        default:
            return volume_lower_bound(live);
    }
}

inline void write_metrics_csv(const RunResult& res, std::ostream& out) {
    out << "step,live,bins,opt_ref,ratio,step_moved,step_moved_dec,cum_moved,cum_moved_dec,"
           "amortized,amortized_dec,worst_per_op,worst_per_op_dec\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& r : res.rows) {
        out << r.step << ',' << r.live << ',' << r.bins << ',' << r.opt_ref << ',' << r.ratio
            << ',' << r.step_moved.to_string() << ',' << r.step_moved.to_double() << ','
            << r.cum_moved.to_string() << ',' << r.cum_moved.to_double() << ','
            << r.amortized.to_string() << ',' << r.amortized.to_double() << ','
            << r.worst_per_op.to_string() << ',' << r.worst_per_op.to_double() << "\n";
    }
    out << "# summary max_ratio=" << res.max_ratio
        << " amortized=" << res.amortized.to_string() << " (" << res.amortized.to_double()
        << ")"
        << " total_moved=" << res.total_moved.to_string()
        << " total_inserted=" << res.total_inserted.to_string()
        << " audits_passed=" << res.audits_passed << " audits_failed=" << res.audits_failed
        << " status=" << (res.ok ? "pass" : "fail") << "\n";
}

}  // namespace binpack
